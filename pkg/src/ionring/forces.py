"""Potential energy and forces for N ions on a ring.

The ring is modelled as a box of length C = N a that is periodic along x
under the minimal-image convention; y and z are open transverse directions
confined by an isotropic harmonic trap of frequency nu_t. The Coulomb
repulsion 1/r is summed directly over all pairs, no cutoff and no
long-range correction: minimal image is exact for interactions out to C/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import SingularityError

__all__ = [
    "ChainState",
    "ForceField",
    "pair_distance",
    "potential_energy",
    "total_forces",
    "transverse_hessian",
    "zigzag_instability_frequency",
]


@dataclass
class ChainState:
    """Positions and velocities of N ions at one simulation time.

    positions[:, 0] is stored wrapped into [0, box_length); transverse
    coordinates are unbounded. Velocities are in units of a*omega0.
    """

    time: float
    box_length: float
    positions: np.ndarray
    velocities: np.ndarray

    def __post_init__(self) -> None:
        self.positions = np.ascontiguousarray(self.positions, dtype=np.float64)
        self.velocities = np.ascontiguousarray(self.velocities, dtype=np.float64)
        if self.positions.shape != self.velocities.shape or self.positions.ndim != 2 \
                or self.positions.shape[1] != 3:
            raise ValueError(
                f"positions and velocities must both be (N, 3), got "
                f"{self.positions.shape} and {self.velocities.shape}"
            )
        if self.box_length <= 0:
            raise ValueError(f"box_length must be positive, got {self.box_length}")
        self.positions[:, 0] %= self.box_length

    @property
    def n_ions(self) -> int:
        return self.positions.shape[0]

    def copy(self) -> "ChainState":
        return ChainState(self.time, self.box_length,
                          self.positions.copy(), self.velocities.copy())

    @classmethod
    def linear_chain(cls, n_ions: int, spacing: float = 1.0) -> "ChainState":
        """Equally spaced on-axis ions at rest: x_j = j*a, y = z = 0."""
        pos = np.zeros((n_ions, 3))
        pos[:, 0] = spacing * np.arange(n_ions)
        return cls(0.0, spacing * n_ions, pos, np.zeros((n_ions, 3)))


@dataclass(frozen=True)
class ForceField:
    """Transverse trap frequency and ring length defining the potential."""

    nu_t: float
    box_length: float

    def __post_init__(self) -> None:
        if self.nu_t <= 0:
            raise ValueError(f"nu_t must be positive, got {self.nu_t}")
        if self.box_length <= 0:
            raise ValueError(f"box_length must be positive, got {self.box_length}")


def pair_distance(r_i, r_j, box_length: float) -> float:
    """Separation of two ions with x taken through the minimal image.

    Transverse coordinates are not wrapped. Raises SingularityError on
    coincident points.
    """
    if box_length <= 0:
        raise ValueError(f"box_length must be positive, got {box_length}")
    dx = float(r_i[0]) - float(r_j[0])
    dx -= box_length * round(dx / box_length)
    dy = float(r_i[1]) - float(r_j[1])
    dz = float(r_i[2]) - float(r_j[2])
    d = math.sqrt(dx * dx + dy * dy + dz * dz)
    if d * d < _kernels.R2_SINGULAR:
        raise SingularityError(f"coincident ions: |r_i - r_j| = {d:.3e}")
    return d


def _soa(state: ChainState):
    p = state.positions
    return (np.ascontiguousarray(p[:, 0]), np.ascontiguousarray(p[:, 1]),
            np.ascontiguousarray(p[:, 2]))


def potential_energy(state: ChainState, fld: ForceField) -> float:
    """Trap energy plus pair Coulomb energy, each unordered pair once."""
    x, y, z = _soa(state)
    energy, min_r2 = _kernels.potential_energy_kernel(
        x, y, z, fld.nu_t**2, fld.box_length)
    if min_r2 < _kernels.R2_SINGULAR:
        raise SingularityError(
            f"coincident ions: min pair distance {math.sqrt(min_r2):.3e}")
    return float(energy)


def total_forces(state: ChainState, fld: ForceField) -> np.ndarray:
    """Negative gradient of potential_energy, shape (N, 3).

    Coulomb forces are accumulated in a fixed row-major pair order, so the
    result is deterministic down to the last bit for a given input.
    """
    x, y, z = _soa(state)
    n = state.n_ions
    fx = np.empty(n)
    fy = np.empty(n)
    fz = np.empty(n)
    min_r2 = _kernels.coulomb_trap_forces(
        x, y, z, fld.nu_t**2, fld.box_length, fx, fy, fz)
    if min_r2 < _kernels.R2_SINGULAR:
        raise SingularityError(
            f"coincident ions: min pair distance {math.sqrt(min_r2):.3e}")
    return np.stack([fx, fy, fz], axis=1)


def transverse_hessian(n_ions: int, nu_t: float, spacing: float = 1.0) -> np.ndarray:
    """Hessian of one transverse block about the equally spaced on-axis ring.

    The y and z blocks are identical and decouple from x at the linear
    configuration, so H_jk = nu_t^2 delta_jk + d^2/dy_j dy_k of the Coulomb
    sum with on-axis minimal-image distances d = min(|j-k|, N-|j-k|) * a.
    """
    if n_ions < 2:
        raise ValueError("need at least 2 ions")
    sep = np.arange(n_ions)
    d = spacing * np.minimum(sep, n_ions - sep).astype(float)
    inv_d3 = np.zeros(n_ions)
    inv_d3[1:] = 1.0 / d[1:] ** 3
    h = np.empty((n_ions, n_ions))
    for j in range(n_ions):
        h[j] = np.roll(inv_d3, j)
    np.fill_diagonal(h, nu_t**2 - inv_d3.sum())
    return h


def zigzag_instability_frequency(n_ions: int, lo: float = 1.0, hi: float = 3.0,
                                 tol: float = 1e-10) -> float:
    """Trap frequency where the smallest transverse Hessian eigenvalue
    changes sign, located by bisection.

    Converges to critical_frequency() from below as N grows (the minimal
    image truncates the odd-n lattice sum at N/2).
    """
    def min_eig(nu):
        return float(np.linalg.eigvalsh(transverse_hessian(n_ions, nu))[0])

    f_lo, f_hi = min_eig(lo), min_eig(hi)
    if f_lo >= 0 or f_hi <= 0:
        raise ValueError(
            f"bracket [{lo}, {hi}] does not straddle the instability "
            f"(min eigenvalues {f_lo:.3g}, {f_hi:.3g})")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if min_eig(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
