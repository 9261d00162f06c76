"""Langevin time stepping for the ion ring.

One step is a symmetric splitting: deterministic half-kick, then an exact
damped free flight (the velocity follows the Ornstein-Uhlenbeck one-step
map, the position its time integral, with the correct correlated noise
pair), then another half-kick. With eta = kT = 0 the flight degenerates to
a free drift and the scheme is plain velocity Verlet. The exact exponential
treatment of friction keeps the step stable at strong laser cooling where
eta exceeds every trap frequency.

Noise is drawn from the thermostat's generator in a fixed (step, role,
component, ion) order, so a trajectory is bitwise reproducible for a given
seed no matter how the steps are batched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import IntegrationBlowupError, SingularityError
from .forces import ChainState, ForceField

__all__ = [
    "ThermostatParams",
    "OUCoefficients",
    "step",
    "advance",
    "thermalize",
    "kinetic_energy",
]

#: steps advanced per noise batch; any value gives identical trajectories
NOISE_CHUNK = 512


@dataclass
class ThermostatParams:
    """Friction, bath temperature and the per-trajectory random stream.

    The noise amplitude is tied to (eta, kT) by fluctuation-dissipation:
    the stationary velocity variance per degree of freedom is kT (m = 1).
    """

    eta: float
    kT: float
    rng: np.random.Generator

    def __post_init__(self) -> None:
        if self.eta < 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if self.kT < 0:
            raise ValueError(f"kT must be non-negative, got {self.kT}")

    @classmethod
    def seeded(cls, eta: float, kT: float, seed) -> "ThermostatParams":
        """Thermostat with a counter-based (Philox) stream for `seed`.

        `seed` may be an int or a numpy SeedSequence.
        """
        seq = seed if isinstance(seed, np.random.SeedSequence) \
            else np.random.SeedSequence(seed)
        return cls(eta, kT, np.random.Generator(np.random.Philox(seq)))


def _phi(u: float) -> float:
    """2u - 3 + 4 exp(-u) - exp(-2u), series-stabilized for small u."""
    if u < 0.01:
        return u**3 * (2.0 / 3.0 + u * (-0.5 + u * (7.0 / 30.0
                       + u * (-1.0 / 12.0 + u * 31.0 / 1260.0))))
    return 2.0 * u - 3.0 + 4.0 * math.exp(-u) - math.exp(-2.0 * u)


@dataclass(frozen=True)
class OUCoefficients:
    """One-step constants of the exact free Langevin flight over dt.

    v' = c v + sig_v g1,  x' = x + drift v + k1 g1 + k2 g2 with g1, g2
    independent standard normals; (k1, k2) is the Cholesky factor pairing
    the position noise with the velocity noise.
    """

    c: float
    drift: float
    sig_v: float
    k1: float
    k2: float

    @property
    def var_v(self) -> float:
        return self.sig_v**2

    @property
    def var_x(self) -> float:
        return self.k1**2 + self.k2**2

    @property
    def cov_xv(self) -> float:
        return self.k1 * self.sig_v

    @classmethod
    def compute(cls, eta: float, kT: float, dt: float) -> "OUCoefficients":
        if dt <= 0:
            raise ValueError(f"dt must be positive, got {dt}")
        if eta == 0.0:
            return cls(1.0, dt, 0.0, 0.0, 0.0)
        u = eta * dt
        c = math.exp(-u)
        one_minus_c = -math.expm1(-u)
        drift = one_minus_c / eta
        if kT == 0.0:
            return cls(c, drift, 0.0, 0.0, 0.0)
        var_v = kT * (-math.expm1(-2.0 * u))
        sig_v = math.sqrt(var_v)
        cov = kT * one_minus_c**2 / eta
        var_x = kT * _phi(u) / eta**2
        k1 = cov / sig_v
        k2 = math.sqrt(max(var_x - k1 * k1, 0.0))
        return cls(c, drift, sig_v, k1, k2)


def _advance_in_place(state: ChainState, thermostat: ThermostatParams,
                      nu2: np.ndarray, dt: float, step_offset: int = 0) -> None:
    """Advance len(nu2) - 1 steps, mutating `state`; nu2 holds the squared
    trap frequency at every step boundary."""
    n_steps = nu2.shape[0] - 1
    if n_steps <= 0:
        return
    n = state.n_ions
    box = state.box_length
    x = np.ascontiguousarray(state.positions[:, 0])
    y = np.ascontiguousarray(state.positions[:, 1])
    z = np.ascontiguousarray(state.positions[:, 2])
    vx = np.ascontiguousarray(state.velocities[:, 0])
    vy = np.ascontiguousarray(state.velocities[:, 1])
    vz = np.ascontiguousarray(state.velocities[:, 2])
    fx = np.empty(n)
    fy = np.empty(n)
    fz = np.empty(n)

    min_r2 = _kernels.coulomb_trap_forces(x, y, z, nu2[0], box, fx, fy, fz)
    if min_r2 < _kernels.R2_SINGULAR:
        raise SingularityError(
            f"coincident ions at step {step_offset}: "
            f"min pair distance {math.sqrt(min_r2):.3e}")

    ou = OUCoefficients.compute(thermostat.eta, thermostat.kT, dt)
    done = 0
    while done < n_steps:
        length = min(NOISE_CHUNK, n_steps - done)
        noise = thermostat.rng.standard_normal((length, 2, 3, n))
        status, s, min_r2 = _kernels.advance_chunk(
            x, y, z, vx, vy, vz, fx, fy, fz,
            nu2[done:done + length + 1], box, dt,
            ou.c, ou.drift, ou.sig_v, ou.k1, ou.k2, noise)
        if status == _kernels.STATUS_BLOWUP:
            raise IntegrationBlowupError(step_offset + done + s)
        if status == _kernels.STATUS_SINGULAR:
            raise SingularityError(
                f"coincident ions at step {step_offset + done + s}: "
                f"min pair distance {math.sqrt(min_r2):.3e}")
        done += length

    state.positions[:, 0] = x
    state.positions[:, 1] = y
    state.positions[:, 2] = z
    state.velocities[:, 0] = vx
    state.velocities[:, 1] = vy
    state.velocities[:, 2] = vz
    state.time += n_steps * dt


def step(state: ChainState, fld: ForceField, thermostat: ThermostatParams,
         dt: float) -> ChainState:
    """One timestep at fixed trap frequency; returns a new state."""
    new = state.copy()
    nu2 = np.full(2, fld.nu_t**2)
    _advance_in_place(new, thermostat, nu2, dt)
    return new


def advance(state: ChainState, fld: ForceField, thermostat: ThermostatParams,
            n_steps: int, dt: float) -> ChainState:
    """n_steps timesteps at fixed trap frequency; returns a new state."""
    if n_steps < 0:
        raise ValueError(f"n_steps must be non-negative, got {n_steps}")
    new = state.copy()
    nu2 = np.full(n_steps + 1, fld.nu_t**2)
    _advance_in_place(new, thermostat, nu2, dt)
    return new


def kinetic_energy(state: ChainState) -> float:
    """Total kinetic energy (m = 1)."""
    return 0.5 * float(np.sum(state.velocities**2))


def thermalize(state: ChainState, fld: ForceField, thermostat: ThermostatParams,
               n_steps: int, dt: float, sample_stride: int = 200
               ) -> tuple[ChainState, np.ndarray]:
    """Run n_steps at fixed trap frequency, sampling kinetic energy per DOF.

    Returns (final state, array of KE/DOF sampled every sample_stride steps);
    the series is the raw material for equipartition diagnostics.
    """
    if n_steps < 0:
        raise ValueError(f"n_steps must be non-negative, got {n_steps}")
    new = state.copy()
    dof = 3 * new.n_ions
    ke = []
    done = 0
    while done < n_steps:
        length = min(sample_stride, n_steps - done)
        nu2 = np.full(length + 1, fld.nu_t**2)
        _advance_in_place(new, thermostat, nu2, dt, step_offset=done)
        ke.append(kinetic_energy(new) / dof)
        done += length
    return new, np.asarray(ke)
