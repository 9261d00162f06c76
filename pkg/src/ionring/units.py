"""Natural units, model constants and the structural critical point.

Everything downstream works in natural units: ion mass m = 1, Coulomb
coupling e^2/(4 pi eps0) = 1, lattice spacing a = 1, so the characteristic
frequency omega0 = sqrt(coupling / (m a^3)) = 1. Frequencies are quoted in
omega0, times in 1/omega0, energies in m omega0^2 a^2. Conversion to SI is
a presentation concern and deliberately lives outside this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import zeta

__all__ = [
    "NaturalUnits",
    "SimParams",
    "characteristic_frequency",
    "critical_frequency",
    "check_stability",
]

#: Upper bound on dt * max(nu_t, eta) for the splitting to stay stable.
STABILITY_LIMIT = 0.5


def characteristic_frequency(mass: float, charge_coupling: float, spacing: float) -> float:
    """Frequency scale sqrt(charge_coupling / (mass * spacing^3)).

    This is the rate set by comparing the Coulomb energy of neighbouring
    ions with the inertial scale of the chain; it equals 1 in default
    natural units.
    """
    if mass <= 0 or charge_coupling <= 0 or spacing <= 0:
        raise ValueError(
            f"all arguments must be positive, got mass={mass}, "
            f"charge_coupling={charge_coupling}, spacing={spacing}"
        )
    return math.sqrt(charge_coupling / (mass * spacing**3))


def critical_frequency() -> float:
    """Transverse confinement at which the linear chain loses stability.

    Returns sqrt(7 zeta(3) / 2) ~= 2.0511 in units of omega0. Above this
    the straight chain is the ground state; below it the zigzag mode goes
    soft and the chain buckles off axis.
    """
    return math.sqrt(7.0 * float(zeta(3)) / 2.0)


def check_stability(dt: float, eta: float, nu_t: float) -> None:
    """Raise if the timestep is too coarse for the fastest rate present."""
    if dt * max(nu_t, eta) >= STABILITY_LIMIT:
        raise ValueError(
            f"dt={dt} too large: dt * max(nu_t={nu_t}, eta={eta}) must stay "
            f"below {STABILITY_LIMIT}"
        )


@dataclass(frozen=True)
class NaturalUnits:
    """Base quantities of the unit system (defaults define natural units)."""

    mass: float = 1.0
    charge_coupling: float = 1.0
    spacing: float = 1.0

    @property
    def omega0(self) -> float:
        return characteristic_frequency(self.mass, self.charge_coupling, self.spacing)


@dataclass(frozen=True)
class SimParams:
    """Physical and numerical knobs of one simulation, in natural units.

    n_ions must be even: the staggered order parameter (-1)^j is not
    single-valued on an odd periodic ring.
    """

    n_ions: int
    eta: float
    kT: float
    dt: float
    seed: int

    def __post_init__(self) -> None:
        if self.n_ions <= 0 or self.n_ions % 2 != 0:
            raise ValueError(f"n_ions must be a positive even integer, got {self.n_ions}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.eta < 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if self.kT < 0:
            raise ValueError(f"kT must be non-negative, got {self.kT}")
        check_stability(self.dt, self.eta, 0.0)

    def check_stability(self, nu_t: float) -> None:
        """Stability guard including the largest trap frequency to be used."""
        check_stability(self.dt, self.eta, nu_t)
