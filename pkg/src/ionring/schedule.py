"""Three-phase quench protocol for the transverse trap frequency.

The trap frequency sits at nu_start while the chain thermalizes, falls
linearly to nu_end over tau_q, then stays at nu_end while the chain
relaxes. The control parameter of the transition is delta = nu_t^2 - nu_c^2;
the effective linear quench amplitude delta0 = |2 nu_start (nu_end -
nu_start)| is the linearization of delta(t) at the start of the ramp, the
convention every scaling comparison in this package uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .units import critical_frequency

__all__ = [
    "QuenchSchedule",
    "nu_t",
    "delta",
    "delta0",
    "delta0_at_critical",
    "critical_crossing_time",
]

# default phase durations: 4e4 and 8e4 steps at the default dt = 0.01
DEFAULT_T_THERMALIZE = 400.0
DEFAULT_T_RELAX = 800.0


@dataclass(frozen=True)
class QuenchSchedule:
    """Endpoints and durations of thermalize / ramp / relax, in 1/omega0."""

    nu_start: float
    nu_end: float
    tau_q: float
    t_thermalize: float = DEFAULT_T_THERMALIZE
    t_relax: float = DEFAULT_T_RELAX

    def __post_init__(self) -> None:
        if self.nu_start <= 0 or self.nu_end <= 0:
            raise ValueError("trap frequencies must be positive")
        if self.nu_end > self.nu_start:
            raise ValueError(
                f"ramp must not increase the frequency: nu_start={self.nu_start} "
                f"< nu_end={self.nu_end}")
        if self.tau_q <= 0:
            raise ValueError(f"tau_q must be positive, got {self.tau_q}")
        if self.t_thermalize < 0 or self.t_relax < 0:
            raise ValueError("phase durations must be non-negative")

    @property
    def t_ramp_start(self) -> float:
        return self.t_thermalize

    @property
    def t_ramp_end(self) -> float:
        return self.t_thermalize + self.tau_q

    @property
    def total_time(self) -> float:
        return self.t_thermalize + self.tau_q + self.t_relax

    def crosses_critical(self) -> bool:
        nu_c = critical_frequency()
        return self.nu_start > nu_c > self.nu_end


def nu_t(schedule: QuenchSchedule, t):
    """Trap frequency at time t (measured from trajectory start).

    Piecewise linear and continuous: nu_start during thermalization, the
    linear ramp in between, nu_end afterwards. Accepts scalars or arrays.
    """
    s = (np.asarray(t, dtype=float) - schedule.t_ramp_start) / schedule.tau_q
    s = np.clip(s, 0.0, 1.0)
    out = schedule.nu_start + (schedule.nu_end - schedule.nu_start) * s
    return out if out.ndim else float(out)


def delta(schedule: QuenchSchedule, t):
    """Control parameter nu_t(t)^2 - nu_c^2; negative past the crossing."""
    nu = np.asarray(nu_t(schedule, t))
    out = nu**2 - critical_frequency() ** 2
    return out if out.ndim else float(out)


def delta0(schedule: QuenchSchedule) -> float:
    """Effective quench amplitude |2 nu_start (nu_end - nu_start)|.

    Equals |d(nu_t^2)/dt| * tau_q with the rate linearized at the start of
    the ramp. Zero when the schedule does not ramp at all.
    """
    return abs(2.0 * schedule.nu_start * (schedule.nu_end - schedule.nu_start))


def delta0_at_critical(schedule: QuenchSchedule) -> float:
    """Alternative amplitude convention with the rate taken at nu_c.

    |d(delta)/dt| * tau_q evaluated at the critical crossing instead of at
    nu_start; emitted alongside delta0 in run metadata so the two
    conventions can be compared downstream.
    """
    slope = (schedule.nu_start - schedule.nu_end) / schedule.tau_q
    return 2.0 * critical_frequency() * slope * schedule.tau_q


def critical_crossing_time(schedule: QuenchSchedule) -> float:
    """Unique time in the ramp where nu_t equals the critical frequency."""
    nu_c = critical_frequency()
    if not (schedule.nu_start >= nu_c >= schedule.nu_end):
        raise ValueError(
            f"schedule does not cross the critical point: "
            f"nu_start={schedule.nu_start}, nu_end={schedule.nu_end}, "
            f"nu_c={nu_c:.6f}")
    if schedule.nu_start == schedule.nu_end:
        return schedule.t_ramp_start
    frac = (schedule.nu_start - nu_c) / (schedule.nu_start - schedule.nu_end)
    return schedule.t_ramp_start + schedule.tau_q * frac
