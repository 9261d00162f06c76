"""Order parameter, winding numbers, phase slips and ensemble statistics.

The discrete order parameter is the staggered transverse field
A_j = (-1)^j (y_j + i z_j). The zigzag is the zone-edge mode of the chain,
so the staggering removes the lattice-scale alternation: a perfect planar
zigzag maps to a uniform A and winding 0, while an unstaggered y + iz would
register a spurious winding of +-N/2. Ions must be labelled by ascending x
around the ring; the labelling is fixed at initialization, never re-sorted,
and check_ring_order raises if ions ever pass each other.

The closed-form quench-scaling predictions (freeze-out scales, domain
counting, the tau_q^(-1/8) law for the mean absolute winding number) live
here as well, evaluated in natural units omega0 = a = 1 with mean-field
exponents nu = 1/2, z = 2 in the overdamped regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sp_stats

from .errors import ChainOrderError, IntegralityError
from .forces import ChainState
from .schedule import QuenchSchedule

__all__ = [
    "OrderSnapshot",
    "WindingTrace",
    "EnsembleStats",
    "RateStats",
    "PowerLawFit",
    "ScalingResult",
    "FreezeOutScales",
    "wrap_phase",
    "check_ring_order",
    "order_parameter",
    "winding_number",
    "phase_slip_events",
    "ensemble_stats",
    "fit_power_law",
    "kzm_predicted_mean_abs_w",
    "kzm_freeze_out",
    "sigma_w_from_domains",
]

#: |sum of wrapped differences / 2 pi - nearest integer| above this is an error
INTEGRALITY_TOL = 1e-9

#: default power-law fit window: ln(1/omega0 tau_q) at most this value
DEFAULT_WINDOW_MAX = -4.0


def wrap_phase(d):
    """Wrap angle differences into (-pi, pi], ties at +-pi broken toward +pi."""
    w = np.mod(np.asarray(d, dtype=float), 2.0 * np.pi)
    w = np.where(w > np.pi, w - 2.0 * np.pi, w)
    return w if w.ndim else float(w)


def check_ring_order(x: np.ndarray, box_length: float) -> None:
    """Require the stored ion order to be ascending in x around the ring.

    For coordinates wrapped into [0, C) the cyclic order is intact exactly
    when going j -> j+1 (mod N) decreases x exactly once (the seam).
    """
    x = np.asarray(x, dtype=float)
    descents = int(np.sum(np.roll(x, -1) <= x))
    if descents != 1:
        raise ChainOrderError(
            f"ion x-order violated: {descents} descents around the ring "
            "(expected exactly 1); ions passed each other or coincide")


@dataclass
class OrderSnapshot:
    """Per-ion order-parameter magnitude and phase at one instant.

    phase entries are NaN where the amplitude vanishes (the angle is
    undefined there); winding is filled in by winding_number.
    """

    time: float
    amplitude: np.ndarray
    phase: np.ndarray
    winding: int | None = None

    @classmethod
    def from_complex(cls, time: float, values: np.ndarray) -> "OrderSnapshot":
        amp = np.abs(values)
        phase = np.angle(values)
        phase[phase == -np.pi] = np.pi
        phase[amp == 0.0] = np.nan
        return cls(time, amp, phase)


@dataclass
class WindingTrace:
    """Stride-sampled order-parameter history of one trajectory."""

    seed_key: tuple
    schedule: QuenchSchedule | None
    snapshots: list[OrderSnapshot]
    final_winding: int

    def __post_init__(self) -> None:
        times = [s.time for s in self.snapshots]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("snapshots must be strictly increasing in time")

    def times(self) -> np.ndarray:
        return np.asarray([s.time for s in self.snapshots])

    def windings(self) -> np.ndarray:
        return np.asarray([s.winding for s in self.snapshots])


def order_parameter(state: ChainState) -> OrderSnapshot:
    """Staggered complex order parameter A_j = (-1)^j (y_j + i z_j)."""
    sign = 1.0 - 2.0 * (np.arange(state.n_ions) % 2)
    a = sign * (state.positions[:, 1] + 1j * state.positions[:, 2])
    return OrderSnapshot.from_complex(state.time, a)


def winding_number(snapshot: OrderSnapshot) -> int:
    """Net number of 2 pi phase turns around the ring.

    Sums wrapped phase differences between consecutive defined phases
    (undefined entries are skipped, so the difference is taken directly
    between their neighbours) including the ring-closure difference, and
    checks the result lands on an integer to INTEGRALITY_TOL.
    """
    ph = snapshot.phase[~np.isnan(snapshot.phase)]
    if ph.size < 2:
        return 0
    total = float(np.sum(wrap_phase(np.diff(ph)))
                  + wrap_phase(ph[0] - ph[-1])) / (2.0 * np.pi)
    w = round(total)
    residual = total - w
    if abs(residual) >= INTEGRALITY_TOL:
        raise IntegralityError(residual)
    return int(w)


def phase_slip_events(trace: WindingTrace,
                      amplitude_threshold: float | None = None
                      ) -> list[tuple[float, int]]:
    """Spacetime points where the order parameter pinches off locally.

    An event is an ion with |A_j| below the threshold while the chain
    average of |A| exceeds 3x the threshold, i.e. a localized zero after
    symmetry breaking (where the phase can slip by 2 pi). Detections of the
    same ion in consecutive snapshots merge into one event. The default
    threshold is 10% of the relaxed zigzag amplitude, estimated from the
    chain average of |A| in the final snapshot.
    """
    if not trace.snapshots:
        return []
    if amplitude_threshold is None:
        amplitude_threshold = 0.1 * float(np.mean(trace.snapshots[-1].amplitude))
    if amplitude_threshold <= 0:
        raise ValueError(f"threshold must be positive, got {amplitude_threshold}")
    events: list[tuple[float, int]] = []
    previous: set[int] = set()
    for snap in trace.snapshots:
        if float(np.mean(snap.amplitude)) <= 3.0 * amplitude_threshold:
            previous = set()
            continue
        current = set(np.flatnonzero(snap.amplitude < amplitude_threshold))
        events.extend((snap.time, int(j)) for j in sorted(current - previous))
        previous = current
    return events


@dataclass
class EnsembleStats:
    """Sample statistics of an integer winding-number multiset."""

    n_runs: int
    mean_w: float
    mean_abs_w: float
    sigma_w: float
    skewness: float
    se_abs_w: float
    histogram: dict[int, int]


def ensemble_stats(final_windings) -> EnsembleStats:
    """Mean |W|, sigma(W), skewness and histogram of final winding numbers."""
    ws = np.asarray(final_windings, dtype=int)
    if ws.size == 0:
        raise ValueError("need at least one winding-number sample")
    abs_w = np.abs(ws)
    sigma = float(np.std(ws))
    skew = float(sp_stats.skew(ws)) if sigma > 0 else 0.0
    se = float(np.std(abs_w, ddof=1) / math.sqrt(ws.size)) if ws.size > 1 else 0.0
    lo, hi = int(ws.min()), int(ws.max())
    counts = np.bincount(ws - lo, minlength=hi - lo + 1)
    histogram = {lo + k: int(c) for k, c in enumerate(counts)}
    return EnsembleStats(
        n_runs=int(ws.size),
        mean_w=float(ws.mean()),
        mean_abs_w=float(abs_w.mean()),
        sigma_w=sigma,
        skewness=skew,
        se_abs_w=se,
        histogram=histogram,
    )


@dataclass
class RateStats:
    """Ensemble statistics of one quench rate."""

    tau_q: float
    stats: EnsembleStats

    @property
    def ln_inv_rate(self) -> float:
        return -math.log(self.tau_q)

    @classmethod
    def from_windings(cls, tau_q: float, final_windings) -> "RateStats":
        return cls(tau_q, ensemble_stats(final_windings))


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares line on (ln(1/tau_q), ln<|W|>)."""

    exponent: float
    prefactor: float
    r_value: float
    window: tuple[float, float]
    n_points: int


@dataclass
class ScalingResult:
    """Per-rate ensemble records plus the fitted power law."""

    records: list[RateStats]
    fit: PowerLawFit | None = None


def fit_power_law(records: list[RateStats],
                  rate_window: tuple[float, float] = (-math.inf, DEFAULT_WINDOW_MAX)
                  ) -> PowerLawFit:
    """Fit <|W|> = prefactor * (1/tau_q)^exponent inside the rate window.

    Only records with ln(1/tau_q) inside the window and mean_abs_w > 0 are
    used; fewer than 3 usable points is an error. r_value is the Pearson
    correlation of the log-log points (0 when the response is constant).
    """
    lo, hi = rate_window
    pts = [(r.ln_inv_rate, math.log(r.stats.mean_abs_w))
           for r in records
           if r.stats.mean_abs_w > 0 and lo <= r.ln_inv_rate <= hi]
    if len(pts) < 3:
        raise ValueError(
            f"need at least 3 usable records in window {rate_window}, "
            f"got {len(pts)}")
    xs = np.asarray([p[0] for p in pts])
    ys = np.asarray([p[1] for p in pts])
    slope, intercept = np.polyfit(xs, ys, 1)
    if float(np.std(ys)) == 0.0:
        r = 0.0
    else:
        r = float(np.corrcoef(xs, ys)[0, 1])
    return PowerLawFit(
        exponent=float(slope),
        prefactor=float(math.exp(intercept)),
        r_value=r,
        window=(lo, hi),
        n_points=len(pts),
    )


def kzm_predicted_mean_abs_w(n_ions: float, eta: float, delta0: float,
                             tau_q: float) -> float:
    """Freeze-out prediction sqrt(N / 6 pi) * (eta * delta0 / tau_q)^(1/8).

    Evaluated verbatim in natural units omega0 = 1; no empirical correction
    factor is applied here (acceptance tooling reports the prediction to
    observation ratio separately).
    """
    if min(n_ions, eta, delta0, tau_q) <= 0:
        raise ValueError("all arguments must be positive")
    return math.sqrt(n_ions / (6.0 * math.pi)) * (eta * delta0 / tau_q) ** 0.125


@dataclass(frozen=True)
class FreezeOutScales:
    """Freeze-out time and the correlation length frozen in at that moment."""

    t_hat: float
    xi_hat: float

    @property
    def delta_hat(self) -> float:
        # control-parameter magnitude at the freeze-out instant
        return 1.0 / self.xi_hat**2


def kzm_freeze_out(eta: float, delta0: float, tau_q: float) -> FreezeOutScales:
    """Overdamped mean-field freeze-out scales for a linear quench.

    Matching the relaxation time eta/delta against the time to the crossing
    under delta(t) = delta0 t / tau_q gives t_hat = sqrt(eta tau_q / delta0);
    the frozen correlation length is xi_hat = 1/sqrt(delta(t_hat)) in units
    of a (with omega0 = 1).
    """
    if min(eta, delta0, tau_q) <= 0:
        raise ValueError("all arguments must be positive")
    t_hat = math.sqrt(eta * tau_q / delta0)
    delta_hat = delta0 * t_hat / tau_q
    return FreezeOutScales(t_hat=t_hat, xi_hat=1.0 / math.sqrt(delta_hat))


def sigma_w_from_domains(box_length: float, xi_hat: float) -> float:
    """Winding-number spread from C/xi_hat independent domain angles.

    Each domain picks its transverse plane uniformly in (-pi, pi]; the net
    phase accumulated around the ring is then a sum of C/xi_hat uniform
    angles, giving sigma(W) = (1/2 pi) sqrt(pi^2 C / (3 xi_hat)).
    """
    if box_length <= 0 or xi_hat <= 0:
        raise ValueError("all arguments must be positive")
    return math.sqrt(math.pi**2 * box_length / (3.0 * xi_hat)) / (2.0 * math.pi)
