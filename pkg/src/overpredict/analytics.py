"""Cloud-side aggregation, signal analytics and error metrics."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import signal as sig
from .envelope import EnvelopeResult, Scheme, Side, envelope
from .errors import MixedBandwidths, MixedSides
from .signal import FourierCoeffs, TimeSeries

__all__ = [
    "SumEnvelope",
    "AnalyticsReport",
    "SAErrors",
    "Metric",
    "aggregate",
    "analyze_sum",
    "signal_analytics",
    "sa_errors",
    "table1_bound",
    "theorem1_ratio",
    "OPTIMAL_SCHEME",
]


class Metric(str, enum.Enum):
    Q1 = "1"
    Q2 = "2"
    QINF = "inf"


# scheme whose envelope attains the optimal SA_q for a single device
OPTIMAL_SCHEME = {
    Metric.Q1: Scheme.L1,
    Metric.Q2: Scheme.L2,
    Metric.QINF: Scheme.LINF_EXACT,
}


@dataclass(frozen=True)
class SumEnvelope:
    coeffs: FourierCoeffs
    device_count: int
    side: Side = Side.UPPER

    def to_dict(self) -> dict:
        return {
            "L": self.coeffs.L,
            "device_count": self.device_count,
            "side": self.side.value,
            "a0": self.coeffs.a0,
            "alpha": self.coeffs.alpha.tolist(),
            "beta": self.coeffs.beta.tolist(),
        }


@dataclass(frozen=True)
class AnalyticsReport:
    max_value: float
    min_value: float
    avg_value: float
    t_max: float

    def to_dict(self) -> dict:
        return dict(
            max_value=self.max_value,
            min_value=self.min_value,
            avg_value=self.avg_value,
            t_max=self.t_max,
        )


@dataclass(frozen=True)
class SAErrors:
    """``sa2`` is the integral of the squared gap, not its square root."""

    sa1: float
    sa2: float
    sa_inf: float

    def to_dict(self) -> dict:
        return dict(sa1=self.sa1, sa2=self.sa2, sa_inf=self.sa_inf)

    def get(self, q) -> float:
        return {Metric.Q1: self.sa1, Metric.Q2: self.sa2, Metric.QINF: self.sa_inf}[_metric(q)]


def _metric(q) -> Metric:
    if isinstance(q, Metric):
        return q
    text = str(q).lower()
    if text in ("inf", "infinity", "linf", "∞"):
        return Metric.QINF
    return Metric(text)


def aggregate(envelopes: Sequence[EnvelopeResult]) -> SumEnvelope:
    """Coefficient-wise sum of device envelopes, in the order given."""
    if not envelopes:
        raise ValueError("need at least one envelope")
    Ls = {e.L for e in envelopes}
    if len(Ls) > 1:
        raise MixedBandwidths(f"envelopes have bandwidths {sorted(Ls)}")
    sides = {e.side for e in envelopes}
    if len(sides) > 1:
        raise MixedSides("cannot add upper and lower envelopes")
    total = envelopes[0].coeffs
    for e in envelopes[1:]:
        total = total + e.coeffs
    return SumEnvelope(total, len(envelopes), sides.pop())


def signal_analytics(ts: TimeSeries) -> AnalyticsReport:
    """Grid max/min/mean; ``t_max`` is the earliest grid time at the max."""
    x = ts.samples
    i = int(np.argmax(x))
    return AnalyticsReport(float(x[i]), float(x.min()), float(x.mean()), i / ts.n)


def analyze_sum(se: SumEnvelope, grid_size: int) -> AnalyticsReport:
    return signal_analytics(sig.synthesize(se.coeffs, grid_size))


def sa_errors(s_hat: TimeSeries, s: TimeSeries) -> SAErrors:
    if s_hat.n != s.n:
        raise ValueError("s_hat and s must share a grid")
    gap = np.abs(s_hat.samples - s.samples)
    return SAErrors(float(gap.mean()), float(np.mean(gap * gap)), float(gap.max()))


def table1_bound(q, r: float, L: int, side: str = "naive") -> float:
    """Closed-form error bounds for unit-amplitude coefficient decay ``k**-r``.

    ``side`` is ``"naive"`` (evaluated at ``L``) or ``"optimal"`` (at
    ``L + 1``).  For ``q = 1`` only the naive side has a closed form, the
    tail sum ``sum_{|k|>L} |k|**-r``.
    """
    q = _metric(q)
    if side not in ("naive", "optimal"):
        raise ValueError("side must be 'naive' or 'optimal'")
    n = L if side == "naive" else L + 1
    if n < 1:
        raise ValueError("bandwidth too small for the closed form")
    if q is Metric.Q1:
        if side == "optimal":
            raise ValueError("the optimal SA_1 has no closed form; it is b[0] - a[0]")
        from .envelope import c0_tail_bound

        return c0_tail_bound(1.0, r, L)
    e = 2.0 * r - 1.0 if q is Metric.Q2 else r - 1.0
    if not e > 0:
        raise ValueError(f"bound requires a positive exponent, got {e}")
    return 2.0 / (e * n ** e)


def theorem1_ratio(ts: TimeSeries, L: int, q, grid_size: int | None = None) -> float:
    """``SA'_q / SA_q`` for one device: naive error over the optimal one.

    Both errors are measured on the constraint grid.  When both vanish the
    ratio is 1 by convention.
    """
    q = _metric(q)
    naive = envelope(ts, L, Scheme.NAIVE, grid_size=grid_size)
    best = envelope(ts, L, OPTIMAL_SCHEME[q], grid_size=grid_size)
    n = naive.grid_size
    f = sig.resample(ts, n)
    e_naive = sa_errors(sig.synthesize(naive.coeffs, n), f).get(q)
    e_best = sa_errors(sig.synthesize(best.coeffs, n), f).get(q)
    if e_best <= 1e-14:
        return 1.0 if e_naive <= 1e-12 else float("inf")
    return e_naive / e_best
