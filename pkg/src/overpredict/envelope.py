"""Bandlimited envelopes of a sampled signal.

An upper envelope of bandwidth ``L`` is a degree-``L`` trigonometric
polynomial lying on or above the signal at every constraint-grid point.
Each scheme picks the envelope that is closest to the signal in its own
sense:

* ``L1``        minimises the lift of the constant term, ``b0 - a0``;
* ``L2``        minimises the squared coefficient distance plus tail energy;
* ``LINF``      minimises the real-basis coefficient deviation
                ``|db0| + sum(|dalpha_k| + |dbeta_k|)``;
* ``NAIVE``     projection lifted by the sup-norm of the residual;
* ``LINF_EXACT`` minimises the grid sup-distance itself (used as the
                optimum when comparing against the naive scheme).

Lower envelopes are ``-upper(-f)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import signal as sig
from .errors import GridTooCoarse
from .signal import FourierCoeffs, TimeSeries
from .solver import (
    FlopCounter,
    LeastDistanceQP,
    LinearProgram,
    SolveReport,
    solve_ldqp,
    solve_lp,
)

__all__ = [
    "Scheme",
    "Side",
    "EnvelopeResult",
    "default_grid_size",
    "envelope",
    "envelope_l1",
    "envelope_l2",
    "envelope_linf",
    "envelope_linf_exact",
    "envelope_naive",
    "envelope_lower",
    "scheme_cost",
    "c0_tail_bound",
]

ENVELOPE_TOL = 1e-10
VERIFICATION_FACTOR = 4
MIN_GRID_PER_COEFF = 16


class Scheme(str, enum.Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"
    NAIVE = "naive"
    LINF_EXACT = "linf_exact"


class Side(str, enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class EnvelopeResult:
    """Envelope coefficients plus feasibility and solver diagnostics.

    ``min_margin`` is the smallest gap on the constraint grid measured on
    the feasible side (``env - f`` for upper, ``f - env`` for lower);
    ``verification_margin`` is the same quantity on a grid
    ``verification_factor`` times finer.
    """

    coeffs: FourierCoeffs
    scheme: Scheme
    side: Side
    objective: float
    min_margin: float
    verification_margin: float
    grid_size: int
    signal_coeffs: FourierCoeffs
    iterations: int = 0
    flops: int = 0
    solve: SolveReport | None = None

    @property
    def L(self) -> int:
        return self.coeffs.L

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme.value,
            "side": self.side.value,
            "L": self.L,
            "a0": self.coeffs.a0,
            "alpha": self.coeffs.alpha.tolist(),
            "beta": self.coeffs.beta.tolist(),
            "objective": self.objective,
            "min_margin": self.min_margin,
            "verification_margin": self.verification_margin,
            "grid_size": self.grid_size,
            "iterations": self.iterations,
            "flops": self.flops,
        }


def default_grid_size(L: int) -> int:
    """``max(1024, 32 (2L+1))`` rounded up to a power of two.

    Powers of two divide the default sample count, which keeps resampling
    an exact subsampling.
    """
    need = max(1024, 32 * (2 * L + 1))
    return 1 << (need - 1).bit_length()


# helpers ------------------------------------------------------------------


def _prepare(ts, L, grid_size):
    if grid_size is None:
        grid_size = default_grid_size(L)
    if grid_size < MIN_GRID_PER_COEFF * (2 * L + 1):
        raise GridTooCoarse(
            f"grid_size {grid_size} < {MIN_GRID_PER_COEFF}*(2L+1) = "
            f"{MIN_GRID_PER_COEFF * (2 * L + 1)}"
        )
    f_grid = sig.resample(ts, grid_size)
    a = sig.analyze(f_grid, L)
    return grid_size, f_grid, a


def _tail_energy(f_grid, a):
    resid = f_grid.samples - sig.synthesize(a, f_grid.n).samples
    return float(np.mean(resid ** 2))


def _l2_weights(L):
    # sum_{|k|<=L} |b[k]-a[k]|^2 in the real basis
    return np.concatenate([[1.0], np.full(2 * L, 0.5)])


def scheme_cost(scheme, coeffs: FourierCoeffs, ts: TimeSeries, grid_size: int) -> float:
    """Cost of an arbitrary envelope ``coeffs`` in the metric of ``scheme``.

    Uses the same conventions as the ``objective`` reported by the
    corresponding envelope function, so it can score a feasible witness
    (e.g. the naive envelope) against an optimum.
    """
    scheme = Scheme(scheme)
    f_grid = sig.resample(ts, grid_size)
    a = sig.analyze(f_grid, coeffs.L)
    diff = coeffs.as_vector() - a.as_vector()
    if scheme is Scheme.L1:
        return float(diff[0])
    if scheme is Scheme.L2:
        return float(_l2_weights(coeffs.L) @ diff ** 2) + _tail_energy(f_grid, a)
    if scheme in (Scheme.LINF, Scheme.NAIVE):
        return float(np.sum(np.abs(diff)))
    env = sig.synthesize(coeffs, grid_size).samples
    return float(np.max(np.abs(env - f_grid.samples)))


def _finish(coeffs, scheme, objective, f_grid, ts, a, factor, report=None, flops=0):
    env = sig.synthesize(coeffs, f_grid.n).samples
    min_margin = float(np.min(env - f_grid.samples))
    fine = f_grid.n * factor
    env_fine = sig.synthesize(coeffs, fine).samples
    verification_margin = float(np.min(env_fine - sig.resample(ts, fine).samples))
    return EnvelopeResult(
        coeffs=coeffs,
        scheme=scheme,
        side=Side.UPPER,
        objective=float(objective),
        min_margin=min_margin,
        verification_margin=verification_margin,
        grid_size=f_grid.n,
        signal_coeffs=a,
        iterations=report.iterations if report is not None else 0,
        flops=flops,
        solve=report,
    )


def _analysis_flops(n, L):
    # direct DFT of 2L+1 coefficients plus one synthesis pass
    return 4 * n * (2 * L + 1)


# upper envelopes ------------------------------------------------------------


def envelope_l1(ts, L, grid_size=None, delta=0.0, verification_factor=VERIFICATION_FACTOR):
    """Envelope minimising ``integral(env - f) = b0 - a0``."""
    grid_size, f_grid, a = _prepare(ts, L, grid_size)
    Phi = sig.basis_matrix(L, f_grid.times)
    cost = np.zeros(2 * L + 1)
    cost[0] = 1.0
    counter = FlopCounter()
    counter.add(_analysis_flops(grid_size, L))
    report = solve_lp(LinearProgram(cost, Phi, f_grid.samples + delta), ENVELOPE_TOL, counter=counter)
    b = FourierCoeffs.from_vector(report.x)
    return _finish(b, Scheme.L1, b.a0 - a.a0, f_grid, ts, a, verification_factor, report, counter.count)


def envelope_l2(ts, L, grid_size=None, delta=0.0, verification_factor=VERIFICATION_FACTOR):
    """Envelope minimising ``integral (env - f)**2``.

    In the real basis the in-band distance is a weighted Euclidean norm,
    so the problem becomes a least-distance QP after scaling each
    variable by the square root of its weight.
    """
    grid_size, f_grid, a = _prepare(ts, L, grid_size)
    Phi = sig.basis_matrix(L, f_grid.times)
    root_w = np.sqrt(_l2_weights(L))
    counter = FlopCounter()
    counter.add(_analysis_flops(grid_size, L))
    qp = LeastDistanceQP(root_w * a.as_vector(), Phi / root_w, f_grid.samples + delta)
    report = solve_ldqp(qp, ENVELOPE_TOL, counter=counter)
    b = FourierCoeffs.from_vector(report.x / root_w)
    objective = report.objective + _tail_energy(f_grid, a)
    return _finish(b, Scheme.L2, objective, f_grid, ts, a, verification_factor, report, counter.count)


def envelope_linf(ts, L, grid_size=None, delta=0.0, verification_factor=VERIFICATION_FACTOR):
    """Envelope minimising the real-basis coefficient deviation.

    Variables are ``(b, u)`` with ``u >= |b - a|`` componentwise.  Per
    harmonic, ``|dalpha| + |dbeta|`` is at most ``sqrt(2)`` times the
    complex-modulus deviation ``2 |b[k] - a[k]|``.  The tail of ``f`` is
    not included in ``objective``.
    """
    grid_size, f_grid, a = _prepare(ts, L, grid_size)
    d = 2 * L + 1
    Phi = sig.basis_matrix(L, f_grid.times)
    eye = np.eye(d)
    A = np.block([
        [Phi, np.zeros((grid_size, d))],
        [-eye, eye],
        [eye, eye],
    ])
    av = a.as_vector()
    lower = np.concatenate([f_grid.samples + delta, -av, av])
    cost = np.concatenate([np.zeros(d), np.ones(d)])
    counter = FlopCounter()
    counter.add(_analysis_flops(grid_size, L))
    report = solve_lp(LinearProgram(cost, A, lower), ENVELOPE_TOL, counter=counter)
    b = FourierCoeffs.from_vector(report.x[:d])
    objective = float(np.sum(np.abs(b.as_vector() - av)))
    return _finish(b, Scheme.LINF, objective, f_grid, ts, a, verification_factor, report, counter.count)


def envelope_linf_exact(ts, L, grid_size=None, delta=0.0, verification_factor=VERIFICATION_FACTOR):
    """Envelope minimising ``max_grid (env - f)`` exactly."""
    grid_size, f_grid, a = _prepare(ts, L, grid_size)
    d = 2 * L + 1
    Phi = sig.basis_matrix(L, f_grid.times)
    ones = np.ones((grid_size, 1))
    A = np.block([[Phi, np.zeros((grid_size, 1))], [-Phi, ones]])
    lower = np.concatenate([f_grid.samples + delta, -f_grid.samples])
    cost = np.zeros(d + 1)
    cost[-1] = 1.0
    counter = FlopCounter()
    counter.add(_analysis_flops(grid_size, L))
    report = solve_lp(LinearProgram(cost, A, lower), ENVELOPE_TOL, counter=counter)
    b = FourierCoeffs.from_vector(report.x[:d])
    env = sig.synthesize(b, grid_size).samples
    objective = float(np.max(env - f_grid.samples))
    return _finish(b, Scheme.LINF_EXACT, objective, f_grid, ts, a, verification_factor, report, counter.count)


def envelope_naive(ts, L, grid_size=None, delta=0.0, verification_factor=VERIFICATION_FACTOR):
    """Projection plus the constant ``C0 = max |f - proj|``; objective is ``C0``."""
    grid_size, f_grid, a = _prepare(ts, L, grid_size)
    resid = f_grid.samples - sig.synthesize(a, grid_size).samples
    c0 = float(np.max(np.abs(resid)))
    b = FourierCoeffs(a.a0 + c0 + delta, a.alpha, a.beta)
    flops = _analysis_flops(grid_size, L) + 2 * grid_size
    return _finish(b, Scheme.NAIVE, c0, f_grid, ts, a, verification_factor, flops=flops)


_UPPER = {
    Scheme.L1: envelope_l1,
    Scheme.L2: envelope_l2,
    Scheme.LINF: envelope_linf,
    Scheme.NAIVE: envelope_naive,
    Scheme.LINF_EXACT: envelope_linf_exact,
}


def envelope_lower(ts, L, grid_size=None, scheme=Scheme.L1, delta=0.0,
                   verification_factor=VERIFICATION_FACTOR) -> EnvelopeResult:
    """Lower envelope, computed as ``-upper(-f)``."""
    up = _UPPER[Scheme(scheme)](-ts, L, grid_size, delta, verification_factor)
    return EnvelopeResult(
        coeffs=-up.coeffs,
        scheme=up.scheme,
        side=Side.LOWER,
        objective=up.objective,
        min_margin=up.min_margin,
        verification_margin=up.verification_margin,
        grid_size=up.grid_size,
        signal_coeffs=-up.signal_coeffs,
        iterations=up.iterations,
        flops=up.flops,
        solve=up.solve,
    )


def envelope(ts, L, scheme=Scheme.L1, side=Side.UPPER, grid_size=None, delta=0.0,
             verification_factor=VERIFICATION_FACTOR) -> EnvelopeResult:
    scheme = Scheme(scheme)
    if Side(side) is Side.LOWER:
        return envelope_lower(ts, L, grid_size, scheme, delta, verification_factor)
    return _UPPER[scheme](ts, L, grid_size, delta, verification_factor)


def c0_tail_bound(C: float, r: float, L: int, terms: int = 100_000) -> float:
    """Upper bound on ``2 C sum_{k>L} k**-r``.

    The first ``terms`` summands are added explicitly and the remainder is
    bounded by ``integral_K^inf x**-r dx``.
    """
    if not r > 1:
        raise ValueError("tail sum diverges for r <= 1")
    k = np.arange(L + 1, L + 1 + terms, dtype=float)
    K = L + terms
    partial = float(np.sum(k[::-1] ** -r))
    remainder = K ** (1.0 - r) / (r - 1.0)
    return 2.0 * C * (partial + remainder)
