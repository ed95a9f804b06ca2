"""Periodic signals on [0, 1] and their trigonometric representations.

A :class:`TimeSeries` holds samples on the uniform periodic grid
``t_n = n / N``.  A :class:`FourierCoeffs` holds a degree-``L`` real
trigonometric polynomial

    f(t) = a0 + sum_k alpha_k cos(2 pi k t) + beta_k sin(2 pi k t)

which is the representation the solvers work in.  The complex view
``c[k], k = -L..L`` is derived on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BandwidthExceedsSamples,
    InvalidDecay,
    NonHermitianCoefficients,
    NotPeriodized,
)

__all__ = [
    "TimeSeries",
    "FourierCoeffs",
    "SmoothSignalSpec",
    "analyze",
    "synthesize",
    "project",
    "resample",
    "evaluate",
    "basis_matrix",
    "smooth_coeffs",
    "generate_smooth",
    "norms",
    "HERMITIAN_TOL",
]

HERMITIAN_TOL = 1e-10


def _frozen(values, ndim=1):
    arr = np.array(values, dtype=float, copy=True)
    if arr.ndim != ndim:
        arr = arr.reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled real signal on the periodic grid ``n / N``.

    ``ramp`` is the linear trend removed during periodization and
    ``scale`` the amplitude normalization applied at ingestion; both are
    kept only for reporting.
    """

    samples: np.ndarray
    periodic: bool = True
    ramp: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        arr = _frozen(self.samples)
        if arr.size < 2:
            raise ValueError("a TimeSeries needs at least 2 samples")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "samples", arr)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n) / self.n

    def __neg__(self) -> TimeSeries:
        return TimeSeries(-self.samples, self.periodic, -self.ramp, self.scale)

    def __add__(self, other: TimeSeries) -> TimeSeries:
        if self.n != other.n:
            raise ValueError("grid sizes differ")
        return TimeSeries(self.samples + other.samples, self.periodic and other.periodic)

    def __sub__(self, other: TimeSeries) -> TimeSeries:
        return self + (-other)

    def scaled(self, factor: float) -> TimeSeries:
        return TimeSeries(self.samples * factor, self.periodic, self.ramp * factor, self.scale)

    @classmethod
    def from_function(cls, func, n: int) -> TimeSeries:
        return cls(func(np.arange(n) / n))


@dataclass(frozen=True)
class FourierCoeffs:
    """Real trigonometric coefficients ``(a0, alpha[1..L], beta[1..L])``."""

    a0: float
    alpha: np.ndarray = field(default_factory=lambda: np.zeros(0))
    beta: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        alpha = _frozen(self.alpha)
        beta = _frozen(self.beta)
        if alpha.shape != beta.shape:
            raise ValueError("alpha and beta must have the same length")
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def L(self) -> int:
        return self.alpha.size

    @property
    def c(self) -> np.ndarray:
        """Complex coefficients indexed ``k = -L..L`` (position ``k + L``)."""
        pos = 0.5 * (self.alpha - 1j * self.beta)
        return np.concatenate([np.conj(pos[::-1]), [complex(self.a0)], pos])

    def ck(self, k: int) -> complex:
        if abs(k) > self.L:
            return 0j
        return complex(self.c[k + self.L])

    @classmethod
    def from_complex(cls, c, tol: float = HERMITIAN_TOL) -> FourierCoeffs:
        c = np.asarray(c, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 1:
            raise ValueError("complex coefficients must have odd length 2L+1")
        L = c.size // 2
        mismatch = np.max(np.abs(c - np.conj(c[::-1]))) if c.size else 0.0
        if mismatch > tol:
            raise NonHermitianCoefficients(
                f"c[-k] != conj(c[k]) by {mismatch:.3g} (tolerance {tol:g})"
            )
        pos = c[L + 1:]
        return cls(c[L].real, 2.0 * pos.real, -2.0 * pos.imag)

    def as_vector(self) -> np.ndarray:
        """Solver layout ``[a0, alpha_1..alpha_L, beta_1..beta_L]``."""
        return np.concatenate([[self.a0], self.alpha, self.beta])

    @classmethod
    def from_vector(cls, v) -> FourierCoeffs:
        v = np.asarray(v, dtype=float)
        if v.size % 2 != 1:
            raise ValueError("coefficient vector must have length 2L+1")
        L = v.size // 2
        return cls(v[0], v[1:L + 1], v[L + 1:])

    @classmethod
    def zeros(cls, L: int) -> FourierCoeffs:
        return cls(0.0, np.zeros(L), np.zeros(L))

    def padded(self, L: int) -> FourierCoeffs:
        """Same function expressed at bandwidth ``L >= self.L``."""
        if L < self.L:
            raise ValueError("cannot pad to a smaller bandwidth; use truncated()")
        extra = np.zeros(L - self.L)
        return FourierCoeffs(
            self.a0,
            np.concatenate([self.alpha, extra]),
            np.concatenate([self.beta, extra]),
        )

    def truncated(self, L: int) -> FourierCoeffs:
        return FourierCoeffs(self.a0, self.alpha[:L], self.beta[:L])

    def __add__(self, other: FourierCoeffs) -> FourierCoeffs:
        if self.L != other.L:
            raise ValueError("bandwidths differ")
        return FourierCoeffs(
            self.a0 + other.a0, self.alpha + other.alpha, self.beta + other.beta
        )

    def __neg__(self) -> FourierCoeffs:
        return FourierCoeffs(-self.a0, -self.alpha, -self.beta)

    def scaled(self, factor: float) -> FourierCoeffs:
        return FourierCoeffs(self.a0 * factor, self.alpha * factor, self.beta * factor)


@dataclass(frozen=True)
class SmoothSignalSpec:
    """Random-phase signal with coefficient moduli ``C / |k|**r``."""

    C: float = 1.0
    r: float = 3.0
    Kmax: int = 64
    seed: int = 0

    def __post_init__(self):
        if not self.r > 1:
            raise InvalidDecay(f"decay exponent r must exceed 1, got {self.r}")
        if self.C <= 0:
            raise ValueError("C must be positive")
        if self.Kmax < 1:
            raise ValueError("Kmax must be at least 1")


def _check_bandwidth(L: int, n: int):
    if L < 0:
        raise ValueError("bandwidth L must be nonnegative")
    if 2 * L + 1 > n:
        raise BandwidthExceedsSamples(f"2L+1 = {2 * L + 1} exceeds {n} samples")


def analyze(ts: TimeSeries, L: int) -> FourierCoeffs:
    """DFT quadrature of the ``2L+1`` lowest coefficients of ``ts``."""
    if not ts.periodic:
        raise NotPeriodized("periodize the signal (ramp removal) before analysis")
    _check_bandwidth(L, ts.n)
    spec = np.fft.rfft(ts.samples)[: L + 1] / ts.n
    return FourierCoeffs(spec[0].real, 2.0 * spec[1:].real, -2.0 * spec[1:].imag)


def synthesize(fc: FourierCoeffs, grid_size: int) -> TimeSeries:
    """Evaluate ``fc`` on the periodic grid of ``grid_size`` points."""
    _check_bandwidth(fc.L, grid_size)
    spec = np.zeros(grid_size // 2 + 1, dtype=complex)
    spec[0] = fc.a0
    spec[1:fc.L + 1] = 0.5 * (fc.alpha - 1j * fc.beta)
    return TimeSeries(np.fft.irfft(spec * grid_size, n=grid_size))


def project(ts: TimeSeries, L: int) -> TimeSeries:
    """Orthogonal projection onto harmonics ``|k| <= L``, on the same grid."""
    return synthesize(analyze(ts, L), ts.n)


def basis_matrix(L: int, t) -> np.ndarray:
    """Rows ``[1, cos(2 pi k t)..., sin(2 pi k t)...]`` for each time in ``t``."""
    t = np.asarray(t, dtype=float).reshape(-1, 1)
    k = np.arange(1, L + 1).reshape(1, -1)
    arg = 2.0 * np.pi * k * t
    return np.hstack([np.ones((t.shape[0], 1)), np.cos(arg), np.sin(arg)])


def evaluate(fc: FourierCoeffs, t) -> np.ndarray:
    """Evaluate ``fc`` at arbitrary times."""
    return basis_matrix(fc.L, t) @ fc.as_vector()


def resample(ts: TimeSeries, n: int) -> TimeSeries:
    """Trigonometric interpolant of ``ts`` evaluated on an ``n``-point grid.

    Exact when ``n`` is a multiple or a divisor of ``ts.n``; otherwise the
    interpolant is summed directly.
    """
    N = ts.n
    if n == N:
        return ts
    keep = dict(periodic=ts.periodic, ramp=ts.ramp, scale=ts.scale)
    if n < N and N % n == 0:
        return TimeSeries(ts.samples[:: N // n], **keep)
    spec = np.fft.rfft(ts.samples) / N
    if N % 2 == 0:
        # the Nyquist cosine is shared between the +N/2 and -N/2 bins
        nyq = spec[-1].real
        spec = spec[:-1]
    else:
        nyq = 0.0
    if n > N and n % N == 0:
        out = np.zeros(n // 2 + 1, dtype=complex)
        out[: spec.size] = spec
        if N % 2 == 0:
            out[N // 2] = 0.5 * nyq
        return TimeSeries(np.fft.irfft(out * n, n=n), **keep)
    fc = FourierCoeffs(spec[0].real, 2.0 * spec[1:].real, -2.0 * spec[1:].imag)
    t = np.arange(n) / n
    values = np.empty(n)
    for start in range(0, n, 512):
        chunk = t[start:start + 512]
        values[start:start + 512] = evaluate(fc, chunk) + nyq * np.cos(np.pi * N * chunk)
    return TimeSeries(values, **keep)


def smooth_coeffs(spec: SmoothSignalSpec) -> FourierCoeffs:
    """Coefficients with ``|c[k]| = C / k**r`` and seeded uniform phases."""
    rng = np.random.default_rng(spec.seed)
    k = np.arange(1, spec.Kmax + 1)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=spec.Kmax)
    ck = spec.C / k ** spec.r * np.exp(1j * phase)
    return FourierCoeffs(0.0, 2.0 * ck.real, -2.0 * ck.imag)


def generate_smooth(spec: SmoothSignalSpec, n_samples: int = 4096) -> TimeSeries:
    return synthesize(smooth_coeffs(spec), n_samples)


def norms(ts: TimeSeries) -> tuple[float, float, float]:
    """``(integral |f|, integral f**2, max |f|)`` by the periodic rectangle rule."""
    a = np.abs(ts.samples)
    return float(a.mean()), float(np.mean(a * a)), float(a.max())
