import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from overpredict.errors import (
    BandwidthExceedsSamples,
    InvalidDecay,
    NonHermitianCoefficients,
    NotPeriodized,
)
from overpredict.signal import (
    FourierCoeffs,
    SmoothSignalSpec,
    TimeSeries,
    analyze,
    basis_matrix,
    evaluate,
    generate_smooth,
    norms,
    project,
    resample,
    smooth_coeffs,
    synthesize,
)

from oracles import fourier_coefficient_quad, projection_quad


def cosine(k, n=64, amp=1.0, offset=0.0):
    return TimeSeries.from_function(lambda t: offset + amp * np.cos(2 * np.pi * k * t), n)


# analyze -------------------------------------------------------------------


def test_analyze_constant():
    fc = analyze(TimeSeries(np.full(16, 3.0)), 2)
    np.testing.assert_allclose(fc.c, [0, 0, 3.0, 0, 0], atol=1e-15)


def test_analyze_unit_cosine():
    fc = analyze(cosine(1), 1)
    np.testing.assert_allclose(fc.c, [0.5, 0.0, 0.5], atol=1e-12)


@pytest.mark.parametrize("k", [0, 1, -1])
def test_analyze_out_of_band_cosine_matches_quadrature(k):
    func = lambda t: np.cos(4 * np.pi * t)  # noqa: E731
    fc = analyze(TimeSeries.from_function(func, 64), 1)
    expected = fourier_coefficient_quad(func, k)
    assert abs(fc.ck(k) - expected) <= 1e-12
    assert abs(fc.ck(k)) <= 1e-12


def test_analyze_rejects_too_many_harmonics():
    with pytest.raises(BandwidthExceedsSamples):
        analyze(TimeSeries(np.zeros(8)), 4)


def test_analyze_requires_periodized_input():
    with pytest.raises(NotPeriodized):
        analyze(TimeSeries(np.zeros(8), periodic=False), 1)


def test_analyze_matches_quadrature_on_smooth_signal():
    fc_true = smooth_coeffs(SmoothSignalSpec(C=1, r=3, Kmax=10, seed=4))
    func = lambda t: evaluate(fc_true, np.atleast_1d(t))[0]  # noqa: E731
    fc = analyze(synthesize(fc_true, 256), 6)
    for k in range(-6, 7):
        assert abs(fc.ck(k) - fourier_coefficient_quad(func, k)) < 1e-10


# synthesize ------------------------------------------------------------------


def test_synthesize_constant():
    ts = synthesize(FourierCoeffs(1.0, [0.0], [0.0]), 8)
    np.testing.assert_allclose(ts.samples, np.ones(8))


def test_synthesize_quarter_points():
    fc = FourierCoeffs.from_complex([0.5, 0.0, 0.5])
    np.testing.assert_allclose(synthesize(fc, 4).samples, [1, 0, -1, 0], atol=1e-15)


def test_from_complex_rejects_non_hermitian():
    with pytest.raises(NonHermitianCoefficients):
        FourierCoeffs.from_complex([0.5, 0.0, 0.4])
    with pytest.raises(NonHermitianCoefficients):
        FourierCoeffs.from_complex([0.5j, 0.0, 0.5j])


def test_synthesize_grid_too_small():
    with pytest.raises(BandwidthExceedsSamples):
        synthesize(FourierCoeffs.zeros(3), 6)


def test_round_trip_equals_quadrature_projection():
    func = lambda t: np.exp(np.sin(2 * np.pi * t)) + 0.3 * np.cos(10 * np.pi * t)  # noqa: E731
    ts = TimeSeries.from_function(func, 128)
    rt = synthesize(analyze(ts, 3), 128)
    np.testing.assert_allclose(rt.samples, projection_quad(func, 3, ts.times), atol=1e-10)


def test_complex_and_real_views_agree():
    fc = smooth_coeffs(SmoothSignalSpec(C=2, r=2, Kmax=5, seed=1))
    c = fc.c
    np.testing.assert_allclose(fc.alpha, 2 * c[fc.L + 1:].real)
    np.testing.assert_allclose(fc.beta, -2 * c[fc.L + 1:].imag)
    np.testing.assert_allclose(c, np.conj(c[::-1]))
    back = FourierCoeffs.from_complex(c)
    np.testing.assert_allclose(back.as_vector(), fc.as_vector())


# project ---------------------------------------------------------------------


def test_projection_identity_on_band():
    ts = synthesize(smooth_coeffs(SmoothSignalSpec(Kmax=4, seed=2)), 64)
    assert np.max(np.abs(project(ts, 4).samples - ts.samples)) <= 1e-10


def test_projection_removes_out_of_band():
    func = lambda t: np.cos(4 * np.pi * t)  # noqa: E731
    ts = TimeSeries.from_function(func, 64)
    np.testing.assert_allclose(project(ts, 1).samples, projection_quad(func, 1, ts.times), atol=1e-10)
    assert np.max(np.abs(project(ts, 1).samples)) <= 1e-12


def test_projection_keeps_dc():
    func = lambda t: 0.5 + 0.5 * np.cos(6 * np.pi * t)  # noqa: E731
    ts = TimeSeries.from_function(func, 64)
    np.testing.assert_allclose(project(ts, 2).samples, projection_quad(func, 2, ts.times), atol=1e-10)
    np.testing.assert_allclose(project(ts, 2).samples, 0.5, atol=1e-12)


def test_residual_orthogonal_to_band():
    ts = generate_smooth(SmoothSignalSpec(r=2, Kmax=40, seed=3), 256)
    resid = ts.samples - project(ts, 5).samples
    B = basis_matrix(5, ts.times)
    assert np.max(np.abs(B.T @ resid / ts.n)) <= 1e-9


# generate_smooth -------------------------------------------------------------


def test_generate_single_harmonic_modulus():
    fc = smooth_coeffs(SmoothSignalSpec(C=1, r=3, Kmax=1, seed=11))
    assert abs(fc.ck(1)) == pytest.approx(1.0, abs=1e-15)
    ts = generate_smooth(SmoothSignalSpec(C=1, r=3, Kmax=1, seed=11), 64)
    assert abs(analyze(ts, 1).ck(1)) == pytest.approx(1.0, abs=1e-12)


def test_generate_deterministic():
    spec = SmoothSignalSpec(C=1, r=2.5, Kmax=30, seed=9)
    a, b = generate_smooth(spec), generate_smooth(spec)
    assert np.array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, generate_smooth(SmoothSignalSpec(1, 2.5, 30, 10)).samples)


def test_generate_moduli_exact():
    spec = SmoothSignalSpec(C=0.7, r=2.0, Kmax=50, seed=1)
    fc = analyze(generate_smooth(spec, 1024), 60)
    k = np.arange(1, 61)
    expected = np.where(k <= 50, 0.7 / k ** 2.0, 0.0)
    np.testing.assert_allclose(np.abs(fc.c[61:]), expected, atol=1e-12)


@pytest.mark.parametrize("L", [0, 5, 20, 49])
def test_generate_tail_energy_matches_direct_sum(L):
    spec = SmoothSignalSpec(C=1.0, r=2.0, Kmax=50, seed=5)
    ts = generate_smooth(spec, 1024)
    measured = norms(TimeSeries(ts.samples - project(ts, L).samples))[1]
    k = np.arange(L + 1, 51, dtype=float)
    direct = 2.0 * np.sum((1.0 / k ** 2) ** 2)
    assert measured == pytest.approx(direct, rel=1e-10, abs=1e-15)


def test_generate_is_periodic_and_real():
    ts = generate_smooth(SmoothSignalSpec(seed=2), 512)
    end = evaluate(smooth_coeffs(SmoothSignalSpec(seed=2)), [1.0])[0]
    assert end == pytest.approx(ts.samples[0], abs=1e-12)
    assert ts.samples.dtype == float


@pytest.mark.parametrize("r", [1.0, 0.5, -2])
def test_generate_invalid_decay(r):
    with pytest.raises(InvalidDecay):
        SmoothSignalSpec(C=1, r=r, Kmax=5)


# norms ---------------------------------------------------------------------


def test_norms_constant():
    assert norms(TimeSeries(np.full(10, 2.0))) == pytest.approx((2, 4, 2))


def test_norms_cosine():
    l1, l2sq, linf = norms(cosine(1, n=1024))
    assert l1 == pytest.approx(2 / np.pi, abs=1e-3)
    assert l2sq == pytest.approx(0.5, abs=1e-6)
    assert linf == pytest.approx(1.0)


def test_norms_zero():
    assert norms(TimeSeries(np.zeros(5))) == (0.0, 0.0, 0.0)


# resample ------------------------------------------------------------------


@pytest.mark.parametrize("n", [32, 64, 200, 256, 1000])
def test_resample_exact_for_bandlimited(n):
    fc = smooth_coeffs(SmoothSignalSpec(Kmax=12, seed=6))
    ts = synthesize(fc, 128)
    np.testing.assert_allclose(resample(ts, n).samples, synthesize(fc, n).samples, atol=1e-12)


def test_timeseries_validation():
    with pytest.raises(ValueError):
        TimeSeries([1.0])
    with pytest.raises(ValueError):
        TimeSeries([1.0, np.nan])
    ts = TimeSeries([1.0, 2.0])
    with pytest.raises(ValueError):
        ts.samples[0] = 3.0


# properties ----------------------------------------------------------------



@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000), L=st.integers(0, 8), K=st.integers(1, 8))
def test_parseval_on_band(seed, L, K):
    ts = synthesize(smooth_coeffs(SmoothSignalSpec(C=1, r=1.5, Kmax=K, seed=seed)), 64)
    c = analyze(ts, 8).c
    assert norms(ts)[1] == pytest.approx(float(np.sum(np.abs(c) ** 2)), abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(values=st.lists(st.floats(-100, 100), min_size=8, max_size=64), L=st.integers(0, 3))
def test_projection_idempotent_and_hermitian(values, L):
    ts = TimeSeries(values)
    once = project(ts, L)
    twice = project(once, L)
    assert np.max(np.abs(once.samples - twice.samples)) <= 1e-10
    c = analyze(ts, L).c
    np.testing.assert_allclose(c, np.conj(c[::-1]), atol=0)


@settings(max_examples=40, deadline=None)
@given(values=st.lists(st.floats(-10, 10), min_size=16, max_size=48))
def test_residual_energy_nonincreasing_in_L(values):
    ts = TimeSeries(values)
    energies = [norms(ts - project(ts, L))[1] for L in range((ts.n - 1) // 2 + 1)]
    assert all(b <= a + 1e-9 for a, b in zip(energies, energies[1:]))
