import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from overpredict import signal as sig
from overpredict.analytics import (
    Metric,
    SumEnvelope,
    aggregate,
    analyze_sum,
    sa_errors,
    signal_analytics,
    table1_bound,
    theorem1_ratio,
)
from overpredict.envelope import Scheme, Side, envelope
from overpredict.errors import MixedBandwidths, MixedSides
from overpredict.signal import FourierCoeffs, SmoothSignalSpec, TimeSeries, generate_smooth


def cos4(n=1024):
    return TimeSeries.from_function(lambda t: np.cos(4 * np.pi * t), n)


def gen(seed, r=3.0, Kmax=64):
    return generate_smooth(SmoothSignalSpec(1.0, r, Kmax, seed))


# aggregate -------------------------------------------------------------------


def test_aggregate_single_is_identity():
    res = envelope(gen(0), 3, Scheme.L1)
    se = aggregate([res])
    assert se.device_count == 1
    assert np.array_equal(se.coeffs.as_vector(), res.coeffs.as_vector())


def test_aggregate_two_copies_doubles():
    res = envelope(gen(1), 3, Scheme.L2)
    se = aggregate([res, res])
    np.testing.assert_allclose(se.coeffs.as_vector(), 2 * res.coeffs.as_vector(), rtol=0, atol=0)


def test_aggregate_three_devices_exact_sum():
    results = [envelope(gen(s), 4, Scheme.NAIVE) for s in range(3)]
    se = aggregate(results)
    direct = sum(r.coeffs.as_vector() for r in results)
    np.testing.assert_allclose(se.coeffs.as_vector(), direct, rtol=1e-15, atol=1e-15)
    assert se.device_count == 3


def test_aggregate_preserves_overprediction():
    results = [envelope(gen(s), 3, Scheme.L1) for s in range(4)]
    se = aggregate(results)
    n = results[0].grid_size
    s = sum(sig.resample(gen(i), n).samples for i in range(4))
    s_hat = sig.synthesize(se.coeffs, n).samples
    assert np.min(s_hat - s) >= -1e-9 * 4
    assert s_hat.max() >= s.max() - 1e-9


def test_aggregate_rejects_mixed_bandwidths():
    with pytest.raises(MixedBandwidths):
        aggregate([envelope(gen(0), 2), envelope(gen(0), 3)])


def test_aggregate_rejects_mixed_sides():
    with pytest.raises(MixedSides):
        aggregate([envelope(gen(0), 2), envelope(gen(0), 2, side=Side.LOWER)])


def test_aggregate_rejects_empty():
    with pytest.raises(ValueError):
        aggregate([])


# analyze_sum -------------------------------------------------------------------


def test_analyze_sum_cosine():
    se = SumEnvelope(FourierCoeffs(0.0, [2.0], [0.0]), 1)
    rep = analyze_sum(se, 512)
    assert rep.max_value == pytest.approx(2.0)
    assert rep.t_max == 0.0
    assert rep.max_value >= rep.avg_value >= rep.min_value


def test_analyze_sum_negative_cosine():
    rep = analyze_sum(SumEnvelope(FourierCoeffs(0.0, [-1.0], [0.0]), 1), 512)
    assert rep.t_max == 0.5
    assert rep.max_value == pytest.approx(1.0)


def test_t_max_earliest_tie():
    rep = signal_analytics(TimeSeries([0.0, 1.0, 0.0, 1.0]))
    assert rep.t_max == 0.25


def test_analyze_sum_matches_fine_scan():
    fa = sig.smooth_coeffs(SmoothSignalSpec(1, 3, 20, 1))
    fb = sig.smooth_coeffs(SmoothSignalSpec(1, 3, 20, 2))
    se = SumEnvelope(fa.padded(20) + fb.padded(20), 2)
    rep = analyze_sum(se, 1000)
    fine = np.linspace(0, 1, 10000, endpoint=False)
    scan = sig.evaluate(fa, fine) + sig.evaluate(fb, fine)
    # a 10x finer scan can only find a higher peak, within the grid curvature
    assert rep.max_value <= scan.max() + 1e-12
    assert rep.max_value >= scan.max() - 1e-3
    assert abs(rep.t_max - fine[np.argmax(scan)]) <= 1e-3
    assert rep.avg_value == pytest.approx(fa.a0 + fb.a0, abs=1e-12)


# sa_errors -------------------------------------------------------------------


def test_sa_errors_zero():
    ts = gen(3)
    assert sa_errors(ts, ts).to_dict() == {"sa1": 0.0, "sa2": 0.0, "sa_inf": 0.0}


def test_sa_errors_constant_over_cosine():
    e = sa_errors(TimeSeries(np.ones(1024)), cos4())
    assert e.sa1 == pytest.approx(1.0, abs=1e-12)
    assert e.sa2 == pytest.approx(1.5, abs=1e-12)
    assert e.sa_inf == pytest.approx(2.0, abs=1e-12)
    assert e.get("inf") == e.sa_inf and e.get(Metric.Q2) == e.sa2 and e.get(1) == e.sa1


def test_sa_errors_grid_mismatch():
    with pytest.raises(ValueError):
        sa_errors(TimeSeries(np.ones(8)), TimeSeries(np.ones(16)))


@pytest.mark.parametrize("M", [1, 2, 4, 8])
def test_m_identical_copies_scale(M):
    ts = gen(5, r=2)
    res = envelope(ts, 3, Scheme.L1)
    n = res.grid_size
    f = sig.resample(ts, n)
    base = sa_errors(sig.synthesize(res.coeffs, n), f)
    se = aggregate([res] * M)
    s = TimeSeries(M * f.samples)
    e = sa_errors(sig.synthesize(se.coeffs, n), s)
    assert e.sa1 == pytest.approx(M * base.sa1, rel=1e-9)
    assert e.sa_inf == pytest.approx(M * base.sa_inf, rel=1e-9)
    assert e.sa2 == pytest.approx(M * M * base.sa2, rel=1e-9)


# closed-form decay bounds -------------------------------------------------------


def test_decay_bound_q2_values():
    assert table1_bound("2", 2, 3, "naive") == pytest.approx(2 / 81, rel=1e-12)
    assert table1_bound("2", 2, 3, "optimal") == pytest.approx(2 / 192, rel=1e-12)
    assert table1_bound("2", 2, 3, "naive") == pytest.approx(0.02469, abs=1e-5)
    assert table1_bound("2", 2, 3, "optimal") == pytest.approx(0.01042, abs=1e-5)


def test_decay_bound_qinf_values():
    assert table1_bound("inf", 3, 4, "naive") == pytest.approx(2 / (2 * 16))
    assert table1_bound("inf", 3, 4, "optimal") == pytest.approx(2 / (2 * 25))


def test_decay_bound_ratio_tends_to_one():
    r = 2.5
    ratios = [table1_bound(2, r, L) / table1_bound(2, r, L, "optimal") for L in (1, 10, 100, 10000)]
    for L, ratio in zip((1, 10, 100, 10000), ratios):
        assert ratio == pytest.approx(((L + 1) / L) ** (2 * r - 1), rel=1e-12)
    assert ratios[-1] == pytest.approx(1.0, abs=1e-3)


@pytest.mark.parametrize("q", ["2", "inf"])
@pytest.mark.parametrize("side", ["naive", "optimal"])
def test_decay_bound_strictly_decreasing(q, side):
    Ls = range(1, 30)
    vals = [table1_bound(q, 2.5, L, side) for L in Ls]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    rs = [1.5, 2.0, 2.5, 3.0, 4.0]
    vals = [table1_bound(q, r, 5, side) for r in rs]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_decay_bound_domain_errors():
    with pytest.raises(ValueError):
        table1_bound("inf", 1.0, 3)
    with pytest.raises(ValueError):
        table1_bound("2", 0.5, 3)
    with pytest.raises(ValueError):
        table1_bound("1", 2.0, 3, "optimal")
    with pytest.raises(ValueError):
        table1_bound("2", 2.0, 3, "sideways")


def test_decay_bound_q1_naive_is_tail_sum():
    k = np.arange(4, 200001, dtype=float)
    assert table1_bound("1", 3.0, 3) == pytest.approx(2 * np.sum(k[::-1] ** -3.0), rel=1e-6)


# naive-to-optimal ratio -------------------------------------------------------


def test_ratio_cosine_q1_is_one():
    assert theorem1_ratio(cos4(4096), 1, "1") == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("q", ["1", "2", "inf"])
def test_ratio_bandlimited_convention(q):
    ts = sig.synthesize(sig.smooth_coeffs(SmoothSignalSpec(1, 2, 3, 0)), 4096)
    assert theorem1_ratio(ts, 3, q) == 1.0


@pytest.mark.parametrize("q", ["1", "2", "inf"])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_ratio_at_least_one(q, seed):
    for L in (2, 5, 9):
        assert theorem1_ratio(gen(seed), L, q) >= 1 - 1e-6


def test_ratio_q2_bounded_across_L():
    ratios = [theorem1_ratio(gen(4, Kmax=200), L, "2", grid_size=2048) for L in range(2, 17)]
    assert max(ratios) <= 10
    assert min(ratios) >= 1 - 1e-6


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6), L=st.integers(1, 8), q=st.sampled_from(["1", "2", "inf"]))
def test_ratio_property(seed, L, q):
    assert theorem1_ratio(gen(seed, r=2.0, Kmax=40), L, q) >= 1 - 1e-6
