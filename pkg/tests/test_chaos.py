"""Delay embedding, Kantz divergence curves, and Lyapunov fits."""

import math

import numpy as np
import pytest

from longmem import (
    DivergenceCurve,
    EmbeddingParams,
    EpsTooSmallError,
    GenSpec,
    LyapunovFit,
    NumericError,
    TimeSeries,
    ValidationError,
    embed,
    generate,
    lyap_fit,
    lyap_k,
)


def series(values):
    return TimeSeries(values=np.asarray(values, dtype=float))


class TestEmbed:
    def test_two_dimensional_unit_delay(self):
        out = embed([1.0, 2.0, 3.0, 4.0], m=2, d=1)
        assert out.tolist() == [[1.0, 2.0], [2.0, 3.0], [3.0, 4.0]]

    def test_one_dimensional_is_column(self):
        out = embed([5.0, 6.0, 7.0], m=1, d=1)
        assert out.shape == (3, 1)
        assert out[:, 0].tolist() == [5.0, 6.0, 7.0]

    def test_three_dimensional_delay_two(self):
        out = embed([1.0, 2.0, 3.0, 4.0, 5.0, 6.0], m=3, d=2)
        assert out.tolist() == [[1.0, 3.0, 5.0], [2.0, 4.0, 6.0]]

    def test_row_count(self):
        out = embed(np.arange(100.0), m=4, d=3)
        assert out.shape == (100 - 3 * 3, 4)

    def test_too_short_rejected(self):
        with pytest.raises(ValidationError):
            embed([1.0, 2.0], m=3, d=1)

    def test_bad_parameters_rejected(self):
        with pytest.raises(ValidationError):
            embed([1.0, 2.0, 3.0], m=0, d=1)
        with pytest.raises(ValidationError):
            embed([1.0, 2.0, 3.0], m=2, d=0)


class TestEmbeddingParams:
    def test_defaults(self):
        p = EmbeddingParams()
        assert (p.m, p.d, p.theiler, p.eps) == (2, 1, 12, 0.3)
        assert (p.n_ref, p.s, p.k_min) == (200, 12, 4)
        assert p.random_sample is False

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"m": 0},
            {"d": 0},
            {"theiler": -1},
            {"eps": 0.0},
            {"eps": -1.0},
            {"n_ref": 0},
            {"s": 1},
            {"k_min": 0},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValidationError):
            EmbeddingParams(**kwargs)


class TestLyapK:
    def test_logistic_map_divergence_rate(self):
        # fully chaotic logistic map: lambda1 = ln 2
        ts = generate(GenSpec(kind="logistic", n=5000, seed=0))
        params = EmbeddingParams(m=1, d=1, theiler=10, eps=1e-3, n_ref=200, s=8, k_min=1)
        fit = lyap_fit(lyap_k(ts, params), 0, 4)
        assert fit.lambda1 == pytest.approx(math.log(2.0), abs=0.05)
        assert fit.r_squared > 0.95
        assert fit.chaos_consistent

    def test_sine_has_flat_curve(self):
        # periodic orbit: no divergence, slope compatible with zero
        ts = generate(GenSpec(kind="sine", n=5000, seed=0, period=50))
        params = EmbeddingParams(
            m=2, d=12, theiler=25, eps=2.0, n_ref=200, s=8, k_min=4,
            seed=0, random_sample=True,
        )
        fit = lyap_fit(lyap_k(ts, params), 1, 6)
        assert fit.lambda1 == pytest.approx(0.0, abs=0.02)

    def test_curve_shape_and_counts(self):
        ts = generate(GenSpec(kind="white", n=2048, seed=4))
        params = EmbeddingParams()
        curve = lyap_k(ts, params)
        assert curve.s_values.shape == (params.s,)
        assert curve.ref_counts.shape == (params.s,)
        assert np.all(curve.ref_counts >= 1)
        assert np.all(curve.ref_counts <= params.n_ref)
        assert not curve.s_values.flags.writeable

    def test_deterministic_rerun(self):
        ts = generate(GenSpec(kind="white", n=2048, seed=4))
        a = lyap_k(ts, EmbeddingParams())
        b = lyap_k(ts, EmbeddingParams())
        assert np.array_equal(a.s_values, b.s_values, equal_nan=True)
        assert np.array_equal(a.ref_counts, b.ref_counts)

    def test_random_sampling_deterministic_given_seed(self):
        ts = generate(GenSpec(kind="white", n=2048, seed=4))
        a = lyap_k(ts, EmbeddingParams(random_sample=True, seed=11))
        b = lyap_k(ts, EmbeddingParams(random_sample=True, seed=11))
        c = lyap_k(ts, EmbeddingParams(random_sample=True, seed=12))
        assert np.array_equal(a.s_values, b.s_values, equal_nan=True)
        assert not np.array_equal(a.s_values, c.s_values, equal_nan=True)

    def test_affine_invariance(self):
        # internal standardization makes the curve scale- and shift-free
        ts = generate(GenSpec(kind="white", n=2048, seed=4))
        params = EmbeddingParams()
        base = lyap_k(ts, params).s_values
        scaled = lyap_k(ts.with_values(ts.values * 4.0), params).s_values
        shifted = lyap_k(ts.with_values(ts.values + 1000.0), params).s_values
        affine = lyap_k(ts.with_values(ts.values * 3.7 - 2.0), params).s_values
        assert np.array_equal(base, scaled, equal_nan=True)
        np.testing.assert_allclose(shifted, base, rtol=0, atol=1e-9)
        np.testing.assert_allclose(affine, base, rtol=0, atol=1e-9)

    def test_eps_too_small_reports_largest_neighborhood(self):
        ts = generate(GenSpec(kind="white", n=1024, seed=7))
        with pytest.raises(EpsTooSmallError) as exc:
            lyap_k(ts, EmbeddingParams(eps=1e-12))
        assert exc.value.max_neighbors == 0

    def test_constant_series_rejected(self):
        with pytest.raises(NumericError):
            lyap_k(series(np.full(256, 2.5)), EmbeddingParams())

    def test_too_short_series_rejected(self):
        with pytest.raises(ValidationError):
            lyap_k(series(np.arange(10.0)), EmbeddingParams(m=4, d=3, s=12))


class TestLyapFit:
    def flat_curve(self, slope, intercept=-2.0, s=10):
        steps = np.arange(s, dtype=float)
        return DivergenceCurve(
            s_values=intercept + slope * steps,
            ref_counts=np.full(s, 50),
            params=EmbeddingParams(s=s),
        )

    def test_exact_line(self):
        fit = lyap_fit(self.flat_curve(0.4), 0, 9)
        assert fit.lambda1 == pytest.approx(0.4, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert fit.fit_range == (0, 9)
        assert fit.dt == 1.0

    def test_dt_rescales_rate(self):
        monthly = lyap_fit(self.flat_curve(0.4), 0, 9, dt=0.5)
        assert monthly.lambda1 == pytest.approx(0.8, abs=1e-12)

    def test_subrange_fit(self):
        curve = self.flat_curve(0.25)
        fit = lyap_fit(curve, 2, 6)
        assert fit.lambda1 == pytest.approx(0.25, abs=1e-12)

    def test_range_validation(self):
        curve = self.flat_curve(0.1)
        for bad in [(-1, 5), (0, 10), (5, 2), (3, 4)]:
            with pytest.raises(ValidationError):
                lyap_fit(curve, *bad)
        with pytest.raises(ValidationError):
            lyap_fit(curve, 0, 9, dt=0.0)

    def test_dead_steps_rejected(self):
        counts = np.full(10, 50)
        counts[4] = 0
        s_values = np.arange(10, dtype=float)
        s_values[4] = np.nan
        curve = DivergenceCurve(
            s_values=s_values, ref_counts=counts, params=EmbeddingParams(s=10)
        )
        with pytest.raises(ValidationError):
            lyap_fit(curve, 2, 6)
        # fitting beside the dead step is fine
        assert lyap_fit(curve, 5, 9).lambda1 == pytest.approx(1.0, abs=1e-12)

    def test_chaos_consistent_property(self):
        assert LyapunovFit(0.5, (0, 4), 0.95, 1.0).chaos_consistent
        assert not LyapunovFit(-0.1, (0, 4), 0.95, 1.0).chaos_consistent
        assert not LyapunovFit(0.5, (0, 4), 0.5, 1.0).chaos_consistent
