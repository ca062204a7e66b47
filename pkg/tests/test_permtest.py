"""Pearson correlation and the seeded permutation test."""

import math

import numpy as np
import pytest

from longmem import (
    NumericError,
    ValidationError,
    nth_permutation,
    pearson,
    perm_test,
)


class TestPearson:
    def test_hand_evaluated(self):
        # centered products give r = 9 / (2 sqrt 21)
        r = pearson([1.0, 2.0, 3.0], [1.0, 2.0, 4.0])
        assert r == pytest.approx(9.0 / (2.0 * math.sqrt(21.0)), abs=1e-12)
        assert r == pytest.approx(0.981981, abs=1e-6)

    def test_exact_linear_relation(self):
        x = [1.0, 2.0, 3.0, 4.0]
        assert pearson(x, [5.0, 7.0, 9.0, 11.0]) == 1.0
        assert pearson(x, [-1.0, -2.0, -3.0, -4.0]) == -1.0

    def test_symmetry(self):
        rng = np.random.default_rng(0)
        x, y = rng.standard_normal((2, 50))
        assert pearson(x, y) == pytest.approx(pearson(y, x), abs=1e-15)

    def test_bounded(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            x, y = rng.standard_normal((2, 30))
            assert -1.0 <= pearson(x, y) <= 1.0

    def test_validation(self):
        with pytest.raises(ValidationError):
            pearson([1.0, 2.0], [1.0, 2.0])  # too short
        with pytest.raises(ValidationError):
            pearson([1.0, 2.0, 3.0], [1.0, 2.0])  # length mismatch
        with pytest.raises(ValidationError):
            pearson([1.0, np.nan, 3.0], [1.0, 2.0, 3.0])
        with pytest.raises(ValidationError):
            pearson(np.ones((2, 3)), np.ones((2, 3)))

    def test_constant_input_rejected(self):
        with pytest.raises(NumericError):
            pearson([2.0, 2.0, 2.0], [1.0, 2.0, 3.0])
        with pytest.raises(NumericError):
            pearson([1.0, 2.0, 3.0], [7.0, 7.0, 7.0])


class TestNthPermutation:
    def test_valid_permutation(self):
        perm = nth_permutation(0, 0, 100)
        assert sorted(perm.tolist()) == list(range(100))

    def test_reproducible_and_addressable(self):
        # the same (seed, index) always yields the same bits, with no
        # dependence on which other indices were generated first
        direct = nth_permutation(3, 41, 64)
        for k in (5, 0, 99):
            nth_permutation(3, k, 64)
        again = nth_permutation(3, 41, 64)
        assert np.array_equal(direct, again)

    def test_indices_differ(self):
        a = nth_permutation(0, 0, 50)
        b = nth_permutation(0, 1, 50)
        c = nth_permutation(1, 0, 50)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_validation(self):
        with pytest.raises(ValidationError):
            nth_permutation(0, -1, 10)
        with pytest.raises(ValidationError):
            nth_permutation(0, 0, 0)


class TestPermTest:
    def gaussian_pair(self, n=120, data_seed=0):
        rng = np.random.default_rng(data_seed)
        return rng.standard_normal(n), rng.standard_normal(n)

    def test_result_structure(self):
        p, j = self.gaussian_pair()
        res = perm_test(p, j, n_perm=500, seed=0)
        assert res.n == 120
        assert res.n_perm == 500
        assert res.tail == "two"
        assert res.r_sorted.shape == (500,)
        assert np.all(np.diff(res.r_sorted) >= 0.0)
        assert np.all(np.abs(res.r_sorted) <= 1.0 + 1e-12)
        assert not res.r_sorted.flags.writeable
        assert set(res.r_sorted_summary) == {
            "min", "q01", "q05", "q25", "q50", "q75", "q95", "q99", "max",
        }
        assert res.r_sorted_summary["min"] == res.r_sorted[0]
        assert res.r_sorted_summary["max"] == res.r_sorted[-1]

    def test_critical_values_are_order_statistics(self):
        # 1-indexed positions ceil(0.05 n) and floor(0.95 n): 5 and 95
        p, j = self.gaussian_pair()
        res = perm_test(p, j, n_perm=100, seed=3)
        assert res.r_crit_lower == res.r_sorted[4]
        assert res.r_crit_upper == res.r_sorted[94]

    def test_default_positions_five_hundred(self):
        p, j = self.gaussian_pair(n=60)
        res = perm_test(p, j, n_perm=10000, seed=1)
        assert res.r_crit_lower == res.r_sorted[499]
        assert res.r_crit_upper == res.r_sorted[9499]

    def test_rebuild_from_substreams_matches_bit_for_bit(self):
        # every permuted correlation can be regenerated standalone, in any
        # order, from (seed, index) — sequential and scattered evaluation
        # must agree exactly
        p, j = self.gaussian_pair(n=80)
        res = perm_test(p, j, n_perm=200, seed=6)
        p_unit = (p - p.mean()) / np.linalg.norm(p - p.mean())
        j_unit = (j - j.mean()) / np.linalg.norm(j - j.mean())
        rebuilt = np.empty(200)
        for k in reversed(range(200)):
            rebuilt[k] = p_unit @ j_unit[nth_permutation(6, k, 80)]
        assert np.array_equal(np.sort(rebuilt), res.r_sorted)

    def test_deterministic_given_seed(self):
        p, j = self.gaussian_pair()
        a = perm_test(p, j, n_perm=300, seed=5)
        b = perm_test(p, j, n_perm=300, seed=5)
        c = perm_test(p, j, n_perm=300, seed=8)
        assert np.array_equal(a.r_sorted, b.r_sorted)
        assert a.p_two_sided == b.p_two_sided
        assert not np.array_equal(a.r_sorted, c.r_sorted)

    def test_strong_correlation_rejected(self):
        rng = np.random.default_rng(10)
        p = rng.standard_normal(100)
        j = p + 0.3 * rng.standard_normal(100)
        res = perm_test(p, j, n_perm=1000, seed=0)
        assert res.decision_5pct == "reject"
        assert res.p_two_sided == 1.0 / 1001.0  # add-one floor
        assert res.p_upper == 1.0 / 1001.0

    def test_independent_pair_not_rejected(self):
        p, j = self.gaussian_pair(n=500, data_seed=2)
        res = perm_test(p, j, n_perm=1000, seed=0)
        assert res.decision_5pct == "fail-to-reject"
        assert res.p_two_sided > 0.05

    def test_tail_decisions(self):
        rng = np.random.default_rng(11)
        p = rng.standard_normal(150)
        j = -p + 0.5 * rng.standard_normal(150)  # strongly negative r
        lower = perm_test(p, j, n_perm=500, seed=0, tail="lower")
        upper = perm_test(p, j, n_perm=500, seed=0, tail="upper")
        assert lower.r_obs < -0.5
        assert lower.decision_5pct == "reject"
        assert upper.decision_5pct == "fail-to-reject"
        assert lower.p_lower < 0.01
        assert upper.p_upper > 0.95

    def test_p_values_cover_both_tails(self):
        p, j = self.gaussian_pair()
        res = perm_test(p, j, n_perm=400, seed=2)
        # every permutation is counted as <= or >= (ties in both), so the
        # two one-sided p-values overlap by at least one count
        assert res.p_lower + res.p_upper >= 1.0 + 1.0 / 401.0 - 1e-12
        for value in (res.p_lower, res.p_upper, res.p_two_sided):
            assert 1.0 / 401.0 <= value <= 1.0

    def test_relabeling_symmetry_of_null(self):
        # swapping which series is permuted changes individual draws but
        # not the null distribution; quantile summaries stay close
        rng = np.random.default_rng(0)
        p = rng.standard_normal(500)
        j = rng.standard_normal(500)
        forward = perm_test(p, j, n_perm=2000, seed=9)
        backward = perm_test(j, p, n_perm=2000, seed=9)
        for key, value in forward.r_sorted_summary.items():
            assert value == pytest.approx(backward.r_sorted_summary[key], abs=0.02)

    def test_validation(self):
        p, j = self.gaussian_pair()
        with pytest.raises(ValidationError):
            perm_test(p, j, n_perm=99)
        with pytest.raises(ValidationError):
            perm_test(p, j, n_perm=500, tail="both")
        with pytest.raises(ValidationError):
            perm_test(p[:50], j, n_perm=500)
        with pytest.raises(NumericError):
            perm_test(np.zeros(120), j, n_perm=500)
