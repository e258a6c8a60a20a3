import math
import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toksat.stats import (
    LengthMismatch,
    RankDeficient,
    TooFewObservations,
    ZeroVariance,
    betainc_reg,
    f_sf,
    ols_regression,
    p_from_r,
    pearson_corr,
    script_dummies,
    student_t_cdf,
    student_t_sf_two_tailed,
)


class TestPearson:
    def test_perfect_line(self):
        x = [0.0, 1.0, 2.0, 3.0, 4.0]
        y = [2.0 * v + 1.0 for v in x]
        result = pearson_corr(x, y)
        assert result.r == pytest.approx(1.0, abs=1e-12)
        assert result.p_two_tailed == pytest.approx(0.0, abs=1e-9)
        assert result.n == 5

    def test_perfect_negative_line(self):
        x = [0.0, 1.0, 2.0, 5.0]
        result = pearson_corr(x, [-v for v in x])
        assert result.r == pytest.approx(-1.0, abs=1e-12)

    def test_zero_variance_rejected(self):
        with pytest.raises(ZeroVariance):
            pearson_corr([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            pearson_corr([1.0, 2.0], [1.0, 2.0, 3.0])

    def test_needs_three_points(self):
        with pytest.raises(TooFewObservations):
            pearson_corr([1.0, 2.0], [3.0, 1.0])

    @given(
        st.lists(st.floats(-100.0, 100.0), min_size=3, max_size=30),
        st.integers(0, 2**32 - 1),
    )
    @settings(max_examples=60)
    def test_symmetry_and_affine_invariance(self, x, seed):
        rng = random.Random(seed)
        y = [rng.uniform(-50, 50) for _ in x]
        # Spread far below the shift magnitude would vanish in rounding.
        if max(x) - min(x) < 1e-6 or len(set(y)) < 2:
            return
        base = pearson_corr(x, y)
        assert pearson_corr(y, x).r == pytest.approx(base.r, abs=1e-12)
        a, b = rng.uniform(0.1, 5.0), rng.uniform(-10.0, 10.0)
        shifted = pearson_corr([a * v + b for v in x], y)
        assert shifted.r == pytest.approx(base.r, abs=1e-12)


class TestPValues:
    def test_known_anchor_weak_correlation(self):
        assert p_from_r(0.178, 49) == pytest.approx(0.22, abs=0.01)

    def test_known_anchor_moderate_correlation(self):
        assert p_from_r(0.44, 29) == pytest.approx(0.018, abs=0.003)

    def test_monotone_in_abs_r(self):
        ps = [p_from_r(r, 30) for r in (0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 0.95)]
        assert all(a > b for a, b in zip(ps, ps[1:]))
        assert p_from_r(-0.4, 30) == pytest.approx(p_from_r(0.4, 30), abs=1e-14)

    def test_monotone_in_n(self):
        ps = [p_from_r(0.3, n) for n in (5, 10, 20, 40, 80, 160)]
        assert all(a > b for a, b in zip(ps, ps[1:]))

    def test_r_zero_gives_p_one(self):
        assert p_from_r(0.0, 25) == pytest.approx(1.0)

    def test_t_cdf_against_high_precision_oracle(self):
        mpmath.mp.dps = 40
        for t in (-8.0, -2.5, -0.7, 0.0, 0.3, 1.96, 4.2, 12.0):
            for df in (1, 2, 5, 17, 47, 200):
                x = df / (df + t * t)
                tail = 0.5 * mpmath.betainc(df / 2.0, 0.5, 0, x, regularized=True)
                expected = float(tail if t < 0 else 1 - tail)
                assert student_t_cdf(t, df) == pytest.approx(expected, abs=1e-10)

    def test_two_tailed_matches_cdf(self):
        for t, df in ((1.3, 7), (2.8, 30), (0.0, 12)):
            expected = 2.0 * (1.0 - student_t_cdf(abs(t), df))
            assert student_t_sf_two_tailed(t, df) == pytest.approx(expected, rel=1e-12)

    def test_f_of_one_df_matches_squared_t(self):
        for t, df in ((0.9, 8), (2.1, 23), (3.7, 44)):
            assert f_sf(t * t, 1, df) == pytest.approx(
                student_t_sf_two_tailed(t, df), rel=1e-9
            )

    def test_betainc_endpoints_and_symmetry(self):
        assert betainc_reg(2.0, 3.0, 0.0) == 0.0
        assert betainc_reg(2.0, 3.0, 1.0) == 1.0
        for a, b, x in ((0.5, 0.5, 0.3), (4.0, 2.5, 0.8), (10.0, 10.0, 0.5)):
            assert betainc_reg(a, b, x) == pytest.approx(
                1.0 - betainc_reg(b, a, 1.0 - x), abs=1e-12
            )


class TestOls:
    def test_near_noiseless_line(self):
        rng = np.random.default_rng(0)
        x = np.linspace(0.0, 5.0, 20)
        y = 3.0 + 2.0 * x + rng.normal(0.0, 1e-9, 20)
        result = ols_regression({"intercept": np.ones(20), "x": x}, y)
        assert result.coefficients["intercept"].estimate == pytest.approx(3.0, abs=1e-6)
        assert result.coefficients["x"].estimate == pytest.approx(2.0, abs=1e-6)
        assert result.r_squared == pytest.approx(1.0, abs=1e-9)
        assert result.coefficients["x"].p < 1e-12

    def test_dummy_slope_is_group_mean_difference(self):
        y = [3.0, 5.0, 4.0, 10.0, 14.0, 12.0, 12.0]
        dummy = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]
        result = ols_regression(
            {"intercept": [1.0] * 7, "group": dummy}, y
        )
        mean0 = np.mean(y[:3])
        mean1 = np.mean(y[3:])
        assert result.coefficients["group"].estimate == pytest.approx(mean1 - mean0, abs=1e-12)
        assert result.coefficients["intercept"].estimate == pytest.approx(mean0, abs=1e-12)

    def test_residuals_orthogonal_to_design(self):
        rng = np.random.default_rng(7)
        n = 40
        cols = {
            "intercept": np.ones(n),
            "a": rng.uniform(-3, 3, n),
            "b": rng.uniform(0, 10, n),
        }
        y = 1.0 + 0.5 * cols["a"] - 2.0 * cols["b"] + rng.normal(0, 1.0, n)
        result = ols_regression(cols, y)
        design = np.column_stack([cols[k] for k in cols])
        beta = np.array([result.coefficients[k].estimate for k in cols])
        resid = y - design @ beta
        for k in cols:
            dot = abs(float(np.asarray(cols[k]) @ resid))
            scale = float(np.linalg.norm(cols[k]) * np.linalg.norm(y))
            assert dot <= 1e-8 * scale

    def test_degrees_of_freedom_identity(self):
        rng = np.random.default_rng(3)
        n = 25
        cols = {"intercept": np.ones(n), "x1": rng.normal(size=n), "x2": rng.normal(size=n)}
        y = rng.normal(size=n)
        result = ols_regression(cols, y)
        assert result.df_model + result.df_resid + 1 == n
        expected_adj = 1.0 - (1.0 - result.r_squared) * (n - 1) / result.df_resid
        assert result.adj_r_squared == pytest.approx(expected_adj, rel=1e-12)

    def test_f_statistic_formula(self):
        rng = np.random.default_rng(9)
        n = 30
        x = rng.normal(size=n)
        y = 2.0 + x + rng.normal(scale=0.5, size=n)
        result = ols_regression({"intercept": np.ones(n), "x": x}, y)
        r2 = result.r_squared
        expected_f = (r2 / result.df_model) / ((1.0 - r2) / result.df_resid)
        assert result.f_statistic == pytest.approx(expected_f, rel=1e-10)
        assert 0.0 <= result.f_p <= 1.0

    def test_rank_deficient_rejected(self):
        n = 10
        x = list(range(n))
        with pytest.raises(RankDeficient):
            ols_regression(
                {"intercept": [1.0] * n, "x": x, "x2": [2.0 * v for v in x]},
                list(range(n)),
            )

    def test_too_few_observations(self):
        with pytest.raises(TooFewObservations):
            ols_regression({"intercept": [1.0, 1.0], "x": [1.0, 2.0]}, [3.0, 4.0])

    def test_saturated_dummies_fit_group_means(self):
        y = [1.0, 3.0, 10.0, 14.0, 30.0, 34.0, 32.0]
        groups = ["a", "a", "b", "b", "c", "c", "c"]
        dummies = script_dummies(groups, reference="a")
        cols = {"intercept": [1.0] * len(y), **dummies}
        result = ols_regression(cols, y)
        intercept = result.coefficients["intercept"].estimate
        assert intercept == pytest.approx(2.0, abs=1e-10)
        assert intercept + result.coefficients["script_b"].estimate == pytest.approx(12.0, abs=1e-10)
        assert intercept + result.coefficients["script_c"].estimate == pytest.approx(32.0, abs=1e-10)


class TestScriptDummies:
    def test_reference_level_omitted(self):
        dummies = script_dummies(["Latin", "Cyrillic", "Arabic", "Latin"])
        assert set(dummies) == {"script_Arabic", "script_Cyrillic"}
        assert dummies["script_Cyrillic"] == [0.0, 1.0, 0.0, 0.0]
        assert dummies["script_Arabic"] == [0.0, 0.0, 1.0, 0.0]

    def test_all_reference_yields_no_columns(self):
        assert script_dummies(["Latin", "Latin"]) == {}

    def test_rows_sum_to_indicator(self):
        scripts = ["Latin", "CJ", "Thai", "CJ", "Latin", "Hebrew"]
        dummies = script_dummies(scripts)
        for i, s in enumerate(scripts):
            row = [dummies[k][i] for k in dummies]
            assert sum(row) == (0.0 if s == "Latin" else 1.0)
