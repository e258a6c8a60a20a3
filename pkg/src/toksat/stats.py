"""Cross-language statistics: Pearson correlation and OLS regression.

Two-tailed p-values come from Student's t distribution with n-2 (or
residual) degrees of freedom, evaluated through the regularized incomplete
beta function.  The beta function uses the modified Lentz continued
fraction with the usual symmetry switch, converged to 1e-12 relative, so
no external statistics dependency is needed.  Regression solves the
least-squares problem by QR-backed lstsq and reports per-coefficient
t-tests plus the overall F-test against the intercept-only model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

_BETAINC_TOL = 1e-12
_BETAINC_MAX_ITER = 500
_TINY = 1e-300


class ZeroVariance(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class TooFewObservations(ValueError):
    pass


class RankDeficient(ValueError):
    pass


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p_two_tailed: float
    n: int


@dataclass(frozen=True)
class Coefficient:
    estimate: float
    std_error: float
    t: float
    p: float


@dataclass(frozen=True)
class RegressionResult:
    coefficients: Mapping[str, Coefficient]
    r_squared: float
    adj_r_squared: float
    f_statistic: float
    f_p: float
    df_model: int
    df_resid: int


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETAINC_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETAINC_TOL:
            return h
    raise RuntimeError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    front = math.exp(
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_cdf(t: float, df: float) -> float:
    """CDF of Student's t with df degrees of freedom."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if t == 0.0:
        return 0.5
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    x = df / (df + t * t)
    tail = 0.5 * betainc_reg(df / 2.0, 0.5, x)
    return 1.0 - tail if t > 0 else tail


def student_t_sf_two_tailed(t: float, df: float) -> float:
    """Two-tailed p-value P(|T| >= |t|)."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if math.isinf(t):
        return 0.0
    return betainc_reg(df / 2.0, 0.5, df / (df + t * t)) if t != 0.0 else 1.0


def f_sf(f: float, df1: float, df2: float) -> float:
    """Upper-tail probability of the F distribution."""
    if df1 <= 0 or df2 <= 0:
        raise ValueError("degrees of freedom must be positive")
    if f <= 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    return betainc_reg(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f))


def p_from_r(r: float, n: int) -> float:
    """Two-tailed p for a sample correlation r at sample size n."""
    if n < 3:
        raise TooFewObservations("correlation p-value needs n >= 3")
    if abs(r) >= 1.0:
        return 0.0
    t = r * math.sqrt(n - 2) / math.sqrt(1.0 - r * r)
    return student_t_sf_two_tailed(t, n - 2)


def pearson_corr(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Sample Pearson correlation with a two-tailed t-test p-value."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise LengthMismatch(f"x has shape {xa.shape}, y has shape {ya.shape}")
    n = len(xa)
    if n < 3:
        raise TooFewObservations(f"need n >= 3, got {n}")
    xc = xa - xa.mean()
    yc = ya - ya.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("correlation undefined for a constant vector")
    r = float(xc @ yc) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    return CorrelationResult(r=r, p_two_tailed=p_from_r(r, n), n=n)


def script_dummies(
    scripts: Sequence[str], reference: str = "Latin"
) -> dict[str, list[float]]:
    """0/1 indicator columns for each non-reference script, sorted by name."""
    levels = sorted({s for s in scripts if s != reference})
    return {
        f"script_{level}": [1.0 if s == level else 0.0 for s in scripts] for level in levels
    }


def ols_regression(
    columns: Mapping[str, Sequence[float]], y: Sequence[float]
) -> RegressionResult:
    """Ordinary least squares on named predictor columns.

    ``columns`` must include an ``intercept`` column of ones (callers build
    the design explicitly; :func:`script_dummies` produces categorical
    indicators with Latin as the reference level).  Reports per-coefficient
    two-tailed t-tests and the overall F-test against the intercept-only
    model.
    """
    names = list(columns)
    if "intercept" not in names:
        raise ValueError("design must include an 'intercept' column of ones")
    ya = np.asarray(y, dtype=float)
    design = np.column_stack([np.asarray(columns[name], dtype=float) for name in names])
    n, p_full = design.shape
    if ya.shape != (n,):
        raise LengthMismatch(f"y has shape {ya.shape}, design has {n} rows")
    if n <= p_full:
        raise TooFewObservations(f"need n > {p_full} observations, got {n}")
    if np.linalg.matrix_rank(design) < p_full:
        raise RankDeficient("design matrix does not have full column rank")

    beta, _, _, _ = np.linalg.lstsq(design, ya, rcond=None)
    fitted = design @ beta
    resid = ya - fitted
    rss = float(resid @ resid)
    tss = float(np.sum((ya - ya.mean()) ** 2))
    df_model = p_full - 1
    df_resid = n - p_full
    r_squared = 1.0 - rss / tss if tss > 0 else float("nan")
    adj_r_squared = 1.0 - (1.0 - r_squared) * (n - 1) / df_resid if tss > 0 else float("nan")

    sigma2 = rss / df_resid
    xtx_inv = np.linalg.inv(design.T @ design)
    std_errors = np.sqrt(np.maximum(sigma2 * np.diag(xtx_inv), 0.0))
    coefficients: dict[str, Coefficient] = {}
    for name, est, se in zip(names, beta, std_errors):
        if se > 0.0:
            t = float(est / se)
            p = student_t_sf_two_tailed(t, df_resid)
        else:
            t = math.inf if est > 0 else (-math.inf if est < 0 else 0.0)
            p = 0.0 if est != 0 else 1.0
        coefficients[name] = Coefficient(estimate=float(est), std_error=float(se), t=t, p=p)

    if df_model > 0:
        if rss > 0:
            f_statistic = ((tss - rss) / df_model) / (rss / df_resid)
            f_p = f_sf(f_statistic, df_model, df_resid)
        else:
            f_statistic = math.inf
            f_p = 0.0
    else:
        f_statistic = math.nan
        f_p = math.nan

    return RegressionResult(
        coefficients=coefficients,
        r_squared=r_squared,
        adj_r_squared=adj_r_squared,
        f_statistic=f_statistic,
        f_p=f_p,
        df_model=df_model,
        df_resid=df_resid,
    )
