"""Rank-frequency construction and power-law fits with AIC selection.

Two laws are fitted in log-log space by least squares:

    plain:      f(r) = C * r^(-alpha)
    shifted:    f(r) = C * (r + beta)^(-alpha),  beta >= 0

The shifted variant captures heavy-head curvature; beta is found by a
golden-section search on [0, 1000] (interval refined to 1e-6) with the
closed-form OLS solution for (ln C, alpha) evaluated at each candidate
beta.  Model choice uses the Gaussian least-squares AIC on the log-space
residuals, n*ln(RSS/n) + 2p; the model with fewer parameters wins ties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discovery import TokenUsageTable

BETA_SEARCH_MAX = 1000.0
BETA_TOL = 1e-6
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# Floor applied inside the AIC formula so exact fits (RSS == 0) stay ordered.
_RSS_FLOOR = 1e-300


class EmptyTable(ValueError):
    pass


class DegenerateRanks(ValueError):
    def __init__(self, n: int, needed: int):
        super().__init__(f"need at least {needed} ranks, got {n}")


class MismatchedPoints(ValueError):
    pass


@dataclass(frozen=True)
class RankFrequency:
    """Frequencies sorted descending; ties broken by ascending token id."""

    ranks: tuple[int, ...]
    freqs: tuple[float, ...]
    token_ids: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(f <= 0 for f in self.freqs):
            raise ValueError("frequencies must be positive")
        if any(self.freqs[i] < self.freqs[i + 1] for i in range(len(self.freqs) - 1)):
            raise ValueError("frequencies must be non-increasing")


@dataclass(frozen=True)
class ZipfFit:
    C: float
    alpha: float
    rss_log: float
    aic: float
    n_points: int


@dataclass(frozen=True)
class ZipfMandelbrotFit:
    C: float
    alpha: float
    beta: float
    rss_log: float
    aic: float
    n_points: int


def rank_frequencies(usage: TokenUsageTable) -> RankFrequency:
    """Order the usage table by frequency descending, token id ascending."""
    if not usage.entries:
        raise EmptyTable("usage table has no entries")
    ordered = sorted(usage.entries.items(), key=lambda kv: (-kv[1][0], kv[0]))
    return RankFrequency(
        ranks=tuple(range(1, len(ordered) + 1)),
        freqs=tuple(float(freq) for _, (freq, _) in ordered),
        token_ids=tuple(tid for tid, _ in ordered),
    )


def rank_frequency_from_freqs(freqs: list[float] | np.ndarray) -> RankFrequency:
    """Build a RankFrequency directly from positive frequencies (sorted here)."""
    ordered = sorted((float(f) for f in freqs), reverse=True)
    return RankFrequency(
        ranks=tuple(range(1, len(ordered) + 1)),
        freqs=tuple(ordered),
        token_ids=tuple(range(len(ordered))),
    )


def _aic(rss: float, n: int, n_params: int) -> float:
    return n * math.log(max(rss, _RSS_FLOOR) / n) + 2.0 * n_params


def _safe_exp(value: float) -> float:
    # Near-degenerate tables (tiny rank spread after a large beta shift) can
    # push the OLS intercept past the float range; the scale is then
    # effectively unbounded.
    try:
        return math.exp(value)
    except OverflowError:
        return math.inf


def _loglog_ols(log_r: np.ndarray, log_f: np.ndarray) -> tuple[float, float, float]:
    """OLS of log f on log r; returns (intercept ln C, slope, RSS)."""
    x = log_r - log_r.mean()
    sxx = float(x @ x)
    slope = float(x @ (log_f - log_f.mean())) / sxx
    intercept = float(log_f.mean() - slope * log_r.mean())
    resid = log_f - (intercept + slope * log_r)
    return intercept, slope, float(resid @ resid)


def fit_zipf(rf: RankFrequency) -> ZipfFit:
    """Fit f(r) = C * r^(-alpha) by least squares in log-log space."""
    n = len(rf.ranks)
    if n < 3:
        raise DegenerateRanks(n, 3)
    log_r = np.log(np.asarray(rf.ranks, dtype=float))
    log_f = np.log(np.asarray(rf.freqs, dtype=float))
    intercept, slope, rss = _loglog_ols(log_r, log_f)
    return ZipfFit(
        C=_safe_exp(intercept), alpha=-slope, rss_log=rss, aic=_aic(rss, n, 2), n_points=n
    )


def fit_zipf_mandelbrot(rf: RankFrequency) -> ZipfMandelbrotFit:
    """Fit f(r) = C * (r + beta)^(-alpha) with beta >= 0.

    Outer golden-section search on beta; inner closed-form OLS for
    (ln C, alpha).  Since beta = 0 is feasible, the returned RSS is never
    worse than the plain fit's.
    """
    n = len(rf.ranks)
    if n < 4:
        raise DegenerateRanks(n, 4)
    ranks = np.asarray(rf.ranks, dtype=float)
    log_f = np.log(np.asarray(rf.freqs, dtype=float))

    def rss_at(beta: float) -> float:
        return _loglog_ols(np.log(ranks + beta), log_f)[2]

    lo, hi = 0.0, BETA_SEARCH_MAX
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = rss_at(x1), rss_at(x2)
    while hi - lo > BETA_TOL:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = rss_at(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = rss_at(x2)
    beta = (lo + hi) / 2.0
    # The closed endpoint beta = 0 can beat the interior midpoint.
    if rss_at(0.0) <= rss_at(beta):
        beta = 0.0
    intercept, slope, rss = _loglog_ols(np.log(ranks + beta), log_f)
    return ZipfMandelbrotFit(
        C=_safe_exp(intercept),
        alpha=-slope,
        beta=beta,
        rss_log=rss,
        aic=_aic(rss, n, 3),
        n_points=n,
    )


def select_model_aic(
    zipf: ZipfFit, zm: ZipfMandelbrotFit
) -> tuple[str, float]:
    """Pick the lower-AIC model; returns (label, delta_aic >= 0).

    Labels are "zipf" and "zipf_mandelbrot".  On an exact AIC tie the plain
    model wins (fewer parameters).
    """
    if zipf.n_points != zm.n_points:
        raise MismatchedPoints(
            f"fits cover different point counts: {zipf.n_points} vs {zm.n_points}"
        )
    if zipf.aic <= zm.aic:
        return "zipf", zm.aic - zipf.aic
    return "zipf_mandelbrot", zipf.aic - zm.aic
