"""Distribution layer: chi-square / Fisher tails, Gaussian sampling, KS distance.

Quantiles are always *upper-tail*: ``fisher_upper_quantile(p, alpha)`` returns
the x with P(X >= x) = alpha, since every detection test in this package
rejects for large statistics.  Central quantiles are computed through
scipy's regularized incomplete beta/gamma inverses (CDF error well below
1e-10).  Noncentral chi-square upper quantiles are replaced by an explicit
closed-form upper bound and flagged as such; the power bounds that need them
are stated in terms of this bound, not of the exact quantile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import stats

__all__ = [
    "FisherParams",
    "ChiSquareParams",
    "TailValue",
    "fisher_upper_quantile",
    "fisher_distribution",
    "chi2_upper_quantile",
    "chi2_quantile_upper_bound",
    "gaussian_sample",
    "derived_rng",
    "ks_statistic",
]


@dataclass(frozen=True)
class FisherParams:
    """Degrees of freedom of an F distribution (both strictly positive)."""

    df_num: float
    df_den: float

    def __post_init__(self):
        for name, v in (("df_num", self.df_num), ("df_den", self.df_den)):
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v}")


@dataclass(frozen=True)
class ChiSquareParams:
    """Chi-square degrees of freedom, optionally with a noncentrality parameter."""

    df: float
    noncentrality: float = 0.0

    def __post_init__(self):
        if not (self.df > 0 and math.isfinite(self.df)):
            raise ValueError(f"df must be positive and finite, got {self.df}")
        if not (self.noncentrality >= 0 and math.isfinite(self.noncentrality)):
            raise ValueError(
                f"noncentrality must be nonnegative and finite, got {self.noncentrality}"
            )


@dataclass(frozen=True)
class TailValue:
    """An upper-tail critical value; ``is_bound`` marks a bound rather than a quantile."""

    value: float
    is_bound: bool = False


def _check_alpha(alpha: float) -> float:
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    return float(alpha)


def fisher_distribution(params: FisherParams):
    """Frozen scipy F distribution for the given degrees of freedom."""
    return stats.f(params.df_num, params.df_den)


def fisher_upper_quantile(params: FisherParams, alpha: float) -> float:
    """x with P(F_{df_num, df_den} >= x) = alpha."""
    return float(stats.f.isf(_check_alpha(alpha), params.df_num, params.df_den))


def chi2_quantile_upper_bound(params: ChiSquareParams, alpha: float) -> float:
    """Closed-form upper bound on the upper-alpha quantile of a (non)central chi-square.

    For df D, noncentrality a and tail mass u the bound is
    D + a + 2 sqrt((D + 2a) log(1/u)) + 2 log(1/u).
    """
    u = _check_alpha(alpha)
    d, a = params.df, params.noncentrality
    log_term = math.log(1.0 / u)
    return d + a + 2.0 * math.sqrt((d + 2.0 * a) * log_term) + 2.0 * log_term


def chi2_upper_quantile(params: ChiSquareParams, alpha: float) -> TailValue:
    """Upper-alpha critical value of a chi-square distribution.

    Central case: the exact quantile.  Noncentral case: the closed-form upper
    bound from :func:`chi2_quantile_upper_bound`, flagged with
    ``is_bound=True``.
    """
    alpha = _check_alpha(alpha)
    if params.noncentrality == 0.0:
        return TailValue(float(stats.chi2.isf(alpha, params.df)), is_bound=False)
    return TailValue(chi2_quantile_upper_bound(params, alpha), is_bound=True)


def derived_rng(seed: int, *stream: int) -> np.random.Generator:
    """Deterministic generator for (seed, substream...) index tuples.

    Independent substreams derived this way can be drawn in any order (or in
    parallel) with results identical to sequential execution.
    """
    return np.random.default_rng((int(seed),) + tuple(int(s) for s in stream))


def gaussian_sample(mean, scale, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` i.i.d. Gaussian d-vectors, deterministically from ``seed``.

    Parameters
    ----------
    mean : scalar or (d,) array
        Per-coordinate mean; its length fixes the dimension d.
    scale : positive scalar or (d,) array
        Per-coordinate standard deviation.
    count : int
        Number of observations to draw.
    seed : int
        Seed; equal seeds give identical output.

    Returns
    -------
    (count, d) ndarray
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    mu = np.atleast_1d(np.asarray(mean, dtype=float))
    if mu.ndim != 1:
        raise ValueError("mean must be a scalar or a vector")
    sd = np.broadcast_to(np.asarray(scale, dtype=float), mu.shape)
    if np.any(sd <= 0.0) or not np.all(np.isfinite(sd)):
        raise ValueError("scale must be strictly positive and finite")
    if not np.all(np.isfinite(mu)):
        raise ValueError("mean must be finite")
    rng = derived_rng(seed)
    return mu + sd * rng.standard_normal((int(count), mu.shape[0]))


def ks_statistic(samples: Sequence[float], cdf) -> float:
    """Kolmogorov-Smirnov sup distance between a sample and a reference CDF.

    ``cdf`` may be a callable or any object with a ``.cdf`` method (e.g. a
    frozen scipy distribution).
    """
    x = np.sort(np.asarray(samples, dtype=float))
    m = x.shape[0]
    if m < 2:
        raise ValueError("KS statistic needs at least 2 samples")
    fn: Callable[[np.ndarray], np.ndarray] = cdf.cdf if hasattr(cdf, "cdf") else cdf
    f = np.asarray(fn(x), dtype=float)
    grid = np.arange(1, m + 1) / m
    return float(max(np.max(grid - f), np.max(f - (grid - 1.0 / m))))
