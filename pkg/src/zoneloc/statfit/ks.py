"""One-sample Kolmogorov-Smirnov statistic and critical values."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.stats import kstwo

from ..errors import DomainError
from .distributions import Family, cdf

#: Supported significance levels and their asymptotic coefficients c(alpha).
ASYMPTOTIC_COEFF = {0.01: 1.628, 0.05: 1.358, 0.10: 1.224}

#: Largest n served from the exact table; beyond it c(alpha)/sqrt(n) is used.
EXACT_TABLE_MAX_N = 40


def ks_statistic(samples, family: Family, params) -> float:
    """Supremum distance between the empirical CDF of ``samples`` and the fitted CDF.

    Evaluated at each order statistic ``x_(i)`` as
    ``max(|i/n - F(x_(i))|, |(i-1)/n - F(x_(i))|)``, which covers both sides
    of every ECDF jump, ties included.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise DomainError("K-S statistic needs at least one sample")
    f = cdf(family, params, x)
    i = np.arange(1, n + 1)
    above = np.abs(i / n - f)
    below = np.abs((i - 1) / n - f)
    return float(min(1.0, max(above.max(), below.max())))


def _alpha_key(alpha: float) -> float:
    for key in ASYMPTOTIC_COEFF:
        if math.isclose(alpha, key, rel_tol=0.0, abs_tol=1e-12):
            return key
    supported = ", ".join(str(a) for a in ASYMPTOTIC_COEFF)
    raise DomainError(f"unsupported significance level {alpha} (K-S table covers {supported})")


@lru_cache(maxsize=None)
def _exact_critical(n: int, alpha: float) -> float:
    return float(kstwo.ppf(1.0 - alpha, n))


def ks_critical_value(n: int, alpha: float) -> float:
    """Critical value of the K-S statistic for ``n`` samples at level ``alpha``.

    Exact quantiles of the null distribution of ``D_n`` for ``n <= 40``,
    the asymptotic ``c(alpha) / sqrt(n)`` above that.
    """
    if n < 1:
        raise DomainError(f"sample count must be >= 1, got {n}")
    key = _alpha_key(alpha)
    if n <= EXACT_TABLE_MAX_N:
        return _exact_critical(n, key)
    return ASYMPTOTIC_COEFF[key] / math.sqrt(n)
