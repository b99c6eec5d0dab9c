"""Candidate RSS distribution families: parameter estimation and evaluation.

Parameter vectors per family:

- ``NORMAL``:            ``(mean, stdev)``
- ``LOGISTIC``:          ``(mean, scale)``
- ``LOGNORMAL_SHIFTED``: ``(anchor, mu, sigma)``
- ``WEIBULL_SHIFTED``:   ``(anchor, shape, scale)``

The shifted families model the reflected value ``y = anchor - x`` where
``anchor = max(samples) + 1``, so every training sample maps to ``y >= 1``.
Readings at or above the anchor lie outside the support.
"""

from __future__ import annotations

import enum
import math

import numpy as np
from scipy.optimize import brentq
from scipy.special import erfc, expit

from ..errors import DegenerateFitError, DomainError

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


class Family(str, enum.Enum):
    NORMAL = "normal"
    LOGISTIC = "logistic"
    LOGNORMAL_SHIFTED = "lognormal_shifted"
    WEIBULL_SHIFTED = "weibull_shifted"

    @classmethod
    def parse(cls, text: str) -> "Family":
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join(f.value for f in cls)
            raise DomainError(f"unknown distribution family {text!r} (expected one of {names})") from None

    @property
    def n_params(self) -> int:
        return 2 if self in (Family.NORMAL, Family.LOGISTIC) else 3


# Indices of parameters that must be strictly positive (scale/shape).
_POSITIVE = {
    Family.NORMAL: (1,),
    Family.LOGISTIC: (1,),
    Family.LOGNORMAL_SHIFTED: (2,),
    Family.WEIBULL_SHIFTED: (1, 2),
}


def _as_array(samples) -> np.ndarray:
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1:
        raise DomainError("samples must be one-dimensional")
    return x


def _reflect(x: np.ndarray) -> tuple[float, np.ndarray]:
    anchor = float(x.max()) + 1.0
    return anchor, anchor - x


def _weibull_shape(y: np.ndarray) -> float:
    # Profile MLE equation for the shape k; invariant to rescaling y.
    z = y / y.max()
    logz = np.log(z)
    mean_log = logz.mean()

    def score(k: float) -> float:
        w = z**k
        return float((w * logz).sum() / w.sum() - 1.0 / k - mean_log)

    lo, hi = 1e-3, 1.0
    while score(lo) > 0:
        lo /= 10.0
    while score(hi) < 0:
        hi *= 2.0
        if hi > 1e8:
            raise DegenerateFitError("Weibull shape estimate diverged")
    return brentq(score, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=500)


def estimate_params(family: Family, samples) -> tuple[float, ...]:
    """Estimate parameters of ``family`` from ``samples``.

    Normal and Logistic use moment estimates (sample stdev with ``n - 1``);
    the shifted families use maximum likelihood on the reflected data.
    Raises DegenerateFitError for fewer than two samples or zero spread.
    """
    x = _as_array(samples)
    if x.size < 2:
        raise DegenerateFitError(f"need at least 2 samples, got {x.size}")
    if family in (Family.NORMAL, Family.LOGISTIC):
        mean = float(x.mean())
        stdev = float(x.std(ddof=1))
        if not stdev > 0.0:
            raise DegenerateFitError("zero sample variance")
        if family is Family.NORMAL:
            return (mean, stdev)
        return (mean, stdev * math.sqrt(3.0) / math.pi)

    anchor, y = _reflect(x)
    if family is Family.LOGNORMAL_SHIFTED:
        logy = np.log(y)
        sigma = float(logy.std(ddof=0))
        if not sigma > 0.0:
            raise DegenerateFitError("zero variance of log-reflected samples")
        return (anchor, float(logy.mean()), sigma)
    if family is Family.WEIBULL_SHIFTED:
        if not float(np.log(y).std()) > 0.0:
            raise DegenerateFitError("zero variance of log-reflected samples")
        k = _weibull_shape(y)
        scale = float(y.max() * np.mean((y / y.max()) ** k) ** (1.0 / k))
        return (anchor, float(k), scale)
    raise DomainError(f"unsupported family {family!r}")


def check_params(family: Family, params) -> None:
    if len(params) != family.n_params:
        raise DomainError(f"{family.value} expects {family.n_params} parameters, got {len(params)}")
    if not all(math.isfinite(p) for p in params):
        raise DomainError("parameters must be finite")
    if any(params[i] <= 0 for i in _POSITIVE[family]):
        raise DomainError(f"non-positive scale/shape in {family.value} parameters {tuple(params)}")


def pdf(family: Family, params, x):
    """Density at ``x`` (scalar or array)."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        if family is Family.NORMAL:
            mean, sd = params
            z = (x - mean) / sd
            return np.exp(-0.5 * z * z) / (sd * _SQRT2PI)
        if family is Family.LOGISTIC:
            mean, s = params
            e = np.exp(-np.abs((x - mean) / s))
            return e / (s * (1.0 + e) ** 2)
        anchor = params[0]
        y = anchor - x
        inside = y > 0
        ys = np.where(inside, y, 1.0)
        if family is Family.LOGNORMAL_SHIFTED:
            _, mu, sigma = params
            z = (np.log(ys) - mu) / sigma
            val = np.exp(-0.5 * z * z) / (ys * sigma * _SQRT2PI)
        elif family is Family.WEIBULL_SHIFTED:
            _, k, lam = params
            t = ys / lam
            val = (k / lam) * t ** (k - 1.0) * np.exp(-(t**k))
        else:
            raise DomainError(f"unsupported family {family!r}")
        return np.where(inside, val, 0.0)


def cdf(family: Family, params, x):
    """Cumulative probability ``P(X <= x)`` (scalar or array)."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        if family is Family.NORMAL:
            mean, sd = params
            return 0.5 * erfc(-(x - mean) / (sd * _SQRT2))
        if family is Family.LOGISTIC:
            mean, s = params
            return expit((x - mean) / s)
        anchor = params[0]
        y = anchor - x
        inside = y > 0
        ys = np.where(inside, y, 1.0)
        # P(X <= x) = P(Y >= anchor - x), the upper tail of the reflected law.
        if family is Family.LOGNORMAL_SHIFTED:
            _, mu, sigma = params
            val = 0.5 * erfc((np.log(ys) - mu) / (sigma * _SQRT2))
        elif family is Family.WEIBULL_SHIFTED:
            _, k, lam = params
            val = np.exp(-((ys / lam) ** k))
        else:
            raise DomainError(f"unsupported family {family!r}")
        return np.where(inside, val, 1.0)


def eval_distribution(family: Family, params, x: float) -> tuple[float, float]:
    """Return ``(pdf, cdf)`` of the fitted law at a single reading."""
    return float(pdf(family, params, x)), float(cdf(family, params, x))
