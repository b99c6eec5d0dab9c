import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from zoneloc.errors import DegenerateFitError, DomainError
from zoneloc.statfit import Family, cdf, estimate_params, eval_distribution, pdf
from zoneloc.statfit.distributions import check_params


def test_normal_two_point():
    mean, sd = estimate_params(Family.NORMAL, [-50, -60])
    assert mean == -55.0
    assert sd == pytest.approx(7.0711, abs=1e-4)


@pytest.mark.parametrize("family", list(Family))
def test_zero_variance_is_degenerate(family):
    with pytest.raises(DegenerateFitError):
        estimate_params(family, [-50, -50, -50])


@pytest.mark.parametrize("family", list(Family))
def test_single_sample_is_degenerate(family):
    with pytest.raises(DegenerateFitError):
        estimate_params(family, [-50])


def test_logistic_moment_scale():
    # Moment-matching oracle: choose s so the logistic variance s^2 pi^2 / 3 equals 25.
    x = np.array([-1.0, 1.0]) * 5 / math.sqrt(2)
    assert x.std(ddof=1) == pytest.approx(5.0)
    _, s = estimate_params(Family.LOGISTIC, x)
    assert s == pytest.approx(2.7566, abs=1e-4)
    assert stats.logistic(scale=s).var() == pytest.approx(25.0, rel=1e-12)


def test_lognormal_shifted_matches_scipy_mle():
    x = np.random.default_rng(3).normal(-70, 5, 400)
    anchor, mu, sigma = estimate_params(Family.LOGNORMAL_SHIFTED, x)
    assert anchor == x.max() + 1
    shape, _, scale = stats.lognorm.fit(anchor - x, floc=0)
    assert sigma == pytest.approx(shape, rel=1e-9)
    assert mu == pytest.approx(math.log(scale), rel=1e-9)


def test_weibull_shifted_matches_scipy_mle():
    x = np.random.default_rng(4).normal(-70, 5, 400)
    anchor, k, lam = estimate_params(Family.WEIBULL_SHIFTED, x)
    c, _, scale = stats.weibull_min.fit(anchor - x, floc=0)
    assert k == pytest.approx(c, rel=1e-4)
    assert lam == pytest.approx(scale, rel=1e-4)
    # the profile score is zero at our estimate
    y = anchor - x
    score = (y**k * np.log(y)).sum() / (y**k).sum() - 1 / k - np.log(y).mean()
    assert abs(score) < 1e-10


def test_normal_standard_values():
    p, c = eval_distribution(Family.NORMAL, (0.0, 1.0), 0.0)
    assert p == pytest.approx(0.398942, abs=1e-6)
    assert c == 0.5
    p, c = eval_distribution(Family.NORMAL, (-55.0, 7.0711), -math.inf)
    assert p == 0.0 and c == 0.0
    p, c = eval_distribution(Family.NORMAL, (-55.0, 7.0711), -1e6)
    assert p == 0.0 and c == 0.0


def test_logistic_symmetry():
    assert eval_distribution(Family.LOGISTIC, (0.0, 1.0), 0.0)[1] == 0.5


@pytest.mark.parametrize(
    "family, params, ref",
    [
        (Family.NORMAL, (-60.0, 4.0), stats.norm(-60, 4)),
        (Family.LOGISTIC, (-60.0, 2.2), stats.logistic(-60, 2.2)),
    ],
)
def test_against_scipy(family, params, ref):
    x = np.linspace(-120, 0, 481)
    np.testing.assert_allclose(pdf(family, params, x), ref.pdf(x), rtol=1e-12, atol=1e-300)
    np.testing.assert_allclose(cdf(family, params, x), ref.cdf(x), rtol=1e-12, atol=1e-300)


@pytest.mark.parametrize(
    "family, params, ref",
    [
        (Family.LOGNORMAL_SHIFTED, (-40.0, 3.0, 0.4), stats.lognorm(0.4, scale=math.exp(3.0))),
        (Family.WEIBULL_SHIFTED, (-40.0, 2.5, 20.0), stats.weibull_min(2.5, scale=20.0)),
    ],
)
def test_shifted_against_scipy(family, params, ref):
    x = np.linspace(-120, -40.5, 300)
    y = params[0] - x
    np.testing.assert_allclose(pdf(family, params, x), ref.pdf(y), rtol=1e-10)
    np.testing.assert_allclose(cdf(family, params, x), ref.sf(y), rtol=1e-10)


@pytest.mark.parametrize("family", [Family.LOGNORMAL_SHIFTED, Family.WEIBULL_SHIFTED])
def test_outside_shifted_support(family):
    params = (-40.0, 2.5, 0.5) if family is Family.LOGNORMAL_SHIFTED else (-40.0, 2.5, 20.0)
    for x in (-40.0, -30.0, 0.0):
        assert eval_distribution(family, params, x) == (0.0, 1.0)


@pytest.mark.parametrize("family", list(Family))
def test_cdf_monotone_and_bounded(family):
    x = np.random.default_rng(8).normal(-65, 6, 300)
    params = estimate_params(family, x)
    grid = np.linspace(-150, 10, 5001)
    f = cdf(family, params, grid)
    assert np.all(np.diff(f) >= 0)
    assert np.all((f >= 0) & (f <= 1))
    assert np.all(pdf(family, params, grid) >= 0)


@given(
    st.lists(st.floats(-100, -20, allow_nan=False), min_size=2, max_size=50),
    st.floats(-50, 50, allow_nan=False),
)
@settings(max_examples=200, deadline=None)
def test_normal_translation_equivariance(samples, c):
    x = np.array(samples)
    if x.std() < 1e-3:
        return
    mean, sd = estimate_params(Family.NORMAL, x)
    mean2, sd2 = estimate_params(Family.NORMAL, x + c)
    assert abs(mean2 - (mean + c)) <= 1e-12
    assert abs(sd2 - sd) <= 1e-12


def test_translation_equivariance_tight():
    x = np.random.default_rng(11).normal(-60, 4, 200)
    mean, sd = estimate_params(Family.NORMAL, x)
    for c in (-17.25, 3.5, 40.0):
        m2, s2 = estimate_params(Family.NORMAL, x + c)
        assert abs(m2 - (mean + c)) <= 1e-12
        assert abs(s2 - sd) <= 1e-12


def test_check_params():
    check_params(Family.NORMAL, (-50.0, 1.0))
    with pytest.raises(DomainError):
        check_params(Family.NORMAL, (-50.0, 0.0))
    with pytest.raises(DomainError):
        check_params(Family.WEIBULL_SHIFTED, (-40.0, 2.0))
    with pytest.raises(DomainError):
        check_params(Family.WEIBULL_SHIFTED, (-40.0, -2.0, 1.0))
    check_params(Family.LOGNORMAL_SHIFTED, (-40.0, -2.0, 1.0))


def test_family_parse():
    assert Family.parse(" Normal ") is Family.NORMAL
    with pytest.raises(DomainError):
        Family.parse("cauchy")
