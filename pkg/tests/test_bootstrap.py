import math

import numpy as np
import pytest
from scipy import stats as sps

from joint_effect import (
    BootstrapDraws,
    RngStream,
    bvn_rect,
    ci_bonf_normal,
    ci_bonf_quantile,
    ci_gkl,
    ci_mandel_betensky,
    ci_mvn,
    equicoordinate_quantile,
    point_estimates,
    range_preserve,
    resample_effects,
)
from joint_effect.errors import EmptyRegionError, ParameterError, SingularCovarianceError


def make_draws(theta_star, i2_star, origin_xy=None, seed=123):
    theta_star = np.asarray(theta_star, dtype=float)
    i2_star = np.asarray(i2_star, dtype=float)
    if origin_xy is None:
        origin = point_estimates([1.0, 2.0, 3.0, 4.0], [1.5, 2.5, 3.5, 4.5])
    else:
        origin = point_estimates(*origin_xy)
    return BootstrapDraws(theta_star, i2_star, len(theta_star), origin, RngStream(seed))


class TestBvnRect:
    def test_independence_factorization(self):
        c = 1.959964
        expect = (2 * sps.norm.cdf(c) - 1) ** 2
        assert bvn_rect(c, 0.0) == pytest.approx(expect, abs=1e-9)
        assert bvn_rect(c, 0.0) == pytest.approx(0.9025, abs=1e-4)

    def test_perfect_dependence_limit(self):
        c = 1.959964
        assert bvn_rect(c, 1 - 1e-13) == pytest.approx(0.95, abs=1e-4)
        assert bvn_rect(c, -1.0) == pytest.approx(0.95, abs=1e-4)

    def test_against_independent_reference(self):
        # scipy's mvn integrator as an independent oracle
        for c, rho in [(2.0, 0.5), (1.5, -0.8), (2.5, 0.3)]:
            ref = sps.multivariate_normal.cdf(
                [c, c], mean=[0, 0], cov=[[1, rho], [rho, 1]], lower_limit=[-c, -c]
            )
            assert bvn_rect(c, rho) == pytest.approx(float(ref), abs=3e-4)

    def test_symmetric_in_rho_sign(self):
        assert bvn_rect(2.0, 0.5) == pytest.approx(bvn_rect(2.0, -0.5), abs=1e-9)


def test_equicoordinate_quantile_independent_case():
    c = equicoordinate_quantile(0.95, 0.0)
    assert (2 * sps.norm.cdf(c) - 1) ** 2 == pytest.approx(0.95, abs=1e-6)
    assert c == pytest.approx(2.2364766, abs=1e-5)


def test_bonf_normal_multiplier():
    assert -sps.norm.ppf(0.05 / 4) == pytest.approx(2.241403, abs=1e-6)


class TestResample:
    def test_deterministic_given_stream(self):
        g = RngStream(5).generator()
        x, y = g.normal(size=30), g.normal(size=25)
        d1 = resample_effects(x, y, 200, RngStream(9))
        d2 = resample_effects(x, y, 200, RngStream(9))
        assert np.array_equal(d1.theta_star, d2.theta_star)
        assert np.array_equal(d1.i2_star, d2.i2_star)
        d3 = resample_effects(x, y, 200, RngStream(10))
        assert not np.array_equal(d1.theta_star, d3.theta_star)

    def test_constant_data_draws_are_constant(self):
        x = np.full(6, 2.0)
        draws = resample_effects(x, x.copy(), 150, RngStream(1))
        from joint_effect import i2_hat, theta_hat

        assert np.all(draws.theta_star == theta_hat(x, x))
        assert np.all(draws.theta_star == 0.5)
        assert np.all(draws.i2_star == i2_hat(x, x))

    def test_theta_spread_matches_null_variance(self):
        g = RngStream(6).generator()
        x, y = g.normal(size=50), g.normal(size=50)
        draws = resample_effects(x, y, 1000, RngStream(77))
        target = math.sqrt((1 / 12) * (2 / 50))
        assert np.std(draws.theta_star, ddof=1) == pytest.approx(target, rel=0.25)


class TestCiMvn:
    def test_reference_interval_shape(self):
        g = RngStream(8).generator()
        x = g.normal(0, 1, 50)
        y = g.normal(1, 1, 50)
        draws = resample_effects(x, y, 1000, RngStream(3))
        region = ci_mvn(draws, 0.05)
        assert region.kind == "ellipse"
        assert region.radius == pytest.approx(math.sqrt(-2 * math.log(0.05)), abs=1e-12)
        est = draws.origin
        r = region.rectangle
        assert r.theta_lo < est.theta < r.theta_hi
        assert r.i2_lo < est.i2 < r.i2_hi
        # marginal half-widths are the equicoordinate multiple of the sds
        sd = np.sqrt(np.diag(region.covariance))
        rho = region.covariance[0, 1] / (sd[0] * sd[1])
        c = equicoordinate_quantile(0.95, rho)
        assert r.theta_hi - r.theta_lo == pytest.approx(2 * c * sd[0], rel=1e-9)

    def test_zero_spread_draws_singular(self):
        draws = make_draws(np.full(200, 0.4), np.full(200, 0.3))
        with pytest.raises(SingularCovarianceError):
            ci_mvn(draws)

    def test_needs_hundred_draws(self):
        draws = make_draws(np.linspace(0.3, 0.5, 50), np.linspace(0.2, 0.4, 50))
        with pytest.raises(ParameterError):
            ci_mvn(draws)


class TestBonfQuantile:
    def test_percentile_bounds_are_quantiles(self):
        g = RngStream(12).generator()
        t = g.uniform(0.4, 0.6, 500)
        i = g.uniform(0.3, 0.5, 500)
        draws = make_draws(t, i)
        region = ci_bonf_quantile(draws, 0.05)
        r = region.rectangle
        assert r.theta_lo == pytest.approx(np.quantile(t, 0.0125), abs=1e-12)
        assert r.theta_hi == pytest.approx(np.quantile(t, 0.9875), abs=1e-12)

    def test_basic_orientation_reflects(self):
        g = RngStream(13).generator()
        t = g.uniform(0.4, 0.6, 400)
        i = g.uniform(0.3, 0.5, 400)
        draws = make_draws(t, i)
        perc = ci_bonf_quantile(draws, 0.05, orientation="percentile").rectangle
        basic = ci_bonf_quantile(draws, 0.05, orientation="basic").rectangle
        th = draws.origin.theta
        assert basic.theta_lo == pytest.approx(2 * th - perc.theta_hi, abs=1e-12)
        assert basic.theta_hi == pytest.approx(2 * th - perc.theta_lo, abs=1e-12)

    def test_symmetric_draws_give_symmetric_interval(self):
        g = RngStream(14).generator()
        th = 0.45
        t = th + np.concatenate([g.normal(0, 0.01, 3000), -g.normal(0, 0.01, 3000)])
        draws = make_draws(t, t + 0.1)
        r = ci_bonf_quantile(draws, 0.05).rectangle
        assert (r.theta_hi - th) == pytest.approx(th - r.theta_lo, abs=2e-3)


def test_bonf_normal_zero_spread_zero_width():
    draws = make_draws(np.full(150, 0.4), np.full(150, 0.3))
    r = ci_bonf_normal(draws).rectangle
    est = draws.origin
    assert r.theta_hi - r.theta_lo == pytest.approx(0.0, abs=1e-12)
    assert r.i2_hi - r.i2_lo == pytest.approx(0.0, abs=1e-12)
    assert r.theta_lo == pytest.approx(est.theta, abs=1e-12)
    assert r.i2_lo == pytest.approx(est.i2, abs=1e-12)


class TestOrderStatisticBoxes:
    def test_comonotone_draws_collapse_to_marginal_quantiles(self):
        g = RngStream(15).generator()
        t = np.sort(g.uniform(0.3, 0.7, 1000))
        draws = make_draws(t, 0.5 * t + 0.1)  # strictly comonotone, no ties
        mb = ci_mandel_betensky(draws, 0.05).rectangle
        gkl_region = ci_gkl(draws, 0.05)
        B = 1000
        hi = int(np.ceil(0.975 * B))
        lo = int(np.ceil(0.025 * B))
        ts = np.sort(t)
        assert mb.theta_hi == ts[hi - 1]
        assert mb.theta_lo == ts[lo - 1]
        gk = gkl_region.rectangle
        assert (gk.theta_lo, gk.theta_hi) == (mb.theta_lo, mb.theta_hi)
        assert (gk.i2_lo, gk.i2_hi) == (mb.i2_lo, mb.i2_hi)

    def test_limits_are_drawn_values(self):
        g = RngStream(16).generator()
        draws = make_draws(g.normal(0.5, 0.05, 777), g.normal(0.4, 0.07, 777))
        for region in (ci_mandel_betensky(draws), ci_gkl(draws)):
            r = region.rectangle
            assert r.theta_lo in draws.theta_star and r.theta_hi in draws.theta_star
            assert r.i2_lo in draws.i2_star and r.i2_hi in draws.i2_star

    def test_gkl_contained_in_mb_random_draws(self):
        rng = RngStream(17)
        strict = 0
        for rep in range(200):
            g = rng.child(rep).generator()
            B = int(g.integers(100, 1200))
            rho = g.uniform(-1, 1)
            z = g.multivariate_normal([0.5, 0.4], [[1e-3, rho * 1e-3], [rho * 1e-3, 2e-3]], B)
            draws = make_draws(z[:, 0], z[:, 1], seed=rep)
            mb = ci_mandel_betensky(draws).rectangle
            gk = ci_gkl(draws).rectangle
            assert gk.theta_lo >= mb.theta_lo and gk.theta_hi <= mb.theta_hi
            assert gk.i2_lo >= mb.i2_lo and gk.i2_hi <= mb.i2_hi
            strict += gk.theta_hi < mb.theta_hi or gk.i2_hi < mb.i2_hi
        assert strict > 0  # the sharpening actually bites somewhere

    def test_mb_self_coverage_independent_coordinates(self):
        # with independent normal coordinates the joint coverage of the box
        # can be computed analytically from the marginal normal cdfs
        g = RngStream(18).generator()
        mu_t, sd_t, mu_i, sd_i = 0.5, 0.02, 0.4, 0.03
        t = g.normal(mu_t, sd_t, 10_000)
        i = g.normal(mu_i, sd_i, 10_000)
        draws = make_draws(t, i)
        r = ci_mandel_betensky(draws, 0.05).rectangle
        cov_t = sps.norm.cdf(r.theta_hi, mu_t, sd_t) - sps.norm.cdf(r.theta_lo, mu_t, sd_t)
        cov_i = sps.norm.cdf(r.i2_hi, mu_i, sd_i) - sps.norm.cdf(r.i2_lo, mu_i, sd_i)
        assert 0.94 <= cov_t * cov_i <= 0.96

    def test_tie_breaking_is_deterministic(self):
        g = RngStream(19).generator()
        t = np.round(g.uniform(0.3, 0.7, 600), 2)  # heavy ties
        i = np.round(g.uniform(0.2, 0.6, 600), 2)
        draws = make_draws(t, i, seed=55)
        r1 = ci_mandel_betensky(draws).rectangle
        r2 = ci_mandel_betensky(draws).rectangle
        assert r1 == r2


def test_coordinate_swap_equivariance():
    from joint_effect import EffectEstimates

    g = RngStream(20).generator()
    t = g.normal(0.5, 0.04, 800)
    i = g.normal(0.35, 0.06, 800)
    origin = EffectEstimates(theta=0.5, i1=0.3, i2=0.35, n=40, m=40)
    origin_sw = EffectEstimates(theta=0.35, i1=0.3, i2=0.5, n=40, m=40)
    draws = BootstrapDraws(t, i, 800, origin, RngStream(123))
    swapped = BootstrapDraws(i, t, 800, origin_sw, RngStream(123))
    for f in (ci_bonf_quantile, ci_bonf_normal, ci_mandel_betensky, ci_gkl):
        a = f(draws).rectangle
        b = f(swapped).rectangle
        assert (a.theta_lo, a.theta_hi) == pytest.approx((b.i2_lo, b.i2_hi), abs=1e-12)
        assert (a.i2_lo, a.i2_hi) == pytest.approx((b.theta_lo, b.theta_hi), abs=1e-12)
    a = ci_mvn(draws).rectangle
    b = ci_mvn(swapped).rectangle
    assert (a.theta_lo, a.theta_hi) == pytest.approx((b.i2_lo, b.i2_hi), rel=1e-9)


class TestRangePreserve:
    def test_inside_box_unchanged(self):
        g = RngStream(21).generator()
        draws = make_draws(g.uniform(0.45, 0.55, 300), g.uniform(0.35, 0.45, 300))
        region = ci_bonf_quantile(draws)
        out = range_preserve(region)
        assert not out.clipped
        assert out.rectangle == region.rectangle

    def test_theta_capped_at_one(self):
        x = np.arange(1.0, 21.0)
        y = x + 17.5  # nearly separated: the normal interval overshoots 1
        draws = resample_effects(x, y, 300, RngStream(2))
        region = ci_bonf_normal(draws)  # normal interval overshoots 1
        assert region.rectangle.theta_hi > 1.0
        out = range_preserve(region)
        assert out.clipped
        assert out.rectangle.theta_hi <= 1.0
        assert out.rectangle.i2_lo >= 0.0

    def test_empty_intersection_propagates(self):
        draws = make_draws(
            np.linspace(0.89, 0.93, 200), np.linspace(0.55, 0.60, 200)
        )
        region = ci_bonf_quantile(draws)
        with pytest.raises(EmptyRegionError):
            range_preserve(region)
