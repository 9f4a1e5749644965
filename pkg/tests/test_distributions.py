import numpy as np
import pytest

from joint_effect import (
    RngStream,
    beta,
    cauchy,
    cdf,
    chi_square,
    exponential,
    format_dist,
    normal,
    parse_dist,
    pdf,
    quantile,
    sample,
    uniform,
)
from joint_effect._quad import integrate
from joint_effect.errors import ParameterError

from conftest import ecdf_distance

ALL_FAMILIES = [
    normal(0.0, 1.0),
    normal(-2.0, 3.0),
    uniform(-0.5, 0.5),
    exponential(1.0),
    exponential(0.25),
    beta(2.0, 3.0),
    beta(0.5, 0.5),
    cauchy(0.0, 1.0),
    cauchy(1.0, 2.0),
    chi_square(1),
    chi_square(5),
]


def test_normal_cdf_at_mean_is_half():
    assert cdf(normal(0, 1), 0.0) == pytest.approx(0.5, abs=1e-15)


def test_uniform_cdf_is_linear():
    assert cdf(uniform(-0.5, 0.5), 0.25) == pytest.approx(0.75, abs=1e-15)


def test_exponential_cdf_against_series():
    # independent series evaluation of 1 - e^{-x} at x = 1
    x = 1.0
    term, total = 1.0, 0.0
    for k in range(1, 60):
        term *= -x / k
        total -= term
    assert cdf(exponential(1.0), 1.0) == pytest.approx(total, abs=1e-14)
    assert cdf(exponential(1.0), 1.0) == pytest.approx(0.6321206, abs=1e-7)


def test_quantile_normal_median_zero():
    assert quantile(normal(0, 1), 0.5) == pytest.approx(0.0, abs=1e-12)


def test_quantile_uniform_closed_form():
    d = uniform(-3.0, 7.0)
    for p in (0.01, 0.25, 0.5, 0.9):
        assert quantile(d, p) == pytest.approx(-3.0 + p * 10.0, abs=1e-9)


def test_quantile_chisq1_against_bisection_oracle():
    d = chi_square(1)
    lo, hi = 0.0, 100.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if cdf(d, mid) < 0.95:
            lo = mid
        else:
            hi = mid
    oracle = 0.5 * (lo + hi)
    assert quantile(d, 0.95) == pytest.approx(oracle, abs=1e-8)
    assert quantile(d, 0.95) == pytest.approx(3.841459, abs=1e-6)


@pytest.mark.parametrize("d", ALL_FAMILIES, ids=format_dist)
def test_quantile_cdf_roundtrip_grid(d):
    p = np.linspace(0.005, 0.995, 100)
    x = quantile(d, p)
    assert np.all(np.diff(x) >= 0)
    assert np.max(np.abs(cdf(d, x) - p)) < 1e-8
    # cdf-then-quantile identity on interior support points
    lo, hi = quantile(d, 0.01), quantile(d, 0.99)
    xs = np.linspace(lo, hi, 50)
    back = quantile(d, np.clip(cdf(d, xs), 1e-12, 1 - 1e-12))
    assert np.max(np.abs(back - xs)) < 1e-6 * (1 + np.max(np.abs(xs)))


@pytest.mark.parametrize("d", ALL_FAMILIES, ids=format_dist)
def test_pdf_nonnegative_and_normalized(d):
    eps = 1e-9
    lo = quantile(d, eps)
    hi = quantile(d, 1.0 - eps)
    xs = np.linspace(lo, hi, 201)
    assert np.all(np.asarray(pdf(d, xs)) >= 0)
    # quantile-ladder panel boundaries localize the probability mass and
    # cluster geometrically toward singular support edges; the sub-eps tails
    # are accounted through the cdf (they are unreachable for Beta shapes < 1
    # where the last representable double below 1 already holds ~1e-8 mass)
    probs = [10.0**-k for k in range(1, 9)]
    ladder = probs + [0.25, 0.5, 0.75] + [1.0 - p for p in probs]
    pts = [float(quantile(d, p)) for p in ladder]
    core = integrate(lambda t: np.asarray(pdf(d, t)), lo, hi, tol=1e-10, points=pts).value
    tails = float(cdf(d, lo)) + 1.0 - float(cdf(d, hi))
    assert core == pytest.approx(float(cdf(d, hi)) - float(cdf(d, lo)), abs=1e-8)
    assert core + tails == pytest.approx(1.0, abs=1e-8)


def test_sampling_law_of_large_numbers():
    rng = RngStream(2024)
    u = sample(uniform(0, 1), 100_000, rng.child(0))
    assert abs(u.mean() - 0.5) < 0.01
    z = sample(normal(0, 1), 100_000, rng.child(1))
    assert abs(z.var() - 1.0) < 0.03
    e = sample(exponential(1.0), 100_000, rng.child(2))
    assert ecdf_distance(e, lambda v: cdf(exponential(1.0), v)) < 0.01


def test_sampling_reproducible_and_streams_uncorrelated():
    d = normal(0, 1)
    a = sample(d, 1000, RngStream(7, (1, 2)))
    b = sample(d, 1000, RngStream(7, (1, 2)))
    assert np.array_equal(a, b)
    u = sample(d, 100_000, RngStream(7).child(5, 0))
    v = sample(d, 100_000, RngStream(7).child(5, 1))
    assert not np.array_equal(u, v)
    assert abs(np.corrcoef(u, v)[0, 1]) < 0.01


def test_cauchy_sampling_matches_its_cdf():
    d = cauchy(1.0, 2.0)
    vals = sample(d, 100_000, RngStream(3))
    assert ecdf_distance(vals, lambda v: cdf(d, v)) < 0.01


@pytest.mark.parametrize(
    "bad",
    [
        lambda: normal(0, 0),
        lambda: normal(0, -1),
        lambda: uniform(1, 1),
        lambda: uniform(2, 1),
        lambda: exponential(0),
        lambda: beta(0, 1),
        lambda: cauchy(0, 0),
        lambda: chi_square(0),
    ],
)
def test_invalid_parameters_rejected(bad):
    with pytest.raises(ParameterError):
        bad()


def test_chisq_requires_integer_df():
    with pytest.raises(ParameterError):
        parse_dist("chisq:1.5")


def test_quantile_domain_errors():
    for p in (0.0, 1.0, -0.1, 1.1):
        with pytest.raises(ParameterError):
            quantile(normal(0, 1), p)


def test_parse_dist_grammar_roundtrip():
    for text in ["normal:0,1", "uniform:-0.5,0.5", "exp:1", "beta:2,3", "cauchy:0,1", "chisq:1"]:
        d = parse_dist(text)
        assert parse_dist(format_dist(d)) == d


def test_parse_dist_reports_offending_token():
    with pytest.raises(ParameterError, match="oops"):
        parse_dist("normal:0,oops")
    with pytest.raises(ParameterError, match="gamma"):
        parse_dist("gamma:1,1")


def test_rng_stream_children_and_validation():
    s = RngStream(5)
    assert s.child(1, 2).stream_path == (1, 2)
    with pytest.raises(ParameterError):
        RngStream(-1)
    with pytest.raises(ParameterError):
        RngStream(1, (-3,))
