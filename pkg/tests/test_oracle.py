import numpy as np
import pytest

from joint_effect import (
    RngStream,
    asymptotic_cov,
    beta,
    cauchy,
    chi_square,
    exact_functionals,
    exact_i1,
    exact_i2,
    exact_theta,
    exponential,
    functional_grid,
    in_region,
    normal,
    uniform,
)
from joint_effect.errors import ParameterError

PAIRS = [
    normal(0, 1),
    normal(1.5, 0.7),
    uniform(-1, 2),
    exponential(0.8),
    beta(2, 3),
    cauchy(0.5, 1.2),
    chi_square(3),
]


@pytest.mark.parametrize("d", [normal(0, 1), exponential(1), uniform(-0.5, 0.5)])
def test_equal_distributions_give_half(d):
    assert exact_theta(d, d) == pytest.approx(0.5, abs=1e-6)
    assert exact_i2(d, d) == pytest.approx(0.5, abs=1e-6)
    assert exact_i1(d, d) == pytest.approx(0.5, abs=1e-6)


def test_reference_pair_normal_shift():
    f, g = normal(0, 1), normal(1, 1)
    assert exact_theta(f, g) == pytest.approx(0.7602, abs=5e-4)
    assert exact_i2(f, g) == pytest.approx(0.3645, abs=5e-4)


def test_reference_pair_normal_vs_exponential():
    f, g = normal(1, 1), exponential(1)
    assert exact_i2(f, g) == pytest.approx(0.5389, abs=5e-4)
    # theta is P(X < Y); the role-swapped orientation gives the companion value
    assert exact_theta(g, f) == pytest.approx(0.5381, abs=5e-4)
    assert exact_theta(f, g) == pytest.approx(1 - 0.5381, abs=5e-4)


def test_role_symmetry():
    rng = RngStream(1).generator()
    for _ in range(6):
        f = PAIRS[rng.integers(len(PAIRS))]
        g = PAIRS[rng.integers(len(PAIRS))]
        assert exact_theta(f, g) + exact_theta(g, f) == pytest.approx(1.0, abs=2e-6)
        assert exact_i1(f, g) == pytest.approx(exact_i2(g, f), abs=1e-12)


@pytest.mark.parametrize("sd", [0.5, 2.0, 5.0])
def test_equal_medians_overlap_indices_sum_to_one(sd):
    f = normal(0, 1)
    g = normal(0, sd)
    assert exact_i1(f, g) + exact_i2(f, g) == pytest.approx(1.0, abs=2e-6)


def test_pairs_land_in_feasible_region():
    rng = RngStream(2).generator()
    for _ in range(25):
        f = PAIRS[rng.integers(len(PAIRS))]
        g = PAIRS[rng.integers(len(PAIRS))]
        th = exact_theta(f, g)
        i2 = exact_i2(f, g)
        assert in_region(th, i2, atol=1e-9)


def test_asymptotic_cov_under_equality():
    d = normal(0, 1)
    c1 = asymptotic_cov(d, d, nu=1.0)
    assert c1.var_theta == pytest.approx(1 / 6, abs=1e-6)
    assert c1.var_i2 == pytest.approx(1 / 6, abs=1e-6)
    assert c1.cov == pytest.approx(0.0, abs=1e-6)
    c2 = asymptotic_cov(d, d, nu=2.0)
    assert c2.var_theta == pytest.approx(1 / 4, abs=1e-6)
    assert c2.var_i2 == pytest.approx(1 / 4, abs=1e-6)


def test_asymptotic_cov_positive_semidefinite():
    rng = RngStream(3).generator()
    for _ in range(10):
        f = PAIRS[rng.integers(len(PAIRS))]
        g = PAIRS[rng.integers(len(PAIRS))]
        c = asymptotic_cov(f, g, nu=float(rng.uniform(0.5, 2.0)))
        m = c.matrix
        assert m[0, 0] >= -1e-6 and m[1, 1] >= -1e-6
        assert np.linalg.det(m) >= -1e-6
        assert c.matrix[0, 1] == c.matrix[1, 0]


def test_asymptotic_cov_requires_positive_nu():
    with pytest.raises(ParameterError):
        asymptotic_cov(normal(0, 1), normal(0, 1), nu=0.0)


def test_exact_functionals_reports_errors():
    fx = exact_functionals(normal(0, 1), normal(1, 1))
    assert fx.theta_err < 1e-6 and fx.i2_err < 1e-6 and fx.i1_err < 1e-6


def test_functional_grid_rows():
    rows = functional_grid([-1.0, 0.0, 1.0], [0.5, 1.0, 2.0])
    assert len(rows) == 9
    by_key = {(mu, sd): (th, i1, i2) for mu, sd, th, i1, i2 in rows}
    th, i1, i2 = by_key[(0.0, 1.0)]
    assert th == pytest.approx(0.5, abs=1e-6)
    assert i1 == pytest.approx(0.5, abs=1e-6)
    assert i2 == pytest.approx(0.5, abs=1e-6)
    # scale-only separation: theta stays 1/2 while the overlap index moves
    th, _, i2 = by_key[(0.0, 2.0)]
    assert th == pytest.approx(0.5, abs=1e-6)
    assert i2 < 0.5 - 1e-3
    for (mu, sd), (th, i1, i2) in by_key.items():
        assert in_region(th, i2, atol=1e-9)


def test_functional_grid_rejects_bad_sigma():
    with pytest.raises(ParameterError):
        functional_grid([0.0], [0.0])
