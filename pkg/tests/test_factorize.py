import numpy as np
import pytest

from groupwalk.factorize import (FactorizationProblem,
                                 charge_preimage, check_factorization,
                                 circle_pq_operator, no_finite_power_reaches_pi,
                                 urban_factors, urban_problem)
from groupwalk.groups import cyclic, is_ergodic, symmetric
from groupwalk.measures import MeasureError, dirac, uniform
from groupwalk.spectral import is_invertible, operator_from_measure
from groupwalk.walks import WalkSpec, measure_for


def test_urban_factorization_exact_s4():
    check = check_factorization(urban_problem(4))
    assert check.is_exact
    assert check.deviation <= 1e-12


def test_urban_factorization_exact_s5():
    check = check_factorization(urban_problem(5))
    assert check.is_exact
    assert check.deviation <= 1e-12


def test_single_uniform_factor_is_exact():
    g = symmetric(3)
    problem = FactorizationProblem((uniform(g),), uniform(g))
    assert check_factorization(problem).is_exact


def test_partial_urban_product_is_not_uniform():
    g = symmetric(4)
    factors = urban_factors(4)[:2]  # drop the last stage
    problem = FactorizationProblem(tuple(factors), uniform(g))
    check = check_factorization(problem)
    assert not check.is_exact
    assert check.deviation > 1e-3


def test_reversed_urban_order_finding():
    # order reversal is not a claimed identity; report, don't assert
    for n in (4, 5):
        factors = tuple(reversed(urban_factors(n)))
        check = check_factorization(
            FactorizationProblem(factors, uniform(symmetric(n))))
        print(f"reversed urban order on S{n}: exact={check.is_exact} "
              f"deviation={check.deviation:.3e}")


def test_factorization_group_mismatch():
    with pytest.raises(MeasureError):
        FactorizationProblem((uniform(symmetric(3)),), uniform(symmetric(4)))
    with pytest.raises(MeasureError):
        FactorizationProblem((), uniform(symmetric(3)))


def test_every_urban_factor_is_singular():
    # an exact pi-factorization must contain singular factors: here all are
    for n in (4, 5):
        for factor in urban_factors(n):
            verdict = is_invertible(operator_from_measure(factor))
            assert not verdict.invertible


def test_product_of_invertibles_is_invertible():
    g, nu = measure_for(WalkSpec("cube-nn", 4))
    P = operator_from_measure(nu).matrix
    assert is_invertible(operator_from_measure(nu)).invertible
    prod = P @ P @ P
    svals = np.linalg.svd(prod, compute_uv=False)
    assert svals.min() > 1e-10 * prod.shape[0]


def test_circle_pq_invertible_for_odd_n():
    for n in (5, 7, 9, 15):
        for p in (0.1, 0.5, 0.9):
            res = circle_pq_operator(n, p)
            assert res.verdict.invertible, (n, p)


def test_circle_pq_singular_even_n_balanced():
    res = circle_pq_operator(4, 0.5)
    assert not res.verdict.invertible
    # and the even-n support is not ergodic anyway
    g = cyclic(4)
    assert not is_ergodic(g, [1, 3]).ergodic


def test_circle_pq_biased_n7():
    assert circle_pq_operator(7, 0.9).verdict.invertible


def test_circle_pq_validation():
    with pytest.raises(ValueError):
        circle_pq_operator(2, 0.5)
    with pytest.raises(ValueError):
        circle_pq_operator(5, 0.0)


def test_charge_preimage_of_dirac_under_invertible_walk():
    # the invertible cube walk: the preimage of delta_e is a charge with
    # a negative entry (it cannot be a probability)
    for n in (2, 4):
        g, nu = measure_for(WalkSpec("cube-nn", n))
        P = operator_from_measure(nu)
        assert is_invertible(P).invertible
        res = charge_preimage(P, dirac(g, g.identity))
        assert res.exists
        assert res.residual <= 1e-9
        assert res.has_negative
        assert res.mass == pytest.approx(1.0, abs=1e-9)
        charge = res.measure()
        assert charge.kind == "charge"


def test_charge_preimage_of_pi_is_pi():
    g, nu = measure_for(WalkSpec("cube-nn", 4))
    P = operator_from_measure(nu)
    res = charge_preimage(P, uniform(g))
    assert res.exists
    np.testing.assert_allclose(res.raw, 1 / g.order, atol=1e-10)


def test_charge_preimage_none_for_rank_one_operator():
    g = cyclic(5)
    U = operator_from_measure(uniform(g))
    res = charge_preimage(U, dirac(g, 0))
    assert not res.exists
    assert res.residual > 1e-3
    with pytest.raises(MeasureError):
        res.measure()


def test_lazy_cube_walk_has_no_dirac_preimage():
    # the lazy coordinate walk is singular for every n (eigenvalue
    # 1 - w/n dies at the all-ones element) and delta_e is out of reach
    for n in (2, 4):
        g, nu = measure_for(WalkSpec("cube-loops", n))
        P = operator_from_measure(nu)
        assert not is_invertible(P).invertible
        res = charge_preimage(P, dirac(g, g.identity))
        assert not res.exists


def test_unique_solution_of_uP_equals_pi():
    # invertibility <=> uP = pi has only the stationary solution
    g, nu = measure_for(WalkSpec("cube-nn", 4))
    P = operator_from_measure(nu)
    verdict = is_invertible(P)
    assert verdict.invertible and verdict.nullspace_dim == 0
    res = charge_preimage(P, uniform(g))
    np.testing.assert_allclose(res.raw, 1 / g.order, atol=1e-10)


def test_no_finite_power_reaches_pi():
    g, nu = measure_for(WalkSpec("simple-circle", 5))
    res = no_finite_power_reaches_pi(nu)
    assert bool(res)
    assert res.certified and res.direct_ok
    assert res.min_active_gap > 0.3
    g, nu = measure_for(WalkSpec("cube-nn", 3))
    assert bool(no_finite_power_reaches_pi(nu))


def test_no_finite_power_rejects_uniform_and_asymmetric():
    g = cyclic(5)
    with pytest.raises(MeasureError):
        no_finite_power_reaches_pi(uniform(g))
    g, nu = measure_for(WalkSpec("top-to-random", 4))
    with pytest.raises(MeasureError):
        no_finite_power_reaches_pi(nu)
