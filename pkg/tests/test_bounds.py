import math

import numpy as np
import pytest

from groupwalk.bounds import (BoundError, appendix_inequality_suite,
                              circle_bounds, circle_lower, circle_upper,
                              coupon_collector_bound, cube_lower_asymptotic,
                              cube_upper, diameter_eigenvalue_bound,
                              growth_profile, moderate_growth_bounds,
                              moderate_growth_certificate,
                              separation_decay_bound)
from groupwalk.cutoff import distance_curve
from groupwalk.groups import cyclic
from groupwalk.measures import convolution_power, separation_distance
from groupwalk.spectral import operator_from_measure, spectrum
from groupwalk.walks import WalkSpec, measure_for


def test_circle_upper_value_and_domain():
    # n = 11: validity starts at k >= 121/40, i.e. k = 4
    up, lo = circle_bounds(11, 4)
    assert up == pytest.approx(math.exp(-math.pi ** 2 * 4 / 242), rel=1e-12)
    assert up == pytest.approx(0.84948, abs=5e-6)
    up3, _ = circle_bounds(11, 3)
    assert up3 is None


def test_circle_lower_value_and_domain():
    _, lo = circle_bounds(11, 10)
    expected = 0.5 * math.exp(-math.pi ** 2 * 10 / 242 - math.pi ** 4 * 10 / 29282)
    assert lo == pytest.approx(expected, rel=1e-12)
    _, lo5 = circle_bounds(5, 10)  # n < 7: lower undefined
    assert lo5 is None


def test_circle_lower_at_k0_below_exact():
    _, lo = circle_bounds(7, 0)
    assert lo == 0.5
    assert lo <= 1 - 1 / 7


def test_circle_bounds_reject_even_n():
    with pytest.raises(BoundError):
        circle_upper(10, 5)
    with pytest.raises(BoundError):
        circle_lower(8, 5)


def test_bound_curve_pair_contract():
    from groupwalk.bounds import circle_bound_curves
    upper, lower = circle_bound_curves(11)
    curve = distance_curve(WalkSpec("simple-circle", 11), 120,
                           check_oracle=False)
    ks = np.arange(121)
    up = upper(ks)
    lo = lower(ks)
    assert upper.kind == "upper" and lower.kind == "lower"
    assert np.isnan(up[:4]).all() and not upper.valid(3)
    assert (curve.values[upper.valid(ks)] <= up[upper.valid(ks)] + 1e-9).all()
    assert (lo <= curve.values + 1e-9).all()


def test_circle_sandwich_n11():
    n = 11
    curve = distance_curve(WalkSpec("simple-circle", n), 300, check_oracle=False)
    ks = np.arange(301)
    upper = circle_upper(n, ks)
    lower = circle_lower(n, ks)
    assert (lower <= curve.values + 1e-9).all()
    valid = ~np.isnan(upper)
    assert valid[4:].all()
    assert (curve.values[valid] <= upper[valid] + 1e-9).all()


def test_cube_upper_values():
    k, bound = cube_upper(6, 1.0)
    assert k == pytest.approx(7 * (math.log(6) + 1) / 4, rel=1e-12)
    assert bound == pytest.approx(0.5 * (math.exp(math.exp(-1)) - 1), rel=1e-12)
    # c large kills the bound
    assert cube_upper(6, 40.0)[1] == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(BoundError):
        cube_upper(6, 0.0)


@pytest.mark.parametrize("n", [2, 4, 6])
@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
def test_cube_upper_dominates_exact(n, c):
    k, bound = cube_upper(n, c)
    kk = math.ceil(k)
    curve = distance_curve(WalkSpec("cube-nn", n), kk, check_oracle=False)
    assert curve.values[kk] ** 2 <= bound + 1e-12


def test_cube_lower_asymptotic_flagging():
    k, lo = cube_lower_asymptotic(8, 1.0)
    assert lo == pytest.approx(1 - 20 / math.e)
    assert lo < 0  # vacuous at desk scale, by design of the formula
    # trend check: exact distance always dominates the clipped value
    curve = distance_curve(WalkSpec("cube-nn", 8), 8, check_oracle=False)
    for c in (0.5, 1.0, 2.0):
        k, lo = cube_lower_asymptotic(8, c)
        kk = max(math.ceil(k), 0)
        assert curve.values[min(kk, 8)] >= max(lo, 0.0) - 0.15


def test_growth_profile_cyclic9():
    g = cyclic(9)
    w = np.zeros(9)
    w[0] = w[1] = w[8] = 1 / 3
    from groupwalk.measures import from_weights
    nu = from_weights(g, w)
    prof = growth_profile(g, [0, 1, 8], nu)
    assert prof.diameter == 4
    expected = [min(2 * k + 1, 9) for k in range(prof.diameter + 1)]
    assert prof.V.tolist() == expected
    assert prof.L == pytest.approx(1 / 3)
    # (4, 1) moderate growth: (2k+1)/9 >= (1/4)(k/4) for k = 1..4
    assert moderate_growth_certificate(prof, 4, 1)


def test_growth_profile_heisenberg5():
    n = 5
    g, nu = measure_for(WalkSpec("heisenberg-gen", n))
    prof = growth_profile(g, nu.support(), nu)
    assert n - 1 <= prof.diameter <= n + 1
    for k in range(1, min(prof.diameter, n + 1) + 1):
        assert prof.V[k] >= k ** 3 / 6
    assert moderate_growth_certificate(prof, 48, 3)


def test_growth_profile_requires_generating_support():
    g = cyclic(6)
    from groupwalk.measures import from_weights
    w = np.zeros(6)
    w[2] = w[4] = 0.5
    nu = from_weights(g, w)
    with pytest.raises(BoundError):
        growth_profile(g, [2, 4], nu)


def test_moderate_growth_certificate_huge_A():
    g, nu = measure_for(WalkSpec("heisenberg-gen", 3))
    prof = growth_profile(g, nu.support(), nu)
    assert moderate_growth_certificate(prof, 1e12, 3)


def test_moderate_growth_bounds_values():
    uk, ub, lk, lb = moderate_growth_bounds(48, 3, 10, 0.2, 1.0)
    B = 2 ** 4.5 * math.sqrt(48)
    assert B == pytest.approx(156.77, abs=0.01)
    assert ub == pytest.approx(B / math.e, rel=1e-12)
    assert uk == pytest.approx(2 * 100 / 0.2, rel=1e-12)
    assert lb == pytest.approx(0.5 / math.e, rel=1e-12)
    assert lk == pytest.approx(100 / (2 ** 14 * 48 ** 2), rel=1e-12)
    assert moderate_growth_bounds(48, 3, 10, 0.2, 50.0)[1] == pytest.approx(0, abs=1e-12)


def test_moderate_growth_upper_dominates_heisenberg3():
    g, nu = measure_for(WalkSpec("heisenberg-gen", 3))
    prof = growth_profile(g, nu.support(), nu)
    for c in (0.5, 1.0, 2.0):
        uk, ub, lk, lb = moderate_growth_bounds(48, 3, prof.diameter, prof.L, c)
        kk = math.ceil(uk)
        curve = distance_curve(WalkSpec("heisenberg-gen", 3), kk,
                               check_oracle=False)
        assert curve.values[kk] <= ub + 1e-12
        assert curve.values[max(math.ceil(lk), 0)] >= lb - 1e-12


def test_diameter_eigenvalue_bound():
    # circle n = 9: support {1, -1}, L = 1/2, diameter 4
    bound = diameter_eigenvalue_bound(4, 0.5)
    assert bound == pytest.approx(1 - 1 / 32)
    g, nu = measure_for(WalkSpec("simple-circle", 9))
    lam2 = spectrum(operator_from_measure(nu)).lambda_2
    assert lam2 == pytest.approx(math.cos(2 * math.pi / 9), abs=1e-10)
    assert lam2 <= bound
    assert diameter_eigenvalue_bound(1, 0.25) == 0.75
    with pytest.raises(BoundError):
        diameter_eigenvalue_bound(0, 0.5)


def test_diameter_bound_on_symmetric_walks():
    for spec in (WalkSpec("cube-nn", 4), WalkSpec("cube-loops", 3),
                 WalkSpec("random-transpositions", 4)):
        g, nu = measure_for(spec)
        prof = growth_profile(g, nu.support(), nu)
        lam2 = spectrum(operator_from_measure(nu)).lambda_2
        assert lam2 <= diameter_eigenvalue_bound(prof.diameter, prof.L) + 1e-12


def test_coupon_collector_bound():
    k, b = coupon_collector_bound(52, 2.0)
    assert k == pytest.approx(52 * math.log(52) + 104, rel=1e-12)
    assert k == pytest.approx(309.46, abs=0.01)
    assert b == pytest.approx(math.exp(-2))
    assert coupon_collector_bound(10, 0.0)[1] == 1.0


def test_separation_decay_bound_circle5():
    # after n0 = n - 1 = 4 steps the walk covers the group with min 2^(1-n)
    n = 5
    g, nu = measure_for(WalkSpec("simple-circle", n))
    nu4 = convolution_power(nu, 4)
    L = nu4.weights.min()
    assert L == pytest.approx(2.0 ** (1 - n), abs=0)
    assert separation_decay_bound(n, 4, L, 0) == 1.0
    bound2 = separation_decay_bound(n, 4, L, 2)
    assert bound2 == pytest.approx((1 - 5 * 2.0 ** (1 - n)) ** 2, rel=1e-12)
    s8 = separation_distance(convolution_power(nu, 8))
    assert s8 <= bound2 + 1e-12
    with pytest.raises(BoundError):
        separation_decay_bound(5, 4, 0.0, 1)


def test_appendix_inequality_suite():
    report = appendix_inequality_suite()
    assert len(report.checks) == 7
    assert report.all_passed, report.summary()
    identity = report.checks[0]
    assert identity.name == "cos-power-sum identity"
    assert identity.max_violation <= 1e-12


def test_finitary_q_trend_examples():
    # even-n cube family grows sharper; the circle family stays flat.
    # (unit-stride n dips at n = 5: q = 1/4 < 1/3; the even-stride family
    # 4, 6, 8 is the monotone one at desk scale)
    import groupwalk.cutoff as cutoff
    a = b = 1 / (2 * math.e)
    qs = []
    for n in (4, 6, 8):
        curve = distance_curve(WalkSpec("cube-nn", n), 40, check_oracle=False)
        qs.append(cutoff.finitary_cutoff(curve, a, b).q)
    assert qs == sorted(qs)
    circle_qs = []
    for n in range(9, 21, 2):
        curve = distance_curve(WalkSpec("simple-circle", n),
                               max(40, n * n), check_oracle=False)
        circle_qs.append(cutoff.finitary_cutoff(curve, a, b).q)
    assert max(circle_qs) < 0.1  # bounded, no growth across the range
