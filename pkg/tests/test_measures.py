import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupwalk.groups import cube, cyclic, quaternion, symmetric
from groupwalk.measures import (MeasureError, convolution_power,
                                convolve, csv_string, dirac, dp_distance,
                                entropy_gap, from_weights, lp_distance,
                                power_curve, separation_distance,
                                shannon_entropy, switzer_guess_probability,
                                uniform, variation_distance)
from groupwalk.walks import WalkSpec, measure_for


def test_uniform_weights():
    assert np.array_equal(uniform(cyclic(4)).weights, [0.25] * 4)
    assert np.array_equal(uniform(quaternion()).weights, [0.125] * 8)


def test_uniform_is_stationary_under_any_walk():
    g = symmetric(4)
    rng = np.random.default_rng(0)
    w = rng.dirichlet(np.ones(g.order))
    nu = from_weights(g, w)
    out = convolve(nu, uniform(g))
    np.testing.assert_allclose(out.weights, uniform(g).weights, atol=1e-14)


def test_dirac():
    g = cyclic(3)
    assert np.array_equal(dirac(g, 0).weights, [1, 0, 0])
    for x in range(3):
        assert dirac(g, x).weights.sum() == 1.0
    with pytest.raises(MeasureError):
        dirac(g, 3)


def test_dirac_convolution_is_group_multiplication():
    g = quaternion()
    for a, b in itertools.product(range(8), repeat=2):
        out = convolve(dirac(g, a), dirac(g, b))
        assert out.weights[g.mul(a, b)] == 1.0


def test_convolve_hand_oracle_cyclic3():
    # nu uniform on {1, 2}: the three-term sums give (1/2, 1/4, 1/4)
    g = cyclic(3)
    nu = from_weights(g, [0, 0.5, 0.5])
    out = convolve(nu, nu)
    np.testing.assert_allclose(out.weights, [0.5, 0.25, 0.25], atol=0)


def test_convolve_with_identity_dirac():
    g, nu = measure_for(WalkSpec("random-transpositions", 4))
    out = convolve(nu, dirac(g, g.identity))
    np.testing.assert_array_equal(out.weights, nu.weights)


def test_convolve_group_mismatch():
    with pytest.raises(MeasureError):
        convolve(uniform(cyclic(3)), uniform(cyclic(4)))


def test_convolution_power_base_cases():
    g, nu = measure_for(WalkSpec("simple-circle", 5))
    assert np.array_equal(convolution_power(nu, 0).weights,
                          dirac(g, g.identity).weights)
    assert np.array_equal(convolution_power(nu, 1).weights, nu.weights)


def test_convolution_power_methods_agree():
    g, nu = measure_for(WalkSpec("cube-nn", 3))
    for k in (2, 5, 9, 16):
        a = convolution_power(nu, k, method="iterated")
        b = convolution_power(nu, k, method="square")
        np.testing.assert_allclose(a.weights, b.weights, atol=1e-14)


def test_convolution_associative_on_random_triples():
    rng = np.random.default_rng(5)
    for g in (symmetric(3), quaternion(), cyclic(7)):
        a, b, c = (from_weights(g, rng.dirichlet(np.ones(g.order)))
                   for _ in range(3))
        left = convolve(convolve(a, b), c)
        right = convolve(a, convolve(b, c))
        np.testing.assert_allclose(left.weights, right.weights, atol=1e-10)


def test_convolution_commutative_iff_abelian():
    rng = np.random.default_rng(6)
    for g, abelian in ((cyclic(6), True), (cube(3), True)):
        a = from_weights(g, rng.dirichlet(np.ones(g.order)))
        b = from_weights(g, rng.dirichlet(np.ones(g.order)))
        np.testing.assert_allclose(convolve(a, b).weights,
                                   convolve(b, a).weights, atol=1e-14)
    # a noncommuting pair on S3 and on Q8
    for g in (symmetric(3), quaternion()):
        a = dirac(g, g.generators[0])
        b = dirac(g, g.generators[1])
        assert not np.allclose(convolve(a, b).weights, convolve(b, a).weights)


def test_variation_basics():
    g = cyclic(10)
    pi = uniform(g)
    assert variation_distance(pi, pi) == 0.0
    assert variation_distance(dirac(g, 0), pi) == pytest.approx(1 - 1 / 10, abs=1e-15)


@pytest.mark.parametrize("g", [cyclic(5), symmetric(3), quaternion(), cyclic(12)],
                         ids=lambda g: g.name)
def test_variation_equals_max_over_subsets(g):
    # exhaustive oracle over all 2^|G| subsets
    rng = np.random.default_rng(g.order)
    mu = from_weights(g, rng.dirichlet(np.ones(g.order)))
    nu = from_weights(g, rng.dirichlet(np.ones(g.order)))
    best = 0.0
    for mask in range(1 << g.order):
        members = [i for i in range(g.order) if mask >> i & 1]
        best = max(best, abs(mu.weights[members].sum() - nu.weights[members].sum()))
    assert variation_distance(mu, nu) == pytest.approx(best, abs=1e-12)


def test_separation_basics():
    g = cube(3)
    assert separation_distance(uniform(g)) == pytest.approx(0.0, abs=1e-15)
    assert separation_distance(dirac(g, 0)) == pytest.approx(1.0, abs=0)
    with pytest.raises(MeasureError):
        separation_distance(from_weights(g, [1.5, -0.5] + [0] * 6, kind="charge"))


def test_separation_submultiplicative_circle9():
    g, nu = measure_for(WalkSpec("simple-circle", 9))
    s = {}
    for k, mu in power_curve(nu, 60):
        s[k] = separation_distance(mu)
    for k in range(1, 31):
        for l in range(1, 31):
            assert s[k + l] <= s[k] * s[l] + 1e-12


def test_entropy_values():
    g = symmetric(4)
    assert entropy_gap(uniform(g)) == pytest.approx(0.0, abs=1e-12)
    assert entropy_gap(dirac(g, 0)) == pytest.approx(math.log(24), abs=1e-12)
    assert shannon_entropy(dirac(g, 0)) == 0.0


def test_entropy_gap_monotone_on_cube_walk():
    g, nu = measure_for(WalkSpec("cube-nn", 4))
    gaps = [entropy_gap(mu) for _, mu in power_curve(nu, 40)]
    for a, b in zip(gaps, gaps[1:]):
        assert b <= a + 1e-12


def test_entropy_lower_bound():
    # sigma(k) >= (1-k) log|G| + k sigma(1)
    for spec in (WalkSpec("cube-nn", 3), WalkSpec("simple-circle", 9),
                 WalkSpec("random-transpositions", 4)):
        g, nu = measure_for(spec)
        logg = math.log(g.order)
        sigma1 = entropy_gap(nu)
        for k, mu in power_curve(nu, 30):
            if k == 0:
                continue
            assert entropy_gap(mu) >= (1 - k) * logg + k * sigma1 - 1e-9


def test_lp_distances():
    g = cyclic(10)
    pi = uniform(g)
    d = dirac(g, 0)
    assert lp_distance(d, pi, 1) == pytest.approx(2 * (1 - 1 / 10))
    assert dp_distance(d, pi, 1) == pytest.approx(2 * variation_distance(d, pi))
    assert lp_distance(pi, pi, np.inf) == 0.0
    with pytest.raises(MeasureError):
        lp_distance(d, pi, 0.5)


def test_l2_against_direct_sum_oracle():
    g = cyclic(5)
    rng = np.random.default_rng(2)
    mu = from_weights(g, rng.dirichlet(np.ones(5)))
    nu = from_weights(g, rng.dirichlet(np.ones(5)))
    direct = math.sqrt(sum((mu.weights[i] - nu.weights[i]) ** 2 for i in range(5)))
    assert lp_distance(mu, nu, 2) == pytest.approx(direct, abs=1e-15)
    assert dp_distance(mu, nu, 2) == pytest.approx(5 ** 0.5 * direct, rel=1e-12)


def test_switzer_probability():
    g = cyclic(6)
    pi = uniform(g)
    assert switzer_guess_probability(pi, pi) == 0.5
    assert switzer_guess_probability(dirac(g, 1), dirac(g, 2)) == 1.0


def test_variation_decreasing_along_walks():
    for spec in (WalkSpec("simple-circle", 11), WalkSpec("cube-nn", 4),
                 WalkSpec("random-transpositions", 4), WalkSpec("cube-loops", 3)):
        g, nu = measure_for(spec)
        pi = uniform(g)
        prev = None
        for k, mu in power_curve(nu, 200):
            d = variation_distance(mu, pi)
            if prev is not None:
                assert d <= prev + 1e-12
            prev = d


def test_variation_dominated_by_separation():
    for spec in (WalkSpec("simple-circle", 9), WalkSpec("cube-nn", 4),
                 WalkSpec("random-to-top", 4)):
        g, nu = measure_for(spec)
        pi = uniform(g)
        for k, mu in power_curve(nu, 60):
            assert variation_distance(mu, pi) <= separation_distance(mu) + 1e-12


def test_charge_weight_preservation():
    g, nu = measure_for(WalkSpec("cube-nn", 3))
    rng = np.random.default_rng(9)
    raw = rng.normal(size=g.order)
    raw += (1.0 - raw.sum()) / g.order  # mass exactly 1
    u = from_weights(g, raw, kind="charge")
    out = convolve(nu, u)
    assert out.kind == "charge"
    assert out.weights.sum() == pytest.approx(1.0, abs=1e-12)


def test_measure_validation():
    g = cyclic(4)
    with pytest.raises(MeasureError):
        from_weights(g, [0.5, 0.5, 0.5, 0.5])  # mass 2
    with pytest.raises(MeasureError):
        from_weights(g, [1.5, -0.5, 0, 0])  # negative probability
    charge = from_weights(g, [1.5, -0.5, 0, 0], kind="charge")
    assert charge.weights.sum() == 1.0
    with pytest.raises(MeasureError):
        from_weights(g, [0.25] * 3)  # wrong length


def test_csv_serialization():
    g = cyclic(3)
    nu = from_weights(g, [0.5, 0.25, 0.25])
    text = csv_string(nu)
    lines = text.strip().splitlines()
    assert lines[0] == "index,label,weight"
    assert lines[1] == "0,0,0.5"
    assert len(lines) == 4
    # 15 significant digits survive
    nu2 = from_weights(g, [1 / 3, 1 / 3, 1 / 3])
    val = csv_string(nu2).strip().splitlines()[1].split(",")[2]
    assert float(val) == pytest.approx(1 / 3, abs=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 9), st.data())
def test_convolution_preserves_probability(n, data):
    g = cyclic(n)
    raw_a = data.draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n))
    raw_b = data.draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n))
    a = from_weights(g, np.asarray(raw_a) / np.sum(raw_a))
    b = from_weights(g, np.asarray(raw_b) / np.sum(raw_b))
    out = convolve(a, b)
    assert out.is_probability
    assert out.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert 0.0 <= variation_distance(a, b) <= 1.0
