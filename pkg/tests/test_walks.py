import math

import numpy as np
import pytest

from groupwalk.groups import cube, cyclic, is_ergodic, perm_index, symmetric
from groupwalk.walks import (WalkError, WalkSpec, driving_measure, group_for,
                             measure_for, parse_walk, weight)


def test_parse_walk_round_trip():
    for text in ["simple-circle:11", "cube-nn:6", "urban-step:4:2",
                 "random-to-top:5", "heisenberg-gen:3"]:
        assert str(parse_walk(text)) == text
    with pytest.raises(WalkError):
        parse_walk("simple-circle")
    with pytest.raises(WalkError):
        parse_walk("urban-step:4")
    with pytest.raises(WalkError):
        parse_walk("no-such-walk:3")


def test_simple_circle_measure():
    g, nu = measure_for(WalkSpec("simple-circle", 11))
    assert set(nu.support()) == {1, 10}
    assert nu(1) == 0.5 and nu(10) == 0.5


def test_random_transpositions_measure():
    g, nu = measure_for(WalkSpec("random-transpositions", 4))
    assert nu(g.identity) == pytest.approx(0.25)
    supp = set(int(s) for s in nu.support())
    supp.remove(g.identity)
    assert len(supp) == 6  # the six transpositions of S4
    for s in supp:
        assert nu(s) == pytest.approx(2 / 16)
    assert nu.weights.sum() == pytest.approx(1.0, abs=1e-15)


def test_cube_loops_measure():
    g, nu = measure_for(WalkSpec("cube-loops", 3))
    assert nu(0) == 0.5
    for i in range(3):
        assert nu(1 << i) == pytest.approx(1 / 6)


def test_cube_nn_measure():
    g, nu = measure_for(WalkSpec("cube-nn", 6))
    supp = nu.support()
    assert len(supp) == 7
    for s in supp:
        assert nu(int(s)) == pytest.approx(1 / 7)


def test_heisenberg_gen_measure():
    g, nu = measure_for(WalkSpec("heisenberg-gen", 5))
    assert len(nu.support()) == 5
    assert np.all(nu.weights[nu.support()] == 0.2)
    assert nu(g.identity) == 0.2


def test_urban_step_measure():
    g, nu = measure_for(WalkSpec("urban-step", 4, 2))
    # i = 2 on four cards: identity plus (2,3), (2,4), each mass 1/3
    assert nu(g.identity) == pytest.approx(1 / 3)
    assert len(nu.support()) == 3
    assert nu.weights.sum() == pytest.approx(1.0, abs=1e-15)


def test_top_to_random_moves_top_card_to_depth_m():
    g, nu = measure_for(WalkSpec("top-to-random", 5))
    assert len(nu.support()) == 5
    assert nu(g.identity) == pytest.approx(1 / 5)  # the m = 1 no-op cycle
    # the m = 3 step sends position 0 to 2 and shifts 1..2 up
    sigma = perm_index(g, (2, 0, 1, 3, 4))
    assert nu(sigma) == pytest.approx(1 / 5)


def test_random_to_top_is_inverse_family():
    g, ttr = measure_for(WalkSpec("top-to-random", 5))
    g, rtt = measure_for(WalkSpec("random-to-top", 5))
    np.testing.assert_array_equal(rtt.weights, ttr.weights[g.inverses])


def test_measures_sum_to_one_at_float_resolution():
    specs = [WalkSpec("simple-circle", 11), WalkSpec("cube-nn", 6),
             WalkSpec("cube-loops", 3), WalkSpec("random-transpositions", 5),
             WalkSpec("random-to-top", 5), WalkSpec("top-to-random", 6),
             WalkSpec("heisenberg-gen", 3), WalkSpec("urban-step", 5, 2)]
    for spec in specs:
        g, nu = measure_for(spec)
        assert abs(nu.weights.sum() - 1.0) <= 5e-16, spec


def test_symmetry_flags():
    for name, n in [("simple-circle", 9), ("cube-nn", 4), ("cube-loops", 4),
                    ("random-transpositions", 5)]:
        g, nu = measure_for(WalkSpec(name, n))
        assert nu.is_symmetric(), name
    for n in (3, 5):
        g, nu = measure_for(WalkSpec("top-to-random", n))
        assert not nu.is_symmetric()
        g, nu = measure_for(WalkSpec("random-to-top", n))
        assert not nu.is_symmetric()


def test_catalogue_ergodicity():
    ergodic_specs = [WalkSpec("simple-circle", 9), WalkSpec("simple-circle", 11),
                     WalkSpec("cube-nn", 4), WalkSpec("cube-loops", 3),
                     WalkSpec("random-transpositions", 4),
                     WalkSpec("random-to-top", 4), WalkSpec("top-to-random", 4),
                     WalkSpec("heisenberg-gen", 3), WalkSpec("urban-step", 4, 1)]
    for spec in ergodic_specs:
        g, nu = measure_for(spec)
        assert is_ergodic(g, nu.support()).ergodic, spec
    # even circle fails, and the witness is the odd coset
    g, nu = measure_for(WalkSpec("simple-circle", 8))
    r = is_ergodic(g, nu.support())
    assert not r.ergodic
    assert set(int(x) for x in nu.support()) <= set(int(x) for x in r.witness_coset)


def test_weight_op():
    g5 = cube(5)
    assert weight(g5, 0) == 0
    assert weight(g5, (1 << 5) - 1) == 5
    g4 = cube(4)
    counts = np.bincount([weight(g4, s) for s in range(16)], minlength=5)
    expected = [math.comb(4, j) for j in range(5)]  # binomial(4, 1/2) * 16
    assert counts.tolist() == expected
    with pytest.raises(Exception):
        weight(cyclic(4), 1)


def test_group_mismatch_rejected():
    spec = WalkSpec("simple-circle", 11)
    with pytest.raises(WalkError):
        driving_measure(spec, cyclic(12))
    with pytest.raises(WalkError):
        driving_measure(spec, symmetric(4))


def test_group_for():
    assert group_for(WalkSpec("simple-circle", 11)).kind == "cyclic"
    assert group_for(WalkSpec("cube-loops", 4)).order == 16
    assert group_for(WalkSpec("urban-step", 5, 1)).order == 120
    assert group_for(WalkSpec("heisenberg-gen", 3)).order == 27
