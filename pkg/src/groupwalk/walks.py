"""Catalogue of named driving measures, parametrized by the family size n.

Conventions for the shuffle walks on S_n: a permutation sigma maps
position p to position sigma(p) (0-based internally), and one step of the
walk multiplies on the left, moving the state g to sg.  The top-to-random
step that inserts the top card at depth m is the cycle sending position
1 to m and shifting 2..m up by one; random-to-top is its inverse family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import groups
from .groups import Group, GroupError, popcount
from .measures import Measure

WALK_NAMES = (
    "simple-circle",
    "cube-nn",
    "cube-loops",
    "random-transpositions",
    "random-to-top",
    "top-to-random",
    "heisenberg-gen",
    "urban-step",
)


class WalkError(ValueError):
    """Unsupported walk descriptor or group/spec mismatch."""


@dataclass(frozen=True)
class WalkSpec:
    """A named driving measure at size n (urban-step also carries i)."""
    name: str
    n: int
    i: int | None = None

    def __post_init__(self):
        if self.name not in WALK_NAMES:
            raise WalkError(f"unknown walk {self.name!r}")
        n, i = self.n, self.i
        ok = {
            "simple-circle": n >= 3,
            "cube-nn": n >= 1,
            "cube-loops": n >= 1,
            "random-transpositions": 2 <= n <= 8,
            "random-to-top": 2 <= n <= 8,
            "top-to-random": 2 <= n <= 8,
            "heisenberg-gen": n >= 2,
            "urban-step": 2 <= n <= 8 and i is not None and 1 <= i <= n - 1,
        }[self.name]
        if not ok:
            raise WalkError(f"unsupported parameters for {self.name}: n={n}, i={i}")

    def __str__(self):
        if self.name == "urban-step":
            return f"{self.name}:{self.n}:{self.i}"
        return f"{self.name}:{self.n}"


def parse_walk(descriptor: str) -> WalkSpec:
    """Parse descriptors like ``simple-circle:11`` or ``urban-step:4:2``."""
    parts = descriptor.strip().split(":")
    name = parts[0]
    try:
        args = [int(p) for p in parts[1:]]
    except ValueError as exc:
        raise WalkError(f"bad walk descriptor {descriptor!r}") from exc
    if name == "urban-step":
        if len(args) != 2:
            raise WalkError("urban-step needs two parameters, e.g. urban-step:4:2")
        return WalkSpec(name, args[0], args[1])
    if len(args) != 1:
        raise WalkError(f"walk {name!r} needs exactly one parameter")
    return WalkSpec(name, args[0])


def group_for(spec: WalkSpec) -> Group:
    """The group the walk lives on."""
    if spec.name == "simple-circle":
        return groups.cyclic(spec.n)
    if spec.name in ("cube-nn", "cube-loops"):
        return groups.cube(spec.n)
    if spec.name == "heisenberg-gen":
        return groups.heisenberg(spec.n)
    return groups.symmetric(spec.n)


_EXPECTED_KIND = {
    "simple-circle": "cyclic",
    "cube-nn": "cube",
    "cube-loops": "cube",
    "random-transpositions": "symmetric",
    "random-to-top": "symmetric",
    "top-to-random": "symmetric",
    "heisenberg-gen": "heisenberg",
    "urban-step": "symmetric",
}


def _transposition_index(n: int, a: int, b: int) -> int:
    p = list(range(n))
    p[a], p[b] = p[b], p[a]
    return groups._perm_rank(p)


def _cycle_to_position(n: int, m: int) -> list[int]:
    """One-line form of the insert-top-card-at-depth-m step (1-based m)."""
    sigma = list(range(n))
    if m >= 2:
        sigma[0] = m - 1
        for p in range(1, m):
            sigma[p] = p - 1
    return sigma


def driving_measure(spec: WalkSpec, g: Group) -> Measure:
    """The catalogue driving measure on its group.

    Weights are constructed from exact rationals of the family before the
    float cast, so each measure sums to 1 exactly.
    """
    if g.kind != _EXPECTED_KIND[spec.name] or (g.n != spec.n):
        raise WalkError(f"group {g.name} does not match walk {spec}")
    n = spec.n
    w = np.zeros(g.order)

    if spec.name == "simple-circle":
        w[1 % g.order] += 0.5
        w[(-1) % g.order] += 0.5
    elif spec.name == "cube-nn":
        w[0] = 1.0 / (n + 1)
        for i in range(n):
            w[1 << i] = 1.0 / (n + 1)
    elif spec.name == "cube-loops":
        w[0] = 0.5
        for i in range(n):
            w[1 << i] = 0.5 / n
    elif spec.name == "random-transpositions":
        w[g.identity] = 1.0 / n
        for a in range(n):
            for b in range(a + 1, n):
                w[_transposition_index(n, a, b)] = 2.0 / n ** 2
    elif spec.name in ("top-to-random", "random-to-top"):
        for m in range(1, n + 1):
            sigma = _cycle_to_position(n, m)
            idx = groups._perm_rank(sigma)
            if spec.name == "random-to-top":
                idx = g.inv(idx)
            w[idx] += 1.0 / n
    elif spec.name == "heisenberg-gen":
        for a, b, c in [(1, 0, 0), (n - 1, 0, 0), (0, 0, 1), (0, 0, n - 1), (0, 0, 0)]:
            w[groups.heisenberg_index(g, a, b, c)] += 0.2
    elif spec.name == "urban-step":
        i = spec.i - 1  # 0-based card position
        mass = 1.0 / (n - spec.i + 1)
        w[g.identity] += mass  # the (i,i) "transposition" is the identity
        for b in range(i + 1, n):
            w[_transposition_index(n, i, b)] += mass
    return Measure(g, w)


def measure_for(spec: WalkSpec) -> tuple[Group, Measure]:
    """Build both the group and the driving measure for a walk spec."""
    g = group_for(spec)
    return g, driving_measure(spec, g)


def weight(g: Group, s: int) -> int:
    """Hamming weight of a cube element; the sum of its bit-vector."""
    if g.kind != "cube":
        raise GroupError("weight is defined for cube groups only")
    return int(popcount(np.asarray([s]))[0])
