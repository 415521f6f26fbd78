"""Finite groups with dense integer element indexing.

Every group is a set of indices ``0..order-1`` together with a
multiplication rule.  Small groups (order <= TABLE_LIMIT) carry a dense
multiplication table; larger ones evaluate a structured rule on demand.
Element indexing is deterministic per family:

* cyclic(n):    residues ``0..n-1``
* cube(n):      bit-vectors ``(s_1,...,s_n)`` in lexicographic order,
                i.e. index = binary value with ``s_1`` the most
                significant bit; basis vector ``e_i`` has index ``2**(n-i)``
* symmetric(n): permutations of ``0..n-1`` in lexicographic one-line order
* dihedral(4):  rotations ``r^k`` at ``0..3``, reflections ``r^k f`` at ``4..7``
* quaternion:   ``1, -1, i, -i, j, -j, k, -k``
* heisenberg(n): upper unitriangular triples ``(a, b, c)`` in lexicographic
                order, index = ``a*n^2 + b*n + c``
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TABLE_LIMIT = 4096  # dense |G| x |G| tables below this order, rules above
MATRIX_TEST_LIMIT = 200  # direct P^m positivity test only for small groups


class GroupError(ValueError):
    """Invalid group descriptor or element."""


_FACTORIALS = [math.factorial(i) for i in range(13)]


def _perm_rank(perm: Sequence[int]) -> int:
    """Lexicographic rank of a one-line permutation of 0..n-1."""
    n = len(perm)
    rank = 0
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if perm[j] < perm[i])
        rank += smaller * _FACTORIALS[n - 1 - i]
    return rank


def _perm_rank_rows(perms: np.ndarray) -> np.ndarray:
    """Vectorized lexicographic rank for an array of one-line rows."""
    m, n = perms.shape
    rank = np.zeros(m, dtype=np.int64)
    for i in range(n):
        smaller = (perms[:, i + 1:] < perms[:, i][:, None]).sum(axis=1)
        rank += smaller * _FACTORIALS[n - 1 - i]
    return rank


def popcount(x) -> np.ndarray:
    """Bit-population count, vectorized over integer arrays."""
    x = np.asarray(x, dtype=np.uint64)
    count = np.zeros_like(x, dtype=np.int64)
    while x.any():
        count += (x & 1).astype(np.int64)
        x >>= np.uint64(1)
    return count


class Group:
    """A finite group on indices ``0..order-1``.

    Multiplication is either a dense precomputed table or a structured
    rule; both are bit-exact.  Groups are immutable after construction
    and safe to share across threads.
    """

    def __init__(self, name, kind, order, labels, *, identity=0, n=None,
                 table=None, mul_rule=None, left_row_rule=None,
                 right_row_rule=None, inverses=None, generators=None):
        self.name = name
        self.kind = kind
        self.order = int(order)
        self.labels = list(labels)
        self.identity = int(identity)
        self.n = n
        self._table = table
        self._mul_rule = mul_rule
        self._left_row_rule = left_row_rule
        self._right_row_rule = right_row_rule
        self.generators = list(generators) if generators is not None else None
        if inverses is None:
            inverses = self._compute_inverses()
        self.inverses = np.asarray(inverses, dtype=np.int64)
        self._is_abelian = None

    # -- core operations ---------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        if self._table is not None:
            return int(self._table[a, b])
        return int(self._mul_rule(a, b))

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def left_mul_row(self, a: int) -> np.ndarray:
        """``mul(a, j)`` for all ``j`` as an index array."""
        if self._table is not None:
            return self._table[a]
        return self._left_row_rule(a)

    def right_mul_row(self, b: int) -> np.ndarray:
        """``mul(i, b)`` for all ``i`` as an index array."""
        if self._table is not None:
            return self._table[:, b]
        return self._right_row_rule(b)

    @property
    def table(self):
        """Dense multiplication table, or None for rule-backed groups."""
        return self._table

    @property
    def is_abelian(self) -> bool:
        if self._is_abelian is None:
            self._is_abelian = self._check_abelian()
        return self._is_abelian

    def elements(self) -> range:
        return range(self.order)

    def label(self, a: int) -> str:
        return self.labels[a]

    def __repr__(self):
        return f"Group({self.name}, order={self.order})"

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    # -- internals ----------------------------------------------------------

    def _compute_inverses(self) -> np.ndarray:
        inv = np.full(self.order, -1, dtype=np.int64)
        for a in range(self.order):
            row = self.left_mul_row(a)
            hits = np.nonzero(row == self.identity)[0]
            if len(hits) != 1:
                raise GroupError(f"element {a} of {self.name} lacks a unique inverse")
            inv[a] = hits[0]
        return inv

    def _check_abelian(self) -> bool:
        if self.kind in ("cyclic", "cube"):
            return True
        if self.generators:
            for a in self.generators:
                for b in self.generators:
                    if self.mul(a, b) != self.mul(b, a):
                        return False
            return True
        for a in range(self.order):
            row = self.left_mul_row(a)
            col = self.right_mul_row(a)
            if not np.array_equal(row, col):
                return False
        return True


# -- catalogue constructors --------------------------------------------------


@functools.lru_cache(maxsize=32)
def cyclic(n: int) -> Group:
    """Additive group of residues mod n."""
    if n < 2:
        raise GroupError("cyclic(n) requires n >= 2")
    labels = [str(i) for i in range(n)]
    inverses = (-np.arange(n)) % n
    if n <= TABLE_LIMIT:
        idx = np.arange(n)
        table = (idx[:, None] + idx[None, :]) % n
        return Group(f"Z{n}", "cyclic", n, labels, n=n, table=table.astype(np.int64),
                     inverses=inverses, generators=[1 % n])
    return Group(
        f"Z{n}", "cyclic", n, labels, n=n,
        mul_rule=lambda a, b: (a + b) % n,
        left_row_rule=lambda a: (a + np.arange(n)) % n,
        right_row_rule=lambda b: (np.arange(n) + b) % n,
        inverses=inverses, generators=[1],
    )


@functools.lru_cache(maxsize=32)
def cube(n: int) -> Group:
    """Z_2^n under bitwise XOR; index encodes the bit-vector, s_1 = MSB."""
    if n < 1:
        raise GroupError("cube(n) requires n >= 1")
    if n > 20:
        raise GroupError("cube(n) capped at n = 20")
    order = 1 << n
    labels = [format(i, f"0{n}b") for i in range(order)]
    inverses = np.arange(order)
    gens = [1 << (n - 1 - i) for i in range(n)]
    if order <= TABLE_LIMIT:
        idx = np.arange(order)
        table = idx[:, None] ^ idx[None, :]
        return Group(f"Z2^{n}", "cube", order, labels, n=n,
                     table=table.astype(np.int64), inverses=inverses,
                     generators=gens)
    return Group(
        f"Z2^{n}", "cube", order, labels, n=n,
        mul_rule=lambda a, b: a ^ b,
        left_row_rule=lambda a: a ^ np.arange(order),
        right_row_rule=lambda b: np.arange(order) ^ b,
        inverses=inverses, generators=gens,
    )


@functools.lru_cache(maxsize=32)
def symmetric(n: int) -> Group:
    """Symmetric group S_n, permutations in lexicographic one-line order.

    Permutations act on positions: sigma maps position p to sigma(p), and
    sigma*tau is the composition "tau first, then sigma".  Capped at n = 8
    to keep dense objects within memory.
    """
    if not 2 <= n <= 8:
        raise GroupError("symmetric(n) supports 2 <= n <= 8")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    order = len(perms)
    labels = ["".join(map(str, p)) for p in perms]
    inv_rows = np.argsort(perms, axis=1)
    inverses = _perm_rank_rows(inv_rows)
    gen_rows = []
    swap = list(range(n))
    swap[0], swap[1] = swap[1], swap[0]
    gen_rows.append(swap)
    gen_rows.append(list(range(1, n)) + [0])
    generators = [_perm_rank(g) for g in gen_rows]

    if order <= TABLE_LIMIT:
        # table[a, b] = rank(perm_a o perm_b)
        table = np.empty((order, order), dtype=np.int64)
        for a in range(order):
            composed = perms[a][perms]
            table[a] = _perm_rank_rows(composed)
        g = Group(f"S{n}", "symmetric", order, labels, n=n, table=table,
                  inverses=inverses, generators=generators)
    else:
        def mul_rule(a, b):
            return int(_perm_rank(perms[a][perms[b]]))

        def left_row_rule(a):
            return _perm_rank_rows(perms[a][perms])

        def right_row_rule(b):
            return _perm_rank_rows(perms[:, perms[b]])

        g = Group(f"S{n}", "symmetric", order, labels, n=n,
                  mul_rule=mul_rule, left_row_rule=left_row_rule,
                  right_row_rule=right_row_rule, inverses=inverses,
                  generators=generators)
    g.perms = perms
    return g


def perm_index(g: Group, perm: Sequence[int]) -> int:
    """Index of a one-line permutation in a symmetric group."""
    if g.kind != "symmetric":
        raise GroupError("perm_index requires a symmetric group")
    return _perm_rank(perm)


def dihedral(n: int = 4) -> Group:
    """Dihedral group; only the square's symmetry group D_4 is catalogued.

    Elements: rotations r^k (indices 0..3, r the quarter turn), then
    reflections r^k f (indices 4..7) with f r f = r^-1.
    """
    if n != 4:
        raise GroupError("only dihedral(4) is supported")
    return _dihedral4()


@functools.lru_cache(maxsize=1)
def _dihedral4() -> Group:
    order = 8

    def decode(x):
        return x % 4, x // 4  # (rotation exponent, reflection flag)

    def encode(k, m):
        return k % 4 + 4 * (m % 2)

    def mul_rule(a, b):
        k1, m1 = decode(a)
        k2, m2 = decode(b)
        k = (k1 - k2) % 4 if m1 else (k1 + k2) % 4
        return encode(k, m1 ^ m2)

    table = np.array([[mul_rule(a, b) for b in range(order)] for a in range(order)],
                     dtype=np.int64)
    labels = ["r0", "r1", "r2", "r3", "f0", "f1", "f2", "f3"]
    return Group("D4", "dihedral", order, labels, n=4, table=table,
                 generators=[1, 4])


_QUAT_AXES = "1ijk"


@functools.lru_cache(maxsize=32)
def quaternion() -> Group:
    """Quaternion group {1, -1, i, -i, j, -j, k, -k}.

    Multiplication follows i^2 = j^2 = k^2 = ijk = -1 with -1 central.
    Index 2*axis + (sign bit), axes ordered 1, i, j, k.
    """
    # product of pure axes: (axis, axis) -> (sign, axis)
    axis_mul = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (2, 0): (1, 2), (3, 0): (1, 3),
        (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
        (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
        (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
    }

    def decode(x):
        return x // 2, 1 - 2 * (x % 2)  # (axis, sign)

    def encode(axis, sign):
        return 2 * axis + (0 if sign > 0 else 1)

    def mul_rule(a, b):
        ax_a, s_a = decode(a)
        ax_b, s_b = decode(b)
        s, ax = axis_mul[(ax_a, ax_b)]
        return encode(ax, s * s_a * s_b)

    order = 8
    table = np.array([[mul_rule(a, b) for b in range(order)] for a in range(order)],
                     dtype=np.int64)
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return Group("Q8", "quaternion", order, labels, n=None, table=table,
                 generators=[2, 4])


@functools.lru_cache(maxsize=32)
def heisenberg(n: int) -> Group:
    """Heisenberg group H_3(n): 3x3 upper unitriangular matrices over Z_n.

    Element (a, b, c) is the matrix with first row (1, a, b) and second
    row (0, 1, c); the product rule is
    (a, b, c)(a', b', c') = (a + a', b + b' + a c', c + c') mod n.
    """
    if n < 2:
        raise GroupError("heisenberg(n) requires n >= 2")
    order = n ** 3
    if order > 200000:
        raise GroupError("heisenberg(n) capped at n^3 <= 200000")
    labels = [f"({a}.{b}.{c})" for a in range(n) for b in range(n) for c in range(n)]

    def decode(x):
        a, rem = divmod(x, n * n)
        b, c = divmod(rem, n)
        return a, b, c

    def encode(a, b, c):
        return (a % n) * n * n + (b % n) * n + (c % n)

    def mul_rule(x, y):
        a1, b1, c1 = decode(x)
        a2, b2, c2 = decode(y)
        return encode(a1 + a2, b1 + b2 + a1 * c2, c1 + c2)

    idx = np.arange(order)
    a_of = idx // (n * n)
    b_of = (idx // n) % n
    c_of = idx % n

    def encode_vec(a, b, c):
        return (a % n) * n * n + (b % n) * n + (c % n)

    def left_row_rule(x):
        a1, b1, c1 = decode(x)
        return encode_vec(a1 + a_of, b1 + b_of + a1 * c_of, c1 + c_of)

    def right_row_rule(y):
        a2, b2, c2 = decode(y)
        return encode_vec(a_of + a2, b_of + b2 + a_of * c2, c_of + c2)

    inverses = encode_vec(-a_of, a_of * c_of - b_of, -c_of)
    gens = [encode(1, 0, 0), encode(n - 1, 0, 0), encode(0, 0, 1), encode(0, 0, n - 1)]
    if order <= TABLE_LIMIT:
        table = np.empty((order, order), dtype=np.int64)
        for x in range(order):
            table[x] = left_row_rule(x)
        return Group(f"H3({n})", "heisenberg", order, labels, n=n, table=table,
                     inverses=inverses, generators=gens)
    return Group(f"H3({n})", "heisenberg", order, labels, n=n,
                 mul_rule=mul_rule, left_row_rule=left_row_rule,
                 right_row_rule=right_row_rule, inverses=inverses,
                 generators=gens)


def heisenberg_index(g: Group, a: int, b: int, c: int) -> int:
    if g.kind != "heisenberg":
        raise GroupError("heisenberg_index requires a Heisenberg group")
    n = g.n
    return (a % n) * n * n + (b % n) * n + (c % n)


def build_group(descriptor: str) -> Group:
    """Build a catalogue group from a descriptor string.

    Accepted forms: ``cyclic:11``, ``cube:6``, ``symmetric:5``,
    ``dihedral:4``, ``quaternion``, ``heisenberg:5``.
    """
    parts = descriptor.strip().split(":")
    name = parts[0]
    args = [int(p) for p in parts[1:]]
    if name == "cyclic" and len(args) == 1:
        return cyclic(args[0])
    if name == "cube" and len(args) == 1:
        return cube(args[0])
    if name == "symmetric" and len(args) == 1:
        return symmetric(args[0])
    if name == "dihedral" and (args == [4] or not args):
        return dihedral(4)
    if name == "quaternion" and not args:
        return quaternion()
    if name == "heisenberg" and len(args) == 1:
        return heisenberg(args[0])
    raise GroupError(f"unsupported group descriptor: {descriptor!r}")


# -- structure operations -----------------------------------------------------


def validate_group(g: Group, rng=None, samples: int = 2000) -> None:
    """Check the group axioms; exhaustive for order <= 512, sampled above.

    Raises GroupError on any failure.
    """
    e = g.identity
    idx = np.arange(g.order)
    for a in range(g.order):
        row = g.left_mul_row(a)
        if row[e] != a:
            raise GroupError(f"{g.name}: mul({a}, e) != {a}")
        if g.mul(e, a) != a:
            raise GroupError(f"{g.name}: mul(e, {a}) != {a}")
        if g.mul(a, g.inv(a)) != e or g.mul(g.inv(a), a) != e:
            raise GroupError(f"{g.name}: inverse of {a} fails")
        if sorted(row) != list(idx):
            raise GroupError(f"{g.name}: left multiplication by {a} not a bijection")
    if g.order <= 512:
        triples = itertools.product(range(g.order), repeat=3)
    else:
        rng = rng or np.random.default_rng(0)
        triples = rng.integers(0, g.order, size=(samples, 3)).tolist()
    for a, b, c in triples:
        if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)):
            raise GroupError(f"{g.name}: associativity fails at ({a},{b},{c})")


@dataclass
class ConjugacyPartition:
    """Partition of the element set into conjugacy classes."""
    classes: list

    @property
    def count(self) -> int:
        return len(self.classes)


def conjugacy_classes(g: Group) -> ConjugacyPartition:
    """Conjugacy classes, ordered by smallest member index."""
    if g.is_abelian:
        return ConjugacyPartition([[i] for i in range(g.order)])
    seen = np.zeros(g.order, dtype=bool)
    classes = []
    if g.table is not None:
        table = g.table
        inv = g.inverses
        for s in range(g.order):
            if seen[s]:
                continue
            cls = np.unique(table[table[:, s], inv])
            seen[cls] = True
            classes.append(sorted(int(x) for x in cls))
    else:
        if not g.generators:
            raise GroupError("conjugacy classes need a table or generators")
        for s in range(g.order):
            if seen[s]:
                continue
            cls = {s}
            frontier = [s]
            while frontier:
                x = frontier.pop()
                for t in g.generators:
                    for y in (g.mul(g.mul(t, x), g.inv(t)),
                              g.mul(g.mul(g.inv(t), x), t)):
                        if y not in cls:
                            cls.add(y)
                            frontier.append(y)
            for x in cls:
                seen[x] = True
            classes.append(sorted(cls))
    classes.sort(key=lambda c: c[0])
    return ConjugacyPartition(classes)


def generated_subgroup(g: Group, support: Iterable[int]) -> np.ndarray:
    """Closure of the support under multiplication (BFS from the identity).

    Returns the subgroup <support> as a sorted index array.
    """
    support = [int(s) for s in support]
    if not support:
        raise GroupError("support must be nonempty")
    if any(not 0 <= s < g.order for s in support):
        raise GroupError(f"support indices must lie in [0, {g.order})")
    reached = np.zeros(g.order, dtype=bool)
    reached[g.identity] = True
    frontier = np.array([g.identity], dtype=np.int64)
    while frontier.size:
        new = []
        for s in support:
            nxt = g.right_mul_row(s)[frontier]
            fresh = nxt[~reached[nxt]]
            if fresh.size:
                reached[fresh] = True
                new.append(np.unique(fresh))
        frontier = np.concatenate(new) if new else np.empty(0, dtype=np.int64)
    return np.nonzero(reached)[0]


@dataclass
class ErgodicityResult:
    """Outcome of the ergodicity test with its witness.

    When ergodic, ``n0`` is a power (not necessarily minimal) with
    P^n0 > 0, available for groups small enough for the matrix test.
    When not ergodic, either ``witness_subgroup`` (support lies in a
    proper subgroup) or ``witness_coset`` together with
    ``witness_subgroup`` (support lies in a coset of a proper normal
    subgroup) is populated.
    """
    ergodic: bool
    period: int = 0
    n0: int | None = None
    witness_subgroup: np.ndarray | None = None
    witness_coset: np.ndarray | None = None
    depths: np.ndarray | None = None

    def describe(self, g: Group) -> str:
        if self.ergodic:
            extra = f" (P^{self.n0} > 0)" if self.n0 else ""
            return f"ergodic{extra}"
        if self.witness_coset is not None:
            rep = ", ".join(g.label(int(x)) for x in self.witness_coset[:8])
            return (f"not ergodic: support lies in a coset of a proper normal "
                    f"subgroup of order {len(self.witness_subgroup)}; "
                    f"coset = {{{rep}{', ...' if len(self.witness_coset) > 8 else ''}}}")
        rep = ", ".join(g.label(int(x)) for x in self.witness_subgroup[:8])
        return (f"not ergodic: support generates the proper subgroup "
                f"{{{rep}{', ...' if len(self.witness_subgroup) > 8 else ''}}} "
                f"of order {len(self.witness_subgroup)}")


def _bfs_depths(g: Group, support) -> np.ndarray:
    """BFS depths from the identity in the Cayley digraph u -> s*u."""
    depths = np.full(g.order, -1, dtype=np.int64)
    depths[g.identity] = 0
    frontier = np.array([g.identity], dtype=np.int64)
    d = 0
    while frontier.size:
        d += 1
        new = []
        for s in support:
            nxt = g.left_mul_row(s)[frontier]
            fresh = nxt[depths[nxt] < 0]
            if fresh.size:
                fresh = np.unique(fresh)
                depths[fresh] = d
                new.append(fresh)
        frontier = np.concatenate(new) if new else np.empty(0, dtype=np.int64)
    return depths


def _digraph_period(g: Group, support, depths) -> int:
    period = 0
    for s in support:
        row = g.left_mul_row(s)
        period = math.gcd(period, int(np.gcd.reduce(depths + 1 - depths[row])))
        if period == 1:
            return 1
    return period


def _matrix_test(g: Group, support) -> tuple[bool, int | None]:
    """Direct test: some boolean power of the support pattern is full.

    Positivity is monotone in the exponent for walk operators (every row
    and column of the pattern is nonempty), so doubling suffices.
    """
    m = np.zeros((g.order, g.order), dtype=bool)
    for s in support:
        m[np.arange(g.order), g.left_mul_row(s)] = True
    power = m.T.copy()  # reach[u, v] = walk can go u -> v
    exp = 1
    limit = g.order * g.order
    while True:
        if power.all():
            return True, exp
        if exp >= limit:
            return False, None
        power = (power.astype(np.uint8) @ power.astype(np.uint8)) > 0
        exp *= 2


def is_ergodic(g: Group, support: Iterable[int]) -> ErgodicityResult:
    """Decide ergodicity of the walk whose driving measure has this support.

    Two independent routes: the Cayley digraph criterion (generation plus
    gcd of closed-walk lengths through the identity equal to 1), and for
    order <= MATRIX_TEST_LIMIT a direct check that some power of the
    support pattern is strictly positive.  The two must agree.
    """
    support = sorted({int(s) for s in support})
    if not support:
        raise GroupError("support must be nonempty")
    generated = generated_subgroup(g, support)
    if len(generated) < g.order:
        result = ErgodicityResult(False, witness_subgroup=generated)
    else:
        depths = _bfs_depths(g, support)
        period = _digraph_period(g, support, depths)
        if period == 1:
            result = ErgodicityResult(True, period=1, depths=depths)
        else:
            subgroup = np.nonzero(depths % period == 0)[0]
            coset = np.sort(g.right_mul_row(support[0])[subgroup])
            result = ErgodicityResult(False, period=period,
                                      witness_subgroup=subgroup,
                                      witness_coset=coset, depths=depths)
            if not np.isin(support, coset).all():
                raise AssertionError("period witness does not cover the support")
    if g.order <= MATRIX_TEST_LIMIT:
        positive, n0 = _matrix_test(g, support)
        if positive != result.ergodic:
            raise AssertionError(
                "digraph and matrix ergodicity tests disagree on "
                f"{g.name} with support {support}")
        result.n0 = n0
    return result
