"""Closed-form bounds on the distance to random, and growth-geometry tools.

Each bound carries its hypothesis domain; callers get None (or NaN in
vectorized form) outside it rather than a silently invalid number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .groups import Group, generated_subgroup
from .measures import Measure


class BoundError(ValueError):
    """Bound evaluated outside its hypothesis domain."""


@dataclass(frozen=True)
class BoundCurve:
    """A one-sided bound with its hypothesis domain.

    ``values(k)`` returns NaN outside the domain; an upper curve
    dominates the exact distance wherever it is defined, a lower curve
    is dominated by it.
    """
    kind: str  # "upper" or "lower"
    name: str
    domain: object  # predicate k -> bool array
    values: object  # k -> float array, NaN off-domain

    def __call__(self, k):
        return self.values(k)

    def valid(self, k):
        return self.domain(k)


def circle_bound_curves(n: int):
    """The (upper, lower) curve pair for the simple walk on the odd circle."""
    if n % 2 == 0:
        raise BoundError("the circle bounds need odd n")
    upper = BoundCurve(
        "upper", f"circle-upper:{n}",
        lambda k: np.asarray(k, dtype=np.float64) >= n * n / 40.0,
        lambda k: circle_upper(n, k))
    lower = BoundCurve(
        "lower", f"circle-lower:{n}",
        lambda k: np.full(np.shape(np.asarray(k)), n >= 7),
        lambda k: circle_lower(n, k))
    return upper, lower


# -- circle walk (odd n) -------------------------------------------------------


def circle_upper(n: int, k) -> np.ndarray:
    """exp(-pi^2 k / 2 n^2); valid for odd n and k >= n^2/40 (NaN below)."""
    if n % 2 == 0:
        raise BoundError("the circle bounds need odd n")
    k = np.asarray(k, dtype=np.float64)
    vals = np.exp(-np.pi ** 2 * k / (2.0 * n * n))
    return np.where(k >= n * n / 40.0, vals, np.nan)


def circle_lower(n: int, k) -> np.ndarray:
    """(1/2) exp(-pi^2 k/2n^2 - pi^4 k/2n^4); valid for odd n >= 7, any k."""
    if n % 2 == 0:
        raise BoundError("the circle bounds need odd n")
    k = np.asarray(k, dtype=np.float64)
    if n < 7:
        return np.full(k.shape, np.nan)
    return 0.5 * np.exp(-np.pi ** 2 * k / (2.0 * n * n)
                        - np.pi ** 4 * k / (2.0 * n ** 4))


def circle_bounds(n: int, k):
    """(upper, lower) at a single k; None outside the validity domain."""
    up = float(circle_upper(n, k))
    lo = float(circle_lower(n, k))
    return (None if math.isnan(up) else up), (None if math.isnan(lo) else lo)


# -- cube walk -----------------------------------------------------------------


def cube_upper(n: int, c: float):
    """At k = (n+1)(log n + c)/4 the squared distance is at most
    (exp(exp(-c)) - 1)/2.  Returns (k, bound)."""
    if c <= 0:
        raise BoundError("cube upper bound needs c > 0")
    k = (n + 1) * (math.log(n) + c) / 4.0
    return k, 0.5 * (math.exp(math.exp(-c)) - 1.0)


def cube_lower_asymptotic(n: int, c: float):
    """Markov-inequality lower bound 1 - 20 e^-c at k = (n+1)(log n - c)/4.

    Asymptotic only: at desk-scale n the hypothesis time is positive only
    for c < log n, where the bound value is negative (vacuous); callers
    must treat it as a trend statement, not a certified bound.
    """
    if c <= 0:
        raise BoundError("cube lower bound needs c > 0")
    k = (n + 1) * (math.log(n) - c) / 4.0
    return k, 1.0 - 20.0 * math.exp(-c)


# -- growth geometry -----------------------------------------------------------


@dataclass
class GrowthProfile:
    """Volume growth V(k) = |Sigma^k|, diameter, and the minimum step mass."""
    group: Group
    V: np.ndarray  # V[k] for k = 0..diameter
    diameter: int
    L: float  # min nu(s) over the support
    sigma_size: int

    def moderate(self, A: float, d: float) -> bool:
        return moderate_growth_certificate(self, A, d)


def growth_profile(g: Group, sigma, nu: Measure) -> GrowthProfile:
    """BFS computation of the growth function of the walk.

    Sigma^k is the set of products of exactly k support elements; the
    diameter is the first k with V(k) = |G|. Requires a generating
    support that actually attains the full group within |G| steps.
    """
    sigma = sorted({int(s) for s in sigma})
    gen = generated_subgroup(g, sigma)
    if len(gen) != g.order:
        raise BoundError("support does not generate the group")
    L = float(min(nu.weights[s] for s in sigma))
    if L <= 0:
        raise BoundError("support contains a zero-mass element")
    current = np.zeros(g.order, dtype=bool)
    current[g.identity] = True
    V = [1]
    for _ in range(g.order + 1):
        if V[-1] == g.order:
            break
        nxt = np.zeros(g.order, dtype=bool)
        idx = np.nonzero(current)[0]
        for s in sigma:
            nxt[g.left_mul_row(s)[idx]] = True
        current = nxt
        V.append(int(current.sum()))
    else:
        raise BoundError("diameter not attained within |G| products "
                         "(periodic support)")
    return GrowthProfile(g, np.asarray(V), len(V) - 1, L, len(sigma))


def moderate_growth_certificate(profile: GrowthProfile, A: float, d: float) -> bool:
    """Check V(k)/V(Delta) >= (1/A)(k/Delta)^d for every 1 <= k <= Delta."""
    Delta = profile.diameter
    if Delta < 1:
        return True
    ks = np.arange(1, Delta + 1, dtype=np.float64)
    lhs = profile.V[1:Delta + 1] / profile.V[Delta]
    rhs = (ks / Delta) ** d / A
    return bool((lhs >= rhs - 1e-12).all())


def moderate_growth_bounds(A: float, d: float, Delta: float, L: float, c: float):
    """Theorem-level two-sided control for (A,d) moderate growth walks.

    Returns (upper_k, upper, lower_k, lower) with
    upper = B e^-c at k = (1+c) Delta^2 / L, B = 2^(d(d+3)/4) sqrt(A),
    lower = e^-c / 2 at k = c Delta^2 / (2^(4d+2) A^2).
    """
    if min(A, Delta, L, c) <= 0:
        raise BoundError("all parameters must be positive")
    B = 2.0 ** (d * (d + 3) / 4.0) * math.sqrt(A)
    upper_k = (1.0 + c) * Delta ** 2 / L
    lower_k = c * Delta ** 2 / (2.0 ** (4 * d + 2) * A * A)
    return upper_k, B * math.exp(-c), lower_k, 0.5 * math.exp(-c)


def diameter_eigenvalue_bound(Delta: float, L: float) -> float:
    """lambda_2 <= 1 - L / Delta^2 for a symmetric walk."""
    if Delta < 1 or not 0 < L <= 1:
        raise BoundError("need Delta >= 1 and L in (0, 1]")
    return 1.0 - L / Delta ** 2


# -- stopping-time flavored bounds --------------------------------------------


def coupon_collector_bound(n: int, c: float):
    """P(T > k) <= e^-c at k = n log n + c n for the n-coupon collector."""
    if n < 1 or c < 0:
        raise BoundError("need n >= 1 and c >= 0")
    return n * math.log(n) + c * n, math.exp(-c)


def separation_decay_bound(group_order: int, n0: int, L: float, k: int) -> float:
    """s(k n0) <= (1 - |G| L)^k once nu^*n0 has full support with min L."""
    if L <= 0:
        raise BoundError("L must be positive")
    base = 1.0 - group_order * L
    if base < 0:
        raise BoundError("1 - |G| L is negative; n0 hypothesis violated")
    return base ** k


# -- appendix inequality suite -------------------------------------------------


@dataclass
class InequalityCheck:
    name: str
    domain: str
    max_violation: float
    passed: bool


@dataclass
class InequalityReport:
    checks: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            status = "ok" if c.passed else "FAIL"
            lines.append(f"{status:4} {c.name:28} {c.domain:34} "
                         f"max violation {c.max_violation:.3e}")
        return "\n".join(lines)


SLACK = 1e-12
SERIES_TAIL = 1e-15


def _check(report, name, domain, violation):
    report.checks.append(InequalityCheck(name, domain, float(violation),
                                         bool(violation <= SLACK)))


def appendix_inequality_suite(n_max: int = 25, k_max: int = 50,
                              grid_points: int = 10000) -> InequalityReport:
    """Verify the elementary inequalities behind the circle and cube bounds.

    Four cosine/series facts feed the circle bound, three binomial facts
    feed the cube bound; each is checked on a dense grid or exhaustive
    integer range.  The cosine-sum identity is exact up to 1e-12.
    """
    report = InequalityReport()

    # circle set (1): cosine power sum identity, odd n, exact
    worst = 0.0
    for n in range(3, n_max + 1, 2):
        t_all = np.arange(1, n)
        t_half = np.arange(1, (n - 1) // 2 + 1)
        for k in range(1, k_max + 1):
            lhs = (np.cos(2 * np.pi * t_all / n) ** (2 * k)).sum()
            rhs = 2 * (np.cos(np.pi * t_half / n) ** (2 * k)).sum()
            worst = max(worst, abs(lhs - rhs))
    _check(report, "cos-power-sum identity", f"odd n <= {n_max}, k <= {k_max}", worst)

    # circle set (2): cos x <= exp(-x^2/2) on [0, pi/2]
    x = np.linspace(0.0, np.pi / 2, grid_points)
    worst = float((np.cos(x) - np.exp(-x * x / 2)).max())
    _check(report, "cos upper gaussians", "[0, pi/2] dense grid", worst)

    # circle set (3): sum exp(-(j^2-1)x) <= sum exp(-3jx), x > 0
    worst = -np.inf
    for xv in np.linspace(0.01, 5.0, 500):
        lhs = 0.0
        j = 1
        while True:
            term = math.exp(-(j * j - 1) * xv)
            lhs += term
            j += 1
            if term < SERIES_TAIL:
                break
        rhs = 1.0 / (1.0 - math.exp(-3.0 * xv))
        worst = max(worst, lhs - rhs)
    _check(report, "series domination", "x in [0.01, 5], tail < 1e-15", worst)

    # circle set (4): cos x >= exp(-x^2/2 - x^4/2) on [0, pi/6]
    x = np.linspace(0.0, np.pi / 6, grid_points)
    worst = float((np.exp(-x * x / 2 - x ** 4 / 2) - np.cos(x)).max())
    _check(report, "cos lower gaussians", "[0, pi/6] dense grid", worst)

    # cube set (1): mirrored binomial term domination for l <= n/2
    worst = -np.inf
    for n in range(2, n_max + 1):
        for k in range(1, k_max + 1, 7):
            for l in range(1, n // 2 + 1):
                lhs = math.comb(n, l) * (1 - 2 * l / (n + 1)) ** (2 * k)
                rhs = math.comb(n, n + 1 - l) * (1 - 2 * (n + 1 - l) / (n + 1)) ** (2 * k)
                worst = max(worst, rhs - lhs)
    _check(report, "binomial-term domination",
           f"n <= {n_max}, l <= n/2, k sampled", worst)

    # cube set (2): C(a, b) <= a^b / b!
    worst = -np.inf
    for a in range(1, n_max + 1):
        for b in range(0, a + 1):
            worst = max(worst, math.comb(a, b) - a ** b / math.factorial(b))
    _check(report, "binomial crude bound", f"0 <= b <= a <= {n_max}", worst)

    # cube set (3): (1 - 2j/(n+1))^(2k) <= exp(-j log n - j c)
    # at k = (n+1)(log n + c)/4, for 1 <= j <= n/2
    worst = -np.inf
    for n in range(2, n_max + 1):
        for c in (0.25, 0.5, 1.0, 2.0, 4.0):
            k = (n + 1) * (math.log(n) + c) / 4.0
            for j in range(1, n // 2 + 1):
                lhs = (1 - 2 * j / (n + 1)) ** (2 * k)
                rhs = math.exp(-j * math.log(n) - j * c)
                worst = max(worst, lhs - rhs)
    _check(report, "cube exponent comparison",
           f"n <= {n_max}, c grid, j <= n/2", worst)

    return report
