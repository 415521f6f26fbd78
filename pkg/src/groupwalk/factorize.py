"""Invertibility consequences and convolution factorizations of the
random distribution.

The flagship example is the card-by-card transposition scheme on S_n:
the i-th factor is uniform on "swap card i with a uniformly random card
at position >= i" (the no-op included), and applying factors i = 1..n-1
in order lands exactly on the random distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import Group, cyclic, symmetric
from .measures import Measure, MeasureError, convolve, uniform
from .spectral import (InvertibilityVerdict, StochasticOperator, is_invertible,
                       operator_from_measure, symmetric_eigensystem)
from .walks import WalkSpec, driving_measure

EXACT_TOL = 1e-12
SOLVE_TOL = 1e-9


@dataclass(frozen=True)
class FactorizationProblem:
    """Ordered factors (first applied first) and the target measure."""
    factors: tuple
    target: Measure

    def __post_init__(self):
        if not self.factors:
            raise MeasureError("factor list must be nonempty")
        for f in self.factors:
            if f.group is not self.target.group:
                raise MeasureError("all factors must share the target's group")


@dataclass
class FactorizationCheck:
    is_exact: bool
    deviation: float
    product: Measure


def check_factorization(problem: FactorizationProblem) -> FactorizationCheck:
    """Convolve the factors in application order and compare to the target.

    With factors (nu_1, ..., nu_m) the product is nu_m * ... * nu_1,
    i.e. nu_1 acts first; deviation is the sup-norm gap to the target.
    """
    acc = problem.factors[0]
    for f in problem.factors[1:]:
        acc = convolve(f, acc)
    deviation = float(np.abs(acc.weights - problem.target.weights).max())
    return FactorizationCheck(deviation <= EXACT_TOL, deviation, acc)


def urban_factors(n: int) -> list:
    """The transposition-scheme factors nu_1, ..., nu_(n-1) on S_n."""
    g = symmetric(n)
    return [driving_measure(WalkSpec("urban-step", n, i), g) for i in range(1, n)]


def urban_problem(n: int) -> FactorizationProblem:
    g = symmetric(n)
    return FactorizationProblem(tuple(urban_factors(n)), uniform(g))


@dataclass
class CirclePQResult:
    operator: StochasticOperator
    verdict: InvertibilityVerdict
    n: int
    p: float


def circle_pq_operator(n: int, p: float) -> CirclePQResult:
    """Walk on Z_n stepping +1 with probability p, -1 with 1 - p.

    For odd n the operator is invertible across the whole p range; even
    n loses rank (at p = 1/2 the quarter-turn Fourier coefficient
    vanishes) and the support is not ergodic anyway.
    """
    if n < 3 or not 0 < p < 1:
        raise ValueError("need n >= 3 and p in (0, 1)")
    g = cyclic(n)
    w = np.zeros(n)
    w[1] = p
    w[n - 1] = 1.0 - p
    nu = Measure(g, w)
    P = operator_from_measure(nu)
    return CirclePQResult(P, is_invertible(P), n, p)


@dataclass
class ChargeSolveResult:
    """Solution status of u P = target over charges (mass-1 signed measures).

    Non-existence is a result, not an error.  When a solution exists its
    raw weight vector, residual, total mass, and sign information are
    recorded; ``measure()`` materializes it as a charge.
    """
    exists: bool
    residual: float
    raw: np.ndarray
    group: Group
    mass: float

    @property
    def has_negative(self) -> bool:
        return bool((self.raw < 0).any())

    def measure(self) -> Measure:
        if not self.exists:
            raise MeasureError("no solution exists")
        return Measure(self.group, self.raw, "charge")


def charge_preimage(P: StochasticOperator, target: Measure) -> ChargeSolveResult:
    """Least-squares solve of u P = target; existence at residual <= 1e-9.

    For an invertible ergodic operator the preimage of the point mass at
    the identity is a genuine charge (it must carry a negative entry),
    while the preimage of the random distribution is the random
    distribution itself.
    """
    if target.group is not P.group:
        raise MeasureError("target lives on a different group")
    u, *_ = np.linalg.lstsq(P.matrix.T, target.weights, rcond=None)
    residual = float(np.abs(u @ P.matrix - target.weights).max())
    exists = residual <= SOLVE_TOL
    return ChargeSolveResult(exists, residual, u, P.group, float(u.sum()))


@dataclass
class NoFinitePowerResult:
    """Evidence that no convolution power of nu equals the random measure."""
    direct_ok: bool
    certified: bool
    k_checked: int  # float-resolvable horizon the direct check covered
    k_budget: int
    min_active_gap: float  # smallest active |lambda|; > 0 settles every k

    def __bool__(self):
        return self.direct_ok and self.certified


FLOAT_FLOOR = 1e-15  # below this the sup distance drowns in rounding


def no_finite_power_reaches_pi(nu: Measure, k_budget: int = 500) -> NoFinitePowerResult:
    """Certify nu^*k != pi for all k for a symmetric non-uniform nu.

    Certificate route: expand the identity point mass in the eigenbasis;
    equality at any finite k would force every eigendirection present in
    the expansion (beyond the stationary one) to carry eigenvalue zero,
    so one nonvanishing coefficient with a nonzero eigenvalue settles
    all k at once, exactly.  Direct route: iterate the convolution and
    require a strictly positive sup gap, up to the horizon where the
    true gap sinks below one float ulp of pi (past it the iterated
    powers legitimately round onto pi, so exact float inequality stops
    being informative).
    """
    if not nu.is_symmetric():
        raise MeasureError("the check is defined for symmetric measures")
    pi = uniform(nu.group).weights
    if np.abs(nu.weights - pi).max() <= EXACT_TOL:
        raise MeasureError("nu equals the random distribution; excluded input")
    P = operator_from_measure(nu)
    vals, vecs = symmetric_eigensystem(P)
    e = nu.group.identity
    drop = int(np.argmin(np.abs(vals - 1.0)))
    coeff_tol = 1e-12
    active = [abs(vals[t]) for t in range(len(vals))
              if t != drop and abs(vecs[e, t]) > coeff_tol]
    nonzero = [lam for lam in active if lam > coeff_tol]
    certified = bool(nonzero)
    min_gap = min(nonzero, default=0.0)
    lam_max = max(nonzero, default=0.0)
    if lam_max >= 1.0 - 1e-15:
        horizon = k_budget
    elif lam_max > 0.0:
        horizon = min(k_budget, int(np.log(FLOAT_FLOOR) / np.log(lam_max)))
    else:
        horizon = 1
    cur = nu
    direct_ok = True
    for _ in range(max(horizon, 1)):
        if np.abs(cur.weights - pi).max() == 0.0:
            direct_ok = False
            break
        cur = convolve(nu, cur)
    return NoFinitePowerResult(direct_ok, certified, horizon, k_budget, min_gap)
