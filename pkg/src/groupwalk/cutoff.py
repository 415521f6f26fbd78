"""Exact distance curves, mixing times, and cut-off statistics over families.

Cut-off is an asymptotic notion; everything here reports finite-n
evidence (polarization trends, finitary (a, b, q) statistics) and never
asserts the limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .groups import is_ergodic
from .measures import Measure, uniform, variation_distance, power_curve
from .spectral import operator_from_measure, delta_power_curve
from .walks import WalkSpec, measure_for

EXACT_BUDGET = 20000      # largest |G| for exact curve computation
ORACLE_BUDGET = 2048      # largest |G| for the convolution-vs-matrix pairing
ORACLE_TOL = 1e-10
MIXING_EPS_DEFAULT = 1 / (2 * math.e)


class BudgetError(RuntimeError):
    """Exact computation would exceed the configured size budget."""


class NotErgodicError(RuntimeError):
    """The requested walk is not ergodic; carries the witness."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


@dataclass
class DistanceCurve:
    """Exact variation distances d(k) for k = 0..K of one family member."""
    walk: str
    n: int
    ks: np.ndarray
    values: np.ndarray
    group_order: int = 0

    def __len__(self):
        return len(self.ks)

    def distance(self, k: int) -> float:
        return float(self.values[k])


def _circulant_distances(nu: Measure, k_max: int) -> np.ndarray:
    """Cyclic-group fast path: convolution powers through the DFT."""
    n = nu.group.order
    F = np.fft.fft(nu.weights)
    out = np.empty(k_max + 1)
    powers = np.ones_like(F)
    pi = 1.0 / n
    for k in range(k_max + 1):
        w = np.fft.ifft(powers).real
        out[k] = 0.5 * np.abs(w - pi).sum()
        powers = powers * F
    return out


def distance_curve(spec: WalkSpec, k_max: int, *, check_oracle: bool | None = None,
                   require_ergodic: bool = True) -> DistanceCurve:
    """Exact distance-to-random curve of a catalogue walk.

    The curve is produced by iterated convolution and, for groups within
    ORACLE_BUDGET, verified against the matrix-power route delta_e P^k
    (the two must agree to 1e-10 in sup norm).  Cyclic groups use the
    DFT fast path, which the test suite cross-validates against direct
    convolution.
    """
    g, nu = measure_for(spec)
    if g.order > EXACT_BUDGET:
        raise BudgetError(f"|G| = {g.order} exceeds the exact budget {EXACT_BUDGET}")
    if require_ergodic:
        erg = is_ergodic(g, nu.support())
        if not erg.ergodic:
            raise NotErgodicError(f"walk {spec} is not ergodic: {erg.describe(g)}",
                                  erg)
    pi = uniform(g)
    if g.kind == "cyclic":
        values = _circulant_distances(nu, k_max)
    else:
        values = np.empty(k_max + 1)
        for k, mu in power_curve(nu, k_max):
            values[k] = variation_distance(mu, pi)
    if check_oracle is None:
        check_oracle = g.order <= ORACLE_BUDGET
    if check_oracle:
        verify_oracle_pair(spec, k_max)
    return DistanceCurve(str(spec), spec.n, np.arange(k_max + 1), values, g.order)


def verify_oracle_pair(spec: WalkSpec, k_max: int, tol: float = ORACLE_TOL) -> float:
    """Max sup-norm gap between nu^*k by convolution and delta_e P^k.

    Raises if the two independent routes ever disagree beyond tol.
    """
    g, nu = measure_for(spec)
    if g.order > ORACLE_BUDGET:
        raise BudgetError(f"oracle pairing limited to |G| <= {ORACLE_BUDGET}")
    P = operator_from_measure(nu)
    worst = 0.0
    rows = delta_power_curve(P, k_max)
    for k, mu in power_curve(nu, k_max):
        _, row = next(rows)
        worst = max(worst, float(np.abs(mu.weights - row).max()))
        if worst > tol:
            raise AssertionError(
                f"convolution and matrix powers disagree at k={k} for {spec}: "
                f"{worst:.3e}")
    return worst


@dataclass
class MixingReport:
    """First-passage times tau(eps) = min{k : d(k) < eps}."""
    tau: dict
    tau_default: int | None
    unresolved: list

    def consistent_with(self, curve: DistanceCurve) -> bool:
        for eps, k in self.tau.items():
            if k is None:
                continue
            if curve.values[k] >= eps:
                return False
            if k > 0 and curve.values[k - 1] < eps:
                return False
        return True


def mixing_time(curve: DistanceCurve, eps_list=None) -> MixingReport:
    """Exact first-passage indices; epsilons the curve never reaches are
    reported as unresolved, not guessed."""
    if eps_list is None:
        eps_list = [MIXING_EPS_DEFAULT]
    tau = {}
    unresolved = []
    for eps in eps_list:
        below = np.nonzero(curve.values < eps)[0]
        if below.size:
            tau[eps] = int(below[0])
        else:
            tau[eps] = None
            unresolved.append(eps)
    default_below = np.nonzero(curve.values < MIXING_EPS_DEFAULT)[0]
    tau_default = int(default_below[0]) if default_below.size else None
    return MixingReport(tau, tau_default, unresolved)


@dataclass
class FinitaryCutoff:
    """(a, b, q) statistic of one curve: q = |A| / |B| with
    A = {k : d(k) >= 1-a} and B = {k : b <= d(k) <= 1-a}."""
    a: float
    b: float
    A_size: int
    B_size: int

    @property
    def q(self) -> float:
        return math.inf if self.B_size == 0 else self.A_size / self.B_size


def finitary_cutoff(curve: DistanceCurve, a: float, b: float) -> FinitaryCutoff:
    if curve.values[-1] >= b:
        raise ValueError(
            f"curve too short: d(K) = {curve.values[-1]:.4g} has not dropped "
            f"below b = {b:.4g}")
    d = curve.values
    A_size = int(np.sum(d >= 1.0 - a))
    B_size = int(np.sum((d >= b) & (d <= 1.0 - a)))
    return FinitaryCutoff(a, b, A_size, B_size)


@dataclass
class CutoffVerdict:
    """Finite-n polarization evidence for a family at candidate times t_n.

    For each epsilon the tables hold d(floor((1 -+ eps) t_n)) per n.  No
    asymptotic claim is derived; trends are reported as data.
    """
    walk: str
    n_list: list
    t_values: list
    eps_grid: list
    pre_values: dict   # eps -> list of d(floor((1-eps) t_n))
    post_values: dict  # eps -> list of d(floor((1+eps) t_n))
    taus: list = field(default_factory=list)
    curves: list = field(default_factory=list)

    def summary(self) -> str:
        lines = [f"family {self.walk}: n = {self.n_list}"]
        for eps in self.eps_grid:
            pre = ", ".join(f"{v:.4f}" for v in self.pre_values[eps])
            post = ", ".join(f"{v:.4f}" for v in self.post_values[eps])
            lines.append(f"  eps={eps:g}: pre  [{pre}]")
            lines.append(f"  eps={eps:g}: post [{post}]")
        return "\n".join(lines)


def cutoff_scan(walk_name: str, n_list, t_of_n, eps_grid=(0.5,),
                extra_k: int = 4) -> CutoffVerdict:
    """Evaluate distances straddling candidate cut-off times across a family."""
    n_list = list(n_list)
    eps_grid = list(eps_grid)
    pre = {eps: [] for eps in eps_grid}
    post = {eps: [] for eps in eps_grid}
    t_values, taus, curves = [], [], []
    for n in n_list:
        spec = WalkSpec(walk_name, n)
        t_n = float(t_of_n(n))
        k_max = max(int(math.floor((1 + max(eps_grid)) * t_n)) + extra_k, 1)
        curve = distance_curve(spec, k_max, check_oracle=False)
        t_values.append(t_n)
        curves.append(curve)
        taus.append(mixing_time(curve).tau_default)
        for eps in eps_grid:
            k_pre = max(int(math.floor((1 - eps) * t_n)), 0)
            k_post = int(math.floor((1 + eps) * t_n))
            pre[eps].append(float(curve.values[k_pre]))
            post[eps].append(float(curve.values[k_post]))
    return CutoffVerdict(walk_name, n_list, t_values, eps_grid, pre, post,
                         taus, curves)


def continuous_finitary(f, a: float, b: float, tol: float = 1e-9,
                        x_cap: float = 1e12):
    """(A, B, q) for a nonincreasing continuous f with f -> 0.

    A = inf{x : f(x) = 1-a}, B = inf{x : f(x) = b}, q = A / (B - A).
    Levels are located by bisection to tol.
    """
    def locate(level):
        if f(0.0) < level:
            raise ValueError(f"level {level} not attained: f(0) = {f(0.0)}")
        if f(0.0) == level:
            return 0.0
        hi = 1.0
        while f(hi) > level:
            hi *= 2.0
            if hi > x_cap:
                raise ValueError(f"level {level} not attained below {x_cap}")
        lo = 0.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if f(mid) > level:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    A = locate(1.0 - a)
    B = locate(b)
    q = math.inf if B <= A else A / (B - A)
    return A, B, q


def curve_to_csv(curves, path_or_file) -> None:
    """Long-format CSV n,k,distance for one curve or a family of curves."""
    if isinstance(curves, DistanceCurve):
        curves = [curves]
    own = isinstance(path_or_file, (str, bytes))
    fh = open(path_or_file, "w") if own else path_or_file
    try:
        fh.write("n,k,distance\n")
        for c in curves:
            for k, v in zip(c.ks, c.values):
                fh.write(f"{c.n},{k},{v:.15g}\n")
    finally:
        if own:
            fh.close()


def summary_to_csv(rows, path_or_file) -> None:
    """Summary CSV n,tau,q,A_size,B_size (rows of dicts)."""
    own = isinstance(path_or_file, (str, bytes))
    fh = open(path_or_file, "w") if own else path_or_file
    try:
        fh.write("n,tau,q,A_size,B_size\n")
        for r in rows:
            tau = "" if r["tau"] is None else r["tau"]
            q = r["q"]
            q_str = "inf" if math.isinf(q) else f"{q:.15g}"
            fh.write(f"{r['n']},{tau},{q_str},{r['A_size']},{r['B_size']}\n")
    finally:
        if own:
            fh.close()
