"""Probability measures and charges on a finite group.

A measure is a dense weight vector over the element indices.  Both kinds
carry total mass 1 (within MASS_TOL); probability measures additionally
have nonnegative weights.  Renormalization is never silent: weights are
validated at construction and left untouched afterwards.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .groups import Group

MASS_TOL = 1e-12

# entropy convention: 0 * log(1/0) = 0, stated here once


class MeasureError(ValueError):
    """Invalid measure or mismatched groups."""


@dataclass(frozen=True)
class Measure:
    """Weight vector on a group; ``kind`` is 'probability' or 'charge'."""
    group: Group
    weights: np.ndarray
    kind: str = "probability"

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "weights", w)
        if w.shape != (self.group.order,):
            raise MeasureError(f"weights must have length {self.group.order}")
        if self.kind not in ("probability", "charge"):
            raise MeasureError(f"unknown measure kind {self.kind!r}")
        mass = w.sum()
        if abs(mass - 1.0) > MASS_TOL:
            raise MeasureError(f"total mass {mass!r} differs from 1 beyond {MASS_TOL}")
        if self.kind == "probability" and (w < 0).any():
            raise MeasureError("probability measure has negative weights")

    @property
    def is_probability(self) -> bool:
        return self.kind == "probability"

    def support(self) -> np.ndarray:
        return np.nonzero(self.weights)[0]

    def __call__(self, s: int) -> float:
        return float(self.weights[s])

    def is_symmetric(self, tol: float = 0.0) -> bool:
        """True when w(s) equals w(s^-1) for every s."""
        return bool(np.max(np.abs(self.weights - self.weights[self.group.inverses])) <= tol)

    def inverse_measure(self) -> "Measure":
        """The measure s -> w(s^-1)."""
        return Measure(self.group, self.weights[self.group.inverses].copy(), self.kind)


def uniform(g: Group) -> Measure:
    """The random distribution pi(g) = 1/|G|."""
    return Measure(g, np.full(g.order, 1.0 / g.order))


def dirac(g: Group, x: int) -> Measure:
    """Point mass at element x."""
    if not 0 <= x < g.order:
        raise MeasureError(f"element index {x} out of range for {g.name}")
    w = np.zeros(g.order)
    w[x] = 1.0
    return Measure(g, w)


def from_weights(g: Group, weights, kind: str = "probability") -> Measure:
    return Measure(g, np.asarray(weights, dtype=np.float64), kind)


def _require_same_group(a: Measure, b: Measure):
    if a.group is not b.group:
        raise MeasureError("measures live on different groups")


def convolve(nu: Measure, mu: Measure) -> Measure:
    """Convolution (nu * mu)(s) = sum_t nu(s t^-1) mu(t).

    One step of the walk driven by nu applied to the state mu.  The
    result is a probability exactly when both inputs are.
    """
    _require_same_group(nu, mu)
    g = nu.group
    out = np.zeros(g.order)
    supp_nu = nu.support()
    supp_mu = mu.support()
    if len(supp_nu) <= len(supp_mu):
        # (nu * mu)(s) = sum_u nu(u) mu(u^-1 s)
        for u in supp_nu:
            row = g.left_mul_row(g.inv(int(u)))
            out += nu.weights[u] * mu.weights[row]
    else:
        # sum over t in supp(mu): add mu(t) * nu(s t^-1)
        for t in supp_mu:
            row = g.right_mul_row(g.inv(int(t)))
            out += mu.weights[t] * nu.weights[row]
    kind = "probability" if (nu.is_probability and mu.is_probability) else "charge"
    return Measure(g, out, kind)


def convolution_power(nu: Measure, k: int, method: str = "iterated") -> Measure:
    """k-fold convolution power; nu^*0 is the point mass at the identity.

    'iterated' performs k-1 convolutions (one O(|supp| |G|) pass per
    step, the natural choice when the whole curve is needed);
    'square' uses square-and-multiply for a single large k.
    """
    if k < 0:
        raise MeasureError("k must be nonnegative")
    g = nu.group
    if k == 0:
        return dirac(g, g.identity)
    if method == "iterated":
        acc = nu
        for _ in range(k - 1):
            acc = convolve(nu, acc)
        return acc
    if method == "square":
        acc = None
        base = nu
        e = k
        while e:
            if e & 1:
                acc = base if acc is None else convolve(base, acc)
            e >>= 1
            if e:
                base = convolve(base, base)
        return acc
    raise MeasureError(f"unknown method {method!r}")


def power_curve(nu: Measure, k_max: int):
    """Yield (k, nu^*k) for k = 0..k_max in one sequential pass."""
    g = nu.group
    cur = dirac(g, g.identity)
    yield 0, cur
    for k in range(1, k_max + 1):
        cur = convolve(nu, cur)
        yield k, cur


def variation_distance(mu: Measure, nu: Measure) -> float:
    """max_{A subset G} |mu(A) - nu(A)|, computed as half the l1 distance.

    For charges the half-l1 value is returned without the [0,1] guarantee.
    """
    _require_same_group(mu, nu)
    return 0.5 * float(np.abs(mu.weights - nu.weights).sum())


def separation_distance(nu_k: Measure) -> float:
    """s = |G| max_t (1/|G| - w(t)); 0 iff uniform, 1 iff some weight is 0."""
    if not nu_k.is_probability:
        raise MeasureError("separation distance requires a probability measure")
    n = nu_k.group.order
    return float(n * (1.0 / n - nu_k.weights.min()))


def shannon_entropy(mu: Measure) -> float:
    """H(mu) = sum_t mu(t) log(1/mu(t)) with 0 log(1/0) = 0."""
    w = mu.weights
    pos = w > 0
    return float(-(w[pos] * np.log(w[pos])).sum())


def entropy_gap(nu_k: Measure) -> float:
    """log|G| - H; zero exactly at the random distribution."""
    if not nu_k.is_probability:
        raise MeasureError("entropy gap requires a probability measure")
    return float(np.log(nu_k.group.order) - shannon_entropy(nu_k))


def lp_distance(mu: Measure, nu: Measure, p) -> float:
    """Raw lp distance ||mu - nu||_p; p may be any real >= 1 or inf."""
    _require_same_group(mu, nu)
    diff = np.abs(mu.weights - nu.weights)
    if p == np.inf or p == "inf":
        return float(diff.max())
    p = float(p)
    if p < 1:
        raise MeasureError("p must be >= 1")
    return float((diff ** p).sum() ** (1.0 / p))


def dp_distance(mu: Measure, nu: Measure, p) -> float:
    """Scaled distance |G|^(1 - 1/p) ||mu - nu||_p; d_1 is twice the variation."""
    n = mu.group.order
    if p == np.inf or p == "inf":
        return n * lp_distance(mu, nu, p)
    return n ** (1.0 - 1.0 / float(p)) * lp_distance(mu, nu, p)


def switzer_guess_probability(mu: Measure, nu: Measure) -> float:
    """Success probability (1 + ||mu - nu||) / 2 of the best guessing strategy.

    One observation is drawn from mu or nu with equal probability; the
    strategy picks whichever measure gives the observation more weight.
    """
    if not (mu.is_probability and nu.is_probability):
        raise MeasureError("the guessing game needs probability measures")
    return 0.5 * (1.0 + variation_distance(mu, nu))


def to_csv(mu: Measure, path_or_file) -> None:
    """Serialize as CSV rows index,label,weight (15 significant digits)."""
    own = isinstance(path_or_file, (str, bytes))
    fh = open(path_or_file, "w") if own else path_or_file
    try:
        fh.write("index,label,weight\n")
        for i, w in enumerate(mu.weights):
            fh.write(f"{i},{mu.group.label(i)},{w:.15g}\n")
    finally:
        if own:
            fh.close()


def csv_string(mu: Measure) -> str:
    buf = io.StringIO()
    to_csv(mu, buf)
    return buf.getvalue()
