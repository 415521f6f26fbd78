"""Stochastic operators induced by driving measures, and their spectra.

The operator of a walk driven by nu is P with p(s, t) = nu(t s^-1); it is
doubly stochastic and right-invariant by construction.  Charges induce
the same matrix shape without the nonnegativity guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import Group
from .measures import Measure, MeasureError, dirac, uniform

OPERATOR_SIZE_LIMIT = 8192  # dense |G|^2 construction guard
RANK_TOL_PER_ORDER = 1e-10  # singular values below 1e-10 * |G| count as zero


class SpectralError(ValueError):
    """Operator construction or eigensolver failure."""


@dataclass(frozen=True)
class StochasticOperator:
    """Dense walk operator; ``nonnegative`` is False for charge-induced ones."""
    group: Group
    matrix: np.ndarray
    measure: Measure
    nonnegative: bool = True

    @property
    def order(self) -> int:
        return self.group.order

    def nu_e(self) -> float:
        """Common diagonal entry nu(e)."""
        return float(self.measure.weights[self.group.identity])

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.matrix, self.matrix.T))

    def apply_left(self, row: np.ndarray) -> np.ndarray:
        """Row vector action u -> uP."""
        return row @ self.matrix


def _build_matrix(m: Measure) -> np.ndarray:
    g = m.group
    if g.order > OPERATOR_SIZE_LIMIT:
        raise SpectralError(
            f"dense operator for |G| = {g.order} exceeds the limit "
            f"{OPERATOR_SIZE_LIMIT}")
    P = np.empty((g.order, g.order))
    for s in range(g.order):
        # row s: nu(t s^-1) as t runs over the group
        P[s] = m.weights[g.right_mul_row(g.inv(s))]
    return P


def operator_from_measure(nu: Measure) -> StochasticOperator:
    """Walk operator of a driving probability; rejects charges."""
    if not nu.is_probability:
        raise MeasureError("operator_from_measure needs a probability; "
                           "use operator_from_charge for signed measures")
    return StochasticOperator(nu.group, _build_matrix(nu), nu, nonnegative=True)


def operator_from_charge(rho: Measure) -> StochasticOperator:
    """Signed operator Q = [rho(t s^-1)] of a charge (row sums still 1)."""
    return StochasticOperator(rho.group, _build_matrix(rho), rho,
                              nonnegative=rho.is_probability)


def push_measure(P: StochasticOperator, mu: Measure) -> Measure:
    """One step of the walk on a state: mu P, which equals nu * mu."""
    if mu.group is not P.group:
        raise MeasureError("measure lives on a different group")
    kind = "probability" if (P.nonnegative and mu.is_probability) else "charge"
    return Measure(P.group, mu.weights @ P.matrix, kind)


def delta_power_curve(P: StochasticOperator, k_max: int):
    """Yield (k, delta_e P^k) for k = 0..k_max by repeated row action."""
    row = dirac(P.group, P.group.identity).weights
    yield 0, row
    for k in range(1, k_max + 1):
        row = row @ P.matrix
        yield k, row


@dataclass
class Spectrum:
    """Eigenvalues of a walk operator with the derived gap statistics."""
    eigenvalues: np.ndarray  # real (descending) when symmetric, else complex
    lambda_star: float
    lambda_2: float | None
    multiplicity_of_1: int
    symmetric: bool

    TOL_ONE = 1e-9


def spectrum(P: StochasticOperator) -> Spectrum:
    """Full spectrum; real sorted-descending in the symmetric case.

    lambda_star is the largest modulus among eigenvalues away from the
    (single, when ergodic) eigenvalue 1; lambda_2 is the second largest
    real eigenvalue in the symmetric case.
    """
    if P.is_symmetric():
        vals = np.linalg.eigvalsh(P.matrix)[::-1]
        symmetric = True
    else:
        try:
            vals = np.linalg.eigvals(P.matrix)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - solver failure
            raise SpectralError(f"eigensolver failed: {exc}") from exc
        vals = vals[np.argsort(-np.abs(vals), kind="stable")]
        symmetric = False
    mult1 = int(np.sum(np.abs(vals - 1.0) <= Spectrum.TOL_ONE))
    mods = np.abs(vals).copy()
    # drop one eigenvalue closest to 1 before taking the star modulus
    drop = int(np.argmin(np.abs(vals - 1.0)))
    mods[drop] = -np.inf
    lambda_star = float(mods.max()) if P.order > 1 else 0.0
    lambda_2 = None
    if symmetric and P.order > 1:
        lambda_2 = float(np.sort(vals)[-2])
    return Spectrum(vals, lambda_star, lambda_2, mult1, symmetric)


def symmetric_eigensystem(P: StochasticOperator):
    """Orthonormal eigenbasis (descending eigenvalues) of a symmetric P."""
    if not P.is_symmetric():
        raise SpectralError("eigensystem shortcut requires a symmetric operator")
    vals, vecs = np.linalg.eigh(P.matrix)
    return vals[::-1], vecs[:, ::-1]


def spectral_variation_bounds(nu: Measure, k: int):
    """Eigenvalue-sum control of the distance to random for symmetric nu.

    Returns (exact_l2_sq, ubl, crude):

    * exact_l2_sq: ||nu^*k - pi||_2^2 summed from the spectrum,
    * ubl:   the quarter-sum upper bound on the squared variation distance,
    * crude: (|G| - 1)/4 * lambda_star^(2k).
    """
    if not nu.is_symmetric():
        raise SpectralError("spectral bounds require a symmetric driving measure")
    P = operator_from_measure(nu)
    vals, vecs = symmetric_eigensystem(P)
    e = P.group.identity
    drop = int(np.argmin(np.abs(vals - 1.0)))
    mask = np.ones(len(vals), dtype=bool)
    mask[drop] = False
    coeffs = vecs[e, mask] ** 2  # unit-norm eigenvectors: |G| v_t(e)^2 terms
    lams = vals[mask]
    exact_l2_sq = float((coeffs * lams ** (2 * k)).sum())
    ubl = float(P.order / 4.0 * (coeffs * lams ** (2 * k)).sum())
    lam_star = float(np.abs(lams).max()) if len(lams) else 0.0
    crude = (P.order - 1) / 4.0 * lam_star ** (2 * k)
    return exact_l2_sq, ubl, crude


@dataclass
class GershgorinReport:
    disc_center: float
    disc_radius: float
    lower_eig: float
    invertible_certificate: bool


def gershgorin(P: StochasticOperator) -> GershgorinReport:
    """Disc containment for a walk operator (constant diagonal nu(e)).

    Every eigenvalue lies in B[nu(e), 1 - nu(e)]; in the symmetric case
    the bottom eigenvalue satisfies lambda >= -1 + 2 nu(e); nu(e) > 1/2
    certifies invertibility.
    """
    ve = P.nu_e()
    return GershgorinReport(ve, 1.0 - ve, -1.0 + 2.0 * ve, ve > 0.5)


def eigenvector_lower_bound(P: StochasticOperator, lam: float, ks):
    """Distance lower bound (1/2) ||u||_1 |lambda|^k from a left eigenvector.

    The eigenvector is scaled by the largest c > 0 keeping pi + c u a
    probability (the maximal feasible normalization, which gives the
    strongest bound of this family).
    """
    ks = np.asarray(ks)
    if abs(lam - 1.0) <= 1e-12:
        raise SpectralError("the eigenvalue 1 gives no lower bound")
    if P.is_symmetric():
        vals, vecs = symmetric_eigensystem(P)
    else:
        cvals, cvecs = np.linalg.eig(P.matrix.T)
        if np.abs(np.imag(cvals[np.argmin(np.abs(cvals - lam))])) > 1e-10:
            raise SpectralError("requested eigenvalue is not real")
        vals, vecs = np.real(cvals), np.real(cvecs)
    j = int(np.argmin(np.abs(vals - lam)))
    if abs(vals[j] - lam) > 1e-8:
        raise SpectralError(f"{lam} is not an eigenvalue (nearest {vals[j]})")
    u = vecs[:, j]
    neg = -u.min()
    if neg <= 0:
        u = -u
        neg = -u.min()
    if neg <= 0:
        raise SpectralError("eigenvector has no negative part to normalize against")
    c = (1.0 / P.order) / neg
    l1 = np.abs(c * u).sum()
    return 0.5 * l1 * np.abs(lam) ** ks


def support_lower_bound(sigma_size: int, group_order: int, ks):
    """Lower bound 1 - |Sigma|^k / |G| from support growth, floored at 0."""
    if sigma_size < 1 or group_order < 1:
        raise ValueError("sizes must be >= 1")
    ks = np.asarray(ks, dtype=np.float64)
    log_ratio = ks * np.log(sigma_size) - np.log(group_order)
    out = 1.0 - np.exp(np.minimum(log_ratio, 0.0))
    return np.maximum(out, 0.0)


@dataclass
class InvertibilityVerdict:
    """Numerical-rank verdict with a borderline flag instead of a guess."""
    invertible: bool
    smallest_singular_value: float
    threshold: float
    borderline: bool
    nullspace_dim: int
    abs_det: float

    def __bool__(self):
        return self.invertible


def is_invertible(P: StochasticOperator) -> InvertibilityVerdict:
    """Rank test at threshold 1e-10 |G|, cross-checked two further ways.

    The determinant modulus and the dimension of the left nullspace (the
    uP = pi uniqueness criterion reduces to it) are computed from the
    same SVD; disagreement is impossible by construction, the flag marks
    singular values within one decade of the threshold.
    """
    svals = np.linalg.svd(P.matrix, compute_uv=False)
    tol = RANK_TOL_PER_ORDER * P.order
    smin = float(svals.min())
    nullspace_dim = int(np.sum(svals <= tol))
    sign, logdet = np.linalg.slogdet(P.matrix)
    abs_det = 0.0 if sign == 0 else float(np.exp(logdet))
    invertible = smin > tol
    borderline = tol / 10.0 < smin <= tol * 10.0
    return InvertibilityVerdict(invertible, smin, tol, borderline,
                                nullspace_dim, abs_det)


def stationary_check(P: StochasticOperator) -> float:
    """Max deviation of pi P from pi."""
    pi = uniform(P.group).weights
    return float(np.abs(pi @ P.matrix - pi).max())


def spectrum_to_csv(spec: Spectrum, path_or_file) -> None:
    """CSV rows re,im,abs for each eigenvalue."""
    own = isinstance(path_or_file, (str, bytes))
    fh = open(path_or_file, "w") if own else path_or_file
    try:
        fh.write("re,im,abs\n")
        for v in np.atleast_1d(spec.eigenvalues):
            c = complex(v)
            fh.write(f"{c.real:.15g},{c.imag:.15g},{abs(c):.15g}\n")
    finally:
        if own:
            fh.close()


def operator_to_csv(P: StochasticOperator, path_or_file, *, force: bool = False) -> None:
    """Dense CSV dump of the matrix; guarded by a size flag."""
    if P.order > 512 and not force:
        raise SpectralError("operator CSV for |G| > 512 needs force=True")
    own = isinstance(path_or_file, (str, bytes))
    fh = open(path_or_file, "w") if own else path_or_file
    try:
        for row in P.matrix:
            fh.write(",".join(f"{x:.15g}" for x in row) + "\n")
    finally:
        if own:
            fh.close()
