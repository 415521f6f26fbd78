"""Irreducible representations and Fourier analysis on catalogue groups.

Supported catalogues: cyclic(n), cube(n), quaternion, dihedral(4).  The
completeness of each catalogue is certified by its invariants (count =
number of conjugacy classes, sum of squared dimensions = |G|, orthonormal
characters), which the test suite checks exhaustively.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .groups import Group, conjugacy_classes, popcount
from .measures import Measure


class FourierError(ValueError):
    """Unsupported group or mismatched transform inputs."""


@dataclass(frozen=True)
class Representation:
    """Unitary matrix representation stored as an explicit table."""
    group: Group
    name: str
    matrices: np.ndarray  # shape (|G|, d, d), complex

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    @cached_property
    def is_trivial(self) -> bool:
        return self.dim == 1 and np.allclose(self.matrices, 1.0, atol=1e-14)

    def __call__(self, s: int) -> np.ndarray:
        return self.matrices[s]

    def character(self) -> "Character":
        return Character(self.group, self.name,
                         np.trace(self.matrices, axis1=1, axis2=2))


@dataclass(frozen=True)
class Character:
    group: Group
    name: str
    values: np.ndarray


@dataclass(frozen=True)
class IrrepCatalog:
    """Complete list of pairwise-inequivalent irreducibles."""
    group: Group
    reps: tuple

    def __iter__(self):
        return iter(self.reps)

    def __len__(self):
        return len(self.reps)

    @property
    def dims(self):
        return [r.dim for r in self.reps]

    def nontrivial(self):
        return [r for r in self.reps if not r.is_trivial]


@dataclass(frozen=True)
class FourierCoefficient:
    rep: Representation
    matrix: np.ndarray


def _as_function(f, g: Group) -> np.ndarray:
    if isinstance(f, Measure):
        if f.group is not g:
            raise FourierError("measure lives on a different group")
        return f.weights.astype(np.complex128)
    arr = np.asarray(f, dtype=np.complex128)
    if arr.shape != (g.order,):
        raise FourierError(f"function must have length {g.order}")
    return arr


def irrep_catalog(g: Group) -> IrrepCatalog:
    """All irreducibles of a supported group.

    cyclic(n):  rho_t(s) = exp(2 pi i t s / n)
    cube(n):    rho_t(s) = (-1)^(t . s)
    quaternion: four sign characters and one 2-dim representation
    dihedral(4): four sign characters and the rotation/reflection 2-dim one
    """
    if g.kind == "cyclic":
        n = g.order
        s = np.arange(n)
        reps = tuple(
            Representation(g, f"chi{t}",
                           np.exp(2j * np.pi * t * s / n).reshape(n, 1, 1))
            for t in range(n))
        return IrrepCatalog(g, reps)
    if g.kind == "cube":
        order = g.order
        idx = np.arange(order)
        reps = []
        for t in range(order):
            signs = np.where(popcount(idx & t) % 2 == 0, 1.0, -1.0)
            reps.append(Representation(
                g, f"chi{t}", signs.astype(np.complex128).reshape(order, 1, 1)))
        return IrrepCatalog(g, tuple(reps))
    if g.kind == "quaternion":
        return _quaternion_catalog(g)
    if g.kind == "dihedral":
        return _dihedral4_catalog(g)
    raise FourierError(f"no irrep catalogue for group kind {g.kind!r}")


def _quaternion_catalog(g: Group) -> IrrepCatalog:
    # element indexing: 1, -1, i, -i, j, -j, k, -k
    order = 8
    reps = [Representation(g, "triv", np.ones((order, 1, 1), dtype=np.complex128))]
    subgroups = {"i": {0, 1, 2, 3}, "j": {0, 1, 4, 5}, "k": {0, 1, 6, 7}}
    for axis, members in subgroups.items():
        vals = np.array([1.0 if s in members else -1.0 for s in range(order)],
                        dtype=np.complex128)
        reps.append(Representation(g, f"sgn_{axis}", vals.reshape(order, 1, 1)))
    base = {
        0: np.eye(2, dtype=np.complex128),                       # 1
        2: np.array([[1j, 0], [0, -1j]]),                        # i
        4: np.array([[0, 1j], [1j, 0]]),                         # j
        6: np.array([[0, -1], [1, 0]], dtype=np.complex128),     # k
    }
    mats = np.empty((order, 2, 2), dtype=np.complex128)
    for axis_idx, m in base.items():
        mats[axis_idx] = m
        mats[axis_idx + 1] = -m
    reps.append(Representation(g, "spin", mats))
    return IrrepCatalog(g, tuple(reps))


def _dihedral4_catalog(g: Group) -> IrrepCatalog:
    # element x = rotation exponent (x % 4) and reflection flag (x // 4)
    order = 8
    k = np.arange(order) % 4
    m = np.arange(order) // 4
    reps = []
    for x in (1, -1):
        for y in (1, -1):
            vals = (np.float_power(float(x), k) * np.float_power(float(y), m))
            name = {(1, 1): "triv", (1, -1): "sgn_refl",
                    (-1, 1): "sgn_rot", (-1, -1): "sgn_prod"}[(x, y)]
            reps.append(Representation(
                g, name, vals.astype(np.complex128).reshape(order, 1, 1)))
    theta = k * np.pi / 2
    rot = np.zeros((order, 2, 2))
    rot[:, 0, 0] = np.cos(theta)
    rot[:, 0, 1] = -np.sin(theta)
    rot[:, 1, 0] = np.sin(theta)
    rot[:, 1, 1] = np.cos(theta)
    flip = np.where(m == 1, -1.0, 1.0)
    rot[:, 0, 1] *= flip
    rot[:, 1, 1] *= flip
    reps.append(Representation(g, "plane", np.round(rot).astype(np.complex128)))
    return IrrepCatalog(g, tuple(reps))


def fourier_transform(f, rho: Representation) -> FourierCoefficient:
    """f-hat(rho) = sum_s f(s) rho(s)."""
    vec = _as_function(f, rho.group)
    mat = np.tensordot(vec, rho.matrices, axes=(0, 0))
    return FourierCoefficient(rho, mat)


def fourier_inversion(coeffs) -> np.ndarray:
    """Recover f from the full coefficient list.

    f(s) = (1/|G|) sum_i d_i tr(rho_i(s^-1) f-hat(rho_i)).
    """
    coeffs = list(coeffs)
    if not coeffs:
        raise FourierError("need a complete coefficient list")
    g = coeffs[0].rep.group
    dims_sq = sum(c.rep.dim ** 2 for c in coeffs)
    if dims_sq != g.order:
        raise FourierError("coefficient list does not cover a complete catalogue")
    inv = g.inverses
    out = np.zeros(g.order, dtype=np.complex128)
    for c in coeffs:
        d = c.rep.dim
        # tr(rho(s^-1) fhat) for all s at once
        traces = np.einsum("sab,ba->s", c.rep.matrices[inv], c.matrix)
        out += d * traces
    return out / g.order


def function_convolve(f, h, g: Group) -> np.ndarray:
    """(f * h)(s) = sum_t f(s t^-1) h(t) for arbitrary complex functions."""
    fv = _as_function(f, g)
    hv = _as_function(h, g)
    out = np.zeros(g.order, dtype=np.complex128)
    for t in range(g.order):
        if hv[t] == 0:
            continue
        out += hv[t] * fv[g.right_mul_row(g.inv(t))]
    return out


def convolution_theorem_check(f, h, catalog: IrrepCatalog) -> float:
    """Max deviation over irreps of (f*h)-hat versus f-hat h-hat."""
    g = catalog.group
    conv = function_convolve(f, h, g)
    worst = 0.0
    for rho in catalog:
        lhs = fourier_transform(conv, rho).matrix
        rhs = fourier_transform(f, rho).matrix @ fourier_transform(h, rho).matrix
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def plancherel_check(f, h, catalog: IrrepCatalog) -> float:
    """|sum_s f(s^-1) h(s) - (1/|G|) sum_i d_i tr(f-hat h-hat)|."""
    g = catalog.group
    fv = _as_function(f, g)
    hv = _as_function(h, g)
    lhs = (fv[g.inverses] * hv).sum()
    rhs = 0.0 + 0.0j
    for rho in catalog:
        rhs += rho.dim * np.trace(fourier_transform(fv, rho).matrix
                                  @ fourier_transform(hv, rho).matrix)
    rhs /= g.order
    return float(abs(lhs - rhs))


def diaconis_upper_bound(nu: Measure, k: int, catalog: IrrepCatalog) -> float:
    """Fourier upper bound on the squared variation distance after k steps.

    (1/4) sum over non-trivial irreps of d_i tr(nu-hat^k (nu-hat^k)*),
    applied through the convolution theorem nu^*k-hat = nu-hat^k.
    """
    if not nu.is_probability:
        raise FourierError("the upper bound needs a probability measure")
    total = 0.0
    for rho in catalog.nontrivial():
        coeff = fourier_transform(nu, rho).matrix
        powered = np.linalg.matrix_power(coeff, k)
        total += rho.dim * float(np.real(np.trace(powered @ powered.conj().T)))
    return total / 4.0


def character_inner_product(chi1: Character, chi2: Character) -> complex:
    """(chi1 | chi2) = (1/|G|) sum_s chi1(s) conj(chi2(s))."""
    return complex((chi1.values * np.conj(chi2.values)).sum() / chi1.group.order)


def schur_average(rho1: Representation, rho2: Representation,
                  h0: np.ndarray) -> np.ndarray:
    """Averaged intertwiner (1/|G|) sum_t rho2(t)^-1 h0 rho1(t).

    Vanishes for inequivalent irreducibles and equals (tr h0 / d) I when
    rho1 = rho2; used as a test invariant.
    """
    g = rho1.group
    inv = g.inverses
    acc = np.zeros((rho2.dim, rho1.dim), dtype=np.complex128)
    for t in range(g.order):
        acc += rho2.matrices[inv[t]] @ h0 @ rho1.matrices[t]
    return acc / g.order


def character_table_csv(catalog: IrrepCatalog, path_or_file) -> None:
    """Rows = irreps, columns = conjugacy classes, entries ``re+imi``."""
    g = catalog.group
    classes = conjugacy_classes(g).classes
    own = isinstance(path_or_file, (str, bytes))
    fh = open(path_or_file, "w") if own else path_or_file
    try:
        header = ["irrep"] + ["cls_" + g.label(c[0]).replace(",", ";") for c in classes]
        fh.write(",".join(header) + "\n")
        for rho in catalog:
            chi = rho.character().values
            cells = [rho.name]
            for cls in classes:
                v = complex(chi[cls[0]])
                cells.append(f"{v.real:.15g}{v.imag:+.15g}i")
            fh.write(",".join(cells) + "\n")
    finally:
        if own:
            fh.close()


def character_table_string(catalog: IrrepCatalog) -> str:
    buf = io.StringIO()
    character_table_csv(catalog, buf)
    return buf.getvalue()
