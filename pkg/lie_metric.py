"""Metric Lie algebras in the orthonormal frame (X, Y, Z, W).

Brackets, the Jacobi identity, the Levi-Civita connection from the Koszul
formula, curvature, and the second fundamental forms of the foliation whose
leaves are tangent to span{Z, W}.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping, Optional, Sequence

import numpy as np

from algebra_core import (
    EXACT,
    LieClassError,
    Scalar,
    ScalarField,
    Tensor3,
    Vec4,
    _same_field,
    dot,
    span_basis,
)

logger = logging.getLogger(__name__)

X, Y, Z, W = range(4)
LABELS = ("X", "Y", "Z", "W")
HORIZONTAL = (X, Y)
VERTICAL = (Z, W)


class AntisymmetryError(LieClassError):
    """Structure constants with c_ij != -c_ji"""


class DegeneratePlaneError(LieClassError):
    """Sectional curvature requested for linearly dependent vectors"""


@dataclass(frozen=True, eq=False)
class LieAlgebra4:
    """[e_i, e_j] = sum_k c[i, j, k] e_k, metric = identity"""
    c: Tensor3

    def __post_init__(self):
        defect = self.antisymmetry_defect()
        if not self.scalars.is_zero(defect):
            raise AntisymmetryError(
                f"structure constants are not antisymmetric (defect {self.scalars.format(defect)})"
            )

    @property
    def scalars(self) -> ScalarField:
        return self.c.scalars

    @classmethod
    def abelian(cls, scalars: ScalarField = EXACT) -> "LieAlgebra4":
        return cls(Tensor3.zero(scalars))

    @classmethod
    def from_brackets(cls, brackets: Mapping[tuple[int, int], Sequence],
                      scalars: ScalarField = EXACT) -> "LieAlgebra4":
        """Fill c from {(i, j): [e_i, e_j] components}; (j, i) is implied"""
        c = scalars.zeros((4, 4, 4))
        for (i, j), coeffs in brackets.items():
            values = scalars.array(coeffs, (4,))
            c[i, j] = values
            c[j, i] = -values
        return cls(Tensor3(scalars, c))

    def antisymmetry_defect(self) -> Scalar:
        return self.scalars.max_abs(self.c.entries + self.c.entries.transpose(1, 0, 2))

    def structure(self, i: int, j: int) -> Vec4:
        return Vec4(self.scalars, self.c.entries[i, j])


def bracket(L: LieAlgebra4, u: Vec4, v: Vec4) -> Vec4:
    scalars = _same_field(L.c, u, v)
    coeffs = np.tensordot(np.outer(u.components, v.components), L.c.entries,
                          axes=([0, 1], [0, 1]))
    return Vec4(scalars, scalars.array(coeffs, (4,)))


def jacobi_defect(L: LieAlgebra4) -> Scalar:
    """Max-norm of the cyclic sum over basis triples; zero iff L is a Lie algebra

    The cyclic sum is alternating for antisymmetric c, so increasing triples suffice.
    """
    worst = L.scalars.zero
    basis = [Vec4.basis(i, L.scalars) for i in range(4)]
    for i, j, k in combinations(range(4), 3):
        u, v, w = basis[i], basis[j], basis[k]
        cyclic = (bracket(L, bracket(L, u, v), w)
                  + bracket(L, bracket(L, v, w), u)
                  + bracket(L, bracket(L, w, u), v))
        worst = max(worst, cyclic.max_abs())
    return worst


@dataclass(frozen=True, eq=False)
class Connection:
    """gamma[i, j, k] = g(nabla_{e_i} e_j, e_k) for left-invariant fields"""
    gamma: Tensor3

    @property
    def scalars(self) -> ScalarField:
        return self.gamma.scalars

    def derivative(self, u: Vec4, v: Vec4) -> Vec4:
        """nabla_u v"""
        scalars = _same_field(self.gamma, u, v)
        coeffs = np.tensordot(np.outer(u.components, v.components), self.gamma.entries,
                              axes=([0, 1], [0, 1]))
        return Vec4(scalars, scalars.array(coeffs, (4,)))


def levi_civita(L: LieAlgebra4) -> Connection:
    """Koszul: 2 g(nabla_u v, w) = g([u,v],w) - g([v,w],u) + g([w,u],v)"""
    defect = jacobi_defect(L)
    if not L.scalars.is_zero(defect):
        logger.warning("connection of a bracket table with Jacobi defect %s",
                       L.scalars.format(defect))
    c = L.c
    gamma = (c - c.arguments("yzx") + c.arguments("zxy")) / 2
    return Connection(gamma)


def curvature_operator(C: Connection, L: LieAlgebra4, u: Vec4, v: Vec4, w: Vec4) -> Vec4:
    """R(u,v)w = nabla_u nabla_v w - nabla_v nabla_u w - nabla_[u,v] w"""
    return (C.derivative(u, C.derivative(v, w))
            - C.derivative(v, C.derivative(u, w))
            - C.derivative(bracket(L, u, v), w))


def sectional_curvature(C: Connection, L: LieAlgebra4, u: Vec4, v: Vec4) -> Scalar:
    scalars = _same_field(C.gamma, L.c, u, v)
    gram = dot(u, u) * dot(v, v) - dot(u, v) ** 2
    if scalars.is_zero(gram):
        raise DegeneratePlaneError(f"{u!r} and {v!r} do not span a plane")
    return dot(curvature_operator(C, L, u, v, v), u) / gram


def ricci_tensor(C: Connection, L: LieAlgebra4) -> np.ndarray:
    """Ric(e_j, e_k) = sum_i g(R(e_i, e_j) e_k, e_i)"""
    scalars = L.scalars
    basis = [Vec4.basis(i, scalars) for i in range(4)]
    ric = scalars.zeros((4, 4))
    for j, k in product(range(4), repeat=2):
        ric[j, k] = scalars.total(
            dot(curvature_operator(C, L, e, basis[j], basis[k]), e) for e in basis
        )
    return ric


def scalar_curvature(C: Connection, L: LieAlgebra4) -> Scalar:
    ric = ricci_tensor(C, L)
    return L.scalars.total(ric[i, i] for i in range(4))


def horizontal(v: Vec4) -> Vec4:
    values = v.components.copy()
    values[list(VERTICAL)] = v.scalars.zero
    return Vec4(v.scalars, values)


def vertical(v: Vec4) -> Vec4:
    values = v.components.copy()
    values[list(HORIZONTAL)] = v.scalars.zero
    return Vec4(v.scalars, values)


@dataclass(frozen=True, eq=False)
class FoliationData:
    trace_bv: Vec4
    bh_xx: Vec4
    bh_yy: Vec4
    bh_xy: Vec4
    conformal_witness: Optional[Vec4]
    totally_geodesic: bool

    @property
    def minimal(self) -> bool:
        return self.trace_bv.is_zero()

    @property
    def conformal(self) -> bool:
        return self.conformal_witness is not None

    @property
    def riemannian(self) -> bool:
        return self.conformal and self.conformal_witness.is_zero()


def foliation_data(C: Connection) -> FoliationData:
    scalars = C.scalars
    e = [Vec4.basis(i, scalars) for i in range(4)]

    def second_form(u, v, project):
        return project(C.derivative(u, v) + C.derivative(v, u)) / 2

    trace_bv = horizontal(C.derivative(e[Z], e[Z]) + C.derivative(e[W], e[W]))
    bv = [second_form(e[i], e[j], horizontal) for i, j in ((Z, Z), (W, W), (Z, W))]
    bh_xx = second_form(e[X], e[X], vertical)
    bh_yy = second_form(e[Y], e[Y], vertical)
    bh_xy = second_form(e[X], e[Y], vertical)
    witness = bh_xx if bh_xx == bh_yy and bh_xy.is_zero() else None
    return FoliationData(
        trace_bv=trace_bv,
        bh_xx=bh_xx,
        bh_yy=bh_yy,
        bh_xy=bh_xy,
        conformal_witness=witness,
        totally_geodesic=all(b.is_zero() for b in bv),
    )


def pre_normal_form(L: LieAlgebra4) -> dict[str, Scalar]:
    """General coefficients of [Z,X], [Z,Y], [W,X], [W,Y] before minimality/conformality"""
    zx, zy, wx, wy = (L.structure(*pair) for pair in ((Z, X), (Z, Y), (W, X), (W, Y)))
    return {
        "alpha": zx[X], "beta": zx[Y], "z1": zx[Z], "w1": zx[W],
        "a2": zy[X], "b2": zy[Y], "z2": zy[Z], "w2": zy[W],
        "a": wx[X], "b": wx[Y], "z3": wx[Z], "d3": wx[W],
        "a4": wy[X], "b4": wy[Y], "z4": wy[Z], "d4": wy[W],
    }


def normal_form_residuals(L: LieAlgebra4) -> list[tuple[str, Scalar]]:
    """Every entry the adapted normal form forces; all zero iff L is adapted"""
    p = pre_normal_form(L)
    wz, yx = L.structure(W, Z), L.structure(Y, X)
    return [
        ("integrability: coefficient of X in [W,Z] != 0", wz[X]),
        ("integrability: coefficient of Y in [W,Z] != 0", wz[Y]),
        ("frame: coefficient of Z in [W,Z] != 0", wz[Z]),
        ("frame: coefficient of Y in [Y,X] != 0", yx[Y]),
        ("minimality: coefficient of W in [W,X] != -z1", p["d3"] + p["z1"]),
        ("minimality: coefficient of W in [W,Y] != -z2", p["d4"] + p["z2"]),
        ("conformality: coefficient of Y in [Z,Y] != alpha", p["b2"] - p["alpha"]),
        ("conformality: coefficient of Y in [W,Y] != a", p["b4"] - p["a"]),
        ("conformality: coefficient of X in [Z,Y] != -beta", p["a2"] + p["beta"]),
        ("conformality: coefficient of X in [W,Y] != -b", p["a4"] + p["b"]),
    ]


def _series(L: LieAlgebra4, step) -> list[int]:
    current = [Vec4.basis(i, L.scalars) for i in range(4)]
    dims = [4]
    while current:
        current = span_basis(step(current), L.scalars)
        if len(current) == dims[-1]:
            break
        dims.append(len(current))
    return dims


def derived_series(L: LieAlgebra4) -> list[int]:
    """Dimensions of g, [g,g], [[g,g],[g,g]], ... until it stabilizes"""
    return _series(L, lambda vs: [bracket(L, u, v) for u, v in combinations(vs, 2)])


def lower_central_series(L: LieAlgebra4) -> list[int]:
    basis = [Vec4.basis(i, L.scalars) for i in range(4)]
    return _series(L, lambda vs: [bracket(L, e, v) for e in basis for v in vs])


def is_solvable(L: LieAlgebra4) -> bool:
    return derived_series(L)[-1] == 0


def is_nilpotent(L: LieAlgebra4) -> bool:
    return lower_central_series(L)[-1] == 0


def structure_label(L: LieAlgebra4) -> str:
    if is_nilpotent(L):
        return "nilpotent"
    return "solvable" if is_solvable(L) else "not solvable"
