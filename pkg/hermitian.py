"""The adapted almost complex structure and its invariants.

J X = Y, J Y = -X, J Z = W, J W = -Z. The Kahler form, its exterior and
covariant derivatives, nabla J and the Nijenhuis tensor are each available
in two independent forms so that one can check the other.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from algebra_core import EXACT, Scalar, ScalarField, Tensor3, Vec4, _same_field, dot
from lie_metric import Connection, LieAlgebra4, W, X, Y, Z, bracket


@dataclass(frozen=True, eq=False)
class AlmostComplexJ:
    """J as a matrix acting on columns: (J v)_a = sum_b matrix[a, b] v_b"""
    scalars: ScalarField
    matrix: np.ndarray

    @classmethod
    def adapted(cls, scalars: ScalarField = EXACT) -> "AlmostComplexJ":
        m = scalars.zeros((4, 4))
        m[Y, X] = scalars.one
        m[X, Y] = -scalars.one
        m[W, Z] = scalars.one
        m[Z, W] = -scalars.one
        m.flags.writeable = False
        return cls(scalars, m)

    def __call__(self, v: Vec4) -> Vec4:
        scalars = _same_field(self, v)
        return Vec4(scalars, scalars.array(self.matrix @ v.components, (4,)))

    def square_defect(self) -> Scalar:
        """max |J^2 + Id|"""
        return self.scalars.max_abs(self.matrix @ self.matrix + self.scalars.identity())

    def compatibility_defect(self) -> Scalar:
        """max |J^T J - Id|, zero iff g(Ju, Jv) = g(u, v)"""
        return self.scalars.max_abs(self.matrix.T @ self.matrix - self.scalars.identity())

    def twist(self, tensor: Tensor3, *slots: int) -> Tensor3:
        """The form obtained by feeding J e into each listed slot"""
        values = tensor.entries
        for slot in slots:
            values = np.moveaxis(np.tensordot(values, self.matrix, axes=([slot], [0])), -1, slot)
        return Tensor3(_same_field(tensor, self), self.scalars.array(values, (4, 4, 4)))


def kahler_form(J: AlmostComplexJ, u: Vec4, v: Vec4) -> Scalar:
    """omega(u, v) = g(J u, v)"""
    return dot(J(u), v)


def d_omega_general(L: LieAlgebra4, J: AlmostComplexJ, u: Vec4, v: Vec4, w: Vec4) -> Scalar:
    """Exterior derivative of omega from its definition (k = 2)"""
    def omega(p, q):
        return kahler_form(J, p, q)

    # u(omega(v, w)) and its two partners: omega is constant on left-invariant fields
    du = dv = dw = L.scalars.zero
    return (du - dv + dw
            - omega(bracket(L, u, v), w)
            + omega(bracket(L, u, w), v)
            - omega(bracket(L, v, w), u))


def d_omega_fast(L: LieAlgebra4, J: AlmostComplexJ, u: Vec4, v: Vec4, w: Vec4) -> Scalar:
    """-g(J[u,v],w) - g(J[v,w],u) - g(J[w,u],v)"""
    return (-dot(J(bracket(L, u, v)), w)
            - dot(J(bracket(L, v, w)), u)
            - dot(J(bracket(L, w, u)), v))


def d_omega_defect(L: LieAlgebra4, J: AlmostComplexJ) -> Scalar:
    """Max |d omega| over basis triples (alternating, so increasing triples suffice)"""
    e = [Vec4.basis(i, L.scalars) for i in range(4)]
    return max(abs(d_omega_general(L, J, e[i], e[j], e[k]))
               for i, j, k in combinations(range(4), 3))


@dataclass(frozen=True, eq=False)
class NablaOmega:
    """values[i, j, k] = (nabla_{e_i} omega)(e_j, e_k)"""
    values: Tensor3

    def __getitem__(self, index: tuple[int, int, int]) -> Scalar:
        return self.values[index]

    def is_zero(self) -> bool:
        return self.values.is_zero()


def nabla_omega(L: LieAlgebra4, J: AlmostComplexJ) -> NablaOmega:
    """Bracket form of the covariant derivative of omega.

    2 (nabla_X omega)(Y, Z) = g(JZ,[X,Y]) + g([JZ,X],Y) + g(X,[JZ,Y])
                            - g(JY,[X,Z]) - g([JY,X],Z) - g(X,[JY,Z])
    """
    c = L.c.entries
    m = J.matrix
    # g([e_i, e_j], J e_k)
    paired = np.tensordot(c, m, axes=([2], [0]))
    # g([J e_k, e_i], e_j)
    acted = np.tensordot(c, m, axes=([0], [0]))
    half = paired + acted + acted.transpose(1, 0, 2)
    values = (half - half.transpose(0, 2, 1)) / 2
    return NablaOmega(Tensor3(_same_field(L.c, J), L.scalars.array(values, (4, 4, 4))))


def nabla_J(C: Connection, J: AlmostComplexJ, u: Vec4, v: Vec4) -> Vec4:
    """(nabla_u J) v = nabla_u (J v) - J nabla_u v"""
    return C.derivative(u, J(v)) - J(C.derivative(u, v))


def nijenhuis(L: LieAlgebra4, J: AlmostComplexJ, u: Vec4, v: Vec4) -> Vec4:
    """N_J(u, v) = [u,v] + J[Ju,v] + J[u,Jv] - [Ju,Jv]"""
    return (bracket(L, u, v)
            + J(bracket(L, J(u), v))
            + J(bracket(L, u, J(v)))
            - bracket(L, J(u), J(v)))


def nijenhuis_defect(L: LieAlgebra4, J: AlmostComplexJ) -> Scalar:
    e = [Vec4.basis(i, L.scalars) for i in range(4)]
    return max(nijenhuis(L, J, e[i], e[j]).max_abs() for i, j in combinations(range(4), 2))


def nijenhuis_cyclic_sum(L: LieAlgebra4, J: AlmostComplexJ, u: Vec4, v: Vec4, w: Vec4) -> Scalar:
    """g(Jw, N(v,u)) + g(Jv, N(u,w)) + g(Ju, N(v,w))"""
    return (dot(J(w), nijenhuis(L, J, v, u))
            + dot(J(v), nijenhuis(L, J, u, w))
            + dot(J(u), nijenhuis(L, J, v, w)))


def nijenhuis_coefficients(L: LieAlgebra4, J: AlmostComplexJ) -> tuple[Scalar, ...]:
    """(k1, k2, k3, k4) with N_J(Z, X) = k1 X + k2 Y + k3 Z + k4 W"""
    e = [Vec4.basis(i, L.scalars) for i in range(4)]
    return tuple(nijenhuis(L, J, e[Z], e[X]))


def is_almost_kahler(L: LieAlgebra4, J: AlmostComplexJ) -> bool:
    return L.scalars.is_zero(d_omega_defect(L, J))


def is_integrable(L: LieAlgebra4, J: AlmostComplexJ) -> bool:
    return L.scalars.is_zero(nijenhuis_defect(L, J))
