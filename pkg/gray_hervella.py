"""The space W of trilinear forms with the symmetries of nabla omega.

alpha(x,y,z) = -alpha(x,z,y) = -alpha(x,Jy,Jz). W splits orthogonally into
W1 + W2 + W3 + W4; in dimension 4 only W2 and W4 survive, and they are the
almost Kahler and the integrable parts of nabla omega respectively.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from algebra_core import EXACT, LieClassError, Scalar, ScalarField, Tensor3, Vec4, _same_field
from hermitian import AlmostComplexJ, NablaOmega


class NotInWError(LieClassError):
    """A tensor without the symmetries of W"""


class ClassLabel(Enum):
    W = "W"
    AK = "AK"
    I = "I"  # noqa: E741
    K = "K"


def w_membership_defect(alpha: Tensor3, J: AlmostComplexJ | None = None) -> Scalar:
    """Largest violation of the two identities defining W; zero iff alpha is in W"""
    J = J or AlmostComplexJ.adapted(alpha.scalars)
    skew = alpha + alpha.arguments("xzy")
    twisted = alpha + J.twist(alpha, 1, 2)
    return max(skew.max_abs(), twisted.max_abs())


@dataclass(frozen=True, eq=False)
class WTensor:
    alpha: Tensor3
    J: AlmostComplexJ

    def __post_init__(self):
        defect = w_membership_defect(self.alpha, self.J)
        if not self.scalars.is_zero(defect):
            raise NotInWError(f"tensor is not in W (defect {self.scalars.format(defect)})")

    @classmethod
    def of(cls, alpha: Tensor3) -> "WTensor":
        return cls(alpha, AlmostComplexJ.adapted(alpha.scalars))

    @classmethod
    def from_nabla_omega(cls, nabla: NablaOmega) -> "WTensor":
        return cls.of(nabla.values)

    @property
    def scalars(self) -> ScalarField:
        return self.alpha.scalars

    def _wrap(self, alpha: Tensor3) -> "WTensor":
        return WTensor(alpha, self.J)

    def __add__(self, other: "WTensor") -> "WTensor":
        return self._wrap(self.alpha + other.alpha)

    def __sub__(self, other: "WTensor") -> "WTensor":
        return self._wrap(self.alpha - other.alpha)

    def is_zero(self) -> bool:
        return self.alpha.is_zero()


def bar_vector(alpha: WTensor) -> np.ndarray:
    """Components bar(alpha)(e_k) = sum_i alpha(e_i, e_i, e_k)"""
    entries = alpha.alpha.entries
    return np.array([alpha.scalars.total(entries[i, i, k] for i in range(4)) for k in range(4)],
                    dtype=alpha.scalars.dtype)


def bar(alpha: WTensor, z: Vec4) -> Scalar:
    scalars = _same_field(alpha, z)
    return scalars.total(b * zk for b, zk in zip(bar_vector(alpha), z))


def w_inner(alpha: WTensor, beta: WTensor) -> Scalar:
    """<alpha, beta> = sum over i, j, k of alpha_ijk beta_ijk"""
    scalars = _same_field(alpha, beta)
    return scalars.total((alpha.alpha.entries * beta.alpha.entries).flat)


def project_12_34(alpha: WTensor) -> tuple[WTensor, WTensor]:
    """alpha12 = (alpha - alpha(Jx,Jy,z)) / 2, alpha34 = (alpha + alpha(Jx,Jy,z)) / 2"""
    twisted = alpha.J.twist(alpha.alpha, 0, 1)
    return (alpha._wrap((alpha.alpha - twisted) / 2),
            alpha._wrap((alpha.alpha + twisted) / 2))


def cyclic_part(alpha: WTensor) -> WTensor:
    """Total antisymmetrization (alpha(x,y,z) + alpha(y,z,x) + alpha(z,x,y)) / 3"""
    a = alpha.alpha
    return alpha._wrap((a + a.arguments("yzx") + a.arguments("zxy")) / 3)


def w4_part(alpha: WTensor) -> WTensor:
    """(g(x,y)b(z) - g(x,z)b(y) - g(x,Jy)b(Jz) + g(x,Jz)b(Jy)) / 2 with b = bar(alpha)"""
    scalars = alpha.scalars
    b = bar_vector(alpha)
    eye = scalars.identity()
    m = alpha.J.matrix
    jb = m.T @ b
    values = (eye[:, :, None] * b[None, None, :]
              - eye[:, None, :] * b[None, :, None]
              - m[:, :, None] * jb[None, None, :]
              + m[:, None, :] * jb[None, :, None]) / 2
    return alpha._wrap(Tensor3(scalars, scalars.array(values, (4, 4, 4))))


@dataclass(frozen=True, eq=False)
class WDecomposition:
    w1: WTensor
    w2: WTensor
    w3: WTensor
    w4: WTensor

    @property
    def components(self) -> tuple[WTensor, ...]:
        return (self.w1, self.w2, self.w3, self.w4)

    @property
    def norms(self) -> tuple[Scalar, ...]:
        return tuple(w_inner(w, w) for w in self.components)

    def reconstruct(self) -> WTensor:
        return self.w1 + self.w2 + self.w3 + self.w4


def project_fine(alpha: WTensor) -> WDecomposition:
    alpha12, alpha34 = project_12_34(alpha)
    w1 = cyclic_part(alpha12)
    w4 = w4_part(alpha34)
    return WDecomposition(w1=w1, w2=alpha12 - w1, w3=alpha34 - w4, w4=w4)


def class_from_decomposition(d: WDecomposition) -> ClassLabel:
    scalars = d.w1.scalars
    almost_kahler = scalars.is_zero(w_inner(d.w4, d.w4))
    integrable = scalars.is_zero(w_inner(d.w2, d.w2))
    if almost_kahler and integrable:
        return ClassLabel.K
    if almost_kahler:
        return ClassLabel.AK
    if integrable:
        return ClassLabel.I
    return ClassLabel.W


def symmetrize_into_w(raw: Tensor3, J: AlmostComplexJ | None = None) -> WTensor:
    """Push an arbitrary table into W: skew the last two slots, then kill the J-even part"""
    J = J or AlmostComplexJ.adapted(raw.scalars)
    skew = (raw - raw.arguments("xzy")) / 2
    return WTensor((skew - J.twist(skew, 1, 2)) / 2, J)


def random_w_tensor(draw: Callable[[], Scalar], scalars: ScalarField = EXACT) -> WTensor:
    raw = Tensor3.from_function(lambda i, j, k: draw(), scalars)
    return symmetrize_into_w(raw)
