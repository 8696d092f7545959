import logging
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given, settings

from algebra_core import EXACT, Tensor3, Vec4, dot
from conftest import random_algebra, vectors
from families import build, params_from_text
from lie_metric import (
    AntisymmetryError,
    DegeneratePlaneError,
    LieAlgebra4,
    W,
    X,
    Y,
    Z,
    bracket,
    curvature_operator,
    derived_series,
    foliation_data,
    is_nilpotent,
    is_solvable,
    jacobi_defect,
    levi_civita,
    lower_central_series,
    normal_form_residuals,
    ricci_tensor,
    scalar_curvature,
    sectional_curvature,
    structure_label,
)


def hyperbolic(lam) -> LieAlgebra4:
    """[W,Z] = λW and nothing else"""
    return LieAlgebra4.from_brackets({(W, Z): (0, 0, 0, lam)})


def g1(lam, r, w1=0, w2=0) -> LieAlgebra4:
    return build("g1", params_from_text("g1", f"lam={lam},r={r},w1={w1},w2={w2}"))


class TestBrackets:
    def test_structure_is_antisymmetric(self):
        L = random_algebra(np.random.default_rng(1))
        for i, j in product(range(4), repeat=2):
            assert L.structure(i, j) == -L.structure(j, i)

    def test_rejects_symmetric_constants(self):
        c = EXACT.zeros((4, 4, 4))
        c[X, Y, Z] = c[Y, X, Z] = Fraction(1)
        with pytest.raises(AntisymmetryError):
            LieAlgebra4(Tensor3(EXACT, c))

    def test_g1_vertical_bracket(self, frame):
        assert bracket(g1(1, 1), frame[W], frame[Z]) == Vec4.of([0, 0, 0, 1])

    def test_g12_derived_coefficient(self, frame):
        L = build("g12", params_from_text("g12", "z3=2,w1=1,w2=3,theta1=0,theta2=0"))
        assert bracket(L, frame[W], frame[Y]) == Vec4.of([0, 0, 6, 0])

    @given(vectors)
    def test_bracket_with_itself_vanishes(self, u):
        L = random_algebra(np.random.default_rng(2))
        assert bracket(L, u, u).is_zero()


class TestJacobi:
    def test_abelian(self):
        assert jacobi_defect(LieAlgebra4.abelian()) == 0

    def test_g1_with_its_theta2(self):
        assert jacobi_defect(g1(1, 2, 3, 0)) == 0

    def test_g1_with_theta2_dropped(self):
        L = g1(1, 2, 3, 0)
        c = L.c.entries.copy()
        c[Y, X, W] = c[X, Y, W] = Fraction(0)
        assert jacobi_defect(LieAlgebra4(Tensor3(EXACT, c))) > 0

    def test_family_instances(self, family_samples):
        for fid, mode, params, L in family_samples:
            assert jacobi_defect(L) == 0, (fid, mode, params.formatted())

    def test_perturbed_g6(self):
        L = build("g6", params_from_text("g6", "z1=1,z2=0,z3=1,r=2,theta1=0,theta2=0"))
        assert jacobi_defect(L) == 0
        c = L.c.entries.copy()
        c[W, Z, W] += 1
        c[Z, W, W] -= 1
        assert jacobi_defect(LieAlgebra4(Tensor3(EXACT, c))) > 0


class TestLeviCivita:
    def test_vertical_anchor(self, frame):
        C = levi_civita(hyperbolic(1))
        assert C.derivative(frame[W], frame[W]) == Vec4.of([0, 0, -1, 0])

    def test_horizontal_anchor(self, frame):
        L = build("g2", params_from_text("g2", "lam=2,alpha=1,beta=0,w1=0,w2=0"))
        assert levi_civita(L).derivative(frame[X], frame[X]) == Vec4.of([0, 0, 1, 0])

    def test_abelian(self):
        assert levi_civita(LieAlgebra4.abelian()).gamma.is_zero()

    def test_torsion_free_and_metric(self, frame, family_samples):
        for _, _, _, L in family_samples[:20]:
            C = levi_civita(L)
            for u, v in product(frame, repeat=2):
                assert C.derivative(u, v) - C.derivative(v, u) == bracket(L, u, v)
                for w in frame:
                    assert dot(C.derivative(u, v), w) + dot(v, C.derivative(u, w)) == 0

    def test_warns_without_jacobi(self, caplog):
        L = g1(1, 2, 3, 0)
        c = L.c.entries.copy()
        c[Y, X, W] = c[X, Y, W] = Fraction(0)
        with caplog.at_level(logging.WARNING, logger="lie_metric"):
            levi_civita(LieAlgebra4(Tensor3(EXACT, c)))
        assert "Jacobi defect" in caplog.text


class TestCurvature:
    @pytest.mark.parametrize("lam", [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)])
    def test_hyperbolic_leaf(self, frame, lam):
        L = hyperbolic(lam)
        assert sectional_curvature(levi_civita(L), L, frame[Z], frame[W]) == -lam ** 2

    def test_curvature_operator_anchor(self, frame):
        L = hyperbolic(2)
        R = curvature_operator(levi_civita(L), L, frame[Z], frame[W], frame[W])
        assert dot(R, frame[Z]) == -4

    def test_abelian_is_flat(self, frame):
        L = LieAlgebra4.abelian()
        C = levi_civita(L)
        for i in range(4):
            for j in range(i + 1, 4):
                assert sectional_curvature(C, L, frame[i], frame[j]) == 0

    @pytest.mark.parametrize("lam,r", [(1, 1), (1, 3), (2, Fraction(1, 2))])
    def test_product_of_hyperbolic_planes(self, frame, lam, r):
        L = g1(lam, r)
        C = levi_civita(L)
        assert sectional_curvature(C, L, frame[X], frame[Y]) == -Fraction(r) ** 2
        assert sectional_curvature(C, L, frame[Z], frame[W]) == -Fraction(lam) ** 2
        assert sectional_curvature(C, L, frame[X], frame[Z]) == 0
        ric = ricci_tensor(C, L)
        assert [ric[i, i] for i in range(4)] == [-Fraction(r) ** 2] * 2 + [-Fraction(lam) ** 2] * 2
        assert scalar_curvature(C, L) == -2 * Fraction(r) ** 2 - 2 * Fraction(lam) ** 2

    def test_degenerate_plane(self, frame):
        L = hyperbolic(1)
        with pytest.raises(DegeneratePlaneError):
            sectional_curvature(levi_civita(L), L, frame[Z], frame[Z] * 2)

    def test_curvature_symmetries(self, frame, family_samples):
        for _, _, _, L in family_samples[:10]:
            C = levi_civita(L)
            for u, v, w, x in product(frame, repeat=4):
                value = dot(curvature_operator(C, L, u, v, w), x)
                assert value == -dot(curvature_operator(C, L, v, u, w), x)
                assert value == -dot(curvature_operator(C, L, u, v, x), w)

    @settings(max_examples=30, deadline=None)
    @given(vectors, vectors)
    def test_plane_invariance(self, u, v):
        assume(dot(u, u) * dot(v, v) - dot(u, v) ** 2 != 0)
        L = build("g7", params_from_text("g7", "z2=1,w1=2,w2=-1,theta1=1,theta2=3"))
        C = levi_civita(L)
        assert sectional_curvature(C, L, u, v) == sectional_curvature(C, L, u * 2, v + u)


class TestFoliation:
    def test_adapted_algebras_are_minimal_and_conformal(self, family_samples):
        for fid, _, _, L in family_samples:
            data = foliation_data(levi_civita(L))
            assert data.minimal and data.conformal, fid

    def test_abelian(self):
        data = foliation_data(levi_civita(LieAlgebra4.abelian()))
        assert data.totally_geodesic and data.riemannian

    def test_product_leaves_are_totally_geodesic(self):
        data = foliation_data(levi_civita(g1(1, 3)))
        assert data.totally_geodesic and data.riemannian

    def test_rotation_is_conformal_not_riemannian(self):
        L = build("g2", params_from_text("g2", "lam=2,alpha=1,beta=0,w1=0,w2=0"))
        data = foliation_data(levi_civita(L))
        assert data.conformal and not data.riemannian
        assert data.conformal_witness == Vec4.of([0, 0, 1, 0])

    def test_minimality_failure(self):
        # [Z,X] = Z with [W,X] = 0 leaves d3 = 0 != -z1
        L = LieAlgebra4.from_brackets({(Z, X): (0, 0, 1, 0)})
        data = foliation_data(levi_civita(L))
        assert not data.minimal
        assert data.trace_bv == Vec4.of([-1, 0, 0, 0])
        texts = [text for text, value in normal_form_residuals(L) if value != 0]
        assert any(text.startswith("minimality") for text in texts)


class TestSeries:
    def test_abelian(self):
        L = LieAlgebra4.abelian()
        assert derived_series(L) == [4, 0]
        assert is_nilpotent(L) and is_solvable(L)

    def test_nilpotent_family(self):
        L = build("g13", params_from_text("g13", "z3=1,z4=2,theta1=1,theta2=-1"))
        assert is_nilpotent(L)
        assert lower_central_series(L)[-1] == 0
        assert structure_label(L) == "nilpotent"

    def test_hyperbolic_is_solvable_not_nilpotent(self):
        L = hyperbolic(1)
        assert structure_label(L) == "solvable"
        assert derived_series(L) == [4, 1, 0]

    def test_rotation_with_twisted_bracket_is_not_solvable(self):
        L = build("g16", params_from_text("g16", "beta=1,w1=0,w2=0,theta1=1,theta2=0"))
        assert derived_series(L) == [4, 3]
        assert structure_label(L) == "not solvable"
