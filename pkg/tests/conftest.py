from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from algebra_core import EXACT, Vec4
from families import ADAPTED_FIELDS, FAMILIES, MODES, AdaptedParams, Mode, build, sample
from hermitian import AlmostComplexJ
from lie_metric import LieAlgebra4

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)
vectors = st.lists(rationals, min_size=4, max_size=4).map(Vec4.of)


def small_fraction(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 5)))


def random_adapted(rng: np.random.Generator) -> AdaptedParams:
    """A general point of the adapted normal form; Jacobi is not imposed"""
    return AdaptedParams.from_mapping({name: small_fraction(rng) for name in ADAPTED_FIELDS})


def random_algebra(rng: np.random.Generator) -> LieAlgebra4:
    """Arbitrary antisymmetric brackets"""
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    return LieAlgebra4.from_brackets(
        {pair: [small_fraction(rng) for _ in range(4)] for pair in pairs}, EXACT)


def achievable_modes(fid: str) -> list[Mode]:
    family = FAMILIES[fid]
    return [mode for mode in MODES
            if family.condition(mode) is None or not family.condition(mode).never]


@pytest.fixture(scope="session")
def frame():
    return [Vec4.basis(i, EXACT) for i in range(4)]


@pytest.fixture(scope="session")
def J():
    return AlmostComplexJ.adapted(EXACT)


@pytest.fixture(scope="session")
def adapted_samples():
    rng = np.random.default_rng(2024)
    return [random_adapted(rng) for _ in range(1000)]


@pytest.fixture(scope="session")
def family_samples():
    """100 Jacobi-valid instances cycling through every family and achievable mode"""
    instances = []
    ids = list(FAMILIES)
    for n in range(100):
        fid = ids[n % len(ids)]
        modes = achievable_modes(fid)
        mode = modes[(n // len(ids)) % len(modes)]
        params = sample(fid, seed=n, mode=mode)
        instances.append((fid, mode, params, build(fid, params)))
    return instances
