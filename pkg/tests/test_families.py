import pytest

from algebra_core import LieClassError, approx
from conftest import achievable_modes
from families import (
    FAMILIES,
    Case,
    ConstraintViolation,
    Mode,
    NoFamilyMatch,
    NotAdapted,
    AdaptedParams,
    SamplingConfig,
    UnachievableMode,
    adapted_params,
    build,
    conditions,
    extract_adapted,
    get_family,
    identify,
    params_from_text,
    sample,
    subfamily,
    validate,
    verify_witness,
)
from gray_hervella import ClassLabel, WTensor, class_from_decomposition, project_fine
from hermitian import is_almost_kahler, is_integrable, nabla_omega
from lie_metric import X, Z, LieAlgebra4, jacobi_defect

CELLS = [(fid, mode) for fid in FAMILIES for mode in achievable_modes(fid)]
NEVER_CELLS = [(fid, mode) for fid, family in FAMILIES.items()
               for mode in (Mode.AK, Mode.I, Mode.K) if family.condition(mode).never]


def route_flags(L, J):
    ap = extract_adapted(L)
    label = class_from_decomposition(project_fine(WTensor.from_nabla_omega(nabla_omega(L, J))))
    return {
        "closed_form": (ap.is_almost_kahler(), ap.is_integrable()),
        "direct": (is_almost_kahler(L, J), is_integrable(L, J)),
        "gray_hervella": (label in (ClassLabel.AK, ClassLabel.K),
                          label in (ClassLabel.I, ClassLabel.K)),
    }


@pytest.mark.parametrize("fid,mode", CELLS, ids=[f"{f}-{m.value}" for f, m in CELLS])
def test_routes_agree_with_table(J, fid, mode):
    for seed in range(100):
        params = sample(fid, seed, mode)
        L = build(fid, params)
        assert jacobi_defect(L) == 0
        verdict = conditions(fid, params)
        expected = (verdict.ak, verdict.i)
        for route, flags in route_flags(L, J).items():
            assert flags == expected, (route, params.formatted())
        assert verdict.k == (verdict.ak and verdict.i)
        if mode is not Mode.GENERIC:
            assert getattr(verdict, mode.value), params.formatted()


class TestRegistry:
    def test_twenty_families(self):
        assert list(FAMILIES) == [f"g{n}" for n in range(1, 21)]

    def test_lookup(self):
        assert get_family(" G7 ").id == "g7"
        with pytest.raises(LieClassError, match="g1..g20"):
            get_family("g21")

    def test_cases_of_the_overlapping_pair(self):
        assert FAMILIES["g8"].case is Case.D
        assert FAMILIES["g14"].case is Case.F

    def test_table_structure(self):
        assert FAMILIES["g13"].structure == "nilpotent"
        assert FAMILIES["g10"].condition(Mode.I).text == "always true"
        assert FAMILIES["g10"].condition(Mode.GENERIC) is None


class TestValidation:
    def test_determinant_constraint(self):
        with pytest.raises(ConstraintViolation, match="αb − aβ ≠ 0"):
            validate("g10", params_from_text("g10", "alpha=1,a=1,beta=1,b=1"))

    def test_case_constraint(self):
        with pytest.raises(ConstraintViolation, match="z₂ ≠ 0"):
            build("g7", params_from_text("g7", "z2=0,w1=1,w2=0,theta1=0,theta2=0"))

    def test_missing_parameter(self):
        with pytest.raises(ConstraintViolation, match="missing"):
            validate("g1", params_from_text("g1", "lam=1,r=1,w1=0"))

    def test_unknown_parameter(self):
        with pytest.raises(ConstraintViolation, match="unknown"):
            validate("g1", params_from_text("g1", "lam=1,r=1,w1=0,w2=0,z9=1"))

    def test_aliases(self):
        assert params_from_text("g2", "λ=1,α=0,β=1,w1=1,w2=1") == \
            params_from_text("g2", "lam=1,alpha=0,beta=1,w1=1,w2=1")

    def test_malformed_item(self):
        with pytest.raises(LieClassError, match="name=value"):
            params_from_text("g1", "lam")


class TestAdaptedForm:
    def test_round_trip(self, family_samples):
        for fid, _, params, L in family_samples:
            assert extract_adapted(L) == adapted_params(fid, params)

    def test_not_adapted(self):
        L = LieAlgebra4.from_brackets({(Z, X): (0, 0, 1, 0)})
        with pytest.raises(NotAdapted) as info:
            extract_adapted(L)
        assert any(v.startswith("minimality") for v in info.value.violations)

    def test_case_of_g5(self):
        ap = adapted_params("g5", params_from_text("g5", "alpha=1,a=0,beta=0,b=4,r=-1"))
        assert ap.case() is Case.C


class TestIdentify:
    def test_finds_own_family(self, family_samples):
        for fid, _, params, _ in family_samples:
            matched = [m for m, _ in identify(adapted_params(fid, params))]
            assert fid in matched

    def test_g11_only(self):
        ap = adapted_params("g11", params_from_text(
            "g11", "z1=1,z2=1,z3=1,w1=1,theta1=0,theta2=0"))
        assert [fid for fid, _ in identify(ap)] == ["g11"]

    def test_no_match(self):
        ap = AdaptedParams.from_mapping({"z3": 1, "w1": 1, "w2": 1})
        with pytest.raises(NoFamilyMatch, match="Case F"):
            identify(ap)

    def test_overlapping_pair_never_both(self):
        for seed in range(30):
            for fid, other in (("g8", "g14"), ("g14", "g8")):
                params = sample(fid, seed)
                matched = [m for m, _ in identify(adapted_params(fid, params))]
                assert fid in matched and other not in matched


class TestConditions:
    def test_g2_almost_kahler_only(self):
        verdict = conditions("g2", params_from_text("g2", "lam=1,alpha=0,beta=1,w1=1,w2=1"))
        assert verdict.as_tuple() == (True, False, False)

    def test_g8_kahler(self):
        verdict = conditions("g8", params_from_text("g8", "z2=0,z4=1,w2=-1,r=1,theta1=0,theta2=0"))
        assert verdict.as_tuple() == (True, True, True)

    def test_g13_never_integrable(self):
        verdict = conditions("g13", params_from_text("g13", "z3=1,z4=2,theta1=0,theta2=0"))
        assert verdict.as_tuple() == (True, False, False)


class TestSubfamily:
    def test_g4_almost_kahler(self):
        params = subfamily("g4", Mode.AK, params_from_text("g4", "lam=1,z2=2,w1=0,w2=3"))
        assert params["w1"] == 2 * params["lam"] ** 2 / params["z2"] == 1
        assert conditions("g4", params).ak

    def test_g5_almost_kahler_keeps_sign_of_r(self):
        params = subfamily("g5", "ak", params_from_text("g5", "alpha=1,a=0,beta=0,b=4,r=-1"))
        assert params["r"] == -4

    def test_g5_almost_kahler_needs_a_square(self):
        with pytest.raises(LieClassError):
            subfamily("g5", "ak", params_from_text("g5", "alpha=1,a=0,beta=0,b=2,r=1"))

    def test_g6_integrable(self):
        params = subfamily("g6", Mode.I, params_from_text(
            "g6", "z1=1,z2=5,z3=1,r=7,theta1=0,theta2=0"))
        assert params["r"] == 2
        assert params["z2"] == 0
        assert conditions("g6", params).i

    def test_generic_is_validation(self):
        params = params_from_text("g1", "lam=1,r=1,w1=1,w2=1")
        assert subfamily("g1", Mode.GENERIC, params) == params

    def test_unachievable(self):
        params = params_from_text("g10", "alpha=1,a=0,beta=0,b=1")
        with pytest.raises(UnachievableMode, match="never"):
            subfamily("g10", Mode.K, params)
        with pytest.raises(UnachievableMode):
            sample("g10", 0, Mode.K)


class TestSampling:
    def test_deterministic(self):
        for fid, mode in CELLS[::7]:
            assert sample(fid, 3, mode) == sample(fid, 3, mode)

    def test_seed_matters(self):
        draws = {tuple(sample("g1", seed).formatted().items()) for seed in range(10)}
        assert len(draws) > 1

    def test_g5_almost_kahler_determinant_is_square(self):
        for seed in range(50):
            p = sample("g5", seed, Mode.AK)
            assert p["r"] ** 2 == 4 * (p["alpha"] * p["b"] - p["a"] * p["beta"])

    def test_float_mode(self):
        s = approx(1e-9)
        params = sample("g1", 0, Mode.K, scalars=s)
        assert all(isinstance(v, float) for v in params.values.values())
        assert conditions("g1", params).k

    def test_config(self):
        config = SamplingConfig.from_config({"sampling": {"max_attempts": 5}})
        assert config == SamplingConfig(max_attempts=5)
        assert SamplingConfig.from_config({}) == SamplingConfig()

    def test_samples_respect_bounds(self):
        config = SamplingConfig(numerator_bound=2, denominator_bound=1)
        params = sample("g14", 0, config=config)
        assert all(abs(v) <= 2 and v.denominator == 1 for v in params.values.values())


class TestWitnesses:
    @pytest.mark.parametrize("fid,mode", NEVER_CELLS,
                             ids=[f"{f}-{m.value}" for f, m in NEVER_CELLS])
    def test_witness_identity(self, fid, mode):
        witness = FAMILIES[fid].condition(mode).witness
        for seed in range(20):
            assert verify_witness(fid, witness, sample(fid, seed))

    @pytest.mark.parametrize("fid", ["g17", "g18", "g20"])
    def test_forced_witnesses(self, fid):
        for witness in FAMILIES[fid].forced:
            for seed in range(20):
                assert verify_witness(fid, witness, sample(fid, seed))

    @pytest.mark.parametrize("fid,mode", NEVER_CELLS,
                             ids=[f"{f}-{m.value}" for f, m in NEVER_CELLS])
    def test_never_cells_are_never_hit(self, fid, mode):
        for seed in range(1000):
            ap = adapted_params(fid, sample(fid, seed))
            flags = {Mode.AK: ap.is_almost_kahler(), Mode.I: ap.is_integrable(),
                     Mode.K: ap.is_kahler()}
            assert not flags[mode]

    def test_witness_on_a_hand_picked_point(self):
        witness = FAMILIES["g13"].i.witness
        params = params_from_text("g13", "z3=2,z4=0,theta1=0,theta2=0")
        assert verify_witness("g13", witness, params)
