"""The twenty families of 4-dimensional Lie algebras with a minimal conformal
foliation, their class conditions, and the adapted normal form.

Every family is data: a parameter signature, a coefficient template mapping
family parameters to the fourteen adapted coefficients, validity constraints,
and one Condition per class (almost Kahler, integrable, Kahler).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Mapping, Optional, Union

import numpy as np

from algebra_core import EXACT, LieClassError, Scalar, ScalarField, load_config
from lie_metric import W, X, Y, Z, LieAlgebra4, normal_form_residuals

logger = logging.getLogger(__name__)

ADAPTED_FIELDS = ("lam", "alpha", "beta", "a", "b", "r",
                  "z1", "z2", "z3", "z4", "w1", "w2", "theta1", "theta2")

PARAM_ALIASES = {"lambda": "lam", "λ": "lam", "α": "alpha", "β": "beta",
                 "θ1": "theta1", "θ2": "theta2"}


class ConstraintViolation(LieClassError):
    """Family parameters outside the family's validity region"""


class UnachievableMode(LieClassError):
    """A class the family never belongs to"""


class NotAdapted(LieClassError):
    """Bracket table not in the adapted normal form"""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("not in adapted normal form: " + "; ".join(violations))


class NoFamilyMatch(LieClassError):
    """Adapted coefficients outside all twenty families"""


class Case(Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"


CASE_TEXT = {
    Case.A: "λ ≠ 0 and (λ−α)² + β² ≠ 0",
    Case.B: "λ ≠ 0 and (λ−α)² + β² = 0",
    Case.C: "λ = 0, r ≠ 0 and aβ − αb ≠ 0",
    Case.D: "λ = 0, r ≠ 0 and aβ − αb = 0",
    Case.E: "λ = 0, r = 0 and αb − aβ ≠ 0",
    Case.F: "λ = 0, r = 0 and αb − aβ = 0",
}


class Mode(Enum):
    GENERIC = "generic"
    AK = "ak"
    I = "i"  # noqa: E741
    K = "k"


MODES = tuple(Mode)


@dataclass(frozen=True)
class AdaptedParams:
    """The fourteen coefficients of the adapted bracket relations.

    [W,Z] = λW
    [Z,X] = αX + βY + z1 Z + w1 W
    [Z,Y] = -βX + αY + z2 Z + w2 W
    [W,X] = aX + bY + z3 Z - z1 W
    [W,Y] = -bX + aY + z4 Z - z2 W
    [Y,X] = rX + θ1 Z + θ2 W
    """
    scalars: ScalarField
    lam: Scalar
    alpha: Scalar
    beta: Scalar
    a: Scalar
    b: Scalar
    r: Scalar
    z1: Scalar
    z2: Scalar
    z3: Scalar
    z4: Scalar
    w1: Scalar
    w2: Scalar
    theta1: Scalar
    theta2: Scalar

    @classmethod
    def from_mapping(cls, values: Mapping[str, Scalar],
                     scalars: ScalarField = EXACT) -> "AdaptedParams":
        unknown = set(values) - set(ADAPTED_FIELDS)
        if unknown:
            raise LieClassError(f"unknown adapted coefficients: {', '.join(sorted(unknown))}")
        return cls(scalars, **{name: scalars.coerce(values.get(name, scalars.zero))
                               for name in ADAPTED_FIELDS})

    def as_dict(self) -> dict[str, Scalar]:
        return {name: getattr(self, name) for name in ADAPTED_FIELDS}

    def to_algebra(self) -> LieAlgebra4:
        zero = self.scalars.zero
        return LieAlgebra4.from_brackets({
            (W, Z): (zero, zero, zero, self.lam),
            (Z, X): (self.alpha, self.beta, self.z1, self.w1),
            (Z, Y): (-self.beta, self.alpha, self.z2, self.w2),
            (W, X): (self.a, self.b, self.z3, -self.z1),
            (W, Y): (-self.b, self.a, self.z4, -self.z2),
            (Y, X): (self.r, zero, self.theta1, self.theta2),
        }, self.scalars)

    def case(self) -> Case:
        s = self.scalars
        if not s.is_zero(self.lam):
            if s.is_zero((self.lam - self.alpha) ** 2 + self.beta ** 2):
                return Case.B
            return Case.A
        det = self.alpha * self.b - self.a * self.beta
        if not s.is_zero(self.r):
            return Case.D if s.is_zero(det) else Case.C
        return Case.F if s.is_zero(det) else Case.E

    def d_omega_components(self) -> tuple[Scalar, ...]:
        """dω on (X,Y,Z), (X,Y,W), (X,Z,W), (Y,Z,W)"""
        zero = self.scalars.zero
        return (-self.theta2 - 2 * self.alpha, self.theta1 - 2 * self.a, zero, zero)

    def nijenhuis_components(self) -> tuple[Scalar, Scalar]:
        """Z and W coefficients of N_J(Z, X)"""
        return (2 * self.z1 - self.z4 - self.w2, 2 * self.z2 + self.z3 + self.w1)

    def nabla_omega_components(self) -> dict[tuple[int, int, int], Scalar]:
        k3, k4 = self.nijenhuis_components()
        return {
            (Y, X, Z): self.theta2 / 2 + self.alpha,
            (X, Y, W): self.theta1 / 2 - self.a,
            (Z, X, W): -k3 / 2,
            (Z, Y, W): -k4 / 2,
        }

    def is_almost_kahler(self) -> bool:
        return all(self.scalars.is_zero(v) for v in self.d_omega_components())

    def is_integrable(self) -> bool:
        return all(self.scalars.is_zero(v) for v in self.nijenhuis_components())

    def is_kahler(self) -> bool:
        return self.is_almost_kahler() and self.is_integrable()


def extract_adapted(L: LieAlgebra4) -> AdaptedParams:
    violations = [text for text, value in normal_form_residuals(L)
                  if not L.scalars.is_zero(value)]
    if violations:
        raise NotAdapted(violations)
    c = L.c.entries
    return AdaptedParams(
        L.scalars,
        lam=c[W, Z, W],
        alpha=c[Z, X, X], beta=c[Z, X, Y],
        a=c[W, X, X], b=c[W, X, Y],
        r=c[Y, X, X],
        z1=c[Z, X, Z], z2=c[Z, Y, Z], z3=c[W, X, Z], z4=c[W, Y, Z],
        w1=c[Z, X, W], w2=c[Z, Y, W],
        theta1=c[Y, X, Z], theta2=c[Y, X, W],
    )


@dataclass(frozen=True)
class FamilyParams:
    family: str
    values: Mapping[str, Scalar]
    scalars: ScalarField = EXACT

    def __post_init__(self):
        object.__setattr__(self, "values", MappingProxyType(
            {name: self.scalars.coerce(value) for name, value in self.values.items()}))

    def __getitem__(self, name: str) -> Scalar:
        return self.values[name]

    def replace(self, **changes: Scalar) -> "FamilyParams":
        return FamilyParams(self.family, {**self.values, **changes}, self.scalars)

    def formatted(self) -> dict[str, str]:
        return {name: self.scalars.format(value) for name, value in self.values.items()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, FamilyParams):
            return NotImplemented
        return (self.family == other.family and self.scalars == other.scalars
                and dict(self.values) == dict(other.values))

    __hash__ = None


@dataclass(frozen=True)
class Verdict:
    ak: bool
    i: bool
    k: bool

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return (self.ak, self.i, self.k)


@dataclass(frozen=True)
class Constraint:
    text: str
    check: Callable[[dict, ScalarField], bool]


def nonzero(name: str, text: Optional[str] = None) -> Constraint:
    return Constraint(text or f"{name} ≠ 0", lambda p, s: not s.is_zero(p[name]))


def nonzero_expr(text: str, expr: Callable[[dict], Scalar]) -> Constraint:
    return Constraint(text, lambda p, s: not s.is_zero(expr(p)))


def _unchanged(p: dict) -> dict:
    return p


@dataclass(frozen=True)
class Witness:
    """Why a condition has no solution.

    reduce() moves parameters onto the part of the condition that can be met;
    the remaining residual (read off the adapted coefficients) then equals
    factor * sum_of_squares, both nonzero under the family constraints.
    """
    text: str
    residual: Callable[["AdaptedParams"], Scalar]
    factor: Callable[[dict, ScalarField], Scalar]
    sum_of_squares: Callable[[dict], Scalar]
    reduce: Callable[[dict], dict] = _unchanged
    prepare: Callable[[dict], dict] = _unchanged


@dataclass(frozen=True)
class Condition:
    """One cell of the condition table"""
    text: str
    residuals: Optional[Callable[[dict], tuple]] = None
    solve: Optional[Callable[[dict, ScalarField], dict]] = None
    witness: Optional[Witness] = None

    @property
    def never(self) -> bool:
        return self.residuals is None

    def holds(self, p: Mapping[str, Scalar], scalars: ScalarField) -> bool:
        if self.never:
            return False
        return all(scalars.is_zero(value) for value in self.residuals(dict(p)))


def _always() -> Condition:
    return Condition("always true", residuals=lambda p: ())


def _never(witness: Witness) -> Condition:
    return Condition("never true", witness=witness)


def _both(text: str, ak: Condition, i: Condition) -> Condition:
    def solve(p, s):
        p = ak.solve(p, s) if ak.solve else p
        return i.solve(p, s) if i.solve else p

    return Condition(text, residuals=lambda p: ak.residuals(p) + i.residuals(p), solve=solve)


def _set(**fixed: Callable[[dict], Scalar]) -> Callable[[dict, ScalarField], dict]:
    """Solve a condition by assigning the listed parameters in order"""
    def solve(p, s):
        p = dict(p)
        for name, expr in fixed.items():
            p[name] = s.coerce(expr(p))
        return p

    return solve


def _zero(p: dict) -> int:
    return 0


def _theta_zero() -> Condition:
    return Condition("θ₁ = θ₂ = 0", residuals=lambda p: (p["theta1"], p["theta2"]),
                     solve=_set(theta1=_zero, theta2=_zero))


def _w_zero() -> Condition:
    return Condition("w₁ = w₂ = 0", residuals=lambda p: (p["w1"], p["w2"]),
                     solve=_set(w1=_zero, w2=_zero))


def _ensure_nonzero(name: str) -> Callable[[dict], dict]:
    def prepare(p):
        return p if p[name] != 0 else {**p, name: p[name] + 1}

    return prepare


@dataclass(frozen=True)
class Family:
    id: str
    case: Case
    params: tuple[str, ...]
    template: Callable[[dict], dict]
    constraints: tuple[Constraint, ...]
    ak: Condition
    i: Condition
    k: Condition
    structure: str = "solvable"
    kahler_note: str = ""
    forced: tuple[Witness, ...] = ()
    prepare: Mapping[Mode, Callable[[dict, Callable[[], Scalar]], dict]] = field(
        default_factory=dict)

    @property
    def number(self) -> int:
        return int(self.id[1:])

    def condition(self, mode: Mode) -> Optional[Condition]:
        return {Mode.AK: self.ak, Mode.I: self.i, Mode.K: self.k}.get(Mode(mode))


# -- coefficient templates ---------------------------------------------------------------


def _copy(*names: str, **derived: Callable[[dict], Scalar]) -> Callable[[dict], dict]:
    def template(p):
        coeffs = {name: p[name] for name in names}
        coeffs.update({name: expr(p) for name, expr in derived.items()})
        return coeffs

    return template


def _g4_template(p):
    lam, z2, w1 = p["lam"], p["z2"], p["w1"]
    return dict(lam=lam, alpha=lam, z2=z2, w1=w1, w2=p["w2"],
                r=-z2, theta2=-z2 * w1 / lam)


def _g5_template(p):
    alpha, a, beta, b, r = p["alpha"], p["a"], p["beta"], p["b"], p["r"]
    det = a * beta - alpha * b
    return dict(
        alpha=alpha, a=a, beta=beta, b=b, r=r,
        z1=r * (beta * b - alpha * a) / (2 * det),
        w1=r * (alpha ** 2 - beta ** 2) / (2 * det),
        z2=r * (alpha * b + beta * a) / (2 * det),
        w2=-r * alpha * beta / det,
        z3=r * (b ** 2 - a ** 2) / (2 * det),
        z4=r * a * b / det,
        theta1=-a * r ** 2 / (2 * det),
        theta2=alpha * r ** 2 / (2 * det),
    )


def _g6_template(p):
    z1, z2, z3, r = p["z1"], p["z2"], p["z3"], p["r"]
    return dict(z1=z1, z2=z2, z3=z3, r=r, theta1=p["theta1"], theta2=p["theta2"],
                w1=-z1 ** 2 / z3,
                z4=z3 * (r + 2 * z2) / (2 * z1),
                w2=z1 * (r - 2 * z2) / (2 * z3))


def _g17_template(p):
    alpha, a, w1, w2 = p["alpha"], p["a"], p["w1"], p["w2"]
    return dict(alpha=alpha, a=a, w1=w1, w2=w2,
                z1=-a * w1 / alpha, z2=-a * w2 / alpha,
                z3=-a ** 2 * w1 / alpha ** 2, z4=-a ** 2 * w2 / alpha ** 2)


def _g18_template(p):
    beta, b, z3, z4 = p["beta"], p["b"], p["z3"], p["z4"]
    return dict(beta=beta, b=b, z3=z3, z4=z4, theta1=p["theta1"], theta2=p["theta2"],
                z1=beta * z3 / b, z2=beta * z4 / b,
                w1=-beta ** 2 * z3 / b ** 2, w2=-beta ** 2 * z4 / b ** 2)


def _g20_template(p):
    coeffs = _g17_template(p)
    coeffs.update(beta=p["beta"], b=p["beta"] * p["a"] / p["alpha"])
    return coeffs


def _g5_almost_kahler(p, s):
    # r = ±2 sqrt(αb − aβ), branch chosen by the sign of the given r
    root = s.sqrt(p["alpha"] * p["b"] - p["a"] * p["beta"])
    sign = -1 if p["r"] < 0 else 1
    return {**p, "r": s.coerce(sign * 2 * root)}


def _g5_square_determinant(p, draw):
    # b = (t² + aβ)/α makes αb − aβ = t² a rational square
    t = draw(nonzero=True)
    return {**p, "b": (t ** 2 + p["a"] * p["beta"]) / p["alpha"]}


# -- impossibility witnesses -------------------------------------------------------------

_G4_K = Witness(
    text="integrability forces w₁ = −2z₂, w₂ = 0; then θ₂ + 2α = 2(λ² + z₂²)/λ ≠ 0",
    reduce=lambda p: {**p, "w1": -2 * p["z2"], "w2": 0 * p["w2"]},
    residual=lambda ap: ap.theta2 + 2 * ap.alpha,
    factor=lambda p, s: 2 / p["lam"],
    sum_of_squares=lambda p: p["lam"] ** 2 + p["z2"] ** 2,
)

_G5_K = Witness(
    text="integrability forces a = β, b = −α; then r² − 4(αb − aβ) = r² + 4(α² + β²) > 0",
    reduce=lambda p: {**p, "a": p["beta"], "b": -p["alpha"]},
    residual=lambda ap: ((ap.theta2 + 2 * ap.alpha) * ap.alpha
                         - (ap.theta1 - 2 * ap.a) * ap.beta),
    factor=lambda p, s: s.one / 2,
    sum_of_squares=lambda p: p["r"] ** 2 + 4 * (p["alpha"] ** 2 + p["beta"] ** 2),
)

_G10_AK = Witness(
    text="θ₁ = θ₂ = 0 leaves (θ₁ − 2a)² + (θ₂ + 2α)² = 4(α² + a²) > 0 since αb − aβ ≠ 0",
    residual=lambda ap: (ap.theta1 - 2 * ap.a) ** 2 + (ap.theta2 + 2 * ap.alpha) ** 2,
    factor=lambda p, s: 4 * s.one,
    sum_of_squares=lambda p: p["alpha"] ** 2 + p["a"] ** 2,
)

_G11_I = Witness(
    text="w₁ = −2z₂ − z₃ leaves 2z₁ − z₄ − w₂ = 2(z₁² + z₂²)/z₁ ≠ 0",
    reduce=lambda p: {**p, "w1": -2 * p["z2"] - p["z3"]},
    residual=lambda ap: 2 * ap.z1 - ap.z4 - ap.w2,
    factor=lambda p, s: 2 / p["z1"],
    sum_of_squares=lambda p: p["z1"] ** 2 + p["z2"] ** 2,
)

_G13_I = Witness(
    text="2z₂ + z₃ + w₁ = z₃ ≠ 0",
    residual=lambda ap: 2 * ap.z2 + ap.z3 + ap.w1,
    factor=lambda p, s: 1 / p["z3"],
    sum_of_squares=lambda p: p["z3"] ** 2,
)

_ALPHA_AK = Witness(
    text="θ₂ = 0 so θ₂ + 2α = 2α ≠ 0",
    residual=lambda ap: ap.theta2 + 2 * ap.alpha,
    factor=lambda p, s: 2 / p["alpha"],
    sum_of_squares=lambda p: p["alpha"] ** 2,
)

_A_AK = Witness(
    text="θ₁ = 0 so θ₁ − 2a = −2a ≠ 0",
    residual=lambda ap: ap.theta1 - 2 * ap.a,
    factor=lambda p, s: -2 / p["a"],
    sum_of_squares=lambda p: p["a"] ** 2,
)

_G17_I = Witness(
    text="with w₁ ≠ 0, the first equation fixes w₂ and the second leaves −w₁(α² + a²)²/(2aα³)",
    prepare=_ensure_nonzero("w1"),
    reduce=lambda p: {**p, "w2": (p["alpha"] ** 2 - p["a"] ** 2) * p["w1"]
                      / (2 * p["a"] * p["alpha"])},
    residual=lambda ap: 2 * ap.z1 - ap.z4 - ap.w2,
    factor=lambda p, s: -p["w1"] / (2 * p["a"] * p["alpha"] ** 3),
    sum_of_squares=lambda p: (p["alpha"] ** 2 + p["a"] ** 2) ** 2,
)

_G18_I = Witness(
    text="with z₃ ≠ 0, the first equation fixes z₄ and the second leaves z₃(β² + b²)²/(2βb³)",
    prepare=_ensure_nonzero("z3"),
    reduce=lambda p: {**p, "z4": (p["beta"] ** 2 - p["b"] ** 2) * p["z3"]
                      / (2 * p["beta"] * p["b"])},
    residual=lambda ap: 2 * ap.z1 - ap.z4 - ap.w2,
    factor=lambda p, s: p["z3"] / (2 * p["beta"] * p["b"] ** 3),
    sum_of_squares=lambda p: (p["beta"] ** 2 + p["b"] ** 2) ** 2,
)


# -- the registry ------------------------------------------------------------------------

def _register(*families: Family) -> dict[str, Family]:
    return {family.id: family for family in families}


def _g1() -> Family:
    ak = Condition("w₁ = 0", residuals=lambda p: (p["w1"],), solve=_set(w1=_zero))
    i = _w_zero()
    return Family(
        "g1", Case.A, ("lam", "r", "w1", "w2"),
        _copy("lam", "r", "w1", "w2", theta2=lambda p: p["r"] * p["w1"] / p["lam"]),
        (nonzero("lam", "λ ≠ 0"), nonzero("r")),
        ak, i, _both("w₁ = w₂ = 0", ak, i),
        kahler_note="a product H²(λ) × H²(r) of two hyperbolic disks",
    )


def _g2() -> Family:
    ak = Condition("α = 0", residuals=lambda p: (p["alpha"],), solve=_set(alpha=_zero))
    i = _w_zero()
    return Family(
        "g2", Case.A, ("lam", "alpha", "beta", "w1", "w2"),
        _copy("lam", "alpha", "beta", "w1", "w2"),
        (nonzero("lam", "λ ≠ 0"),
         nonzero_expr("(λ−α)² + β² ≠ 0",
                      lambda p: (p["lam"] - p["alpha"]) ** 2 + p["beta"] ** 2)),
        ak, i, _both("α = w₁ = w₂ = 0", ak, i),
        kahler_note="a semidirect product H²(λ) ⋉ ℝ²",
    )


def _g3() -> Family:
    ak = Condition("θ₂ = −2α ≠ 0", residuals=lambda p: (p["theta2"] + 2 * p["alpha"],),
                   solve=_set(theta2=lambda p: -2 * p["alpha"]))
    i = _w_zero()
    return Family(
        "g3", Case.A, ("alpha", "beta", "w1", "w2", "theta2"),
        _copy("alpha", "beta", "w1", "w2", "theta2", lam=lambda p: -2 * p["alpha"]),
        (nonzero("alpha", "λ = −2α ≠ 0"), nonzero("theta2", "θ₂ ≠ 0")),
        ak, i, _both("θ₂ = −2α ≠ 0 and w₁ = w₂ = 0", ak, i),
    )


def _g4() -> Family:
    return Family(
        "g4", Case.B, ("lam", "z2", "w1", "w2"), _g4_template,
        (nonzero("lam", "λ ≠ 0"),),
        ak=Condition("2λ² = z₂w₁",
                     residuals=lambda p: (2 * p["lam"] ** 2 - p["z2"] * p["w1"],),
                     solve=_set(w1=lambda p: 2 * p["lam"] ** 2 / p["z2"])),
        i=Condition("2z₂ + w₁ = 0 and w₂ = 0",
                    residuals=lambda p: (2 * p["z2"] + p["w1"], p["w2"]),
                    solve=_set(w1=lambda p: -2 * p["z2"], w2=_zero)),
        k=_never(_G4_K),
    )


def _g5() -> Family:
    return Family(
        "g5", Case.C, ("alpha", "a", "beta", "b", "r"), _g5_template,
        (nonzero("r"),
         nonzero_expr("aβ − αb ≠ 0", lambda p: p["a"] * p["beta"] - p["alpha"] * p["b"])),
        ak=Condition("r² = 4(αb − aβ)",
                     residuals=lambda p: (p["r"] ** 2
                                          - 4 * (p["alpha"] * p["b"] - p["a"] * p["beta"]),),
                     solve=_g5_almost_kahler),
        i=Condition("a = β and b = −α",
                    residuals=lambda p: (p["a"] - p["beta"], p["b"] + p["alpha"]),
                    solve=_set(a=lambda p: p["beta"], b=lambda p: -p["alpha"])),
        k=_never(_G5_K),
        prepare={Mode.AK: _g5_square_determinant},
    )


def _g6() -> Family:
    ak = _theta_zero()
    i = Condition(
        "r = (z₁² + z₃²)/z₃ and z₂ = (z₁² − z₃²)/(2z₃)",
        residuals=lambda p: (p["r"] - (p["z1"] ** 2 + p["z3"] ** 2) / p["z3"],
                             p["z2"] - (p["z1"] ** 2 - p["z3"] ** 2) / (2 * p["z3"])),
        solve=_set(r=lambda p: (p["z1"] ** 2 + p["z3"] ** 2) / p["z3"],
                   z2=lambda p: (p["z1"] ** 2 - p["z3"] ** 2) / (2 * p["z3"])),
    )
    return Family(
        "g6", Case.D, ("z1", "z2", "z3", "r", "theta1", "theta2"), _g6_template,
        (nonzero("z1", "z₁ ≠ 0"), nonzero("z3", "z₃ ≠ 0 (z₁² = −w₁z₃ ≠ 0)")),
        ak, i, _both("θ₁ = θ₂ = 0 and " + i.text, ak, i),
        kahler_note="a semidirect product H²(r) ⋉ ℝ²",
    )


def _g7() -> Family:
    ak = _theta_zero()
    i = Condition("2z₂ + w₁ = 0 and w₂ = 0",
                  residuals=lambda p: (2 * p["z2"] + p["w1"], p["w2"]),
                  solve=_set(w1=lambda p: -2 * p["z2"], w2=_zero))
    return Family(
        "g7", Case.D, ("z2", "w1", "w2", "theta1", "theta2"),
        _copy("z2", "w1", "w2", "theta1", "theta2", r=lambda p: 2 * p["z2"]),
        (nonzero("w1", "w₁ ≠ 0"), nonzero("z2", "z₂ ≠ 0 (r = 2z₂ ≠ 0 in Case D)")),
        ak, i, _both("θ₁ = θ₂ = 0 and 2z₂ + w₁ = w₂ = 0", ak, i),
        kahler_note="a semidirect product H²(2z₂) ⋉ ℝ²",
    )


def _g8() -> Family:
    ak = _theta_zero()
    i = Condition("2z₂ = z₄ + w₂ = 0", residuals=lambda p: (p["z2"], p["z4"] + p["w2"]),
                  solve=_set(z2=_zero, z4=lambda p: -p["w2"]))
    return Family(
        "g8", Case.D, ("z2", "z4", "w2", "r", "theta1", "theta2"),
        _copy("z2", "z4", "w2", "r", "theta1", "theta2"),
        (nonzero("r", "r ≠ 0 (Case D)"),),
        ak, i, _both("θ₁ = θ₂ = 0 and 2z₂ = z₄ + w₂ = 0", ak, i),
        kahler_note="a semidirect product H²(r) ⋉ ℝ²",
    )


def _g9() -> Family:
    ak = _theta_zero()
    i = Condition("z₃ − r = z₄ = 0", residuals=lambda p: (p["z3"] + 2 * p["z2"], p["z4"]),
                  solve=_set(z3=lambda p: -2 * p["z2"], z4=_zero))
    return Family(
        "g9", Case.D, ("z2", "z3", "z4", "theta1", "theta2"),
        _copy("z2", "z3", "z4", "theta1", "theta2", r=lambda p: -2 * p["z2"]),
        (nonzero("z3", "z₃ ≠ 0"), nonzero("z2", "z₂ ≠ 0 (r = −2z₂ ≠ 0 in Case D)")),
        ak, i, _both("θ₁ = θ₂ = 0 and z₃ − r = z₄ = 0", ak, i),
        kahler_note="a semidirect product H²(2z₂) ⋉ ℝ²",
    )


def _g10() -> Family:
    return Family(
        "g10", Case.E, ("alpha", "a", "beta", "b"), _copy("alpha", "a", "beta", "b"),
        (nonzero_expr("αb − aβ ≠ 0", lambda p: p["alpha"] * p["b"] - p["a"] * p["beta"]),),
        ak=_never(_G10_AK), i=_always(), k=_never(_G10_AK),
    )


def _g11() -> Family:
    return Family(
        "g11", Case.F, ("z1", "z2", "z3", "w1", "theta1", "theta2"),
        _copy("z1", "z2", "z3", "w1", "theta1", "theta2",
              z4=lambda p: p["z2"] * p["z3"] / p["z1"],
              w2=lambda p: p["z2"] * p["w1"] / p["z1"]),
        (nonzero("z1", "z₁ ≠ 0"),),
        ak=_theta_zero(), i=_never(_G11_I), k=_never(_G11_I),
    )


def _g12() -> Family:
    ak = _theta_zero()
    i = Condition("z₃ = −w₁ ≠ 0", residuals=lambda p: (p["z3"] + p["w1"],),
                  solve=_set(z3=lambda p: -p["w1"]))
    return Family(
        "g12", Case.F, ("z3", "w1", "w2", "theta1", "theta2"),
        _copy("z3", "w1", "w2", "theta1", "theta2",
              z4=lambda p: p["z3"] * p["w2"] / p["w1"]),
        (nonzero("w1", "w₁ ≠ 0"),),
        ak, i, _both("θ₁ = θ₂ = 0 and z₃ = −w₁ ≠ 0", ak, i),
        kahler_note="a semidirect product ℝ² ⋉ ℝ²",
    )


def _g13() -> Family:
    return Family(
        "g13", Case.F, ("z3", "z4", "theta1", "theta2"),
        _copy("z3", "z4", "theta1", "theta2"),
        (nonzero("z3", "z₃ ≠ 0"),),
        ak=_theta_zero(), i=_never(_G13_I), k=_never(_G13_I),
        structure="nilpotent",
    )


def _g14() -> Family:
    ak = _theta_zero()
    i = Condition("2z₂ = z₄ + w₂ = 0", residuals=lambda p: (p["z2"], p["z4"] + p["w2"]),
                  solve=_set(z2=_zero, z4=lambda p: -p["w2"]))
    return Family(
        "g14", Case.F, ("z2", "z4", "w2", "theta1", "theta2"),
        _copy("z2", "z4", "w2", "theta1", "theta2"),
        (),
        ak, i, _both("θ₁ = θ₂ = 0 and 2z₂ = z₄ + w₂ = 0", ak, i),
        kahler_note="a semidirect product ℝ² ⋉ ℝ²",
    )


def _g15() -> Family:
    return Family(
        "g15", Case.F, ("alpha", "w1", "w2"), _copy("alpha", "w1", "w2"),
        (nonzero("alpha", "α ≠ 0 (Λ = (α,0,0,0))"),),
        ak=_never(_ALPHA_AK), i=_w_zero(), k=_never(_ALPHA_AK),
    )


def _g16() -> Family:
    ak, i = _theta_zero(), _w_zero()
    return Family(
        "g16", Case.F, ("beta", "w1", "w2", "theta1", "theta2"),
        _copy("beta", "w1", "w2", "theta1", "theta2"),
        (nonzero("beta", "β ≠ 0 (Λ = (0,0,β,0))"),),
        ak, i, _both("θ₁ = θ₂ = 0 and w₁ = w₂ = 0", ak, i),
        structure="not solvable in general",
        kahler_note="a semidirect product ℝ² ⋉ ℝ²",
    )


def _g17() -> Family:
    return Family(
        "g17", Case.F, ("alpha", "a", "w1", "w2"), _g17_template,
        (nonzero("alpha", "α ≠ 0 (Λ = (α,a,0,0))"), nonzero("a", "a ≠ 0 (Λ = (α,a,0,0))")),
        ak=_never(_A_AK), i=_w_zero(), k=_never(_A_AK),
        forced=(_G17_I,),
    )


def _g18() -> Family:
    ak = _theta_zero()
    i = Condition("z₃ = z₄ = 0", residuals=lambda p: (p["z3"], p["z4"]),
                  solve=_set(z3=_zero, z4=_zero))
    return Family(
        "g18", Case.F, ("beta", "b", "z3", "z4", "theta1", "theta2"), _g18_template,
        (nonzero("beta", "β ≠ 0 (Λ = (0,0,β,b))"), nonzero("b", "b ≠ 0 (Λ = (0,0,β,b))")),
        ak, i, _both("θ₁ = θ₂ = 0 and z₃ = z₄ = 0", ak, i),
        structure="not solvable in general",
        kahler_note="a semidirect product ℝ² ⋉ ℝ²",
        forced=(_G18_I,),
    )


def _g19() -> Family:
    return Family(
        "g19", Case.F, ("alpha", "beta", "w1", "w2"), _copy("alpha", "beta", "w1", "w2"),
        (nonzero("alpha", "α ≠ 0 (Λ = (α,0,β,0))"), nonzero("beta", "β ≠ 0 (Λ = (α,0,β,0))")),
        ak=_never(_ALPHA_AK), i=_w_zero(), k=_never(_ALPHA_AK),
    )


def _g20() -> Family:
    return Family(
        "g20", Case.F, ("alpha", "a", "beta", "w1", "w2"), _g20_template,
        (nonzero("alpha", "α ≠ 0"), nonzero("a", "a ≠ 0"), nonzero("beta", "β ≠ 0")),
        ak=_never(_A_AK), i=_w_zero(), k=_never(_A_AK),
        forced=(_G17_I,),
    )


FAMILIES: dict[str, Family] = _register(
    _g1(), _g2(), _g3(), _g4(), _g5(), _g6(), _g7(), _g8(), _g9(), _g10(),
    _g11(), _g12(), _g13(), _g14(), _g15(), _g16(), _g17(), _g18(), _g19(), _g20(),
)

FamilyRef = Union[str, Family]


def get_family(family: FamilyRef) -> Family:
    if isinstance(family, Family):
        return family
    key = str(family).strip().lower()
    if key not in FAMILIES:
        raise LieClassError(f"unknown family {family!r}; expected one of g1..g20")
    return FAMILIES[key]


# -- operations --------------------------------------------------------------------------


def _as_params(family: Family, params, scalars: ScalarField) -> FamilyParams:
    if isinstance(params, FamilyParams):
        return params
    return FamilyParams(family.id, dict(params), scalars)


def validate(family: FamilyRef, params) -> FamilyParams:
    family = get_family(family)
    params = _as_params(family, params, EXACT)
    missing = [name for name in family.params if name not in params.values]
    unknown = [name for name in params.values if name not in family.params]
    if missing or unknown:
        raise ConstraintViolation(
            f"{family.id}{family.params} got missing {missing} and unknown {unknown} parameters"
        )
    for constraint in family.constraints:
        if not constraint.check(dict(params.values), params.scalars):
            raise ConstraintViolation(f"{family.id}: constraint {constraint.text} violated")
    return params


def adapted_params(family: FamilyRef, params) -> AdaptedParams:
    family = get_family(family)
    params = validate(family, params)
    return AdaptedParams.from_mapping(family.template(dict(params.values)), params.scalars)


def build(family: FamilyRef, params) -> LieAlgebra4:
    return adapted_params(family, params).to_algebra()


def conditions(family: FamilyRef, params) -> Verdict:
    family = get_family(family)
    params = validate(family, params)
    values, s = dict(params.values), params.scalars
    return Verdict(ak=family.ak.holds(values, s), i=family.i.holds(values, s),
                   k=family.k.holds(values, s))


def subfamily(family: FamilyRef, mode: Mode, params) -> FamilyParams:
    """Solve the mode's class condition for its dependent parameters"""
    family = get_family(family)
    mode = Mode(mode)
    params = _as_params(family, params, EXACT)
    condition = family.condition(mode)
    if condition is None:
        return validate(family, params)
    if condition.never:
        raise UnachievableMode(
            f"{family.id} is never {mode.value.upper()}: the condition table lists '{condition.text}'"
            f" ({condition.witness.text})"
        )
    values = dict(params.values)
    if condition.solve is not None:
        try:
            values = condition.solve(values, params.scalars)
        except ZeroDivisionError as e:
            raise ConstraintViolation(
                f"{family.id}: '{condition.text}' has no solution for these parameters"
            ) from e
    return validate(family, FamilyParams(family.id, values, params.scalars))


@dataclass
class SamplingConfig:
    numerator_bound: int = 6
    denominator_bound: int = 4
    max_attempts: int = 200

    @classmethod
    def from_config(cls, config: Optional[dict] = None) -> "SamplingConfig":
        section = (load_config() if config is None else config).get("sampling", {})
        return cls(**{f.name: section[f.name] for f in fields(cls) if f.name in section})


class RationalDraw:
    """Small random rationals p/q from a seeded numpy Generator"""

    def __init__(self, rng: np.random.Generator, config: SamplingConfig,
                 scalars: ScalarField = EXACT):
        self.rng = rng
        self.config = config
        self.scalars = scalars

    def __call__(self, nonzero: bool = False) -> Scalar:
        bound = self.config.numerator_bound
        if nonzero:
            numerator = int(self.rng.integers(1, bound + 1)) * int(self.rng.choice([-1, 1]))
        else:
            numerator = int(self.rng.integers(-bound, bound + 1))
        denominator = int(self.rng.integers(1, self.config.denominator_bound + 1))
        return self.scalars.coerce(Fraction(numerator, denominator) if self.scalars.exact
                                   else numerator / denominator)


def sample(family: FamilyRef, seed: int, mode: Mode = Mode.GENERIC,
           scalars: ScalarField = EXACT, config: Optional[SamplingConfig] = None) -> FamilyParams:
    """Deterministic random parameters satisfying the family constraints and the mode"""
    family = get_family(family)
    mode = Mode(mode)
    condition = family.condition(mode)
    if condition is not None and condition.never:
        raise UnachievableMode(
            f"cannot sample {family.id} in mode {mode.value}: the condition table lists '{condition.text}'"
        )
    config = config or SamplingConfig.from_config()
    rng = np.random.default_rng([seed, family.number, MODES.index(mode)])
    draw = RationalDraw(rng, config, scalars)
    for _ in range(config.max_attempts):
        values = {name: draw() for name in family.params}
        try:
            if mode in family.prepare:
                values = family.prepare[mode](values, draw)
            if condition is not None and condition.solve is not None:
                values = condition.solve(values, scalars)
            params = validate(family, FamilyParams(family.id, values, scalars))
            if adapted_params(family, params).case() != family.case:
                continue
        except (ZeroDivisionError, LieClassError):
            continue
        return params
    raise ConstraintViolation(
        f"no valid {family.id} sample in mode {mode.value} after {config.max_attempts} draws"
    )


def verify_witness(family: FamilyRef, witness: Witness, params: FamilyParams) -> bool:
    """Exact check that the witness identity holds at these parameters"""
    family = get_family(family)
    s = params.scalars
    values = witness.reduce(witness.prepare(dict(params.values)))
    reduced = validate(family, FamilyParams(family.id, values, s))
    values = dict(reduced.values)
    residual = witness.residual(adapted_params(family, reduced))
    factor = witness.factor(values, s)
    squares = witness.sum_of_squares(values)
    return (s.equal(residual, factor * squares)
            and not s.is_zero(factor)
            and squares > 0 and not s.is_zero(squares))


def identify(params: AdaptedParams) -> list[tuple[str, FamilyParams]]:
    """All families whose pattern reproduces these adapted coefficients"""
    s = params.scalars
    case = params.case()
    target = params.as_dict()
    matches, misses = [], []
    for family in FAMILIES.values():
        if family.case != case:
            continue
        candidate = FamilyParams(family.id, {name: target[name] for name in family.params}, s)
        try:
            rebuilt = adapted_params(family, candidate).as_dict()
        except (ConstraintViolation, ZeroDivisionError) as e:
            misses.append((None, family.id, str(e)))
            continue
        gaps = {name: abs(rebuilt[name] - target[name]) for name in ADAPTED_FIELDS}
        worst = max(gaps, key=gaps.get)
        if s.is_zero(gaps[worst]):
            matches.append((family.id, candidate))
        else:
            misses.append((gaps[worst], family.id, f"{worst} off by {s.format(gaps[worst])}"))
    if not matches:
        misses.sort(key=lambda miss: (miss[0] is None, miss[0] or 0))
        nearest = "; ".join(f"{fid}: {why}" for _, fid, why in misses) or "none in this case"
        raise NoFamilyMatch(f"no family in Case {case.value} ({CASE_TEXT[case]}); "
                            f"nearest misses: {nearest}")
    logger.debug("identified %s", [fid for fid, _ in matches])
    return matches


def params_from_text(family: FamilyRef, text: str, scalars: ScalarField = EXACT) -> FamilyParams:
    """Parse "alpha=1,beta=0,w1=1/2" into family parameters"""
    family = get_family(family)
    values = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        name, sep, literal = item.partition("=")
        if not sep:
            raise LieClassError(f"parameter {item!r} is not of the form name=value")
        name = PARAM_ALIASES.get(name.strip(), name.strip())
        values[name] = scalars.parse(literal.strip())
    return FamilyParams(family.id, values, scalars)
