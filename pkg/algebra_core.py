"""Scalar fields and the small dense containers shared by every lieclass module.

All tensors live over one ScalarField: either exact rationals (fractions.Fraction
stored in numpy object arrays) or binary64 floats compared within a tolerance.
Mixing the two in one computation raises ScalarModeError.
"""
from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence, Union

import numpy as np
import toml
from dotenv import load_dotenv

Scalar = Union[Fraction, float]

DEFAULT_TOLERANCE = 1e-9
CONFIG_PATH = Path(__file__).with_name("lieclass_config.toml")
TOLERANCE_ENV = "LIECLASS_TOLERANCE"

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_DECIMAL = re.compile(r"^\s*[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\s*$")


class LieClassError(ValueError):
    """Base class for every error raised by lieclass"""


class ScalarModeError(LieClassError):
    """Exact and approximate scalars met in one computation"""


class ScalarParseError(LieClassError):
    """Malformed scalar literal"""


def load_config(path: Path = CONFIG_PATH) -> dict:
    """Read lieclass_config.toml; a missing file means built-in defaults"""
    if not path.exists():
        return {}
    return toml.load(path)


def session_tolerance(override: float | None = None, config: dict | None = None) -> float:
    """CLI flag, then LIECLASS_TOLERANCE, then the config file, then 1e-9"""
    if override is not None:
        return float(override)
    load_dotenv()
    env_value = os.getenv(TOLERANCE_ENV)
    if env_value:
        try:
            return float(env_value)
        except ValueError as e:
            raise ScalarParseError(f"{TOLERANCE_ENV}={env_value!r} is not a number") from e
    if config is None:
        config = load_config()
    return float(config.get("scalars", {}).get("tolerance", DEFAULT_TOLERANCE))


@dataclass(frozen=True)
class ScalarField:
    """The number system of one computation.

    exact=True: Fraction values, equality is equality.
    exact=False: float values, equality means |a - b| <= tolerance.
    """
    exact: bool = True
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def name(self) -> str:
        return "rational" if self.exact else "float"

    @property
    def dtype(self):
        return object if self.exact else float

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.exact else 0.0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.exact else 1.0

    def coerce(self, value) -> Scalar:
        if isinstance(value, np.ndarray) and value.shape == ():
            value = value[()]
        if isinstance(value, bool):
            raise ScalarModeError(f"boolean {value!r} is not a scalar")
        if self.exact:
            if isinstance(value, Fraction):
                return value
            if isinstance(value, (int, np.integer)):
                return Fraction(int(value))
            raise ScalarModeError(
                f"{type(value).__name__} value {value!r} cannot enter an exact computation"
            )
        if isinstance(value, Fraction):
            raise ScalarModeError(f"rational {value} cannot enter a float computation")
        if isinstance(value, (int, float, np.integer, np.floating)):
            return float(value)
        raise ScalarModeError(f"{type(value).__name__} value {value!r} is not a scalar")

    def array(self, values, shape: tuple[int, ...] | None = None) -> np.ndarray:
        raw = np.asarray(values, dtype=object)
        if shape is not None and raw.shape != shape:
            raise ValueError(f"expected shape {shape}, got {raw.shape}")
        out = np.empty(raw.shape, dtype=self.dtype)
        for index, value in np.ndenumerate(raw):
            out[index] = self.coerce(value)
        return out

    def zeros(self, shape: tuple[int, ...]) -> np.ndarray:
        out = np.empty(shape, dtype=self.dtype)
        out.fill(self.zero)
        return out

    def identity(self) -> np.ndarray:
        out = self.zeros((4, 4))
        for i in range(4):
            out[i, i] = self.one
        return out

    def is_zero(self, value: Scalar) -> bool:
        if self.exact:
            return value == 0
        return bool(abs(value) <= self.tolerance)

    def equal(self, a: Scalar, b: Scalar) -> bool:
        return self.is_zero(a - b)

    def max_abs(self, entries: np.ndarray) -> Scalar:
        if entries.size == 0:
            return self.zero
        return self.coerce(max(abs(x) for x in entries.flat))

    def total(self, values: Iterable[Scalar]) -> Scalar:
        return sum(values, self.zero)

    def sqrt(self, value: Scalar) -> Scalar:
        """Square root; exact mode only accepts squares of rationals"""
        if value < 0:
            raise LieClassError(f"square root of negative value {self.format(value)}")
        if not self.exact:
            return math.sqrt(value)
        num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
        if num * num != value.numerator or den * den != value.denominator:
            raise ScalarModeError(f"{value} is not the square of a rational; use float scalars")
        return Fraction(num, den)

    def parse(self, text: str) -> Scalar:
        """Parse "p/q", an integer, or (float mode) a decimal/scientific literal"""
        if not isinstance(text, str):
            raise ScalarParseError(f"scalar literal must be a string, got {text!r}")
        match = _RATIONAL.match(text)
        if match:
            numerator, denominator = match.groups()
            if denominator is not None and int(denominator) == 0:
                raise ScalarParseError(f"zero denominator in {text!r}")
            value = Fraction(int(numerator), int(denominator or 1))
            return value if self.exact else float(value)
        if _DECIMAL.match(text):
            if self.exact:
                raise ScalarParseError(
                    f"decimal literal {text!r} in an exact computation; write it as p/q"
                )
            return float(text)
        raise ScalarParseError(f"malformed scalar literal {text!r}")

    def format(self, value: Scalar) -> str:
        if self.exact:
            return str(self.coerce(value))
        return repr(float(value))


EXACT = ScalarField()


def approx(tolerance: float = DEFAULT_TOLERANCE) -> ScalarField:
    return ScalarField(exact=False, tolerance=tolerance)


def scalar_parse(text: str, scalars: ScalarField = EXACT) -> Scalar:
    return scalars.parse(text)


def scalar_format(value: Scalar, scalars: ScalarField = EXACT) -> str:
    return scalars.format(value)


def _same_field(*items) -> ScalarField:
    fields = {item.scalars for item in items}
    if len(fields) != 1:
        names = ", ".join(sorted(f.name for f in fields))
        raise ScalarModeError(f"mixed scalar modes: {names}")
    return fields.pop()


def _frozen(values: np.ndarray) -> np.ndarray:
    values = values.copy()
    values.flags.writeable = False
    return values


@dataclass(frozen=True, eq=False)
class Vec4:
    """A vector in the frame (X, Y, Z, W)"""
    scalars: ScalarField
    components: np.ndarray

    def __post_init__(self):
        if self.components.shape != (4,):
            raise ValueError(f"Vec4 needs 4 components, got shape {self.components.shape}")
        object.__setattr__(self, "components", _frozen(self.components))

    @classmethod
    def of(cls, values: Sequence, scalars: ScalarField = EXACT) -> "Vec4":
        return cls(scalars, scalars.array(values, (4,)))

    @classmethod
    def basis(cls, index: int, scalars: ScalarField = EXACT) -> "Vec4":
        values = scalars.zeros((4,))
        values[index] = scalars.one
        return cls(scalars, values)

    @classmethod
    def zero(cls, scalars: ScalarField = EXACT) -> "Vec4":
        return cls(scalars, scalars.zeros((4,)))

    def __getitem__(self, index: int) -> Scalar:
        return self.components[index]

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other: "Vec4") -> "Vec4":
        return Vec4(_same_field(self, other), self.components + other.components)

    def __sub__(self, other: "Vec4") -> "Vec4":
        return Vec4(_same_field(self, other), self.components - other.components)

    def __neg__(self) -> "Vec4":
        return Vec4(self.scalars, -self.components)

    def __mul__(self, factor) -> "Vec4":
        return Vec4(self.scalars, self.components * self.scalars.coerce(factor))

    __rmul__ = __mul__

    def __truediv__(self, divisor) -> "Vec4":
        return Vec4(self.scalars, self.components / self.scalars.coerce(divisor))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vec4) or other.scalars != self.scalars:
            return NotImplemented
        return all(self.scalars.equal(a, b) for a, b in zip(self, other))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(self.scalars.is_zero(x) for x in self)

    def max_abs(self) -> Scalar:
        return self.scalars.max_abs(self.components)

    def __repr__(self) -> str:
        return "Vec4(" + ", ".join(self.scalars.format(x) for x in self) + ")"


def dot(u: Vec4, v: Vec4) -> Scalar:
    """g(u, v) for the metric that makes (X, Y, Z, W) orthonormal"""
    scalars = _same_field(u, v)
    return scalars.total(a * b for a, b in zip(u, v))


@dataclass(frozen=True, eq=False)
class Tensor3:
    """A 4x4x4 table; the owner decides what the entries mean"""
    scalars: ScalarField
    entries: np.ndarray

    def __post_init__(self):
        if self.entries.shape != (4, 4, 4):
            raise ValueError(f"Tensor3 needs shape (4, 4, 4), got {self.entries.shape}")
        object.__setattr__(self, "entries", _frozen(self.entries))

    @classmethod
    def zero(cls, scalars: ScalarField = EXACT) -> "Tensor3":
        return cls(scalars, scalars.zeros((4, 4, 4)))

    @classmethod
    def from_function(cls, fn: Callable[[int, int, int], Scalar],
                      scalars: ScalarField = EXACT) -> "Tensor3":
        values = scalars.zeros((4, 4, 4))
        for index in np.ndindex(4, 4, 4):
            values[index] = scalars.coerce(fn(*index))
        return cls(scalars, values)

    @classmethod
    def of(cls, values, scalars: ScalarField = EXACT) -> "Tensor3":
        return cls(scalars, scalars.array(values, (4, 4, 4)))

    def __getitem__(self, index: tuple[int, int, int]) -> Scalar:
        return self.entries[index]

    def __add__(self, other: "Tensor3") -> "Tensor3":
        return Tensor3(_same_field(self, other), self.entries + other.entries)

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        return Tensor3(_same_field(self, other), self.entries - other.entries)

    def __neg__(self) -> "Tensor3":
        return Tensor3(self.scalars, -self.entries)

    def __mul__(self, factor) -> "Tensor3":
        return Tensor3(self.scalars, self.entries * self.scalars.coerce(factor))

    __rmul__ = __mul__

    def __truediv__(self, divisor) -> "Tensor3":
        return Tensor3(self.scalars, self.entries / self.scalars.coerce(divisor))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor3) or other.scalars != self.scalars:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def arguments(self, order: str) -> "Tensor3":
        """Reorder slots: arguments("yzx") is the form (x, y, z) -> T(y, z, x)"""
        if sorted(order) != ["x", "y", "z"]:
            raise ValueError(f"argument order must permute 'xyz', got {order!r}")
        axes = tuple(order.index(name) for name in "xyz")
        return Tensor3(self.scalars, np.transpose(self.entries, axes))

    def evaluate(self, x: Vec4, y: Vec4, z: Vec4) -> Scalar:
        scalars = _same_field(self, x, y, z)
        value = np.tensordot(self.entries, z.components, axes=([2], [0]))
        value = np.tensordot(value, y.components, axes=([1], [0]))
        return scalars.coerce(np.tensordot(value, x.components, axes=([0], [0])))

    def max_abs(self) -> Scalar:
        return self.scalars.max_abs(self.entries)

    def is_zero(self) -> bool:
        return all(self.scalars.is_zero(x) for x in self.entries.flat)


def span_basis(vectors: Iterable[Vec4], scalars: ScalarField = EXACT) -> list[Vec4]:
    """Row-reduced basis of the span (Gaussian elimination, largest pivot first)"""
    rows = [v.components.copy() for v in vectors]
    basis = []
    for column in range(4):
        candidates = [r for r in rows if not scalars.is_zero(r[column])]
        if not candidates:
            continue
        pivot = max(candidates, key=lambda r: abs(r[column]))
        rows = [r for r in rows if r is not pivot]
        pivot = pivot / pivot[column]
        rows = [r - pivot * r[column] for r in rows]
        basis.append(Vec4(scalars, pivot))
    return basis
