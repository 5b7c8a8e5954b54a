"""Parameter points of the cubic Kolmogorov family and their reduction.

The family is

    y' = y (b0 + b1 y z + b2 y + b3 z)
    z' = z (c0 + b1 y z + b2 y + b3 z)

Parameters may be exact rationals (``fractions.Fraction`` / ``int``) or floats.
Every sign decision goes through :func:`sign`, which is exact for rationals and
uses a tolerance for floats.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from numbers import Rational
from typing import Iterator, Union

Number = Union[int, float, Fraction]

EPS_PARAM = 1e-12

PARAM_NAMES = ("b0", "b1", "b2", "b3", "c0")


class NotNormalizable(ValueError):
    """No sign symmetry maps the parameter point into the reduced region."""


class UnclassifiableParameters(ValueError):
    """The parameter point sits on a boundary excluded by the case tables."""


def parse_number(value) -> Number:
    """Accept ints, floats, Fractions and strings such as ``"3/2"`` or ``"-0.5"``."""
    if isinstance(value, bool):
        raise TypeError("booleans are not parameter values")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            return Fraction(text)
        try:
            return Fraction(int(text))
        except ValueError:
            return float(text)
    raise TypeError(f"cannot interpret {value!r} as a parameter value")


def is_exact(x: Number) -> bool:
    return isinstance(x, Rational)


def sign(x: Number, eps: float = EPS_PARAM, scale: float = 1.0) -> int:
    """Sign of ``x``; floats within ``eps * max(1, scale)`` of zero count as zero."""
    if is_exact(x):
        return (x > 0) - (x < 0)
    if abs(x) <= eps * max(1.0, abs(scale)):
        return 0
    return 1 if x > 0 else -1


@dataclass(frozen=True)
class ParameterPoint:
    b0: Number
    b1: Number
    b2: Number
    b3: Number
    c0: Number

    @classmethod
    def of(cls, b0, b1, b2, b3, c0) -> "ParameterPoint":
        return cls(*(parse_number(v) for v in (b0, b1, b2, b3, c0)))

    @classmethod
    def from_dict(cls, data: dict) -> "ParameterPoint":
        missing = [k for k in PARAM_NAMES if k not in data]
        if missing:
            raise KeyError(f"missing parameters: {', '.join(missing)}")
        return cls.of(*(data[k] for k in PARAM_NAMES))

    def to_dict(self) -> dict:
        """JSON encoding: exact values become ``"p/q"`` strings (or ints)."""
        out = {}
        for name, value in zip(PARAM_NAMES, self.values()):
            if is_exact(value):
                value = Fraction(value)
                out[name] = int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
            else:
                out[name] = value
        return out

    def values(self) -> tuple:
        return (self.b0, self.b1, self.b2, self.b3, self.c0)

    def as_floats(self) -> tuple:
        return tuple(float(v) for v in self.values())

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.values())

    @property
    def scale(self) -> float:
        return max(abs(float(v)) for v in self.values())

    def sgn(self, x: Number, eps: float = EPS_PARAM) -> int:
        return sign(x, eps, self.scale)

    def __iter__(self) -> Iterator[Number]:
        return iter(self.values())


@dataclass(frozen=True)
class SymmetryTransform:
    """Sign change (y, z, t) -> (sy*y, sz*z, st*t)."""

    flip_y: int = 1
    flip_z: int = 1
    reverse_time: int = 1

    def apply(self, p: ParameterPoint) -> ParameterPoint:
        sy, sz, st = self.flip_y, self.flip_z, self.reverse_time
        return ParameterPoint(
            st * p.b0, st * sy * sz * p.b1, st * sy * p.b2, st * sz * p.b3, st * p.c0
        )

    def compose(self, other: "SymmetryTransform") -> "SymmetryTransform":
        return SymmetryTransform(
            self.flip_y * other.flip_y,
            self.flip_z * other.flip_z,
            self.reverse_time * other.reverse_time,
        )

    @property
    def is_identity(self) -> bool:
        return (self.flip_y, self.flip_z, self.reverse_time) == (1, 1, 1)

    def to_dict(self) -> dict:
        return {"flip_y": self.flip_y, "flip_z": self.flip_z, "reverse_time": self.reverse_time}


# identity, flip_y, flip_z, flip_y∘flip_z, then the same with time reversed
TRANSFORM_ORDER = tuple(
    SymmetryTransform(sy, sz, st)
    for st in (1, -1)
    for sy, sz in ((1, 1), (-1, 1), (1, -1), (-1, -1))
)


@dataclass(frozen=True)
class CaseId:
    major: int
    minor: int
    b1_sign: int
    c0_minus_b0_sign: int = 0  # only meaningful for case 4.2

    @property
    def subcase(self) -> str:
        return f"{self.major}.{self.minor}"

    def key(self) -> tuple:
        if (self.major, self.minor) == (4, 2):
            return (self.subcase, self.b1_sign, self.c0_minus_b0_sign)
        return (self.subcase, self.b1_sign)


def validate_hypothesis(p: ParameterPoint, eps: float = EPS_PARAM) -> list[str]:
    """Names of the violated conditions of the reduced region; empty means ok."""
    s = p.sgn
    b0, b1, b2, b3, c0 = p
    violated = []
    if s(b1, eps) == 0:
        violated.append("b1 != 0")
    if s(c0 - b0, eps) == 0:
        violated.append("c0 - b0 != 0")
    if s(b0, eps) < 0:
        violated.append("b0 >= 0")
    if s(b2, eps) < 0:
        violated.append("b2 >= 0")
    if s(b3, eps) < 0:
        violated.append("b3 >= 0")
    if s(b3, eps) == 0 and s(c0, eps) == 0:
        violated.append("b3^2 + c0^2 != 0")
    if s(b2, eps) == 0 and s(b0, eps) == 0:
        violated.append("b2^2 + b0^2 != 0")
    if (s(b2, eps) == 0 or s(b3, eps) == 0) and s(b1, eps) < 0:
        violated.append("b2*b3 = 0 => b1 > 0")
    if s(b0, eps) == 0 and s(c0, eps) < 0:
        violated.append("b0 = 0 => c0 > 0")
    return violated


def in_hypothesis(p: ParameterPoint, eps: float = EPS_PARAM) -> bool:
    return not validate_hypothesis(p, eps)


def normalize(p: ParameterPoint, eps: float = EPS_PARAM) -> tuple[ParameterPoint, SymmetryTransform]:
    """Map ``p`` into the reduced region by the first sign symmetry that works."""
    s = p.sgn
    b0, b1, b2, b3, c0 = p
    if s(b1, eps) == 0 or s(c0 - b0, eps) == 0 or (s(b3, eps) == 0 and s(c0, eps) == 0) or (
        s(b2, eps) == 0 and s(b0, eps) == 0
    ):
        raise NotNormalizable(f"{p} has infinitely many finite singular points or a degenerate line")
    for transform in TRANSFORM_ORDER:
        image = transform.apply(p)
        if in_hypothesis(image, eps):
            return image, transform
    raise NotNormalizable(f"no sign symmetry maps {p} into the reduced region")


def normalize_relaxed(p: ParameterPoint, eps: float = EPS_PARAM) -> tuple[ParameterPoint, SymmetryTransform]:
    """Like :func:`normalize` but lands in :func:`in_classifiable_region`.

    The global table lists both signs of ``b1`` for every case, so points with
    ``b2*b3 = 0`` and ``b1 < 0`` are classified as given instead of being
    flipped to ``b1 > 0``.
    """
    normalize(p, eps)  # raises on the unrepairable degeneracies
    for transform in TRANSFORM_ORDER:
        image = transform.apply(p)
        if in_classifiable_region(image, eps):
            return image, transform
    raise NotNormalizable(f"no sign symmetry maps {p} into the classifiable region")


def in_classifiable_region(p: ParameterPoint, eps: float = EPS_PARAM) -> bool:
    """Reduced region without the ``b1 > 0`` refinement (both b1 signs tabulated)."""
    allowed = {"b2*b3 = 0 => b1 > 0"}
    return all(v in allowed for v in validate_hypothesis(p, eps))


def determine_case(p: ParameterPoint, eps: float = EPS_PARAM) -> CaseId:
    if not in_classifiable_region(p, eps):
        raise UnclassifiableParameters(f"{p} violates {validate_hypothesis(p, eps)}")
    s = lambda x: p.sgn(x, eps)  # noqa: E731
    b0, b1, b2, b3, c0 = p
    sb0, sb1, sb2, sb3, sc0 = s(b0), s(b1), s(b2), s(b3), s(c0)
    sd = s(c0 - b0)
    minor = None
    if sb3 and sb2:
        major = 1
        if sb0 > 0 and sc0 < 0:
            minor = 1
        elif sb0 > 0 and sc0 > 0 and sd < 0:
            minor = 2
        elif sb0 > 0 and sc0 > 0 and sd > 0:
            minor = 3
        elif sc0 == 0 and sb0 > 0:
            minor = 4
        elif sb0 == 0 and sc0 > 0:
            minor = 5
    elif sb3 and not sb2:
        major = 2
        if sb0 > 0 and sc0 < 0:
            minor = 1
        elif sb0 > 0 and sc0 > 0 and sd < 0:
            minor = 2
        elif sb0 > 0 and sc0 > 0 and sd > 0:
            minor = 3
        elif sc0 == 0 and sb0 > 0:
            minor = 4
    elif sb2:
        major = 3
        if sb0 > 0 and sc0 < 0:
            minor = 1
        elif sb0 > 0 and sc0 > 0 and sd > 0:
            minor = 2
        elif sb0 > 0 and sc0 > 0 and sd < 0:
            minor = 3
        elif sb0 == 0 and sc0 > 0:
            minor = 4
    else:
        major = 4
        if sb0 > 0 and sc0 < 0:
            minor = 1
        elif sb0 > 0 and sc0 > 0:
            minor = 2
    if minor is None:
        raise UnclassifiableParameters(f"no case row matches {p}")
    return CaseId(major, minor, sb1, sd if (major, minor) == (4, 2) else 0)


def with_params(p: ParameterPoint, **changes) -> ParameterPoint:
    return replace(p, **{k: parse_number(v) for k, v in changes.items()})
