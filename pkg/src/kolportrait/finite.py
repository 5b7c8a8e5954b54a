"""Finite singular points P0, P1, P2: location, linearization and kind."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .params import EPS_PARAM, Number, ParameterPoint, determine_case, is_exact, sign


class TableMismatch(RuntimeError):
    """Eigenvalue-derived kind disagrees with the finite classification tables."""


class Kind(str, Enum):
    SADDLE = "saddle"
    STABLE_NODE = "stable_node"
    UNSTABLE_NODE = "unstable_node"
    SADDLE_NODE = "saddle_node"

    @property
    def index(self) -> int:
        return {Kind.SADDLE: -1, Kind.SADDLE_NODE: 0}.get(self, 1)

    @property
    def is_node(self) -> bool:
        return self in (Kind.STABLE_NODE, Kind.UNSTABLE_NODE)


def vector_field(p: ParameterPoint, y, z):
    """The vector field itself."""
    b0, b1, b2, b3, c0 = p
    common = b1 * y * z + b2 * y + b3 * z
    return y * (b0 + common), z * (c0 + common)


def jacobian(p: ParameterPoint, y, z):
    b0, b1, b2, b3, c0 = p
    return (
        (b0 + 2 * b1 * y * z + 2 * b2 * y + b3 * z, b1 * y * y + b3 * y),
        (b1 * z * z + b2 * z, c0 + 2 * b1 * y * z + b2 * y + 2 * b3 * z),
    )


def eigenvalues(m) -> tuple:
    """Closed-form real eigenvalues of a 2x2 matrix, exact when the roots are rational.

    Triangular matrices (the only ones met at singular points of this family)
    return their diagonal directly.
    """
    (a, b), (c, d) = m
    if b == 0 or c == 0:
        return tuple(sorted((a, d)))
    tr, det = a + d, a * d - b * c
    disc = tr * tr - 4 * det
    if disc < 0:
        raise ValueError("complex eigenvalues")
    if is_exact(disc):
        root = _exact_sqrt(Fraction(disc))
        if root is not None:
            return tuple(sorted(((tr - root) / 2, (tr + root) / 2)))
    r = math.sqrt(float(disc))
    return tuple(sorted(((float(tr) - r) / 2, (float(tr) + r) / 2)))


def _exact_sqrt(q: Fraction) -> Optional[Fraction]:
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


@dataclass(frozen=True)
class SingularPointReport:
    id: str
    location: tuple
    kind: Kind
    eigenvalues: tuple
    merged_with: Optional[str] = None
    members: tuple = ()

    @property
    def index(self) -> int:
        return self.kind.index

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "location": [float(c) for c in self.location],
            "kind": self.kind.value,
            "eigenvalues": [float(e) for e in self.eigenvalues],
            "index": self.index,
        }
        if self.merged_with:
            out["merged_with"] = self.merged_with
        return out


def finite_singularities(p: ParameterPoint, eps: float = EPS_PARAM) -> list[tuple[str, tuple]]:
    """Distinct finite singular points as ``(id, (y, z))``; coincidences get ids like ``P0≡P1``."""
    b0, b1, b2, b3, c0 = p
    points = [("P0", (0 * b0, 0 * b0))]
    if p.sgn(b3, eps):
        loc = (0 * b0, -c0 / b3)
        if p.sgn(c0, eps) == 0:
            points[0] = ("P0≡P1", points[0][1])
        else:
            points.append(("P1", loc))
    if p.sgn(b2, eps):
        loc = (-b0 / b2, 0 * b0)
        if p.sgn(b0, eps) == 0:
            points[0] = (points[0][0] + "≡P2", points[0][1])
        else:
            points.append(("P2", loc))
    return points


def kind_from_eigenvalues(ev, eps: float = EPS_PARAM, scale: float = 1.0) -> Kind:
    s1, s2 = (sign(e, eps, scale) for e in ev)
    if s1 == 0 and s2 == 0:
        raise TableMismatch("both eigenvalues vanish at a finite singular point")
    if s1 == 0 or s2 == 0:
        return Kind.SADDLE_NODE
    if s1 * s2 < 0:
        return Kind.SADDLE
    return Kind.STABLE_NODE if s1 < 0 else Kind.UNSTABLE_NODE


_S, _SN, _UN, _SAD = Kind.STABLE_NODE, Kind.SADDLE_NODE, Kind.UNSTABLE_NODE, Kind.SADDLE

# subcase -> kinds of the listed points, in P0, P1, P2 order (merged points first)
FINITE_TABLE = {
    "1.1": {"P0": _SAD, "P1": _UN, "P2": _S},
    "1.2": {"P0": _UN, "P1": _SAD, "P2": _S},
    "1.3": {"P0": _UN, "P1": _S, "P2": _SAD},
    "1.4": {"P0≡P1": _SN, "P2": _S},
    "1.5": {"P0≡P2": _SN, "P1": _S},
    "2.1": {"P0": _SAD, "P1": _UN},
    "2.2": {"P0": _UN, "P1": _SAD},
    "2.3": {"P0": _UN, "P1": _S},
    "2.4": {"P0≡P1": _SN},
    "3.1": {"P0": _SAD, "P2": _S},
    "3.2": {"P0": _UN, "P2": _SAD},
    "3.3": {"P0": _UN, "P2": _S},
    "3.4": {"P0≡P2": _SN},
    "4.1": {"P0": _SAD},
    "4.2": {"P0": _UN},
}


def classify_finite(p: ParameterPoint, eps: float = EPS_PARAM) -> list[SingularPointReport]:
    """Reports for every finite singular point, cross-checked against the tables."""
    case = determine_case(p, eps)
    expected = FINITE_TABLE[case.subcase]
    reports = []
    for pid, loc in finite_singularities(p, eps):
        ev = eigenvalues(jacobian(p, *loc))
        kind = kind_from_eigenvalues(ev, eps, p.scale)
        if pid not in expected:
            raise TableMismatch(f"{pid} not listed for subcase {case.subcase}")
        if expected[pid] != kind:
            raise TableMismatch(
                f"{pid} of subcase {case.subcase}: eigenvalues {ev} give {kind.value}, "
                f"table says {expected[pid].value}"
            )
        members = tuple(pid.split("≡"))
        reports.append(
            SingularPointReport(
                pid, loc, kind, ev, merged_with="≡".join(members[1:]) or None, members=members
            )
        )
    if {r.id for r in reports} != set(expected):
        raise TableMismatch(f"points {[r.id for r in reports]} vs table {sorted(expected)}")
    return reports


def index_sum(reports) -> int:
    return sum(r.index for r in reports)
