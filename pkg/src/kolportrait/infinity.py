"""Singular points at infinity.

The line at infinity is a continuum of singular points.  Off the chart
origins each of its points is normally hyperbolic and exactly one orbit
meets it from the interior; the chart origins O1 (U1) and O2 (U2), and
their antipodes V1, V2, are semi-hyperbolic or nilpotent and carry the
labelled local portraits ``L1_k`` / ``L2_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .charts import ChartId
from .local import EXIT, FATE_NAMES, LINE, ORIGIN, UNDECIDED, integrate_local
from .params import EPS_PARAM, ParameterPoint, UnclassifiableParameters


class DegenerateDirection(ValueError):
    """``u0 = 0`` is a chart origin, not a generic point of the line at infinity."""


class SectorMismatch(RuntimeError):
    """Numerically observed sectors at a chart origin contradict its label."""

    def __init__(self, message: str, report: "SectorReport | None" = None):
        super().__init__(message)
        self.report = report


# -- the continuum ---------------------------------------------------------


class Direction(str, Enum):
    ARRIVES = "ArrivesFromInterior"
    LEAVES = "LeavesToInterior"


@dataclass(frozen=True)
class TransversalBehavior:
    quadrants: tuple  # ("Q1", "Q3") or ("Q2", "Q4")
    direction: Direction
    eigenvalue: float

    def to_dict(self) -> dict:
        return {
            "quadrants": list(self.quadrants),
            "direction": self.direction.value,
            "eigenvalue": self.eigenvalue,
        }


def transversal_eigenvalue(p: ParameterPoint, u0) -> object:
    """Nonzero eigenvalue of the compactified field at ``(u0, 0)`` (the same in U1 and U2)."""
    return -p.b1 * u0


def classify_infinity_line(p: ParameterPoint, u0, chart: ChartId = ChartId.U1) -> TransversalBehavior:
    """Behaviour of the single orbit meeting the infinite point ``(u0, 0)`` of ``chart``.

    Both charts use ``u`` = ratio of the coordinates, so ``u0 > 0`` always
    lies over the first and third quadrants.
    """
    if u0 == 0:
        raise DegenerateDirection("u0 = 0 is the chart origin")
    ev = transversal_eigenvalue(p, u0)
    quads = ("Q1", "Q3") if u0 > 0 else ("Q2", "Q4")
    direction = Direction.ARRIVES if ev < 0 else Direction.LEAVES
    return TransversalBehavior(quads, direction, float(ev))


# -- labels of the chart origins ---------------------------------------------


class Family(str, Enum):
    SADDLE_NODE = "SaddleNodeSemiHyperbolic"
    NILPOTENT_SADDLE = "NilpotentSaddle"
    NILPOTENT_HYPERBOLIC_ELLIPTIC = "NilpotentHyperbolicElliptic"


class OriginPortraitLabel(str, Enum):
    L1_1 = "L1_1"
    L1_2 = "L1_2"
    L1_3 = "L1_3"
    L1_4 = "L1_4"
    L1_5 = "L1_5"
    L1_6 = "L1_6"
    L1_7 = "L1_7"
    L1_8 = "L1_8"
    L2_1 = "L2_1"
    L2_2 = "L2_2"
    L2_3 = "L2_3"
    L2_4 = "L2_4"
    L2_5 = "L2_5"
    L2_6 = "L2_6"
    L2_7 = "L2_7"
    L2_8 = "L2_8"
    L2_9 = "L2_9"
    L2_10 = "L2_10"

    @property
    def chart(self) -> ChartId:
        return ChartId.U1 if self.value.startswith("L1") else ChartId.U2

    @property
    def number(self) -> int:
        return int(self.value.split("_")[1])

    @property
    def family(self) -> Family:
        return LABEL_FAMILY[self]

    @property
    def equivalence_class(self) -> int:
        return label_class(self)

    @property
    def pretty(self) -> str:
        sup = {"1": "¹", "2": "²"}[self.value[1]]
        sub = "".join("₀₁₂₃₄₅₆₇₈₉"[int(c)] for c in str(self.number))
        return f"L{sup}{sub}"


_L = OriginPortraitLabel
_SN, _NS, _NE = Family.SADDLE_NODE, Family.NILPOTENT_SADDLE, Family.NILPOTENT_HYPERBOLIC_ELLIPTIC

# Which nilpotent labels are saddles follows from the normal form of the
# reduced field: with f(X) = a_3 X^3 along the curve where the nilpotent
# component vanishes, a_3 = (c0 - b0) * b0 at O1 and (b0 - c0) * c0 at O2,
# and a_3 > 0 gives a saddle.  Otherwise the point has one hyperbolic and one
# elliptic sector.
LABEL_FAMILY = {
    **{_L(f"L1_{k}"): _SN for k in range(1, 5)},
    _L.L1_5: _NS,
    _L.L1_6: _NS,
    _L.L1_7: _NE,
    _L.L1_8: _NE,
    **{_L(f"L2_{k}"): _SN for k in range(1, 5)},
    **{_L(f"L2_{k}"): _NE for k in range(5, 9)},
    _L.L2_9: _NS,
    _L.L2_10: _NS,
}


def label_class(label: OriginPortraitLabel) -> int:
    """Local topological equivalence class (1, 2 or 3) within the chart's labels."""
    n = label.number
    if n <= 4:
        return 1
    if label.chart is ChartId.U1:
        return 2 if n <= 6 else 3
    return 2 if n <= 8 else 3


def classify_origin_U1(p: ParameterPoint, eps: float = EPS_PARAM) -> OriginPortraitLabel:
    b1 = p.sgn(p.b1, eps)
    d = p.sgn(p.c0 - p.b0, eps)
    if b1 == 0 or d == 0:
        raise UnclassifiableParameters("O1 needs b1 != 0 and c0 != b0")
    if p.sgn(p.b2, eps):
        table = {(1, 1): _L.L1_1, (1, -1): _L.L1_2, (-1, 1): _L.L1_3, (-1, -1): _L.L1_4}
    else:
        if p.sgn(p.b0, eps) <= 0:
            raise UnclassifiableParameters("b2 = 0 requires b0 > 0 for a classifiable O1")
        table = {(1, 1): _L.L1_5, (1, -1): _L.L1_7, (-1, 1): _L.L1_6, (-1, -1): _L.L1_8}
    return table[(b1, d)]


def classify_origin_U2(p: ParameterPoint, eps: float = EPS_PARAM) -> OriginPortraitLabel:
    b1 = p.sgn(p.b1, eps)
    d = p.sgn(p.b0 - p.c0, eps)
    c = p.sgn(p.c0, eps)
    if b1 == 0 or d == 0:
        raise UnclassifiableParameters("O2 needs b1 != 0 and c0 != b0")
    if p.sgn(p.b3, eps):
        if d > 0:
            return _L.L2_1 if b1 > 0 else _L.L2_3
        if c > 0:
            return _L.L2_2 if b1 > 0 else _L.L2_4
        raise UnclassifiableParameters("b3 != 0 with b0 - c0 < 0 and c0 <= 0 matches no row")
    rows = {
        (1, -1, 1): _L.L2_5,
        (1, 1, -1): _L.L2_6,
        (1, 1, 1): _L.L2_9,
        (-1, -1, 1): _L.L2_7,
        (-1, 1, -1): _L.L2_8,
        (-1, 1, 1): _L.L2_10,
    }
    try:
        return rows[(b1, d, c)]
    except KeyError:
        raise UnclassifiableParameters(
            f"b3 = 0 with signs b1={b1}, b0-c0={d}, c0={c} matches no row"
        ) from None


def classify_origin(p: ParameterPoint, chart: ChartId, eps: float = EPS_PARAM) -> OriginPortraitLabel:
    return classify_origin_U1(p, eps) if chart.axis == 1 else classify_origin_U2(p, eps)


# -- numerical sector check ---------------------------------------------------


def reduced_arrays(p: ParameterPoint, axis: int):
    """Vectorized reduced chart field and its Jacobian for :func:`integrate_local`."""
    b0, b1, b2, b3, c0 = p.as_floats()
    if axis == 1:
        a, m, q, lam = c0 - b0, b3, b0, b2
    else:
        a, m, q, lam = b0 - c0, b2, c0, b3

    def f(u, v):
        return a * u * v, -m * u * v - q * v * v - b1 * u - lam * v

    def jac(u, v):
        return a * v, a * u, -m * v - b1, -m * u - 2 * q * v - lam

    return f, jac


_LETTER = {ORIGIN: "O", EXIT: "X", LINE: "L", UNDECIDED: "?"}


def _runs(codes: list, min_run: int) -> list:
    """Cyclic runs of equal codes starting at the first seed, short runs dropped."""
    runs = []
    for c in codes:
        if runs and runs[-1][0] == c:
            runs[-1][1] += 1
        else:
            runs.append([c, 1])
    kept = [r for r in runs if r[1] >= min_run]
    merged = []
    for c, n in kept:
        if merged and merged[-1][0] == c:
            merged[-1][1] += n
        else:
            merged.append([c, n])
    if len(merged) > 1 and merged[0][0] == merged[-1][0]:
        merged[0][1] += merged.pop()[1]
    return merged


@dataclass
class SectorReport:
    label: OriginPortraitLabel
    r0: float
    pattern: list  # cyclic (backward, forward) fate runs of the true flow, from angle 0
    expected: list
    family: Family | None
    runs: list = field(default_factory=list)  # pattern with ray counts
    reduced_runs: list = field(default_factory=list)
    undecided: int = 0

    @property
    def consistent(self) -> bool:
        return self.pattern == self.expected and self.family is self.label.family

    @property
    def elliptic(self) -> bool:
        return any(code == "OO" for code, _ in self.reduced_runs)

    def to_dict(self) -> dict:
        return {
            "label": self.label.value,
            "r0": self.r0,
            "consistent": self.consistent,
            "family": self.family.value if self.family else None,
            "pattern": self.pattern,
            "expected": self.expected,
            "runs": [[c, n] for c, n in self.runs],
            "reduced_runs": [[c, n] for c, n in self.reduced_runs],
            "undecided_seeds": self.undecided,
        }


def ring_scaling(p: ParameterPoint, axis: int, r0: float = 1e-2):
    """Positive scalings ``(su, sv, quasi)`` of the ring around a chart origin.

    Seeds sit at ``u = su * cos(t)``, ``v = sv * sin(t)``.  At a semi-hyperbolic
    origin ``u`` is stretched by ``lambda/|b1|`` so the strong axis, the center
    direction and the line ``v = 0`` are 45 degrees apart.  At a nilpotent
    origin the ring follows the quasi-homogeneous weights ``u ~ v^2``.  The
    radius shrinks with the higher-order coefficients so the leading part
    dominates on the ring.
    """
    b0, b1, b2, b3, c0 = p.as_floats()
    a, m, q, lam = (c0 - b0, b3, b0, b2) if axis == 1 else (b0 - c0, b2, c0, b3)
    b1 = abs(b1)
    if lam != 0.0:
        stretch = lam / b1
        r = r0 * min(1.0, lam / (abs(m) * stretch + abs(q) + 1e-300))
        return r * stretch, r, False
    r = r0 * min(1.0, b1 / (abs(m) + 1e-300))
    return r * r * abs(q) / b1, r, True


def scaled_local_field(p: ParameterPoint, axis: int, r0: float = 1e-2):
    """Reduced field in ring-scaled coordinates ``(u/su, v/sv)``: ``(g, gjac, su, sv)``."""
    f, jac = reduced_arrays(p, axis)
    su, sv, _ = ring_scaling(p, axis, r0)

    def g(x, y):
        du, dv = f(su * x, sv * y)
        return du / su, dv / sv

    def gjac(x, y):
        a, b, c, d = jac(su * x, sv * y)
        return a, b * sv / su, c * su / sv, d

    return g, gjac, su, sv


def ring_fates(p: ParameterPoint, axis: int, r0: float = 1e-2, n: int = 720, oriented: bool = True):
    """Fates of ``n`` seeds on a small ring about the chart origin.

    Returns two arrays of fate codes (backward, forward).  With ``oriented``
    the true flow direction is used and seeds stop on the line ``v = 0``;
    otherwise the reduced field is followed through ``v = 0``.  Integration
    runs in the ring's scaled coordinates, where the ring is the unit circle.
    """
    g, gjac, _, _ = scaled_local_field(p, axis, r0)
    theta = (np.arange(n) + 0.5) * 2 * np.pi / n
    x, y = np.cos(theta), np.sin(theta)
    out = []
    for direction in (-1.0, 1.0):
        s = direction * np.sign(y) if oriented else direction
        res = integrate_local(g, gjac, x, y, s, r_capture=1e-3, r_exit=4.0, line=oriented, max_iter=20000)
        out.append(res.fate)
    return out[0], out[1]


def _codes(bwd, fwd) -> list:
    return [_LETTER[int(a)] + _LETTER[int(b)] for a, b in zip(bwd, fwd)]


def _family_from_reduced(runs) -> Family | None:
    codes = {c for c, _ in runs}
    if "??" in codes or any("?" in c for c in codes):
        return None
    if "OO" in codes:
        return Family.NILPOTENT_HYPERBOLIC_ELLIPTIC
    if codes & {"XO", "OX"}:
        return Family.SADDLE_NODE
    if codes == {"XX"}:
        return Family.NILPOTENT_SADDLE
    return None


def observe_sectors(p: ParameterPoint, chart: ChartId, r0: float = 1e-2, n: int = 720, min_run: int = 3):
    """Observed true-flow fate runs and reduced-field runs at the origin of ``chart``."""
    bwd, fwd = ring_fates(p, chart.axis, r0, n, oriented=True)
    runs = _runs(_codes(bwd, fwd), min_run)
    rb, rf = ring_fates(p, chart.axis, r0, n, oriented=False)
    reduced = _runs(_codes(rb, rf), min_run)
    undecided = int(np.sum((bwd == UNDECIDED) | (fwd == UNDECIDED)))
    return runs, reduced, undecided


def verify_origin_sectors(
    p: ParameterPoint,
    chart: ChartId,
    label: OriginPortraitLabel,
    r0: float = 1e-2,
    n: int = 720,
    min_run: int = 3,
    r_min: float = 1e-5,
) -> SectorReport:
    """Check the label of a chart origin against a ring of numerically integrated seeds.

    The observed cyclic sequence of (backward, forward) fates of the true flow
    must equal the sequence expected for ``label``, and the reduced field must
    show the label's family (parabolic, saddle or elliptic behaviour).  The
    radius is halved while seeds stay undecided.
    """
    label = OriginPortraitLabel(label)
    chart = ChartId(chart)
    if label.chart.axis != chart.axis:
        raise SectorMismatch(f"{label.value} is not a label of chart {chart.value}")
    expected = EXPECTED_PATTERNS[label]
    while True:
        runs, reduced, undecided = observe_sectors(p, chart, r0, n, min_run)
        if undecided == 0 or r0 / 2 < r_min:
            break
        r0 /= 2
    report = SectorReport(
        label,
        r0,
        [c for c, _ in runs],
        list(expected),
        _family_from_reduced(reduced),
        runs,
        reduced,
        undecided,
    )
    if not report.consistent:
        raise SectorMismatch(
            f"{chart.value} origin: observed {report.pattern} ({report.family}) but "
            f"{label.value} implies {report.expected} ({label.family.value})",
            report,
        )
    return report


# Cyclic (backward fate, forward fate) runs of the true flow on a small circle
# around the chart origin, starting just above the positive u-axis and turning
# counterclockwise, in the ring's scaled coordinates.  O = tends to the origin, X = leaves the neighbourhood,
# L = ends on the line of singular points v = 0.  The semi-hyperbolic rows
# follow from the sector layout of the reduced saddle-node (parabolic side
# where u' = -(a*b1/lambda) u^2 points inward, strong manifold u = 0) with the
# orientation reversed in v < 0; the nilpotent rows were read off the ring
# integration and checked against the family given by the normal form.
EXPECTED_PATTERNS: dict = {
    _L.L1_1: ("XL", "XX", "LX", "OX", "OL"),
    _L.L1_2: ("XL", "XO", "LO", "LX", "XX"),
    _L.L1_3: ("LX", "XX", "XL", "OL", "OX"),
    _L.L1_4: ("LO", "XO", "XL", "XX", "LX"),
    _L.L1_5: ("XL", "XX", "LX", "XX"),
    _L.L1_6: ("LX", "XX", "XL", "XX"),
    _L.L1_7: ("XL", "XO", "LO", "XO"),
    _L.L1_8: ("LO", "XO", "XL", "XO"),
    _L.L2_1: ("XL", "XX", "LX", "OX", "OL"),
    _L.L2_2: ("XL", "XO", "LO", "LX", "XX"),
    _L.L2_3: ("LX", "XX", "XL", "OL", "OX"),
    _L.L2_4: ("LO", "XO", "XL", "XX", "LX"),
    _L.L2_5: ("XL", "XO", "LO", "XO"),
    _L.L2_6: ("OL", "OX", "LX", "OX"),
    _L.L2_7: ("LO", "XO", "XL", "XO"),
    _L.L2_8: ("LX", "OX", "OL", "OX"),
    _L.L2_9: ("XL", "XX", "LX", "XX"),
    _L.L2_10: ("LX", "XX", "XL", "XX"),
}
