"""Global classification by tables: case, local labels, portrait G and class R."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .finite import SingularPointReport, TableMismatch, classify_finite, index_sum
from .infinity import classify_origin_U1, classify_origin_U2
from .params import (
    EPS_PARAM,
    CaseId,
    ParameterPoint,
    SymmetryTransform,
    UnclassifiableParameters,
    determine_case,
    in_classifiable_region,
    normalize_relaxed,
    sign,
)
from .tables import GLOBAL_INDEX, INVARIANTS, classes_table, topo_class

SCHEMA = "kolportrait/1"
EPS_CONN = 1e-6
NEAR_BOUNDARY = "near_connection_boundary"


def connection_quantity(p: ParameterPoint, case: CaseId):
    """The expression whose sign picks among G3/G4/G5 (case 1.2) or G7/G8/G9 (case 1.3).

    Zero exactly on the stratum where the third-quadrant separatrices of the
    saddle and of the infinite point connect.
    """
    if case.subcase == "1.2":
        return p.b2 * p.b3 - p.b1 * p.c0
    if case.subcase == "1.3":
        return p.b2 * p.b3 - p.b1 * p.b0
    raise ValueError(f"no connection stratum in subcase {case.subcase}")


def assemble_global(
    p: ParameterPoint, eps: float = EPS_PARAM, eps_conn: float = EPS_CONN, flags: Optional[list] = None
) -> str:
    """Portrait label G1..G36 of a point of the classifiable region."""
    case = determine_case(p, eps)
    try:
        row = GLOBAL_INDEX[case.key()]
    except KeyError:
        raise UnclassifiableParameters(f"no global-table row for {case.key()}") from None
    if len(row.g) == 1:
        return row.g[0]
    q = connection_quantity(p, case)
    s = sign(q, eps, p.scale)
    if flags is not None and not p.exact and abs(float(q)) <= eps_conn * p.scale**2:
        flags.append(NEAR_BOUNDARY)
    # positive -> first label (separatrix to the finite node), zero -> connection, negative -> third
    return row.g[{1: 0, 0: 1, -1: 2}[s]]


@dataclass
class Classification:
    params: ParameterPoint
    normalized: ParameterPoint
    transform: SymmetryTransform
    case: CaseId
    finite: list
    o1: str
    o2: str
    g: str
    r: str
    coarse_class: int
    invariants: tuple
    flags: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "params": self.params.to_dict(),
            "normalized": self.normalized.to_dict(),
            "transform": self.transform.to_dict(),
            "case": self.case.subcase,
            "b1_sign": self.case.b1_sign,
            "O1": self.o1,
            "O2": self.o2,
            "G": self.g,
            "R": self.r,
            "class": self.coarse_class,
            "invariants": list(self.invariants),
            "finite": [r.to_dict() for r in self.finite],
            "flags": list(self.flags),
        }


def classify(p: ParameterPoint, eps: float = EPS_PARAM, eps_conn: float = EPS_CONN) -> Classification:
    """Full table-driven classification.

    Points outside the classifiable region are first mapped into it by a
    sign symmetry (raising ``NotNormalizable`` for degenerate input).  Raises
    ``TableMismatch`` if the computed local data contradict the global table.
    """
    if in_classifiable_region(p, eps):
        q, t = p, SymmetryTransform()
    else:
        q, t = normalize_relaxed(p, eps)
    case = determine_case(q, eps)
    finite: list[SingularPointReport] = classify_finite(q, eps)
    o1 = classify_origin_U1(q, eps).value
    o2 = classify_origin_U2(q, eps).value
    row = GLOBAL_INDEX[case.key()]
    if (o1, o2) != (row.o1, row.o2):
        raise TableMismatch(
            f"case {case.key()}: local labels ({o1}, {o2}) but the global table lists ({row.o1}, {row.o2})"
        )
    flags: list = []
    if not t.is_identity:
        flags.append("normalized")
    g = assemble_global(q, eps, eps_conn, flags)
    tc = topo_class(g)
    coarse = classes_table(g)
    inv = INVARIANTS[tc.r]
    if (inv[0], inv[1]) != (len(finite), index_sum(finite)):
        raise TableMismatch(f"{g}: finite data ({len(finite)}, {index_sum(finite)}) vs class {tc.r} {inv[:2]}")
    return Classification(p, q, t, case, finite, o1, o2, g, tc.r, coarse, inv, flags)
