"""Numerical check of the heteroclinic connection in subcases 1.2 and 1.3 (b1 > 0).

In subcase 1.2 the saddle P1 sits on the negative z-axis and sends one
unstable separatrix into the third quadrant.  It either ends at the stable
node P2 (configuration a), coincides with the orbit arriving at the chart
origin V1 (configuration b), or lands on the line of singular points at
infinity (configuration c).  Subcase 1.3 is the mirror image with the saddle
P2 on the negative y-axis, the node P1 and the chart origin V2.

Configuration b happens exactly when the line through the saddle parallel to
the other axis is invariant, which is the stratum where the algebraic
connection quantity vanishes.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .classify import EPS_CONN, assemble_global, connection_quantity
from .finite import jacobian
from .params import EPS_PARAM, ParameterPoint, determine_case
from .tables import GLOBAL_INDEX
from .tracing import IntegratorConfig, Tracer, state_from_plane

CONFIGURATIONS = ("a", "b", "c")


class InconclusiveNearBoundary(RuntimeError):
    """Tracing cannot certify a side this close to the connection stratum."""

    def __init__(self, message: str, report: "ConnectionReport"):
        super().__init__(message)
        self.report = report


@dataclass
class ConnectionReport:
    subcase: str
    configuration: str
    portrait: str
    separatrix_end: str
    algebraic_portrait: str
    agrees: bool
    flags: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _saddle(p: ParameterPoint, subcase: str):
    b0, b1, b2, b3, c0 = p
    if subcase == "1.2":
        return "P1", (0 * b0, -c0 / b3), "P2", "V1"
    return "P2", (-b0 / b2, 0 * b0), "P1", "V2"


def third_quadrant_separatrix(p: ParameterPoint, subcase: str, cfg: IntegratorConfig | None = None) -> str:
    """End node of the saddle's unstable separatrix entering the third quadrant."""
    key, loc, node, origin = _saddle(p, subcase)
    (a11, a12), (a21, a22) = ((float(c) for c in row) for row in jacobian(p, *loc))
    if subcase == "1.2":
        vec = (a11 - a22, a21)
    else:
        vec = (a12, a22 - a11)
    if abs(vec[0]) < 1e-14 * math.hypot(*vec) or abs(vec[1]) < 1e-14 * math.hypot(*vec):
        return origin  # the separatrix runs along the invariant line
    n = math.hypot(*vec)
    y, z = (float(c) for c in loc)
    cfg = cfg or IntegratorConfig()
    d = cfg.seed_offset
    vy, vz = vec[0] / n, vec[1] / n
    # pick the side of the eigenvector pointing into y < 0, z < 0
    s = -1.0 if (vy if subcase == "1.2" else vz) > 0 else 1.0
    orb = Tracer(p, cfg).trace(state_from_plane(y + s * d * vy, z + s * d * vz), 1.0, leave=key)
    return orb.end or "?"


def detect_connection_boundary(
    p: ParameterPoint, eps: float = EPS_PARAM, eps_conn: float = EPS_CONN, cfg: IntegratorConfig | None = None
) -> ConnectionReport:
    """Which third-quadrant configuration holds at ``p``, decided by tracing.

    Raises ``InconclusiveNearBoundary`` (carrying the algebraic answer flagged
    low-confidence) when ``p`` is inexact and within ``eps_conn`` of the
    stratum.
    """
    case = determine_case(p, eps)
    if case.subcase not in ("1.2", "1.3") or case.b1_sign <= 0:
        raise ValueError(f"no connection stratum in subcase {case.subcase} with b1 sign {case.b1_sign}")
    row = GLOBAL_INDEX[case.key()]
    algebraic = assemble_global(p, eps, eps_conn)
    key, _, node, origin = _saddle(p, case.subcase)
    q = connection_quantity(p, case)
    if not p.exact and abs(float(q)) <= eps_conn * p.scale**2:
        report = ConnectionReport(case.subcase, "?", algebraic, "?", algebraic, True, ["low_confidence"])
        raise InconclusiveNearBoundary(f"|connection quantity| = {abs(float(q)):.3g} is within {eps_conn:g}", report)
    end = third_quadrant_separatrix(p, case.subcase, cfg)
    if end == node:
        conf = "a"
    elif end == origin:
        conf = "b"
    elif end.startswith("inf@"):
        conf = "c"
    else:
        conf = "?"
    portrait = row.g[CONFIGURATIONS.index(conf)] if conf in CONFIGURATIONS else "?"
    flags = [] if conf != "?" else ["unexpected_endpoint"]
    return ConnectionReport(case.subcase, conf, portrait, end, algebraic, portrait == algebraic, flags)
