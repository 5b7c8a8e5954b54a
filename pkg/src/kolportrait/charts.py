"""Poincaré compactification of the family in the charts U1, U2 (and V1, V2).

Chart coordinates: in U1/V1 ``u = z/y, v = 1/y``; in U2/V2 ``u = y/z, v = 1/z``.
The same formulas are used for both signs of ``v``: on the closed northern
hemisphere, ``v > 0`` is the U-chart and ``v < 0`` the V-chart.  The degree is
3, so the V-chart fields coincide with the U-chart ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .params import ParameterPoint

DEGREE = 3


class OutOfChart(ValueError):
    """The requested chart does not cover the point."""


class ChartId(str, Enum):
    U1 = "U1"
    U2 = "U2"
    V1 = "V1"
    V2 = "V2"

    @property
    def axis(self) -> int:
        """1 for the y-direction charts, 2 for the z-direction charts."""
        return 1 if self in (ChartId.U1, ChartId.V1) else 2

    @property
    def positive(self) -> bool:
        return self in (ChartId.U1, ChartId.U2)


@dataclass(frozen=True)
class ChartPoint:
    chart: ChartId
    u: float
    v: float


@dataclass(frozen=True)
class DiscPoint:
    x: float
    y: float


def field_U1(p: ParameterPoint, u, v):
    b0, b1, b2, b3, c0 = p
    return (c0 - b0) * u * v * v, -b3 * u * v * v - b0 * v**3 - b1 * u * v - b2 * v * v


def field_U2(p: ParameterPoint, u, v):
    b0, b1, b2, b3, c0 = p
    return (b0 - c0) * u * v * v, -b2 * u * v * v - c0 * v**3 - b1 * u * v - b3 * v * v


def reduced_field_U1(p: ParameterPoint, u, v):
    """``field_U1`` with the common factor ``v`` removed."""
    b0, b1, b2, b3, c0 = p
    return (c0 - b0) * u * v, -b3 * u * v - b0 * v * v - b1 * u - b2 * v


def reduced_field_U2(p: ParameterPoint, u, v):
    b0, b1, b2, b3, c0 = p
    return (b0 - c0) * u * v, -b2 * u * v - c0 * v * v - b1 * u - b3 * v


def chart_field(p: ParameterPoint, chart: ChartId, u, v):
    """Compactified field in any of the four charts (V fields equal U fields, d odd)."""
    return field_U1(p, u, v) if chart.axis == 1 else field_U2(p, u, v)


def reduced_chart_field(p: ParameterPoint, chart: ChartId, u, v):
    return reduced_field_U1(p, u, v) if chart.axis == 1 else reduced_field_U2(p, u, v)


def oriented_reduced_field(p: ParameterPoint, axis: int, u: float, v: float):
    """Reduced field with the flow direction of the original system.

    Removing the factor ``v`` reverses orbits in ``v < 0``; multiplying by
    ``sign(v)`` restores the true orientation everywhere off ``v = 0``.
    """
    du, dv = reduced_field_U1(p, u, v) if axis == 1 else reduced_field_U2(p, u, v)
    if v < 0:
        return -du, -dv
    return du, dv


# -- coordinate maps -------------------------------------------------------


def plane_to_chart(y: float, z: float, axis: int) -> tuple[float, float]:
    if axis == 1:
        if y == 0:
            raise OutOfChart("y = 0 is not covered by U1/V1")
        return z / y, 1.0 / y
    if z == 0:
        raise OutOfChart("z = 0 is not covered by U2/V2")
    return y / z, 1.0 / z


def chart_to_plane(u: float, v: float, axis: int) -> tuple[float, float]:
    if v == 0:
        raise OutOfChart("v = 0 is the line at infinity")
    return (1.0 / v, u / v) if axis == 1 else (u / v, 1.0 / v)


def plane_to_disc(y: float, z: float) -> tuple[float, float]:
    r = math.sqrt(1.0 + y * y + z * z)
    return y / r, z / r


def disc_to_plane(x: float, w: float) -> tuple[float, float]:
    h = 1.0 - x * x - w * w
    if h <= 0:
        raise OutOfChart("boundary point has no finite preimage")
    h = math.sqrt(h)
    return x / h, w / h


def uv_to_disc(u: float, v: float, axis: int, positive: bool = True) -> tuple[float, float]:
    """Chart coordinates to the disc.

    ``positive`` picks the U chart (``v >= 0``) or the V chart (``v <= 0``);
    it only matters on ``v = 0`` where the sign of ``v`` cannot tell.
    """
    r = math.sqrt(1.0 + u * u + v * v)
    s = 1.0 if (v > 0 or (v == 0 and positive)) else -1.0
    a, b = s / r, s * u / r
    return (a, b) if axis == 1 else (b, a)


def chart_to_disc(cp: ChartPoint) -> DiscPoint:
    return DiscPoint(*uv_to_disc(cp.u, cp.v, cp.chart.axis, cp.chart.positive))


def disc_to_chart(dp: DiscPoint, chart: ChartId) -> ChartPoint:
    """Inverse of :func:`chart_to_disc`; V-chart points of the disc have ``v <= 0``."""
    lead, other = (dp.x, dp.y) if chart.axis == 1 else (dp.y, dp.x)
    if (lead <= 0 and chart.positive) or (lead >= 0 and not chart.positive):
        raise OutOfChart(f"{chart.value} does not cover {dp}")
    h = math.sqrt(max(0.0, 1.0 - dp.x * dp.x - dp.y * dp.y))
    return ChartPoint(chart, other / lead, h / lead)


def disc_angle(x: float, w: float) -> float:
    """Polar angle in [0, 2*pi) of a disc point."""
    return math.atan2(w, x) % (2 * math.pi)
