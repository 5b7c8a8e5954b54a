"""Orbit tracing on the Poincaré disc.

Orbits are followed in arc length.  Near the origin of the plane the field is
integrated directly; far out, one of the charts ``(u, v) = (z/y, 1/y)`` or
``(y/z, 1/z)`` is used with the common factor ``v`` removed, so orbits that
reach the line of singular points at infinity cross ``v = 0`` in finite arc
length instead of stalling.  Both signs of ``v`` are used, which covers the U
and V charts with one formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .charts import chart_to_plane, plane_to_chart, plane_to_disc, uv_to_disc
from .finite import finite_singularities, vector_field
from .infinity import scaled_local_field
from .integrate import StepperConfig, steps
from .local import EXIT, LINE, ORIGIN, integrate_local_scalar
from .params import ParameterPoint


class TracingBudgetExceeded(RuntimeError):
    """An orbit did not reach a singular point within the arc-length budget."""


@dataclass
class IntegratorConfig:
    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = 0.05
    max_arc_length: float = 400.0
    max_steps: int = 200_000
    handoff: float = 2.0  # |u| threshold for switching between the y- and z-charts
    seed_offset: float = 1e-6
    finite_ball: float = 1e-5
    origin_ball: float = 1e-5
    landing_v: float = 1e-7
    angle_merge: float = 1e-3
    local_radius: float = 1e-2  # ring radius inside which chart-origin approaches go implicit
    max_local_calls: int = 8

    def __post_init__(self):
        if min(self.rtol, self.atol, self.seed_offset) <= 0:
            raise ValueError("tolerances and seed offset must be positive")

    def stepper(self) -> StepperConfig:
        return StepperConfig(rtol=self.rtol, atol=self.atol, max_step=self.max_step)


# Node keys at infinity: chart origins by (axis, sign of v)
ORIGIN_NAMES = {(1, 1): "O1", (1, -1): "V1", (2, 1): "O2", (2, -1): "V2"}
ORIGIN_ANGLES = {"O1": 0.0, "O2": math.pi / 2, "V1": math.pi, "V2": 3 * math.pi / 2}


@dataclass
class State:
    """A point of the disc in the representation the tracer is using."""

    mode: str  # "F" plane coordinates, "C" chart coordinates
    a: float
    b: float
    axis: int = 0  # chart axis in mode "C"
    side: int = 1  # sign of v in mode "C"

    def disc(self) -> tuple[float, float]:
        if self.mode == "F":
            return plane_to_disc(self.a, self.b)
        return uv_to_disc(self.a, self.b, self.axis, self.side > 0)

    def plane(self) -> tuple[float, float]:
        if self.mode == "F":
            return self.a, self.b
        return chart_to_plane(self.a, self.b, self.axis)


def state_from_plane(y: float, z: float) -> State:
    return State("F", y, z)


def state_from_chart(u: float, v: float, axis: int) -> State:
    return State("C", u, v, axis, 1 if v >= 0 else -1)


@dataclass
class Orbit:
    points: list = field(default_factory=list)  # disc coordinates, in time order
    start: Optional[str] = None  # alpha-limit node key
    end: Optional[str] = None  # omega-limit node key
    flags: list = field(default_factory=list)
    label: str = ""
    seed: int = 0  # index of the seed point in ``points``

    def reversed(self) -> "Orbit":
        return Orbit(self.points[::-1], self.end, self.start, list(self.flags), self.label, len(self.points) - 1 - self.seed)


def continuum_key(angle: float, merge: float = 1e-3) -> str:
    """Key of a boundary contact point, quantized so nearby angles share a key."""
    q = round((angle % (2 * math.pi)) / merge) * merge
    return f"inf@{q:.3f}"


def continuum_angle(key: str) -> float:
    return float(key.split("@", 1)[1])


def is_infinite(key: Optional[str]) -> bool:
    return key is not None and (key in ORIGIN_ANGLES or key.startswith("inf@"))


def is_origin_at_infinity(key: Optional[str]) -> bool:
    return key in ORIGIN_ANGLES


class Tracer:
    """Traces orbits of one parameter point."""

    def __init__(self, p: ParameterPoint, cfg: IntegratorConfig | None = None):
        self.p = p
        self.pf = ParameterPoint(*p.as_floats())
        self.cfg = cfg or IntegratorConfig()
        self.finite = [(pid, (float(y), float(z))) for pid, (y, z) in finite_singularities(p)]
        extent = max([abs(y) + abs(z) for _, (y, z) in self.finite] + [1.0])
        self.r_in = 2.0 * extent + 1.0
        self.r_out = 1.5 * self.r_in
        # plane-mode arcs grow with the size of the region the finite points occupy
        self.arc_budget = self.cfg.max_arc_length * max(1.0, self.r_in / 3.0)
        self._ignore: Optional[str] = None
        # finite saddle-nodes: approaches along the center direction are stiff
        from .finite import Kind, classify_finite

        self._sn = []
        try:
            reports = classify_finite(p)
        except Exception:
            reports = []
        for r in reports:
            if r.kind is Kind.SADDLE_NODE:
                loc = tuple(float(c) for c in r.location)
                others = [math.hypot(loc[0] - q[0], loc[1] - q[1]) for k, q in self.finite if k != r.id]
                self._sn.append((r.id, loc, 0.25 * min([1.0] + others)))
        self._local = {axis: scaled_local_field(self.pf, axis, self.cfg.local_radius) for axis in (1, 2)}

    # -- fields (unit speed, true orientation times ``direction``) --------

    def _finite_dir(self, direction: float):
        p = self.pf

        def f(y, z):
            fy, fz = vector_field(p, y, z)
            n = math.hypot(fy, fz)
            if n == 0.0:
                return 0.0, 0.0
            return direction * fy / n, direction * fz / n

        return f

    def _chart_dir(self, axis: int, side: int, direction: float):
        b0, b1, b2, b3, c0 = self.pf
        s = direction * side

        if axis == 1:

            def f(u, v):
                du = (c0 - b0) * u * v
                dv = -b3 * u * v - b0 * v * v - b1 * u - b2 * v
                n = math.hypot(du, dv)
                return (s * du / n, s * dv / n) if n else (0.0, 0.0)

        else:

            def f(u, v):
                du = (b0 - c0) * u * v
                dv = -b2 * u * v - c0 * v * v - b1 * u - b3 * v
                n = math.hypot(du, dv)
                return (s * du / n, s * dv / n) if n else (0.0, 0.0)

        return f

    # -- main loop ---------------------------------------------------------

    def trace(self, start: State, direction: float = 1.0, label: str = "", leave: Optional[str] = None) -> Orbit:
        """Follow the orbit through ``start`` forward (``direction=1``) or backward.

        ``leave`` names a finite point the seed sits next to; hits on it are
        ignored until the orbit has moved well clear of it.
        """
        cfg = self.cfg
        self._ignore = leave
        orbit = Orbit(label=label)
        state = self._rechart(start)
        orbit.points.append(state.disc())
        arc = 0.0
        nsteps = 0
        local_calls = 0
        while True:
            if state.mode == "F":
                f = self._finite_dir(direction)
            else:
                f = self._chart_dir(state.axis, state.side, direction)
            switched = False
            x, w = state.a, state.b
            try:
                for nx, nw, h in steps(f, x, w, cfg.stepper()):
                    arc += h
                    nsteps += 1
                    if state.mode == "F":
                        new = State("F", nx, nw)
                        near = self._near_sn(nx, nw)
                        if near is not None and local_calls < cfg.max_local_calls:
                            local_calls += 1
                            state = self._run_local_finite(orbit, new, direction, *near)
                            switched = state is not None
                            break
                        hit = self._finite_hit(nx, nw)
                        if hit:
                            orbit.points.append(new.disc())
                            orbit.end = hit
                            break
                        if nx * nx + nw * nw > self.r_out**2:
                            state = self._rechart(new)
                            orbit.points.append(state.disc())
                            switched = True
                            break
                    else:
                        if nw * state.side <= cfg.landing_v:
                            u0 = self._landing_u(x, w, nx, nw)
                            end = State("C", u0, 0.0, state.axis, state.side)
                            orbit.points.append(end.disc())
                            if math.hypot(u0, 0.0) < cfg.origin_ball:
                                orbit.end = ORIGIN_NAMES[(state.axis, state.side)]
                            else:
                                orbit.end = continuum_key(_angle(end.disc()), cfg.angle_merge)
                            break
                        new = State("C", nx, nw, state.axis, state.side)
                        g, gjac, su, sv = self._local[state.axis]
                        if local_calls < cfg.max_local_calls and (nx / su) ** 2 + (nw / sv) ** 2 < 1.0:
                            local_calls += 1
                            state = self._run_local(orbit, new, direction)
                            switched = state is not None
                            break
                        if math.hypot(nx, nw) < cfg.origin_ball:
                            orbit.points.append(new.disc())
                            orbit.end = ORIGIN_NAMES[(state.axis, state.side)]
                            break
                        if abs(nx) > cfg.handoff or (1.0 + nx * nx) / (nw * nw) < self.r_in**2:
                            state = self._rechart(new)
                            orbit.points.append(state.disc())
                            switched = True
                            break
                    orbit.points.append(new.disc())
                    x, w = nx, nw
                    if arc > self.arc_budget or nsteps > cfg.max_steps:
                        orbit.flags.append("TracingBudgetExceeded")
                        break
            except (FloatingPointError, ZeroDivisionError, OverflowError):
                orbit.flags.append("integration_failure")
            if not switched:
                break
        if direction < 0:
            orbit = orbit.reversed()
        return orbit

    def _run_local(self, orbit: Orbit, at: State, direction: float) -> Optional[State]:
        """Continue implicitly inside the ring around a chart origin.

        Sets ``orbit.end`` and returns None if the orbit reaches the origin or
        the line at infinity there; otherwise returns the exit state.
        """
        g, gjac, su, sv = self._local[at.axis]
        fate, x, y, path = integrate_local_scalar(
            g, gjac, at.a / su, at.b / sv, direction * at.side, r_capture=1e-3, r_exit=4.0, max_iter=20000
        )
        for x, y in path[1:]:
            orbit.points.append(uv_to_disc(su * x, sv * y, at.axis, at.side > 0))
        u, v = su * x, sv * y
        name = ORIGIN_NAMES[(at.axis, at.side)]
        if fate == ORIGIN or (fate == LINE and abs(u) < self.cfg.origin_ball):
            orbit.end = name
            return None
        if fate == LINE:
            orbit.end = continuum_key(_angle(uv_to_disc(u, 0.0, at.axis, at.side > 0)), self.cfg.angle_merge)
            return None
        if fate == EXIT:
            return State("C", u, v, at.axis, at.side)
        orbit.flags.append("TracingBudgetExceeded")
        return None

    def _near_sn(self, y: float, z: float):
        for key, (py, pz), r in self._sn:
            if key != self._ignore and math.hypot(y - py, z - pz) < r:
                return key, (py, pz), r
        return None

    def _run_local_finite(self, orbit: Orbit, at: State, direction: float, key: str, center: tuple, r: float):
        """Continue implicitly near a finite saddle-node; None once the orbit reaches it."""
        b0, b1, b2, b3, c0 = self.pf

        def f(y, z):
            return vector_field(self.pf, y, z)

        def jac(y, z):
            return (
                b0 + 2 * b1 * y * z + 2 * b2 * y + b3 * z,
                b1 * y * y + b3 * y,
                b1 * z * z + b2 * z,
                c0 + 2 * b1 * y * z + b2 * y + 2 * b3 * z,
            )

        fate, y, z, path = integrate_local_scalar(
            f, jac, at.a, at.b, direction, center=center,
            r_capture=self.cfg.finite_ball, r_exit=1.5 * r, line=False, max_iter=20000,
        )
        for py, pz in path[1:]:
            orbit.points.append(plane_to_disc(py, pz))
        if fate == ORIGIN:
            orbit.end = key
            return None
        if fate == EXIT:
            return State("F", y, z)
        orbit.flags.append("TracingBudgetExceeded")
        return None

    def _finite_hit(self, y: float, z: float) -> Optional[str]:
        r = self.cfg.finite_ball
        for pid, (py, pz) in self.finite:
            d = math.hypot(y - py, z - pz)
            if pid == self._ignore:
                if d > 10 * r:
                    self._ignore = None
                continue
            if d < r:
                return pid
        return None

    @staticmethod
    def _landing_u(u1, v1, u2, v2) -> float:
        if v1 == v2:
            return u2
        t = v1 / (v1 - v2)
        t = min(max(t, 0.0), 1.0)
        return u1 + t * (u2 - u1)

    def _rechart(self, s: State) -> State:
        """Pick the representation appropriate for the location of ``s``."""
        if s.mode == "C":
            u, v = s.a, s.b
            if abs(u) > self.cfg.handoff and u != 0.0:
                # same point in the other chart: u' = 1/u, v' = v/u
                nv = v / u
                return State("C", 1.0 / u, nv, 3 - s.axis, 1 if nv > 0 else -1)
            if (1.0 + u * u) / (v * v) < self.r_in**2:
                y, z = chart_to_plane(u, v, s.axis)
                return State("F", y, z)
            return s
        y, z = s.a, s.b
        if y * y + z * z <= self.r_out**2:
            return s
        axis = 1 if abs(y) >= abs(z) else 2
        u, v = plane_to_chart(y, z, axis)
        return State("C", u, v, axis, 1 if v > 0 else -1)


def _angle(d: tuple[float, float]) -> float:
    return math.atan2(d[1], d[0]) % (2 * math.pi)
