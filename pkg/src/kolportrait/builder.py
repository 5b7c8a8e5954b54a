"""Numerical construction of separatrix skeletons.

Three kinds of seeds produce the separatrices:

* the coordinate axes, cut at the finite singular points (both axes are
  invariant, so every axis segment is an orbit);
* the transversal eigendirections of finite saddles off the axes;
* boundaries between families of orbits seen on rays from the origin.

The last item relies on ``d/dt ln|z/y| = c0 - b0``, a nonzero constant: inside
an open quadrant every orbit crosses each ray through the origin at most once,
so a ray is a transversal section.  Along a ray, seeds are grouped by their
(alpha, omega) limits; a change of group brackets a separatrix, which is
located by bisection.  The same monotonicity rules out closed orbits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .charts import plane_to_disc
from .finite import Kind, classify_finite, jacobian
from .infinity import classify_origin_U1, classify_origin_U2, ring_fates, scaled_local_field
from .local import ORIGIN
from .params import EPS_PARAM, ParameterPoint, in_classifiable_region, normalize_relaxed
from .skeleton import Edge, Node, RegionOrbit, SeparatrixSkeleton
from .tracing import (
    ORIGIN_ANGLES,
    IntegratorConfig,
    Orbit,
    Tracer,
    continuum_angle,
    is_origin_at_infinity,
    state_from_plane,
)

QUADRANTS = {"Q1": (1, 1), "Q2": (-1, 1), "Q3": (-1, -1), "Q4": (1, -1)}
# half-axis -> (unit direction in the plane, chart origin at its end)
HALF_AXES = {"+y": ((1, 0), "O1"), "-y": ((-1, 0), "V1"), "+z": ((0, 1), "O2"), "-z": ((0, -1), "V2")}
KIND_NAMES = {
    Kind.SADDLE: "saddle",
    Kind.SADDLE_NODE: "saddle_node",
    Kind.STABLE_NODE: "stable_node",
    Kind.UNSTABLE_NODE: "unstable_node",
}


@dataclass
class BuildConfig:
    rays_per_quadrant: int = 4
    radial_seeds: int = 24
    boundary_decades: int = 12  # extra seeds at disc radius 1 - 10**(-k/2)
    bisection_steps: int = 36
    # A bracket pair "passes" a point if it is within approach_tol of it and
    # approach_ratio times closer than to any other candidate.  Near a
    # semi-hyperbolic point at infinity the bracket closes only logarithmically.
    approach_tol: float = 0.06
    approach_ratio: float = 4.0
    region_orbits: bool = True


def _lump(key: Optional[str]) -> str:
    if key is None:
        return "?"
    return "inf" if key.startswith("inf@") else key


def _join(bwd: Orbit, fwd: Orbit) -> Orbit:
    """Full orbit from a backward and a forward trace sharing their seed."""
    flags = sorted(set(bwd.flags) | set(fwd.flags))
    return Orbit(bwd.points + fwd.points[1:], bwd.start, fwd.end, flags, seed=len(bwd.points) - 1)


class SkeletonBuilder:
    def __init__(self, p: ParameterPoint, cfg: IntegratorConfig | None = None, build: BuildConfig | None = None):
        self.flags: list = []
        if not in_classifiable_region(p):
            p, t = normalize_relaxed(p)
            if not t.is_identity:
                self.flags.append("normalized")
        self.p = p
        self.cfg = cfg or IntegratorConfig()
        self.build = build or BuildConfig()
        self.tracer = Tracer(p, self.cfg)
        self.reports = classify_finite(p)
        self.sk = SeparatrixSkeleton(flags=self.flags)
        self._rings: dict = {}
        self.ring_seeds = 720

    # -- nodes -------------------------------------------------------------

    def _add_nodes(self) -> None:
        for r in self.reports:
            y, z = (float(c) for c in r.location)
            node = Node(r.id, KIND_NAMES[r.kind], plane_to_disc(y, z))
            if r.kind is Kind.SADDLE_NODE:
                node.parabolic_side = self._parabolic_side()
            self.sk.add_node(node)
        labels = {1: classify_origin_U1(self.p).value, 2: classify_origin_U2(self.p).value}
        for name, ang in ORIGIN_ANGLES.items():
            axis = 1 if name.endswith("1") else 2
            self.sk.add_node(Node(name, "origin_at_infinity", (math.cos(ang), math.sin(ang)), labels[axis]))

    def _node_for(self, key: Optional[str]) -> Optional[str]:
        if key is None:
            return None
        if key.startswith("inf@") and key not in self.sk.nodes:
            a = continuum_angle(key)
            self.sk.add_node(Node(key, "boundary_point", (math.cos(a), math.sin(a))))
        return key

    def _parabolic_side(self) -> tuple:
        """(axis index, sign) of the half-plane holding the parabolic sector of the saddle-node at P0.

        Axis index 0 is the y-axis direction, 1 the z-axis direction.  The
        center flow on the center axis is ``k s^2``; the parabolic sector lies
        where it moves away from P0 if the strong direction repels, toward P0
        if it attracts.
        """
        b0, b1, b2, b3, c0 = self.p.as_floats()
        if abs(c0) <= EPS_PARAM:  # center along z, strong eigenvalue b0 along y
            return (1, int(math.copysign(1, b3 * b0)))
        return (0, int(math.copysign(1, b2 * c0)))

    # -- axis segments -----------------------------------------------------

    def _axis_chain(self, half: str) -> list:
        (dy, dz), end = HALF_AXES[half]
        pts = []
        origin_key = None
        for r in self.reports:
            y, z = (float(c) for c in r.location)
            if y == 0.0 and z == 0.0:
                origin_key = r.id
                continue
            t = y * dy + z * dz
            if t > 0 and y * dz == 0.0 and z * dy == 0.0:
                pts.append((t, r.id))
        pts.sort()
        return [(0.0, origin_key)] + pts + [(math.inf, end)]

    def _is_separatrix_ray(self, key: str, half: str, outward: bool) -> bool:
        """Whether the axis ray leaving finite point ``key`` along ``half`` is one of its separatrices."""
        node = self.sk.nodes[key]
        if node.kind == "saddle":
            return True
        if node.kind != "saddle_node":
            return False
        axis, sgn = node.parabolic_side
        (dy, dz), _ = HALF_AXES[half]
        direction = (dy, dz) if outward else (-dy, -dz)
        along = direction[axis]
        # strong rays are always separatrices; on the center axis only the hyperbolic side
        return along == 0 or along != sgn

    def _add_axis_edges(self) -> None:
        for half in HALF_AXES:
            (dy, dz), _ = HALF_AXES[half]
            chain = self._axis_chain(half)
            for (t0, k0), (t1, k1) in zip(chain, chain[1:]):
                t = 0.5 * (t0 + t1) if math.isfinite(t1) else 2 * t0 + 1.0
                seed = state_from_plane(t * dy, t * dz)
                orb = _join(self.tracer.trace(seed, -1.0), self.tracer.trace(seed, 1.0))
                e = self._edge(orb, f"axis {half}")
                if {e.source, e.target} != {k0, k1}:
                    e.flags.append("unexpected_axis_endpoint")
                sep = set()
                for key, outward in ((k0, True), (k1, False)):
                    node = self.sk.nodes.get(key)
                    if node is not None and (node.is_origin or (node.finite and self._is_separatrix_ray(key, half, outward))):
                        sep.add(key)
                e.separatrix_of = frozenset(sep)
                self.sk.edges.append(e)

    def _edge(self, orb: Orbit, origin: str) -> Edge:
        src, dst = self._node_for(orb.start), self._node_for(orb.end)
        flags = list(orb.flags)
        if src is None or dst is None:
            flags.append("TracingBudgetExceeded")
        return Edge(src or "?", dst or "?", orb.points, frozenset(), origin, flags)

    # -- saddle eigendirections off the axes ---------------------------------

    def _add_saddle_edges(self) -> None:
        delta = self.cfg.seed_offset
        for r in self.reports:
            if r.kind is not Kind.SADDLE:
                continue
            y, z = (float(c) for c in r.location)
            if y == 0.0 and z == 0.0:
                continue  # eigendirections along the axes
            (a11, a12), (a21, a22) = ((float(c) for c in row) for row in jacobian(self.p, r.location[0], r.location[1]))
            if y == 0.0:
                lam, vec = a11, (a11 - a22, a21)
            else:
                lam, vec = a22, (a12, a22 - a11)
            n = math.hypot(*vec)
            vy, vz = vec[0] / n, vec[1] / n
            direction = 1.0 if lam > 0 else -1.0
            for s in (1.0, -1.0):
                if abs(vy) < 1e-14 or abs(vz) < 1e-14:
                    orb = self._invariant_line(r.id, (y, z), (s * vy, s * vz), direction)
                else:
                    seed = state_from_plane(y + s * delta * vy, z + s * delta * vz)
                    orb = self.tracer.trace(seed, direction, leave=r.id)
                    if direction > 0:
                        orb.start = r.id
                        orb.points.insert(0, plane_to_disc(y, z))
                    else:
                        orb.end = r.id
                        orb.points.append(plane_to_disc(y, z))
                e = self._edge(orb, f"eigendirection {r.id}")
                sep = {r.id}
                other = e.source if e.target == r.id else e.target
                if is_origin_at_infinity(other):
                    sep.add(other)
                e.separatrix_of = frozenset(sep)
                self.sk.edges.append(e)

    @staticmethod
    def _invariant_line(key: str, at: tuple, d: tuple, direction: float) -> Orbit:
        """Separatrix along an invariant line parallel to an axis.

        On the connection strata the line through the saddle parallel to an
        axis is invariant and free of other singular points, so the separatrix
        runs straight to the chart origin in that direction.  It enters that
        origin along its center direction, where numerical tracing cannot
        settle the limit.
        """
        y, z = at
        ts = [0.0] + [10 ** (k / 4) for k in range(-24, 57)]
        pts = [plane_to_disc(y + t * d[0], z + t * d[1]) for t in ts]
        end = {(1, 0): "O1", (-1, 0): "V1", (0, 1): "O2", (0, -1): "V2"}[(round(d[0]), round(d[1]))]
        pts.append((float(round(d[0])), float(round(d[1]))))
        if direction > 0:
            return Orbit(pts, key, end, ["invariant_line"])
        return Orbit(pts[::-1], end, key, ["invariant_line"])

    # -- ray sections -------------------------------------------------------

    def _ray_radii(self) -> list:
        b = self.build
        rho = [(j + 1) / (b.radial_seeds + 1) for j in range(b.radial_seeds)]
        rho += [1.0 - 10 ** (-k / 2) for k in range(3, 3 + b.boundary_decades)]
        return sorted(set(r for r in rho if 0 < r < 1))

    def _seed(self, psi: float, rho: float):
        r = rho / math.sqrt(1.0 - rho * rho)
        return state_from_plane(r * math.cos(psi), r * math.sin(psi))

    def _full(self, psi: float, rho: float) -> Orbit:
        seed = self._seed(psi, rho)
        return _join(self.tracer.trace(seed, -1.0), self.tracer.trace(seed, 1.0))

    def _candidates(self) -> list:
        return [n for n in self.sk.nodes.values() if n.has_separatrices or n.is_origin]

    def _approached(self, a: Orbit, b: Orbit, forward: bool) -> Optional[tuple]:
        """The saddle-type point both bracket orbits pass closest to, with the closest index on ``a``.

        Only the halves of the orbits on the side where their limits differ
        (after the seed if ``forward``) are searched.
        """
        pa = a.points[a.seed:] if forward else a.points[: a.seed + 1]
        pb = b.points[b.seed:] if forward else b.points[: b.seed + 1]
        off = a.seed if forward else 0
        scored = []
        for node in self._candidates():
            px, py = node.position
            da = [math.hypot(x - px, y - py) for x, y in pa]
            db = min(math.hypot(x - px, y - py) for x, y in pb)
            ia = min(range(len(da)), key=da.__getitem__)
            scored.append((max(da[ia], db), node.key, off + ia))
        scored.sort()
        if not scored or scored[0][0] > self.build.approach_tol:
            return None
        if len(scored) > 1 and scored[0][0] * self.build.approach_ratio > scored[1][0]:
            return None
        return scored[0][1], scored[0][2]

    # -- which ends of an edge it is a separatrix of -------------------------

    def _ring(self, axis: int) -> tuple:
        if axis not in self._rings:
            bwd, fwd = ring_fates(self.p, axis, self.cfg.local_radius, n=self.ring_seeds)
            self._rings[axis] = (bwd, fwd)
        return self._rings[axis]

    def _separatrix_at_origin(self, e: Edge, x: str) -> bool:
        """Whether edge ``e`` is a separatrix of the chart origin ``x`` at its end.

        It is not when the ring seeds on both sides of its entry angle also
        reach ``x`` in the same time direction: then it lies inside a
        parabolic family of ``x``.
        """
        axis = 1 if x.endswith("1") else 2
        positive = x.startswith("O")
        _, _, su, sv = scaled_local_field(self.p, axis, self.cfg.local_radius)
        pts = e.points if e.target == x else e.points[::-1]
        entry = None
        for px, py in reversed(pts):
            lead, other = (px, py) if axis == 1 else (py, px)
            if (lead > 0) != positive or lead == 0.0:
                continue
            h = math.sqrt(max(0.0, 1.0 - px * px - py * py))
            u, v = other / lead, h / lead
            if (u / su) ** 2 + (v / sv) ** 2 >= 1.0:
                entry = math.atan2(v / sv, u / su)
                break
        if entry is None:
            return True
        bwd, fwd = self._ring(axis)
        fates = fwd if e.target == x else bwd
        n = len(fates)
        k = (entry % (2 * math.pi)) / (2 * math.pi) * n - 0.5
        lo, hi = int(math.floor(k)) - 1, int(math.ceil(k)) + 1
        return not (fates[lo % n] == ORIGIN and fates[hi % n] == ORIGIN)

    def _mark_origin_separatrices(self) -> None:
        for e in self.sk.edges:
            sep = set(e.separatrix_of)
            for key in (e.source, e.target):
                # axis rays always count at a chart origin; eigendirection edges are tested
                if is_origin_at_infinity(key) and e.origin.startswith("eigendirection"):
                    if self._separatrix_at_origin(e, key):
                        sep.add(key)
                    else:
                        sep.discard(key)
            e.separatrix_of = frozenset(sep)

    def _bisect(self, psi: float, lo: tuple, hi: tuple) -> tuple:
        (ra, oa), (rb, ob) = lo, hi
        ca = (_lump(oa.start), _lump(oa.end))
        for _ in range(self.build.bisection_steps):
            rm = 0.5 * (ra + rb)
            om = self._full(psi, rm)
            if (_lump(om.start), _lump(om.end)) == ca:
                ra, oa = rm, om
            else:
                rb, ob = rm, om
        return oa, ob

    def _add_ray_edges(self) -> dict:
        """Trace the ray sections; returns the seeds grouped by (quadrant, class)."""
        families: dict = {}
        done = set()
        k = self.build.rays_per_quadrant
        radii = self._ray_radii()
        for qi, qname in enumerate(QUADRANTS):
            for i in range(k):
                psi = (qi + (i + 0.5) / k) * (math.pi / 2)
                row = []
                for rho in radii:
                    o = self._full(psi, rho)
                    cls = (_lump(o.start), _lump(o.end))
                    row.append((rho, o, cls))
                    families.setdefault((qname, cls), []).append((psi, rho, o))
                for (ra, oa, ca), (rb, ob, cb) in zip(row, row[1:]):
                    if ca == cb or "?" in ca + cb:
                        continue
                    key = (qname, frozenset((ca, cb)))
                    if key in done:
                        continue
                    done.add(key)
                    a, b = self._bisect(psi, (ra, oa), (rb, ob))
                    self._boundary_edge(qname, a, b)
        return families

    @staticmethod
    def _arc_end(quadrant: str, angle: float) -> str:
        """Chart origin at the nearer end of the quadrant's arc of the boundary circle."""
        qi = list(QUADRANTS).index(quadrant)
        ends = [name for name, a in ORIGIN_ANGLES.items() if a in (qi * math.pi / 2, ((qi + 1) % 4) * math.pi / 2)]
        return min(ends, key=lambda n: abs(math.remainder(angle - ORIGIN_ANGLES[n], 2 * math.pi)))

    def _boundary_edge(self, qname: str, a: Orbit, b: Orbit) -> None:
        """Add the separatrix between bracket orbits ``a`` and ``b`` if it ends at a chart origin.

        The limit orbit's end on the side where the brackets differ is a point
        with a hyperbolic sector.  If both brackets pass a finite saddle there,
        the separatrix is already known.  If one of them lands on the line at
        infinity, the limit leaves a chart origin along its center manifold,
        which backward integration cannot follow; the landing point drifts
        toward the nearer end of the quadrant's arc, which is that origin.
        """
        alpha_differs = _lump(a.start) != _lump(b.start)
        omega_differs = _lump(a.end) != _lump(b.end)
        forward = omega_differs
        hit = self._approached(a, b, forward)
        if hit is not None and self.sk.nodes[hit[0]].finite:
            return
        if alpha_differs and omega_differs:
            self.sk.flags.append(f"unresolved_boundary:{qname}")
            return
        ends = (a.end, b.end) if forward else (a.start, b.start)
        landed = [k for k in ends if k and k.startswith("inf@")]
        if landed:
            x = self._arc_end(qname, continuum_angle(landed[0]))
        elif hit is not None:
            x = hit[0]
        else:
            self.sk.flags.append(f"unresolved_boundary:{qname}")
            return
        node = self.sk.nodes[x]
        # draw from whichever bracket passes closer to x
        best = None
        for o in (a, b):
            rng = range(o.seed, len(o.points)) if forward else range(0, o.seed + 1)
            i = min(rng, key=lambda j: math.dist(o.points[j], node.position))
            d = math.dist(o.points[i], node.position)
            if best is None or d < best[0]:
                best = (d, o, i)
        _, o, i = best
        if forward:
            e = Edge(self._node_for(o.start) or "?", x, o.points[: i + 1] + [node.position], frozenset({x}))
        else:
            e = Edge(x, self._node_for(o.end) or "?", [node.position] + o.points[i:], frozenset({x}))
        e.origin = f"section {qname}"
        e.flags = list(o.flags)
        if not any({f.source, f.target} == {e.source, e.target} and f.origin == e.origin for f in self.sk.edges):
            self.sk.edges.append(e)

    def _add_region_orbits(self, families: dict) -> None:
        for (qname, cls), seeds in sorted(families.items(), key=lambda kv: kv[0]):
            if "?" in cls or len(seeds) < 2:
                continue
            count = 3 if "inf" in cls else 1
            picks = [seeds[(2 * j + 1) * len(seeds) // (2 * count)] for j in range(count)]
            for _, _, o in picks:
                self.sk.region_orbits.append(
                    RegionOrbit(o.start or "?", o.end or "?", o.points, len(self.sk.region_orbits), list(o.flags))
                )
                for key in (o.start, o.end):
                    self._node_for(key)

    def run(self) -> SeparatrixSkeleton:
        self._add_nodes()
        self._add_axis_edges()
        self._add_saddle_edges()
        families = self._add_ray_edges()
        self._mark_origin_separatrices()
        if self.build.region_orbits:
            self._add_region_orbits(families)
        self.families = families
        return self.sk


def trace_separatrices(
    p: ParameterPoint, cfg: IntegratorConfig | None = None, build: BuildConfig | None = None
) -> SeparatrixSkeleton:
    """Separatrix skeleton of ``p`` traced numerically on the Poincaré disc."""
    return SkeletonBuilder(p, cfg, build).run()
