"""Separatrix skeletons and the invariants that separate the thirteen classes.

A skeleton is a graph on the closed disc.  Nodes are finite singular points,
the four chart origins at infinity (O1, V1, O2, V2) and the boundary points
where a separatrix meets the continuum of infinite singular points.  Edges
are separatrices, directed along the flow.  Each edge records which of its
endpoints it is a separatrix *of*: an orbit ending in the parabolic sector
of a saddle-node connects to that point without being one of its
separatrices, and the invariants below depend on the distinction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

FINITE_KINDS = ("saddle", "saddle_node", "stable_node", "unstable_node")
INFINITE_KINDS = ("origin_at_infinity", "boundary_point")
INDEX = {"saddle": -1, "saddle_node": 0, "stable_node": 1, "unstable_node": 1}


class MalformedSkeleton(ValueError):
    """A skeleton violates its structural invariants."""


@dataclass
class Node:
    key: str
    kind: str
    position: tuple = (0.0, 0.0)  # disc coordinates
    label: Optional[str] = None  # L-label of a chart origin
    parabolic_side: Optional[tuple] = None  # saddle-node: (axis index, sign) of its parabolic half-plane

    @property
    def finite(self) -> bool:
        return self.kind in FINITE_KINDS

    @property
    def has_separatrices(self) -> bool:
        return self.kind in ("saddle", "saddle_node")

    @property
    def is_origin(self) -> bool:
        return self.kind == "origin_at_infinity"

    def to_dict(self) -> dict:
        out = {"key": self.key, "kind": self.kind, "position": [round(c, 9) + 0.0 for c in self.position]}
        if self.label:
            out["label"] = self.label
        return out


@dataclass
class Edge:
    source: str
    target: str
    points: list = field(default_factory=list)
    separatrix_of: frozenset = frozenset()
    origin: str = ""  # how the edge was seeded
    flags: list = field(default_factory=list)

    def endpoints(self) -> tuple:
        return (self.source, self.target)

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "separatrix_of": sorted(self.separatrix_of),
            "seed": self.origin,
            "flags": list(self.flags),
        }


@dataclass
class RegionOrbit:
    alpha: str
    omega: str
    points: list = field(default_factory=list)
    region: int = -1
    flags: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "omega": self.omega, "region": self.region, "flags": list(self.flags)}


@dataclass
class SeparatrixSkeleton:
    nodes: dict = field(default_factory=dict)
    edges: list = field(default_factory=list)
    region_orbits: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    def add_node(self, node: Node) -> Node:
        return self.nodes.setdefault(node.key, node)

    def finite_nodes(self) -> list:
        return [n for n in self.nodes.values() if n.finite]

    def validate(self) -> None:
        for e in self.edges:
            for k in e.endpoints():
                if k not in self.nodes:
                    raise MalformedSkeleton(f"edge endpoint {k} is not a node")
            if e.source == e.target and e.source in self.nodes and self.nodes[e.source].finite:
                if "closed_orbit" in e.flags:
                    raise MalformedSkeleton(f"closed orbit through {e.source}")
        for n in self.nodes.values():
            if not n.has_separatrices:
                continue
            deg = sum(n.key in e.separatrix_of for e in self.edges)
            need = 4 if n.kind == "saddle" else 3
            flagged = any(
                n.key in e.endpoints() and "TracingBudgetExceeded" in e.flags for e in self.edges
            )
            if deg != need and not flagged:
                raise MalformedSkeleton(f"{n.key} ({n.kind}) has {deg} separatrices, expected {need}")

    def transformed(self, flip_y: int = 1, flip_z: int = 1, reverse_time: int = 1) -> "SeparatrixSkeleton":
        """Image under (y, z, t) -> (flip_y*y, flip_z*z, reverse_time*t).

        Chart origins are renamed with their half-axes and boundary points are
        re-keyed by their new angle; finite keys are kept.
        """
        swap = {}
        if flip_y < 0:
            swap.update(O1="V1", V1="O1")
        if flip_z < 0:
            swap.update(O2="V2", V2="O2")

        def pt(q):
            return (flip_y * q[0], flip_z * q[1])

        def key(k):
            if k.startswith("inf@"):
                a = float(k.split("@", 1)[1])
                b = math.atan2(flip_z * math.sin(a), flip_y * math.cos(a)) % (2 * math.pi)
                return f"inf@{round(b / 1e-3) * 1e-3:.3f}"
            return swap.get(k, k)

        nodes = {}
        for n in self.nodes.values():
            side = n.parabolic_side
            if side is not None:
                side = (side[0], side[1] * (flip_y, flip_z)[side[0]])
            m = replace(n, key=key(n.key), position=pt(n.position), parabolic_side=side)
            nodes[m.key] = m
        back = reverse_time < 0
        edges = []
        for e in self.edges:
            pts = [pt(q) for q in e.points]
            src, dst = key(e.source), key(e.target)
            if back:
                src, dst, pts = dst, src, pts[::-1]
            edges.append(replace(e, source=src, target=dst, points=pts, separatrix_of=frozenset(key(k) for k in e.separatrix_of)))
        orbits = []
        for r in self.region_orbits:
            a, w, pts = key(r.alpha), key(r.omega), [pt(q) for q in r.points]
            if back:
                a, w, pts = w, a, pts[::-1]
            orbits.append(replace(r, alpha=a, omega=w, points=pts))
        return SeparatrixSkeleton(nodes, edges, orbits, list(self.flags))

    def to_dict(self) -> dict:
        return {
            "nodes": [n.to_dict() for n in sorted(self.nodes.values(), key=lambda n: n.key)],
            "edges": [e.to_dict() for e in self.edges],
            "region_orbits": [r.to_dict() for r in self.region_orbits],
            "flags": list(self.flags),
        }


def compute_invariants(s: SeparatrixSkeleton, validate: bool = True) -> tuple:
    """(I1, ..., I6) of a skeleton.

    I1  number of finite singular points
    I2  sum of their indices
    I3  separatrices of a finite saddle or saddle-node that end at a finite node
    I4  separatrices of a finite saddle or saddle-node that are also separatrices of the
        chart origin at infinity at their other end
    I5  chart origins that are the limit of an open family of orbits whose other limit is
        one finite singular point (read off the representative orbits of canonical regions)
    I6  separatrices leaving a finite saddle-node through its parabolic sector and ending
        at infinity (edges at a saddle-node that are not separatrices *of* it)
    """
    if validate:
        s.validate()
    nodes = s.nodes
    finite = s.finite_nodes()
    i1 = len(finite)
    i2 = sum(INDEX[n.kind] for n in finite)
    i3 = i4 = i6 = 0
    for e in s.edges:
        a, b = nodes[e.source], nodes[e.target]
        for x, y in ((a, b), (b, a)):
            if x.has_separatrices and x.key in e.separatrix_of:
                if y.finite and y.kind.endswith("_node") and y.kind != "saddle_node":
                    i3 += 1
                elif y.is_origin and y.key in e.separatrix_of:
                    i4 += 1
            # an edge at a saddle-node that is not one of its separatrices lies in the parabolic sector
            if x.kind == "saddle_node" and x.key not in e.separatrix_of and not y.finite:
                i6 += 1
    receivers = set()
    for r in s.region_orbits:
        if r.alpha not in nodes or r.omega not in nodes:
            continue
        a, b = nodes[r.alpha], nodes[r.omega]
        if a.finite and b.is_origin:
            receivers.add(b.key)
        elif b.finite and a.is_origin:
            receivers.add(a.key)
    i5 = len(receivers)
    return (i1, i2, i3, i4, i5, i6)
