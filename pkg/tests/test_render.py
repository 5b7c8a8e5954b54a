import re
import xml.etree.ElementTree as ET

from kolportrait.render import RenderStyle, polyline_count, render_svg
from kolportrait.skeleton import Edge, Node, RegionOrbit, SeparatrixSkeleton

NS = "{http://www.w3.org/2000/svg}"


def test_empty_skeleton_draws_only_the_ring():
    svg = render_svg(SeparatrixSkeleton())
    root = ET.fromstring(svg)
    children = [c.tag.replace(NS, "") for c in root]
    assert children == ["circle"]
    assert root[0].get("class") == "infinity"
    assert svg.endswith(b"</svg>\n")


def test_polylines_equal_edges_plus_region_orbits(rep_skeletons):
    sks, _ = rep_skeletons
    sk = sks["R1"]
    svg = render_svg(sk)
    assert polyline_count(svg) == len(sk.edges) + len(sk.region_orbits)
    root = ET.fromstring(svg)
    seps = [e for e in root if e.get("class") == "separatrix"]
    assert seps and all(e.get("stroke") == RenderStyle().separatrix_color for e in seps)
    orbits = [e for e in root if e.get("class") == "orbit"]
    assert all(e.get("stroke") == RenderStyle().orbit_color for e in orbits)
    # every finite point gets a glyph and every chart origin a marker
    assert len([e for e in root if e.get("class") == "point"]) == len(sk.finite_nodes())
    assert len([e for e in root if e.get("class") == "origin"]) == 4


def test_rendering_is_deterministic(rep_skeletons):
    sks, _ = rep_skeletons
    assert render_svg(sks["R8"]) == render_svg(sks["R8"])


def _toy():
    s = SeparatrixSkeleton()
    s.add_node(Node("P0", "saddle", (0.0, 0.0)))
    s.add_node(Node("O1", "origin_at_infinity", (1.0, 0.0)))
    line = [(t / 200, 0.0) for t in range(201)]
    s.edges.append(Edge("P0", "O1", line, frozenset({"P0", "O1"})))
    s.region_orbits.append(RegionOrbit("O1", "P0", [(0.5, 0.5), (0.5, 0.5)]))
    return s


def test_collinear_points_are_simplified_away():
    svg = render_svg(_toy()).decode()
    pts = re.search(r'class="separatrix" points="([^"]*)"', svg).group(1).split()
    assert len(pts) == 2


def test_degenerate_polyline_is_still_emitted():
    svg = render_svg(_toy())
    assert polyline_count(svg) == 2


def test_style_overrides():
    svg = render_svg(_toy(), RenderStyle(separatrix_color="#ff0000", radius=400.0)).decode()
    assert 'stroke="#ff0000"' in svg and 'r="400.00"' in svg
