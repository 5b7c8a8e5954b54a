import math
import random

import pytest
import sympy as sp

from kolportrait.builder import HALF_AXES
from kolportrait.params import ParameterPoint
from kolportrait.tracing import (
    IntegratorConfig,
    Tracer,
    continuum_angle,
    continuum_key,
    state_from_plane,
)

from oracles import SUBCASES, sample_subcase

AXIS_SEEDS = [(0.37, 0.0), (-2.5, 0.0), (0.0, 0.81), (0.0, -1.7), (12.0, 0.0), (0.0, -9.0)]


def _axis_points(p):
    tr = Tracer(p)
    for y, z in AXIS_SEEDS:
        for d in (1.0, -1.0):
            orb = tr.trace(state_from_plane(y, z), d)
            k = 0 if y == 0 else 1  # the coordinate that must stay zero
            yield max(abs(q[k]) for q in orb.points), orb


@pytest.mark.parametrize("sub", SUBCASES)
def test_axes_are_invariant_for_traced_orbits(sub):
    p = sample_subcase(sub, random.Random(sub))
    for dev, orb in _axis_points(p):
        assert dev <= 1e-8, orb.flags


def test_axis_orbits_end_on_the_axis():
    p = ParameterPoint.of(1, 1, 1, 1, -1)
    tr = Tracer(p)
    # G1: saddle P0 at the origin, stable node P2 at (-1, 0); ydot = y(1 + y) on z = 0
    cases = [((5.0, 0.0), "P0", "O1"), ((-0.5, 0.0), "P0", "P2"), ((-5.0, 0.0), "V1", "P2")]
    for seed, alpha, omega in cases:
        assert tr.trace(state_from_plane(*seed), 1.0).end == omega
        assert tr.trace(state_from_plane(*seed), -1.0).start == alpha  # points in time order


def _phi(q):
    x, w = q
    return math.log(abs(w / x))


@pytest.mark.parametrize("r", ["R1", "R5", "R8", "R13"])
def test_no_closed_orbits(rep_skeletons, r):
    """ln|z/y| changes monotonically along every orbit inside a quadrant."""
    sks, _ = rep_skeletons
    sk = sks[r]
    for orb in list(sk.region_orbits) + list(sk.edges):
        phis = [_phi(q) for q in orb.points if abs(q[0]) > 1e-6 and abs(q[1]) > 1e-6 and q[0] ** 2 + q[1] ** 2 < 0.999]
        diffs = [b - a for a, b in zip(phis, phis[1:]) if abs(b - a) > 1e-9]
        assert all(d > 0 for d in diffs) or all(d < 0 for d in diffs)


def test_phi_derivative_is_constant():
    y, z = sp.symbols("y z", positive=True)
    b0, b1, b2, b3, c0 = sp.symbols("b0 b1 b2 b3 c0")
    common = b1 * y * z + b2 * y + b3 * z
    ydot, zdot = y * (b0 + common), z * (c0 + common)
    phidot = sp.diff(sp.log(z / y), y) * ydot + sp.diff(sp.log(z / y), z) * zdot
    assert sp.simplify(phidot - (c0 - b0)) == 0


def test_invariant_line_on_the_connection_strata():
    y, z = sp.symbols("y z")
    b0, b1, b2, b3, c0 = sp.symbols("b0 b1 b2 b3 c0", nonzero=True)
    common = b1 * y * z + b2 * y + b3 * z
    ydot, zdot = y * (b0 + common), z * (c0 + common)
    # b2*b3 = b1*c0: the horizontal line z = -c0/b3 is invariant, and on it ydot = (b0 - c0) y
    on = {z: -c0 / b3, b2: b1 * c0 / b3}
    assert sp.simplify(zdot.subs(on)) == 0
    assert sp.simplify(ydot.subs(on) - (b0 - c0) * y) == 0
    # b2*b3 = b1*b0: the vertical line y = -b0/b2 is invariant
    on = {y: -b0 / b2, b3: b1 * b0 / b2}
    assert sp.simplify(ydot.subs(on)) == 0


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(seed_offset=0)
    with pytest.raises(ValueError):
        IntegratorConfig(rtol=-1)


def test_continuum_keys_merge_nearby_angles():
    assert continuum_key(0.5) == continuum_key(0.5 + 3e-4)
    assert abs(continuum_angle(continuum_key(1.2345)) - 1.2345) < 1e-3
    assert continuum_key(-0.1) == continuum_key(2 * math.pi - 0.1)


def test_half_axes_name_their_chart_origins():
    assert {v[1] for v in HALF_AXES.values()} == {"O1", "V1", "O2", "V2"}
