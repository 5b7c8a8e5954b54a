"""Independent oracles used by the tests: samplers, finite differences, symbolic charts."""

from __future__ import annotations

import random

import numpy as np
import sympy as sp

from kolportrait.params import ParameterPoint

SUBCASES = ("1.1", "1.2", "1.3", "1.4", "1.5", "2.1", "2.2", "2.3", "2.4",
            "3.1", "3.2", "3.3", "3.4", "4.1", "4.2")


def sample_subcase(sub: str, rng: random.Random, margin: float = 1e-3) -> ParameterPoint:
    """A float point of a subcase region, built directly from its sign conditions."""
    major, minor = (int(x) for x in sub.split("."))
    pos = lambda: rng.uniform(0.1, 3.0)  # noqa: E731
    b1 = rng.choice((1, -1)) * pos()
    b2 = pos() if major in (1, 3) else 0.0
    b3 = pos() if major in (1, 2) else 0.0
    while True:
        b0, c0 = pos(), pos()
        if abs(c0 - b0) > margin * 3:
            break
    lo, hi = min(b0, c0), max(b0, c0)
    if minor == 1:
        c0 = -c0
    elif (sub in ("1.2", "2.2", "3.3")) or (sub == "4.2" and rng.random() < 0.5):
        b0, c0 = hi, lo  # c0 < b0
    elif sub in ("1.3", "2.3", "3.2", "4.2"):
        b0, c0 = lo, hi
    elif sub in ("1.4", "2.4"):
        c0 = 0.0
    elif sub in ("1.5", "3.4"):
        b0 = 0.0
    return ParameterPoint(b0, b1, b2, b3, c0)


def field_np(p, y, z):
    b0, b1, b2, b3, c0 = p.as_floats()
    common = b1 * y * z + b2 * y + b3 * z
    return np.array([y * (b0 + common), z * (c0 + common)])


def fd_jacobian(p, y, z, h: float = 1e-6) -> np.ndarray:
    """Central differences of the field, with steps scaled to the point."""
    J = np.empty((2, 2))
    for j, (dy, dz) in enumerate(((1.0, 0.0), (0.0, 1.0))):
        s = h * max(1.0, abs(y) if j == 0 else abs(z))
        J[:, j] = (field_np(p, y + s * dy, z + s * dz) - field_np(p, y - s * dy, z - s * dz)) / (2 * s)
    return J


def kind_from_numpy(J: np.ndarray, tol: float = 1e-9) -> str:
    ev = np.linalg.eigvals(J).real
    s = [0 if abs(e) <= tol * max(1.0, np.abs(J).max()) else (1 if e > 0 else -1) for e in ev]
    if 0 in s:
        return "saddle_node"
    if s[0] != s[1]:
        return "saddle"
    return "stable_node" if s[0] < 0 else "unstable_node"


B0, B1, B2, B3, C0 = sp.symbols("b0 b1 b2 b3 c0", real=True)
U, V = sp.symbols("u v", real=True)
SYMBOLIC = ParameterPoint(B0, B1, B2, B3, C0)


def symbolic_chart_field(axis: int):
    """Compactified field in chart U1 (axis 1) or U2 (axis 2), derived from scratch with sympy."""
    y, z = sp.symbols("y z", real=True)
    common = B1 * y * z + B2 * y + B3 * z
    P, Q = y * (B0 + common), z * (C0 + common)
    if axis == 1:
        sub = {y: 1 / V, z: U / V}
        du = (Q * y - z * P) / y**2  # u = z/y
        dv = -P / y**2  # v = 1/y
    else:
        sub = {y: U / V, z: 1 / V}
        du = (P * z - y * Q) / z**2  # u = y/z
        dv = -Q / z**2
    # multiply by v^(d-1) with d = 3
    return tuple(sp.expand(sp.simplify((e.subs(sub)) * V**2)) for e in (du, dv))


def sample_connection_case(sub: str, rng: random.Random, margin: float = 1e-3) -> ParameterPoint:
    """Float point of subcase 1.2/1.3 with b1 > 0, farther than ``margin`` from the connection stratum."""
    while True:
        p = sample_subcase(sub, rng)
        b0, b1, b2, b3, c0 = p.as_floats()
        if b1 < 0:
            continue
        q = b2 * b3 - b1 * (c0 if sub == "1.2" else b0)
        if abs(q) > margin * p.scale**2:
            return p
