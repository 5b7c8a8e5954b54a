"""Acceptance criteria 1-9, one test each; every test records a PASS/FAIL line."""

import itertools
import random
import time

import numpy as np
import pytest
import sympy as sp

from conftest import ACCEPTANCE_LINES
from kolportrait.builder import HALF_AXES
from kolportrait.charts import ChartId, chart_field, field_U1, field_U2, reduced_chart_field
from kolportrait.classify import assemble_global, classify
from kolportrait.connection import InconclusiveNearBoundary, detect_connection_boundary
from kolportrait.finite import FINITE_TABLE, classify_finite, jacobian
from kolportrait.infinity import OriginPortraitLabel, SectorMismatch, verify_origin_sectors
from kolportrait.params import ParameterPoint
from kolportrait.skeleton import compute_invariants
from kolportrait.sweep import row_representatives, sweep
from kolportrait.tables import GLOBAL_INDEX, R_LABELS
from kolportrait.tracing import Tracer, state_from_plane

from oracles import SUBCASES, SYMBOLIC, U, V, fd_jacobian, kind_from_numpy, sample_connection_case, sample_subcase


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_worked_examples():
    cases = [
        ((2, 1, 1, 1, "1/2"), "G3"), ((2, 1, 1, 1, 1), "G4"), ((2, 1, 1, 1, "3/2"), "G5"),
        (("1/2", 1, 1, 1, 2), "G7"), ((1, 1, 1, 1, 2), "G8"), (("3/2", 1, 1, 1, 2), "G9"),
    ]
    t = time.perf_counter()
    got = [classify(ParameterPoint.of(*vals)).g for vals, _ in cases]
    dt = time.perf_counter() - t
    want = [g for _, g in cases]
    record(1, got == want and dt < 1.0, f"{got} in {dt:.3f} s")


def test_criterion_2_table_row_coverage():
    t = time.perf_counter()
    reps = row_representatives()
    bad = []
    for (key, g), p in reps.items():
        row = GLOBAL_INDEX[key]
        c = classify(p)
        if (c.o1, c.o2, c.g) != (row.o1, row.o2, g):
            bad.append((key, g, c.o1, c.o2, c.g))
    dt = time.perf_counter() - t
    record(2, len(reps) == 36 and not bad and dt < 10.0, f"{len(reps)} entries, {len(bad)} mismatches, {dt:.2f} s")


def test_criterion_3_finite_oracle():
    rng = random.Random(2024)
    mismatches = 0
    worst = 0.0
    n = 0
    for sub in SUBCASES:
        for _ in range(1000):
            p = sample_subcase(sub, rng)
            for r in classify_finite(p):
                y, z = (float(c) for c in r.location)
                J = np.array(jacobian(p, y, z), dtype=float)
                F = fd_jacobian(p, y, z)
                worst = max(worst, np.abs(J - F).max() / max(1.0, np.abs(J).max()))
                if kind_from_numpy(F, 1e-6) != FINITE_TABLE[sub][r.id].value or r.kind != FINITE_TABLE[sub][r.id]:
                    mismatches += 1
            n += 1
    record(3, mismatches == 0 and worst <= 1e-6, f"{n} points, {mismatches} kind mismatches, max Jacobian rel err {worst:.1e}")


def test_criterion_4_census():
    t = time.perf_counter()
    c = sweep({"random": {"n": 10_000, "seed": 1, "box": [-3, 3]}, "include_representatives": True})
    dt = time.perf_counter() - t
    ok = c.r_support <= set(R_LABELS) and c.r_support == set(R_LABELS) and dt < 120
    record(4, ok, f"{c.n} samples, support {len(c.r_support)}/13, {len(c.failures)} not normalizable, {dt:.1f} s")


I1 = (3, 3, 3, 3, 3, 2, 2, 2, 2, 2, 1, 1, 1)
I2 = (1, 1, 1, 1, 1, 1, 1, 0, 0, 2, 0, -1, 1)
I3 = (2, 2, 1, 1, 2, 1, 1, 1, 1)
I4 = (2, 1, 2, 1, 1, 2, 2, 3, 1)
I5 = {"R2": 2, "R5": 1}
I6 = {"R6": 1, "R7": 2}


def test_criterion_5_invariant_vectors(rep_skeletons):
    sks, dt = rep_skeletons
    vec = {r: compute_invariants(sks[r]) for r in R_LABELS}
    bad = []
    for k, r in enumerate(R_LABELS):
        v = vec[r]
        want = [I1[k], I2[k]] + ([I3[k], I4[k]] if k < 9 else [None, None]) + [I5.get(r), I6.get(r)]
        if any(w is not None and w != got for w, got in zip(want, v)):
            bad.append((r, v, want))
    record(5, not bad and dt < 300, f"13 skeletons traced in {dt:.1f} s, mismatches: {bad or 'none'}")


def test_criterion_6_distinctness(rep_skeletons):
    sks, _ = rep_skeletons
    vec = {r: compute_invariants(sks[r]) for r in R_LABELS}
    # compare only the entries the classification relies on
    relied = {
        r: (I1[k], I2[k]) + ((I3[k], I4[k]) if k < 9 else (None, None)) + (I5.get(r), I6.get(r))
        for k, r in enumerate(R_LABELS)
    }
    undistinguished = []
    for a, b in itertools.combinations(R_LABELS, 2):
        separated = any(
            x is not None and y is not None and vec[a][i] != vec[b][i]
            for i, (x, y) in enumerate(zip(relied[a], relied[b]))
        )
        if not separated:
            undistinguished.append((a, b))
    record(6, not undistinguished, f"78 pairs, undistinguished: {undistinguished or 'none'}")


def test_criterion_7_structural_checks(rep_skeletons):
    vanish = all(
        sp.expand(c.subs(V, 0)) == 0 and all(j >= 1 for (_, j), _ in sp.Poly(c, U, V).terms())
        for f in (field_U1, field_U2)
        for c in f(SYMBOLIC, U, V)
    )
    rng = random.Random(77)
    worst = 0.0
    for chart in ChartId:
        for _ in range(100):
            p = ParameterPoint(*(rng.uniform(-3, 3) for _ in range(5)))
            u, v = rng.uniform(-4, 4), rng.uniform(-2, 2)
            for a, b in zip(chart_field(p, chart, u, v), reduced_chart_field(p, chart, u, v)):
                worst = max(worst, abs(v * b - a) / max(1.0, abs(a)))
    axis_dev = 0.0
    sks, _ = rep_skeletons
    for sk in sks.values():
        for e in sk.edges:
            if e.origin.startswith("axis"):
                k = 1 if e.origin.split()[-1] in ("+y", "-y") else 0
                axis_dev = max(axis_dev, max(abs(q[k]) for q in e.points))
    for sub in SUBCASES:
        p = sample_subcase(sub, rng)
        tr = Tracer(p)
        for (dy, dz), _ in HALF_AXES.values():
            for scale in (0.3, 4.0):
                for d in (1.0, -1.0):
                    orb = tr.trace(state_from_plane(dy * scale, dz * scale), d)
                    k = 1 if dz == 0 else 0
                    axis_dev = max(axis_dev, max(abs(q[k]) for q in orb.points))
    ok = vanish and worst <= 1e-12 and axis_dev <= 1e-8
    record(7, ok, f"vanish on v=0: {vanish}; v*reduced rel err {worst:.1e}; axis deviation {axis_dev:.1e}")


def test_criterion_8_connection_detector():
    rng = random.Random(8)
    n = unflagged = flagged = 0
    t = time.perf_counter()
    for k in range(1000):
        sub = "1.2" if k % 2 == 0 else "1.3"
        p = sample_connection_case(sub, rng)
        try:
            rep = detect_connection_boundary(p)
        except InconclusiveNearBoundary:
            flagged += 1
            continue
        n += 1
        if rep.portrait != assemble_global(p) and not rep.flags:
            unflagged += 1
    dt = time.perf_counter() - t
    record(8, unflagged == 0, f"{n} decided, {flagged} flagged, {unflagged} unflagged disagreements, {dt:.1f} s")


def test_criterion_9_negative_control():
    p = ParameterPoint.of(1, 1, 1, 1, -1)
    wrong = OriginPortraitLabel.L1_1  # the true label is L1_2
    try:
        verify_origin_sectors(p, ChartId.U1, wrong)
        raised = False
    except SectorMismatch:
        raised = True
    right = verify_origin_sectors(p, ChartId.U1, OriginPortraitLabel.L1_2).consistent
    record(9, raised and right, f"wrong label raises SectorMismatch: {raised}; true label consistent: {right}")
