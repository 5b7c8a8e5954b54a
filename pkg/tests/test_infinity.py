import pytest
import sympy as sp

from kolportrait.charts import ChartId, field_U1, field_U2
from kolportrait.infinity import (
    DegenerateDirection,
    Direction,
    Family,
    OriginPortraitLabel,
    SectorMismatch,
    classify_infinity_line,
    classify_origin,
    label_class,
    transversal_eigenvalue,
    verify_origin_sectors,
)
from kolportrait.params import ParameterPoint
from kolportrait.sweep import row_representatives
from kolportrait.tables import GLOBAL_INDEX

from oracles import SYMBOLIC, U, V

REPS = row_representatives()
# one point per distinct (chart label, case row) pair
PAIRS = sorted(
    {(GLOBAL_INDEX[key].o1, key): p for (key, _), p in REPS.items()}.items()
    | {(GLOBAL_INDEX[key].o2, key): p for (key, _), p in REPS.items()}.items(),
    key=lambda kv: (kv[0][0], str(kv[0][1])),
)


@pytest.mark.parametrize("f", [field_U1, field_U2])
def test_transversal_eigenvalue_matches_symbolic_jacobian(f):
    comps = f(SYMBOLIC, U, V)
    J = sp.Matrix(comps).jacobian([U, V]).subs(V, 0)
    u0 = sp.Symbol("u0")
    ev = J.subs(U, u0).eigenvals()
    assert set(ev) == {0, transversal_eigenvalue(SYMBOLIC, u0)}


def test_continuum_behaviour():
    p = ParameterPoint.of(1, 1, 1, 1, -1)
    b = classify_infinity_line(p, 2.0)
    assert b.quadrants == ("Q1", "Q3") and b.direction is Direction.ARRIVES
    b = classify_infinity_line(p, -0.5, ChartId.U2)
    assert b.quadrants == ("Q2", "Q4") and b.direction is Direction.LEAVES
    with pytest.raises(DegenerateDirection):
        classify_infinity_line(p, 0)


@pytest.mark.parametrize("pair", PAIRS, ids=lambda kv: f"{kv[0][0]}-{kv[0][1][0]}{'+' if kv[0][1][1] > 0 else '-'}")
def test_label_matches_observed_sectors(pair):
    (label, key), p = pair
    label = OriginPortraitLabel(label)
    assert classify_origin(p, label.chart).value == label.value
    report = verify_origin_sectors(p, label.chart, label)
    assert report.consistent and report.undecided == 0
    assert report.family is label.family


def test_nilpotent_saddle_at_O1():
    # b2 = 0 with b1 > 0 and c0 > b0: the O1 label is L1_5, a nilpotent saddle
    p = ParameterPoint.of("1/2", "1/2", 0, 3, 1)
    label = classify_origin(p, ChartId.U1)
    assert label is OriginPortraitLabel.L1_5
    report = verify_origin_sectors(p, ChartId.U1, label)
    assert report.family is Family.NILPOTENT_SADDLE
    assert not report.elliptic


def test_wrong_label_raises_sector_mismatch():
    p = ParameterPoint.of(1, 1, 1, 1, -1)  # O1 is L1_2
    with pytest.raises(SectorMismatch) as info:
        verify_origin_sectors(p, ChartId.U1, OriginPortraitLabel.L1_1)
    assert info.value.report is not None and not info.value.report.consistent


def test_label_from_the_other_chart_is_rejected():
    p = ParameterPoint.of(1, 1, 1, 1, -1)
    with pytest.raises(SectorMismatch):
        verify_origin_sectors(p, ChartId.U1, OriginPortraitLabel.L2_1)


def test_label_classes():
    assert [label_class(OriginPortraitLabel(f"L1_{k}")) for k in range(1, 9)] == [1, 1, 1, 1, 2, 2, 3, 3]
    assert [label_class(OriginPortraitLabel(f"L2_{k}")) for k in range(1, 11)] == [1] * 4 + [2] * 4 + [3] * 2
