import random

import pytest

from kolportrait.classify import assemble_global
from kolportrait.connection import (
    InconclusiveNearBoundary,
    detect_connection_boundary,
    third_quadrant_separatrix,
)
from kolportrait.params import ParameterPoint

from oracles import sample_connection_case

WORKED = [
    ((2, 1, 1, 1, "1/2"), "a", "G3", "P2"),
    ((2, 1, 1, 1, 1), "b", "G4", "V1"),
    ((2, 1, 1, 1, "3/2"), "c", "G5", None),
    (("1/2", 1, 1, 1, 2), "a", "G7", "P1"),
    ((1, 1, 1, 1, 2), "b", "G8", "V2"),
    (("3/2", 1, 1, 1, 2), "c", "G9", None),
]


@pytest.mark.parametrize("vals,conf,g,end", WORKED)
def test_worked_configurations(vals, conf, g, end):
    rep = detect_connection_boundary(ParameterPoint.of(*vals))
    assert (rep.configuration, rep.portrait, rep.agrees) == (conf, g, True)
    if end:
        assert rep.separatrix_end == end
    else:
        assert rep.separatrix_end.startswith("inf@")


@pytest.mark.parametrize("sub", ["1.2", "1.3"])
def test_detector_agrees_with_sign_test_on_samples(sub):
    rng = random.Random(sub)
    for _ in range(40):
        p = sample_connection_case(sub, rng)
        rep = detect_connection_boundary(p)
        assert rep.agrees and rep.portrait == assemble_global(p), (p, rep)


def test_near_stratum_is_inconclusive():
    p = ParameterPoint(2.0, 1.0, 1.0, 1.0, 1.0 + 1e-9)
    with pytest.raises(InconclusiveNearBoundary) as info:
        detect_connection_boundary(p)
    assert "low_confidence" in info.value.report.flags
    assert info.value.report.algebraic_portrait == "G5"


def test_other_cases_are_refused():
    with pytest.raises(ValueError):
        detect_connection_boundary(ParameterPoint.of(1, 1, 1, 1, -1))
    with pytest.raises(ValueError):
        detect_connection_boundary(ParameterPoint.of(3, -3, "3/2", 3, "1/2"))  # 1.2 with b1 < 0


def test_exact_stratum_uses_the_invariant_line():
    assert third_quadrant_separatrix(ParameterPoint.of(2, 1, 1, 1, 1), "1.2") == "V1"
