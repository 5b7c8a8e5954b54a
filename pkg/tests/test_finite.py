import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kolportrait.finite import (
    FINITE_TABLE,
    Kind,
    TableMismatch,
    classify_finite,
    eigenvalues,
    finite_singularities,
    jacobian,
    kind_from_eigenvalues,
    vector_field,
)
from kolportrait.params import ParameterPoint, determine_case

from oracles import SUBCASES, fd_jacobian, field_np, kind_from_numpy, sample_subcase


@pytest.mark.parametrize("sub", SUBCASES)
def test_kinds_match_tables_and_numpy_oracle(sub):
    rng = random.Random(hash(sub) % 1000)
    for _ in range(200):
        p = sample_subcase(sub, rng)
        reports = {r.id: r for r in classify_finite(p)}
        assert set(reports) == set(FINITE_TABLE[sub])
        for pid, r in reports.items():
            y, z = (float(c) for c in r.location)
            assert np.abs(field_np(p, y, z)).max() < 1e-12
            J = fd_jacobian(p, y, z)
            assert kind_from_numpy(J, 1e-6) == FINITE_TABLE[sub][pid].value == r.kind.value


@given(
    st.tuples(*[st.floats(-3, 3, allow_nan=False) for _ in range(5)]),
    st.floats(-5, 5, allow_nan=False),
    st.floats(-5, 5, allow_nan=False),
)
def test_jacobian_matches_finite_differences(vals, y, z):
    p = ParameterPoint(*vals)
    J = np.array(jacobian(p, y, z), dtype=float)
    err = np.abs(J - fd_jacobian(p, y, z)).max()
    assert err <= 1e-6 * max(1.0, np.abs(J).max())


def test_exact_points_give_exact_eigenvalues():
    p = ParameterPoint.of(2, 1, 1, 1, "1/2")
    ev = {r.id: r.eigenvalues for r in classify_finite(p)}
    assert ev["P0"] == (ParameterPoint.of(0, 0, 0, 0, "1/2").c0, 2)
    for vals in ev.values():
        assert all(not isinstance(v, float) for v in vals)


def test_coincident_points_are_merged():
    p = ParameterPoint.of(1, 1, 1, 1, 0)
    ids = [pid for pid, _ in finite_singularities(p)]
    assert ids == ["P0≡P1", "P2"]
    (sn,) = [r for r in classify_finite(p) if r.id == "P0≡P1"]
    assert sn.kind is Kind.SADDLE_NODE and sn.index == 0


def test_vector_field_vanishes_on_axes_transversally():
    p = ParameterPoint(1.0, 2.0, 0.5, 1.5, -1.0)
    assert vector_field(p, 0.0, 3.0)[0] == 0
    assert vector_field(p, 3.0, 0.0)[1] == 0


def test_kind_from_eigenvalues():
    assert kind_from_eigenvalues((-1, 2)) is Kind.SADDLE
    assert kind_from_eigenvalues((1, 2)) is Kind.UNSTABLE_NODE
    assert kind_from_eigenvalues((-2, -1)) is Kind.STABLE_NODE
    assert kind_from_eigenvalues((0, 1)) is Kind.SADDLE_NODE
    with pytest.raises(TableMismatch):
        kind_from_eigenvalues((0, 0))


def test_eigenvalues_of_triangular_matrix_are_diagonal():
    assert eigenvalues(((3, 5), (0, -1))) == (-1, 3)


def test_determine_case_examples():
    assert determine_case(ParameterPoint.of(1, 1, 1, 1, -1)).subcase == "1.1"
    assert determine_case(ParameterPoint.of(1, 1, 0, 0, 2)).key() == ("4.2", 1, 1)
