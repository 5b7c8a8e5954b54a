from fractions import Fraction

import pytest

from kolportrait.classify import classify, connection_quantity
from kolportrait.params import determine_case
from kolportrait.sweep import SweepSpecError, expand, stratum_distance, sweep
from kolportrait.tables import R_LABELS


def test_random_sweep_support_and_failures():
    c = sweep({"random": {"n": 600, "seed": 5, "box": [-3, 3]}})
    assert c.r_support <= set(R_LABELS)
    assert sum(c.r_counts.values()) + len(c.failures) == 600
    assert all(f["error"].startswith("NotNormalizable") for f in c.failures)


def test_case_4_2_is_always_r13():
    spec = {"grid": {"b0": [Fraction(1, 2), 3, 6], "c0": [Fraction(1, 3), 3, 7], "b1": [-2, 2, 5]},
            "fixed": {"b2": 0, "b3": 0}}
    c = sweep(spec)
    classified = sum(c.r_counts.values())
    assert classified > 0 and c.r_counts["R13"] == classified
    # the excluded samples are c0 = b0 or b1 = 0
    for f in c.failures:
        p = f["params"]
        assert p["b1"] == 0 or Fraction(str(p["c0"])) == Fraction(str(p["b0"]))


def test_g4_appears_exactly_on_the_stratum():
    spec = {"grid": {"c0": [Fraction(1, 10), Fraction(19, 10), 19], "b2": [Fraction(1, 2), 2, 4]},
            "fixed": {"b0": 2, "b1": 1, "b3": 1}}
    c = sweep(spec)
    for s in c.samples:
        if s.error:
            continue
        p = classify_point(s.params)
        case = determine_case(p)
        if case.subcase != "1.2":
            continue
        on = connection_quantity(p, case) == 0
        assert (s.g == "G4") == on
    assert c.g_counts.get("G4", 0) >= 1


def classify_point(d):
    from kolportrait.params import ParameterPoint

    return ParameterPoint.from_dict(d)


def test_results_do_not_depend_on_worker_count():
    spec = {"random": {"n": 300, "seed": 11}}
    a = sweep(spec, jobs=1).to_dict(include_samples=True)
    b = sweep(spec, jobs=3).to_dict(include_samples=True)
    assert a == b


def test_overrides_and_representatives():
    c = sweep({"random": {"n": 5, "seed": 1}, "include_representatives": True}, samples=0)
    assert c.n == 13 and c.r_support == set(R_LABELS)


def test_float_sampler():
    pts = expand({"random": {"n": 20, "seed": 2, "box": [-1, 1], "denominator": None}})
    assert len(pts) == 20 and not any(p.exact for p in pts)


@pytest.mark.parametrize("spec", [{}, {"grid": {"b9": [0, 1, 2]}}, {"grid": {"b0": [0, 1]}}, {"random": {}}])
def test_bad_specs(spec):
    with pytest.raises(SweepSpecError):
        expand(spec)


def test_stratum_distance():
    from kolportrait.params import ParameterPoint

    assert stratum_distance(ParameterPoint(2.0, 1.0, 1.0, 1.0, 1.0005)) == pytest.approx(2.5e-4 / 2, rel=1e-6)


def test_tracing_pipeline_agrees_on_a_small_grid():
    spec = {"grid": {"c0": [-2, 2, 3]}, "fixed": {"b0": 1, "b1": 1, "b2": 0, "b3": 0}}
    c = sweep(spec, with_tracing=True)
    assert c.g_counts == {"G31": 1, "G33": 1}
    assert len(c.failures) == 1  # c0 = 0 with b3 = 0
    assert c.disagreements == []


def test_tracing_pipeline_agrees_on_float_samples():
    c = sweep({"random": {"n": 4, "seed": 4, "box": [-3, 3], "denominator": None}}, with_tracing=True)
    assert not c.failures
    assert [d for d in c.disagreements if not d["near_stratum"]] == []
