"""Parameter-sweep censuses over the classifiable region.

A sweep spec is either ``{"grid": {name: [lo, hi, steps], ...}}`` (names not
listed are held at ``fixed`` values, default 1) or ``{"random": {"n": N,
"seed": S, "box": [lo, hi]}}``.  Random samples are drawn on the lattice
``k / denominator`` (``"denominator": 2`` by default, ``null`` for floats) so
that the measure-zero strata carrying classes R6..R13 are actually hit.
"""

from __future__ import annotations

import itertools
import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .classify import EPS_CONN, SCHEMA, classify
from .params import EPS_PARAM, PARAM_NAMES, ParameterPoint, determine_case
from .tables import GLOBAL_TABLE, R_LABELS, class_from_invariants

# one parameter point per topological class
REPRESENTATIVES = {
    "R1": ("1", "1", "1", "1", "-1"),
    "R2": ("2", "1", "1", "1", "1/2"),
    "R3": ("2", "1", "1", "1", "1"),
    "R4": ("2", "1", "1", "1", "3/2"),
    "R5": ("3", "-3", "3/2", "3", "1/2"),
    "R6": ("1", "1", "1", "1", "0"),
    "R7": ("1/2", "-1/2", "2", "2", "0"),
    "R8": ("1", "1", "0", "1", "-1"),
    "R9": ("2", "3", "0", "3/2", "1"),
    "R10": ("1/2", "1/2", "0", "3", "1"),
    "R11": ("1", "3/2", "0", "3", "0"),
    "R12": ("1", "1", "0", "0", "-2"),
    "R13": ("1", "1", "0", "0", "2"),
}


class SweepSpecError(ValueError):
    """Malformed sweep specification."""


def representative(r: str) -> ParameterPoint:
    return ParameterPoint.of(*REPRESENTATIVES[r])


def _lattice(lo, hi, steps: int) -> list:
    lo, hi = Fraction(str(lo)), Fraction(str(hi))
    if steps < 1:
        raise SweepSpecError("grid steps must be >= 1")
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * k / (steps - 1) for k in range(steps)]


def expand(spec: dict) -> list:
    """Sample points of a spec, in a fixed order."""
    points: list = []
    if "grid" in spec:
        grid = spec["grid"]
        fixed = {k: Fraction(str(v)) for k, v in spec.get("fixed", {}).items()}
        unknown = set(grid) - set(PARAM_NAMES) | set(fixed) - set(PARAM_NAMES)
        if unknown:
            raise SweepSpecError(f"unknown parameters: {sorted(unknown)}")
        axes = []
        for name in PARAM_NAMES:
            if name in grid:
                try:
                    lo, hi, steps = grid[name]
                except (TypeError, ValueError):
                    raise SweepSpecError(f"grid entry for {name} must be [lo, hi, steps]") from None
                axes.append(_lattice(lo, hi, int(steps)))
            else:
                axes.append([fixed.get(name, Fraction(1))])
        points = [ParameterPoint(*vals) for vals in itertools.product(*axes)]
    elif "random" in spec:
        r = spec["random"]
        try:
            n, seed = int(r["n"]), int(r.get("seed", 0))
        except (KeyError, TypeError, ValueError):
            raise SweepSpecError('random spec needs integer "n" (and optional "seed")') from None
        lo, hi = r.get("box", [-3, 3])
        den = r.get("denominator", 2)
        rng = random.Random(seed)
        if den is None:
            points = [ParameterPoint(*(rng.uniform(lo, hi) for _ in PARAM_NAMES)) for _ in range(n)]
        else:
            a, b = int(Fraction(str(lo)) * den), int(Fraction(str(hi)) * den)
            points = [ParameterPoint(*(Fraction(rng.randint(a, b), den) for _ in PARAM_NAMES)) for _ in range(n)]
    else:
        raise SweepSpecError('sweep spec needs a "grid" or a "random" key')
    if spec.get("include_representatives"):
        points += [representative(r) for r in R_LABELS]
    return points


STRATA = ("b0", "b1", "b2", "b3", "c0", "c0-b0", "b2*b3-b1*c0", "b2*b3-b1*b0")


def stratum_distance(p: ParameterPoint) -> float:
    """Smallest nonzero relative size of the quantities whose signs pick the portrait."""
    b0, b1, b2, b3, c0 = p.as_floats()
    s = max(p.scale, 1e-300)
    qs = (b0 / s, b1 / s, b2 / s, b3 / s, c0 / s, (c0 - b0) / s, (b2 * b3 - b1 * c0) / s**2, (b2 * b3 - b1 * b0) / s**2)
    nonzero = [abs(q) for q in qs if q != 0]
    return min(nonzero) if nonzero else float("inf")


@dataclass
class SampleResult:
    index: int
    params: dict
    g: Optional[str] = None
    r: Optional[str] = None
    traced_r: Optional[str] = None
    invariants: Optional[list] = None
    near_stratum: bool = False
    error: Optional[str] = None


def _one(args) -> SampleResult:
    i, p, eps, eps_conn, tracing, margin = args
    out = SampleResult(i, p.to_dict())
    try:
        c = classify(p, eps, eps_conn)
    except Exception as exc:  # collected per sample
        out.error = f"{type(exc).__name__}: {exc}"
        return out
    out.g, out.r = c.g, c.r
    out.near_stratum = (not p.exact and stratum_distance(p) <= margin) or any("near" in f for f in c.flags)
    if tracing:
        from .builder import trace_separatrices
        from .skeleton import compute_invariants

        try:
            sk = trace_separatrices(c.normalized)
            vec = compute_invariants(sk)
            out.invariants = list(vec)
            out.traced_r = class_from_invariants(vec)
        except Exception as exc:
            out.error = f"{type(exc).__name__}: {exc}"
    return out


@dataclass
class Census:
    n: int
    g_counts: dict
    r_counts: dict
    failures: list
    disagreements: list
    with_tracing: bool
    samples: list = field(default_factory=list)

    @property
    def r_support(self) -> set:
        return {r for r, k in self.r_counts.items() if k}

    def to_dict(self, include_samples: bool = False) -> dict:
        out = {
            "schema": SCHEMA,
            "n": self.n,
            "with_tracing": self.with_tracing,
            "G": self.g_counts,
            "R": self.r_counts,
            "R_support": sorted(self.r_support, key=lambda r: int(r[1:])),
            "failures": self.failures,
            "disagreements": self.disagreements,
        }
        if include_samples:
            out["samples"] = [s.__dict__ for s in self.samples]
        return out


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("KOLPORTRAIT_JOBS", "1")))
    except ValueError:
        return 1


def sweep(
    spec: dict,
    *,
    with_tracing: bool = False,
    eps: float = EPS_PARAM,
    eps_conn: float = EPS_CONN,
    jobs: Optional[int] = None,
    margin: float = 1e-3,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> Census:
    """Classify every sample of ``spec``; ``samples``/``seed`` override the random spec."""
    if "random" in spec and (samples is not None or seed is not None):
        spec = {**spec, "random": {**spec["random"]}}
        if samples is not None:
            spec["random"]["n"] = samples
        if seed is not None:
            spec["random"]["seed"] = seed
    points = expand(spec)
    jobs = jobs or default_jobs()
    work = [(i, p, eps, eps_conn, with_tracing, margin) for i, p in enumerate(points)]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_one, work, chunksize=max(1, len(work) // (8 * jobs))))
    else:
        results = [_one(w) for w in work]
    results.sort(key=lambda s: s.index)  # merge order does not depend on the pool
    g = Counter(s.g for s in results if s.g)
    r = Counter(s.r for s in results if s.r)
    stray = set(r) - set(R_LABELS)
    if stray:
        raise AssertionError(f"R-support outside R1..R13: {sorted(stray)}")
    failures = [{"index": s.index, "params": s.params, "error": s.error} for s in results if s.error]
    disagreements = [
        {"index": s.index, "params": s.params, "G": s.g, "R": s.r, "traced_R": s.traced_r,
         "invariants": s.invariants, "near_stratum": s.near_stratum}
        for s in results
        if with_tracing and s.r and not s.error and s.traced_r != s.r
    ]
    return Census(
        len(points),
        {k: g[k] for k in sorted(g, key=lambda x: int(x[1:]))},
        {k: r.get(k, 0) for k in R_LABELS},
        failures,
        disagreements,
        with_tracing,
        results,
    )


def row_representatives(eps: float = EPS_PARAM, values=None) -> dict:
    """(row key, G) -> lattice parameter point realizing that G-entry of the global table.

    One pass over a small rational lattice, smallest magnitudes first, stopping
    as soon as every entry has a witness.  Raises ``LookupError`` otherwise.
    """
    from .classify import assemble_global

    values = values or [Fraction(0)] + [Fraction(s * k, 2) for k in (1, 2, 4) for s in (1, -1)]
    want = {(row.key(), g) for row in GLOBAL_TABLE for g in row.g}
    found: dict = {}
    for vals in itertools.product(values, repeat=5):
        p = ParameterPoint(*vals)
        try:
            key = determine_case(p, eps).key()
            g = assemble_global(p, eps)
        except Exception:
            continue
        if (key, g) in want and (key, g) not in found:
            found[(key, g)] = p
            if len(found) == len(want):
                return found
    raise LookupError(f"no lattice witness for {sorted(want - set(found))}")


__all__ = [
    "Census",
    "REPRESENTATIVES",
    "SweepSpecError",
    "expand",
    "representative",
    "row_representatives",
    "stratum_distance",
    "sweep",
]
