"""Classification tables as data: global portraits, topological classes, coarse classes."""

from __future__ import annotations

from dataclasses import dataclass

from .finite import FINITE_TABLE


@dataclass(frozen=True)
class GlobalRow:
    subcase: str
    b1_sign: int
    o1: str
    o2: str
    g: tuple  # one label, or several resolved by a sign test
    c0_minus_b0_sign: int = 0  # distinguishes the four rows of subcase 4.2

    def key(self) -> tuple:
        if self.subcase == "4.2":
            return (self.subcase, self.b1_sign, self.c0_minus_b0_sign)
        return (self.subcase, self.b1_sign)


def _row(sub, s, o1, o2, *g, d=0):
    return GlobalRow(sub, s, o1, o2, tuple(g), d)


GLOBAL_TABLE = (
    _row("1.1", 1, "L1_2", "L2_1", "G1"),
    _row("1.1", -1, "L1_4", "L2_3", "G2"),
    _row("1.2", 1, "L1_2", "L2_1", "G3", "G4", "G5"),
    _row("1.2", -1, "L1_4", "L2_3", "G6"),
    _row("1.3", 1, "L1_1", "L2_2", "G7", "G8", "G9"),
    _row("1.3", -1, "L1_3", "L2_4", "G10"),
    _row("1.4", 1, "L1_2", "L2_1", "G11"),
    _row("1.4", -1, "L1_4", "L2_3", "G12"),
    _row("1.5", 1, "L1_1", "L2_2", "G13"),
    _row("1.5", -1, "L1_3", "L2_4", "G14"),
    _row("2.1", 1, "L1_7", "L2_1", "G15"),
    _row("2.1", -1, "L1_8", "L2_3", "G16"),
    _row("2.2", 1, "L1_7", "L2_1", "G17"),
    _row("2.2", -1, "L1_8", "L2_3", "G18"),
    _row("2.3", 1, "L1_5", "L2_2", "G19"),
    _row("2.3", -1, "L1_6", "L2_4", "G20"),
    _row("2.4", 1, "L1_7", "L2_1", "G21"),
    _row("2.4", -1, "L1_8", "L2_3", "G22"),
    _row("3.1", 1, "L1_2", "L2_6", "G23"),
    _row("3.1", -1, "L1_4", "L2_8", "G24"),
    _row("3.2", 1, "L1_1", "L2_5", "G25"),
    _row("3.2", -1, "L1_3", "L2_7", "G26"),
    _row("3.3", 1, "L1_2", "L2_9", "G27"),
    _row("3.3", -1, "L1_4", "L2_10", "G28"),
    _row("3.4", 1, "L1_1", "L2_5", "G29"),
    _row("3.4", -1, "L1_3", "L2_7", "G30"),
    _row("4.1", 1, "L1_7", "L2_6", "G31"),
    _row("4.1", -1, "L1_8", "L2_8", "G32"),
    _row("4.2", 1, "L1_5", "L2_5", "G33", d=1),
    _row("4.2", 1, "L1_7", "L2_9", "G34", d=-1),
    _row("4.2", -1, "L1_6", "L2_7", "G35", d=1),
    _row("4.2", -1, "L1_8", "L2_10", "G36", d=-1),
)

GLOBAL_INDEX = {row.key(): row for row in GLOBAL_TABLE}
G_LABELS = tuple(f"G{k}" for k in range(1, 37))

# Row of each portrait label (the 34 rows above carry 36 labels).
ROW_OF_G = {g: row for row in GLOBAL_TABLE for g in row.g}

TOPO_CLASSES = {
    "R1": ("G1", "G2"),
    "R2": ("G3", "G7"),
    "R3": ("G4", "G8"),
    "R4": ("G5", "G9"),
    "R5": ("G6", "G10"),
    "R6": ("G11", "G13"),
    "R7": ("G12", "G14"),
    "R8": ("G15", "G16", "G23", "G24"),
    "R9": ("G17", "G18", "G25", "G26"),
    "R10": ("G19", "G20", "G27", "G28"),
    "R11": ("G21", "G22", "G29", "G30"),
    "R12": ("G31", "G32"),
    "R13": ("G33", "G34", "G35", "G36"),
}
R_LABELS = tuple(TOPO_CLASSES)
R_OF_G = {g: r for r, gs in TOPO_CLASSES.items() for g in gs}

# Invariant vectors (I1..I6) of the thirteen classes; None where an
# invariant is not used to separate that class.
INVARIANTS = {
    "R1": (3, 1, 2, 2, None, None),
    "R2": (3, 1, 2, 1, 2, None),
    "R3": (3, 1, 1, 2, None, None),
    "R4": (3, 1, 1, 1, None, None),
    "R5": (3, 1, 2, 1, 1, None),
    "R6": (2, 1, 1, 2, None, 1),
    "R7": (2, 1, 1, 2, None, 2),
    "R8": (2, 0, 1, 3, None, None),
    "R9": (2, 0, 1, 1, None, None),
    "R10": (2, 2, None, None, None, None),
    "R11": (1, 0, None, None, None, None),
    "R12": (1, -1, None, None, None, None),
    "R13": (1, 1, None, None, None, None),
}

# Coarse classes by number of finite singular points and their index sum.
COARSE_CLASSES = {
    1: {"finite_points": 3, "index_sum": 1, "G": tuple(f"G{k}" for k in range(1, 11))},
    2: {"finite_points": 2, "index_sum": 1, "G": ("G11", "G12", "G13", "G14")},
    3: {
        "finite_points": 2,
        "index_sum": 0,
        "G": ("G15", "G16", "G17", "G18", "G23", "G24", "G25", "G26"),
    },
    4: {"finite_points": 2, "index_sum": 2, "G": ("G19", "G20", "G27", "G28")},
    5: {"finite_points": 1, "index_sum": 0, "G": ("G21", "G22", "G29", "G30")},
    6: {"finite_points": 1, "index_sum": -1, "G": ("G31", "G32")},
    7: {"finite_points": 1, "index_sum": 1, "G": ("G33", "G34", "G35", "G36")},
}
COARSE_OF_G = {g: k for k, row in COARSE_CLASSES.items() for g in row["G"]}


@dataclass(frozen=True)
class TopoClass:
    r: str
    members: tuple
    invariants: tuple

    def to_dict(self) -> dict:
        return {"R": self.r, "members": list(self.members), "invariants": list(self.invariants)}


def topo_class(g: str) -> TopoClass:
    r = R_OF_G[g]
    return TopoClass(r, TOPO_CLASSES[r], INVARIANTS[r])


def class_from_invariants(vec) -> "str | None":
    """The R-class whose (non-null) invariants all equal ``vec``; None if no class or several match."""
    hits = [r for r, inv in INVARIANTS.items() if all(a is None or a == b for a, b in zip(inv, vec))]
    return hits[0] if len(hits) == 1 else None


def classes_table(g: str) -> int:
    return COARSE_OF_G[g]


def all_tables() -> dict:
    """Every embedded table as plain JSON-ready data."""
    kinds = {sub: {pid: k.value for pid, k in row.items()} for sub, row in FINITE_TABLE.items()}
    return {
        "finite": kinds,
        "global": [
            {
                "case": r.subcase,
                "b1_sign": r.b1_sign,
                **({"c0_minus_b0_sign": r.c0_minus_b0_sign} if r.subcase == "4.2" else {}),
                "O1": r.o1,
                "O2": r.o2,
                "G": list(r.g),
            }
            for r in GLOBAL_TABLE
        ],
        "topological_classes": {r: list(gs) for r, gs in TOPO_CLASSES.items()},
        "invariants": {r: list(v) for r, v in INVARIANTS.items()},
        "coarse_classes": {
            str(k): {**v, "G": list(v["G"])} for k, v in COARSE_CLASSES.items()
        },
    }
