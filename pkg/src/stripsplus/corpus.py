"""Registry of the bundled corpus: file locations and the per-domain run
parameters (trace length, verification pair count, dropped predicates)."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, Optional, Tuple

from .model import Domain, Problem
from .pddl_io import parse_domain, parse_problem


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    base: str                 # file prefix (shared by the dropped variants)
    length: int               # learning-trace steps
    pairs: int                # verification (state, action) comparisons
    drops: Tuple[str, ...] = ()
    stretch: bool = False
    # expected Table-style checkpoints on the bundled encodings, when pinned
    expect_x_prime: Optional[int] = None
    expect_x: Optional[int] = None
    expect_z: Optional[int] = None
    expect_z_extra: Optional[int] = None


CORPUS: Dict[str, CorpusEntry] = {e.name: e for e in [
    CorpusEntry("blocks3", "blocks3", length=250, pairs=1200,
                expect_x_prime=7, expect_x=5, expect_z=2),
    CorpusEntry("blocks4", "blocks4", length=250, pairs=1600,
                expect_x_prime=6, expect_x=3, expect_z=3),
    CorpusEntry("ferry", "ferry", length=100, pairs=1200,
                expect_x_prime=6, expect_x=2, expect_z=4),
    CorpusEntry("gripper", "gripper", length=500, pairs=1000,
                expect_x_prime=8, expect_x=3, expect_z=8, expect_z_extra=3),
    CorpusEntry("hanoi", "hanoi", length=200, pairs=400,
                expect_x_prime=3, expect_x=2, expect_z=1),
    CorpusEntry("miconic", "miconic", length=600, pairs=1600,
                expect_x_prime=8, expect_x=2, expect_z=6),
    CorpusEntry("cpuzzle", "cpuzzle", length=500, pairs=1600,
                expect_x_prime=12, expect_x=0, expect_z=12),
    CorpusEntry("sokoban", "sokoban", length=1000, pairs=800,
                expect_x_prime=5, expect_x=2, expect_z=3),
    CorpusEntry("sokopull", "sokopull", length=600, pairs=1200,
                expect_x_prime=8, expect_x=3, expect_z=5),
    CorpusEntry("blocks3-drop", "blocks3", length=250, pairs=1200,
                drops=("on_table", "clear")),
    CorpusEntry("ferry-drop", "ferry", length=100, pairs=1200, drops=("on",)),
    CorpusEntry("miconic-drop", "miconic", length=600, pairs=1600,
                drops=("in_lift",)),
    CorpusEntry("cpuzzle-drop", "cpuzzle", length=500, pairs=1600,
                drops=("blank",)),
    CorpusEntry("delivery", "delivery", length=1000, pairs=1200, stretch=True),
    CorpusEntry("logistics", "logistics", length=1000, pairs=1600, stretch=True),
    CorpusEntry("grid", "grid", length=10000, pairs=2000, stretch=True),
    CorpusEntry("driverlog", "driverlog", length=10000, pairs=2400, stretch=True),
    CorpusEntry("npuzzle", "npuzzle", length=1000, pairs=1600, stretch=True),
]}


def corpus_path(filename: str) -> Path:
    return Path(resources.files("stripsplus") / "corpus" / filename)


def load_entry(name: str) -> Tuple[CorpusEntry, Domain, Problem, Problem]:
    """(entry, STRIPS domain, training problem, verification problem)."""
    entry = CORPUS[name]
    domain = parse_domain(corpus_path(f"{entry.base}-domain.pddl").read_text())
    train = parse_problem(corpus_path(f"{entry.base}-train.pddl").read_text(),
                          domain)
    ver = parse_problem(corpus_path(f"{entry.base}-verify.pddl").read_text(),
                        domain)
    return entry, domain, train, ver
