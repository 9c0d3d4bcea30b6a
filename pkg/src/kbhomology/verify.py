"""Randomized invariance suites shared by the CLI and the tests."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .diagram import OrientedDiagram, random_braid, reorder
from .framedcube import framed_homology
from .moves import Move, apply_move, move_sites
from .oriented import oriented_homology

MOVE_NAMES = {"r1+": Move.R1_PLUS, "r1-": Move.R1_MINUS, "r2": Move.R2, "r3": Move.R3}
ALL_CHECKS = ("r1+", "r1-", "r2", "r3", "reorder")


@dataclass
class Trial:
    check: str
    before: str
    after: str
    framed_ok: bool
    oriented_ok: bool

    @property
    def ok(self) -> bool:
        return self.framed_ok and self.oriented_ok


@dataclass
class SuiteResult:
    trials: list[Trial] = field(default_factory=list)
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return all(t.ok for t in self.trials)

    def count(self, check: str) -> int:
        return sum(1 for t in self.trials if t.check == check)

    def failures(self) -> list[Trial]:
        return [t for t in self.trials if not t.ok]


def sample_pair(rng: random.Random, check: str, max_crossings: int, attempts: int = 200):
    """A random braid closure and its image under ``check``, both within ``max_crossings``."""
    growth = {"r1+": 1, "r1-": 1, "r2": 2}.get(check, 0)
    for _ in range(attempts):
        od = random_braid(rng, max(1, max_crossings - growth), max_strands=4)
        if check == "reorder":
            perm = list(range(od.n))
            rng.shuffle(perm)
            return od, reorder(od, perm)
        sites = move_sites(od, MOVE_NAMES[check])
        if sites:
            return od, apply_move(od, MOVE_NAMES[check], sites[rng.randrange(len(sites))])
    return None


def run_trial(od: OrientedDiagram, new: OrientedDiagram, check: str) -> Trial:
    hf_old, hf_new = framed_homology(od.diagram), framed_homology(new.diagram)
    if check in ("r1+", "r1-"):
        expected = hf_old.reflex().shift(3 if check == "r1+" else -3)
    else:
        expected = hf_old
    oriented_ok = oriented_homology(new) == oriented_homology(od)
    return Trial(check, od.to_pd(), new.to_pd(), hf_new == expected, oriented_ok)


def run_suite(checks, trials: int, max_crossings: int, seed: int) -> SuiteResult:
    """``trials`` random applications of every check, reproducible from ``seed``."""
    rng = random.Random(seed)
    result = SuiteResult()
    for check in checks:
        if check not in ALL_CHECKS:
            raise ValueError(f"unknown check {check!r}; choose from {', '.join(ALL_CHECKS)}")
        for _ in range(trials):
            pair = sample_pair(rng, check, max_crossings)
            if pair is None:
                result.skipped += 1
                continue
            result.trials.append(run_trial(*pair, check))
    return result
