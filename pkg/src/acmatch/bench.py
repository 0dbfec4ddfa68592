"""One-to-one versus many-to-one timing harness with break-even analysis."""
from __future__ import annotations

import csv
import io
import math
import random
import time
from dataclasses import dataclass, field
from statistics import mean
from typing import Callable, Hashable, Iterable, List, Optional, Sequence

from .discrimination import ManyToOneMatcher
from .one_to_one import match_root
from .parsing import ProblemFile
from .patterns import Pattern
from .terms import Term

__all__ = ["BenchRow", "BenchReport", "break_even", "run_bench", "CSV_HEADER"]

CSV_HEADER = ("size", "setup_ms_m1", "match_ms_11", "match_ms_m1", "speedup", "break_even", "states")


def break_even(setup: float, one_to_one: float, many_to_one: float) -> Optional[int]:
    """Smallest subject count ``n`` with ``n * one_to_one >= n * many_to_one + setup``.

    None when many-to-one matching is never cheaper per subject.
    """
    gain = one_to_one - many_to_one
    if gain <= 0:
        return None
    return max(1, math.ceil(setup / gain))


@dataclass
class BenchRow:
    size: int
    setup_ms: float
    match_ms_one_to_one: float
    match_ms_many_to_one: float
    states: float

    @property
    def speedup(self) -> float:
        if self.match_ms_many_to_one <= 0:
            return math.inf
        return self.match_ms_one_to_one / self.match_ms_many_to_one

    @property
    def break_even(self) -> Optional[int]:
        return break_even(self.setup_ms, self.match_ms_one_to_one, self.match_ms_many_to_one)

    def as_csv(self) -> List[str]:
        be = self.break_even
        return [
            str(self.size),
            f"{self.setup_ms:.4f}",
            f"{self.match_ms_one_to_one:.4f}",
            f"{self.match_ms_many_to_one:.4f}",
            f"{self.speedup:.4f}",
            "unreachable" if be is None else str(be),
            f"{self.states:g}",
        ]


@dataclass
class BenchReport:
    rows: List[BenchRow] = field(default_factory=list)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            writer.writerow(row.as_csv())
        return buf.getvalue()

    def write_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())


def _one_to_one(subject: Term, patterns: Sequence[Pattern]) -> int:
    return sum(1 for p in patterns for _ in match_root(subject, p))


def _many_to_one(patterns: Sequence[Pattern]) -> ManyToOneMatcher:
    return ManyToOneMatcher(patterns).freeze()


def run_bench(
    problem: ProblemFile,
    sizes: Optional[Iterable[int]] = None,
    repetitions: int = 3,
    seed: int = 0,
    subjects: Optional[Sequence[Term]] = None,
    one_to_one: Callable[[Term, Sequence[Pattern]], object] = _one_to_one,
    many_to_one: Callable[[Sequence[Pattern]], object] = _many_to_one,
    clock: Callable[[], float] = time.perf_counter,
) -> BenchReport:
    """Time both strategies on random pattern subsets of each size.

    Every repetition draws a fresh subset, builds the net (setup time) and
    matches every subject with both strategies, consuming all matches.
    Reported match times are per subject, averaged over subjects and
    repetitions.  ``many_to_one`` builds an object with a ``match`` method;
    ``states`` is its ``state_count`` when it has one.  One warm-up iteration
    on the first subject is discarded.
    """
    patterns: List[Pattern] = list(problem.patterns.values())
    ids: List[Hashable] = list(problem.patterns)
    subjects = list(problem.subjects.values() if subjects is None else subjects)
    if not patterns or not subjects:
        raise ValueError("the benchmark needs patterns and subjects")
    if sizes is None:
        sizes = list(range(10, len(patterns), 10)) or [len(patterns)]
    rng = random.Random(seed)
    report = BenchReport()
    warm = many_to_one(patterns)
    list(warm.match(subjects[0]))
    one_to_one(subjects[0], patterns)
    for size in sizes:
        size = min(size, len(patterns))
        setup, t11, tm1, states = [], [], [], []
        for _ in range(repetitions):
            chosen = sorted(rng.sample(range(len(patterns)), size))
            subset = [_with_id(patterns[i], ids[i]) for i in chosen]
            start = clock()
            matcher = many_to_one(subset)
            setup.append(clock() - start)
            states.append(getattr(matcher, "state_count", 0))
            for s in subjects:
                start = clock()
                one_to_one(s, subset)
                t11.append(clock() - start)
                start = clock()
                for _ in matcher.match(s):
                    pass
                tm1.append(clock() - start)
        report.rows.append(
            BenchRow(size, 1000 * mean(setup), 1000 * mean(t11), 1000 * mean(tm1), mean(states))
        )
    return report


def _with_id(p: Pattern, pid: Hashable) -> Pattern:
    return p if p.id == pid else Pattern(p.term, p.global_guards, p.local_guards, id=pid)
