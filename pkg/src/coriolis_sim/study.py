"""Study-design toolkit: GPA-balanced group partitioning and paired quiz reports.

Groups are balanced so that every group's mean GPA and GPA variance
(population variance: average squared deviation from the mean) track the
roster-wide values.  Small instances are solved exactly by enumerating all
equal-size partitions; larger ones fall back to a deterministic multi-restart
swap descent.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass
from typing import Mapping, Sequence


class StudyError(ValueError):
    pass


class IncompleteDataError(StudyError):
    pass


class UndefinedDeltaError(StudyError):
    pass


EXACT_SEARCH_LIMIT = 1_000_000
HEURISTIC_RESTARTS = 32


@dataclass(frozen=True)
class StudentRecord:
    id: str
    gpa: float
    quiz_score: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.gpa <= 4.3):
            raise StudyError(f"gpa out of range for {self.id}: {self.gpa}")
        if self.quiz_score is not None and self.quiz_score < 0:
            raise StudyError(f"negative quiz score for {self.id}")


@dataclass(frozen=True)
class GroupAssignment:
    groups: tuple[tuple[StudentRecord, ...], ...]
    means: tuple[float, ...]
    variances: tuple[float, ...]
    objective: float
    method: str  # "exact" or "heuristic"


@dataclass(frozen=True)
class PairSpec:
    pair_id: str
    control_group: str
    experimental_group: str
    independent_variable: str = ""
    dependent_variable: str = "Quiz Score"

    def __post_init__(self) -> None:
        if self.control_group == self.experimental_group:
            raise StudyError(f"pair {self.pair_id}: control equals experimental")


def mean(xs: Sequence[float]) -> float:
    return sum(xs) / len(xs)


def pop_variance(xs: Sequence[float]) -> float:
    m = mean(xs)
    return sum((x - m) ** 2 for x in xs) / len(xs)


def partition_count(n: int, k: int) -> int:
    """Number of unordered partitions of n items into k equal groups."""
    size = n // k
    count = math.factorial(n) // (math.factorial(size) ** k * math.factorial(k))
    return count


def _objective(groups: Sequence[Sequence[StudentRecord]], mean_all: float,
               var_all: float, mean_weight: float, var_weight: float) -> float:
    j = 0.0
    for g in groups:
        gpas = [s.gpa for s in g]
        j += mean_weight * (mean(gpas) - mean_all) ** 2
        j += var_weight * (pop_variance(gpas) - var_all) ** 2
    return j


def _canonical_key(groups: Sequence[Sequence[StudentRecord]]):
    return tuple(sorted(tuple(sorted(s.id for s in g)) for g in groups))


def _finalize(roster_groups, mean_all, var_all, mean_weight, var_weight, method):
    # deterministic presentation: groups ordered by their sorted member ids
    groups = tuple(
        tuple(sorted(g, key=lambda s: s.id))
        for g in sorted(roster_groups, key=lambda g: sorted(s.id for s in g))
    )
    means = tuple(mean([s.gpa for s in g]) for g in groups)
    variances = tuple(pop_variance([s.gpa for s in g]) for g in groups)
    return GroupAssignment(
        groups=groups,
        means=means,
        variances=variances,
        objective=_objective(groups, mean_all, var_all, mean_weight, var_weight),
        method=method,
    )


def brute_force_partition(roster: Sequence[StudentRecord], k: int,
                          mean_weight: float = 1.0, var_weight: float = 1.0):
    """Exhaustive search over all unordered equal partitions; returns (groups, J)."""
    n = len(roster)
    size = n // k
    mean_all = mean([s.gpa for s in roster])
    var_all = pop_variance([s.gpa for s in roster])
    best = None

    groups: list[list[StudentRecord]] = [[] for _ in range(k)]

    def place(idx: int):
        nonlocal best
        if idx == n:
            j = _objective(groups, mean_all, var_all, mean_weight, var_weight)
            key = _canonical_key(groups)
            if best is None or (j, key) < (best[1], best[2]):
                best = ([list(g) for g in groups], j, key)
            return
        student = roster[idx]
        seen_empty = False
        for g in groups:
            if len(g) >= size:
                continue
            if not g:
                if seen_empty:
                    continue  # empty groups are interchangeable
                seen_empty = True
            g.append(student)
            place(idx + 1)
            g.pop()

    place(0)
    assert best is not None
    return best[0], best[1]


def _swap_descent(groups: list[list[StudentRecord]], mean_all, var_all,
                  mean_weight, var_weight) -> float:
    j = _objective(groups, mean_all, var_all, mean_weight, var_weight)
    improved = True
    while improved:
        improved = False
        best_move = None
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                for i in range(len(groups[a])):
                    for m in range(len(groups[b])):
                        groups[a][i], groups[b][m] = groups[b][m], groups[a][i]
                        jj = _objective(groups, mean_all, var_all, mean_weight, var_weight)
                        groups[a][i], groups[b][m] = groups[b][m], groups[a][i]
                        if jj < j - 1e-15:
                            if best_move is None or jj < best_move[0]:
                                best_move = (jj, a, b, i, m)
        if best_move is not None:
            jj, a, b, i, m = best_move
            groups[a][i], groups[b][m] = groups[b][m], groups[a][i]
            j = jj
            improved = True
    return j


def balance_groups(roster: Sequence[StudentRecord], k: int,
                   mean_weight: float = 1.0, var_weight: float = 1.0) -> GroupAssignment:
    """Partition the roster into k equal groups minimizing the mean/variance objective."""
    if k < 2:
        raise StudyError(f"k must be >= 2, got {k}")
    n = len(roster)
    if n == 0 or n % k != 0:
        raise StudyError(f"roster size {n} not divisible into {k} equal groups")
    ids = [s.id for s in roster]
    if len(set(ids)) != n:
        raise StudyError("duplicate student ids in roster")
    mean_all = mean([s.gpa for s in roster])
    var_all = pop_variance([s.gpa for s in roster])

    if partition_count(n, k) <= EXACT_SEARCH_LIMIT:
        groups, _ = brute_force_partition(roster, k, mean_weight, var_weight)
        return _finalize(groups, mean_all, var_all, mean_weight, var_weight, "exact")

    size = n // k
    best = None
    for restart in range(HEURISTIC_RESTARTS):
        if restart == 0:
            # snake seed over GPA-sorted roster balances group means well
            ordered = sorted(roster, key=lambda s: (-s.gpa, s.id))
        else:
            ordered = list(roster)
            random.Random(restart).shuffle(ordered)
        groups = [[] for _ in range(k)]
        for i, s in enumerate(ordered):
            lap, pos = divmod(i, k)
            g = pos if lap % 2 == 0 else k - 1 - pos
            groups[g].append(s)
        assert all(len(g) == size for g in groups)
        j = _swap_descent(groups, mean_all, var_all, mean_weight, var_weight)
        key = _canonical_key(groups)
        if best is None or (j, key) < (best[1], best[2]):
            best = ([list(g) for g in groups], j, key)
    return _finalize(best[0], mean_all, var_all, mean_weight, var_weight, "heuristic")


def combined_score(group: Sequence[StudentRecord]) -> float:
    """Sum of the members' quiz scores (group sizes are equal, so sum is canonical)."""
    if not group:
        raise IncompleteDataError("cannot combine scores of an empty group")
    total = 0.0
    for s in group:
        if s.quiz_score is None:
            raise IncompleteDataError(f"student {s.id} has no quiz score")
        total += s.quiz_score
    return total


def mean_score(group: Sequence[StudentRecord]) -> float:
    return combined_score(group) / len(group)


def pair_delta(pair: PairSpec, groups: Mapping[str, Sequence[StudentRecord]]) -> float:
    """Percent change of the experimental group's combined score over control."""
    try:
        control = groups[pair.control_group]
        experimental = groups[pair.experimental_group]
    except KeyError as exc:
        raise StudyError(f"pair {pair.pair_id} references unknown group {exc}") from exc
    cc = combined_score(control)
    ce = combined_score(experimental)
    if cc == 0.0:
        raise UndefinedDeltaError(f"pair {pair.pair_id}: control combined score is zero")
    return 100.0 * (ce - cc) / cc


@dataclass(frozen=True)
class ReportRow:
    pair_id: str
    control_group: str
    experimental_group: str
    independent_variable: str
    delta_percent: float


@dataclass(frozen=True)
class Report:
    rows: tuple[ReportRow, ...]
    group_stats: tuple[tuple[str, float, float, float], ...]  # name, gpa mean, gpa var, combined

    def to_text(self) -> str:
        headers = ("pair_id", "control", "experimental", "independent_variable", "delta_%")
        cells = [headers] + [
            (r.pair_id, r.control_group, r.experimental_group,
             r.independent_variable, f"{r.delta_percent:+.2f}")
            for r in self.rows
        ]
        widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
        lines.append("")
        lines.append("group  gpa_mean  gpa_var  combined_score")
        for name, gm, gv, cs in self.group_stats:
            lines.append(f"{name:<5}  {gm:8.4f}  {gv:7.4f}  {cs:14.2f}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["pair_id", "control", "experimental", "independent_variable", "delta_percent"])
        for r in self.rows:
            writer.writerow([r.pair_id, r.control_group, r.experimental_group,
                             r.independent_variable, repr(r.delta_percent)])
        return buf.getvalue()


def report(groups: Mapping[str, Sequence[StudentRecord]],
           pairs: Sequence[PairSpec]) -> Report:
    """One row per pair, in the given pair order, plus per-group statistics.

    Rows keep the caller's pair order (the canonical experiment table is not
    alphabetical); the input order is deterministic and is preserved.
    """
    rows = tuple(
        ReportRow(
            pair_id=p.pair_id,
            control_group=p.control_group,
            experimental_group=p.experimental_group,
            independent_variable=p.independent_variable,
            delta_percent=pair_delta(p, groups),
        )
        for p in pairs
    )
    stats = tuple(
        (name, mean([s.gpa for s in g]), pop_variance([s.gpa for s in g]), combined_score(g))
        for name, g in groups.items()
    )
    return Report(rows=rows, group_stats=stats)


def assignment_groups(assignment: GroupAssignment) -> dict[str, tuple[StudentRecord, ...]]:
    """Name the assignment's groups G1..Gk for pair references."""
    return {f"G{i + 1}": g for i, g in enumerate(assignment.groups)}


def load_roster(path: str) -> list[StudentRecord]:
    """Read an id,gpa[,quiz_score] CSV roster."""
    roster = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or not any(cell.strip() for cell in row):
                continue
            if lineno == 1 and row[0].strip().lower() == "id":
                continue
            if len(row) not in (2, 3):
                raise StudyError(f"{path}:{lineno}: expected id,gpa[,quiz_score]")
            try:
                score = float(row[2]) if len(row) == 3 and row[2].strip() else None
                roster.append(StudentRecord(id=row[0].strip(), gpa=float(row[1]), quiz_score=score))
            except ValueError as exc:
                raise StudyError(f"{path}:{lineno}: {exc}") from exc
    return roster


def load_pairs(path: str) -> list[PairSpec]:
    """Read a pair_id,control,experimental,independent_variable file."""
    pairs = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or not any(cell.strip() for cell in row):
                continue
            if lineno == 1 and row[0].strip().lower() == "pair_id":
                continue
            if len(row) < 3:
                raise StudyError(f"{path}:{lineno}: expected pair_id,control,experimental[,variable]")
            pairs.append(PairSpec(
                pair_id=row[0].strip(),
                control_group=row[1].strip(),
                experimental_group=row[2].strip(),
                independent_variable=row[3].strip() if len(row) > 3 else "",
            ))
    return pairs
