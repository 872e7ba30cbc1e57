"""Dual affine plane geometry over Z_d laid out as a d x (d+1) array.

Points are (m, b): row m, column b with b in {CB, 0, ..., d-1}. A line
j = (m̈, m₀) is named by its point in the CB column and its point in column
b=0; its point in column b is

    m(b) = m₀ + (b/2)(2m̈ - 1)       (b != CB)
    m(CB) = m̈
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import IO, Any, Dict, Iterable, List, Optional

from meanking.errors import IdenticalLinesError
from meanking.finitefield import DimLike, ModInt, PrimeDim, as_dim, mod_div, mod_half
from meanking.mub import (
    CB,
    BasisLabel,
    Shifted,
    all_basis_labels,
    is_cb,
    render_basis_label,
)

logger = logging.getLogger(__name__)

INCIDENCE_HEADER = ["line_mddot", "line_m0", "point_b", "point_m"]


@dataclass(frozen=True)
class Point:
    m: ModInt
    b: BasisLabel

    def __str__(self) -> str:
        return f"({self.m.value},{render_basis_label(self.b)})"


@dataclass(frozen=True)
class Line:
    m_ddot: ModInt
    m0: ModInt

    def __str__(self) -> str:
        return f"[{self.m_ddot.value},{self.m0.value}]"

    @property
    def dim(self) -> PrimeDim:
        return self.m_ddot.dim


def make_line(d: DimLike, m_ddot: int, m0: int) -> Line:
    dim = as_dim(d)
    return Line(dim.residue(m_ddot), dim.residue(m0))


def make_point(d: DimLike, m: int, b: BasisLabel) -> Point:
    return Point(as_dim(d).residue(m), b)


def line_row(j: Line, b: BasisLabel) -> ModInt:
    """Row of the line's point in column b."""
    if is_cb(b):
        return j.m_ddot
    return j.m0 + mod_half(b.b) * (2 * j.m_ddot - 1)


def line_points(d: DimLike, j: Line) -> List[Point]:
    return [Point(line_row(j, b), b) for b in all_basis_labels(d)]


def lines_through_point(d: DimLike, p: Point) -> List[Line]:
    dim = as_dim(d)
    if is_cb(p.b):
        return [Line(p.m, m0) for m0 in dim.residues()]
    half_b = mod_half(p.b.b)
    return [Line(m_ddot, p.m - half_b * (2 * m_ddot - 1)) for m_ddot in dim.residues()]


def on_line(p: Point, j: Line) -> bool:
    return line_row(j, p.b) == p.m


def intersect_lines(d: DimLike, j1: Line, j2: Line) -> Point:
    """The unique point shared by two distinct lines."""
    if j1 == j2:
        raise IdenticalLinesError(f"lines {j1} and {j2} are identical")
    if j1.m_ddot == j2.m_ddot:
        return Point(j1.m_ddot, CB)
    b = Shifted(mod_div(j1.m0 - j2.m0, j2.m_ddot - j1.m_ddot))
    return Point(line_row(j1, b), b)


def connected(d: DimLike, p: Point, q: Point) -> Optional[Line]:
    """The line through two points of distinct columns, None within a column."""
    if p.b == q.b:
        return None
    shared = set(lines_through_point(d, p)) & set(lines_through_point(d, q))
    return shared.pop() if len(shared) == 1 else None


def column_points(d: DimLike, b: BasisLabel) -> List[Point]:
    dim = as_dim(d)
    return [Point(m, b) for m in dim.residues()]


def all_points(d: DimLike) -> List[Point]:
    return [p for b in all_basis_labels(d) for p in column_points(d, b)]


def all_lines(d: DimLike) -> List[Line]:
    """Lexicographic in (m̈, m₀); position equals m̈*d + m₀."""
    dim = as_dim(d)
    return [Line(a, c) for a in dim.residues() for c in dim.residues()]


@dataclass
class AuditRecord:
    name: str
    expected: Any
    observed: Any
    passed: bool


@dataclass
class AuditReport:
    dim: int
    records: List[AuditRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, name: str, expected: Any, observed: Any) -> None:
        self.records.append(AuditRecord(name, expected, observed, expected == observed))

    def to_dicts(self) -> List[Dict[str, Any]]:
        return [asdict(r) for r in self.records]

    def to_json(self) -> str:
        return json.dumps({"dim": self.dim, "passed": self.passed, "records": self.to_dicts()})


def audit_dapg(d: DimLike) -> AuditReport:
    """Exhaustive check of the DAPG properties for this realization."""
    dim = as_dim(d)
    n = dim.d
    points, lines = all_points(dim), all_lines(dim)
    members = {j: set(line_points(dim, j)) for j in lines}
    report = AuditReport(dim=n)

    report.add("line_count", n * n, len(set(lines)))
    report.add("point_count", n * (n + 1), len(set(points)))

    sizes = {len(members[j]) for j in lines}
    report.add("points_per_line", [n + 1], sorted(sizes))
    columns_hit = {len({p.b for p in members[j]}) for j in lines}
    report.add("one_point_per_column", [n + 1], sorted(columns_hit))

    through = {p: [j for j in lines if p in members[j]] for p in points}
    report.add("lines_per_point", [n], sorted({len(v) for v in through.values()}))
    incidence_agrees = all(
        set(lines_through_point(dim, p)) == set(through[p]) for p in points
    )
    report.add("incidence_symmetry", True, incidence_agrees)

    shared_counts = {len(members[a] & members[c]) for a, c in combinations(lines, 2)}
    report.add("two_lines_share_one_point", [1], sorted(shared_counts))
    formula_agrees = all(
        {intersect_lines(dim, a, c)} == (members[a] & members[c])
        for a, c in combinations(lines, 2)
    )
    report.add("intersection_formula", True, formula_agrees)

    same_col, cross_col = set(), set()
    for p, q in combinations(points, 2):
        common = len(set(through[p]) & set(through[q]))
        (same_col if p.b == q.b else cross_col).add(common)
    report.add("same_column_points_unconnected", [0], sorted(same_col))
    report.add("two_points_determine_a_line", [1], sorted(cross_col))

    covered = sorted(len(column_points(dim, b)) for b in all_basis_labels(dim))
    report.add("columns_partition_points", [n] * (n + 1), covered)
    union = set().union(*(set(column_points(dim, b)) for b in all_basis_labels(dim)))
    report.add("columns_cover_all_points", n * (n + 1), len(union))

    logger.info("DAPG audit d=%d: %s", n, "pass" if report.passed else "FAIL")
    return report


def incidence_rows(d: DimLike) -> Iterable[List[Any]]:
    """One row per (line, point-on-line), lines lexicographic, columns CB first."""
    for j in all_lines(d):
        for p in line_points(d, j):
            yield [j.m_ddot.value, j.m0.value, render_basis_label(p.b), p.m.value]


def write_incidence_csv(d: DimLike, stream: IO[str]) -> int:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(INCIDENCE_HEADER)
    count = 0
    for row in incidence_rows(d):
        writer.writerow(row)
        count += 1
    return count
