"""Core data model: labelled Bratteli diagrams and their validation.

A diagram is a leveled multigraph: each level carries a list of positive
integer vertex labels, and consecutive levels are connected by a
nonnegative integer multiplicity matrix.  Edges are stored as counts; an
individual parallel edge is addressed as (level, source index, target
index, copy number).

All arithmetic is arbitrary-precision Python integer; no floats anywhere.
Every value in this module is immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

ERROR = "error"
WARNING = "warning"
NOTE = "note"


@dataclass(frozen=True, order=True)
class VertexId:
    """Position of a vertex: 1-based level, 0-based index within the level."""

    level: int
    index: int

    def __str__(self) -> str:
        return f"({self.level},{self.index})"


@dataclass(frozen=True, order=True)
class Edge:
    """One parallel edge from vertex (level, src) to vertex (level+1, dst).

    ``copy`` distinguishes parallel edges; it ranges over
    0..multiplicity-1 for the (src, dst) slot.
    """

    level: int
    src: int
    dst: int
    copy: int

    @property
    def source(self) -> VertexId:
        return VertexId(self.level, self.src)

    @property
    def target(self) -> VertexId:
        return VertexId(self.level + 1, self.dst)

    def __str__(self) -> str:
        return f"({self.level},{self.src})->({self.level + 1},{self.dst})#{self.copy}"


@dataclass(frozen=True)
class Finding:
    severity: str  # error | warning | note
    location: str
    message: str

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "location": self.location,
            "message": self.message,
        }


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a structural or algebraic check.

    ``ok`` holds exactly when no finding has severity ``error``; warnings
    and notes do not fail a report.
    """

    findings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return all(f.severity != ERROR for f in self.findings)

    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == ERROR)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "findings": [f.to_dict() for f in self.findings]}

    @staticmethod
    def merged(*reports: "ValidationReport") -> "ValidationReport":
        findings: list[Finding] = []
        for r in reports:
            findings.extend(r.findings)
        return ValidationReport(tuple(findings))


class InvalidDiagramError(ValueError):
    """Raised when an operation requires a valid diagram and gets none."""

    def __init__(self, message: str, report: ValidationReport | None = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class BratteliDiagram:
    """Leveled labelled multigraph.

    labels[n-1] lists the labels of level n (1-based levels); adjacency[n-1]
    is the |V_n| x |V_{n+1}| multiplicity matrix.  ``marks`` distinguishes a
    (possibly empty) set of vertices; a completion records its added source
    vertices there, so completed diagrams are self-describing.

    Construction does not validate; use :func:`validate` to get a report.
    """

    labels: tuple[tuple[int, ...], ...]
    adjacency: tuple[tuple[tuple[int, ...], ...], ...]
    marks: frozenset[VertexId] = frozenset()

    @staticmethod
    def from_lists(
        labels: Iterable[Iterable[int]],
        adjacency: Iterable[Iterable[Iterable[int]]] = (),
        marks: Iterable[VertexId] = (),
    ) -> "BratteliDiagram":
        return BratteliDiagram(
            labels=tuple(tuple(level) for level in labels),
            adjacency=tuple(tuple(tuple(row) for row in m) for m in adjacency),
            marks=frozenset(marks),
        )

    @property
    def num_levels(self) -> int:
        return len(self.labels)

    def level_size(self, level: int) -> int:
        return len(self.labels[level - 1])

    def label(self, v: VertexId) -> int:
        return self.labels[v.level - 1][v.index]

    def vertices(self) -> Iterator[VertexId]:
        """All vertices in canonical (level, index) order."""
        for n, level in enumerate(self.labels, start=1):
            for i in range(len(level)):
                yield VertexId(n, i)

    def level_vertices(self, level: int) -> Iterator[VertexId]:
        for i in range(self.level_size(level)):
            yield VertexId(level, i)

    def sorted_marks(self) -> tuple[VertexId, ...]:
        return tuple(sorted(self.marks))

    def unmarked_vertices(self) -> Iterator[VertexId]:
        for v in self.vertices():
            if v not in self.marks:
                yield v

    def in_range(self, v: VertexId) -> bool:
        return 1 <= v.level <= self.num_levels and 0 <= v.index < self.level_size(v.level)

    def multiplicity_entry(self, v: VertexId, w: VertexId) -> int:
        """Number of edges from v to w; requires w.level == v.level + 1."""
        if w.level != v.level + 1:
            raise ValueError(f"vertices {v} and {w} are not on adjacent levels")
        if not (self.in_range(v) and self.in_range(w)):
            raise ValueError(f"vertex out of range: {v} or {w}")
        return self.adjacency[v.level - 1][v.index][w.index]

    def out_edges(self, v: VertexId) -> Iterator[Edge]:
        if v.level >= self.num_levels:
            return
        row = self.adjacency[v.level - 1][v.index]
        for dst, mult in enumerate(row):
            for copy in range(mult):
                yield Edge(v.level, v.index, dst, copy)

    def in_edges(self, v: VertexId) -> Iterator[Edge]:
        if v.level <= 1:
            return
        matrix = self.adjacency[v.level - 2]
        for src, row in enumerate(matrix):
            for copy in range(row[v.index]):
                yield Edge(v.level - 1, src, v.index, copy)

    def is_sink(self, v: VertexId) -> bool:
        """True when v emits no edge (always true on the last level)."""
        if v.level >= self.num_levels:
            return True
        return all(m == 0 for m in self.adjacency[v.level - 1][v.index])

    def sinks(self) -> tuple[VertexId, ...]:
        return tuple(v for v in self.vertices() if self.is_sink(v))

    def without_marked(self) -> "BratteliDiagram":
        """Delete every marked vertex and its edges, renumbering levels.

        Levels left empty by the deletion must form a prefix of the level
        list (the usual case: a completion's first level holds only the
        added source vertex).  An empty level elsewhere has no meaning for
        the remaining adjacency data and raises.
        """
        kept: list[list[int]] = [
            [i for i in range(self.level_size(n)) if VertexId(n, i) not in self.marks]
            for n in range(1, self.num_levels + 1)
        ]
        first_kept = 0
        while first_kept < len(kept) and not kept[first_kept]:
            first_kept += 1
        if any(not k for k in kept[first_kept:]):
            raise InvalidDiagramError("deleting marks would empty a non-leading level")
        labels = tuple(
            tuple(self.labels[n][i] for i in kept[n])
            for n in range(first_kept, self.num_levels)
        )
        adjacency = tuple(
            tuple(tuple(self.adjacency[n][i][j] for j in kept[n + 1]) for i in kept[n])
            for n in range(first_kept, self.num_levels - 1)
        )
        return BratteliDiagram(labels=labels, adjacency=adjacency, marks=frozenset())


@dataclass(frozen=True)
class DeficiencyVector:
    """Per-vertex slack of the label inequality.

    The entry at v is label(v) minus the label-weighted count of incoming
    edges; first-level vertices have no incoming edges, so their entry is
    the label itself.  Nonnegative exactly when the diagram satisfies the
    label inequality.
    """

    values: tuple[tuple[int, ...], ...]

    def __getitem__(self, v: VertexId) -> int:
        return self.values[v.level - 1][v.index]

    def level(self, level: int) -> tuple[int, ...]:
        return self.values[level - 1]

    def is_zero_outside_first_level(self) -> bool:
        return all(x == 0 for level in self.values[1:] for x in level)

    def levels_with_positive_entry(self) -> tuple[int, ...]:
        """1-based levels containing at least one positive entry."""
        return tuple(
            n for n, level in enumerate(self.values, start=1) if any(x > 0 for x in level)
        )


def validate(d: BratteliDiagram, relax_emission: bool = False) -> ValidationReport:
    """Check every diagram invariant and report all violations.

    Checks, in order: at least one nonempty level, positive integer labels,
    adjacency matrix shapes, nonnegative integer entries, the label
    inequality (each label dominates the label-weighted incoming edge
    count), the emission requirement (no sink before the last level,
    downgraded to a note under ``relax_emission``), and mark ranges.
    Shape problems are error findings, never exceptions; arithmetic checks
    that depend on a broken shape are skipped.
    """
    findings: list[Finding] = []

    def err(location: str, message: str) -> None:
        findings.append(Finding(ERROR, location, message))

    if d.num_levels < 1:
        err("diagram", "diagram must have at least one level")
        return ValidationReport(tuple(findings))

    for n, level in enumerate(d.labels, start=1):
        if len(level) == 0:
            err(f"level {n}", "level is empty")
        for i, label in enumerate(level):
            if not isinstance(label, int) or isinstance(label, bool) or label < 1:
                err(f"level {n}, vertex {i}", f"label must be a positive integer, got {label!r}")

    shapes_ok = [True] * max(d.num_levels - 1, 0)
    if len(d.adjacency) != d.num_levels - 1:
        err(
            "adjacency",
            f"expected {d.num_levels - 1} matrices, got {len(d.adjacency)}",
        )
        shapes_ok = [False] * max(d.num_levels - 1, 0)
    else:
        for n, matrix in enumerate(d.adjacency, start=1):
            rows, cols = d.level_size(n), d.level_size(n + 1)
            if len(matrix) != rows:
                err(f"matrix {n}", f"expected {rows} rows, got {len(matrix)}")
                shapes_ok[n - 1] = False
                continue
            for i, row in enumerate(matrix):
                if len(row) != cols:
                    err(f"matrix {n}, row {i}", f"expected {cols} entries, got {len(row)}")
                    shapes_ok[n - 1] = False
                    continue
                for j, m in enumerate(row):
                    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
                        err(
                            f"matrix {n}[{i}][{j}]",
                            f"multiplicity must be a nonnegative integer, got {m!r}",
                        )
                        shapes_ok[n - 1] = False

    for n in range(2, d.num_levels + 1):
        if not shapes_ok[n - 2]:
            continue
        matrix = d.adjacency[n - 2]
        for j in range(d.level_size(n)):
            incoming = sum(matrix[i][j] * d.labels[n - 2][i] for i in range(d.level_size(n - 1)))
            label = d.labels[n - 1][j]
            if isinstance(label, int) and not isinstance(label, bool) and label < incoming:
                err(
                    f"level {n}, vertex {j}",
                    f"label {label} is smaller than the incoming label sum {incoming}",
                )

    for n in range(1, d.num_levels):
        if not shapes_ok[n - 1]:
            continue
        for i in range(d.level_size(n)):
            if all(m == 0 for m in d.adjacency[n - 1][i]):
                if relax_emission:
                    findings.append(
                        Finding(NOTE, f"level {n}, vertex {i}", "sink before the last level (allowed by flag)")
                    )
                else:
                    err(f"level {n}, vertex {i}", "vertex emits no edge before the last level")

    for v in sorted(d.marks):
        if not d.in_range(v):
            err(f"mark {v}", "marked vertex out of range")

    return ValidationReport(tuple(findings))


def deficiencies(d: BratteliDiagram) -> DeficiencyVector:
    """Exact label slack for every vertex.

    Raises :class:`InvalidDiagramError` when the diagram fails structural
    or label validation (emission is irrelevant here and not required), so
    the returned values are always nonnegative.
    """
    report = validate(d, relax_emission=True)
    if not report.ok:
        raise InvalidDiagramError("cannot compute deficiencies of an invalid diagram", report)
    values: list[tuple[int, ...]] = [tuple(d.labels[0])]
    for n in range(2, d.num_levels + 1):
        matrix = d.adjacency[n - 2]
        level = []
        for j in range(d.level_size(n)):
            incoming = sum(matrix[i][j] * d.labels[n - 2][i] for i in range(d.level_size(n - 1)))
            level.append(d.labels[n - 1][j] - incoming)
        values.append(tuple(level))
    return DeficiencyVector(tuple(values))
