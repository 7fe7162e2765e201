"""Diagram completion: absorb every label deficit into added source vertices.

``complete`` prepends a new level holding a single label-1 vertex and, at
each later level where some next-level vertex has positive deficiency,
appends one more label-1 vertex emitting exactly the missing number of
edges.  The completed diagram realizes every label as the number of paths
from the added set, and satisfies the label inequality with equality at
every original vertex.

Storage re-indexing: the completed diagram numbers its levels 1..N+1, one
more than the input; reports about completions conventionally subtract
``level_shift`` to speak in 0-based completion levels.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import (
    ERROR,
    NOTE,
    BratteliDiagram,
    DeficiencyVector,
    Finding,
    InvalidDiagramError,
    ValidationReport,
    VertexId,
    deficiencies,
    validate,
)


@dataclass(frozen=True)
class Completion:
    """A completed diagram plus the data describing how it was built.

    ``diagram.marks`` and ``added`` both hold the added vertices; the
    deficiency vector is the input diagram's.  ``level_shift`` records that
    stored level n corresponds to completion level n-1.
    """

    diagram: BratteliDiagram
    added: frozenset[VertexId]
    deficiency: DeficiencyVector
    level_shift: int = 1

    @property
    def num_stored_levels(self) -> int:
        return self.diagram.num_levels

    def original(self) -> BratteliDiagram:
        """The input diagram: delete the added vertices and their edges."""
        return self.diagram.without_marked()

    def added_at_stored_level(self, level: int) -> bool:
        return any(v.level == level for v in self.added)

    def last_level_has_added(self) -> bool:
        return self.added_at_stored_level(self.num_stored_levels)

    def truncate(self, max_completion_level: int) -> "Completion":
        """Keep completion levels 0..max_completion_level (stored 1..max+1).

        Incoming edges of kept vertices are untouched, so path counts from
        the added set are preserved.  An added vertex caught on the new
        last level becomes a sink; callers should flag it
        (:meth:`last_level_has_added`).
        """
        if max_completion_level < 1:
            raise ValueError("truncation must keep at least completion levels 0 and 1")
        keep = max_completion_level + 1
        if keep >= self.num_stored_levels:
            return self
        marks = frozenset(v for v in self.added if v.level <= keep)
        diagram = BratteliDiagram(
            labels=self.diagram.labels[:keep],
            adjacency=self.diagram.adjacency[: keep - 1],
            marks=marks,
        )
        return Completion(
            diagram=diagram,
            added=marks,
            deficiency=DeficiencyVector(self.deficiency.values[:max_completion_level]),
            level_shift=self.level_shift,
        )


def complete(d: BratteliDiagram) -> Completion:
    """Complete a valid diagram so every label is a path count.

    The new first level holds one label-1 vertex wired into every
    first-level vertex v with label(v) parallel edges.  For each level
    n >= 2 of the input containing a positive deficiency, one label-1
    vertex is appended to the previous stored level, emitting exactly
    deficiency(v) edges into each vertex v of level n.  Added vertices are
    always the last of their stored level and are recorded in ``marks``.
    """
    report = validate(d, relax_emission=False)
    if not report.ok:
        raise InvalidDiagramError("cannot complete an invalid diagram", report)
    deficit = deficiencies(d)
    n_in = d.num_levels

    # extra[m] is True when stored level m+1 of the completion receives an
    # added vertex; the first stored level always holds one.
    extra = [False] * (n_in + 1)
    extra[0] = True
    for n in range(2, n_in + 1):
        if any(x > 0 for x in deficit.level(n)):
            extra[n - 1] = True

    labels: list[tuple[int, ...]] = []
    marks: set[VertexId] = set()
    for m in range(n_in + 1):
        level = () if m == 0 else d.labels[m - 1]
        if extra[m]:
            marks.add(VertexId(m + 1, len(level)))
            level = level + (1,)
        labels.append(level)

    adjacency: list[tuple[tuple[int, ...], ...]] = []
    for m in range(n_in):
        # stored matrix m+1: from completion level m into level m+1
        src_original = 0 if m == 0 else d.level_size(m)
        dst_original = d.level_size(m + 1)
        dst_cols = dst_original + (1 if extra[m + 1] else 0)
        rows: list[tuple[int, ...]] = []
        for i in range(src_original):
            row = d.adjacency[m - 1][i] if m >= 1 else ()
            rows.append(tuple(row) + ((0,) if extra[m + 1] else ()))
        if extra[m]:
            added_row = tuple(deficit.level(m + 1)) + ((0,) if extra[m + 1] else ())
            rows.append(added_row)
        assert all(len(r) == dst_cols for r in rows)
        adjacency.append(tuple(rows))

    completed = BratteliDiagram(
        labels=tuple(labels), adjacency=tuple(adjacency), marks=frozenset(marks)
    )
    return Completion(diagram=completed, added=frozenset(marks), deficiency=deficit)


def is_unital(d: BratteliDiagram) -> bool:
    """True when the deficiency vanishes outside the first level.

    Exactly then the completion adds a single vertex (the new source);
    otherwise it adds at least two.
    """
    report = validate(d, relax_emission=False)
    if not report.ok:
        raise InvalidDiagramError("cannot inspect an invalid diagram", report)
    return deficiencies(d).is_zero_outside_first_level()


def completion_from_marked(d: BratteliDiagram) -> tuple[Completion | None, ValidationReport]:
    """Reconstruct a :class:`Completion` from a diagram carrying marks.

    The original diagram is defined as the unmarked restriction.  Findings
    report every way the marked diagram fails to be a genuine completion:
    no marks, marked labels != 1, marks not in canonical position (sole
    first-level vertex, last of its level elsewhere, at most one per
    level), an invalid restriction, or a restriction whose completion does
    not reproduce the input.  Returns (None, report) when reconstruction
    is impossible and otherwise (completion, report); the completion is
    trustworthy only if the report is ok.
    """
    findings: list[Finding] = []

    def err(location: str, message: str) -> None:
        findings.append(Finding(ERROR, location, message))

    base = validate(d, relax_emission=False)
    findings.extend(base.findings)
    if not base.ok:
        return None, ValidationReport(tuple(findings))
    if not d.marks:
        err("marks", "diagram has no marked vertices; not a completion")
        return None, ValidationReport(tuple(findings))

    by_level: dict[int, list[VertexId]] = {}
    for v in d.sorted_marks():
        by_level.setdefault(v.level, []).append(v)
        if d.label(v) != 1:
            err(f"mark {v}", f"added vertex must have label 1, got {d.label(v)}")
    first_level_marks = by_level.get(1, [])
    if d.level_size(1) != 1 or len(first_level_marks) != 1:
        err("level 1", "first level must consist of exactly one added vertex")
    for level, vs in sorted(by_level.items()):
        if level == 1:
            continue
        if len(vs) > 1:
            err(f"level {level}", "more than one added vertex in a level")
        for v in vs:
            if v.index != d.level_size(level) - 1:
                err(f"mark {v}", "added vertex is not the last of its level")
    if d.num_levels > 1 and by_level.get(d.num_levels):
        findings.append(last_level_added_note())

    try:
        original = d.without_marked()
    except InvalidDiagramError as exc:
        err("marks", str(exc))
        return None, ValidationReport(tuple(findings))
    original_report = validate(original, relax_emission=False)
    if not original_report.ok:
        for f in original_report.findings:
            findings.append(Finding(f.severity, f"restriction: {f.location}", f.message))
        return None, ValidationReport(tuple(findings))

    rebuilt = complete(original)
    if rebuilt.diagram != d:
        err("diagram", "completing the unmarked restriction does not reproduce the input")
    completion = Completion(
        diagram=d, added=frozenset(d.marks), deficiency=rebuilt.deficiency
    )
    return completion, ValidationReport(tuple(findings))


def last_level_added_note() -> Finding:
    """Flag for an added vertex on the final stored level, where it is a sink.

    ``complete`` never produces this; truncations and hand-made inputs can.
    """
    return Finding(
        NOTE,
        "last level",
        "final level contains an added vertex; it is a sink at this truncation",
    )
