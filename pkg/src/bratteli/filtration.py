"""Block-dimension bookkeeping for the nested finite stages of a completion.

Stage n of the original diagram is a direct sum of square blocks, one per
level-n vertex, with ranks given by the labels.  The completion inserts,
at each level that received an added vertex, one extra rank-1 block (the
complement of the stage unit in the next stage).  These vectors are all
this module materializes; the heavy algebraic content lives in
``representation`` and is only summarized here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .completion import Completion
from .diagram import ERROR, Finding, ValidationReport, VertexId, validate


@dataclass(frozen=True)
class FiltrationLevel:
    """Block ranks at one completion level (0-based numbering).

    ``stage_dims`` lists the original labels of the level (empty at level
    0, which the original diagram does not have); ``augmented_dims``
    appends the rank-1 block when the completion added a vertex there.
    The final level of a finite diagram has no following stage, so its
    augmented vector is defined equal to its stage vector and flagged.
    """

    level: int
    stage_dims: tuple[int, ...]
    augmented_dims: tuple[int, ...]
    has_extra_block: bool
    is_last: bool

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "stage_dims": list(self.stage_dims),
            "augmented_dims": list(self.augmented_dims),
            "has_extra_block": self.has_extra_block,
            "is_last": self.is_last,
        }


def filtration_dims(c: Completion) -> tuple[FiltrationLevel, ...]:
    """Stage and augmented block ranks for every completion level."""
    if not c.added:
        raise ValueError("not a completion: no added vertices recorded")
    d = c.diagram
    levels: list[FiltrationLevel] = []
    last = d.num_levels - 1  # completion numbering
    for level in range(d.num_levels):
        stored = level + c.level_shift
        stage = tuple(
            d.label(v) for v in d.level_vertices(stored) if v not in c.added
        )
        extra = c.added_at_stored_level(stored)
        if level == last:
            augmented = stage
            extra_counts = extra  # an added sink here is a truncation artifact
            levels.append(FiltrationLevel(level, stage, augmented, extra_counts, True))
        else:
            augmented = stage + ((1,) if extra else ())
            levels.append(FiltrationLevel(level, stage, augmented, extra, False))
    return tuple(levels)


def verify_filtration(c: Completion) -> ValidationReport:
    """Check that the completed diagram records the nested-stage data.

    Three exact checks: the completed diagram is valid; the label of every
    non-added vertex beyond the first level equals the label-weighted
    count of its incoming edges (the added edges absorb the whole
    deficit, making consecutive stages fit unitally); and between
    consecutive levels the adjacency restricted to non-added vertices
    equals the original diagram's matrix, so embedding multiplicities are
    untouched by the completion.
    """
    d = c.diagram
    findings: list[Finding] = list(validate(d, relax_emission=False).findings)

    def fail(location: str, message: str) -> None:
        findings.append(Finding(ERROR, location, message))

    for v in d.vertices():
        if v in c.added or v.level == 1:
            continue
        incoming = sum(d.label(e.source) for e in d.in_edges(v))
        if incoming != d.label(v):
            fail(
                f"vertex ({v.level - c.level_shift},{v.index})",
                f"label {d.label(v)} differs from incoming label sum {incoming}",
            )

    try:
        original = c.original()
    except Exception as exc:
        fail("restriction", str(exc))
        return ValidationReport(tuple(findings))
    if original.num_levels != d.num_levels - 1:
        fail("levels", "restriction does not drop exactly the added first level")
    else:
        for n in range(1, original.num_levels):
            kept_src = [
                i
                for i in range(d.level_size(n + 1))
                if VertexId(n + 1, i) not in c.added
            ]
            kept_dst = [
                j
                for j in range(d.level_size(n + 2))
                if VertexId(n + 2, j) not in c.added
            ]
            for a, i in enumerate(kept_src):
                for b, j in enumerate(kept_dst):
                    if d.adjacency[n][i][j] != original.adjacency[n - 1][a][b]:
                        fail(
                            f"matrix between levels {n} and {n + 1}",
                            "restricted multiplicities differ from the original diagram",
                        )
    return ValidationReport(tuple(findings))
