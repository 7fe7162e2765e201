"""Path counting, canonical enumeration, and vertex-set closures.

Paths run downward through the levels and distinguish parallel edge
copies.  The canonical order on paths is lexicographic on
(start level, start index, then the per-step (target index, copy) pairs);
every enumeration below returns that order, so anything derived from it
is byte-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .completion import Completion
from .diagram import BratteliDiagram, Edge, VertexId


@dataclass(frozen=True, order=True)
class Path:
    """A finite path; a vertex is the path of length zero at itself.

    Each step is (target index, copy number) into the next level, so field
    order makes dataclass ordering coincide with the canonical order.
    """

    start: VertexId
    steps: tuple[tuple[int, int], ...] = ()

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def end(self) -> VertexId:
        if not self.steps:
            return self.start
        return VertexId(self.start.level + len(self.steps), self.steps[-1][0])

    def extend(self, dst: int, copy: int) -> "Path":
        return Path(self.start, self.steps + ((dst, copy),))

    def prepend(self, edge: Edge) -> "Path":
        if edge.target != self.start:
            raise ValueError(f"edge {edge} does not end at {self.start}")
        return Path(edge.source, ((edge.dst, edge.copy),) + self.steps)

    def edges(self) -> Iterator[Edge]:
        src = self.start.index
        for k, (dst, copy) in enumerate(self.steps):
            yield Edge(self.start.level + k, src, dst, copy)
            src = dst

    def visits(self) -> Iterator[VertexId]:
        """Every vertex on the path, start to end."""
        yield self.start
        for k, (dst, _) in enumerate(self.steps):
            yield VertexId(self.start.level + 1 + k, dst)

    def __str__(self) -> str:
        return "-".join(str(v) for v in self.visits())


@dataclass(frozen=True)
class ClosureStep:
    """One addition made by the closure worklist, with its justification.

    ``rule`` is "hereditary" (an in-closure vertex reaches this one) or
    "saturated" (this vertex emits edges and all of them land in the
    closure); ``witness`` lists the relevant (source, target) vertex pairs.
    """

    vertex: VertexId
    rule: str
    witness: tuple[tuple[VertexId, VertexId], ...]

    def to_dict(self) -> dict:
        return {
            "vertex": str(self.vertex),
            "rule": self.rule,
            "witness": [f"{a}->{b}" for a, b in self.witness],
        }


@dataclass(frozen=True)
class ClosureResult:
    closure: frozenset[VertexId]
    trace: tuple[ClosureStep, ...]

    def covers(self, d: BratteliDiagram) -> bool:
        return all(v in self.closure for v in d.vertices())

    def to_dict(self) -> dict:
        return {
            "closure": [str(v) for v in sorted(self.closure)],
            "trace": [s.to_dict() for s in self.trace],
        }


@dataclass(frozen=True)
class FullnessReport:
    """Whether the added set and its complement each generate everything."""

    marked_full: bool
    complement_full: bool
    marked_closure: ClosureResult
    complement_closure: ClosureResult

    @property
    def ok(self) -> bool:
        return self.marked_full and self.complement_full

    def to_dict(self) -> dict:
        return {
            "marked_full": self.marked_full,
            "complement_full": self.complement_full,
            "marked_closure": self.marked_closure.to_dict(),
            "complement_closure": self.complement_closure.to_dict(),
        }


def _check_vertices(d: BratteliDiagram, vertices: Iterable[VertexId]) -> None:
    for v in vertices:
        if not d.in_range(v):
            raise ValueError(f"vertex out of range: {v}")


def count_paths_from(d: BratteliDiagram, sources: Iterable[VertexId], target: VertexId) -> int:
    """Number of paths (any length >= 0) from ``sources`` to ``target``.

    Computed by one forward sweep of adjacency-matrix/vector products; the
    length-zero path contributes when the target itself is a source.
    """
    sources = frozenset(sources)
    _check_vertices(d, sources)
    _check_vertices(d, [target])
    counts = [0] * d.level_size(1)
    for level in range(1, target.level + 1):
        if level > 1:
            matrix = d.adjacency[level - 2]
            counts = [
                sum(matrix[i][j] * counts[i] for i in range(len(counts)))
                for j in range(d.level_size(level))
            ]
        for v in sources:
            if v.level == level:
                counts[v.index] += 1
    return counts[target.index]


def enumerate_paths(
    d: BratteliDiagram, sources: Iterable[VertexId], target: VertexId
) -> tuple[Path, ...]:
    """All paths from ``sources`` to ``target`` in canonical order.

    Depth-first descent in (target index, copy) order from each source in
    (level, index) order; branches that cannot reach the target are pruned
    using exact path counts.
    """
    sources = sorted(frozenset(sources))
    _check_vertices(d, sources)
    _check_vertices(d, [target])

    # reach[level][i] = number of paths from (level, i) to the target
    reach: dict[int, list[int]] = {target.level: [0] * d.level_size(target.level)}
    reach[target.level][target.index] = 1
    for level in range(target.level - 1, 0, -1):
        matrix = d.adjacency[level - 1]
        below = reach[level + 1]
        reach[level] = [
            sum(matrix[i][j] * below[j] for j in range(len(below)))
            for i in range(d.level_size(level))
        ]

    out: list[Path] = []

    def walk(path: Path) -> None:
        v = path.end
        if v.level == target.level:
            if v.index == target.index:
                out.append(path)
            return
        row = d.adjacency[v.level - 1][v.index]
        below = reach[v.level + 1]
        for dst, mult in enumerate(row):
            if mult == 0 or below[dst] == 0:
                continue
            for copy in range(mult):
                walk(path.extend(dst, copy))

    for v in sources:
        if v.level <= target.level and reach[v.level][v.index] > 0:
            walk(Path(v))
    return tuple(out)


def multiplicity(d: BratteliDiagram, v: VertexId, w: VertexId) -> int:
    """Number of edges from v to w (the adjacency entry)."""
    return d.multiplicity_entry(v, w)


def hereditary_saturated_closure(
    d: BratteliDiagram, seed: Iterable[VertexId]
) -> ClosureResult:
    """Smallest vertex set containing ``seed`` closed under both rules.

    Hereditary: a vertex in the set pulls in every target of its edges.
    Saturated: a vertex that emits at least one edge, all of whose targets
    already lie in the set, joins it (sinks never join this way).  The
    worklist sweeps vertices in canonical order until a fixed point, so
    the trace is deterministic.
    """
    seed = frozenset(seed)
    _check_vertices(d, seed)
    closure: set[VertexId] = set(seed)
    trace: list[ClosureStep] = []
    changed = True
    while changed:
        changed = False
        for v in d.vertices():
            if v in closure:
                for e in d.out_edges(v):
                    w = e.target
                    if w not in closure:
                        closure.add(w)
                        trace.append(ClosureStep(w, "hereditary", ((v, w),)))
                        changed = True
            elif not d.is_sink(v):
                targets = sorted({e.target for e in d.out_edges(v)})
                if all(w in closure for w in targets):
                    closure.add(v)
                    trace.append(
                        ClosureStep(v, "saturated", tuple((v, w) for w in targets))
                    )
                    changed = True
    return ClosureResult(frozenset(closure), tuple(trace))


def fullness_check(c: Completion) -> FullnessReport:
    """Closures of the added set and of the original set must both cover.

    Any output of ``complete`` passes: every vertex is reachable from the
    added set, and every added vertex is recovered by saturation because
    all its edges land on original vertices.
    """
    d = c.diagram
    marked = hereditary_saturated_closure(d, c.added)
    complement = hereditary_saturated_closure(
        d, [v for v in d.vertices() if v not in c.added]
    )
    return FullnessReport(
        marked_full=marked.covers(d),
        complement_full=complement.covers(d),
        marked_closure=marked,
        complement_closure=complement,
    )
