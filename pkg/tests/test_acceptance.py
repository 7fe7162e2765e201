"""Acceptance suite: one test per criterion, every check exact.

All comparisons are integer equalities (tolerance zero).  Each test prints
a single PASS/FAIL line; run `pytest tests/test_acceptance.py -v -s` to
see them.  The shared corpus holds 500 randomly generated valid diagrams
within the agreed bounds (up to 6 levels, 5 vertices per level, labels up
to 20, multiplicities up to 4), plus the three named examples.
"""

import json
import time

import pytest

from bratteli import (
    BratteliDiagram,
    Completion,
    VerifyOptions,
    build_rep,
    complete,
    corner_analysis,
    count_paths_from,
    deficiencies,
    filtration_dims,
    fullness_check,
    hereditary_saturated_closure,
    is_unital,
    parse_bd1,
    verify_all,
    verify_ck,
    verify_embedding,
    verify_filtration,
    verify_matrix_units,
    write_bd1,
)

from _corpus import corpus, example_a, example_b, fibonacci
from _oracles import dfs_count

CORPUS_SIZE = 500
REP_DIM_CAP = 300
UNIT_LITERAL_BUDGET = 1000


class _Corpus:
    def __init__(self):
        self.diagrams = corpus(CORPUS_SIZE)
        self.completions = [complete(d) for d in self.diagrams]
        self._reps = None

    @property
    def reps(self):
        if self._reps is None:
            self._reps = [build_rep(c.diagram) for c in self.completions]
        return self._reps


@pytest.fixture(scope="module")
def data():
    return _Corpus()


def conclude(number: int, title: str, ok: bool, detail: str = ""):
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {number:02d} {'PASS' if ok else 'FAIL'}: {title}{suffix}")
    assert ok, f"criterion {number} failed: {title}"


def test_criterion_01_path_count_realization(data):
    started = time.monotonic()
    ok = len(data.diagrams) >= 500
    for c in data.completions:
        completed = c.diagram
        for v in completed.vertices():
            if count_paths_from(completed, c.added, v) != completed.label(v):
                ok = False
            if dfs_count(completed, set(c.added), v) != completed.label(v):
                ok = False
    elapsed = time.monotonic() - started
    conclude(
        1,
        "path counts from the added set realize every label (DFS-confirmed)",
        ok and elapsed < 10.0,
        f"{len(data.completions)} diagrams in {elapsed:.1f}s",
    )


def test_criterion_02_equality_invariant(data):
    ok = True
    from bratteli import validate

    for c in data.completions:
        completed = c.diagram
        if not validate(completed).ok:
            ok = False
        for v in completed.vertices():
            if v.level >= 2:
                incoming = sum(completed.label(e.source) for e in completed.in_edges(v))
                if v not in c.added and incoming != completed.label(v):
                    ok = False
    conclude(2, "added edges absorb the whole label deficit, exactly", ok)


def test_criterion_03_unital_remark(data):
    unital_count = 0
    later_deficit_count = 0
    ok = True
    for d, c in zip(data.diagrams, data.completions):
        if is_unital(d):
            unital_count += 1
            if len(c.added) != 1:
                ok = False
        else:
            later_deficit_count += 1
            if len(c.added) < 2:
                ok = False
    ok = ok and unital_count >= 1 and later_deficit_count >= 1
    conclude(
        3,
        "exactly one vertex added in the unital case, at least two otherwise",
        ok,
        f"{unital_count} unital, {later_deficit_count} with later deficit",
    )


def test_criterion_04_ck_relations(data):
    ok = all(verify_ck(rep).ok for rep in data.reps)
    conclude(4, "the defining relations hold exactly for every completion", ok)


def test_criterion_05_matrix_units(data):
    started = time.monotonic()
    ok = True
    vertices_checked = 0
    for rep in data.reps:
        if rep.dim > REP_DIM_CAP:
            continue
        for v in rep.diagram.vertices():
            r = verify_matrix_units(rep, v, pair_budget=UNIT_LITERAL_BUDGET)
            vertices_checked += 1
            if not r.ok:
                ok = False
    elapsed = time.monotonic() - started
    conclude(
        5,
        "marked path pairs form independent matrix units with the exact product rule",
        ok and elapsed < 60.0,
        f"{vertices_checked} vertices in {elapsed:.1f}s",
    )


def test_criterion_06_embedding_multiplicity(data):
    ok = True
    for rep in data.reps:
        for v in rep.diagram.vertices():
            if rep.diagram.is_sink(v):
                continue
            if not verify_embedding(rep, v).ok:
                ok = False
    conclude(6, "every unit refines one level down with adjacency multiplicities", ok)


def test_criterion_07_corner_ledger(data):
    report = corner_analysis(build_rep(complete(example_a()).diagram))
    ok = (
        report.dim_full,
        report.dim_marked_corner,
        report.dim_complement_corner,
        report.dim_off_corner,
    ) == (25, 4, 9, 6) and report.rank_checked and report.ranks == (25, 4, 9, 6)
    for rep in data.reps:
        r = corner_analysis(rep, pair_budget=300)
        if not r.identities_ok:
            ok = False
        if r.dim_full != (
            r.dim_marked_corner + r.dim_complement_corner + 2 * r.dim_off_corner
        ):
            ok = False
        for s in r.sinks:
            if s.total_paths != s.marked_paths + s.unmarked_paths:
                ok = False
            if s.marked_paths != s.label:
                ok = False
    conclude(7, "corner dimensions (25,4,9,6) on the reference and ledger corpus-wide", ok)


def test_criterion_08_fullness(data):
    ok = True
    for c in data.completions:
        report = fullness_check(c)
        if not (report.marked_full and report.complement_full):
            ok = False
        all_vertices = set(c.diagram.vertices())
        if hereditary_saturated_closure(c.diagram, c.added).closure != all_vertices:
            ok = False
        originals = [v for v in c.diagram.vertices() if v not in c.added]
        if hereditary_saturated_closure(c.diagram, originals).closure != all_vertices:
            ok = False

    # fault injection: an isolated last-level vertex must break fullness
    base = complete(example_a())
    broken = BratteliDiagram(
        labels=base.diagram.labels[:-1] + ((2, 1),),
        adjacency=base.diagram.adjacency[:-1] + (((2, 0),),),
        marks=base.diagram.marks,
    )
    injected = Completion(
        diagram=broken,
        added=frozenset(broken.marks),
        deficiency=deficiencies(broken.without_marked()),
    )
    if fullness_check(injected).marked_full:
        ok = False
    conclude(8, "both closures cover every vertex; unreachable vertices are caught", ok)


def test_criterion_09_filtration(data):
    ok = True
    for c in data.completions:
        if not verify_filtration(c).ok:
            ok = False
        for level in filtration_dims(c):
            if sum(level.augmented_dims) - sum(level.stage_dims) not in (0, 1):
                ok = False
    conclude(9, "stage dimension bookkeeping holds with unit block deltas", ok)


def test_criterion_10_io_round_trip_and_determinism(data):
    ok = True
    for d, c in zip(data.diagrams, data.completions):
        if parse_bd1(write_bd1(d)) != d:
            ok = False
        if parse_bd1(write_bd1(c.diagram)) != c.diagram:
            ok = False

    options = VerifyOptions(pair_budget=800, seed=11)
    sample = [example_a(), example_b(), fibonacci()] + data.diagrams[:40]
    for d in sample:
        first = json.dumps(verify_all(d, options))
        second = json.dumps(verify_all(d, options))
        if first != second:
            ok = False
    conclude(10, "BD1 round-trips exactly; verification reports are byte-stable", ok)
