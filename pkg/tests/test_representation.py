import dataclasses
import random

import pytest

from bratteli import (
    IntMatrix,
    Path,
    VertexId,
    build_rep,
    complete,
    corner_analysis,
    matrix_unit,
    path_isometry,
    verify_ck,
    verify_embedding,
    verify_matrix_units,
)

from _corpus import example_a, example_b, fibonacci, random_diagram, single_vertex


def test_example_a_completion_basis():
    rep = build_rep(complete(example_a()).diagram)
    assert rep.dim == 5
    assert rep.basis == (
        Path(VertexId(1, 0), ((0, 0), (0, 0))),
        Path(VertexId(1, 0), ((0, 0), (0, 1))),
        Path(VertexId(2, 0), ((0, 0),)),
        Path(VertexId(2, 0), ((0, 1),)),
        Path(VertexId(3, 0)),
    )


def test_single_vertex_rep():
    rep = build_rep(single_vertex(1))
    assert rep.basis == (Path(VertexId(1, 0)),)
    assert rep.vertex_projections[VertexId(1, 0)] == IntMatrix.identity(1)
    assert rep.edge_isometries == {}
    assert verify_ck(rep).ok  # vacuous: no edges, no emitting vertices


def test_fibonacci_truncated_basis_size():
    c = complete(fibonacci()).truncate(2)
    rep = build_rep(c.diagram)
    ending_first = [p for p in rep.basis if p.end == VertexId(3, 0)]
    ending_second = [p for p in rep.basis if p.end == VertexId(3, 1)]
    assert len(ending_first) == 5
    assert len(ending_second) == 3
    assert rep.dim == 8


def test_ck_relations_hold_on_examples():
    for d in (example_a(), example_b(), fibonacci()):
        rep = build_rep(complete(d).diagram)
        assert verify_ck(rep).ok


def test_ck_detects_zeroed_edge():
    rep = build_rep(complete(example_a()).diagram)
    edge = sorted(rep.edge_isometries)[0]
    patched = dict(rep.edge_isometries)
    patched[edge] = IntMatrix.zeros(rep.dim, rep.dim)
    broken = dataclasses.replace(rep, edge_isometries=patched)
    report = verify_ck(broken)
    assert not report.ok
    assert any(
        "co-isometry relation fails" in f.message and str(edge) in f.location
        for f in report.errors()
    )


def test_matrix_unit_at_sink_is_diagonal_unit():
    rep = build_rep(complete(example_a()).diagram)
    sink = Path(VertexId(3, 0))
    unit = matrix_unit(rep, sink, sink)
    assert unit == IntMatrix(5, 5, {(4, 4): 1})


def test_matrix_unit_between_parallel_paths():
    rep = build_rep(complete(example_a()).diagram)
    mu = Path(VertexId(1, 0), ((0, 0), (0, 0)))
    nu = Path(VertexId(1, 0), ((0, 0), (0, 1)))
    unit = matrix_unit(rep, mu, nu)
    assert unit == IntMatrix(5, 5, {(rep.index[mu], rep.index[nu]): 1})
    assert matrix_unit(rep, nu, mu) == unit.transpose()


def test_matrix_unit_requires_common_end():
    rep = build_rep(complete(fibonacci()).diagram)
    with pytest.raises(ValueError):
        matrix_unit(rep, Path(VertexId(4, 0)), Path(VertexId(4, 1)))


def test_product_rule_literal_on_example_b():
    rep = build_rep(complete(example_b()).diagram)
    d = rep.diagram
    from bratteli import enumerate_paths

    for v in d.vertices():
        mus = enumerate_paths(d, rep.marked, v)
        units = {
            (i, j): matrix_unit(rep, mus[i], mus[j])
            for i in range(len(mus))
            for j in range(len(mus))
        }
        zero = IntMatrix.zeros(rep.dim, rep.dim)
        for (i, j), u1 in units.items():
            for (a, b), u2 in units.items():
                expected = units[(i, b)] if j == a else zero
                assert u1.mul(u2) == expected


def test_verify_matrix_units_on_examples():
    rep = build_rep(complete(example_a()).diagram)
    assert verify_matrix_units(rep, VertexId(3, 0)).ok  # 2 paths, 4 units
    assert verify_matrix_units(rep, VertexId(1, 0)).ok  # single trivial path
    repf = build_rep(complete(fibonacci()).diagram)
    for v in repf.diagram.vertices():
        assert verify_matrix_units(repf, v).ok


def test_verify_matrix_units_counts_paths_against_label():
    # marked diagram that is not a completion: label 2 but only 1 marked path
    from bratteli import BratteliDiagram

    d = BratteliDiagram.from_lists(
        [[1], [2]], [[[1]]], marks=[VertexId(1, 0)]
    )
    rep = build_rep(d)
    report = verify_matrix_units(rep, VertexId(2, 0))
    assert not report.ok
    assert any("expected 2 marked-sourced paths, found 1" in f.message for f in report.errors())


def test_verify_matrix_units_requires_marks():
    rep = build_rep(example_a())
    with pytest.raises(ValueError):
        verify_matrix_units(rep, VertexId(2, 0))


def test_embedding_on_examples():
    rep = build_rep(complete(example_a()).diagram)
    assert verify_embedding(rep, VertexId(2, 0)).ok
    repb = build_rep(complete(example_b()).diagram)
    assert verify_embedding(repb, VertexId(1, 0)).ok  # added source splits with deficiency count
    repf = build_rep(complete(fibonacci()).diagram)
    assert verify_embedding(repf, VertexId(2, 1)).ok  # splits into one target only
    for v in repf.diagram.vertices():
        if not repf.diagram.is_sink(v):
            assert verify_embedding(repf, v).ok


def test_embedding_rejects_sinks():
    rep = build_rep(complete(example_a()).diagram)
    with pytest.raises(ValueError):
        verify_embedding(rep, VertexId(3, 0))


def test_corner_analysis_example_a():
    rep = build_rep(complete(example_a()).diagram)
    report = corner_analysis(rep)
    assert (
        report.dim_full,
        report.dim_marked_corner,
        report.dim_complement_corner,
        report.dim_off_corner,
    ) == (25, 4, 9, 6)
    assert report.rank_checked
    assert report.ranks == (25, 4, 9, 6)
    assert report.identities_ok
    (sink,) = report.sinks
    assert (sink.total_paths, sink.marked_paths, sink.unmarked_paths) == (5, 2, 3)
    assert report.case_checks == 30  # all unit generators fit the budget


def test_corner_analysis_example_b():
    rep = build_rep(complete(example_b()).diagram)
    report = corner_analysis(rep)
    (sink,) = report.sinks
    assert (sink.total_paths, sink.marked_paths, sink.unmarked_paths) == (6, 3, 3)
    assert (
        report.dim_full,
        report.dim_marked_corner,
        report.dim_complement_corner,
        report.dim_off_corner,
    ) == (36, 9, 9, 9)
    assert report.rank_checked and report.ranks == (36, 9, 9, 9)
    assert report.identities_ok


def test_corner_analysis_unmarked_diagram_degenerates():
    rep = build_rep(example_a())
    report = corner_analysis(rep)
    assert report.dim_marked_corner == 0
    assert report.dim_off_corner == 0
    assert report.dim_full == report.dim_complement_corner == 9
    assert report.identities_ok


def test_corner_analysis_random_diagrams_ledger():
    for seed in range(25):
        c = complete(random_diagram(random.Random(seed)))
        rep = build_rep(c.diagram)
        report = corner_analysis(rep, pair_budget=400)
        assert report.identities_ok, report.failures
        assert report.dim_full == (
            report.dim_marked_corner
            + report.dim_complement_corner
            + 2 * report.dim_off_corner
        )
        for s in report.sinks:
            assert s.total_paths == s.marked_paths + s.unmarked_paths
            assert s.marked_paths == s.label


def test_path_isometry_rejects_foreign_path():
    rep = build_rep(complete(example_a()).diagram)
    with pytest.raises(ValueError):
        path_isometry(rep, Path(VertexId(1, 0), ((0, 7),)))


def test_corner_analysis_flags_edge_leaving_unmarked_part():
    from bratteli import BratteliDiagram

    # an unmarked vertex wired into a marked one: the unmarked family alone
    # can no longer generate the complement corner
    d = BratteliDiagram.from_lists(
        [[1], [1, 1]], [[[1, 1]]], marks=[VertexId(2, 1)]
    )
    report = corner_analysis(build_rep(d))
    assert not report.identities_ok
    assert any("enters the marked set" in msg for msg in report.failures)
    assert any("decompose over unmarked edges" in msg for msg in report.failures)
