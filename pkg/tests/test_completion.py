import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bratteli import (
    BratteliDiagram,
    InvalidDiagramError,
    VertexId,
    complete,
    completion_from_marked,
    count_paths_from,
    deficiencies,
    is_unital,
    validate,
)

from _corpus import example_a, example_b, fibonacci, random_diagram, single_vertex
from _oracles import dfs_count


def test_example_a_completion_structure():
    c = complete(example_a())
    assert c.diagram.labels == ((1,), (1,), (2,))
    assert c.diagram.adjacency == (((1,),), ((2,),))
    assert c.added == {VertexId(1, 0)}
    assert c.diagram.marks == c.added


def test_example_b_completion_structure():
    c = complete(example_b())
    assert c.diagram.labels == ((1,), (1, 1), (3,))
    assert c.diagram.adjacency == (((1, 0),), ((2,), (1,)))
    assert c.added == {VertexId(1, 0), VertexId(2, 1)}


def test_fibonacci_adds_one_vertex():
    c = complete(fibonacci())
    assert c.added == {VertexId(1, 0)}
    assert c.diagram.labels == ((1,), (1, 1), (2, 1), (3, 2))
    assert c.diagram.adjacency[0] == ((1, 1),)


def test_unital_cases():
    assert is_unital(fibonacci())
    assert not is_unital(example_b())
    assert is_unital(single_vertex(5))
    assert len(complete(single_vertex(5)).added) == 1


def test_added_vertices_have_label_one_and_first_level_always_added():
    for seed in range(80):
        c = complete(random_diagram(random.Random(seed)))
        assert VertexId(1, 0) in c.added
        assert c.diagram.level_size(1) == 1
        for w in c.added:
            assert c.diagram.label(w) == 1
            # appended as the last vertex of its stored level
            assert w.index == c.diagram.level_size(w.level) - 1


def test_unital_iff_single_added_vertex():
    for seed in range(80):
        d = random_diagram(random.Random(seed))
        c = complete(d)
        if is_unital(d):
            assert len(c.added) == 1
        else:
            assert len(c.added) >= 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_path_count_realization(seed):
    d = random_diagram(random.Random(seed))
    c = complete(d)
    for v in c.diagram.vertices():
        assert count_paths_from(c.diagram, c.added, v) == c.diagram.label(v)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_path_count_matches_dfs_oracle(seed):
    d = random_diagram(random.Random(seed))
    c = complete(d)
    for v in c.diagram.vertices():
        assert dfs_count(c.diagram, set(c.added), v) == c.diagram.label(v)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_equality_invariant_and_validity(seed):
    d = random_diagram(random.Random(seed))
    c = complete(d)
    completed = c.diagram
    assert validate(completed).ok
    for v in completed.vertices():
        if v.level >= 2 and v not in c.added:
            assert sum(completed.label(e.source) for e in completed.in_edges(v)) == completed.label(v)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_conservativity(seed):
    d = random_diagram(random.Random(seed))
    assert complete(d).original() == d


def test_complete_rejects_invalid():
    with pytest.raises(InvalidDiagramError):
        complete(BratteliDiagram.from_lists([[1], [1]], [[[2]]]))


def test_added_level_exactly_where_deficiency_is_positive():
    for seed in range(60):
        d = random_diagram(random.Random(seed))
        deficit = deficiencies(d)
        c = complete(d)
        assert c.diagram.num_levels == d.num_levels + 1
        assert not c.last_level_has_added()
        for n in range(2, d.num_levels + 1):
            expected = any(x > 0 for x in deficit.level(n))
            assert c.added_at_stored_level(n) == expected


def test_completion_deficiency_vanishes_at_original_vertices():
    for seed in range(40):
        d = random_diagram(random.Random(seed))
        c = complete(d)
        completed_deficit = deficiencies(c.diagram)
        for v in c.diagram.vertices():
            if v.level == 1:
                continue
            assert completed_deficit[v] == (1 if v in c.added else 0)


def test_completion_from_marked_round_trip():
    c = complete(example_b())
    rebuilt, report = completion_from_marked(c.diagram)
    assert report.ok
    assert rebuilt is not None
    assert rebuilt.diagram == c.diagram
    assert rebuilt.added == c.added
    assert rebuilt.deficiency == c.deficiency


def test_completion_from_marked_rejects_corruption():
    # drop one of the two added parallel edges into the deficient vertex
    base = complete(BratteliDiagram.from_lists([[1], [4]], [[[2]]]))
    corrupted = BratteliDiagram(
        labels=base.diagram.labels,
        adjacency=(base.diagram.adjacency[0], ((2,), (1,))),
        marks=base.diagram.marks,
    )
    assert validate(corrupted).ok  # still a valid diagram, no longer a completion
    rebuilt, report = completion_from_marked(corrupted)
    assert not report.ok
    assert any("does not reproduce the input" in f.message for f in report.errors())


def test_completion_from_marked_requires_marks():
    rebuilt, report = completion_from_marked(example_a())
    assert rebuilt is None
    assert not report.ok


def test_completion_from_marked_rejects_label_and_position_violations():
    c = complete(example_a())
    bad_label = BratteliDiagram(
        labels=((2,),) + c.diagram.labels[1:],
        adjacency=c.diagram.adjacency,
        marks=c.diagram.marks,
    )
    _, report = completion_from_marked(bad_label)
    assert any("label 1" in f.message for f in report.errors())


def test_truncate_keeps_prefix_and_marks():
    c = complete(fibonacci())
    t = c.truncate(2)
    assert t.diagram.labels == ((1,), (1, 1), (2, 1))
    assert t.added == {VertexId(1, 0)}
    assert t.deficiency.values == ((1, 1), (0, 0))
    assert not t.last_level_has_added()
    assert c.truncate(10) is c
    with pytest.raises(ValueError):
        c.truncate(0)


def test_truncation_preserves_path_counts():
    c = complete(example_b())
    t = c.truncate(1)
    assert t.last_level_has_added()
    for v in t.diagram.vertices():
        assert count_paths_from(t.diagram, t.added, v) == t.diagram.label(v)
