from bratteli import complete, to_dot

from _corpus import example_a, fibonacci, single_vertex


def node_lines(text: str) -> list[str]:
    return [l for l in text.splitlines() if "[label=" in l]


def edge_lines(text: str) -> list[str]:
    return [l for l in text.splitlines() if "->" in l]


def test_example_a_completion_counts():
    text = to_dot(complete(example_a()).diagram)
    assert len(node_lines(text)) == 3
    assert len(edge_lines(text)) == 3  # one added edge plus two parallel ones
    assert text.count("shape=box") == 1


def test_single_vertex():
    text = to_dot(single_vertex(5))
    assert len(node_lines(text)) == 1
    assert len(edge_lines(text)) == 0
    assert 'label="d=5"' in text


def test_fibonacci_completion_node_count():
    text = to_dot(complete(fibonacci()).diagram)
    assert len(node_lines(text)) == 7


def test_deterministic_and_ranked():
    d = complete(fibonacci()).diagram
    assert to_dot(d) == to_dot(d)
    assert to_dot(d).count("rank=same") == d.num_levels
