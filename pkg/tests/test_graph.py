import pytest

from certifier.utils.graph import CheckGraph, CheckNode, GraphError


def noop(ctx):
    return None


def make_graph(edges, validate=True):
    return CheckGraph(tuple(CheckNode(name, prerequisites, noop) for name, prerequisites in edges), validate)


DIAMOND = [("a", []), ("b", ["a"]), ("c", ["a"]), ("d", ["b", "c"]), ("e", [])]


def test_topological_order_respects_prerequisites():
    graph = make_graph(DIAMOND)
    order = graph.topological_order()
    position = {name: index for index, name in enumerate(order)}

    assert sorted(order) == sorted(graph.names)
    for node in graph.nodes:
        assert all(position[node.name] > position[p] for p in node.prerequisites)


def test_ties_follow_declaration_order():
    assert make_graph(DIAMOND).topological_order() == ["a", "e", "b", "c", "d"]


def test_cycle_is_rejected_at_build():
    with pytest.raises(GraphError, match="cycle"):
        make_graph([("a", ["c"]), ("b", ["a"]), ("c", ["b"])])


def test_self_loop_is_a_cycle():
    with pytest.raises(GraphError):
        make_graph([("a", ["a"])])


def test_unknown_prerequisite():
    with pytest.raises(GraphError, match="unknown"):
        make_graph([("a", ["missing"])])


def test_duplicate_names():
    with pytest.raises(GraphError, match="duplicate"):
        make_graph([("a", []), ("a", [])])


def test_with_edge_rejects_a_cycle_unless_unvalidated():
    graph = make_graph(DIAMOND)

    with pytest.raises(GraphError):
        graph.with_edge("a", "d")

    cyclic = graph.with_edge("a", "d", validate=False)
    with pytest.raises(GraphError):
        cyclic.topological_order()


def test_closures():
    graph = make_graph(DIAMOND)

    assert graph.prerequisite_closure(["d"]) == {"a", "b", "c", "d"}
    assert graph.dependent_closure(["b"]) == {"b", "d"}

    with pytest.raises(GraphError):
        graph.prerequisite_closure(["zzz"])


def test_restricted_include_keeps_prerequisites():
    graph = make_graph(DIAMOND).restricted(include=["b"])
    assert graph.names == ["a", "b"]


def test_restricted_exclude_drops_dependents():
    graph = make_graph(DIAMOND).restricted(exclude=["c"])
    assert graph.names == ["a", "b", "e"]


def test_node_lookup():
    graph = make_graph(DIAMOND)

    assert "d" in graph
    assert "z" not in graph
    assert len(graph) == 5
    assert graph.node("d").prerequisites == ("b", "c")

    with pytest.raises(GraphError):
        graph.node("z")
