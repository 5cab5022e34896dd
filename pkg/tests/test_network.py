import io

import pytest

from scoperoute.netgen import gen_random, inject_changes
from scoperoute.network import (
    INF,
    DynamicOverlay,
    FormatError,
    RoadNetwork,
    ScopeMap,
    ValidationError,
    Walk,
    dump_network,
    dump_overlay,
    dynamic_weights,
    effective_weight,
    load_network,
    load_overlay,
)

MINIMAL = "p gsn 2 1 2\nl 0 0\nl inf inf\na 0 1 5 inf\n"


def test_minimal_file_loads():
    net, scope = load_network(MINIMAL)
    assert net.vertex_count == 2 and net.edge_count == 1
    assert scope.levels == (0, INF) and scope.nu == (0, INF)
    assert net.edges[0].weight == 5 and scope.edge_level == (INF,)


def test_comments_blank_lines_and_unsorted_levels():
    text = "# header next\n\np gsn 2 1 3\nl inf inf\nl 1 4\nl 0 0\n\na 1 0 2.5 1\n"
    net, scope = load_network(io.StringIO(text))
    assert scope.levels == (0, 1, INF) and scope.nu == (0, 4, INF)
    assert net.edges[0].weight == 2.5


@pytest.mark.parametrize("text, message", [
    ("p gsn 3 0 3\nl 0 0\nl 1 5\nl 2 5\nl inf inf\n", "header declares 3 levels"),
    ("p gsn 3 0 4\nl 0 0\nl 1 5\nl 2 5\nl inf inf\n", "nu not strictly increasing"),
    ("p gsn 2 1 2\nl 0 0\nl inf inf\na 0 1 5 3\n", "undeclared scope level"),
    ("p gsn 2 0 2\nl 1 1\nl inf inf\n", "missing level 0"),
    ("p gsn 2 0 2\nl 0 0\nl 1 1\n", "missing level inf"),
    ("p gsn 2 0 2\nl 0 1\nl inf inf\n", r"nu\(0\) must be 0"),
    ("p gsn 2 1 2\nl 0 0\nl inf inf\na 0 2 5 inf\n", "out of range"),
])
def test_validation_errors(text, message):
    with pytest.raises(ValidationError, match=message):
        load_network(text)


@pytest.mark.parametrize("text, line", [
    ("q gsn 2 1 2\n", 1),
    ("p gsn 2 1 2\nl 0 0\nl inf inf\na 0 1 x inf\n", 4),
    ("p gsn 2 1 2\nl 0 0\nl inf inf\na 0 1 inf inf\n", 4),
    ("p gsn 2 1 2\nl 0 0\nl inf inf\na 0 1 -1 inf\n", None),
    ("p gsn 2 1 2\nl 0 0\nl inf inf\nz\n", 4),
    ("p gsn 2 1 2\np gsn 2 1 2\n", 2),
])
def test_format_errors_carry_line(text, line):
    with pytest.raises((FormatError, ValidationError)) as info:
        load_network(text)
    if line is not None:
        assert isinstance(info.value, FormatError) and info.value.line == line


def test_round_trip_random():
    for seed in range(20):
        net, scope = gen_random(8, 25, seed)
        text = dump_network(net, scope)
        net2, scope2 = load_network(text)
        assert net2.edges == net.edges and scope2 == scope
        assert dump_network(net2, scope2) == text


def test_adjacency_matches_edge_list():
    net, _ = gen_random(10, 40, 3)
    pairs = sorted((net.edges[e].tail, net.edges[e].head) for adj in net.out_adjacency for e in adj)
    assert pairs == sorted((e.tail, e.head) for e in net.edges)
    for v, adj in enumerate(net.out_adjacency):
        assert all(net.edges[e].tail == v for e in adj)


def test_self_loops_and_multi_edges_kept():
    net = RoadNetwork(2)
    net.add_edge(0, 0, 1)
    net.add_edge(0, 1, 2)
    net.add_edge(0, 1, 3)
    assert net.self_loops() == [0]
    assert net.edges[1] != net.edges[2] and net.edge_count == 3


def test_overlay_parsing():
    net, _ = load_network(MINIMAL)
    assert load_overlay("c 0 inf\n", net).changes == {0: INF}
    assert load_overlay("", net).changes == {}
    assert load_overlay("c 0 7\n", net).changes == {0: 7}
    with pytest.raises(ValidationError, match="not a negative change"):
        load_overlay("c 0 3\n", net)
    with pytest.raises(ValidationError, match="not a negative change"):
        load_overlay("c 0 5\n", net)
    with pytest.raises(ValidationError, match="unknown edge id"):
        load_overlay("c 4 9\n", net)
    with pytest.raises(ValidationError, match="duplicate"):
        load_overlay("c 0 9\nc 0 10\n", net)
    with pytest.raises(FormatError):
        load_overlay("c 0\n", net)


def test_effective_weight():
    net, _ = load_network(MINIMAL)
    assert effective_weight(net, None, 0) == 5
    assert effective_weight(net, DynamicOverlay({0: 100}), 0) == 100
    assert effective_weight(net, DynamicOverlay({0: INF}), 0) == INF
    assert INF + 3 == INF


def test_effective_weight_never_below_base():
    for seed in range(10):
        net, _ = gen_random(8, 20, seed)
        ov = inject_changes(net, 5, "mixed", seed)
        for eid, w in enumerate(dynamic_weights(net, ov)):
            base = net.edges[eid].weight
            assert w >= base
            assert (w == base) == (eid not in ov.changes)
        assert load_overlay(dump_overlay(ov), net).changes == ov.changes


def test_walk_weight_and_vertices():
    net, _ = load_network("p gsn 3 2 2\nl 0 0\nl inf inf\na 0 1 2 inf\na 1 2 3 inf\n")
    walk = Walk(0, (0, 1))
    assert walk.vertices(net) == [0, 1, 2]
    assert walk.weight(net.weights()) == 5
    assert Walk(0, ()).weight(net.weights()) == 0


def test_scope_map_queries():
    scope = ScopeMap((0, 1, INF), (0, 5, INF), (INF, 1, 0))
    assert scope.rank(1) == 1 and scope.edge_rank(0) == 2
    assert scope.nu_of_edge(1) == 5 and scope.zero() == (0, 0, 0)
