from itertools import combinations

import networkx as nx
import pytest
from conftest import graphs
from hypothesis import given
from hypothesis import strategies as st

from failover.graph import (
    EMPTY,
    FailureSet,
    Graph,
    GraphError,
    MinorMapping,
    apply_minor_op,
    build_graph,
    complete,
    complete_bipartite,
    component_labels,
    components,
    edge_list,
    format_edge_text,
    from_nx,
    mapping_from_bags,
    minus_edges,
    parse_edge_text,
    read_graph,
    st_edge_connectivity,
    surviving_subgraph,
)


def test_edges_are_canonical_and_ids_follow_sorted_order():
    g = Graph(4, ((3, 1), (0, 2), (2, 1)))
    assert g.edges == ((0, 2), (1, 2), (1, 3))
    assert [g.edge_id(*e) for e in g.edges] == [0, 1, 2]
    assert g.edge_id(2, 0) == 0
    assert g.adj == ((2,), (2, 3), (0, 1), (1,))


@pytest.mark.parametrize("edges", [((0, 0),), ((0, 1), (1, 0)), ((0, 5),)])
def test_bad_edges_rejected(edges):
    with pytest.raises(GraphError):
        Graph(3, edges)


def test_complete_and_bipartite_sizes():
    assert complete(5).m == 10
    assert complete(7).m == 21
    kb = complete_bipartite(3, 3)
    assert kb.m == 9
    assert all(u < 3 <= v for u, v in kb.edges)
    assert build_graph("complete_bipartite", 4, 4).m == 16
    with pytest.raises(GraphError):
        build_graph("petersen")


def test_minus_edges():
    g = minus_edges(complete(5), [(0, 1), (3, 2)])
    assert g.m == 8 and not g.has_edge(0, 1) and not g.has_edge(2, 3)
    with pytest.raises(GraphError):
        minus_edges(g, [(0, 1)])


def test_failure_set_roundtrip():
    g = complete(4)
    f = FailureSet.from_edges(g, [(2, 3), (0, 1)])
    assert f.edges(g) == [(0, 1), (2, 3)]
    assert len(f) == 2 and g.edge_id(0, 1) in f
    assert FailureSet.complement_of(g, [(0, 2)]).edges(g) == [e for e in g.edges if e != (0, 2)]
    assert (f | FailureSet.from_ids([1])).ids() == sorted(f.ids() + [1])
    assert f.valid_for(g) and not FailureSet(1 << 6).valid_for(g)


def test_alive_adj_drops_failed_links_only():
    g = complete(4)
    f = FailureSet.from_edges(g, [(0, 1)])
    adj = g.alive_adj(f)
    assert adj[0] == (2, 3) and adj[1] == (2, 3) and adj[2] == (0, 1, 3)


def test_surviving_subgraph_keeps_nodes():
    g = complete(4)
    h = surviving_subgraph(g, FailureSet.from_edges(g, [(0, 1), (0, 2), (0, 3)]))
    assert h.n == 4 and h.degree(0) == 0 and h.m == 3


def test_components_ordered_by_smallest_member():
    g = edge_list([(3, 4), (0, 2)], 5)
    assert components(g) == [[0, 2], [1], [3, 4]]
    lab = component_labels(g.adj)
    assert lab[2] == lab[0] and lab[4] == lab[3] != lab[0]


def _brute_min_cut(g: Graph, f: FailureSet, u: int, v: int) -> int:
    # smallest set of extra link removals that separates u from v
    alive = [i for i in range(g.m) if i not in f]
    for k in range(len(alive) + 1):
        for cut in combinations(alive, k):
            h = f | FailureSet.from_ids(cut)
            lab = component_labels(g.alive_adj(h))
            if lab[u] != lab[v]:
                return k
    raise AssertionError("unreachable")


@given(graphs(min_n=2, max_n=6), st.data())
def test_connectivity_matches_brute_force_cut(g, data):
    if g.m > 10:
        g = Graph(g.n, g.edges[:10])
    u, v = data.draw(st.sampled_from(list(combinations(range(g.n), 2))))
    mask = data.draw(st.integers(0, (1 << g.m) - 1))
    f = FailureSet(mask)
    k = st_edge_connectivity(g, f, u, v)
    assert k == _brute_min_cut(g, f, u, v)
    assert st_edge_connectivity(g, f, u, v, cap=1) == min(k, 1)


@given(graphs(min_n=2, max_n=9))
def test_connectivity_agrees_with_networkx(g):
    h = g.to_nx()
    for u, v in list(combinations(range(g.n), 2))[:12]:
        expect = nx.edge_connectivity(h, u, v) if nx.has_path(h, u, v) else 0
        assert st_edge_connectivity(g, EMPTY, u, v) == expect


def test_connectivity_same_endpoint_is_an_error():
    with pytest.raises(GraphError):
        st_edge_connectivity(complete(3), EMPTY, 1, 1)


def test_contract_merges_into_lower_endpoint():
    step = apply_minor_op(complete(4), "contract", (1, 2))
    assert step.graph.n == 3 and step.graph.m == 3
    assert step.node_map == (0, 1, 1, 2)
    path = edge_list([(0, 1), (1, 2)])
    assert apply_minor_op(path, "contract", (0, 1)).graph.edges == ((0, 1),)


def test_delete_operations():
    g = complete(4)
    assert apply_minor_op(g, "delete_edge", (0, 3)).graph.m == 5
    step = apply_minor_op(g, "delete_node", 1)
    assert step.graph.edges == complete(3).edges and step.node_map == (0, None, 1, 2)
    for op, tgt in [("contract", (0, 9)), ("delete_node", 7), ("squash", 0)]:
        with pytest.raises(GraphError):
            apply_minor_op(g, op, tgt)


@given(graphs(min_n=2, max_n=7, connected=True), st.data())
def test_contraction_preserves_connectivity_and_shrinks(g, data):
    if not g.m:
        return
    e = data.draw(st.sampled_from(g.edges))
    step = apply_minor_op(g, "contract", e)
    assert step.graph.n == g.n - 1
    assert step.graph.m <= g.m - 1
    assert nx.is_connected(step.graph.to_nx())


def test_minor_mapping_validation():
    g = complete(5)
    k4 = complete(4)
    m = mapping_from_bags(g, k4, [{0}, {1}, {2}, {3, 4}])
    assert m.is_valid() and m.owner()[4] == 3
    bad = MinorMapping(g, k4, (frozenset({0}), frozenset({0, 1}), frozenset({2}), frozenset({3})), m.witnesses)
    assert not bad.is_valid()
    path = edge_list([(0, 1), (1, 2), (2, 3)])
    with pytest.raises(GraphError):
        mapping_from_bags(path, edge_list([(0, 1)]), [{0, 2}, {1}])  # bag not connected


def test_text_roundtrip(tmp_path):
    g = edge_list([(0, 3), (1, 2)], 6, "demo")
    text = format_edge_text(g)
    assert parse_edge_text(text) == g and parse_edge_text(text).name == "demo"
    p = tmp_path / "x.txt"
    p.write_text("# a comment\n0 1\n\n1 2\n")
    assert read_graph(p).edges == ((0, 1), (1, 2)) and read_graph(p).name == "x"
    with pytest.raises(GraphError):
        parse_edge_text("0 1 2\n")


def test_from_nx_orders_numeric_labels_numerically():
    h = nx.Graph([("10", "2"), ("2", "1")])
    g, index = from_nx(h)
    assert index == {"1": 0, "2": 1, "10": 2}
    assert g.edges == ((0, 1), (1, 2))
