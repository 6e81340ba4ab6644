from itertools import combinations

import pytest
from conftest import graphs
from hypothesis import given
from hypothesis import strategies as st

from failover.adversary import gadget, k7_cyclic_pattern, touring_fig_pattern
from failover.forwarding import (
    BOT,
    ForwardingPattern,
    LocalView,
    MissingRule,
    PatternError,
    RoutingModel,
    TableRule,
    admissible_views,
    check_totality,
    dumps,
    loads,
    materialize,
    simulate,
    simulate_route,
    simulate_tour,
    step_bound,
)
from failover.graph import EMPTY, FailureSet, complete, component_labels, edge_list, minus_edges
from failover.patterns import (
    gen_alg1_k5,
    gen_cyclic,
    gen_k5m2_dest,
    gen_outerplanar_tour,
    gen_round_robin,
)

SD = RoutingModel.SOURCE_DESTINATION


def k5m2():
    # t = 4 keeps only the links to 0 and 1
    return minus_edges(complete(5), [(2, 4), (3, 4)])


def test_decide_hops_to_alive_destination():
    p = gen_alg1_k5(complete(5), 0, 4)
    assert p.decide(LocalView(2, (0, 1, 3, 4), 1, 0, 4)) == 4


def test_decide_fig4_source_side():
    g = k5m2()
    p = gen_k5m2_dest(g, 4)
    # v1..v4 = 0, 1, 2, 3; from v1 with no inport and t failed: v2 first
    assert p.decide(LocalView(0, (1, 2, 3), BOT, None, 4)) == 1


@pytest.mark.parametrize("make", [
    lambda: gen_alg1_k5(complete(5), 0, 4),
    lambda: gen_round_robin(complete(6), 1, 3),
    lambda: gen_outerplanar_tour(edge_list([(0, 1), (1, 2), (2, 0)])),
])
def test_single_alive_neighbor_forces_bounce(make):
    p = make()
    v = 2
    u = next(x for x in p.graph.adj[v] if x != p.t)
    assert p.decide(p.view(v, (u,), u)) == u


def test_decide_rejects_foreign_scope_and_dead_inport():
    p = gen_alg1_k5(complete(5), 0, 4)
    with pytest.raises(PatternError):
        p.decide(LocalView(1, (2, 3), BOT, 2, 4))
    with pytest.raises(PatternError):
        p.decide(LocalView(1, (2, 3), 0, 0, 4))


def test_scope_must_fit_model():
    g = complete(3)
    with pytest.raises(PatternError):
        ForwardingPattern(SD, g, TableRule({}), None, 1)
    with pytest.raises(PatternError):
        ForwardingPattern(RoutingModel.TOURING, g, TableRule({}), None, 1)


def test_rule_leaving_alive_set_is_reported():
    g = complete(3)
    p = ForwardingPattern(RoutingModel.TOURING, g, lambda *a: 2)
    with pytest.raises(PatternError):
        p.out(0, (1,), BOT)


def test_missing_row_is_reported_not_defaulted():
    g = edge_list([(0, 1), (1, 2)])
    full = materialize(gen_outerplanar_tour(g))
    rows = dict(full.rule.rows)
    dropped = (1, (0, 2), 0)
    del rows[dropped]
    p = ForwardingPattern(RoutingModel.TOURING, g, TableRule(rows))
    missing = check_totality(g, p)
    assert [(v.node, v.alive, v.inport) for v in missing] == [dropped]
    with pytest.raises(MissingRule):
        simulate_tour(g, EMPTY, p, 0)


def test_totality_of_alg1_on_k5():
    g = complete(5)
    for s, t in combinations(range(5), 2):
        assert check_totality(g, gen_alg1_k5(g, s, t)) == []
        assert check_totality(g, gen_alg1_k5(g, t, s)) == []


def test_totality_of_fig4_table():
    assert check_totality(k5m2(), gen_k5m2_dest(k5m2(), 4)) == []


def test_admissible_views_count_alg1_k5():
    # each non-t node has 4 links; only the source also sees the empty inport
    g = complete(5)
    views = list(admissible_views(g, gen_alg1_k5(g, 0, 4)))
    with_inport = sum(k * len(list(combinations(range(4), k))) for k in range(1, 5))
    assert len(views) == 4 * with_inport + (2**4 - 1)
    assert all(v != 4 for v, _, _ in views)


def test_route_direct_link():
    g = complete(5)
    out = simulate_route(g, EMPTY, gen_alg1_k5(g, 0, 1), 0, 0, 1)
    assert out.kind == "reached" and out.hops == 1


def test_route_from_destination_is_zero_hops():
    g = k5m2()
    out = simulate_route(g, EMPTY, gen_k5m2_dest(g, 4), 4, None, 4)
    assert out.reached and out.hops == 0


def test_isolated_start():
    g = complete(4)
    f = FailureSet.from_edges(g, [(0, 1), (0, 2), (0, 3)])
    out = simulate_route(g, f, gen_round_robin(g, 0, 3), 0, 0, 3)
    assert out.kind == "isolated"


def test_k7_gadget_loops_through_v2_v3_v5():
    gd = gadget("k7_source_dest")
    R = gd.roles
    out = simulate_route(gd.graph, gd.failure, k7_cyclic_pattern(), R["s"], R["s"], R["t"])
    assert out.kind == "looped"
    cyc = out.cycle_nodes()
    seg = [R["v2"], R["v3"], R["v5"], R["v2"]]
    assert any(cyc[i : i + 4] == seg for i in range(len(cyc)))
    assert R["t"] not in [v for v, _ in out.trace]
    assert R["v4"] not in [v for v, _ in out.trace]


def test_fig4_pattern_reaches_under_every_failure_set():
    g = k5m2()
    p = gen_k5m2_dest(g, 4)
    for mask in range(1 << g.m):
        f = FailureSet(mask)
        lab = component_labels(g.alive_adj(f))
        for v in range(4):
            if lab[v] == lab[4]:
                assert simulate_route(g, f, p, v, None, 4).reached, (f.edges(g), v)


def test_route_preconditions():
    g = complete(5)
    p = gen_alg1_k5(g, 0, 1)
    with pytest.raises(PatternError):
        simulate_route(g, EMPTY, p, 2, 2, 1)  # wrong scope
    with pytest.raises(PatternError):
        simulate_route(g, EMPTY, p, 2, 0, 1)  # SD walks start at s
    tour = gen_outerplanar_tour(complete(3))
    with pytest.raises(PatternError):
        simulate_route(complete(3), EMPTY, tour, 0, None, 1)
    with pytest.raises(PatternError):
        simulate_tour(g, EMPTY, p, 0)


def test_triangle_tour_from_every_start():
    g = complete(3)
    p = gen_outerplanar_tour(g)
    for v in range(3):
        assert simulate_tour(g, EMPTY, p, v).complete


def test_single_edge_tour_bounces():
    g = edge_list([(0, 1)])
    out = simulate_tour(g, EMPTY, gen_outerplanar_tour(g), 0)
    assert out.complete and [v for v, _ in out.trace][:3] == [0, 1, 0]


def test_tour_of_isolated_node():
    g = edge_list([(0, 1)], 3)
    assert simulate_tour(g, EMPTY, gen_outerplanar_tour(g), 2).complete


@pytest.mark.parametrize("name,missing_role", [("k4_tour", "v2"), ("k23_tour", "v5")])
def test_touring_gadgets_miss_a_node(name, missing_role):
    gd = gadget(name)
    out = simulate_tour(gd.graph, gd.failure, touring_fig_pattern(name), gd.roles["v1"])
    assert not out.complete
    assert out.missing == {gd.roles[missing_role]}


# properties -------------------------------------------------------------


def _patterns_for(g, s, t):
    yield gen_round_robin(g, s, t)
    rot = {v: tuple(reversed(g.adj[v])) for v in range(g.n)}
    yield gen_cyclic(g, rot, SD, s, t)


@given(graphs(min_n=2, max_n=6, connected=True), st.data())
def test_walk_invariants(g, data):
    s, t = data.draw(st.sampled_from(list(combinations(range(g.n), 2))))
    f = FailureSet(data.draw(st.integers(0, (1 << g.m) - 1)))
    adj = g.alive_adj(f)
    for p in _patterns_for(g, s, t):
        a = simulate_route(g, f, p, s, s, t)
        b = simulate_route(g, f, p, s, s, t)
        assert a == b  # deterministic
        assert len(a.trace) <= step_bound(g)
        for (u, _), (w, came) in zip(a.trace, a.trace[1:]):
            assert w in adj[u] and came == u  # no teleportation
        if a.kind == "looped":
            states = list(a.trace)
            assert len(set(states)) == len(states)
            assert a.prefix_len + a.cycle_len == len(states)


@given(graphs(min_n=2, max_n=6, connected=True), st.data())
def test_tour_invariants(g, data):
    f = FailureSet(data.draw(st.integers(0, (1 << g.m) - 1)))
    start = data.draw(st.integers(0, g.n - 1))
    rot = {v: tuple(data.draw(st.permutations(g.adj[v]))) for v in range(g.n)}
    p = gen_cyclic(g, rot)
    out = simulate_tour(g, f, p, start)
    assert len(out.trace) <= step_bound(g)
    lab = component_labels(g.alive_adj(f))
    comp = {v for v in range(g.n) if lab[v] == lab[start]}
    visited = {v for v, _ in out.trace}
    assert out.missing == comp - visited
    if out.complete:
        assert comp <= visited


@given(graphs(min_n=2, max_n=6, connected=True), st.data())
def test_serialization_roundtrip_decides_identically(g, data):
    s, t = data.draw(st.sampled_from(list(combinations(range(g.n), 2))))
    p = data.draw(st.sampled_from([
        gen_round_robin(g, s, t),
        gen_cyclic(g, {}, RoutingModel.DESTINATION_ONLY, None, t),
        gen_cyclic(g, {v: tuple(reversed(g.adj[v])) for v in range(g.n)}),
    ]))
    q = loads(dumps(p))
    assert q.model is p.model and (q.s, q.t) == (p.s, p.t) and q.graph == p.graph
    for v, alive, inport in admissible_views(g, p):
        assert q.out(v, alive, inport) == p.out(v, alive, inport)


def test_simulate_dispatches_on_model():
    g = complete(4)
    assert simulate(g, EMPTY, gen_round_robin(g, 0, 3), 0).reached
    assert simulate(g, EMPTY, gen_cyclic(g, {}), 1).complete


def test_outcome_dicts_use_bot_marker():
    g = complete(4)
    d = simulate(g, EMPTY, gen_round_robin(g, 0, 3), 0).to_dict()
    assert d["trace"][0] == [0, "bot"] and d["kind"] == "reached"
