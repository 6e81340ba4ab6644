"""Generators for the concrete forwarding patterns.

Every generator returns a :class:`ForwardingPattern` whose rule is a small
picklable callable, so patterns can be shipped to worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import networkx as nx

from .forwarding import BOT, ForwardingPattern, RoutingModel
from .graph import Graph, GraphError, MinorMapping, complete

SD = RoutingModel.SOURCE_DESTINATION
DEST = RoutingModel.DESTINATION_ONLY
TOUR = RoutingModel.TOURING


class ShapeError(GraphError):
    pass


def _first_alive(prefs, alive):
    for x in prefs:
        if x in alive:
            return x
    return None


def _after(order: Sequence[int], alive, inport):
    """Next alive entry of the cyclic ``order`` strictly after ``inport``."""
    k = len(order)
    if not k:
        return None
    start = order.index(inport) + 1 if inport in order else 0
    for i in range(k):
        x = order[(start + i) % k]
        if x in alive:
            return x
    return None


def _bounce(alive, inport):
    return inport if inport is not BOT else alive[0]


# rules ------------------------------------------------------------------


@dataclass(frozen=True)
class PreferenceRule:
    """Try the listed outports in order, then the inport, then the rest ascending."""

    prefs: Mapping[tuple[int, Any], tuple[int, ...]]
    hop_to_t: bool = True

    def __call__(self, node, alive, inport, s, t):
        if self.hop_to_t and t is not None and t in alive:
            return t
        listed = self.prefs.get((node, inport), ())
        out = _first_alive(listed, alive)
        if out is None and inport is not BOT:
            out = inport
        if out is None:
            out = alive[0]
        return out


@dataclass(frozen=True)
class Alg1Rule:
    def __call__(self, node, alive, inport, s, t):
        if t in alive:
            return t
        if node == s:
            if len(alive) == 1:
                return alive[0]
            if len(alive) == 2:
                u, v = alive
                return u if inport is BOT else v
            if len(alive) == 3:
                u, v, w = alive
                if inport is BOT:
                    return u
                return v if inport == w else w
            return None
        if inport == s:
            others = [x for x in alive if x != s]
            return others[0] if others else s
        others = [x for x in alive if x != inport and x != s]
        if others:
            return others[0]
        if s in alive:
            return s
        return inport if inport is not BOT else None


@dataclass(frozen=True)
class CyclerRule:
    """Hop to t; nodes in ``cyclers`` rotate ascending after the inport; others bounce."""

    cyclers: frozenset[int]

    def __call__(self, node, alive, inport, s, t):
        if t in alive:
            return t
        if node in self.cyclers:
            return _after(alive, alive, inport)
        return _bounce(alive, inport)


@dataclass(frozen=True)
class RotationRule:
    """Right-hand style rule over a per-node cyclic order.

    ``targets`` are hopped to first when alive. Otherwise the packet leaves on
    the next alive rotation neighbor after the inport; with no inport it takes
    the first alive entry of the rotation. Nodes or views the rotation does
    not cover bounce.
    """

    rotation: Mapping[int, tuple[int, ...]]
    targets: tuple[int, ...] = ()

    def __call__(self, node, alive, inport, s, t):
        hop = _first_alive(self.targets, alive)
        if hop is not None and hop != node:
            return hop
        out = _after(self.rotation.get(node, ()), alive, inport)
        if out is None:
            out = _bounce(alive, inport)
        return out


# Algorithm for K5 and the K3,3 tables ------------------------------------


def gen_alg1_k5(g: Graph, s: int, t: int) -> ForwardingPattern:
    if g.n > 5:
        raise ShapeError("the K5 algorithm is defined for at most five nodes")
    _check_st(g, s, t)
    return ForwardingPattern(SD, g, Alg1Rule(), s, t, {"alg": "alg1-k5"})


def _check_st(g: Graph, s, t):
    for x in (s, t):
        if x is not None and not 0 <= x < g.n:
            raise ShapeError(f"node {x} not in graph")
    if s is not None and s == t:
        raise ShapeError("s and t must differ")


_K33_OPPOSITE = {
    ("s", None): ("t", "v1", "v2"),
    ("s", "v1"): ("v2",),
    ("s", "v2"): ("v2",),
    ("b", "v1"): ("t", "v2", "v1"),
    ("b", "v2"): ("t", "v1", "v2"),
    ("c", "v1"): ("t", "v2", "v1"),
    ("c", "v2"): ("t", "v1", "v2"),
    ("v1", "s"): ("b", "c", "s"),
    ("v1", "b"): ("c", "s", "b"),
    ("v1", "c"): ("b", "s", "c"),
    ("v2", "s"): ("b", "c"),
    ("v2", "b"): ("c", "b"),
    ("v2", "c"): ("b", "c"),
}

_K33_SAME = {
    ("s", None): ("v1", "v3", "v2"),  # v1, v2, v3 loops once (s,v1), (t,v2), (t,v3) fail
    ("s", "v1"): ("v3", "v2"),
    ("s", "v2"): ("v3",),
    ("s", "v3"): ("v2",),
    ("b", "v1"): ("v2", "v3", "v1"),
    ("b", "v2"): ("v3", "v1", "v2"),
    ("b", "v3"): ("v1", "v2", "v3"),
    ("v1", "s"): ("t", "b", "s"),
    ("v1", "b"): ("t", "s", "b"),
    ("v2", "s"): ("t", "b", "s"),
    ("v2", "b"): ("t", "b", "s"),
    ("v3", "s"): ("t", "b", "s"),
    ("v3", "b"): ("t", "s", "b"),
}


def _bind(table, roles: Mapping[str, int]):
    out = {}
    for (node, inport), prefs in table.items():
        key = (roles[node], None if inport is None else roles[inport])
        out[key] = tuple(roles[x] for x in prefs)
    return out


def gen_k33_source(g: Graph, s: int, t: int) -> ForwardingPattern:
    """Preference tables for K3,3 (parts ``0..2`` and ``3..5``)."""
    if g.n != 6 or any(not (u < 3 <= v) for u, v in g.edges):
        raise ShapeError("expected a subgraph of K3,3 with parts 0..2 and 3..5")
    _check_st(g, s, t)
    part = lambda x: 0 if x < 3 else 1  # noqa: E731
    own = [x for x in range(6) if part(x) == part(s) and x != s]
    other = [x for x in range(6) if part(x) != part(s)]
    if part(s) == part(t):
        b = next(x for x in own if x != t)
        roles = {"s": s, "t": t, "b": b, "v1": other[0], "v2": other[1], "v3": other[2]}
        table, case = _K33_SAME, "same-part"
    else:
        b, c = own
        v1, v2 = [x for x in other if x != t]
        roles = {"s": s, "t": t, "b": b, "c": c, "v1": v1, "v2": v2}
        table, case = _K33_OPPOSITE, "opposite-parts"
    rule = PreferenceRule(_bind(table, roles))
    return ForwardingPattern(SD, g, rule, s, t, {"alg": "k33-source", "case": case})


# destination-only patterns ----------------------------------------------

_K5M2 = {
    ("v1", None): ("v2", "v3", "v4"),
    ("v1", "v3"): ("v2", "v4", "v3"),
    ("v1", "v4"): ("v2", "v3", "v4"),
    ("v1", "v2"): ("v3", "v4", "v2"),  # both t-neighbors already tried; any order
    ("v2", None): ("v1", "v4", "v3"),  # v1, v3, v4 loops once (v1,v2), (v1,v3), (v2,t) fail
    ("v2", "v3"): ("v1", "v4", "v3"),
    ("v2", "v4"): ("v1", "v3", "v4"),
    ("v2", "v1"): ("v3", "v4", "v1"),  # likewise
    ("v3", None): ("v2", "v1", "v4"),
    ("v3", "v1"): ("v2", "v4", "v1"),
    ("v3", "v2"): ("v1", "v4", "v2"),
    ("v3", "v4"): ("v1", "v2", "v4"),
    ("v4", None): ("v1", "v2", "v4"),  # the self entry is skipped, v3 comes from completion
    ("v4", "v1"): ("v2", "v3", "v1"),
    ("v4", "v2"): ("v1", "v3", "v2"),
    ("v4", "v3"): ("v2", "v1", "v3"),
}


def gen_k5m2_dest(g: Graph, t: int) -> ForwardingPattern:
    if g.n != 5:
        raise ShapeError("expected a five-node graph")
    _check_st(g, None, t)
    if g.m > 8:
        raise ShapeError("graph has more edges than K5 minus two")
    nbrs = list(g.adj[t])
    if len(nbrs) >= 3:
        p = gen_outerplanar_plus_dest(g, t)
        return ForwardingPattern(DEST, g, p.rule, None, t, {"alg": "k5m2-dest", "case": "outerplanar"})
    rest = [x for x in range(5) if x != t and x not in nbrs]
    order = nbrs + rest  # t's neighbors first, padded when t lost more links
    roles = {"t": t, "v1": order[0], "v2": order[1], "v3": order[2], "v4": order[3]}
    rule = PreferenceRule(_bind(_K5M2, roles))
    return ForwardingPattern(DEST, g, rule, None, t, {"alg": "k5m2-dest", "case": "table"})


def gen_k33m2_dest(g: Graph, t: int) -> ForwardingPattern:
    if g.n != 6 or any(not (u < 3 <= v) for u, v in g.edges):
        raise ShapeError("expected a subgraph of K3,3 with parts 0..2 and 3..5")
    if g.m > 7:
        raise ShapeError("expected at least two missing links")
    _check_st(g, None, t)
    nbrs = g.adj[t]
    if len(nbrs) != 1:
        p = gen_outerplanar_plus_dest(g, t)
        return ForwardingPattern(DEST, g, p.rule, None, t, {"alg": "k33m2-dest", "case": "outerplanar"})
    (hub,) = nbrs
    keep = [x for x in range(g.n) if x not in (t, hub)]
    emb = _embed_nx(_induced(g, keep))
    if emb is None:
        raise ShapeError("graph without t and its neighbor is not outerplanar")
    rule = RotationRule(emb.rotation, (t, hub))
    return ForwardingPattern(DEST, g, rule, None, t, {"alg": "k33m2-dest", "case": "via-hub", "hub": hub})


# distance patterns ------------------------------------------------------


def gen_distance2(g: Graph, s: int, t: int) -> ForwardingPattern:
    _check_st(g, s, t)
    return ForwardingPattern(SD, g, CyclerRule(frozenset({s})), s, t, {"alg": "distance2"})


def gen_distance3_bipartite(g: Graph, s: int, t: int) -> ForwardingPattern:
    _check_st(g, s, t)
    if not nx.is_bipartite(g.to_nx()):
        raise ShapeError("graph is not bipartite")
    cyc = frozenset({s, *g.adj[s]})
    return ForwardingPattern(SD, g, CyclerRule(cyc), s, t, {"alg": "distance3-bipartite"})


def gen_round_robin(g: Graph, s: int, t: int) -> ForwardingPattern:
    """Naive baseline: hop to t, otherwise every node rotates ascending after the inport."""
    _check_st(g, s, t)
    return ForwardingPattern(SD, g, CyclerRule(frozenset(range(g.n))), s, t, {"alg": "round-robin"})


def gen_cyclic(
    g: Graph,
    rotation: Mapping[int, Sequence[int]],
    model: RoutingModel = TOUR,
    s: int | None = None,
    t: int | None = None,
) -> ForwardingPattern:
    """Pattern given by explicit cyclic orders; the first entry is used on an empty inport."""
    rot = {v: tuple(rotation.get(v, g.adj[v])) for v in range(g.n)}
    for v, order in rot.items():
        if sorted(order) != list(g.adj[v]):
            raise ShapeError(f"rotation at {v} is not a permutation of its neighbors")
    targets = (t,) if t is not None else ()
    return ForwardingPattern(model, g, RotationRule(rot, targets), s, t, {"alg": "cyclic"})


# outerplanar embeddings and tours ---------------------------------------


@dataclass(frozen=True)
class OuterplanarEmbedding:
    """Rotation system with every node on the outer face.

    ``rotation[v]`` lists v's neighbors in clockwise order, starting right
    after the outer-face gap.
    """

    rotation: Mapping[int, tuple[int, ...]]
    outer_cycle: tuple[int, ...]


class _Apex:
    def __repr__(self) -> str:
        return "apex"


def _embed_nx(h: nx.Graph) -> OuterplanarEmbedding | None:
    apex = _Apex()
    aug = h.copy()
    aug.add_edges_from((apex, v) for v in list(h.nodes()))
    ok, emb = nx.check_planarity(aug)
    if not ok:
        return None
    rotation = {}
    for v in sorted(h.nodes()):
        order = list(emb.neighbors_cw_order(v))
        i = order.index(apex)
        rotation[v] = tuple(order[i + 1 :] + order[:i])
    outer = list(emb.neighbors_cw_order(apex)) if len(h) else []
    if outer:
        k = outer.index(min(outer))
        outer = outer[k:] + outer[:k]
    return OuterplanarEmbedding(rotation, tuple(outer))


def _induced(g: Graph, keep: Sequence[int]) -> nx.Graph:
    ks = set(keep)
    h = nx.Graph()
    h.add_nodes_from(sorted(ks))
    h.add_edges_from((u, v) for u, v in g.edges if u in ks and v in ks)
    return h


def compute_outerplanar_embedding(g: Graph) -> OuterplanarEmbedding:
    emb = _embed_nx(g.to_nx())
    if emb is None:
        raise ShapeError("graph is not outerplanar")
    return emb


def gen_outerplanar_tour(g: Graph, emb: OuterplanarEmbedding | None = None) -> ForwardingPattern:
    if emb is None:
        emb = compute_outerplanar_embedding(g)
    return ForwardingPattern(TOUR, g, RotationRule(dict(emb.rotation)), provenance={"alg": "outerplanar-tour"})


def gen_outerplanar_plus_dest(g: Graph, t: int) -> ForwardingPattern:
    _check_st(g, None, t)
    emb = _embed_nx(_induced(g, [x for x in range(g.n) if x != t]))
    if emb is None:
        raise ShapeError("graph without the destination is not outerplanar")
    return ForwardingPattern(DEST, g, RotationRule(emb.rotation, (t,)), None, t, {"alg": "outerplanar-dest"})


# Hamiltonian decompositions ---------------------------------------------


@dataclass(frozen=True)
class HamDecomposition:
    n: int
    cycles: tuple[tuple[int, ...], ...]

    def validate(self) -> None:
        used: set[tuple[int, int]] = set()
        for c in self.cycles:
            if sorted(c) != list(range(self.n)):
                raise ShapeError("cycle is not Hamiltonian")
            for i in range(len(c)):
                e = tuple(sorted((c[i], c[(i + 1) % len(c)])))
                if e in used:
                    raise ShapeError(f"edge {e} used twice")
                used.add(e)


def _walecki(n: int) -> list[list[int]]:
    """Walecki's zigzag cycles for odd n; node n-1 plays the hub."""
    k = (n - 1) // 2
    m = n - 1
    out = []
    for i in range(k):
        path = [i]
        for j in range(1, m):
            step = (j + 1) // 2
            path.append((i + step) % m if j % 2 else (i - step) % m)
        out.append([m] + path)
    return out


def _bipartite_cycles(a: int) -> list[list[int]]:
    """K_{a,a}, a even: pair the difference classes 2j and 2j+1 into one cycle."""
    out = []
    for j in range(a // 2):
        cyc, x = [], 0
        for _ in range(a):
            y = (x + 2 * j) % a
            cyc += [x, a + y]
            x = (y - 2 * j - 1) % a
        out.append(cyc)
    return out


def _insert_extra(cycles: list[list[int]], extra: int) -> list[list[int]]:
    """Thread a new node into each cycle through pairwise disjoint edges."""
    choice: list[int] = []

    def search(i: int, blocked: set[int]) -> bool:
        if i == len(cycles):
            return True
        c = cycles[i]
        for j in range(len(c)):
            u, v = c[j], c[(j + 1) % len(c)]
            if u in blocked or v in blocked:
                continue
            choice.append(j)
            if search(i + 1, blocked | {u, v}):
                return True
            choice.pop()
        return False

    if not search(0, set()):
        raise ShapeError("no disjoint insertion edges")
    return [c[: j + 1] + [extra] + c[j + 1 :] for c, j in zip(cycles, choice)]


def ham_decompose(g: Graph) -> HamDecomposition:
    n = g.n
    if g.m == n * (n - 1) // 2 and n >= 3:
        if n % 2:
            cycles = _walecki(n)
        else:
            # K_n minus a perfect matching: Walecki on n-1 nodes plus one threaded node
            cycles = _insert_extra(_walecki(n - 1), n - 1) if n >= 4 else []
    else:
        a = n // 2
        if n % 2 or a % 2 or g.m != a * a or any(not (u < a <= v) for u, v in g.edges):
            raise ShapeError("need a complete graph or a balanced complete bipartite graph with even parts")
        cycles = _bipartite_cycles(a)
    d = HamDecomposition(n, tuple(tuple(c) for c in cycles))
    d.validate()
    return d


@dataclass(frozen=True)
class HamRule:
    succ: Mapping[tuple[int, int], int]  # (cycle, node) -> successor
    pred: Mapping[tuple[int, int], int]
    owner: Mapping[tuple[int, int], int]  # undirected edge -> cycle index
    k: int
    hop_to_t: bool = False

    def __call__(self, node, alive, inport, s, t):
        if self.hop_to_t and t is not None and t in alive:
            return t
        if inport is BOT:
            i, lo = None, 0
        else:
            i = self.owner.get((min(node, inport), max(node, inport)))
            lo = 0 if i is None else i + 1
        if i is not None:
            a, b = self.succ[(i, node)], self.pred[(i, node)]
            nxt = b if inport == a else a
            if nxt in alive:
                return nxt
        for j in range(lo, self.k):
            for cand in (self.succ[(j, node)], self.pred[(j, node)]):
                if cand in alive:
                    return cand
        return _bounce(alive, inport)


def _ham_rule(d: HamDecomposition, hop_to_t: bool) -> HamRule:
    succ, pred, owner = {}, {}, {}
    for i, c in enumerate(d.cycles):
        for j, v in enumerate(c):
            w = c[(j + 1) % len(c)]
            succ[(i, v)] = w
            pred[(i, w)] = v
            owner[(min(v, w), max(v, w))] = i
    return HamRule(succ, pred, owner, len(d.cycles), hop_to_t)


def gen_ham_tour(d: HamDecomposition, g: Graph | None = None) -> ForwardingPattern:
    if g is None:
        g = complete(d.n)
    return ForwardingPattern(TOUR, g, _ham_rule(d, False), provenance={"alg": "ham-tour", "k": len(d.cycles)})


def gen_ham_route(g: Graph, s: int, t: int) -> ForwardingPattern:
    """Source-destination variant: hop to t, otherwise follow the cycle tour."""
    _check_st(g, s, t)
    d = ham_decompose(g)
    return ForwardingPattern(SD, g, _ham_rule(d, True), s, t, {"alg": "ham-route", "k": len(d.cycles)})


# projection onto minors -------------------------------------------------


@dataclass(frozen=True)
class ProjectedRule:
    """Simulate a host pattern inside the branch sets of a minor model.

    Host edges that are neither spanning-tree edges of a branch set nor
    witnesses count as failed. A packet at minor node x entering over minor
    edge (y, x) is the host packet at the witness endpoint in x's branch set.
    """

    inner: ForwardingPattern
    tree_adj: Mapping[int, tuple[int, ...]]  # host node -> tree neighbors in its branch set
    witness: Mapping[tuple[int, int], tuple[int, int]]  # (x, y) -> (host in x, host in y)
    rep: Mapping[int, int]
    host_owner: Mapping[int, int]

    def __call__(self, node, alive, inport, s, t):
        p = self.inner
        gate: dict[int, int] = {}  # host node on the far side -> minor neighbor
        local: dict[int, list[int]] = {}
        for y in alive:
            hx, hy = self.witness[(node, y)]
            gate[hy] = y
            local.setdefault(hx, []).append(hy)
        if inport is BOT:
            cur, came = self.rep[node], BOT
        else:
            cur, came = self.witness[(node, inport)]
        seen = set()
        while (cur, came) not in seen:
            seen.add((cur, came))
            nb = tuple(sorted(set(self.tree_adj.get(cur, ())) | set(local.get(cur, ()))))
            if not nb:
                return None
            nxt = p.out(cur, nb, came)
            if nxt in gate and self.host_owner[nxt] != node:
                return gate[nxt]
            cur, came = nxt, cur
        return _bounce(alive, inport)


def project_to_minor(p: ForwardingPattern, m: MinorMapping) -> ForwardingPattern:
    m.validate()
    if m.host != p.graph:
        raise ShapeError("mapping host differs from the pattern's graph")
    owner = m.owner()
    tree_adj: dict[int, list[int]] = {}
    for bs in m.branch_sets:
        sub = nx.Graph()
        sub.add_nodes_from(bs)
        sub.add_edges_from((u, v) for u, v in m.host.edges if u in bs and v in bs)
        for u, v in sorted(nx.minimum_spanning_tree(sub).edges()):
            tree_adj.setdefault(u, []).append(v)
            tree_adj.setdefault(v, []).append(u)
    witness = {}
    for (x, y), (hx, hy) in zip(m.minor.edges, m.witnesses):
        if owner[hx] != x:
            hx, hy = hy, hx
        witness[(x, y)] = (hx, hy)
        witness[(y, x)] = (hy, hx)

    def image(v):
        return None if v is None else owner[v]

    rep = {i: min(bs) for i, bs in enumerate(m.branch_sets)}
    if p.s is not None:
        rep[owner[p.s]] = p.s
    if p.t is not None:
        rep[owner[p.t]] = p.t
    rule = ProjectedRule(p, {k: tuple(v) for k, v in tree_adj.items()}, witness, rep, owner)
    prov = {"alg": "projected", "from": dict(p.provenance)}
    return ForwardingPattern(p.model, m.minor, rule, image(p.s), image(p.t), prov)


GENERATORS = {
    "alg1-k5": gen_alg1_k5,
    "k33-source": gen_k33_source,
    "k5m2-dest": gen_k5m2_dest,
    "k33m2-dest": gen_k33m2_dest,
    "distance2": gen_distance2,
    "distance3-bipartite": gen_distance3_bipartite,
    "round-robin": gen_round_robin,
    "outerplanar-tour": gen_outerplanar_tour,
    "outerplanar-dest": gen_outerplanar_plus_dest,
    "ham-tour": lambda g: gen_ham_tour(ham_decompose(g), g),
    "ham-route": gen_ham_route,
}
