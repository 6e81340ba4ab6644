"""Planarity, outerplanarity, minor search and per-model classification."""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Iterable

import networkx as nx

from .forwarding import RoutingModel
from .graph import (
    Graph,
    GraphError,
    MinorMapping,
    complete,
    complete_bipartite,
    mapping_from_bags,
    minus_edges,
)
from .patterns import OuterplanarEmbedding, _embed_nx

log = logging.getLogger(__name__)


# named small graphs ----------------------------------------------------


def k5_minus(c: int) -> list[Graph]:
    """All shapes of K5 with ``c`` edges removed (c <= 2), one per isomorphism class."""
    return _minus_shapes(complete(5), c)


def k33_minus(c: int) -> list[Graph]:
    return _minus_shapes(complete_bipartite(3, 3), c)


def _minus_shapes(base: Graph, c: int) -> list[Graph]:
    shapes: list[Graph] = []
    for drop in combinations(base.edges, c):
        g = minus_edges(base, drop)
        if not any(nx.is_isomorphic(g.to_nx(), h.to_nx()) for h in shapes):
            shapes.append(g)
    return shapes


FORBIDDEN = {
    RoutingModel.DESTINATION_ONLY: ("K5-1", "K3,3-1"),
    RoutingModel.SOURCE_DESTINATION: ("K7-1", "K4,4-1"),
}


@lru_cache(maxsize=None)
def named_graph(name: str) -> Graph:
    table = {
        "K4": lambda: complete(4),
        "K2,3": lambda: complete_bipartite(2, 3),
        "K5": lambda: complete(5),
        "K3,3": lambda: complete_bipartite(3, 3),
        "K5-1": lambda: minus_edges(complete(5), [(0, 1)]),
        "K3,3-1": lambda: minus_edges(complete_bipartite(3, 3), [(0, 3)]),
        "K7-1": lambda: minus_edges(complete(7), [(0, 1)]),
        "K4,4-1": lambda: minus_edges(complete_bipartite(4, 4), [(0, 4)]),
    }
    if name not in table:
        raise KeyError(f"unknown graph {name!r}")
    return table[name]()


# planarity -------------------------------------------------------------


@dataclass(frozen=True)
class PlanarityResult:
    planar: bool
    rotation: dict | None = None  # clockwise neighbor order per node

    def __bool__(self) -> bool:
        return self.planar


def is_planar(g: Graph) -> PlanarityResult:
    ok, emb = nx.check_planarity(g.to_nx())
    if not ok:
        return PlanarityResult(False)
    return PlanarityResult(True, {v: tuple(emb.neighbors_cw_order(v)) for v in range(g.n)})


@dataclass(frozen=True)
class OuterplanarityResult:
    outerplanar: bool
    embedding: OuterplanarEmbedding | None = None
    witness: MinorMapping | None = None  # K4 or K2,3 model when not outerplanar

    def __bool__(self) -> bool:
        return self.outerplanar


def _outerplanar_nx(h: nx.Graph) -> bool:
    aug = h.copy()
    apex = ("apex",)
    aug.add_edges_from((apex, v) for v in list(h.nodes()))
    return nx.check_planarity(aug)[0]


def is_outerplanar(g: Graph, witness: bool = True) -> OuterplanarityResult:
    emb = _embed_nx(g.to_nx())
    if emb is not None:
        return OuterplanarityResult(True, emb)
    return OuterplanarityResult(False, None, outerplanar_witness(g) if witness else None)


def outerplanar_witness(g: Graph) -> MinorMapping:
    """A K4 or K2,3 minor model inside a non-outerplanar graph.

    Edges are dropped from a non-outerplanar block while it stays
    non-outerplanar. What remains is a subdivision of K4 or K2,3, whose
    paths are folded into branch sets.
    """
    h = g.to_nx()
    block = None
    for comp in nx.biconnected_components(h):
        sub = h.subgraph(comp)
        if not _outerplanar_nx(sub):
            block = nx.Graph(sub)
            break
    if block is None:
        raise GraphError("graph is outerplanar")
    keep = sorted(tuple(sorted(e)) for e in block.edges())
    size = max(1, len(keep) // 2)
    while True:
        i = 0
        while i < len(keep):
            trial = keep[:i] + keep[i + size :]
            if not _outerplanar_nx(nx.Graph(trial)):
                keep = trial
            else:
                i += size
        if size == 1:
            break
        size = max(1, size // 2)
    s = nx.Graph(keep)
    branch = sorted(v for v in s if s.degree(v) >= 3)
    paths = _branch_paths(s, branch)
    if len(branch) == 4:
        bags = {b: {b} for b in branch}
        for p in paths:
            bags[p[0]].update(p[1:-1])
        return mapping_from_bags(g, complete(4), [bags[b] for b in branch])
    if len(branch) == 2:
        u, w = branch
        mids = sorted((sorted(p[1:-1]) for p in paths), key=lambda x: x[:1])
        if len(mids) != 3 or not all(mids):
            raise GraphError("unexpected minimal non-outerplanar subgraph")
        return mapping_from_bags(g, complete_bipartite(2, 3), [{u}, {w}] + [set(x) for x in mids])
    raise GraphError("unexpected minimal non-outerplanar subgraph")


def _branch_paths(s: nx.Graph, branch: list[int]) -> list[list[int]]:
    """Paths between branch vertices through degree-2 nodes, each listed once."""
    bset = set(branch)
    out = []
    for b in branch:
        for nb in sorted(s[b]):
            path, prev, cur = [b], b, nb
            while cur not in bset:
                path.append(cur)
                prev, cur = cur, next(x for x in s[cur] if x != prev)
            path.append(cur)
            if (b, path[1]) <= (cur, path[-2]):
                out.append(path)
    return out


# minor search ----------------------------------------------------------


@dataclass(frozen=True)
class MinorBudget:
    exact_max_nodes: int = 30
    max_states: int = 20000
    heuristic_tries: int = 40
    time_limit: float | None = None  # seconds; None keeps runs deterministic
    seed: int = 0


@dataclass(frozen=True)
class MinorQueryResult:
    kind: str  # "found" | "absent" | "unknown"
    mapping: MinorMapping | None = None
    reason: str = ""
    states: int = 0

    @property
    def found(self) -> bool:
        return self.kind == "found"

    @property
    def absent(self) -> bool:
        return self.kind == "absent"


class _OutOfBudget(Exception):
    pass


class _State:
    """A minor of the host under construction: adjacency plus host bags."""

    __slots__ = ("adj", "bags")

    def __init__(self, adj: dict[int, set[int]], bags: dict[int, frozenset[int]]):
        self.adj = adj
        self.bags = bags

    @classmethod
    def of(cls, h: nx.Graph) -> "_State":
        return cls({v: set(h[v]) for v in h}, {v: frozenset([v]) for v in h})

    def copy(self) -> "_State":
        return _State({v: set(a) for v, a in self.adj.items()}, dict(self.bags))

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj.values()) // 2

    def delete(self, v: int) -> None:
        for u in self.adj.pop(v):
            self.adj[u].discard(v)
        del self.bags[v]

    def contract(self, keep: int, gone: int) -> None:
        nb = self.adj.pop(gone)
        for u in nb:
            self.adj[u].discard(gone)
            if u != keep:
                self.adj[u].add(keep)
                self.adj[keep].add(u)
        self.bags[keep] = self.bags[keep] | self.bags.pop(gone)

    def nx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(self.adj)
        h.add_edges_from((u, v) for u, a in self.adj.items() for v in a if u < v)
        return h


@dataclass(frozen=True)
class _Pattern:
    """Precomputed facts about the minor being searched for."""

    graph: Graph
    h: nx.Graph
    n: int
    m: int
    rank: int  # cycle rank, which never grows under minor operations
    degs: tuple[int, ...]
    prune_leaves: bool  # min degree >= 2: host leaves are useless
    suppress: bool  # min degree >= 3: degree-2 host nodes can be contracted away
    shorten: bool  # max degree 3, min degree 2: chains of degree-2 nodes can be cut to one
    two_connected: bool
    planar: bool
    has_k4: bool
    order: tuple[int, ...]  # matching order, each node after one of its neighbors
    back: tuple[tuple[int, ...], ...]  # earlier neighbors of order[i]


_PATTERNS: dict[tuple, _Pattern] = {}


def _pattern(h: Graph) -> _Pattern:
    key = (h.n, h.edges)
    if key not in _PATTERNS:
        _PATTERNS[key] = _make_pattern(h)
    return _PATTERNS[key]


def _make_pattern(h: Graph) -> _Pattern:
    x = h.to_nx()
    if not nx.is_connected(x):
        raise GraphError("minor pattern must be connected")
    degs = tuple(sorted((d for _, d in x.degree()), reverse=True))
    deg2 = {v for v in x if x.degree(v) == 2}
    shorten = degs[0] == 3 and degs[-1] >= 2 and not any(u in deg2 and v in deg2 for u, v in x.edges())
    return _Pattern(
        h,
        x,
        h.n,
        h.m,
        h.m - h.n + 1,
        degs,
        degs[-1] >= 2,
        degs[-1] >= 3,
        shorten,
        h.n >= 3 and nx.is_biconnected(x),
        nx.check_planarity(x)[0],
        _has_k4_minor(x),
        *_match_order(x),
    )


def _match_order(x: nx.Graph):
    order = [max(x, key=lambda v: (x.degree(v), -v))]
    while len(order) < len(x):
        rest = [v for v in x if v not in order]
        order.append(max(rest, key=lambda v: (sum(u in order for u in x[v]), x.degree(v), -v)))
    back = tuple(tuple(u for u in order[:i] if x.has_edge(u, v)) for i, v in enumerate(order))
    return tuple(order), back


def _reduce(st: _State, pat: _Pattern) -> None:
    """Apply minor-preserving simplifications until none applies."""
    changed = True
    while changed:
        changed = False
        for v in sorted(st.adj):
            if v not in st.adj:
                continue
            d = len(st.adj[v])
            if d == 0 or (d == 1 and pat.prune_leaves):
                st.delete(v)
                changed = True
            elif d == 2 and pat.suppress:
                st.contract(min(st.adj[v]), v)
                changed = True
            elif d == 2 and pat.shorten:
                u = next((x for x in sorted(st.adj[v]) if len(st.adj[x]) == 2), None)
                if u is not None:
                    st.contract(u, v)
                    changed = True


def _has_k4_minor(h: nx.Graph) -> bool:
    # graphs without a K4 minor reduce to nothing under leaf deletion and
    # suppression of degree-2 nodes
    st = _State.of(h)
    _reduce(st, _SUPPRESS_ONLY)
    return st.n > 0


class _SuppressOnly:
    prune_leaves = True
    suppress = True
    shorten = False


_SUPPRESS_ONLY = _SuppressOnly()


def _rank(st: _State) -> int:
    h = st.nx()
    return st.m - st.n + nx.number_connected_components(h) if st.n else 0


def _degree_ok(st: _State, pat: _Pattern) -> bool:
    ds = sorted((len(a) for a in st.adj.values()), reverse=True)
    if len(ds) < pat.n:
        return False
    return all(ds[i] >= pat.degs[i] for i in range(pat.n))


def _monomorphism(st: _State, pat: _Pattern) -> dict | None:
    """Injective edge-preserving map from the pattern into the state, by backtracking."""
    if not _degree_ok(st, pat):
        return None
    adj = st.adj
    order, back = pat.order, pat.back
    need = [pat.h.degree(p) for p in order]
    by_deg = sorted(adj, key=lambda v: (-len(adj[v]), v))
    img: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        if back[i]:
            cand = set.intersection(*(adj[img[q]] for q in back[i])) - used
            cand = sorted(cand)
        else:
            cand = [v for v in by_deg if v not in used]
        for v in cand:
            if len(adj[v]) < need[i]:
                continue
            img[order[i]] = v
            used.add(v)
            if extend(i + 1):
                return True
            used.discard(v)
        img.pop(order[i], None)
        return False

    return dict(img) if extend(0) else None


def _to_mapping(host: Graph, h: Graph, st: _State, emb: dict) -> MinorMapping:
    # the cached pattern may carry another name, so map onto the caller's graph
    bags = [st.bags[emb[i]] for i in range(h.n)]
    return mapping_from_bags(host, h, bags)


_ISO_CHECKS = 4


class _Search:
    def __init__(self, pat: _Pattern, budget: MinorBudget, deadline: float | None):
        self.pat = pat
        self.budget = budget
        self.deadline = deadline
        self.states = 0
        self.seen: dict[tuple, list[nx.Graph]] = {}
        self.parts: set[frozenset] = set()

    def tick(self) -> None:
        self.states += 1
        if self.states > self.budget.max_states:
            raise _OutOfBudget("state budget")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _OutOfBudget("time budget")

    def feasible(self, st: _State) -> bool:
        p = self.pat
        return st.n >= p.n and st.m >= p.m and _rank(st) >= p.rank

    def fresh(self, st: _State) -> bool:
        # the same host partition reached by another contraction order
        part = frozenset(st.bags.values())
        if part in self.parts:
            return False
        self.parts.add(part)
        h = st.nx()
        key = (st.n, st.m, tuple(sorted(d for _, d in h.degree())), nx.weisfeiler_lehman_graph_hash(h, iterations=3))
        bucket = self.seen.setdefault(key, [])
        # Regular graphs collide a lot under the hash; comparing against a few
        # members keeps most of the pruning, and a missed repeat costs only time.
        for other in bucket[:_ISO_CHECKS]:
            if nx.vf2pp_is_isomorphic(h, other):
                return False
        if len(bucket) < _ISO_CHECKS:
            bucket.append(h)
        return True

    def run(self, st: _State) -> tuple[_State, dict] | None:
        """Depth-first over edge contractions, skipping isomorphic repeats."""
        _reduce(st, self.pat)
        if not self.feasible(st) or not self.fresh(st):
            return None
        self.tick()
        emb = _monomorphism(st, self.pat)
        if emb is not None:
            return st, emb
        if st.n == self.pat.n:
            return None
        edges = sorted(
            ((u, v) for u, a in st.adj.items() for v in a if u < v),
            key=lambda e: (len(st.adj[e[0]]) + len(st.adj[e[1]]), e),
        )
        for u, v in edges:
            child = st.copy()
            child.contract(u, v)
            hit = self.run(child)
            if hit is not None:
                return hit
        return None


def contains_minor(g: Graph, h: Graph, budget: MinorBudget | None = None) -> MinorQueryResult:
    """Decide whether ``h`` is a minor of ``g``.

    Absent is reported only when it is certain: a size, cycle-rank, planarity
    or K4 argument, or an exhaustive contraction search. Hosts that stay
    larger than ``exact_max_nodes`` after simplification get seeded random
    contractions followed by a bounded exact search, which can only find.
    """
    budget = budget or MinorBudget()
    if h.n > 8:
        raise GraphError("minor patterns are limited to 8 nodes")
    pat = _pattern(h)
    host = g.to_nx()
    if pat.n > g.n or pat.m > g.m:
        return MinorQueryResult("absent", reason="host too small")
    if not pat.planar and nx.check_planarity(host)[0]:
        return MinorQueryResult("absent", reason="host planar, pattern not")
    if pat.has_k4 and not _has_k4_minor(host):
        return MinorQueryResult("absent", reason="host has no K4 minor")
    if pat.two_connected:
        parts = [host.subgraph(c).copy() for c in nx.biconnected_components(host) if len(c) >= pat.n]
    else:
        parts = [host.subgraph(c).copy() for c in nx.connected_components(host) if len(c) >= pat.n]
    parts.sort(key=lambda x: (len(x), min(x)))
    deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
    states = 0
    unknown = ""
    for part in parts:
        st = _State.of(part)
        _reduce(st, pat)
        if st.n <= budget.exact_max_nodes:
            search = _Search(pat, budget, deadline)
            try:
                hit = search.run(st)
            except _OutOfBudget as e:
                unknown = str(e)
                states += search.states
                continue
            states += search.states
            if hit is not None:
                return MinorQueryResult("found", _to_mapping(g, h, *hit), "exact search", states)
        else:
            hit, used = _heuristic(st, pat, budget, deadline)
            states += used
            if hit is not None:
                return MinorQueryResult("found", _to_mapping(g, h, *hit), "heuristic", states)
            unknown = "heuristic gave up"
    if unknown:
        return MinorQueryResult("unknown", reason=unknown, states=states)
    return MinorQueryResult("absent", reason="exhaustive search", states=states)


def _heuristic(st: _State, pat: _Pattern, budget: MinorBudget, deadline):
    rng = random.Random(budget.seed)
    used = 0
    per_try = max(50, budget.max_states // max(1, budget.heuristic_tries))
    for _ in range(budget.heuristic_tries):
        cur = st.copy()
        while cur.n > budget.exact_max_nodes:
            edges = sorted((u, v) for u, a in cur.adj.items() for v in a if u < v)
            if not edges:
                break
            # favour contracting sparse regions, which keeps dense cores intact
            weights = [1.0 / (len(cur.adj[u]) + len(cur.adj[v])) ** 2 for u, v in edges]
            u, v = rng.choices(edges, weights)[0]
            cur.contract(u, v)
            _reduce(cur, pat)
        if cur.n < pat.n:
            continue
        search = _Search(pat, MinorBudget(budget.exact_max_nodes, per_try), deadline)
        try:
            hit = search.run(cur)
        except _OutOfBudget:
            hit = None
        used += search.states
        if hit is not None:
            return hit, used
        if deadline is not None and time.monotonic() > deadline:
            break
    return None, used


# minors of the small positive graphs -------------------------------------


SMALL_HOSTS = {
    "K5": lambda: [complete(5)],
    "K3,3": lambda: [complete_bipartite(3, 3)],
    "K5-2": lambda: k5_minus(2),
    "K3,3-2": lambda: k33_minus(2),
}


@lru_cache(maxsize=None)
def minors_of(name: str) -> tuple[nx.Graph, ...]:
    """Every minor of the named host up to isomorphism, isolated nodes included."""
    found: list[nx.Graph] = []
    buckets: dict[tuple, list[nx.Graph]] = {}

    def add(x: nx.Graph) -> bool:
        key = (x.number_of_nodes(), x.number_of_edges(), tuple(sorted(d for _, d in x.degree())))
        b = buckets.setdefault(key, [])
        if any(nx.is_isomorphic(x, y) for y in b):
            return False
        b.append(x)
        found.append(x)
        return True

    todo = [h.to_nx() for h in SMALL_HOSTS[name]()]
    todo = [x for x in todo if add(x)]
    while todo:
        x = todo.pop()
        kids = []
        for u, v in list(x.edges()):
            y = x.copy()
            y.remove_edge(u, v)
            kids.append(y)
            kids.append(nx.convert_node_labels_to_integers(nx.contracted_nodes(x, u, v, self_loops=False)))
        for v in list(x.nodes()):
            y = x.copy()
            y.remove_node(v)
            kids.append(y)
        for y in kids:
            y = nx.convert_node_labels_to_integers(nx.Graph(y))
            if add(y):
                todo.append(y)
    return tuple(found)


def is_minor_of_small(g: Graph, name: str) -> bool:
    if name not in SMALL_HOSTS:
        raise KeyError(f"unsupported host {name!r}")
    hosts = SMALL_HOSTS[name]()
    if g.n > max(h.n for h in hosts) or g.m > max(h.m for h in hosts):
        return False
    x = g.to_nx()
    key = (g.n, g.m, tuple(sorted(d for _, d in x.degree())))
    for y in minors_of(name):
        if (y.number_of_nodes(), y.number_of_edges(), tuple(sorted(d for _, d in y.degree()))) == key:
            if nx.is_isomorphic(x, y):
                return True
    return False


# classification --------------------------------------------------------


class Status(str, Enum):
    POSSIBLE = "Possible"
    IMPOSSIBLE = "Impossible"
    SOMETIMES = "Sometimes"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ModelVerdict:
    status: Status
    evidence: str = ""
    witness: MinorMapping | None = None
    fraction: float | None = None  # set for Sometimes


@dataclass(frozen=True)
class Classification:
    name: str
    n: int
    m: int
    planar: bool
    outerplanar: bool
    verdicts: dict[RoutingModel, ModelVerdict]
    sometimes_fraction: float
    good_destinations: tuple[int, ...] = ()
    seconds: float = 0.0
    notes: tuple[str, ...] = field(default_factory=tuple)

    def status(self, model: RoutingModel) -> Status:
        return self.verdicts[model].status

    def row(self) -> dict:
        """Flat record, one per topology."""
        v = self.verdicts
        return {
            "name": self.name,
            "n": self.n,
            "m": self.m,
            "planar": int(self.planar),
            "outerplanar": int(self.outerplanar),
            "touring": v[RoutingModel.TOURING].status.value,
            "destination": v[RoutingModel.DESTINATION_ONLY].status.value,
            "source_destination": v[RoutingModel.SOURCE_DESTINATION].status.value,
            "sometimes_fraction": f"{self.sometimes_fraction:.6f}",
            "witness": "; ".join(
                f"{model.value}:{vd.evidence}" for model, vd in v.items() if vd.evidence
            ),
            "seconds": f"{self.seconds:.3f}",
        }


ROW_FIELDS = ["name", "n", "m", "planar", "outerplanar", "touring", "destination",
              "source_destination", "sometimes_fraction", "witness", "seconds"]


def good_destinations(g: Graph) -> list[int]:
    """Nodes whose removal leaves an outerplanar graph."""
    # Outerplanarity is decided block by block, so t must lie in every
    # non-outerplanar block and only those blocks need re-testing without t.
    h = g.to_nx()
    bad = [c for c in nx.biconnected_components(h) if not _outerplanar_nx(h.subgraph(c))]
    if not bad:
        return list(range(g.n))
    cand = set.intersection(*map(set, bad))
    out = []
    for t in sorted(cand):
        if all(_outerplanar_nx(h.subgraph(c - {t})) for c in bad):
            out.append(t)
    return out


def sometimes_fraction(g: Graph) -> float:
    if g.n == 0:
        return 0.0
    return len(good_destinations(g)) / g.n


def _describe(m: MinorMapping) -> str:
    bags = " ".join("{" + ",".join(map(str, sorted(b))) + "}" for b in m.branch_sets)
    return f"{m.minor.name} minor {bags}"


def _routing_verdict(
    g: Graph,
    outer: bool,
    small: Iterable[str],
    forbidden: Iterable[str],
    good: list[int],
    budget: MinorBudget,
) -> ModelVerdict:
    for name in forbidden:
        res = contains_minor(g, named_graph(name), budget)
        if res.found:
            return ModelVerdict(Status.IMPOSSIBLE, _describe(res.mapping), res.mapping)
    if outer:
        return ModelVerdict(Status.POSSIBLE, "outerplanar")
    for name in small:
        if is_minor_of_small(g, name):
            return ModelVerdict(Status.POSSIBLE, f"minor of {name}")
    if good:
        frac = len(good) / g.n
        return ModelVerdict(Status.SOMETIMES, "destinations " + ",".join(map(str, good)), fraction=frac)
    return ModelVerdict(Status.UNKNOWN)


def classify(g: Graph, budget: MinorBudget | None = None, name: str | None = None) -> Classification:
    """Verdict per routing model with the first-matching rule: Impossible, Possible, Sometimes, Unknown."""
    budget = budget or MinorBudget()
    t0 = time.perf_counter()
    planar = bool(is_planar(g))
    op = is_outerplanar(g)
    good = [] if op.outerplanar else good_destinations(g)
    frac = 1.0 if op.outerplanar and g.n else (len(good) / g.n if g.n else 0.0)
    notes = []
    if g.n and not nx.is_connected(g.to_nx()):
        notes.append("disconnected; classified as a whole")
    verdicts = {}
    if op.outerplanar:
        verdicts[RoutingModel.TOURING] = ModelVerdict(Status.POSSIBLE, "outerplanar")
    else:
        verdicts[RoutingModel.TOURING] = ModelVerdict(Status.IMPOSSIBLE, _describe(op.witness), op.witness)
    verdicts[RoutingModel.DESTINATION_ONLY] = _routing_verdict(
        g, op.outerplanar, ("K5-2", "K3,3-2"), FORBIDDEN[RoutingModel.DESTINATION_ONLY], good, budget
    )
    verdicts[RoutingModel.SOURCE_DESTINATION] = _routing_verdict(
        g, op.outerplanar, ("K5", "K3,3"), FORBIDDEN[RoutingModel.SOURCE_DESTINATION], good, budget
    )
    return Classification(
        name if name is not None else g.name,
        g.n,
        g.m,
        planar,
        op.outerplanar,
        verdicts,
        frac,
        tuple(range(g.n)) if op.outerplanar else tuple(good),
        time.perf_counter() - t0,
        tuple(notes),
    )


__all__ = [
    "Classification",
    "MinorBudget",
    "MinorQueryResult",
    "ModelVerdict",
    "OuterplanarityResult",
    "PlanarityResult",
    "ROW_FIELDS",
    "Status",
    "classify",
    "contains_minor",
    "good_destinations",
    "is_minor_of_small",
    "is_outerplanar",
    "is_planar",
    "minors_of",
    "named_graph",
    "outerplanar_witness",
    "sometimes_fraction",
]
