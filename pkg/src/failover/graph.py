"""Undirected simple graphs with stable ids, failure sets and minor operations."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx


class GraphError(ValueError):
    pass


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on nodes ``0..n-1``.

    Edges are stored sorted lexicographically and the position of an edge in
    ``edges`` is its id. Neighbor lists are ascending; every tie-break in the
    package relies on that order.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""
    adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    eid: dict = field(init=False, repr=False, compare=False)
    inc: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError("negative node count")
        canon = []
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u},{v}) outside 0..{self.n - 1}")
            canon.append(_norm(u, v))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise GraphError(f"duplicate edge {a}")
        canon_t = tuple(canon)
        object.__setattr__(self, "edges", canon_t)
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in canon_t:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "adj", tuple(tuple(sorted(a)) for a in adj))
        eid = {e: i for i, e in enumerate(canon_t)}
        object.__setattr__(self, "eid", eid)
        object.__setattr__(
            self,
            "inc",
            tuple(tuple(eid[_norm(v, w)] for w in self.adj[v]) for v in range(self.n)),
        )

    @property
    def m(self) -> int:
        return len(self.edges)

    def nodes(self) -> range:
        return range(self.n)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.eid

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self.eid[_norm(u, v)]
        except KeyError:
            raise GraphError(f"no edge ({u},{v})") from None

    def to_nx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(range(self.n))
        h.add_edges_from(self.edges)
        return h

    def alive_adj(self, f: "FailureSet") -> tuple[tuple[int, ...], ...]:
        mask = f.mask
        return tuple(
            tuple(w for w, e in zip(self.adj[v], self.inc[v]) if not (mask >> e) & 1)
            for v in range(self.n)
        )

    def relabeled(self, name: str) -> "Graph":
        return Graph(self.n, self.edges, name)


@dataclass(frozen=True)
class FailureSet:
    """Set of failed edge ids, held as an integer bitmask."""

    mask: int = 0

    @classmethod
    def from_ids(cls, ids: Iterable[int]) -> "FailureSet":
        mask = 0
        for i in ids:
            mask |= 1 << i
        return cls(mask)

    @classmethod
    def from_edges(cls, g: Graph, pairs: Iterable[tuple[int, int]]) -> "FailureSet":
        return cls.from_ids(g.edge_id(u, v) for u, v in pairs)

    @classmethod
    def complement_of(cls, g: Graph, keep: Iterable[tuple[int, int]]) -> "FailureSet":
        """All edges of ``g`` fail except ``keep``."""
        full = (1 << g.m) - 1
        return cls(full & ~cls.from_edges(g, keep).mask)

    def ids(self) -> list[int]:
        out, mask, i = [], self.mask, 0
        while mask:
            if mask & 1:
                out.append(i)
            mask >>= 1
            i += 1
        return out

    def edges(self, g: Graph) -> list[tuple[int, int]]:
        return [g.edges[i] for i in self.ids()]

    def __contains__(self, eid: int) -> bool:
        return bool((self.mask >> eid) & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __or__(self, other: "FailureSet") -> "FailureSet":
        return FailureSet(self.mask | other.mask)

    def valid_for(self, g: Graph) -> bool:
        return self.mask >> g.m == 0


EMPTY = FailureSet(0)


# construction -----------------------------------------------------------


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return Graph(n, tuple(combinations(range(n), 2)), f"K{n}")


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise GraphError("both parts must be non-empty")
    edges = tuple((i, a + j) for i in range(a) for j in range(b))
    return Graph(a + b, edges, f"K{a},{b}")


def minus_edges(base: Graph, removed: Iterable[tuple[int, int]]) -> Graph:
    drop = set()
    for u, v in removed:
        e = _norm(u, v)
        if e not in base.eid:
            raise GraphError(f"cannot remove missing edge {e}")
        drop.add(e)
    name = f"{base.name}-{len(drop)}" if base.name else ""
    return Graph(base.n, tuple(e for e in base.edges if e not in drop), name)


def edge_list(pairs: Iterable[tuple[int, int]], n: int | None = None, name: str = "") -> Graph:
    pairs = [(int(u), int(v)) for u, v in pairs]
    if n is None:
        n = 1 + max((max(p) for p in pairs), default=-1)
    return Graph(n, tuple(pairs), name)


def build_graph(kind: str, *args, **kwargs) -> Graph:
    """Dispatch on ``complete``, ``complete_bipartite``, ``minus_edges`` or ``edge_list``."""
    builders = {
        "complete": complete,
        "complete_bipartite": complete_bipartite,
        "minus_edges": minus_edges,
        "edge_list": edge_list,
    }
    if kind not in builders:
        raise GraphError(f"unknown graph kind {kind!r}")
    return builders[kind](*args, **kwargs)


def from_nx(h: nx.Graph, name: str = "") -> tuple[Graph, dict]:
    """Relabel an arbitrary networkx graph to dense ids (sorted by ``str`` order of labels)."""
    order = sorted(h.nodes(), key=_label_key)
    index = {x: i for i, x in enumerate(order)}
    edges = {_norm(index[u], index[v]) for u, v in h.edges() if u != v}
    return Graph(len(order), tuple(sorted(edges)), name), index


def _label_key(x):
    s = str(x)
    return (0, int(s), "") if s.lstrip("-").isdigit() else (1, 0, s)


# connectivity -----------------------------------------------------------


def surviving_subgraph(g: Graph, f: FailureSet) -> Graph:
    """G minus F. Node set and the ids of surviving edges' endpoints are unchanged."""
    keep = tuple(e for i, e in enumerate(g.edges) if i not in f)
    return Graph(g.n, keep, g.name)


def components(g: Graph, f: FailureSet = EMPTY) -> list[list[int]]:
    adj = g.alive_adj(f)
    seen = [False] * g.n
    out = []
    for v in range(g.n):
        if seen[v]:
            continue
        comp, queue = [], deque([v])
        seen[v] = True
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
        out.append(sorted(comp))
    return out


def component_labels(adj: Sequence[Sequence[int]]) -> list[int]:
    label = [-1] * len(adj)
    for v in range(len(adj)):
        if label[v] >= 0:
            continue
        label[v] = v
        stack = [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if label[y] < 0:
                    label[y] = v
                    stack.append(y)
    return label


def st_edge_connectivity(g: Graph, f: FailureSet, u: int, v: int, cap: int | None = None) -> int:
    """Number of edge-disjoint u-v paths in G minus F.

    Augmenting paths on the unit-capacity bidirected network. ``cap`` stops
    early once that many paths are found.
    """
    if u == v:
        raise GraphError("st_edge_connectivity needs distinct endpoints")
    return _maxflow(g.alive_adj(f), u, v, cap)


def _maxflow(adj: Sequence[Sequence[int]], s: int, t: int, cap: int | None = None) -> int:
    # flow[(x, y)] in {-1, 0, 1}; residual capacity of arc x->y is 1 - flow
    flow: dict[tuple[int, int], int] = {}
    limit = len(adj[s]) if cap is None else min(cap, len(adj[s]))
    total = 0
    while total < limit:
        parent = {s: s}
        queue = deque([s])
        while queue and t not in parent:
            x = queue.popleft()
            for y in adj[x]:
                if y not in parent and flow.get((x, y), 0) < 1:
                    parent[y] = x
                    queue.append(y)
        if t not in parent:
            break
        y = t
        while y != s:
            x = parent[y]
            flow[(x, y)] = flow.get((x, y), 0) + 1
            flow[(y, x)] = flow.get((y, x), 0) - 1
            y = x
        total += 1
    return total


# minors -----------------------------------------------------------------


@dataclass(frozen=True)
class MinorStep:
    graph: Graph
    node_map: tuple[int | None, ...]  # old id -> new id, None when deleted


def apply_minor_op(g: Graph, op: str, target) -> MinorStep:
    """Apply ``contract`` (edge), ``delete_edge`` (edge) or ``delete_node`` (node)."""
    if op == "delete_edge":
        return MinorStep(minus_edges(g, [target]), tuple(range(g.n)))
    if op == "delete_node":
        x = int(target)
        if not 0 <= x < g.n:
            raise GraphError(f"no node {x}")
        mapping = tuple(None if v == x else (v if v < x else v - 1) for v in range(g.n))
        return MinorStep(_remap(g, mapping, g.n - 1), mapping)
    if op == "contract":
        a, b = _norm(*target)
        if not g.has_edge(a, b):
            raise GraphError(f"cannot contract missing edge ({a},{b})")
        # b merges into a
        mapping = tuple((a if v == b else v) if v <= b else v - 1 for v in range(g.n))
        return MinorStep(_remap(g, mapping, g.n - 1), mapping)
    raise GraphError(f"unknown minor operation {op!r}")


def _remap(g: Graph, mapping: Sequence[int | None], n: int) -> Graph:
    edges = set()
    for u, v in g.edges:
        x, y = mapping[u], mapping[v]
        if x is None or y is None or x == y:
            continue
        edges.add(_norm(x, y))
    return Graph(n, tuple(sorted(edges)), g.name)


@dataclass(frozen=True)
class MinorMapping:
    """Model of ``minor`` inside ``host``: one branch set per minor node."""

    host: Graph
    minor: Graph
    branch_sets: tuple[frozenset[int], ...]
    witnesses: tuple[tuple[int, int], ...]  # host edge per minor edge, same order as minor.edges

    def validate(self) -> None:
        h, g = self.minor, self.host
        if len(self.branch_sets) != h.n:
            raise GraphError("one branch set per minor node required")
        used: set[int] = set()
        for i, bs in enumerate(self.branch_sets):
            if not bs:
                raise GraphError(f"branch set {i} empty")
            if used & bs:
                raise GraphError(f"branch set {i} overlaps another")
            used |= bs
            if not _connected_within(g, bs):
                raise GraphError(f"branch set {i} not connected")
        if len(self.witnesses) != h.m:
            raise GraphError("one witness edge per minor edge required")
        for (p, q), (x, y) in zip(h.edges, self.witnesses):
            if not g.has_edge(x, y):
                raise GraphError(f"witness ({x},{y}) not in host")
            ok = (x in self.branch_sets[p] and y in self.branch_sets[q]) or (
                y in self.branch_sets[p] and x in self.branch_sets[q]
            )
            if not ok:
                raise GraphError(f"witness ({x},{y}) does not join branch sets {p},{q}")

    def is_valid(self) -> bool:
        try:
            self.validate()
        except GraphError:
            return False
        return True

    def owner(self) -> dict[int, int]:
        return {x: i for i, bs in enumerate(self.branch_sets) for x in bs}


def _connected_within(g: Graph, nodes: frozenset[int]) -> bool:
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in g.adj[x]:
            if y in nodes and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(nodes)


def mapping_from_bags(host: Graph, minor: Graph, bags: Sequence[Iterable[int]]) -> MinorMapping:
    """Build a MinorMapping by locating a witness edge for every minor edge."""
    sets = tuple(frozenset(b) for b in bags)
    owner = {x: i for i, bs in enumerate(sets) for x in bs}
    found: dict[tuple[int, int], tuple[int, int]] = {}
    for x, y in host.edges:
        p, q = owner.get(x), owner.get(y)
        if p is None or q is None or p == q:
            continue
        key = _norm(p, q)
        if key not in found:
            found[key] = (x, y) if p < q else (y, x)
    witnesses = []
    for e in minor.edges:
        if e not in found:
            raise GraphError(f"no host edge joins branch sets {e}")
        witnesses.append(found[e])
    m = MinorMapping(host, minor, sets, tuple(witnesses))
    m.validate()
    return m


# text format ------------------------------------------------------------


def parse_edge_text(text: str, name: str = "") -> Graph:
    """Parse ``u v`` lines. ``#`` starts a comment; ``# nodes: N`` and ``# name: X`` are honoured."""
    pairs = []
    n = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, _, val = body.partition(":")
            if key.strip() == "nodes" and val.strip():
                n = int(val)
            elif key.strip() == "name" and val.strip():
                name = val.strip()
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line {raw!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    return edge_list(pairs, n, name)


def format_edge_text(g: Graph) -> str:
    lines = []
    if g.name:
        lines.append(f"# name: {g.name}")
    lines.append(f"# nodes: {g.n}")
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    from pathlib import Path

    p = Path(path)
    return parse_edge_text(p.read_text(), p.stem)
