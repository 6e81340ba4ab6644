"""Failure-set search: exhaustive verification, proof gadgets and adaptive attacks."""

from __future__ import annotations

import heapq
import logging
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb
from typing import Any, Iterable, Iterator

from .forwarding import (
    ForwardingPattern,
    RoutingModel,
    TourOutcome,
    WalkOutcome,
    route_from,
    tour_from,
)
from .graph import (
    FailureSet,
    Graph,
    _maxflow,
    complete,
    complete_bipartite,
    component_labels,
    st_edge_connectivity,
)

log = logging.getLogger(__name__)

WORKERS_ENV = "FAILOVER_WORKERS"


class VerifyError(ValueError):
    pass


class AttackError(RuntimeError):
    pass


# modes and verdicts -----------------------------------------------------


@dataclass(frozen=True)
class PerfectResilience:
    def __str__(self) -> str:
        return "perfect"


@dataclass(frozen=True)
class RTolerance:
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise VerifyError("r must be at least 1")

    def __str__(self) -> str:
        return f"tolerance:{self.r}"


@dataclass(frozen=True)
class KFailures:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise VerifyError("k must be non-negative")

    def __str__(self) -> str:
        return f"kfail:{self.k}"


@dataclass(frozen=True)
class Touring:
    def __str__(self) -> str:
        return "tour"


Mode = PerfectResilience | RTolerance | KFailures | Touring


def parse_mode(text: str) -> Mode:
    head, _, arg = text.partition(":")
    if head == "perfect":
        return PerfectResilience()
    if head == "tour":
        return Touring()
    if head == "tolerance":
        return RTolerance(int(arg))
    if head == "kfail":
        return KFailures(int(arg))
    raise VerifyError(f"unknown mode {text!r}")


@dataclass(frozen=True)
class Verdict:
    kind: str  # "holds" | "counterexample" | "inconclusive"
    explored: int
    simulations: int = 0
    failure: FailureSet | None = None
    start: int | None = None
    outcome: WalkOutcome | TourOutcome | None = None

    @property
    def holds(self) -> bool:
        return self.kind == "holds"

    def to_dict(self, g: Graph | None = None) -> dict:
        d: dict[str, Any] = {"kind": self.kind, "explored": self.explored, "simulations": self.simulations}
        if self.failure is not None:
            d["failure_mask"] = self.failure.mask
            if g is not None:
                d["failed_edges"] = [list(e) for e in self.failure.edges(g)]
            d["start"] = self.start
            d["outcome"] = self.outcome.to_dict()
        return d


@dataclass(frozen=True)
class VerifyConfig:
    exhaustive_max_edges: int = 16
    samples: int = 20000
    seed: int = 0
    workers: int | None = None


# enumeration ------------------------------------------------------------


def _same_popcount(m: int, k: int) -> Iterator[int]:
    """All m-bit masks with exactly k bits, ascending (Gosper's hack)."""
    if k == 0:
        yield 0
        return
    if k > m:
        return
    x, top = (1 << k) - 1, 1 << m
    while x < top:
        yield x
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r


def masks_up_to(m: int, k: int) -> Iterator[int]:
    """Masks with at most k bits in ascending numeric order."""
    return heapq.merge(*(_same_popcount(m, i) for i in range(min(k, m) + 1)))


def _plan(g: Graph, mode: Mode, budget: int | None, cfg: VerifyConfig):
    """Return (mask iterable, complete-if-exhausted, total)."""
    m = g.m
    if isinstance(mode, KFailures):
        total = sum(comb(m, i) for i in range(min(mode.k, m) + 1))
        if budget is None or total <= budget:
            return masks_up_to(m, mode.k), True, total
        return _take(masks_up_to(m, mode.k), budget), False, budget
    if m <= cfg.exhaustive_max_edges:
        total = 1 << m
        if budget is None or total <= budget:
            return range(total), True, total
        return range(budget), False, budget
    n = budget if budget is not None else cfg.samples
    rng = random.Random(cfg.seed)
    return [rng.getrandbits(m) for _ in range(n)], False, n


def _take(it, n):
    for i, x in enumerate(it):
        if i >= n:
            return
        yield x


def _starts(g: Graph, p: ForwardingPattern) -> list[int]:
    if p.model is RoutingModel.SOURCE_DESTINATION:
        return [p.s]
    if p.model is RoutingModel.DESTINATION_ONLY:
        return [v for v in range(g.n) if v != p.t]
    return list(range(g.n))


def _check_scope(g: Graph, p: ForwardingPattern, mode: Mode) -> None:
    if p.graph != g:
        raise VerifyError("pattern was built for a different graph")
    touring = p.model is RoutingModel.TOURING
    if touring and not isinstance(mode, (Touring, KFailures)):
        raise VerifyError(f"mode {mode} needs a routing pattern")
    if not touring and isinstance(mode, Touring):
        raise VerifyError("tour mode needs a touring pattern")


def _scan(g: Graph, p: ForwardingPattern, mode: Mode, masks: Iterable[int]):
    """Check every mask; return (explored, sims, first counterexample or None)."""
    starts = _starts(g, p)
    touring = p.model is RoutingModel.TOURING
    r = mode.r if isinstance(mode, RTolerance) else None
    t = p.t
    adj_base, inc = g.adj, g.inc
    explored = sims = 0
    for mask in masks:
        explored += 1
        adj = tuple(
            tuple(w for w, e in zip(adj_base[v], inc[v]) if not (mask >> e) & 1) for v in range(g.n)
        )
        if touring:
            label = component_labels(adj)
            for v in starts:
                sims += 1
                out = tour_from(adj, p, v, label)
                if not out.complete:
                    return explored, sims, (mask, v, out)
            continue
        label = component_labels(adj) if r is None else None
        for v in starts:
            if r is None:
                if label[v] != label[t]:
                    continue
            elif _maxflow(adj, v, t, r) < r:
                continue
            sims += 1
            out = route_from(adj, p, v, t)
            if not out.reached:
                return explored, sims, (mask, v, out)
    return explored, sims, None


def _scan_chunk(args):
    g, p, mode, lo, hi = args
    return _scan(g, p, mode, range(lo, hi))


def _workers(cfg: VerifyConfig) -> int:
    if cfg.workers is not None:
        return max(1, cfg.workers)
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def verify(
    g: Graph,
    p: ForwardingPattern,
    mode: Mode,
    budget: int | None = None,
    config: VerifyConfig | None = None,
) -> Verdict:
    """Search failure sets for a pattern violation under ``mode``'s promise.

    Holds is only reported after every failure set in scope was checked. With
    several workers the mask range is split and the lowest failing mask wins.
    """
    cfg = config or VerifyConfig()
    _check_scope(g, p, mode)
    masks, complete_scan, total = _plan(g, mode, budget, cfg)
    nw = _workers(cfg)
    if nw > 1 and isinstance(masks, range) and total >= 4 * nw:
        step = -(-total // nw)
        jobs = [(g, p, mode, lo, min(lo + step, total)) for lo in range(0, total, step)]
        with ProcessPoolExecutor(nw) as ex:
            parts = list(ex.map(_scan_chunk, jobs))
        explored = sum(x[0] for x in parts)
        sims = sum(x[1] for x in parts)
        found = [x[2] for x in parts if x[2] is not None]
        hit = min(found, key=lambda c: c[0]) if found else None
    else:
        explored, sims, hit = _scan(g, p, mode, masks)
    if hit is not None:
        mask, v, out = hit
        return Verdict("counterexample", explored, sims, FailureSet(mask), v, out)
    return Verdict("holds" if complete_scan else "inconclusive", explored, sims)


def replay(g: Graph, p: ForwardingPattern, f: FailureSet, start: int):
    adj = g.alive_adj(f)
    if p.model is RoutingModel.TOURING:
        return tour_from(adj, p, start)
    return route_from(adj, p, start, p.t)


# local analysis ---------------------------------------------------------


def relevant_neighbors(g: Graph, f: FailureSet, v: int, t: int) -> set[int]:
    """Neighbors of v that could be its only relay to t, seen from v's local failures.

    The other alive neighbors of v are removed, except t itself: removing the
    destination would leave no path to it at all.
    """
    if v == t:
        raise VerifyError("v must differ from t")
    local = FailureSet.from_ids(e for e in g.inc[v] if e in f)
    adj = g.alive_adj(local)
    nb = adj[v]
    out = set()
    for j in nb:
        if j == t:
            out.add(j)
            continue
        banned = set(nb) - {j, t}
        seen, stack = {v}, [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen and y not in banned:
                    seen.add(y)
                    stack.append(y)
        if t in seen:
            out.add(j)
    return out


@dataclass(frozen=True)
class OrbitReport:
    passed: bool
    relevant: frozenset[int]
    orbits: tuple[frozenset[int], ...]


def orbit_check(g: Graph, f: FailureSet, v: int, p: ForwardingPattern, t: int) -> OrbitReport:
    """Orbits of v's local map over its relevant neighbors.

    The source is left out: a packet arriving straight from s is told apart
    from one relayed by another neighbor, so s need not share their orbit.
    """
    rel = relevant_neighbors(g, f, v, t) - {p.s}
    alive = g.alive_adj(f)[v]
    sigma = {u: p.out(v, alive, u) for u in alive}
    reach = {}
    for u in rel:
        seen, x = set(), sigma[u]
        while x not in seen:
            seen.add(x)
            x = sigma[x] if x in sigma else x
        reach[u] = seen
    classes: list[set[int]] = []
    for u in sorted(rel):
        for c in classes:
            w = next(iter(c))
            if w in reach[u] and u in reach[w]:
                c.add(u)
                break
        else:
            classes.append({u})
    orbits = tuple(frozenset(c) for c in classes)
    return OrbitReport(len(orbits) <= 1, frozenset(rel), orbits)


# gadgets ----------------------------------------------------------------


@dataclass(frozen=True)
class Gadget:
    name: str
    graph: Graph
    failures: dict[str, FailureSet]
    roles: dict[str, int]
    note: str = ""

    @property
    def failure(self) -> FailureSet:
        return next(iter(self.failures.values()))

    def survivors(self, key: str | None = None) -> list[tuple[int, int]]:
        f = self.failures[key] if key else self.failure
        return [e for i, e in enumerate(self.graph.edges) if i not in f]


_K7_ROLES = {"s": 0, "v1": 1, "v2": 2, "v3": 3, "v4": 4, "v5": 5, "t": 6}
_K7_KEEP = [("s", "v1"), ("v1", "v2"), ("v5", "v2"), ("v3", "v2"), ("v4", "v2"), ("t", "v4"), ("v5", "v3")]

_K44_ROLES = {"a": 0, "b": 1, "c": 2, "d": 3, "v0": 4, "v1": 5, "v2": 6, "v3": 7}
_K44_SETS = {
    "F12": [("v0", "a"), ("v0", "c"), ("v1", "c"), ("v2", "b"), ("v3", "b"), ("v3", "c"),
            ("v0", "d"), ("v1", "d"), ("v2", "d"), ("v3", "d")],
    "F13": [("v0", "a"), ("v0", "c"), ("v1", "c"), ("v2", "b"), ("v3", "b"), ("v2", "c"),
            ("v0", "d"), ("v1", "d"), ("v2", "d"), ("v3", "d")],
    "F33": [("v0", "a"), ("v0", "c"), ("v1", "b"), ("v2", "b"), ("v3", "c"),
            ("v0", "d"), ("v1", "d"), ("v2", "d"), ("v3", "d")],
    "F32": [("v0", "a"), ("v0", "c"), ("v1", "b"), ("v2", "b"), ("v2", "c"), ("v3", "c"),
            ("v0", "d"), ("v1", "d"), ("v2", "d"), ("v3", "d")],
}


def _pairs(roles, pairs):
    return [(roles[a], roles[b]) for a, b in pairs]


def gadget(name: str) -> Gadget:
    if name == "k7_source_dest":
        g = complete(7)
        f = FailureSet.complement_of(g, _pairs(_K7_ROLES, _K7_KEEP))
        return Gadget(name, g, {"F": f}, dict(_K7_ROLES), "packet loops v2-v3-v5-v2")
    if name.startswith("k44_"):
        key = name[4:]
        if key not in _K44_SETS:
            raise KeyError(name)
        g = complete_bipartite(4, 4)
        roles = dict(_K44_ROLES, s=_K44_ROLES["v0"], t=_K44_ROLES["c"])
        f = FailureSet.from_edges(g, _pairs(_K44_ROLES, _K44_SETS[key]))
        return Gadget(name, g, {key: f}, roles)
    if name == "k4_tour":
        g = complete(4)
        roles = {"v1": 0, "v2": 1, "v3": 2, "v4": 3}
        f = FailureSet.from_edges(g, _pairs(roles, [("v2", "v3"), ("v2", "v4")]))
        return Gadget(name, g, {"F": f}, roles, "v2 is never visited")
    if name == "k23_tour":
        g = complete_bipartite(2, 3)
        roles = {"v1": 0, "v2": 1, "v3": 2, "v4": 3, "v5": 4}
        f = FailureSet.from_edges(g, _pairs(roles, [("v2", "v5")]))
        return Gadget(name, g, {"F": f}, roles, "v5 is never visited")
    if name.startswith("r_minor_counterexample"):
        r = int(name.rsplit("_", 1)[-1]) if name[-1].isdigit() else 2
        return r_minor_counterexample(r)
    raise KeyError(f"unknown gadget {name!r}")


GADGETS = ["k7_source_dest", "k44_F12", "k44_F13", "k44_F33", "k44_F32", "k4_tour", "k23_tour",
           "r_minor_counterexample_2"]


def k7_cyclic_pattern() -> ForwardingPattern:
    """Source-destination pattern on K7 whose v2 cycles v1, v3, v4, v5."""
    from .patterns import gen_cyclic

    R = _K7_ROLES
    g = complete(7)
    rot = {R["v2"]: (R["v1"], R["v3"], R["v4"], R["v5"], R["s"], R["t"])}
    return gen_cyclic(g, rot, RoutingModel.SOURCE_DESTINATION, R["s"], R["t"])


def touring_fig_pattern(name: str) -> ForwardingPattern:
    """The cyclic orders used in the K4 and K2,3 touring arguments."""
    from .patterns import gen_cyclic

    gd = gadget(name)
    R = gd.roles
    if name == "k4_tour":
        rot = {R["v1"]: (R["v3"], R["v2"], R["v4"])}
    else:
        rot = {R["v1"]: (R["v3"], R["v5"], R["v4"])}
    return gen_cyclic(gd.graph, rot)


def cyclic_touring_patterns(g: Graph) -> Iterator[ForwardingPattern]:
    """Every pattern that routes by one cyclic order per node.

    Orders are anchored at the lowest neighbor, which is also the first hop on
    an empty inport, so each node with degree d contributes (d-1)! choices.
    """
    from .patterns import gen_cyclic

    choices = []
    for v in range(g.n):
        nb = g.adj[v]
        if len(nb) <= 2:
            choices.append([tuple(nb)])
        else:
            choices.append([(nb[0],) + rest for rest in permutations(nb[1:])])
    for pick in _product(choices):
        yield gen_cyclic(g, dict(enumerate(pick)))


def _product(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for tail in _product(lists[1:]):
            yield (head,) + tail


def r_minor_counterexample(r: int) -> Gadget:
    """K_{3+5r} with a new source s' tied to s by r-1 two-hop paths and one link to t."""
    if r < 2:
        raise VerifyError("the construction needs r >= 2")
    base = 3 + 5 * r
    s, t, s2 = 0, 1, base
    edges = list(complete(base).edges)
    mids = list(range(base + 1, base + r))
    for x in mids:
        edges += [(s2, x), (x, s)]
    edges.append((t, s2))
    g = Graph(base + r, tuple(edges), f"K{base}+path{r - 1}")
    roles = {"s": s2, "t": t, "inner_s": s}
    return Gadget(f"r_minor_counterexample_{r}", g, {"none": FailureSet(0)}, roles,
                  "contract s' with s and its paths, drop (s',t)")


# adaptive attack on complete graphs --------------------------------------


@dataclass(frozen=True)
class AttackResult:
    failure: FailureSet
    outcome: WalkOutcome
    connectivity: int
    blocks: tuple[dict, ...]
    spare: int


def _block_options(p: ForwardingPattern, block: tuple[int, ...]) -> Iterator[dict]:
    """Candidate survivor sets for one 5-node block, in the proof's case order."""
    s, t = p.s, p.t
    triples = []
    for a, b, c in permutations(block, 3):
        alive = tuple(sorted((a, c)))
        if p.out(b, alive, a) != c:
            triples.append((a, b, c))
    for a, b, c in triples:
        yield {"case": "triple", "entry": a, "keep": [(s, a), (a, b), (b, c), (c, t)], "path": True}
    if triples:
        return
    for v1, v2 in permutations(block, 2):
        rest = [x for x in block if x not in (v1, v2)]
        alive = tuple(sorted([v1] + rest))
        orbit, x = [], v1
        seen = set()
        while x not in seen:
            seen.add(x)
            x = p.out(v2, alive, x)
            orbit.append(x)
        hit = set(orbit)
        base = [(s, v1), (v1, v2)] + [(v2, x) for x in rest]
        missing = [x for x in rest if x not in hit]
        if missing:
            w = missing[0]
            yield {"case": "missed", "entry": v1, "keep": base + [(w, t)], "path": True}
        elif v1 not in hit:
            yield {"case": "trapped", "entry": v1, "keep": base, "path": False}
        else:
            x1 = p.out(v2, alive, v1)
            y1 = p.out(v2, alive, x1)
            z1 = p.out(v2, alive, y1)
            yield {"case": "cyclic", "entry": v1, "keep": base + [(y1, t), (x1, z1)], "path": True}


def attack_complete_r(p: ForwardingPattern, r: int, max_tries: int = 20000) -> AttackResult:
    """Build a failure set on K_{3+5r} that keeps s,t r-connected yet defeats ``p``.

    Blocks of five nodes are handled by the case split of the impossibility
    argument; the relabelings it assumes without loss of generality are
    resolved by trying block placements, in-block labelings and the spare
    node in a fixed order until the simulated walk fails.
    """
    if r < 1:
        raise AttackError("r must be at least 1")
    g = p.graph
    n = 3 + 5 * r
    if g.n != n or g.m != n * (n - 1) // 2:
        raise AttackError(f"expected K{n}")
    if p.model is not RoutingModel.SOURCE_DESTINATION:
        raise AttackError("attack targets source-destination patterns")
    s, t = p.s, p.t
    others = [v for v in range(n) if v not in (s, t)]
    tries = 0
    for spare in reversed(others):
        pool = [v for v in others if v != spare]
        for blocks in _partitions(pool, r):
            for opts in _product_lazy([lambda b=b: _block_options(p, b) for b in blocks]):
                tries += 1
                if tries > max_tries:
                    raise AttackError("case analysis did not produce a failing set within the try budget")
                keep = [e for o in opts for e in o["keep"]] + [(s, spare)]
                lost = sum(o["path"] for o in opts)
                if lost < r:
                    keep.append((spare, t))
                f = FailureSet.complement_of(g, keep)
                adj = g.alive_adj(f)
                k = _maxflow(adj, s, t)
                if k < r:
                    continue
                out = route_from(adj, p, s, t)
                if out.reached:
                    continue
                info = tuple({"case": o["case"], "entry": o["entry"], "block": b} for o, b in zip(opts, blocks))
                log.debug("attack succeeded after %d tries", tries)
                return AttackResult(f, out, k, info, spare)
    raise AttackError("no block labeling defeats the pattern; the case analysis should be total")


def _partitions(pool: list[int], r: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Split ``pool`` (5r nodes) into r ordered blocks of five, lexicographically."""
    if r == 0:
        yield ()
        return
    head = pool[0]
    for rest in combinations(pool[1:], 4):
        block = (head,) + rest
        remaining = [x for x in pool if x not in block]
        for tail in _partitions(remaining, r - 1):
            yield (block,) + tail


def _product_lazy(factories):
    if not factories:
        yield ()
        return
    for head in factories[0]():
        for tail in _product_lazy(factories[1:]):
            yield (head,) + tail


# lifting ----------------------------------------------------------------


@dataclass(frozen=True)
class Lifted:
    graph: Graph
    failure: FailureSet
    real: tuple[int, ...]
    virtual: tuple[int, ...]
    t: int


def lift_attack(shape: tuple, inner: FailureSet | None = None) -> Lifted:
    """Embed a K7 or K4,4 attack into a larger complete (bipartite) graph.

    ``shape`` is ``("complete", n)`` or ``("bipartite", a, b)``. Every link
    from a non-destination real node to a virtual node fails; links at the
    destination stay alive.
    """
    kind = shape[0]
    if kind == "complete":
        n = shape[1]
        if n < 8:
            raise VerifyError("complete lifting needs n >= 8")
        gd = gadget("k7_source_dest")
        inner = gd.failure if inner is None else inner
        if len(inner) > 15:
            raise VerifyError("inner attack on K7 exceeds 15 links")
        g = complete(n)
        real, virtual, t = tuple(range(7)), tuple(range(7, n)), gd.roles["t"]
        fails = [gd.graph.edges[i] for i in inner.ids()]
        fails += [(x, w) for x in real if x != t for w in virtual]
        return Lifted(g, FailureSet.from_edges(g, fails), real, virtual, t)
    if kind == "bipartite":
        a, b = shape[1], shape[2]
        if not a >= b >= 4:
            raise VerifyError("bipartite lifting needs a >= b >= 4")
        gd = gadget("k44_F12")
        inner = gd.failure if inner is None else inner
        if len(inner) > 11:
            raise VerifyError("inner attack on K4,4 exceeds 11 links")
        # t's side gets b nodes, the opposite side a nodes
        side_t = [0, 1, 2, 3] + list(range(8, 8 + b - 4))
        side_o = [4, 5, 6, 7] + list(range(8 + b - 4, 8 + b - 4 + a - 4))
        g = Graph(a + b, tuple((min(x, y), max(x, y)) for x in side_t for y in side_o), f"K{a},{b}")
        real, t = tuple(range(8)), gd.roles["t"]
        virtual = tuple(range(8, a + b))
        fails = [gd.graph.edges[i] for i in inner.ids()]
        for x in real:
            if x == t:
                continue
            far = side_o if x in side_t else side_t
            fails += [(x, w) for w in far if w in virtual]
        return Lifted(g, FailureSet.from_edges(g, fails), real, virtual, t)
    raise VerifyError(f"unknown shape {shape!r}")


def connectivity(g: Graph, f: FailureSet, s: int, t: int) -> int:
    return st_edge_connectivity(g, f, s, t)
