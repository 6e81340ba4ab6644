"""Forwarding patterns and the deterministic packet walk."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Any, Callable, Iterator, Mapping

from .graph import EMPTY, FailureSet, Graph, component_labels

BOT = None  # the empty inport


class RoutingModel(str, Enum):
    SOURCE_DESTINATION = "SourceDestination"
    DESTINATION_ONLY = "DestinationOnly"
    TOURING = "Touring"


class PatternError(RuntimeError):
    pass


class MissingRule(PatternError):
    def __init__(self, view: "LocalView"):
        super().__init__(f"no rule for {view}")
        self.view = view


@dataclass(frozen=True)
class LocalView:
    node: int
    alive: tuple[int, ...]
    inport: int | None = BOT
    src: int | None = None
    dst: int | None = None


# A rule maps (node, alive, inport, s, t) to an outport or None when undefined.
Rule = Callable[[int, tuple, Any, Any, Any], Any]


@dataclass(frozen=True)
class ForwardingPattern:
    """A deterministic local forwarding function for one graph.

    ``rule`` is either a programmatic callable or a :class:`TableRule`. Results
    are memoised per view, so a programmatic rule is evaluated once per view.
    """

    model: RoutingModel
    graph: Graph
    rule: Rule
    s: int | None = None
    t: int | None = None
    provenance: Mapping[str, Any] = field(default_factory=dict)
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        need_s = self.model is RoutingModel.SOURCE_DESTINATION
        need_t = self.model is not RoutingModel.TOURING
        if need_s != (self.s is not None) or need_t != (self.t is not None):
            raise PatternError(f"scope (s={self.s}, t={self.t}) does not fit {self.model.value}")

    def out(self, node: int, alive: tuple, inport) -> int:
        key = (node, alive, inport)
        try:
            return self._memo[key]
        except KeyError:
            pass
        res = self.rule(node, alive, inport, self.s, self.t)
        if res is None:
            raise MissingRule(self.view(node, alive, inport))
        if res not in alive:
            raise PatternError(f"rule at {node} chose {res}, not in alive set {alive}")
        self._memo[key] = res
        return res

    def view(self, node: int, alive, inport=BOT) -> LocalView:
        return LocalView(node, tuple(alive), inport, self.s, self.t)

    def decide(self, view: LocalView) -> int:
        if view.src != self.s or view.dst != self.t:
            raise PatternError("view scope differs from pattern scope")
        if view.inport is not BOT and view.inport not in view.alive:
            raise PatternError("inport must be an alive neighbor")
        return self.out(view.node, tuple(sorted(view.alive)), view.inport)


def admissible_views(g: Graph, p: ForwardingPattern) -> Iterator[tuple[int, tuple, Any]]:
    """All (node, alive, inport) triples a walk under ``p`` can present.

    The destination never forwards. In the source-destination model only the
    source sees the empty inport, since every walk starts there.
    """
    for v in range(g.n):
        if p.t is not None and v == p.t:
            continue
        nb = g.adj[v]
        for k in range(1, len(nb) + 1):
            for alive in combinations(nb, k):
                if p.model is not RoutingModel.SOURCE_DESTINATION or v == p.s:
                    yield v, alive, BOT
                for u in alive:
                    yield v, alive, u


def check_totality(g: Graph, p: ForwardingPattern) -> list[LocalView]:
    missing = []
    for v, alive, inport in admissible_views(g, p):
        try:
            p.out(v, alive, inport)
        except MissingRule:
            missing.append(p.view(v, alive, inport))
    return missing


# walks ------------------------------------------------------------------


@dataclass(frozen=True)
class WalkOutcome:
    kind: str  # "reached" | "looped" | "isolated"
    trace: tuple[tuple[int, Any], ...]
    hops: int = 0
    prefix_len: int = 0
    cycle_len: int = 0

    @property
    def reached(self) -> bool:
        return self.kind == "reached"

    def cycle_nodes(self) -> list[int]:
        return [v for v, _ in self.trace[self.prefix_len : self.prefix_len + self.cycle_len]]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "hops": self.hops,
            "prefix_len": self.prefix_len,
            "cycle_len": self.cycle_len,
            "trace": [[v, _port_out(u)] for v, u in self.trace],
        }


@dataclass(frozen=True)
class TourOutcome:
    complete: bool
    missing: frozenset[int]
    trace: tuple[tuple[int, Any], ...]
    prefix_len: int = 0
    cycle_len: int = 0

    @property
    def kind(self) -> str:
        return "tour_complete" if self.complete else "tour_failed"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "missing": sorted(self.missing),
            "prefix_len": self.prefix_len,
            "cycle_len": self.cycle_len,
            "trace": [[v, _port_out(u)] for v, u in self.trace],
        }


def step_bound(g: Graph) -> int:
    return sum(len(a) + 1 for a in g.adj) + 1


def _walk(adj, p: ForwardingPattern, start: int, stop: int | None):
    """Run until ``stop`` is reached or a (node, inport) state repeats."""
    seen: dict[tuple[int, Any], int] = {}
    trace: list[tuple[int, Any]] = []
    node, inport = start, BOT
    while True:
        state = (node, inport)
        if node == stop:
            trace.append(state)
            return trace, None
        if state in seen:
            return trace, seen[state]
        seen[state] = len(trace)
        trace.append(state)
        alive = adj[node]
        if not alive:
            return trace, -1
        nxt = p.out(node, alive, inport)
        node, inport = nxt, node


def route_from(adj, p: ForwardingPattern, start: int, t: int) -> WalkOutcome:
    if start == t:
        return WalkOutcome("reached", ((t, BOT),), hops=0)
    trace, loop_at = _walk(adj, p, start, t)
    tr = tuple(trace)
    if loop_at is None:
        return WalkOutcome("reached", tr, hops=len(tr) - 1)
    if loop_at < 0:
        return WalkOutcome("isolated", tr)
    return WalkOutcome("looped", tr, prefix_len=loop_at, cycle_len=len(tr) - loop_at)


def simulate_route(
    g: Graph, f: FailureSet, p: ForwardingPattern, start: int, s: int | None, t: int
) -> WalkOutcome:
    if p.model is RoutingModel.TOURING:
        raise PatternError("simulate_route needs a routing pattern, got a touring one")
    if p.model is RoutingModel.SOURCE_DESTINATION and start != s:
        raise PatternError("source-destination walks start at s")
    if t != p.t or (p.model is RoutingModel.SOURCE_DESTINATION and s != p.s):
        raise PatternError("walk endpoints differ from pattern scope")
    return route_from(g.alive_adj(f), p, start, t)


def tour_from(adj, p: ForwardingPattern, start: int, label=None) -> TourOutcome:
    if label is None:
        label = component_labels(adj)
    comp = frozenset(v for v in range(len(adj)) if label[v] == label[start])
    trace, loop_at = _walk(adj, p, start, None)
    tr = tuple(trace)
    if loop_at < 0:
        # isolated start: the component is the start alone
        return TourOutcome(len(comp) == 1, comp - {start}, tr)
    first: dict[int, int] = {}
    for i, (v, _) in enumerate(tr):
        first.setdefault(v, i)
    missing = comp - first.keys()
    last_new = max(first.values())
    cycle = {v for v, _ in tr[loop_at:]}
    back = start in cycle or any(v == start for v, _ in tr[last_new + 1 :])
    done = not missing and back
    return TourOutcome(done, frozenset(missing), tr, loop_at, len(tr) - loop_at)


def simulate_tour(g: Graph, f: FailureSet, p: ForwardingPattern, start: int) -> TourOutcome:
    if p.model is not RoutingModel.TOURING:
        raise PatternError("simulate_tour needs a touring pattern")
    return tour_from(g.alive_adj(f), p, start)


def simulate(g: Graph, f: FailureSet, p: ForwardingPattern, start: int):
    """Route or tour depending on the pattern's model."""
    if p.model is RoutingModel.TOURING:
        return simulate_tour(g, f, p, start)
    return simulate_route(g, f, p, start, p.s, p.t)


# tables and serialization ----------------------------------------------


@dataclass(frozen=True)
class TableRule:
    rows: Mapping[tuple[int, tuple, Any], int]

    def __call__(self, node, alive, inport, s, t):
        return self.rows.get((node, alive, inport))


def materialize(p: ForwardingPattern) -> ForwardingPattern:
    """Freeze a pattern into an explicit table over all admissible views."""
    rows = {}
    for v, alive, inport in admissible_views(p.graph, p):
        rows[(v, alive, inport)] = p.out(v, alive, inport)
    return ForwardingPattern(p.model, p.graph, TableRule(rows), p.s, p.t, dict(p.provenance))


def _port_out(u):
    return "bot" if u is BOT else u


def _port_in(u):
    return BOT if u == "bot" else int(u)


def _row_key(row):
    return (row[0], row[1], -1 if row[2] is BOT else row[2])


def to_dict(p: ForwardingPattern) -> dict:
    table = p.rule.rows if isinstance(p.rule, TableRule) else materialize(p).rule.rows
    rows = [
        {"node": v, "alive": list(alive), "inport": _port_out(u), "out": out}
        for (v, alive, u), out in sorted(table.items(), key=lambda kv: _row_key(kv[0]))
    ]
    return {
        "model": p.model.value,
        "scope": {"s": p.s, "t": p.t},
        "graph": {"name": p.graph.name, "n": p.graph.n, "edges": [list(e) for e in p.graph.edges]},
        "provenance": dict(p.provenance),
        "rows": rows,
    }


def from_dict(d: Mapping, graph: Graph | None = None) -> ForwardingPattern:
    if graph is None:
        gd = d["graph"]
        graph = Graph(gd["n"], tuple(tuple(e) for e in gd["edges"]), gd.get("name", ""))
    rows = {}
    for r in d["rows"]:
        rows[(int(r["node"]), tuple(int(x) for x in r["alive"]), _port_in(r["inport"]))] = int(r["out"])
    scope = d.get("scope", {})
    return ForwardingPattern(
        RoutingModel(d["model"]),
        graph,
        TableRule(rows),
        scope.get("s"),
        scope.get("t"),
        dict(d.get("provenance", {})),
    )


def dumps(p: ForwardingPattern) -> str:
    return json.dumps(to_dict(p), indent=1, sort_keys=False)


def loads(text: str, graph: Graph | None = None) -> ForwardingPattern:
    return from_dict(json.loads(text), graph)


__all__ = [
    "BOT",
    "EMPTY",
    "ForwardingPattern",
    "LocalView",
    "MissingRule",
    "PatternError",
    "RoutingModel",
    "TableRule",
    "TourOutcome",
    "WalkOutcome",
    "admissible_views",
    "check_totality",
    "dumps",
    "loads",
    "materialize",
    "simulate",
    "simulate_route",
    "simulate_tour",
    "step_bound",
]
