"""Dataset ingestion, batch classification and report export."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import xml.etree.ElementTree as ET
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable

import networkx as nx

from . import __version__
from .adversary import GADGETS, WORKERS_ENV, gadget
from .classifier import ROW_FIELDS, Classification, MinorBudget, Status, classify
from .forwarding import RoutingModel
from .graph import Graph, format_edge_text, from_nx, parse_edge_text

log = logging.getLogger(__name__)

MODELS = {
    "touring": RoutingModel.TOURING,
    "destination": RoutingModel.DESTINATION_ONLY,
    "source_destination": RoutingModel.SOURCE_DESTINATION,
}
STATUSES = [s.value for s in Status]
FORMATS = ("csv", "json", "svg-bars", "dot-gadgets")
GRAPH_SUFFIXES = (".graphml", ".gml.xml", ".txt", ".edges")


class IngestError(ValueError):
    pass


class ExportError(OSError):
    pass


# ingestion --------------------------------------------------------------


def ingest_graphml(path) -> tuple[str, Graph, list[str]]:
    """Read one GraphML file as an undirected simple graph.

    Returns the name, the graph and a list of normalization notes. Edge
    direction is ignored, parallel edges are merged and self-loops dropped;
    isolated nodes are kept.
    """
    path = Path(path)
    try:
        raw = nx.read_graphml(path, force_multigraph=True)
    except (ET.ParseError, nx.NetworkXError, KeyError, ValueError) as e:
        raise IngestError(f"{path.name}: malformed GraphML ({e})") from e
    if raw.number_of_nodes() == 0:
        raise IngestError(f"{path.name}: graph has no nodes")
    notes = []
    if raw.is_directed():
        notes.append("direction dropped")
    loops = [(u, v) for u, v in raw.edges() if u == v]
    if loops:
        notes.append(f"{len(loops)} self-loop(s) removed")
    simple = nx.Graph()
    simple.add_nodes_from(raw.nodes())
    simple.add_edges_from((u, v) for u, v in raw.edges() if u != v)
    merged = raw.number_of_edges() - len(loops) - simple.number_of_edges()
    if merged:
        notes.append(f"{merged} parallel edge(s) merged")
    isolated = sum(1 for v in simple if simple.degree(v) == 0)
    if isolated:
        notes.append(f"{isolated} isolated node(s) kept")
    if simple.number_of_nodes() > 1 and not nx.is_connected(simple):
        notes.append("disconnected; classified as a whole")
    name = path.name.split(".")[0]
    g, _ = from_nx(simple, name)
    for msg in notes:
        log.info("%s: %s", name, msg)
    return name, g, notes


def ingest_file(path) -> tuple[str, Graph, list[str]]:
    path = Path(path)
    if path.name.endswith((".graphml", ".gml.xml")):
        return ingest_graphml(path)
    g = parse_edge_text(path.read_text(), path.stem)
    if g.n == 0:
        raise IngestError(f"{path.name}: graph has no nodes")
    return g.name or path.stem, g, []


@dataclass(frozen=True)
class DatasetEntry:
    name: str
    graph: Graph
    source: str
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class Dataset:
    entries: tuple[DatasetEntry, ...]

    def __post_init__(self):
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names):
            raise IngestError("dataset entry names must be unique")

    def __len__(self) -> int:
        return len(self.entries)

    def digest(self) -> str:
        """SHA-256 over the normalized graphs, independent of file order."""
        h = hashlib.sha256()
        for e in sorted(self.entries, key=lambda x: x.name):
            h.update(e.name.encode())
            h.update(b"\0")
            h.update(format_edge_text(e.graph).encode())
        return h.hexdigest()


def load_dataset(directory) -> Dataset:
    d = Path(directory)
    if not d.is_dir():
        raise IngestError(f"{d} is not a directory")
    entries = []
    seen: dict[str, int] = {}
    for path in sorted(d.iterdir()):
        if not path.is_file() or not path.name.endswith(GRAPH_SUFFIXES):
            continue
        name, g, notes = ingest_file(path)
        if name in seen:
            # two files with the same stem, e.g. foo.graphml and foo.txt
            seen[name] += 1
            name = f"{name}~{seen[name]}"
        else:
            seen[name] = 0
        entries.append(DatasetEntry(name, g.relabeled(name), str(path), tuple(notes)))
    if not entries:
        raise IngestError(f"no graph files in {d}")
    entries.sort(key=lambda e: e.name)
    return Dataset(tuple(entries))


# reports ----------------------------------------------------------------


@dataclass(frozen=True)
class ReportConfig:
    budget: MinorBudget = field(default_factory=MinorBudget)
    workers: int | None = None  # falls back to the environment, then 1


@dataclass
class Report:
    rows: list[dict]
    aggregates: dict[str, str]
    metadata: dict[str, str]

    def recompute(self) -> dict[str, str]:
        return aggregate(self.rows)


def _classify_entry(args) -> dict:
    name, g, budget = args
    c: Classification = classify(g, budget, name=name)
    return c.row()


def _workers(cfg: ReportConfig) -> int:
    if cfg.workers is not None:
        return max(1, cfg.workers)
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_report(d: Dataset, config: ReportConfig | None = None) -> Report:
    cfg = config or ReportConfig()
    if not len(d):
        raise IngestError("dataset is empty")
    jobs = [(e.name, e.graph, cfg.budget) for e in d.entries]
    nw = _workers(cfg)
    if nw > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(nw) as ex:
            rows = list(ex.map(_classify_entry, jobs))
    else:
        rows = [_classify_entry(j) for j in jobs]
    rows.sort(key=lambda r: r["name"])
    notes = {e.name: "; ".join(e.notes) for e in d.entries}
    for r in rows:
        r["notes"] = notes.get(r["name"], "")
    meta = {
        "tool": "failover",
        "version": __version__,
        "entries": str(len(d)),
        "dataset_sha256": d.digest(),
        "seed": str(cfg.budget.seed),
        "budget": json.dumps(asdict(cfg.budget), sort_keys=True),
    }
    return Report(rows, aggregate(rows), meta)


def _pct(k: int, n: int) -> str:
    return f"{100.0 * k / n:.2f}" if n else "0.00"


def aggregate(rows: list[dict]) -> dict[str, str]:
    """Per-model verdict shares, planar-not-outerplanar share and the mean
    good-destination fraction over entries marked Sometimes in some model."""
    n = len(rows)
    out: dict[str, str] = {"entries": str(n)}
    for col in MODELS:
        for st in STATUSES:
            k = sum(1 for r in rows if r[col] == st)
            out[f"{col}.{st}.count"] = str(k)
            out[f"{col}.{st}.percent"] = _pct(k, n)
    pno = sum(1 for r in rows if int(r["planar"]) and not int(r["outerplanar"]))
    out["planar_not_outerplanar.count"] = str(pno)
    out["planar_not_outerplanar.percent"] = _pct(pno, n)
    some = [float(r["sometimes_fraction"]) for r in rows if any(r[c] == "Sometimes" for c in MODELS)]
    out["sometimes.entries"] = str(len(some))
    out["sometimes.mean_fraction_percent"] = _pct_mean(some)
    return out


def _pct_mean(xs: list[float]) -> str:
    return f"{100.0 * sum(xs) / len(xs):.2f}" if xs else "0.00"


# export -----------------------------------------------------------------


CSV_FIELDS = [f for f in ROW_FIELDS if f != "seconds"] + ["notes"]


def to_csv(report: Report, timing: bool = False) -> str:
    """Rows, a blank line, then ``key,value`` lines for aggregates and metadata.

    Wall time is left out unless ``timing`` is set, so equal inputs give
    byte-identical files.
    """
    fields = CSV_FIELDS + (["seconds"] if timing else [])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in report.rows:
        w.writerow([r.get(f, "") for f in fields])
    w.writerow([])
    w.writerow(["key", "value"])
    for k, v in report.aggregates.items():
        w.writerow([f"aggregate.{k}", v])
    for k, v in report.metadata.items():
        w.writerow([f"meta.{k}", v])
    return buf.getvalue()


def read_csv(text: str) -> Report:
    head, _, tail = text.partition("\n\n")
    rows = list(csv.DictReader(io.StringIO(head + "\n")))
    agg, meta = {}, {}
    for rec in csv.DictReader(io.StringIO(tail)):
        k, v = rec["key"], rec["value"]
        if k.startswith("aggregate."):
            agg[k[len("aggregate."):]] = v
        elif k.startswith("meta."):
            meta[k[len("meta."):]] = v
    return Report(rows, agg, meta)


def to_json(report: Report) -> str:
    return json.dumps(
        {"metadata": report.metadata, "aggregates": report.aggregates, "rows": report.rows},
        indent=1,
        sort_keys=True,
    )


_COLORS = {"Possible": "#3bb273", "Sometimes": "#87cefa", "Unknown": "#ccab00", "Impossible": "#b02121"}
_ORDER = ["Possible", "Sometimes", "Unknown", "Impossible"]


def to_svg_bars(report: Report) -> str:
    """One horizontal stacked bar per routing model, segments in percent."""
    width, bar_h, gap, left = 400, 28, 14, 150
    n = int(report.aggregates["entries"])
    h = gap + len(MODELS) * (bar_h + gap) + 30
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{left + width + 20}" height="{h}" '
        'font-family="sans-serif" font-size="12">'
    ]
    y = gap
    for col, model in MODELS.items():
        parts.append(f'<text x="{left - 8}" y="{y + bar_h * 0.65:.1f}" text-anchor="end">{model.value}</text>')
        x = 0.0
        for st in _ORDER:
            k = int(report.aggregates[f"{col}.{st}.count"])
            w = width * k / n if n else 0.0
            if k:
                parts.append(
                    f'<rect x="{left + x:.3f}" y="{y}" width="{w:.3f}" height="{bar_h}" fill="{_COLORS[st]}" '
                    f'data-model="{col}" data-status="{st}" data-percent="{report.aggregates[f"{col}.{st}.percent"]}">'
                    f"<title>{model.value} {st} {report.aggregates[f'{col}.{st}.percent']}%</title></rect>"
                )
            x += w
        y += bar_h + gap
    lx = left
    for st in _ORDER:
        parts.append(f'<rect x="{lx}" y="{y}" width="10" height="10" fill="{_COLORS[st]}"/>')
        parts.append(f'<text x="{lx + 14}" y="{y + 9}">{st}</text>')
        lx += 90
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def gadget_dot(name: str) -> str:
    """DOT drawing of a gadget; failed links dashed, surviving links solid."""
    gd = gadget(name)
    g, f = gd.graph, gd.failure
    label = {v: k for k, v in gd.roles.items()}
    lines = [f'graph "{name}" {{', "  node [shape=circle];"]
    for v in range(g.n):
        lines.append(f'  {v} [label="{label.get(v, v)}"];')
    for i, (u, v) in enumerate(g.edges):
        style = ' [style=dashed, color=gray]' if i in f else ""
        lines.append(f"  {u} -- {v}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(report: Report | None, fmt: str, out, gadgets: Iterable[str] | None = None, timing: bool = False) -> list[Path]:
    """Write ``report`` in ``fmt``; ``out`` is a file, or a directory for dot-gadgets."""
    out = Path(out)
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    try:
        if fmt == "dot-gadgets":
            out.mkdir(parents=True, exist_ok=True)
            paths = []
            for name in gadgets or GADGETS:
                p = out / f"{name}.dot"
                p.write_text(gadget_dot(name))
                paths.append(p)
            return paths
        if report is None:
            raise ValueError(f"format {fmt} needs a report")
        text = {"csv": lambda: to_csv(report, timing), "json": lambda: to_json(report),
                "svg-bars": lambda: to_svg_bars(report)}[fmt]()
        if out.parent and not out.parent.exists():
            out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        return [out]
    except OSError as e:
        raise ExportError(f"cannot write {out}: {e}") from e


__all__ = [
    "Dataset",
    "DatasetEntry",
    "ExportError",
    "FORMATS",
    "IngestError",
    "Report",
    "ReportConfig",
    "aggregate",
    "export",
    "gadget_dot",
    "ingest_file",
    "ingest_graphml",
    "load_dataset",
    "read_csv",
    "run_report",
    "to_csv",
    "to_json",
    "to_svg_bars",
]
