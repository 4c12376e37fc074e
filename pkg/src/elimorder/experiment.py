"""Batch experiments: many graphs times many methods, tabulated."""

from __future__ import annotations

import csv
import io
import json
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from statistics import mean
from typing import Sequence

from .dag import Dag
from .errors import ConfigError, ElimError
from .exact import Status, bnb_ove, exact_mec
from .formats import GraphFormat, parse_graph
from .generators import Family, FamilySpec, parse_evolution_name
from .heuristics import HEURISTICS
from .stochastic import McmcParams, SaParams, mcmc_edge_min, simulated_annealing

MCMC = "MC2"
METHODS = tuple(HEURISTICS) + (MCMC,)


def parse_family(text: str) -> FamilySpec:
    """``2d4x2x2`` or ``family:key=value,...`` such as ``tightness:k=5,l=3``."""
    if re.fullmatch(r"2d\d+x\d+x\d+", text):
        p, q, t = parse_evolution_name(text)
        return FamilySpec(Family.EVOLUTION, {"p": p, "q": q, "steps": t})
    kind, _, rest = text.partition(":")
    try:
        family = Family(kind)
    except ValueError:
        raise ConfigError(f"unknown family {kind!r}; known: {', '.join(f.value for f in Family)}") from None
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq:
            raise ConfigError(f"expected key=value, got {item!r}")
        try:
            params[key.strip()] = int(value)
        except ValueError:
            raise ConfigError(f"parameter {key!r} must be an integer") from None
    return FamilySpec(family, params)


def family_name(spec: FamilySpec) -> str:
    p = spec.params
    if spec.kind is Family.EVOLUTION and {"p", "q", "steps"} <= p.keys():
        return f"2d{p['p']}x{p['q']}x{p['steps']}"
    return spec.kind.value + ":" + ",".join(f"{k}={v}" for k, v in p.items())


def load_graph(source: str) -> tuple[str, Dag]:
    """Load a graph from a file path or build one from a family spec."""
    path = Path(source)
    if path.exists():
        fmt = GraphFormat.DOT if path.suffix.lower() in (".dot", ".gv") else GraphFormat.EDGELIST
        return path.stem, parse_graph(path.read_text(encoding="utf-8"), fmt)
    if ":" in source or re.fullmatch(r"2d\d+x\d+x\d+", source):
        spec = parse_family(source)
        return family_name(spec), spec.build()
    raise ConfigError(f"{source!r} is neither a file nor a family spec")


def family_of(name: str) -> str:
    """Grouping key for summary rows: ``2d4x2x2`` -> ``evolution``, ``tightness:k=5`` -> ``tightness``."""
    if re.fullmatch(r"2d\d+x\d+x\d+", name):
        return "evolution"
    return name.split(":", 1)[0]


@dataclass(frozen=True)
class RunConfig:
    inputs: Sequence[str]
    methods: Sequence[str]
    exact: bool = False
    exact_budget: int = 10**8
    mec_limit: int = 22
    sa: SaParams = SaParams()
    mcmc: McmcParams = McmcParams()
    jobs: int = 1

    def validate(self) -> None:
        if not self.inputs:
            raise ConfigError("no inputs given")
        if not self.methods:
            raise ConfigError("no methods given")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ConfigError(f"unknown methods {unknown}; known: {', '.join(METHODS)}")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")


@dataclass
class Row:
    graph: str
    rule: str
    ove_cost: int | None = None
    min_edges: int | None = None
    elapsed_ms: float = 0.0
    ove_ratio: str = ""
    mec_ratio: str = ""
    error: str = ""


@dataclass
class ResultTable:
    rows: list[Row]
    exact: dict[str, dict[str, int | None]] = field(default_factory=dict)
    show_ratios: bool = False

    @property
    def failed(self) -> bool:
        return any(r.error for r in self.rows)

    def summary(self) -> list[dict]:
        """Mean ratio per (family, method), over rows where a ratio is known."""
        out = []
        groups: dict[tuple[str, str], list[Row]] = {}
        for r in self.rows:
            groups.setdefault((family_of(r.graph), r.rule), []).append(r)
        for (fam, rule), rows in groups.items():
            entry = {"family": fam, "rule": rule, "graphs": len(rows)}
            for key in ("ove_ratio", "mec_ratio"):
                vals = [float(getattr(r, key)) for r in rows if _is_number(getattr(r, key))]
                entry[key] = f"{mean(vals):.2f}" if vals and len(vals) == len(rows) else "?"
            out.append(entry)
        return out

    def columns(self) -> list[str]:
        cols = ["graph", "rule", "ove_cost", "min_edges", "elapsed_ms"]
        if self.show_ratios:
            cols += ["ove_ratio", "mec_ratio"]
        if self.failed:
            cols.append("error")
        return cols

    def _cells(self, row: Row) -> list[str]:
        d = asdict(row)
        d["elapsed_ms"] = f"{row.elapsed_ms:.1f}"
        return ["" if d[c] is None else str(d[c]) for c in self.columns()]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns())
        for row in self.rows:
            writer.writerow(self._cells(row))
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {"rows": [asdict(r) for r in self.rows]}
        if self.show_ratios:
            payload["exact"] = self.exact
            payload["summary"] = self.summary()
        return json.dumps(payload, indent=2)

    def to_markdown(self) -> str:
        cols = self.columns()
        lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
        lines += ["| " + " | ".join(self._cells(r)) + " |" for r in self.rows]
        if self.show_ratios:
            lines += ["", "| family | rule | graphs | ove_ratio | mec_ratio |", "|---|---|---|---|---|"]
            lines += [
                f"| {s['family']} | {s['rule']} | {s['graphs']} | {s['ove_ratio']} | {s['mec_ratio']} |"
                for s in self.summary()
            ]
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "markdown":
            return self.to_markdown()
        return self.to_csv()


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def _run_method(graph: str, dag: Dag, method: str, cfg: RunConfig) -> Row:
    row = Row(graph, method)
    start = time.perf_counter()
    try:
        if method == MCMC:
            _, row.min_edges = mcmc_edge_min(dag, cfg.mcmc)
        elif method == "SA":
            trace = simulated_annealing(dag, cfg.sa)
            row.ove_cost, row.min_edges = trace.total_cost, trace.min_edges
        else:
            trace = HEURISTICS[method](dag)
            row.ove_cost, row.min_edges = trace.total_cost, trace.min_edges
    except ElimError as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    row.elapsed_ms = (time.perf_counter() - start) * 1000
    return row


def _run_exact(dag: Dag, cfg: RunConfig) -> dict[str, int | None]:
    ove = bnb_ove(dag, budget=cfg.exact_budget)
    mec = exact_mec(dag, limit=cfg.mec_limit)
    return {
        "ove": ove.objective if ove.status is Status.OPTIMAL else None,
        "mec": mec.objective if mec.status is Status.OPTIMAL else None,
    }


def _ratio(value: int | None, best: int | None) -> str:
    if value is None or best is None:
        return "?"
    if best == 0:
        return "1.00" if value == 0 else "?"
    return f"{value / best:.2f}"


def run_experiment(cfg: RunConfig) -> ResultTable:
    """Run every method on every input; rows follow input order, then method order.

    Inputs that fail to load produce one error row and the run continues.
    With ``cfg.exact`` the exact solvers run once per graph, and each row
    gets ratios against the proven optima ("?" when no optimum was proven).
    """
    cfg.validate()
    graphs: list[tuple[str, Dag | None, str]] = []
    for source in cfg.inputs:
        try:
            name, dag = load_graph(source)
            graphs.append((name, dag, ""))
        except (ElimError, OSError) as exc:
            graphs.append((source, None, f"{type(exc).__name__}: {exc}"))

    tasks = [(name, dag, m) for name, dag, err in graphs if dag is not None for m in cfg.methods]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [pool.submit(_run_method, n, d, m, cfg) for n, d, m in tasks]
            exact_futures = {n: pool.submit(_run_exact, d, cfg) for n, d, _ in graphs if d is not None and cfg.exact}
            done = [f.result() for f in futures]
            exact = {n: f.result() for n, f in exact_futures.items()}
    else:
        done = [_run_method(n, d, m, cfg) for n, d, m in tasks]
        exact = {n: _run_exact(d, cfg) for n, d, _ in graphs if d is not None and cfg.exact}

    it = iter(done)
    rows: list[Row] = []
    for name, dag, err in graphs:
        if dag is None:
            rows.append(Row(name, "-", error=err))
            continue
        for _ in cfg.methods:
            row = next(it)
            if cfg.exact:
                opt = exact[name]
                row = replace(
                    row,
                    ove_ratio="" if row.ove_cost is None else _ratio(row.ove_cost, opt["ove"]),
                    mec_ratio=_ratio(row.min_edges, opt["mec"]),
                )
            rows.append(row)
    return ResultTable(rows, exact, show_ratios=cfg.exact)
