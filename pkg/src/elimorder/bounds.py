"""Vertex cuts and lower bounds on the cost of a total elimination."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Collection, Iterable

from .dag import Dag, Role, eliminate_set, markowitz

_INF = 1 << 40


class CutMode(enum.Enum):
    DIRECTED = "directed"
    UNDIRECTED = "undirected"


@dataclass(frozen=True)
class CutResult:
    """Minimum vertex cut.  When ``separable`` is false, ``value`` is ``|V| + 1``."""

    value: int
    cut: frozenset[int]
    separable: bool = True


def min_vertex_cut(
    dag: Dag,
    a: Iterable[int],
    b: Iterable[int],
    mode: CutMode = CutMode.DIRECTED,
    protected: Collection[int] | None = None,
) -> CutResult:
    """Fewest vertices whose removal disconnects ``a`` from ``b``.

    Vertices in ``protected`` may not be cut; it defaults to ``a | b``.  Each
    cuttable vertex is split into an in-node and an out-node joined by a unit
    arc, and augmenting paths are pushed until none remain.
    """
    a, b = set(a), set(b)
    if protected is None:
        protected = a | b
    protected = set(protected)
    n = dag.n
    src, dst = 2 * n, 2 * n + 1
    cap: dict[int, dict[int, int]] = {x: {} for x in range(2 * n + 2)}

    def arc(u: int, w: int, c: int) -> None:
        cap[u][w] = cap[u].get(w, 0) + c
        cap[w].setdefault(u, 0)

    for v in dag.present:
        arc(2 * v, 2 * v + 1, _INF if v in protected else 1)
        for w in dag.succ[v]:
            arc(2 * v + 1, 2 * w, _INF)
            if mode is CutMode.UNDIRECTED:
                arc(2 * w + 1, 2 * v, _INF)
    for v in a:
        arc(src, 2 * v, _INF)
    for v in b:
        arc(2 * v + 1, dst, _INF)

    flow = 0
    while True:
        parent = {src: src}
        queue = deque([src])
        while queue and dst not in parent:
            u = queue.popleft()
            for w, c in cap[u].items():
                if c > 0 and w not in parent:
                    parent[w] = u
                    queue.append(w)
        if dst not in parent:
            break
        push, w = _INF, dst
        while w != src:
            push = min(push, cap[parent[w]][w])
            w = parent[w]
        if push >= _INF:
            return CutResult(len(dag.present) + 1, frozenset(), separable=False)
        w = dst
        while w != src:
            u = parent[w]
            cap[u][w] -= push
            cap[w][u] += push
            w = u
        flow += push

    # The source side of the final residual network yields a witness.
    cut = frozenset(
        v for v in dag.present if 2 * v in parent and 2 * v + 1 not in parent
    )
    return CutResult(flow, cut)


def cut_from_sources(dag: Dag, v: int) -> int:
    """``Cut(S, v)``: sources themselves may be cut, ``v`` may not."""
    res = min_vertex_cut(dag, _present_sources(dag), {v}, protected={v})
    return res.value


def cut_to_sinks(dag: Dag, v: int) -> int:
    """``Cut(v, T)``: sinks themselves may be cut, ``v`` may not."""
    res = min_vertex_cut(dag, {v}, _present_sinks(dag), protected={v})
    return res.value


def _present_sources(dag: Dag) -> list[int]:
    return [s for s in dag.sources if s in dag.present]


def _present_sinks(dag: Dag) -> list[int]:
    return [t for t in dag.sinks if t in dag.present]


def mu_star(dag: Dag, v: int) -> int:
    """Smallest Markowitz degree ``v`` can have at any point of any elimination."""
    markowitz(dag, v)  # validates v
    return cut_from_sources(dag, v) * cut_to_sinks(dag, v)


def half_edge_bound(dag: Dag) -> int:
    """``ceil(m_I / 2)`` with ``m_I`` the edges touching an internal vertex."""
    m_int = sum(
        1
        for u, w in dag.edges()
        if dag.roles[u] is Role.INTERNAL or dag.roles[w] is Role.INTERNAL
    )
    return (m_int + 1) // 2


def has_source_sink_edge(dag: Dag) -> bool:
    return any(
        dag.roles[w] is Role.SINK for s in _present_sources(dag) for w in dag.succ[s]
    )


@dataclass(frozen=True)
class FinalMarkowitz:
    value: int
    applicable: bool = True


def final_markowitz_bound(dag: Dag, v: int) -> FinalMarkowitz:
    """Markowitz degree of ``v`` once every other internal vertex is gone.

    Only valid on graphs without direct source-to-sink edges; on other graphs
    the result is 0 with ``applicable`` unset.
    """
    markowitz(dag, v)
    if has_source_sink_edge(dag):
        return FinalMarkowitz(0, applicable=False)
    rest = eliminate_set(dag, [u for u in dag.internal if u != v])
    return FinalMarkowitz(markowitz(rest, v))


@dataclass(frozen=True)
class BoundsReport:
    half_edges: int
    mu_star_sum: int
    final_markowitz: dict[int, int] = field(default_factory=dict)
    final_markowitz_applicable: bool = True

    @property
    def best(self) -> int:
        return max([self.half_edges, self.mu_star_sum, *self.final_markowitz.values()])

    def as_dict(self) -> dict:
        return {
            "half_edges": self.half_edges,
            "mu_star_sum": self.mu_star_sum,
            "final_markowitz_max": max(self.final_markowitz.values(), default=0),
            "final_markowitz_applicable": self.final_markowitz_applicable,
            "best": self.best,
        }


def report(dag: Dag) -> BoundsReport:
    internal = dag.internal
    finals = {v: final_markowitz_bound(dag, v) for v in internal}
    applicable = all(f.applicable for f in finals.values())
    return BoundsReport(
        half_edges=half_edge_bound(dag),
        mu_star_sum=sum(mu_star(dag, v) for v in internal),
        final_markowitz={v: f.value for v, f in finals.items()} if applicable else {},
        final_markowitz_applicable=applicable,
    )
