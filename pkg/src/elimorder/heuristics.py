"""Deterministic elimination heuristics.

Every heuristic returns an :class:`~elimorder.dag.EliminationTrace`; the
trace's ``min_edges`` doubles as the heuristic's answer for the edge-count
problem ("scan mode").
"""

from __future__ import annotations

import enum
import functools
import heapq
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .bounds import CutMode, min_vertex_cut, mu_star
from .dag import Dag, EliminationTrace, Role, eliminate_sequence, eliminate_set, eliminate_vertex
from .errors import ElimError, InvalidSeparator, NotSeparable, Overflow

_WIDE_LIMIT = (1 << 128) - 1


class Direction(enum.Enum):
    FORWARD = "forward"
    REVERSE = "reverse"


class GreedyRule(str, enum.Enum):
    """Greedy scoring rules; each picks the remaining vertex of least score.

    Ties go to the smaller current Markowitz degree, then the smaller id.
    ``MAR`` instead prefers the larger current total degree, then the
    smaller id.
    """

    MAR = "Mar"
    RMAR = "rMar"
    MR = "MR"
    M2D = "M2D"
    DMC = "DMC"
    PL = "PL"
    PC = "PC"
    ER = "ER"
    MD = "MD"


def _ordered(order: Iterable[int], dag: Dag) -> list[int]:
    return [v for v in order if dag.roles[v] is Role.INTERNAL]


def topological_sequence(dag: Dag, direction: Direction = Direction.FORWARD) -> list[int]:
    if direction is Direction.FORWARD:
        return _ordered(dag.topological_order(), dag)
    return _ordered(_kahn(dag.present, dag.succ), dag)


def topological_mode(dag: Dag, direction: Direction = Direction.FORWARD) -> EliminationTrace:
    return eliminate_sequence(dag, topological_sequence(dag, direction))


def _kahn(vertices: Iterable[int], pred: Mapping[int, Iterable[int]] | tuple) -> list[int]:
    """Topological order of the graph whose edges run ``pred[v] -> v``.

    Passing successor lists as ``pred`` produces the reverse order.
    Ties are broken by ascending id.
    """
    vertices = set(vertices)
    succ: dict[int, list[int]] = {v: [] for v in vertices}
    indeg = {v: 0 for v in vertices}
    for v in vertices:
        for u in pred[v]:
            if u in vertices:
                succ[u].append(v)
                indeg[v] += 1
    heap = [v for v in vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    return order


# -- path statistics ---------------------------------------------------------


def _checked(x: int) -> int:
    if x > _WIDE_LIMIT:
        raise Overflow("path counter exceeds 128 bits")
    return x


def _paths_from_sources(dag: Dag, order: list[int]) -> dict[int, int]:
    count: dict[int, int] = {}
    for v in order:
        if not dag.pred[v]:
            count[v] = 1
        else:
            count[v] = _checked(sum(count[u] for u in dag.pred[v]))
    return count


def _paths_to_sinks(dag: Dag, order: list[int]) -> dict[int, int]:
    count: dict[int, int] = {}
    for v in reversed(order):
        if not dag.succ[v]:
            count[v] = 1
        else:
            count[v] = _checked(sum(count[w] for w in dag.succ[v]))
    return count


def pathlength(dag: Dag) -> int:
    """Total number of edges over all source-to-sink paths."""
    order = dag.topological_order()
    paths: dict[int, int] = {}
    lengths: dict[int, int] = {}  # summed length of all paths ending at v
    for v in order:
        if not dag.pred[v]:
            paths[v], lengths[v] = 1, 0
            continue
        p = l = 0
        for u in dag.pred[v]:
            p += paths[u]
            l += lengths[u] + paths[u]
        paths[v], lengths[v] = _checked(p), _checked(l)
    return _checked(sum(lengths[v] for v in order if not dag.succ[v]))


def path_counts(dag: Dag) -> dict[int, int]:
    """Number of source-to-sink paths through each vertex."""
    order = dag.topological_order()
    up = _paths_from_sources(dag, order)
    down = _paths_to_sinks(dag, order)
    return {v: _checked(up[v] * down[v]) for v in order}


# -- greedy rules --------------------------------------------------------------


def _mu(dag: Dag, v: int) -> int:
    return len(dag.pred[v]) * len(dag.succ[v])


def total_markowitz(dag: Dag) -> int:
    return sum(_mu(dag, v) for v in dag.internal)


def markowitz_after(dag: Dag, v: int, total: int) -> int:
    """``M(D/v)`` given ``total = M(D)``, touching only neighbors of ``v``."""
    ins, outs = dag.pred[v], dag.succ[v]
    result = total - len(ins) * len(outs)
    for u in ins:
        if dag.roles[u] is Role.INTERNAL:
            new_out = len((dag.succ[u] - {v}) | outs)
            result += len(dag.pred[u]) * (new_out - len(dag.succ[u]))
    for w in outs:
        if dag.roles[w] is Role.INTERNAL:
            new_in = len((dag.pred[w] - {v}) | ins)
            result += len(dag.succ[w]) * (new_in - len(dag.pred[w]))
    return result


def edges_after(dag: Dag, v: int) -> int:
    """``|E(D/v)|`` without building ``D/v``."""
    ins, outs = dag.pred[v], dag.succ[v]
    added = sum(len(outs - dag.succ[u]) for u in ins)
    return dag.n_edges - len(ins) - len(outs) + added


def _current_reach_product(dag: Dag) -> dict[int, int]:
    """``|S_v| * |T_v|`` on the current graph for every internal vertex."""
    order = dag.topological_order()
    srcs: dict[int, frozenset[int]] = {}
    for v in order:
        if dag.roles[v] is Role.SOURCE:
            srcs[v] = frozenset([v])
        else:
            srcs[v] = frozenset().union(*(srcs[u] for u in dag.pred[v]))
    snks: dict[int, frozenset[int]] = {}
    for v in reversed(order):
        if dag.roles[v] is Role.SINK:
            snks[v] = frozenset([v])
        else:
            snks[v] = frozenset().union(*(snks[w] for w in dag.succ[v]))
    return {v: len(srcs[v]) * len(snks[v]) for v in dag.internal}


def _scores(dag: Dag, rule: GreedyRule) -> dict[int, object]:
    cand = dag.internal
    if rule is GreedyRule.MAR:
        return {v: _mu(dag, v) for v in cand}
    if rule is GreedyRule.RMAR:
        reach = _current_reach_product(dag)
        return {v: _mu(dag, v) - reach[v] for v in cand}
    if rule is GreedyRule.MR:
        total = total_markowitz(dag)
        return {v: markowitz_after(dag, v, total) for v in cand}
    if rule is GreedyRule.M2D:
        total = total_markowitz(dag)
        # d(v) = M(D/v) - M(D) + mu(v); the score is mu(v) + d(v).
        return {v: 2 * _mu(dag, v) + markowitz_after(dag, v, total) - total for v in cand}
    if rule is GreedyRule.DMC:
        return {v: _mu(dag, v) - mu_star(dag, v) for v in cand}
    if rule is GreedyRule.PL:
        return {v: pathlength(eliminate_vertex(dag, v)[0]) for v in cand}
    if rule is GreedyRule.PC:
        f = path_counts(dag)
        return {v: (_mu(dag, v), f[v]) for v in cand}
    if rule is GreedyRule.ER:
        return {v: edges_after(dag, v) for v in cand}
    if rule is GreedyRule.MD:
        return {v: _mu(dag, v) - dag.degree(v) for v in cand}
    raise ValueError(rule)


def _ratio_cmp(a: tuple[int, int], b: tuple[int, int]) -> int:
    lhs, rhs = a[0] * b[1], b[0] * a[1]
    return (lhs > rhs) - (lhs < rhs)


def choose(dag: Dag, rule: GreedyRule) -> int:
    """The vertex ``rule`` eliminates next on ``dag``."""
    scores = _scores(dag, rule)
    if rule is GreedyRule.MAR:
        return min(scores, key=lambda v: (scores[v], -dag.degree(v), v))
    if rule is GreedyRule.PC:
        def cmp(u: int, v: int) -> int:
            c = _ratio_cmp(scores[u], scores[v])
            return c or (_mu(dag, u) - _mu(dag, v)) or (u - v)

        return min(scores, key=functools.cmp_to_key(cmp))
    return min(scores, key=lambda v: (scores[v], _mu(dag, v), v))


def greedy_eliminate(dag: Dag, rule: GreedyRule | str) -> EliminationTrace:
    rule = GreedyRule(rule)
    seq = []
    current = dag
    while current.internal:
        v = choose(current, rule)
        seq.append(v)
        current, _ = eliminate_vertex(current, v)
    return eliminate_sequence(dag, seq)


# -- separators and MiddleOut ----------------------------------------------------


def find_st_separator(dag: Dag) -> frozenset[int]:
    """Smallest set of internal vertices separating sources from sinks (undirected)."""
    res = min_vertex_cut(dag, dag.sources, dag.sinks, CutMode.UNDIRECTED)
    if not res.separable:
        raise NotSeparable("a source is adjacent to a sink")
    return res.cut


def _undirected_components(vertices: set[int], dag: Dag) -> list[set[int]]:
    comps = []
    left = set(vertices)
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in dag.succ[v] | dag.pred[v]:
                if w in left and w not in comp:
                    comp.add(w)
                    stack.append(w)
        left -= comp
        comps.append(comp)
    return comps


@dataclass(frozen=True)
class SubDag:
    """A piece of the graph used by MiddleOut: its vertices and edges."""

    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def order(self, dag: Dag, direction: Direction) -> list[int]:
        """Original-internal non-separator vertices in (reverse) topological order."""
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, w in self.edges:
            if direction is Direction.FORWARD:
                adj[w].add(u)
            else:
                adj[u].add(w)
        return _kahn(self.vertices, adj)


def middle_out_parts(dag: Dag, sep: frozenset[int]) -> tuple[SubDag, SubDag, list[SubDag]]:
    """Split ``dag`` around separator ``sep`` into the left, right and inner parts."""
    rest = set(dag.present) - sep
    sources, sinks = set(dag.sources), set(dag.sinks)
    left: set[int] = set()
    right: set[int] = set()
    inner: list[set[int]] = []
    for comp in _undirected_components(rest, dag):
        if comp & sources:
            if comp & sinks:
                raise InvalidSeparator("separator leaves a source connected to a sink")
            left |= comp
        elif comp & sinks:
            right |= comp
        else:
            inner.append(comp)

    def induced(part: set[int], drop: Callable[[int, int], bool]) -> SubDag:
        keep = part | sep
        edges = {
            (u, w)
            for u in keep
            for w in dag.succ[u]
            if w in keep and not (u in sep and w in sep) and not drop(u, w)
        }
        touched = {x for e in edges for x in e}
        verts = frozenset(v for v in keep if v not in sep or v in touched)
        return SubDag(verts, frozenset(edges))

    return (
        induced(left, lambda u, w: u in sources and w in sep),
        induced(right, lambda u, w: u in sep and w in sinks),
        [induced(comp, lambda u, w: False) for comp in inner],
    )


def middle_out_sequence(dag: Dag, sep: Iterable[int] | None = None) -> list[int]:
    if sep is None:
        sep = find_st_separator(dag)
    sep = frozenset(sep)
    bad = [v for v in sep if dag.roles[v] is not Role.INTERNAL or v not in dag.present]
    if bad:
        raise InvalidSeparator(f"separator contains non-internal vertices {sorted(bad)}")
    left, right, inner = middle_out_parts(dag, sep)

    def internal(order: list[int]) -> list[int]:
        return [v for v in order if dag.roles[v] is Role.INTERNAL and v not in sep]

    seq = internal(left.order(dag, Direction.REVERSE))
    seq += internal(right.order(dag, Direction.FORWARD))
    for part in inner:
        seq += internal(part.order(dag, Direction.FORWARD))
    residual = eliminate_set(dag, seq)
    seq += topological_sequence(residual, Direction.FORWARD)
    return seq


def middle_out(dag: Dag, sep: Iterable[int] | None = None) -> EliminationTrace:
    """Eliminate away from a separator on both sides, then the separator itself."""
    return eliminate_sequence(dag, middle_out_sequence(dag, sep))


# -- named heuristics and ensembles -------------------------------------------------

Heuristic = Callable[[Dag], EliminationTrace]


def _greedy(rule: GreedyRule) -> Heuristic:
    return lambda dag: greedy_eliminate(dag, rule)


def _sa(dag: Dag) -> EliminationTrace:
    from .stochastic import SaParams, simulated_annealing

    return simulated_annealing(dag, SaParams())


HEURISTICS: dict[str, Heuristic] = {
    "Fw": lambda dag: topological_mode(dag, Direction.FORWARD),
    "Rev": lambda dag: topological_mode(dag, Direction.REVERSE),
    **{rule.value: _greedy(rule) for rule in GreedyRule},
    "MO": middle_out,
    "SA": _sa,
}

DEFAULT_ENSEMBLE = ("Fw", "Rev", "Mar", "rMar")


def run_heuristic(dag: Dag, name: str) -> EliminationTrace:
    try:
        method = HEURISTICS[name]
    except KeyError:
        raise KeyError(f"unknown heuristic {name!r}; known: {', '.join(HEURISTICS)}") from None
    return method(dag)


@dataclass
class EnsembleResult:
    """Best total-cost trace and, separately, the best edge count found."""

    best_name: str | None
    best: EliminationTrace | None
    mec_name: str | None
    mec_edges: int | None
    mec_subset: frozenset[int] | None
    runs: dict[str, EliminationTrace] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)
    elapsed_ms: dict[str, float] = field(default_factory=dict)


def ensemble(
    dag: Dag,
    members: Iterable[str | Heuristic] = DEFAULT_ENSEMBLE,
) -> EnsembleResult:
    """Run every member; the earliest member wins ties.

    A failing member is recorded in ``errors`` and does not stop the others.
    """
    result = EnsembleResult(None, None, None, None, None)
    for member in members:
        name = member if isinstance(member, str) else getattr(member, "__name__", repr(member))
        start = time.perf_counter()
        try:
            trace = run_heuristic(dag, member) if isinstance(member, str) else member(dag)
        except (ElimError, KeyError) as exc:
            result.errors[name] = str(exc)
            continue
        result.elapsed_ms[name] = (time.perf_counter() - start) * 1000
        result.runs[name] = trace
        if result.best is None or trace.total_cost < result.best.total_cost:
            result.best_name, result.best = name, trace
        if result.mec_edges is None or trace.min_edges < result.mec_edges:
            result.mec_name, result.mec_edges = name, trace.min_edges
            result.mec_subset = trace.min_edges_set
    return result
