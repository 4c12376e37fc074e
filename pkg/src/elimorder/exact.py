"""Exact solvers for small and medium instances.

``brute_force_ove`` is deliberately naive and shares no code with the rest of
the package beyond the :class:`Dag` container, so it can serve as an oracle.
``bnb_ove`` and ``exact_mec`` are branch-and-bound searches that handle the
smaller evolution graphs.

Both searches lean on the fact that eliminating a set ``X`` yields the same
graph whatever the order.  The branch-and-bound for total cost therefore
keys its transposition table on the eliminated set (a bitmask), which
identifies the residual graph exactly; there are no hash collisions to guard
against.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence

from .dag import Dag, Role, ancestors, descendants, eliminate_set, eliminate_vertex
from .flow import INF, VertexFlow
from .heuristics import DEFAULT_ENSEMBLE, ensemble


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    BUDGET_EXCEEDED = "BudgetExceeded"
    TOO_LARGE = "TooLarge"


@dataclass(frozen=True)
class ExactResult:
    """Outcome of an exact search.

    ``witness`` is an elimination order for total cost and a sorted vertex
    list for edge count.  ``objective`` is ``None`` only when the instance was
    refused as too large.
    """

    objective: int | None
    witness: tuple[int, ...]
    nodes_explored: int
    status: Status

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


# -- brute force ---------------------------------------------------------------


def brute_force_ove(dag: Dag, limit: int = 8) -> ExactResult:
    """Try every order of the internal vertices."""
    internal = dag.internal
    if len(internal) > limit:
        return ExactResult(None, (), 0, Status.TOO_LARGE)
    succ = {v: set(dag.succ[v]) for v in dag.present}
    pred = {v: set(dag.pred[v]) for v in dag.present}
    best = [None, ()]
    nodes = 0

    def go(remaining: list[int], cost: int, path: list[int]) -> None:
        nonlocal nodes
        nodes += 1
        if not remaining:
            if best[0] is None or cost < best[0]:
                best[0], best[1] = cost, tuple(path)
            return
        for i, v in enumerate(remaining):
            ins, outs = pred[v], succ[v]
            added = []
            for u in ins:
                succ[u].discard(v)
                for w in outs:
                    if w not in succ[u]:
                        succ[u].add(w)
                        pred[w].add(u)
                        added.append((u, w))
            for w in outs:
                pred[w].discard(v)
            path.append(v)
            go(remaining[:i] + remaining[i + 1 :], cost + len(ins) * len(outs), path)
            path.pop()
            for u, w in added:
                succ[u].discard(w)
                pred[w].discard(u)
            for u in ins:
                succ[u].add(v)
            for w in outs:
                pred[w].add(v)

    go(internal, 0, [])
    return ExactResult(best[0], best[1], nodes, Status.OPTIMAL)


# -- branch and bound for total cost ---------------------------------------------


class _Budget(Exception):
    pass


class _CutOracle:
    """Cached ``Cut(S, k)`` and ``Cut(k, T)`` on residual graphs ``D_X``.

    A cut in ``D_X`` equals the cut in ``D`` with the vertices of ``X`` made
    uncuttable, and only the part of ``X`` among ``k``'s ancestors (resp.
    descendants) can matter, which makes for a compact cache key.
    """

    def __init__(self, dag: Dag) -> None:
        self.dag = dag
        self.flow = VertexFlow(dag.n, dag.edges())
        self.anc = [_mask(ancestors(dag, v)) for v in range(dag.n)]
        self.desc = [_mask(descendants(dag, v)) for v in range(dag.n)]
        self.sources = dag.sources
        self.sinks = dag.sinks
        self.cache: dict[tuple[int, int, int], int] = {}

    def _caps(self, x: int, k: int) -> list[int]:
        caps = [INF if x >> v & 1 else 1 for v in range(self.dag.n)]
        caps[k] = INF
        return caps

    def mu_star(self, x: int, k: int) -> int:
        up_key = (0, k, x & self.anc[k])
        up = self.cache.get(up_key)
        if up is None:
            up = self.flow.max_flow(self._caps(x & self.anc[k], k), self.sources, [k])
            self.cache[up_key] = up
        down_key = (1, k, x & self.desc[k])
        down = self.cache.get(down_key)
        if down is None:
            down = self.flow.max_flow(self._caps(x & self.desc[k], k), [k], self.sinks)
            self.cache[down_key] = down
        return up * down


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _half_edges(dag: Dag) -> int:
    roles = dag.roles
    m = 0
    for u in dag.present:
        if roles[u] is Role.INTERNAL:
            m += len(dag.succ[u])
        else:
            m += sum(1 for w in dag.succ[u] if roles[w] is Role.INTERNAL)
    return (m + 1) // 2


def bnb_ove(
    dag: Dag,
    budget: int = 10**8,
    incumbent: Sequence[int] | None = None,
) -> ExactResult:
    """Depth-first branch-and-bound over elimination prefixes.

    The incumbent starts as the best of the default heuristic ensemble (or
    the order passed in).  A prefix is pruned when its cost plus
    ``max(half-edge bound, sum of mu*)`` on the residual graph reaches the
    incumbent.  The table stores, per eliminated set, a proven lower bound on
    the cost of finishing from there; exploring a state raises its entry to
    ``incumbent - prefix cost``.
    """
    if incumbent is None:
        start = ensemble(dag, DEFAULT_ENSEMBLE).best
        best_cost, best_seq = start.total_cost, list(start.sequence)
    else:
        from .dag import eliminate_sequence

        best_cost = eliminate_sequence(dag, incumbent).total_cost
        best_seq = list(incumbent)
    oracle = _CutOracle(dag)
    table: dict[int, int] = {}
    nodes = 0
    path: list[int] = []

    def lower(g: Dag, x: int) -> int:
        total = 0
        for k in g.internal:
            total += oracle.mu_star(x, k)
        return max(total, _half_edges(g))

    def go(g: Dag, x: int, cost: int) -> None:
        nonlocal nodes, best_cost, best_seq
        nodes += 1
        if nodes > budget:
            raise _Budget
        internal = g.internal
        if not internal:
            if cost < best_cost:
                best_cost, best_seq = cost, list(path)
            return
        bound = table.get(x)
        if bound is None:
            bound = lower(g, x)
            table[x] = bound
        if cost + bound >= best_cost:
            return
        children = sorted(internal, key=lambda v: (len(g.pred[v]) * len(g.succ[v]), v))
        for v in children:
            child, step = eliminate_vertex(g, v)
            path.append(v)
            go(child, x | 1 << v, cost + step)
            path.pop()
        table[x] = max(table[x], best_cost - cost)

    try:
        go(dag, 0, 0)
        status = Status.OPTIMAL
    except _Budget:
        status = Status.BUDGET_EXCEEDED
        nodes = budget
    return ExactResult(best_cost, tuple(best_seq), nodes, status)


# -- exact minimum edge count -------------------------------------------------------


class _KeptFlowBound:
    """Lower bound on edges leaving the decided part of the graph.

    Decisions are made in topological order.  For a source or a kept,
    decided vertex ``u``, its final out-neighbors outside the decided region
    hit every ``u``-to-sink path that avoids kept decided vertices.  So their
    number is at least a vertex cut in which eliminated vertices cannot be
    cut and kept decided vertices are deleted.
    """

    def __init__(self, dag: Dag) -> None:
        self.n = dag.n
        self.flow = VertexFlow(dag.n, dag.edges())
        self.desc = [_mask(descendants(dag, v)) for v in range(dag.n)]
        self.sinks = dag.sinks
        self.cache: dict[tuple[int, int, int], int] = {}

    def kappa(self, u: int, elim: int, kept: int) -> int:
        d = self.desc[u]
        key = (u, elim & d, kept & d)
        hit = self.cache.get(key)
        if hit is None:
            caps = [0] * self.n
            for v in range(self.n):
                if elim >> v & 1:
                    caps[v] = INF
                elif not kept >> v & 1:
                    caps[v] = 1
            caps[u] = INF
            hit = self.flow.max_flow(caps, [u], self.sinks)
            self.cache[key] = hit
        return hit


def exact_mec(dag: Dag, limit: int = 22, budget: int | None = None) -> ExactResult:
    """Smallest edge count reachable by eliminating a subset of internal vertices.

    A depth-first search decides each internal vertex (topological order,
    ascending id among ties), trying elimination before keeping it.  Once a
    vertex is decided, its final in-degree is known, since all its ancestors
    are decided too; these in-degrees accumulate exactly.  Edges into the
    undecided region are bounded below by :class:`_KeptFlowBound`.  The
    incumbent starts from the heuristic scan ensemble.
    """
    order = [v for v in dag.topological_order() if dag.roles[v] is Role.INTERNAL]
    if len(order) > limit:
        return ExactResult(None, (), 0, Status.TOO_LARGE)
    start = ensemble(dag, DEFAULT_ENSEMBLE)
    best = dag.n_edges
    best_set: frozenset[int] = frozenset()
    if start.mec_edges is not None and start.mec_edges < best:
        best, best_set = start.mec_edges, start.mec_subset
    bound = _KeptFlowBound(dag)
    sources = dag.sources
    sinks = dag.sinks
    nodes = 0
    elim_list: list[int] = []

    def go(i: int, g: Dag, elim: int, kept: int, kept_list: list[int], acc: int) -> None:
        nonlocal nodes, best, best_set
        nodes += 1
        if budget is not None and nodes > budget:
            raise _Budget
        if i == len(order):
            total = acc + sum(len(g.pred[t]) for t in sinks)
            if total < best:
                best, best_set = total, frozenset(elim_list)
            return
        lb = acc
        for u in sources:
            lb += bound.kappa(u, elim, kept)
        for u in kept_list:
            lb += bound.kappa(u, elim, kept)
            if lb >= best:
                return
        if lb >= best:
            return
        v = order[i]
        child, _ = eliminate_vertex(g, v)
        elim_list.append(v)
        go(i + 1, child, elim | 1 << v, kept, kept_list, acc)
        elim_list.pop()
        kept_list.append(v)
        go(i + 1, g, elim, kept | 1 << v, kept_list, acc + len(g.pred[v]))
        kept_list.pop()

    try:
        go(0, dag, 0, 0, [], 0)
        status = Status.OPTIMAL
    except _Budget:
        status = Status.BUDGET_EXCEEDED
    return ExactResult(best, tuple(sorted(best_set)), nodes, status)


def mec_by_enumeration(dag: Dag) -> ExactResult:
    """Recompute ``|E(D_X)|`` from scratch for every subset (oracle use only)."""
    internal = dag.internal
    best, witness, count = dag.n_edges, (), 0
    for r in range(len(internal) + 1):
        for xs in itertools.combinations(internal, r):
            count += 1
            edges = eliminate_set(dag, xs).n_edges
            if edges < best:
                best, witness = edges, xs
    return ExactResult(best, tuple(witness), count, Status.OPTIMAL)
