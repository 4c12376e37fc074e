"""Structural DAG model and vertex elimination.

A :class:`Dag` is immutable.  Vertices are dense integers ``0..n-1``; each one
carries a frozen role (source, internal, sink) decided from the input graph.
Eliminating an internal vertex returns a new graph in which the vertex is
absent and every in-neighbor is joined to every out-neighbor.
"""

from __future__ import annotations

import enum
import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    CycleDetected,
    ElimError,
    EliminationFailed,
    IsolatedVertex,
    NotInternal,
    NotPresent,
)


class Role(enum.Enum):
    SOURCE = "source"
    INTERNAL = "internal"
    SINK = "sink"


@dataclass(frozen=True, eq=False)
class Dag:
    """Immutable simple DAG with frozen source/internal/sink roles.

    Use :meth:`from_edges` to build one; the raw constructor trusts its input.
    Eliminated vertices keep their id but are missing from ``present``.
    """

    roles: tuple[Role, ...]
    succ: tuple[frozenset[int], ...]
    pred: tuple[frozenset[int], ...]
    present: frozenset[int]
    labels: tuple[str, ...]
    n_edges: int

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
    ) -> "Dag":
        succ: list[set[int]] = [set() for _ in range(n)]
        pred: list[set[int]] = [set() for _ in range(n)]
        for u, w in edges:
            if u == w:
                raise CycleDetected(f"self-loop on vertex {u}")
            succ[u].add(w)
            pred[w].add(u)
        roles = []
        for v in range(n):
            if not succ[v] and not pred[v]:
                name = labels[v] if labels else str(v)
                raise IsolatedVertex(f"vertex {name!r} has no edges")
            if not pred[v]:
                roles.append(Role.SOURCE)
            elif not succ[v]:
                roles.append(Role.SINK)
            else:
                roles.append(Role.INTERNAL)
        if labels is None:
            labels = [str(v) for v in range(n)]
        dag = cls(
            roles=tuple(roles),
            succ=tuple(frozenset(s) for s in succ),
            pred=tuple(frozenset(p) for p in pred),
            present=frozenset(range(n)),
            labels=tuple(labels),
            n_edges=sum(len(s) for s in succ),
        )
        dag.topological_order()  # raises CycleDetected
        return dag

    # -- basic queries -------------------------------------------------
    @property
    def n(self) -> int:
        """Number of vertex ids, including eliminated ones."""
        return len(self.roles)

    @property
    def sources(self) -> list[int]:
        return [v for v in range(self.n) if self.roles[v] is Role.SOURCE]

    @property
    def sinks(self) -> list[int]:
        return [v for v in range(self.n) if self.roles[v] is Role.SINK]

    @property
    def internal(self) -> list[int]:
        """Internal vertices still present, ascending."""
        return sorted(v for v in self.present if self.roles[v] is Role.INTERNAL)

    def is_internal(self, v: int) -> bool:
        return self.roles[v] is Role.INTERNAL

    def edges(self) -> list[tuple[int, int]]:
        """All edges, sorted."""
        return sorted((u, w) for u in self.present for w in self.succ[u])

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset((u, w) for u in self.present for w in self.succ[u])

    def has_edge(self, u: int, w: int) -> bool:
        return w in self.succ[u]

    def degree(self, v: int) -> int:
        return len(self.pred[v]) + len(self.succ[v])

    def topological_order(self) -> list[int]:
        """Present vertices in topological order, ascending id among ties."""
        indeg = {v: len(self.pred[v]) for v in self.present}
        heap = [v for v, d in indeg.items() if d == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for w in self.succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        if len(order) != len(self.present):
            raise CycleDetected("graph contains a directed cycle")
        return order

    def _check_internal(self, v: int) -> None:
        if not 0 <= v < self.n or self.roles[v] is not Role.INTERNAL:
            raise NotInternal(f"vertex {v} is not internal")
        if v not in self.present:
            raise NotPresent(f"vertex {v} was already eliminated")

    def with_edges_removed(self, removed: Iterable[tuple[int, int]]) -> "Dag":
        """Copy without the given edges; roles stay as they were."""
        succ = list(self.succ)
        pred = list(self.pred)
        count = self.n_edges
        for u, w in removed:
            if w in succ[u]:
                succ[u] = succ[u] - {w}
                pred[w] = pred[w] - {u}
                count -= 1
        return Dag(self.roles, tuple(succ), tuple(pred), self.present, self.labels, count)


def markowitz(dag: Dag, v: int) -> int:
    """Markowitz degree ``|N-(v)| * |N+(v)|`` of an internal vertex."""
    dag._check_internal(v)
    return len(dag.pred[v]) * len(dag.succ[v])


def eliminate_vertex(dag: Dag, v: int) -> tuple[Dag, int]:
    """Return ``(D/v, cost)``.  The input graph is left untouched."""
    dag._check_internal(v)
    ins, outs = dag.pred[v], dag.succ[v]
    cost = len(ins) * len(outs)
    succ = list(dag.succ)
    pred = list(dag.pred)
    count = dag.n_edges - len(ins) - len(outs)
    for u in ins:
        old = succ[u]
        new = (old - {v}) | outs
        count += len(new) - len(old) + 1
        succ[u] = new
    for w in outs:
        pred[w] = (pred[w] - {v}) | ins
    succ[v] = frozenset()
    pred[v] = frozenset()
    return (
        Dag(dag.roles, tuple(succ), tuple(pred), dag.present - {v}, dag.labels, count),
        cost,
    )


@dataclass(frozen=True)
class EliminationTrace:
    """Result of eliminating a sequence of internal vertices.

    ``min_edges`` is the smallest edge count over every prefix, the empty one
    included; ``min_edges_prefix`` is the shortest prefix length achieving it.
    """

    sequence: tuple[int, ...]
    step_costs: tuple[int, ...]
    total_cost: int
    min_edges: int
    min_edges_prefix: int
    final_edges: int
    final: Dag = field(repr=False, compare=False)

    @property
    def min_edges_set(self) -> frozenset[int]:
        """The eliminated set realizing ``min_edges``."""
        return frozenset(self.sequence[: self.min_edges_prefix])


def eliminate_sequence(dag: Dag, seq: Iterable[int]) -> EliminationTrace:
    current = dag
    order: list[int] = []
    costs: list[int] = []
    best, best_at = dag.n_edges, 0
    for i, v in enumerate(seq):
        try:
            current, cost = eliminate_vertex(current, v)
        except ElimError as exc:
            raise EliminationFailed(i, exc) from exc
        order.append(v)
        costs.append(cost)
        if current.n_edges < best:
            best, best_at = current.n_edges, i + 1
    return EliminationTrace(
        sequence=tuple(order),
        step_costs=tuple(costs),
        total_cost=sum(costs),
        min_edges=best,
        min_edges_prefix=best_at,
        final_edges=current.n_edges,
        final=current,
    )


def eliminate_set(dag: Dag, xs: Iterable[int]) -> Dag:
    """``D_X``: eliminate ``X`` in ascending id order (the result is order-free)."""
    current = dag
    for v in sorted(set(xs)):
        current, _ = eliminate_vertex(current, v)
    return current


def transitive_closure(dag: Dag) -> set[tuple[int, int]]:
    pairs: set[tuple[int, int]] = set()
    for v in dag.present:
        for w in descendants(dag, v):
            pairs.add((v, w))
    return pairs


def descendants(dag: Dag, v: int) -> set[int]:
    """Vertices reachable from ``v`` by a nonempty path."""
    return _search(dag.succ, v)


def ancestors(dag: Dag, v: int) -> set[int]:
    """Vertices that reach ``v`` by a nonempty path."""
    return _search(dag.pred, v)


def _search(adj: Sequence[frozenset[int]], start: int) -> set[int]:
    seen: set[int] = set()
    queue = deque(adj[start])
    seen.update(adj[start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def reach_sets(dag: Dag, v: int) -> tuple[set[int], set[int]]:
    """Sources reaching ``v`` and sinks reachable from ``v`` (reflexive)."""
    up = ancestors(dag, v) | {v}
    down = descendants(dag, v) | {v}
    return (
        {u for u in up if dag.roles[u] is Role.SOURCE},
        {w for w in down if dag.roles[w] is Role.SINK},
    )
