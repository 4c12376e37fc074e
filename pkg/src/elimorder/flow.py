"""Reusable vertex-capacitated max-flow on a fixed DAG skeleton.

Search routines ask many cut questions about one graph with changing vertex
capacities.  :class:`VertexFlow` builds the split network once and re-solves
with new capacities, which is several times cheaper than rebuilding.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

INF = 1 << 40


class VertexFlow:
    """Max-flow where every vertex ``v`` becomes the arc ``2v -> 2v+1``.

    Edges of the skeleton get infinite capacity.  Vertex capacities are given
    per query; capacity 0 deletes the vertex, :data:`INF` makes it uncuttable.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]) -> None:
        self.n = n
        self.src = 2 * n
        self.dst = 2 * n + 1
        size = 2 * n + 2
        self.head: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(size)]
        self._base: list[int] = []
        for v in range(n):
            self._arc(2 * v, 2 * v + 1, 0)
        for u, w in edges:
            self._arc(2 * u + 1, 2 * w, INF)
        self._fixed = len(self.head)

    def _arc(self, u: int, w: int, cap: int) -> None:
        self.adj[u].append(len(self.head))
        self.head.append(w)
        self._base.append(cap)
        self.adj[w].append(len(self.head))
        self.head.append(u)
        self._base.append(0)

    def max_flow(
        self,
        caps: Sequence[int],
        sources: Iterable[int],
        sinks: Iterable[int],
        limit: int = INF,
    ) -> int:
        """Flow from the in-nodes of ``sources`` to the out-nodes of ``sinks``.

        Stops early once the flow reaches ``limit``.
        """
        # Terminal arcs are appended per query and truncated afterwards.
        del self.head[self._fixed :]
        del self._base[self._fixed :]
        for lst in (self.adj[self.src], self.adj[self.dst]):
            lst.clear()
        for lst in self.adj:
            while lst and lst[-1] >= self._fixed:
                lst.pop()
        for s in sources:
            self._arc(self.src, 2 * s, INF)
        for t in sinks:
            self._arc(2 * t + 1, self.dst, INF)
        cap = list(self._base)
        for v in range(self.n):
            cap[2 * v] = caps[v]
        head, adj, src, dst = self.head, self.adj, self.src, self.dst
        flow = 0
        while flow < limit:
            parent = {src: -1}
            queue = deque([src])
            found = False
            while queue and not found:
                u = queue.popleft()
                for e in adj[u]:
                    w = head[e]
                    if cap[e] > 0 and w not in parent:
                        parent[w] = e
                        if w == dst:
                            found = True
                            break
                        queue.append(w)
            if not found:
                break
            push, w = INF, dst
            while w != src:
                e = parent[w]
                push = min(push, cap[e])
                w = head[e ^ 1]
            if push >= INF:
                return INF
            w = dst
            while w != src:
                e = parent[w]
                cap[e] -= push
                cap[e ^ 1] += push
                w = head[e ^ 1]
            flow += push
        return flow
