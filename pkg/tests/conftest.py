from __future__ import annotations

import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from elimorder.dag import Dag

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def dag_from_pairs(n: int, pairs) -> Dag | None:
    """Build a Dag from raw pairs, dropping isolated vertices; None if no edges."""
    pairs = sorted(set(pairs))
    used = sorted({v for e in pairs for v in e})
    if not pairs:
        return None
    ids = {v: i for i, v in enumerate(used)}
    return Dag.from_edges(len(used), [(ids[a], ids[b]) for a, b in pairs], [f"v{v}" for v in used])


def random_dag(rng: random.Random, n: int, p: float = 0.4, max_internal: int | None = None) -> Dag:
    """Random DAG on up to ``n`` vertices; vertex ids are shuffled against the topological order."""
    while True:
        perm = list(range(n))
        rng.shuffle(perm)
        pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        dag = dag_from_pairs(n, pairs)
        if dag is None:
            continue
        if max_internal is not None and len(dag.internal) > max_internal:
            continue
        return dag


@st.composite
def dags(draw, min_n: int = 2, max_n: int = 9, max_internal: int | None = None) -> Dag:
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    pairs = []
    it = iter(bits)
    for i in range(n):
        for j in range(i + 1, n):
            if next(it):
                pairs.append((perm[i], perm[j]))
    dag = dag_from_pairs(n, pairs)
    if dag is None:
        dag = Dag.from_edges(2, [(0, 1)])
    if max_internal is not None and len(dag.internal) > max_internal:
        keep = set(dag.internal[:max_internal])
        # Turn surplus internal vertices into sinks by cutting their out-edges.
        pairs = [(a, b) for a, b in dag.edges() if a not in set(dag.internal) - keep]
        dag = dag_from_pairs(dag.n, pairs) or Dag.from_edges(2, [(0, 1)])
    return dag


def path_criterion_edges(dag: Dag, xs) -> set[tuple[int, int]]:
    """Edges of D_X by the path criterion: an i->j path whose interior lies in X."""
    xs = set(xs)
    out = set()
    for i in dag.present - xs:
        stack = list(dag.succ[i])
        seen = set(stack)
        while stack:
            u = stack.pop()
            if u in xs:
                for w in dag.succ[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            else:
                out.add((i, u))
    return out


def chain(*names: str) -> Dag:
    labels = list(names)
    return Dag.from_edges(len(labels), [(i, i + 1) for i in range(len(labels) - 1)], labels)


def diamond() -> Dag:
    return Dag.from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)], ["s", "a", "b", "t"])
