"""Simulated annealing over elimination orders and a Metropolis chain over subsets.

Randomness comes from numpy's ``Generator`` driven by the PCG64 bit
generator; restarts draw independent child streams via ``SeedSequence.spawn``.
Runs are reproducible given the seed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dag import Dag, EliminationTrace, eliminate_sequence, eliminate_set, eliminate_vertex
from .errors import InvalidParams
from .heuristics import Direction, topological_sequence


class Move(str, enum.Enum):
    ADJACENT_SWAP = "adjacent-swap"
    RANDOM_SWAP = "random-swap"
    REINSERT = "reinsert"


class Start(str, enum.Enum):
    FORWARD = "forward"
    RANDOM = "random"


AUTO = "auto"


@dataclass(frozen=True)
class SaParams:
    iterations: int = 20000
    initial_temp: float | str = 1.0
    cooling: float = 0.999
    moves: Move = Move.ADJACENT_SWAP
    seed: int = 0
    start: Start = Start.FORWARD
    restarts: int = 1

    def __post_init__(self) -> None:
        if not 0 < self.cooling < 1:
            raise InvalidParams("cooling must lie in (0, 1)")
        if self.iterations < 1:
            raise InvalidParams("iterations must be at least 1")
        if self.restarts < 1:
            raise InvalidParams("restarts must be at least 1")
        if self.initial_temp != AUTO and not float(self.initial_temp) > 0:
            raise InvalidParams("initial_temp must be positive or 'auto'")


@dataclass(frozen=True)
class McmcParams:
    iterations: int = 20000
    temperature: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.temperature > 0:
            raise InvalidParams("temperature must be positive")
        if self.iterations < 0:
            raise InvalidParams("iterations must be non-negative")


class _OrderState:
    """An order with every prefix graph cached.

    ``graphs[k]`` is the graph after the first ``k`` eliminations.  It depends
    only on the set of those vertices, so reordering positions ``lo..hi``
    leaves every other prefix graph and step cost unchanged.
    """

    def __init__(self, dag: Dag, seq: list[int]) -> None:
        self.seq = seq
        self.graphs = [dag]
        self.costs = []
        for v in seq:
            g, c = eliminate_vertex(self.graphs[-1], v)
            self.graphs.append(g)
            self.costs.append(c)
        self.total = sum(self.costs)

    def evaluate(self, new: list[int], lo: int, hi: int) -> tuple[int, list[Dag], list[int]]:
        """Cost change if positions ``lo..hi`` are replaced by ``new[lo..hi]``."""
        g = self.graphs[lo]
        graphs, costs = [], []
        for k in range(lo, hi + 1):
            g, c = eliminate_vertex(g, new[k])
            graphs.append(g)
            costs.append(c)
        return sum(costs) - sum(self.costs[lo : hi + 1]), graphs, costs

    def apply(self, new: list[int], lo: int, hi: int, graphs: list[Dag], costs: list[int], delta: int) -> None:
        self.seq = new
        self.graphs[lo + 1 : hi + 2] = graphs
        self.costs[lo : hi + 1] = costs
        self.total += delta


def _propose(rng: np.random.Generator, seq: list[int], move: Move) -> tuple[list[int], int, int]:
    m = len(seq)
    new = list(seq)
    if move is Move.ADJACENT_SWAP:
        i = int(rng.integers(m - 1))
        new[i], new[i + 1] = new[i + 1], new[i]
        return new, i, i + 1
    i, j = (int(x) for x in rng.choice(m, size=2, replace=False))
    if move is Move.RANDOM_SWAP:
        new[i], new[j] = new[j], new[i]
    else:
        new.insert(j, new.pop(i))
    return new, min(i, j), max(i, j)


def _anneal(
    dag: Dag,
    p: SaParams,
    rng: np.random.Generator,
    callback: Callable[[int, int], None] | None,
) -> EliminationTrace:
    internal = dag.internal
    if p.start is Start.FORWARD:
        seq = topological_sequence(dag, Direction.FORWARD)
    else:
        seq = [internal[i] for i in rng.permutation(len(internal))]
    state = _OrderState(dag, seq)
    best_total, best_seq = state.total, list(state.seq)
    if len(seq) < 2:
        return eliminate_sequence(dag, best_seq)

    if p.initial_temp == AUTO:
        deltas = [abs(state.evaluate(*_propose(rng, state.seq, p.moves))[0]) for _ in range(100)]
        temp = float(np.mean(deltas)) or 1.0
    else:
        temp = float(p.initial_temp)

    for it in range(p.iterations):
        new, lo, hi = _propose(rng, state.seq, p.moves)
        delta, graphs, costs = state.evaluate(new, lo, hi)
        if delta <= 0 or rng.random() < math.exp(-delta / temp):
            state.apply(new, lo, hi, graphs, costs, delta)
            if state.total < best_total:
                best_total, best_seq = state.total, list(state.seq)
        temp *= p.cooling
        if callback is not None:
            callback(it, best_total)
    return eliminate_sequence(dag, best_seq)


def simulated_annealing(
    dag: Dag,
    p: SaParams = SaParams(),
    callback: Callable[[int, int], None] | None = None,
) -> EliminationTrace:
    """Best order visited by annealing over permutations of the internal vertices.

    ``callback(iteration, best_cost)`` is invoked after every iteration.
    """
    best: EliminationTrace | None = None
    for child in np.random.SeedSequence(p.seed).spawn(p.restarts):
        rng = np.random.Generator(np.random.PCG64(child))
        trace = _anneal(dag, p, rng, callback)
        if best is None or trace.total_cost < best.total_cost:
            best = trace
    assert best is not None
    return best


def mcmc_edge_min(
    dag: Dag,
    p: McmcParams = McmcParams(),
    callback: Callable[[int, int], None] | None = None,
) -> tuple[frozenset[int], int]:
    """Metropolis chain over eliminated sets, minimizing the edge count.

    Each step toggles one uniformly chosen internal vertex.  Adding a vertex
    is a single elimination on the current graph; removing one rebuilds
    ``D_X`` from the original.  Edge counts are memoized per subset.
    """
    internal = dag.internal
    rng = np.random.Generator(np.random.PCG64(p.seed))
    current, x = dag, 0
    energy: dict[int, int] = {0: dag.n_edges}
    best_x, best = 0, dag.n_edges
    if not internal:
        return frozenset(), best
    for it in range(p.iterations):
        v = internal[int(rng.integers(len(internal)))]
        bit = 1 << v
        y = x ^ bit
        proposed = None
        if y not in energy:
            if y & bit:
                proposed = eliminate_vertex(current, v)[0]
            else:
                proposed = eliminate_set(dag, _members(y))
            energy[y] = proposed.n_edges
        delta = energy[y] - energy[x]
        if delta <= 0 or rng.random() < math.exp(-delta / p.temperature):
            if proposed is None:
                proposed = eliminate_vertex(current, v)[0] if y & bit else eliminate_set(dag, _members(y))
            current, x = proposed, y
            if energy[x] < best:
                best, best_x = energy[x], x
        if callback is not None:
            callback(it, best)
    return frozenset(_members(best_x)), best


def _members(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out
