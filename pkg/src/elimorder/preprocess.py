"""Reductions that fix a prefix of some optimal elimination order."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .bounds import mu_star
from .dag import Dag, Role, eliminate_vertex


class Rule(str, enum.Enum):
    MARKOWITZ_ONE = "MarkowitzOne"
    MU_STAR_FORWARD = "MuStarForward"
    MU_STAR_BACKWARD = "MuStarBackward"


@dataclass(frozen=True)
class ReductionStep:
    vertex: int
    rule: Rule
    cost: int


@dataclass(frozen=True)
class ReductionLog:
    prefix: tuple[ReductionStep, ...]
    residual: Dag
    accrued_cost: int

    @property
    def sequence(self) -> list[int]:
        return [step.vertex for step in self.prefix]

    def as_dict(self) -> dict:
        return {
            "prefix": [
                {"vertex": self.residual.labels[s.vertex], "rule": s.rule.value, "cost": s.cost}
                for s in self.prefix
            ],
            "accrued_cost": self.accrued_cost,
        }


def _excluded(dag: Dag, u: int, w: int) -> bool:
    """True when ``(u, w)`` lies in ``E`` or in ``S x T``."""
    if w in dag.succ[u]:
        return True
    return dag.roles[u] is Role.SOURCE and dag.roles[w] is Role.SINK


def forward_pending(dag: Dag, v: int) -> set[int]:
    """``P+(v)``: out-neighbors that elimination of ``v`` would newly join to."""
    return {w for w in dag.succ[v] if any(not _excluded(dag, u, w) for u in dag.pred[v])}


def backward_pending(dag: Dag, v: int) -> set[int]:
    """``P-(v)``: in-neighbors that elimination of ``v`` would newly join from."""
    return {u for u in dag.pred[v] if any(not _excluded(dag, u, w) for w in dag.succ[v])}


def applicable_rule(dag: Dag, v: int) -> Rule | None:
    """The first reduction rule that allows eliminating ``v`` right now."""
    mu = len(dag.pred[v]) * len(dag.succ[v])
    if mu == 1:
        return Rule.MARKOWITZ_ONE
    fwd = forward_pending(dag, v)
    bwd = backward_pending(dag, v)
    fwd_ok = len(fwd) <= 1 and all(dag.roles[w] is Role.SINK for w in fwd)
    bwd_ok = len(bwd) <= 1 and all(dag.roles[u] is Role.SOURCE for u in bwd)
    if not (fwd_ok or bwd_ok) or mu != mu_star(dag, v):
        return None
    return Rule.MU_STAR_FORWARD if fwd_ok else Rule.MU_STAR_BACKWARD


def reduce(dag: Dag, scan_order: Iterable[int] | None = None) -> ReductionLog:
    """Apply the rules exhaustively, restarting the scan after every hit.

    ``scan_order`` ranks vertices for the scan; ascending id by default.
    """
    rank = {v: i for i, v in enumerate(scan_order)} if scan_order is not None else None
    steps: list[ReductionStep] = []
    current = dag
    while True:
        candidates = current.internal
        if rank is not None:
            candidates.sort(key=lambda v: rank.get(v, len(rank) + v))
        for v in candidates:
            rule = applicable_rule(current, v)
            if rule is not None:
                current, cost = eliminate_vertex(current, v)
                steps.append(ReductionStep(v, rule, cost))
                break
        else:
            break
    return ReductionLog(tuple(steps), current, sum(s.cost for s in steps))
