"""Integer programs for optimal elimination and minimum edge count.

Models are plain data (:class:`IlpModel`) that can be written as LP text for
an external MILP solver; :func:`read_solution` turns the solver's answer back
into an elimination order or subset and checks it by replay.

Variable naming uses vertex ids:

* ``x_i_j``: ``i`` is eliminated before ``j`` (only for internal ``i < j``;
  ``x_j_i`` is substituted by ``1 - x_i_j``).
* ``e_i_j``: edge ``(i, j)`` exists at some point.
* ``z_i_j_k``: eliminating ``k`` multiplies along ``i -> k -> j``.
* ``s_i``, ``w_i_j``, ``y_i_j``: for edge count, ``i`` is eliminated, a path
  ``i ~> j`` with eliminated interior exists, the edge survives.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .bounds import cut_from_sources, cut_to_sinks, half_edge_bound
from .dag import Dag, Role, eliminate_sequence, eliminate_set, transitive_closure
from .errors import ElimError, InconsistentOrder, NonIntegral, ReplayMismatch
from .exact import ExactResult, Status
from .preprocess import reduce

TOLERANCE = 1e-6


class Problem(str, enum.Enum):
    OVE = "ove"
    MEC = "mec"


class Variant(str, enum.Enum):
    A = "vA"  # base model
    B = "vB"  # + variables outside the transitive closure fixed to 0
    C = "vC"  # + per-vertex mu* and half-edge cuts
    D = "vD"  # vC on the preprocessed residual graph


class Sense(str, enum.Enum):
    LE = "<="
    GE = ">="
    EQ = "="


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[str, int], ...]
    sense: Sense
    rhs: int
    kind: str = ""


@dataclass
class IlpModel:
    """A binary program in minimization form.

    ``variables`` lists the free binaries in declaration order; ``fixed``
    maps variables pinned to a constant (written to the Bounds section and
    already folded into every constraint).
    """

    problem: Problem
    variant: Variant | None
    variables: list[str] = field(default_factory=list)
    fixed: dict[str, int] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[str, int] = field(default_factory=dict)
    graph: Dag | None = None
    base_graph: Dag | None = None
    accrued_cost: int = 0
    prefix: tuple[int, ...] = ()

    @property
    def n_variables(self) -> int:
        return len(self.variables)

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    def count(self, kind: str) -> int:
        return sum(1 for c in self.constraints if c.kind == kind)

    def vertex_names(self) -> dict[int, str]:
        g = self.graph
        return {v: g.labels[v] for v in sorted(g.present)} if g else {}


class _Expr:
    """Linear expression with an integer constant, used while building rows."""

    __slots__ = ("terms", "const")

    def __init__(self, terms: dict[str, int] | None = None, const: int = 0) -> None:
        self.terms = terms or {}
        self.const = const

    def __add__(self, other: "_Expr") -> "_Expr":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return _Expr(terms, self.const + other.const)

    def __neg__(self) -> "_Expr":
        return _Expr({k: -v for k, v in self.terms.items()}, -self.const)

    def __sub__(self, other: "_Expr") -> "_Expr":
        return self + (-other)


def _const(c: int) -> _Expr:
    return _Expr({}, c)


def _var(name: str) -> _Expr:
    return _Expr({name: 1})


class _Builder:
    def __init__(self, model: IlpModel) -> None:
        self.model = model
        self.declared: set[str] = set()

    def declare(self, name: str) -> _Expr:
        if name not in self.declared:
            self.declared.add(name)
            self.model.variables.append(name)
        return _var(name)

    def fix(self, name: str, value: int) -> _Expr:
        self.model.fixed[name] = value
        return _const(value)

    def le(self, lhs: _Expr, rhs: _Expr, kind: str) -> None:
        """Add ``lhs <= rhs`` unless it holds for every binary assignment."""
        expr = lhs - rhs
        terms = tuple(sorted((k, v) for k, v in expr.terms.items() if v))
        bound = -expr.const
        if sum(v for _, v in terms if v > 0) <= bound:
            return
        if not terms:
            raise ElimError(f"model is infeasible: constant row 0 <= {bound} in {kind}")
        name = f"c{len(self.model.constraints) + 1}"
        self.model.constraints.append(Constraint(name, terms, Sense.LE, bound, kind))

    def ge(self, lhs: _Expr, rhs: _Expr, kind: str) -> None:
        self.le(-lhs, -rhs, kind)


def build_ove_ilp(dag: Dag, variant: Variant | str = Variant.A) -> IlpModel:
    """Model whose optimum is the cheapest total elimination cost.

    For ``vD`` the model covers the residual graph left by preprocessing;
    ``accrued_cost`` and ``prefix`` record what was already eliminated.
    """
    variant = Variant(variant)
    base = dag
    accrued, prefix = 0, ()
    if variant is Variant.D:
        log = reduce(dag)
        dag, accrued, prefix = log.residual, log.accrued_cost, tuple(log.sequence)
    model = IlpModel(Problem.OVE, variant, graph=dag, base_graph=base, accrued_cost=accrued, prefix=prefix)
    b = _Builder(model)
    verts = sorted(dag.present)
    internal = dag.internal
    is_int = {v: dag.roles[v] is Role.INTERNAL for v in verts}
    edges = dag.edge_set()
    restrict = variant is not Variant.A
    closure = transitive_closure(dag) if restrict else None

    def x(i: int, j: int) -> _Expr:
        if is_int[i] and is_int[j]:
            if i < j:
                return b.declare(f"x_{i}_{j}")
            return _const(1) - b.declare(f"x_{j}_{i}")
        return _const(1 if is_int[i] and not is_int[j] else 0)

    def e(i: int, j: int) -> _Expr:
        name = f"e_{i}_{j}"
        if (i, j) in edges:
            return b.fix(name, 1)
        if restrict and (i, j) not in closure:
            return b.fix(name, 0)
        return b.declare(name)

    def z(i: int, j: int, k: int) -> _Expr:
        name = f"z_{i}_{j}_{k}"
        if restrict and ((i, k) not in closure or (k, j) not in closure):
            return b.fix(name, 0)
        return b.declare(name)

    for i, j in itertools.combinations(internal, 2):
        x(i, j)
    for i, j, k in itertools.permutations(internal, 3):
        b.le(x(i, j) + x(j, k), x(i, k) + _const(1), "transitivity")
    per_k: dict[int, _Expr] = {}
    for k in internal:
        total = _Expr()
        for i in verts:
            if i == k:
                continue
            for j in verts:
                if j == i or j == k:
                    continue
                lhs = x(k, i) + x(k, j) + e(i, k) + e(k, j)
                b.le(lhs, e(i, j) + _const(3), "fill")
                zk = z(i, j, k)
                b.le(lhs, zk + _const(3), "mult")
                total = total + zk
        per_k[k] = total
        for name, coef in total.terms.items():
            model.objective[name] = model.objective.get(name, 0) + coef
    if variant in (Variant.C, Variant.D):
        everything = _Expr()
        for k in internal:
            bound = cut_from_sources(dag, k) * cut_to_sinks(dag, k)
            b.ge(per_k[k], _const(bound), "mu_star")
            everything = everything + per_k[k]
        b.ge(everything, _const(half_edge_bound(dag)), "half_edges")
    return model


def build_mec_ilp(dag: Dag, closure_only: bool = True) -> IlpModel:
    """Model whose optimum is the smallest edge count over eliminated subsets."""
    model = IlpModel(Problem.MEC, None, graph=dag, base_graph=dag)
    b = _Builder(model)
    verts = sorted(dag.present)
    edges = dag.edge_set()
    closure = transitive_closure(dag)

    def s(i: int) -> _Expr:
        return b.declare(f"s_{i}") if dag.roles[i] is Role.INTERNAL else _const(0)

    def pair_ok(i: int, j: int) -> bool:
        return i != j and (not closure_only or (i, j) in closure)

    def w(i: int, j: int) -> _Expr:
        if (i, j) in edges:
            return b.fix(f"w_{i}_{j}", 1)
        if not pair_ok(i, j):
            return _const(0)  # no path from i to j, so never an edge
        return b.declare(f"w_{i}_{j}")

    for i in dag.internal:
        s(i)
    pairs = [(i, j) for i in verts for j in verts if pair_ok(i, j)]
    for i, j in pairs:
        w(i, j)
    for i, j in pairs:
        y = b.declare(f"y_{i}_{j}")
        model.objective[f"y_{i}_{j}"] = 1
        b.ge(y, w(i, j) - s(i) - s(j), "survive")
    for i in verts:
        for k in sorted(dag.succ[i]):
            if dag.roles[k] is not Role.INTERNAL:
                continue
            for j in verts:
                if j in (i, k) or not pair_ok(k, j):
                    continue
                b.ge(w(i, j), w(k, j) + s(k) - _const(1), "path")
    return model


# -- LP text ---------------------------------------------------------------------


def _fmt_terms(terms: Iterable[tuple[str, int]], indent: str = "   ") -> str:
    parts = []
    for name, coef in terms:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        parts.append(f"{sign} {name}" if mag == 1 else f"{sign} {mag} {name}")
    lines = [" ".join(parts[i : i + 8]) for i in range(0, len(parts), 8)]
    return f"\n{indent}".join(lines)


def write_lp(model: IlpModel, sink: TextIO) -> None:
    """Write ``model`` in LP text format; output order is deterministic."""
    out = [f"\\ problem: {model.problem.value}"]
    if model.variant is not None:
        out.append(f"\\ variant: {model.variant.value}")
    if model.accrued_cost:
        out.append(f"\\ accrued cost from preprocessing: {model.accrued_cost}")
    out.append("Minimize")
    obj = sorted(model.objective.items())
    out.append(" obj: " + _fmt_terms(obj) if obj else " obj:")
    out.append("Subject To")
    for c in model.constraints:
        lhs = _fmt_terms(c.terms) if c.terms else "0"
        out.append(f" {c.name}: {lhs} {c.sense.value} {c.rhs}")
    if model.fixed:
        out.append("Bounds")
        out += [f" {name} = {value}" for name, value in sorted(model.fixed.items())]
    if model.variables:
        out.append("Binaries")
        for i in range(0, len(model.variables), 10):
            out.append(" " + " ".join(model.variables[i : i + 10]))
    out.append("End")
    sink.write("\n".join(out) + "\n")


def lp_text(model: IlpModel) -> str:
    import io

    buf = io.StringIO()
    write_lp(model, buf)
    return buf.getvalue()


@dataclass
class LpSummary:
    """What :func:`read_lp` recovers from LP text."""

    objective: dict[str, float]
    constraints: dict[str, tuple[dict[str, float], str, float]]
    bounds: dict[str, float]
    binaries: list[str]


_TERM = re.compile(r"([+-])\s*(\d+(?:\.\d*)?)?\s*([A-Za-z_][A-Za-z0-9_]*)")


def read_lp(text: str) -> LpSummary:
    """Minimal reader for the LP subset produced by :func:`write_lp`."""
    section = None
    chunks: dict[str, list[str]] = {"min": [], "st": [], "bounds": [], "bin": []}
    headers = {"minimize": "min", "subject to": "st", "bounds": "bounds", "binaries": "bin"}
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        key = line.lower()
        if key in headers:
            section = headers[key]
        elif key == "end":
            break
        elif section is not None:
            chunks[section].append(line)

    def parse_expr(s: str) -> dict[str, float]:
        s = s.strip()
        if s and s[0] not in "+-":
            s = "+ " + s
        return {m.group(3): float(m.group(2) or 1) * (-1 if m.group(1) == "-" else 1) for m in _TERM.finditer(s)}

    # Rows and the objective may continue on indented lines without a label.
    def joined(lines: list[str]) -> list[str]:
        rows: list[str] = []
        for line in lines:
            if re.match(r"^[A-Za-z_][A-Za-z0-9_]*:", line) or not rows:
                rows.append(line)
            else:
                rows[-1] += " " + line
        return rows

    obj_rows = joined(chunks["min"])
    objective = parse_expr(obj_rows[0].split(":", 1)[1]) if obj_rows else {}
    constraints = {}
    for row in joined(chunks["st"]):
        name, body = row.split(":", 1)
        m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+(?:\.\d*)?)\s*$", body)
        if m is None:
            raise ValueError(f"cannot parse row {row!r}")
        constraints[name.strip()] = (parse_expr(m.group(1)), m.group(2), float(m.group(3)))
    bounds = {}
    for line in chunks["bounds"]:
        name, value = (p.strip() for p in line.split("="))
        bounds[name] = float(value)
    binaries = [tok for line in chunks["bin"] for tok in line.split()]
    return LpSummary(objective, constraints, bounds, binaries)


# -- solutions ---------------------------------------------------------------------


def parse_solution(text: str) -> dict[str, float]:
    """``name value`` pairs; comments and lines of any other shape are skipped."""
    values: dict[str, float] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        parts = line.split()
        if len(parts) != 2:
            continue
        try:
            values[parts[0]] = float(parts[1])
        except ValueError:
            continue
    return values


def _rounded(model: IlpModel, values: dict[str, float]) -> dict[str, int]:
    out = {}
    for name in model.variables:
        v = values.get(name, 0.0)
        r = round(v)
        if r not in (0, 1) or abs(v - r) > TOLERANCE:
            raise NonIntegral(f"{name} = {v} is not within {TOLERANCE} of 0 or 1")
        out[name] = r
    out.update(model.fixed)
    return out


def objective_value(model: IlpModel, assignment: dict[str, int]) -> int:
    return sum(coef * assignment.get(name, 0) for name, coef in model.objective.items())


def decode_order(model: IlpModel, assignment: dict[str, int]) -> list[int]:
    """Elimination order of the model's internal vertices from the ``x`` values."""
    internal = model.graph.internal
    wins = {v: 0 for v in internal}
    for i, j in itertools.combinations(internal, 2):
        if assignment[f"x_{i}_{j}"]:
            wins[i] += 1
        else:
            wins[j] += 1
    order = sorted(internal, key=lambda v: (-wins[v], v))
    if sorted(wins.values()) != list(range(len(internal))):
        raise InconsistentOrder("x values do not describe a total order")
    return order


def encode_order(model: IlpModel, order: list[int]) -> dict[str, int]:
    """Assignment of every model variable induced by an elimination order.

    ``e`` marks every edge that ever exists and ``z`` every multiplication
    performed, so the objective equals the order's cost.
    """
    dag = model.graph
    pos = {v: i for i, v in enumerate(order)}
    values = {name: 0 for name in model.variables}
    for i, j in itertools.combinations(dag.internal, 2):
        values[f"x_{i}_{j}"] = int(pos[i] < pos[j])
    current = dag
    seen = set(current.edge_set())
    for k in order:
        for i in current.pred[k]:
            for j in current.succ[k]:
                name = f"z_{i}_{j}_{k}"
                if name in values:
                    values[name] = 1
        current = eliminate_sequence(current, [k]).final
        seen |= current.edge_set()
    for i, j in seen:
        name = f"e_{i}_{j}"
        if name in values:
            values[name] = 1
    values.update(model.fixed)
    return values


def encode_subset(model: IlpModel, xs: Iterable[int]) -> dict[str, int]:
    """Assignment for the edge-count model induced by eliminating ``xs``."""
    dag = model.graph
    xs = set(xs)
    values = {name: 0 for name in model.variables}
    for v in xs:
        values[f"s_{v}"] = 1
    for i in dag.present:
        # w_i_j: some path i ~> j has all of its interior in xs.
        stack = list(dag.succ[i])
        seen = set(stack)
        while stack:
            u = stack.pop()
            name = f"w_{i}_{u}"
            if name in values:
                values[name] = 1
            if u in xs:
                for w in dag.succ[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
    values.update(model.fixed)
    for name in list(values):
        if name.startswith("y_"):
            _, i, j = name.split("_")
            i, j = int(i), int(j)
            values[name] = int(values.get(f"w_{i}_{j}", 0) and i not in xs and j not in xs)
    return values


def is_feasible(model: IlpModel, assignment: dict[str, int]) -> bool:
    for c in model.constraints:
        lhs = sum(coef * assignment[name] for name, coef in c.terms)
        if c.sense is Sense.LE and lhs > c.rhs:
            return False
        if c.sense is Sense.GE and lhs < c.rhs:
            return False
        if c.sense is Sense.EQ and lhs != c.rhs:
            return False
    return True


def read_solution(model: IlpModel, text: str) -> ExactResult:
    """Decode and replay-check a solver solution for ``model``."""
    values = _rounded(model, parse_solution(text))
    objective = objective_value(model, values)
    if model.problem is Problem.OVE:
        order = decode_order(model, values)
        replay = eliminate_sequence(model.graph, order).total_cost
        if replay != objective:
            raise ReplayMismatch(f"order costs {replay} but the objective is {objective}")
        witness = model.prefix + tuple(order)
        return ExactResult(objective + model.accrued_cost, witness, 0, Status.OPTIMAL)
    chosen = sorted(int(name[2:]) for name in model.variables if name.startswith("s_") and values[name])
    edges = eliminate_set(model.graph, chosen).n_edges
    if edges != objective:
        raise ReplayMismatch(f"subset leaves {edges} edges but the objective is {objective}")
    return ExactResult(objective, tuple(chosen), 0, Status.OPTIMAL)


def write_solution(model: IlpModel, assignment: dict[str, int]) -> str:
    lines = [f"# objective {objective_value(model, assignment)}"]
    lines += [f"{name} {assignment[name]}" for name in model.variables]
    return "\n".join(lines) + "\n"
