"""Instance families with known structure or known optimal costs."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .dag import Dag
from .errors import InvalidParams


class Family(str, enum.Enum):
    EVOLUTION = "evolution"
    TIGHTNESS = "tightness"
    MIDDLEOUT_HARD = "middleout-hard"
    OVE_GAP = "ove-gap"
    MEC_GAP = "mec-gap"


@dataclass(frozen=True)
class FamilySpec:
    kind: Family
    params: dict[str, int] = field(default_factory=dict)

    def build(self) -> Dag:
        p = self.params
        try:
            if self.kind is Family.EVOLUTION:
                return evolution(p["p"], p["q"], p["steps"])
            if self.kind is Family.TIGHTNESS:
                return tightness_family(p["k"], p["l"])
            if self.kind is Family.MIDDLEOUT_HARD:
                return middleout_hard(p["n"])[0]
            return gap_instance(self.kind, p["n"])
        except KeyError as exc:
            raise InvalidParams(f"{self.kind.value}: missing parameter {exc.args[0]!r}") from None


class _Labeled:
    """Collects named vertices in creation order."""

    def __init__(self) -> None:
        self.labels: list[str] = []
        self.edges: list[tuple[int, int]] = []

    def add(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def dag(self) -> Dag:
        return Dag.from_edges(len(self.labels), self.edges, self.labels)


def evolution(p: int, q: int, steps: int) -> Dag:
    """Time-stepping graph of a 5-point stencil on a ``p x q`` torus.

    There are ``steps + 2`` layers; layer 0 holds the sources and the last
    layer the sinks.  Vertex ids run layer by layer, then row-major.
    """
    if p < 2 or q < 2 or steps < 1:
        raise InvalidParams("evolution needs p >= 2, q >= 2, steps >= 1")
    g = _Labeled()
    layers = []
    for layer in range(steps + 2):
        layers.append([[g.add(f"L{layer}_{r}_{c}") for c in range(q)] for r in range(p)])
    for layer in range(steps + 1):
        here, there = layers[layer], layers[layer + 1]
        for r in range(p):
            for c in range(q):
                stencil = {
                    (r, c),
                    ((r + 1) % p, c),
                    ((r - 1) % p, c),
                    (r, (c + 1) % q),
                    (r, (c - 1) % q),
                }
                g.edges.extend((here[r][c], there[rr][cc]) for rr, cc in sorted(stencil))
    return g.dag()


def parse_evolution_name(name: str) -> tuple[int, int, int]:
    """Decode instance names like ``2d4x2x3`` into ``(p, q, steps)``."""
    if not name.startswith("2d"):
        raise InvalidParams(f"not an evolution instance name: {name!r}")
    try:
        p, q, t = (int(x) for x in name[2:].split("x"))
    except ValueError:
        raise InvalidParams(f"not an evolution instance name: {name!r}") from None
    return p, q, t


def tightness_family(k: int, l: int) -> Dag:
    """Graph on which forward mode costs ``k + l`` and reverse ``2l(k-1) + l``."""
    if k < 2 or l < 1:
        raise InvalidParams("tightness family needs k >= 2, l >= 1")
    g = _Labeled()
    s = g.add("s1")
    vs = [g.add(f"v{i}") for i in range(1, k + 1)]
    ts = [g.add(f"t{i}") for i in range(1, l + 1)]
    g.edges += [(s, v) for v in vs]
    g.edges += list(zip(vs, vs[1:]))
    g.edges.append((vs[0], ts[0]))
    g.edges += [(vs[-1], t) for t in ts]
    return g.dag()


def middleout_hard(n: int) -> tuple[Dag, frozenset[int]]:
    """Five-layer graph ``S -> a -> B -> u -> W -> t`` and the separator ``B + W``."""
    if n < 2:
        raise InvalidParams("middleout_hard needs n >= 2")
    g = _Labeled()
    ss = [g.add(f"s{i}") for i in range(1, n + 1)]
    a = g.add("a")
    bs = [g.add(f"b{i}") for i in range(1, n + 1)]
    u = g.add("u")
    ws = [g.add(f"w{i}") for i in range(1, n + 1)]
    t = g.add("t")
    g.edges += [(s, a) for s in ss] + [(a, b) for b in bs] + [(b, u) for b in bs]
    g.edges += [(u, w) for w in ws] + [(w, t) for w in ws]
    return g.dag(), frozenset(bs + ws)


def gap_instance(kind: Family | str, n: int) -> Dag:
    """Layered graphs whose LP relaxations are weak.

    ``ove-gap``: layers S, A, B, M, U, W, T of sizes n^(1/4), n^(1/2),
    n^(1/2), rest, n^(1/2), n^(1/2), n^(1/4), complete between neighbors.
    ``mec-gap``: S, A, B, T of size n/4 with matchings S-A and B-T and a
    complete A-B layer.
    """
    kind = Family(kind)
    g = _Labeled()
    if kind is Family.OVE_GAP:
        r4 = round(n ** 0.25)
        if n < 256 or r4**4 != n:
            raise InvalidParams("ove-gap needs n to be a fourth power >= 256")
        r2 = math.isqrt(n)
        sizes = [("S", r4), ("A", r2), ("B", r2), ("M", n - 2 * r4 - 4 * r2), ("U", r2), ("W", r2), ("T", r4)]
        layers = [[g.add(f"{name}{i}") for i in range(size)] for name, size in sizes]
        for left, right in zip(layers, layers[1:]):
            g.edges += [(x, y) for x in left for y in right]
        return g.dag()
    if kind is Family.MEC_GAP:
        if n < 4 or n % 4:
            raise InvalidParams("mec-gap needs n divisible by 4")
        k = n // 4
        ss, as_, bs, ts = ([g.add(f"{name}{i}") for i in range(k)] for name in "SABT")
        g.edges += list(zip(ss, as_)) + [(a, b) for a in as_ for b in bs] + list(zip(bs, ts))
        return g.dag()
    raise InvalidParams(f"not a gap family: {kind.value}")
