"""Reading and writing graphs as EdgeList text or a small subset of DOT."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .dag import Dag
from .errors import GraphSyntaxError


class GraphFormat(str, enum.Enum):
    EDGELIST = "edgelist"
    DOT = "dot"


@dataclass
class ParseReport:
    duplicate_edges: int = 0


class _Builder:
    def __init__(self) -> None:
        self.ids: dict[str, int] = {}
        self.edges: list[tuple[int, int]] = []
        self.seen: set[tuple[int, int]] = set()
        self.report = ParseReport()

    def vertex(self, name: str) -> int:
        if name not in self.ids:
            self.ids[name] = len(self.ids)
        return self.ids[name]

    def edge(self, a: str, b: str) -> None:
        e = (self.vertex(a), self.vertex(b))
        if e in self.seen:
            self.report.duplicate_edges += 1
            return
        self.seen.add(e)
        self.edges.append(e)

    def build(self) -> Dag:
        labels = list(self.ids)
        return Dag.from_edges(len(labels), self.edges, labels)


def parse_graph(text: str, fmt: GraphFormat | str = GraphFormat.EDGELIST) -> Dag:
    return parse_graph_with_report(text, fmt)[0]


def parse_graph_with_report(
    text: str, fmt: GraphFormat | str = GraphFormat.EDGELIST
) -> tuple[Dag, ParseReport]:
    """Parse ``text``; duplicates are merged and counted in the report."""
    fmt = GraphFormat(fmt)
    builder = _Builder()
    if fmt is GraphFormat.EDGELIST:
        _parse_edgelist(text, builder)
    else:
        _parse_dot(text, builder)
    return builder.build(), builder.report


def _parse_edgelist(text: str, b: _Builder) -> None:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 2:
            b.vertex(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            b.edge(parts[1], parts[2])
        else:
            raise GraphSyntaxError(f"expected 'v <name>' or 'e <a> <b>', got {line!r}", lineno)


_DOT_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*|\#[^\n]*|/\*.*?\*/)
  | (?P<arrow>->)
  | (?P<punct>[{}\[\];,=])
  | (?P<quoted>"(?:[^"\\]|\\.)*")
  | (?P<ident>[A-Za-z0-9_.]+)
    """,
    re.VERBOSE | re.DOTALL,
)


def _dot_tokens(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    line, pos = 1, 0
    while pos < len(text):
        m = _DOT_TOKEN.match(text, pos)
        if m is None:
            raise GraphSyntaxError(f"unexpected character {text[pos]!r}", line)
        kind, value = m.lastgroup, m.group()
        if kind in ("punct", "arrow"):
            tokens.append((value, value, line))
        elif kind == "quoted":
            tokens.append(("id", value[1:-1].replace('\\"', '"'), line))
        elif kind == "ident":
            tokens.append(("id", value, line))
        line += value.count("\n")
        pos = m.end()
    return tokens


def _parse_dot(text: str, b: _Builder) -> None:
    toks = _dot_tokens(text)
    i = 0

    def peek(k: int = 0) -> tuple[str, str, int]:
        if i + k < len(toks):
            return toks[i + k]
        last = toks[-1][2] if toks else 1
        return ("eof", "", last)

    def expect(kind: str) -> tuple[str, str, int]:
        nonlocal i
        tok = peek()
        if tok[0] != kind:
            raise GraphSyntaxError(f"expected {kind!r}, got {tok[1] or 'end of input'!r}", tok[2])
        i += 1
        return tok

    def skip_attributes() -> None:
        nonlocal i
        while peek()[0] == "[":
            while peek()[0] not in ("]", "eof"):
                i += 1
            expect("]")

    tok = expect("id")
    if tok[1].lower() == "strict":
        tok = expect("id")
    if tok[1].lower() != "digraph":
        raise GraphSyntaxError("only 'digraph' is supported", tok[2])
    if peek()[0] == "id":
        i += 1
    expect("{")
    while peek()[0] != "}":
        kind, value, line = peek()
        if kind == "eof":
            raise GraphSyntaxError("missing closing '}'", line)
        if kind in (";", ","):
            i += 1
            continue
        if kind != "id":
            raise GraphSyntaxError(f"unexpected {value!r}", line)
        if value in ("node", "edge", "graph") and peek(1)[0] == "[":
            i += 1
            skip_attributes()
            continue
        if peek(1)[0] == "=":
            i += 3  # graph-level attribute such as rankdir=LR
            continue
        chain = [value]
        i += 1
        while peek()[0] == "->":
            i += 1
            chain.append(expect("id")[1])
        skip_attributes()
        if len(chain) == 1:
            b.vertex(chain[0])
        for a, c in zip(chain, chain[1:]):
            b.edge(a, c)
    expect("}")
    if peek()[0] != "eof":
        raise GraphSyntaxError("trailing input after graph", peek()[2])


def write_edgelist(dag: Dag) -> str:
    """EdgeList text for the present part of ``dag``, using labels as names."""
    lines = [f"v {dag.labels[v]}" for v in sorted(dag.present)]
    lines += [f"e {dag.labels[u]} {dag.labels[w]}" for u, w in dag.edges()]
    return "\n".join(lines) + "\n"


def write_dot(dag: Dag, name: str = "G") -> str:
    def q(v: int) -> str:
        label = dag.labels[v]
        return label if re.fullmatch(r"[A-Za-z0-9_.]+", label) else '"' + label.replace('"', '\\"') + '"'

    body = [f"  {q(v)};" for v in sorted(dag.present) if dag.degree(v) == 0]
    body += [f"  {q(u)} -> {q(w)};" for u, w in dag.edges()]
    return f"digraph {name} {{\n" + "\n".join(body) + "\n}\n"
