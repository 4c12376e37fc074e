import pytest
from hypothesis import given

from conftest import dags
from elimorder.dag import Role
from elimorder.errors import CycleDetected, GraphSyntaxError, IsolatedVertex
from elimorder.formats import GraphFormat, parse_graph, parse_graph_with_report, write_dot, write_edgelist
from elimorder.generators import evolution


def roles(d):
    return {d.labels[v]: d.roles[v] for v in range(d.n)}


class TestEdgeList:
    def test_simple_path(self):
        d = parse_graph("e a b\ne b c")
        assert roles(d) == {"a": Role.SOURCE, "b": Role.INTERNAL, "c": Role.SINK}

    def test_ids_follow_first_appearance(self):
        d = parse_graph("v c\ne a c\ne c b\n")
        assert d.labels == ("c", "a", "b")

    def test_comments_and_blank_lines(self):
        d = parse_graph("# header\n\ne a b  # trailing\n")
        assert d.n_edges == 1

    def test_duplicates_are_merged_and_counted(self):
        d, rep = parse_graph_with_report("e a b\ne a b\ne b c\n")
        assert d.n_edges == 2 and rep.duplicate_edges == 1

    def test_cycle(self):
        with pytest.raises(CycleDetected):
            parse_graph("e a b\ne b a")

    def test_isolated_predeclared_vertex(self):
        with pytest.raises(IsolatedVertex):
            parse_graph("v lonely\ne a b")

    def test_syntax_error_has_line(self):
        with pytest.raises(GraphSyntaxError) as info:
            parse_graph("e a b\nedge a c\n")
        assert info.value.line == 2


class TestDot:
    def test_triangle(self):
        d = parse_graph("digraph{a->b;b->c;a->c;}", GraphFormat.DOT)
        assert d.n == 3 and d.n_edges == 3
        assert [d.labels[v] for v in d.internal] == ["b"]

    def test_chains_attributes_and_comments(self):
        text = """
        strict digraph G {
          rankdir=LR;  // graph attribute
          node [shape=box];
          "x 1" -> y -> z [color=red];
          /* block
             comment */
          x2 -> y
        }
        """
        d = parse_graph(text, "dot")
        assert d.labels == ("x 1", "y", "z", "x2")
        assert d.n_edges == 3

    def test_undirected_graph_rejected(self):
        with pytest.raises(GraphSyntaxError):
            parse_graph("graph { a -- b }", GraphFormat.DOT)

    def test_missing_brace_line(self):
        with pytest.raises(GraphSyntaxError) as info:
            parse_graph("digraph {\n a -> b;\n", GraphFormat.DOT)
        assert info.value.line == 2


@given(dags(max_n=10))
def test_edgelist_round_trip(d):
    back = parse_graph(write_edgelist(d))
    assert {(d.labels[u], d.labels[w]) for u, w in d.edges()} == {
        (back.labels[u], back.labels[w]) for u, w in back.edges()
    }
    assert roles(back) == roles(d)


@given(dags(max_n=10))
def test_dot_round_trip(d):
    back = parse_graph(write_dot(d), GraphFormat.DOT)
    assert roles(back) == roles(d) and back.n_edges == d.n_edges


def test_dot_quotes_odd_labels():
    d = parse_graph('e "a" b')  # quotes are part of the name in the edge list
    assert parse_graph(write_dot(d), "dot").labels == d.labels


def test_evolution_round_trip_preserves_labels():
    d = evolution(3, 3, 2)
    assert parse_graph(write_edgelist(d)).labels == d.labels
