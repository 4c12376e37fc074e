import itertools
import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import chain, dags, diamond, path_criterion_edges, random_dag
from elimorder.bounds import (
    CutMode,
    cut_from_sources,
    cut_to_sinks,
    final_markowitz_bound,
    half_edge_bound,
    min_vertex_cut,
    mu_star,
    report,
)
from elimorder.dag import Dag, eliminate_sequence
from elimorder.errors import NotInternal
from elimorder.exact import brute_force_ove
from elimorder.generators import evolution, tightness_family


def connected(dag, a, b, removed, undirected=False):
    adj = {v: set(dag.succ[v]) for v in dag.present}
    if undirected:
        for v in dag.present:
            for w in dag.succ[v]:
                adj[w].add(v)
    stack = [v for v in a if v not in removed]
    seen = set(stack)
    while stack:
        u = stack.pop()
        if u in b:
            return True
        for w in adj[u]:
            if w not in seen and w not in removed:
                seen.add(w)
                stack.append(w)
    return False


def brute_min_cut(dag, a, b, undirected=False):
    """Smallest vertex set outside a|b separating a from b, by exhaustive search."""
    candidates = sorted(dag.present - set(a) - set(b))
    for size in range(len(candidates) + 1):
        for cut in itertools.combinations(candidates, size):
            if not connected(dag, a, b, set(cut), undirected):
                return size
    return None


class TestMinVertexCut:
    def test_path(self):
        assert min_vertex_cut(chain("s", "v", "t"), {0}, {2}).value == 1

    def test_two_disjoint_paths(self):
        res = min_vertex_cut(diamond(), {0}, {3})
        assert res.value == 2 and res.cut == {1, 2}

    def test_not_separable(self):
        d = Dag.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        res = min_vertex_cut(d, {0}, {2})
        assert not res.separable and res.value == d.n + 1

    def test_evolution_cut_from_sources(self):
        d = evolution(3, 3, 2)
        assert {cut_from_sources(d, k) for k in d.internal} == {5}

    @given(dags(min_n=3, max_n=12), st.randoms(use_true_random=False), st.booleans())
    def test_menger_against_exhaustive_search(self, d, rnd, undirected):
        verts = sorted(d.present)
        assume(len(verts) >= 3)
        a = set(rnd.sample(verts, 1 + rnd.randrange(2)))
        b = set(rnd.sample([v for v in verts if v not in a], 1))
        mode = CutMode.UNDIRECTED if undirected else CutMode.DIRECTED
        res = min_vertex_cut(d, a, b, mode)
        expected = brute_min_cut(d, a, b, undirected)
        if expected is None:
            assert not res.separable
        else:
            assert res.separable and res.value == expected
            assert len(res.cut) == expected
            assert not connected(d, a, b, set(res.cut), undirected)


class TestMuStar:
    def test_path(self):
        assert mu_star(chain("s", "v", "t"), 1) == 1

    def test_evolution(self):
        d = evolution(3, 3, 2)
        assert {mu_star(d, k) for k in d.internal} == {25}

    def test_star(self):
        d = Dag.from_edges(5, [(0, 3), (1, 3), (2, 3), (3, 4)])
        assert mu_star(d, 3) == 3

    def test_rejects_source(self):
        with pytest.raises(NotInternal):
            mu_star(chain("s", "v", "t"), 0)

    @given(dags(max_n=9), st.randoms(use_true_random=False))
    def test_every_step_pays_at_least_mu_star(self, d, rnd):
        order = list(d.internal)
        rnd.shuffle(order)
        tr = eliminate_sequence(d, order)
        for v, cost in zip(tr.sequence, tr.step_costs):
            assert cost >= mu_star(d, v)


class TestHalfEdges:
    def test_evolution(self):
        assert half_edge_bound(evolution(4, 2, 2)) == 48

    def test_bipartite(self):
        assert half_edge_bound(Dag.from_edges(4, [(0, 2), (0, 3), (1, 2)])) == 0

    def test_path(self):
        assert half_edge_bound(chain("s", "v", "t")) == 1


class TestFinalMarkowitz:
    def test_path(self):
        assert final_markowitz_bound(chain("s", "v", "t"), 1).value == 1

    def test_evolution_by_path_criterion(self):
        # In D_{I-v}, v's neighbours are exactly the sources above and sinks below it:
        # 5 sources one stencil hop away and all 9 sinks two hops away (or vice versa).
        d = evolution(3, 3, 2)
        for v in d.internal:
            edges = path_criterion_edges(d, [u for u in d.internal if u != v])
            ins = sum(1 for _, w in edges if w == v)
            outs = sum(1 for u, _ in edges if u == v)
            assert ins * outs == 45
            assert final_markowitz_bound(d, v).value == 45

    def test_tightness_last_vertex(self):
        d = tightness_family(5, 3)
        vk = d.labels.index("v5")
        assert final_markowitz_bound(d, vk).value == 3

    def test_flagged_with_source_sink_edge(self):
        d = Dag.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        res = final_markowitz_bound(d, 1)
        assert (res.value, res.applicable) == (0, False)


class TestReport:
    def test_path(self):
        assert report(chain("s", "v", "t")).best == 1

    def test_evolution(self):
        r = report(evolution(4, 2, 2))
        assert r.half_edges == 48 and r.best <= 352
        assert r.best == max(r.half_edges, r.mu_star_sum, *r.final_markowitz.values())

    def test_sound_against_brute_force(self):
        rng = random.Random(11)
        for _ in range(150):
            d = random_dag(rng, rng.randint(3, 9), rng.uniform(0.25, 0.6), max_internal=6)
            assert report(d).best <= brute_force_ove(d).objective

    def test_cuts_to_sinks(self):
        d = evolution(3, 3, 2)
        assert {cut_to_sinks(d, k) for k in d.internal} == {5}
