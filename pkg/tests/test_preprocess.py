import random

from hypothesis import given
from hypothesis import strategies as st

from conftest import chain, dags, random_dag
from elimorder.dag import Dag, Role, eliminate_sequence
from elimorder.exact import brute_force_ove
from elimorder.generators import evolution
from elimorder.preprocess import Rule, applicable_rule, backward_pending, forward_pending, reduce


def test_chain_is_fully_reduced():
    d = chain("s", "a", "b", "t")
    log = reduce(d)
    assert log.accrued_cost == 2
    assert [s.rule for s in log.prefix] == [Rule.MARKOWITZ_ONE] * 2
    assert log.residual.edge_set() == {(0, 3)}


def test_evolution_has_nothing_to_reduce():
    d = evolution(4, 2, 2)
    assert all(applicable_rule(d, v) is None for v in d.internal)
    assert reduce(d).prefix == ()


def test_pending_sets():
    # Sources 0, 1 feed v=2; v feeds internal 3 and sink 4; 0 -> 3 already exists.
    d = Dag.from_edges(6, [(0, 2), (1, 2), (2, 3), (2, 4), (3, 5), (0, 3)])
    assert forward_pending(d, 2) == {3}
    assert backward_pending(d, 2) == {1}


def test_pending_ignores_source_sink_pairs():
    d = Dag.from_edges(5, [(0, 2), (1, 2), (2, 3), (2, 4)])
    assert forward_pending(d, 2) == backward_pending(d, 2) == set()
    assert applicable_rule(d, 2) is Rule.MU_STAR_FORWARD


def test_mu_star_backward_rule():
    # One source fans out through v into two independent branches.
    d = Dag.from_edges(6, [(0, 1), (1, 2), (1, 3), (2, 4), (3, 5)])
    assert applicable_rule(d, 1) is Rule.MU_STAR_BACKWARD


def test_no_rule_when_elimination_first_is_not_safe():
    # Eliminating v first costs 2 + 2; eliminating w first costs 1 + 2.
    d = Dag.from_edges(5, [(0, 2), (1, 2), (2, 3), (3, 4)])
    assert applicable_rule(d, 2) is None
    assert applicable_rule(d, 3) is Rule.MARKOWITZ_ONE


def test_log_replays_to_residual():
    rng = random.Random(5)
    for _ in range(100):
        d = random_dag(rng, rng.randint(3, 10))
        log = reduce(d)
        tr = eliminate_sequence(d, log.sequence)
        assert tr.final.edge_set() == log.residual.edge_set()
        assert tr.total_cost == log.accrued_cost == sum(s.cost for s in log.prefix)


def test_safety_against_brute_force():
    rng = random.Random(17)
    for _ in range(200):
        d = random_dag(rng, rng.randint(3, 9), rng.uniform(0.25, 0.6), max_internal=6)
        log = reduce(d)
        assert log.accrued_cost + brute_force_ove(log.residual).objective == brute_force_ove(d).objective


@given(dags(max_n=10))
def test_idempotent(d):
    assert reduce(reduce(d).residual).prefix == ()


@given(dags(max_n=9, max_internal=6), st.randoms(use_true_random=False))
def test_scan_order_does_not_change_accrued_cost(d, rnd):
    order = list(d.present)
    rnd.shuffle(order)
    assert reduce(d, order).accrued_cost == reduce(d).accrued_cost


def test_as_dict_uses_labels():
    data = reduce(chain("s", "a", "b", "t")).as_dict()
    assert data == {
        "prefix": [
            {"vertex": "a", "rule": "MarkowitzOne", "cost": 1},
            {"vertex": "b", "rule": "MarkowitzOne", "cost": 1},
        ],
        "accrued_cost": 2,
    }


def test_residual_keeps_roles():
    d = chain("s", "a", "b", "t")
    assert reduce(d).residual.roles == (Role.SOURCE, Role.INTERNAL, Role.INTERNAL, Role.SINK)
