from fractions import Fraction

import numpy as np
import pytest

from conftest import corrupted_suite, random_instances
from explorable import (
    DuplicateQueryError,
    Instance,
    InvalidInstanceError,
    QuerySession,
    RealizationSource,
    SizeLimitError,
    feasible_oracle,
    is_mandatory_by_simulation,
    is_solved,
    mandatory_set,
    min_feasible_set,
    min_feasible_size,
    query_alg_hop,
    query_alg_km,
    query_alg_sorting,
    query_witness,
    replay,
)


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


def test_query_collapses_interval_and_records_trace(fig3l):
    session = QuerySession(fig3l)
    assert session.query(1) == 2
    assert session.interval(1).is_trivial
    assert session.interval(1).value == 2
    assert session.trace == (1,)
    assert session.cost == 1
    assert session.unqueried() == [0, 2, 3]


def test_second_query_of_a_vertex_fails(fig3l):
    session = QuerySession(fig3l)
    session.query(0)
    with pytest.raises(DuplicateQueryError):
        session.query(0)
    assert session.cost == 1


def test_query_all_skips_queried(fig3l):
    session = QuerySession(fig3l)
    session.query(2)
    assert session.query_all([0, 2, 3]) == [0, 3]
    assert session.trace == (2, 0, 3)


def test_source_answer_outside_interval_rejected(fig3l):
    session = QuerySession(fig3l, RealizationSource([Fraction(9)] * 4))
    with pytest.raises(InvalidInstanceError):
        session.query(0)


def test_weights_with_predictions(fig3l):
    session = QuerySession(fig3l)
    session.query(0)
    assert session.weights_with_predictions() == [Fraction(11, 4), Fraction(9, 2), Fraction(9, 2), Fraction(13, 4)]


# ---------------------------------------------------------------------------
# Solved state
# ---------------------------------------------------------------------------


def test_fresh_fig3l_is_unsolved(fig3l):
    assert is_solved(QuerySession(fig3l)) is None


def test_fig3l_solved_by_querying_0_and_1(fig3l):
    orientation = is_solved(replay(fig3l, [0, 1]))
    assert orientation is not None
    assert orientation.minima == (1,)


def test_edgeless_instance_is_solved_immediately():
    instance = Instance.from_dict(
        {
            'kind': 'hypergraph-orientation',
            'vertex_count': 1,
            'vertices': [{'id': 0, 'L': '0', 'U': '1', 'w': '0.5', 'what': '0.5'}],
        }
    )
    assert is_solved(QuerySession(instance)).minima == ()


def test_equal_trivial_values_tie_break_by_id():
    instance = Instance.from_dict(
        {
            'kind': 'hypergraph-orientation',
            'vertex_count': 2,
            'vertices': [
                {'id': 0, 'value': '1', 'w': '1', 'what': '1'},
                {'id': 1, 'value': '1', 'w': '1', 'what': '1'},
            ],
            'hyperedges': [[0, 1]],
        }
    )
    assert is_solved(QuerySession(instance)).minima == (0,)


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def test_fig3l_optimum(fig3l):
    assert min_feasible_set(fig3l) == frozenset({0, 1})
    assert feasible_oracle(fig3l, [0, 1])
    assert not feasible_oracle(fig3l, [0])


def test_fig4_optimum(fig4):
    assert min_feasible_set(fig4) == frozenset({1, 3})
    assert min_feasible_size(fig4) == 2


def test_oracle_accepts_other_weights(fig3l):
    # predictions as the realization: only vertex 0 needs a query
    assert min_feasible_size(fig3l, fig3l.predictions) == 1


def test_feasibility_is_monotone():
    rng = np.random.default_rng(2)
    for instance in corrupted_suite(40, n=8, edges=6):
        optimum = min_feasible_set(instance)
        for _ in range(5):
            chosen = optimum | {v for v in range(instance.n) if rng.random() < 0.3}
            assert feasible_oracle(instance, chosen)
            for extra in set(range(instance.n)) - chosen:
                assert feasible_oracle(instance, chosen | {extra})


def test_solution_ignores_query_order():
    rng = np.random.default_rng(3)
    for instance in corrupted_suite(40, n=8, edges=6):
        chosen = sorted(min_feasible_set(instance) | {int(rng.integers(instance.n))})
        expected = is_solved(replay(instance, chosen))
        assert expected is not None
        for _ in range(5):
            order = [int(v) for v in rng.permutation(chosen)]
            assert is_solved(replay(instance, order)) == expected


def test_brute_force_size_guard():
    big = random_instances(1, n=30, edges=4)[0]
    with pytest.raises(SizeLimitError):
        min_feasible_set(big)


def test_simulated_mandatory_matches_characterization():
    for instance in random_instances(25, n=7, edges=5, corruption='flip', level=0.5):
        weights = instance.true_weights()
        simulated = {v for v in range(instance.n) if is_mandatory_by_simulation(instance, v)}
        assert simulated == mandatory_set(instance, weights)


def test_mandatory_vertices_lie_in_every_feasible_set():
    for instance in random_instances(15, n=7, edges=4, corruption='flip', level=0.5):
        optimum = min_feasible_set(instance)
        assert mandatory_set(instance, instance.true_weights()) <= optimum


# ---------------------------------------------------------------------------
# Information hiding
# ---------------------------------------------------------------------------


def _leak(self, v):
    raise AssertionError(f'precise weight of vertex {v} read outside a query')


@pytest.fixture
def sealed(monkeypatch):
    """Realization source for an instance whose precise weights can no longer be read directly."""

    def seal(instance):
        source = RealizationSource(instance.true_weights())
        monkeypatch.setattr(Instance, 'true_weight', _leak)
        return source

    return seal


@pytest.mark.parametrize('algorithm', ['alg1', 'alg2', 'witness'])
def test_orientation_algorithms_only_learn_weights_by_query(algorithm, fig3l, sealed):
    session = QuerySession(fig3l, sealed(fig3l))
    if algorithm == 'alg1':
        query_alg_hop(session, 2)
    elif algorithm == 'alg2':
        query_alg_km(session, 2)
    else:
        query_witness(session)
    assert is_solved(session) is not None


def test_km_core_on_random_instance_only_learns_weights_by_query(sealed):
    instance = random_instances(1, seed=7, n=8, edges=5, corruption='flip', level=0.5)[0]
    session = QuerySession(instance, sealed(instance))
    query_alg_km(session, 3)
    assert is_solved(session) is not None


def test_sorting_only_learns_weights_by_query(fig4, sealed):
    session = QuerySession(fig4, sealed(fig4))
    query_alg_sorting(session)
    assert session.trace == (0, 3, 1)
