from fractions import Fraction
from statistics import mean, stdev

import numpy as np
import pytest

from conftest import corrupted_suite, random_instances
from explorable import (
    Config,
    QuerySession,
    alg_hop,
    alg_km,
    alg_randomized,
    bound_hop,
    bound_km,
    check_gamma,
    draw_gamma,
    error_report,
    expected_bound_hop,
    expected_bound_km,
    finish_with_cover,
    gen_named_fixture,
    is_solved,
    mandatory_set,
    min_feasible_size,
    offline_optimal,
    optimum_size,
    replay,
    witness_baseline,
    xi_hop,
    xi_km,
)

GAMMAS = (2, 3, 4)


def solves(instance, trace):
    return is_solved(replay(instance, trace)) is not None


# ---------------------------------------------------------------------------
# Offline optimum
# ---------------------------------------------------------------------------


def test_offline_fixtures(fig3l, fig4):
    assert set(offline_optimal(fig3l).trace) == {0, 1}
    assert set(offline_optimal(fig4).trace) == {1, 3}


def test_offline_matches_brute_force(static_fixtures):
    suite = random_instances(120, n=8, edges=6, corruption='flip', level=0.5)
    suite += random_instances(80, seed=200, n=10, edges=4, max_edge_size=4, corruption='adversarial', level=0.3)
    suite += static_fixtures
    for instance in suite:
        result = offline_optimal(instance)
        assert result.cost == min_feasible_size(instance)
        assert solves(instance, result.trace)


def test_offline_on_solved_instance_is_empty():
    instance = random_instances(1, n=5, edges=0)[0]
    result = offline_optimal(instance)
    assert result.trace == ()
    assert result.ratio == 1


# ---------------------------------------------------------------------------
# Witness baseline
# ---------------------------------------------------------------------------


def test_witness_on_fig2(fig2):
    result = witness_baseline(fig2)
    assert result.trace == (0, 1)
    assert result.opt_size == 1
    assert result.bound_ok


def test_witness_is_two_competitive():
    for instance in corrupted_suite(30, n=8, edges=6):
        result = witness_baseline(instance)
        assert solves(instance, result.trace)
        assert result.cost <= 2 * result.opt_size


# ---------------------------------------------------------------------------
# Hop-distance algorithm
# ---------------------------------------------------------------------------


def test_hop_on_fig3l(fig3l):
    result = alg_hop(fig3l, 2)
    assert result.opt_size == 2
    assert result.errors.k_hop == 5
    assert result.bound_rhs == 4
    assert result.cost <= 4


def test_hop_with_correct_tradeoff_predictions():
    skeleton = gen_named_fixture('lb1', beta=2).instance
    instance = skeleton.with_weights(skeleton.predictions)
    result = alg_hop(instance, 2)
    assert result.opt_size == 2
    assert result.cost <= Fraction(3, 2) * 2


@pytest.mark.parametrize('gamma', GAMMAS)
def test_hop_bound_on_corrupted_suite(gamma):
    for instance in corrupted_suite(500, n=8, edges=6):
        result = alg_hop(instance, gamma)
        assert solves(instance, result.trace)
        assert result.cost <= gamma * result.opt_size
        assert result.cost <= bound_hop(result.opt_size, result.errors.k_hop, gamma)


@pytest.mark.parametrize('gamma', GAMMAS)
def test_hop_consistency(gamma):
    for instance in random_instances(100, n=9, edges=6):
        result = alg_hop(instance, gamma)
        assert result.cost <= (1 + Fraction(1, gamma)) * result.opt_size


@pytest.mark.parametrize('gamma', GAMMAS)
def test_hop_iterations_respect_the_mandatory_budget(gamma):
    for instance in corrupted_suite(170, n=10, edges=7):
        details = alg_hop(instance, gamma).details
        for iteration in details.iterations:
            assert len(iteration.mandatory_queries) <= gamma - 2
        for iteration in details.iterations[:-1]:
            assert len(iteration.mandatory_queries) == gamma - 2
            assert iteration.branch_queries


# ---------------------------------------------------------------------------
# Mandatory-distance algorithm
# ---------------------------------------------------------------------------


def test_km_on_fig3l(fig3l):
    result = alg_km(fig3l, 2)
    assert result.details.initial_mandatory == {0}
    assert 0 in result.trace[:2]
    assert result.bound_rhs == 4
    assert result.cost <= 4


@pytest.mark.parametrize('gamma', GAMMAS)
def test_km_bound_on_corrupted_suite(gamma):
    for instance in corrupted_suite(500, n=8, edges=6):
        result = alg_km(instance, gamma)
        assert solves(instance, result.trace)
        assert result.cost <= gamma * result.opt_size
        assert result.cost <= bound_km(result.opt_size, result.errors.k_mandatory, gamma)


@pytest.mark.parametrize('gamma', GAMMAS)
def test_km_consistency(gamma):
    for instance in random_instances(100, n=9, edges=6):
        result = alg_km(instance, gamma)
        assert result.cost <= (1 + Fraction(1, gamma - 1)) * result.opt_size


@pytest.mark.parametrize('gamma', GAMMAS)
def test_km_closures_query_only_mandatory_vertices(gamma):
    for instance in corrupted_suite(170, n=9, edges=6, levels=(0.25, 0.5, 1.0)):
        details = alg_km(instance, gamma).details
        mandatory = mandatory_set(instance, instance.true_weights())
        stage = details.cover_stage
        assert set(stage.pre_closure) | set(stage.final_closure) <= mandatory
        for v in stage.final_closure:
            assert v not in details.initial_mandatory


def test_km_with_empty_learned_set_is_the_cover_stage(fig3l):
    result = alg_km(fig3l, 2, predicted_mandatory=[])
    assert result.details.rounds == []
    assert solves(fig3l, result.trace)


@pytest.mark.parametrize('gamma', (2, 3))
def test_km_against_the_mandatory_distance_adversary(gamma):
    fixture = gen_named_fixture('lb_fig5', a=3, b=1)
    result = alg_km(fixture.instance, gamma, source=fixture.adversary.fresh())
    assert result.bound_ok


# ---------------------------------------------------------------------------
# Cover stage
# ---------------------------------------------------------------------------


def test_any_cover_plus_closure_solves():
    for instance in corrupted_suite(40, n=9, edges=7):
        session = QuerySession(instance)
        stage = finish_with_cover(session, 'approx')
        assert not stage.exact
        assert is_solved(session) is not None


def test_optimum_above_the_cover_guard_falls_back_to_approx(fig3r, monkeypatch):
    optimum_size.cache_clear()
    monkeypatch.setattr(Config, 'VC_EXACT_LIMIT', 0)
    result = alg_km(fig3r, 2, backend='approx')
    assert not result.guarantee_exact
    assert result.opt_size == offline_optimal(fig3r, 'approx').cost
    baseline = witness_baseline(fig3r)
    assert not baseline.guarantee_exact
    assert baseline.opt_size == result.opt_size
    optimum_size.cache_clear()


def test_gamma_must_be_integral():
    assert check_gamma(3) == 3
    for bad in (1, Fraction(5, 2)):
        with pytest.raises(ValueError):
            check_gamma(bad)


# ---------------------------------------------------------------------------
# Randomized wrappers
# ---------------------------------------------------------------------------


@pytest.mark.parametrize('gamma', ['2.25', '2.5', '3.75'])
def test_draw_gamma_frequency(gamma):
    gamma = Fraction(gamma)
    rng = np.random.default_rng(11)
    draws = [draw_gamma(gamma, rng) for _ in range(10_000)]
    assert set(draws) <= {int(gamma), int(gamma) + 1}
    share = sum(d == int(gamma) + 1 for d in draws) / len(draws)
    assert abs(share - float(gamma - int(gamma))) <= 0.02


def test_integral_gamma_is_never_randomized():
    rng = np.random.default_rng(0)
    assert {draw_gamma(2, rng) for _ in range(100)} == {2}
    with pytest.raises(ValueError):
        draw_gamma(1.5, rng)


def test_loss_terms():
    assert xi_km(3) == 0 and xi_hop(3) == 0
    assert xi_km(Fraction(5, 2)) == Fraction(1, 4) / (Fraction(3, 2) * 2 * 1)
    assert xi_hop(Fraction(5, 2)) <= Fraction(1, 48)


def test_randomized_run_records_draw(fig3l):
    result = alg_randomized(fig3l, 2.5, 'hop', seed=4)
    assert result.algorithm == 'alg1r'
    assert result.gamma == Fraction(5, 2)
    assert result.gamma_drawn in (2, 3)
    assert result.seed == 4
    assert alg_randomized(fig3l, 2.5, 'hop', seed=4).trace == result.trace


def test_randomized_rejects_flavor(fig3l):
    with pytest.raises(ValueError):
        alg_randomized(fig3l, 2, 'ml')


@pytest.mark.parametrize('flavor', ['hop', 'km'])
@pytest.mark.parametrize('name', ['fig2', 'fig3l', 'fig3r', 'fig4'])
def test_randomized_mean_cost_within_expected_bound(name, flavor):
    instance = gen_named_fixture(name).instance
    gamma = Fraction(5, 2)
    costs = [alg_randomized(instance, gamma, flavor, seed=seed).cost for seed in range(1000)]
    report = error_report(instance)
    opt = min_feasible_size(instance)
    if flavor == 'hop':
        bound = expected_bound_hop(opt, report.k_hop, gamma)
    else:
        bound = expected_bound_km(opt, report.k_mandatory, gamma)
    slack = 3 * stdev(costs) / len(costs) ** 0.5
    assert mean(costs) <= float(bound) + slack
