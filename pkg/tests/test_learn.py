from fractions import Fraction
from itertools import chain, combinations

import numpy as np
import pytest

from conftest import random_instances
from explorable import (
    InvalidInstanceError,
    QuerySession,
    WeightSampleSet,
    discretize_candidates,
    empirical_km,
    erm_mandatory_set,
    mandatory_set,
    mandatory_counts,
    prediction_mandatory_set,
    sample_weights,
    snap_predictions,
)


def all_subsets(n):
    return chain.from_iterable(combinations(range(n), size) for size in range(n + 1))


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def test_samples_stay_inside_intervals():
    instance = random_instances(1, n=8, edges=5)[0]
    for model in ('uniform', 'point', 'two-point'):
        sample_set = sample_weights(instance, 12, model, np.random.default_rng(3))
        assert len(sample_set) == 12
        for sample in sample_set.samples:
            assert all(interval.contains(w) for interval, w in zip(instance.intervals, sample))


def test_point_model_repeats_the_predictions(fig3l):
    sample_set = sample_weights(fig3l, 3, 'point', np.random.default_rng(0))
    assert set(sample_set.samples) == {fig3l.predictions}


def test_sampling_is_seeded(fig3l):
    first = sample_weights(fig3l, 5, 'uniform', np.random.default_rng(9))
    second = sample_weights(fig3l, 5, 'uniform', np.random.default_rng(9))
    assert first == second


def test_unknown_sampling_model(fig3l):
    with pytest.raises(ValueError):
        sample_weights(fig3l, 2, 'gaussian')


def test_sample_outside_interval_rejected(fig3l):
    with pytest.raises(InvalidInstanceError):
        WeightSampleSet.of(fig3l, [[9, 2, 3, 4]])


def test_sample_file(tmp_path, fig4):
    sample_set = sample_weights(fig4, 4, 'two-point', np.random.default_rng(1))
    path = tmp_path / 'samples.json'
    sample_set.save(path)
    assert WeightSampleSet.from_file(path) == sample_set
    assert 'w' not in sample_set.to_dict()['vertices'][0]


# ---------------------------------------------------------------------------
# Empirical risk minimization
# ---------------------------------------------------------------------------


def test_fig3l_realization_and_prediction(fig3l):
    sample_set = WeightSampleSet.of(fig3l, [fig3l.true_weights(), fig3l.predictions])
    assert mandatory_counts(sample_set) == [2, 1, 0, 0]
    # vertex 1 is mandatory in exactly half of the samples and is kept
    assert erm_mandatory_set(sample_set) == {0, 1}
    assert empirical_km({0, 1}, sample_set) == Fraction(1, 2)
    assert empirical_km({0}, sample_set) == Fraction(1, 2)
    assert empirical_km(set(), sample_set) == Fraction(3, 2)


def test_erm_needs_samples(fig3l):
    with pytest.raises(ValueError):
        erm_mandatory_set(WeightSampleSet.of(fig3l, []))
    with pytest.raises(ValueError):
        empirical_km({0}, WeightSampleSet.of(fig3l, []))


def test_erm_is_optimal_among_all_subsets():
    suite = random_instances(50, n=8, edges=5) + random_instances(50, seed=50, n=10, edges=6)
    for seed, instance in enumerate(suite):
        model = ('uniform', 'two-point')[seed % 2]
        sample_set = sample_weights(instance, 1 + seed % 6, model, np.random.default_rng(seed))
        best = empirical_km(erm_mandatory_set(sample_set), sample_set)
        real = [mandatory_set(sample_set, sample) for sample in sample_set.samples]
        for subset in all_subsets(instance.n):
            chosen = frozenset(subset)
            assert best <= Fraction(sum(len(r ^ chosen) for r in real), len(real))


def test_erm_ignores_sample_order():
    instance = random_instances(1, seed=4, n=9, edges=6)[0]
    sample_set = sample_weights(instance, 7, 'uniform', np.random.default_rng(4))
    shuffled = WeightSampleSet.of(instance, reversed(sample_set.samples))
    assert erm_mandatory_set(shuffled) == erm_mandatory_set(sample_set)


# ---------------------------------------------------------------------------
# Discretized predictions
# ---------------------------------------------------------------------------


def test_fig3l_candidates(fig3l):
    candidates = discretize_candidates(fig3l)
    assert candidates.candidates(0) == tuple(
        Fraction(x) for x in ('0.75', '1.5', '2', '2.5', '2.8', '3.1', '3.55')
    )


def test_interval_without_inner_limits_has_a_single_midpoint():
    instance = random_instances(1, n=1, edges=0)[0]
    candidates = discretize_candidates(instance)
    interval = instance.intervals[0]
    assert candidates.candidates(0) == ((interval.lower + interval.upper) / 2,)


def test_snap_keeps_limits_and_moves_to_gap_midpoints(fig3l):
    candidates = discretize_candidates(fig3l)
    assert candidates.snap(0, Fraction(1)) == Fraction(3, 4)
    assert candidates.snap(0, Fraction(5, 2)) == Fraction(5, 2)
    assert candidates.snap(0, Fraction(3, 2) + Fraction(1, 10)) == 2


def test_snapping_preserves_prediction_mandatory_set():
    suite = random_instances(200, n=8, edges=6) + random_instances(100, seed=500, family='sorting', n=8)
    for instance in suite:
        snapped = snap_predictions(instance)
        assert prediction_mandatory_set(QuerySession(snapped)) == prediction_mandatory_set(QuerySession(instance))
