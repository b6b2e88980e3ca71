import pytest

from conftest import corrupted_suite, random_instances
from explorable import error_report, hop_indicator, hop_per_vertex, k_hop, k_mandatory, k_number


# ---------------------------------------------------------------------------
# Fixed instances
# ---------------------------------------------------------------------------


def test_fig3l_errors(fig3l):
    report = error_report(fig3l)
    assert report.k_number == 4
    assert report.k_hop == 5
    assert report.k_hop_per_vertex == (2, 3, 0, 0)
    assert report.k_mandatory == 1
    assert report.pred_mandatory == {0}
    assert report.real_mandatory == {0, 1}


def test_fig3r_errors(fig3r):
    report = error_report(fig3r)
    assert report.k_number == 3
    assert report.k_hop == 3
    assert report.k_mandatory == 1
    assert report.real_mandatory == frozenset()


def test_fig4_errors(fig4):
    report = error_report(fig4)
    assert report.k_number == 4
    assert report.k_hop == 3
    assert report.k_hop_restricted == 3
    assert report.k_mandatory == 3


def test_hop_indicator_crossing_a_lower_limit(fig3l):
    # ŵ_0 = 1 -> w_0 = 2.75 passes L_1 = 1.5 but not L_3 = 3.1
    assert hop_indicator(fig3l, 0, 1) == 1
    assert hop_indicator(fig3l, 0, 3) == 0


def test_hop_indicator_needs_two_vertices(fig3l):
    with pytest.raises(ValueError):
        hop_indicator(fig3l, 1, 1)


def test_measure_by_name(fig3l):
    report = error_report(fig3l)
    assert [report.measure(name) for name in ('k_num', 'k_hop', 'k_mand')] == [4, 5, 1]


# ---------------------------------------------------------------------------
# Relations between the measures
# ---------------------------------------------------------------------------


def test_correct_predictions_have_no_error():
    for instance in random_instances(10, n=9, edges=6):
        report = error_report(instance)
        assert (report.k_number, report.k_hop, report.k_mandatory, report.k_hop_restricted) == (0, 0, 0, 0)


def test_mandatory_distance_never_exceeds_hop_distance(static_fixtures):
    suite = corrupted_suite(1000, n=8, edges=6, levels=(0.25, 0.5, 1.0)) + static_fixtures
    for instance in suite:
        distance, _, _ = k_mandatory(instance)
        assert distance <= k_hop(instance)


def test_restricted_hops_are_a_lower_bound():
    for instance in corrupted_suite(20, n=8, edges=4, levels=(0.5, 1.0)):
        report = error_report(instance)
        assert report.k_hop_restricted <= report.k_hop


def test_adversarial_corruption_counts_moved_vertices():
    instance = corrupted_suite(1, n=10, edges=5, levels=(1.0,), corruption='adversarial')[0]
    assert k_number(instance) == 10


# ---------------------------------------------------------------------------
# Hop indicator properties
# ---------------------------------------------------------------------------


def swap_weights_and_predictions(instance):
    return instance.with_predictions(instance.true_weights()).with_weights(instance.predictions)


def test_hop_indicator_ignores_direction(fig3l):
    swapped = swap_weights_and_predictions(fig3l)
    assert error_report(swapped).k_hop_per_vertex == (2, 3, 0, 0)


def test_hop_indicator_symmetric_under_swap():
    for instance in corrupted_suite(60, n=8, edges=6, levels=(0.25, 1.0)):
        swapped = swap_weights_and_predictions(instance)
        for v in range(instance.n):
            for u in range(instance.n):
                if u != v:
                    assert hop_indicator(swapped, v, u) == hop_indicator(instance, v, u)


def test_hop_count_of_a_vertex_ignores_other_weights():
    for instance in corrupted_suite(60, n=8, edges=6, levels=(0.5, 1.0)):
        expected = hop_per_vertex(instance)
        for v in range(instance.n):
            # every other vertex now has a correct prediction
            weights = [instance.true_weight(v) if u == v else instance.predictions[u] for u in range(instance.n)]
            assert hop_per_vertex(instance.with_weights(weights))[v] == expected[v]
