from fractions import Fraction

import pytest

from explorable import (
    Hypergraph,
    Instance,
    InvalidInstanceError,
    Kind,
    UncertaintyInterval,
    VertexRecord,
    build_instance,
    format_rational,
    make_records,
    to_rational,
)


# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------


def test_to_rational_is_exact():
    assert to_rational('3.1') == Fraction(31, 10)
    assert to_rational(0.1) == Fraction(1, 10)
    assert to_rational('7/3') == Fraction(7, 3)
    assert to_rational(Fraction(2, 4)) == Fraction(1, 2)


def test_to_rational_rejects_garbage():
    with pytest.raises(InvalidInstanceError):
        to_rational('abc')


@pytest.mark.parametrize(
    'value, text',
    [(Fraction(11, 4), '2.75'), (Fraction(5), '5'), (Fraction(1, 3), '1/3'), (Fraction(-1, 8), '-0.125')],
)
def test_format_rational(value, text):
    assert format_rational(value) == text


# ---------------------------------------------------------------------------
# Intervals and records
# ---------------------------------------------------------------------------


def test_open_interval_requires_lower_below_upper():
    with pytest.raises(InvalidInstanceError):
        UncertaintyInterval.open(2, 2)
    with pytest.raises(InvalidInstanceError):
        UncertaintyInterval.open(3, 1)


def test_interval_membership_is_strict():
    interval = UncertaintyInterval.open(0, 4)
    assert interval.contains(Fraction(1))
    assert not interval.contains(Fraction(0))
    assert not interval.contains(Fraction(4))


def test_intersection_rules():
    a, b, c = UncertaintyInterval.open(0, 2), UncertaintyInterval.open(1, 3), UncertaintyInterval.open(2, 5)
    assert a.intersects(b) and b.intersects(a)
    assert not a.intersects(c)
    assert UncertaintyInterval.trivial(1).intersects(a)
    assert not UncertaintyInterval.trivial(2).intersects(a)
    assert not UncertaintyInterval.trivial(1).intersects(UncertaintyInterval.trivial(1))


def test_weight_outside_interval_rejected():
    record = VertexRecord(0, UncertaintyInterval.open(0, 2), Fraction(5), Fraction(1))
    with pytest.raises(InvalidInstanceError):
        record.validate()


def test_prediction_on_the_limit_rejected():
    record = VertexRecord(0, UncertaintyInterval.open(0, 2), Fraction(1), Fraction(2))
    with pytest.raises(InvalidInstanceError):
        record.validate()


def test_trivial_record_needs_matching_weight():
    trivial = UncertaintyInterval.trivial(3)
    VertexRecord(0, trivial, Fraction(3), Fraction(3)).validate()
    with pytest.raises(InvalidInstanceError):
        VertexRecord(0, trivial, Fraction(4), Fraction(3)).validate()


# ---------------------------------------------------------------------------
# Hypergraphs and instances
# ---------------------------------------------------------------------------


def test_hyperedge_needs_two_distinct_vertices():
    with pytest.raises(InvalidInstanceError):
        Hypergraph.of(3, [[1, 1]])


def test_hyperedge_with_unknown_vertex_rejected():
    with pytest.raises(InvalidInstanceError):
        Hypergraph.of(2, [[0, 2]])


def test_incidence_lists():
    hypergraph = Hypergraph.of(4, [[0, 1, 2], [2, 3]])
    assert hypergraph.incident[2] == (0, 1)
    assert hypergraph.shares_edge(0, 2)
    assert not hypergraph.shares_edge(0, 3)


def test_fig3l_is_valid(fig3l):
    assert fig3l.n == 4
    assert fig3l.hypergraph.hyperedges == ((0, 1, 2, 3),)
    assert fig3l.intervals[3] == UncertaintyInterval.open('3.1', 6)


def test_fig4_derives_consecutive_edges(fig4):
    assert fig4.kind is Kind.SORTING
    assert fig4.hypergraph.hyperedges == ((0, 1), (1, 2), (2, 3), (3, 4))


def test_sorting_kind_rejects_explicit_edges():
    records = make_records([(0, 2), (1, 3)], ['1.5', '2.5'], ['1.5', '1.5'])
    with pytest.raises(InvalidInstanceError):
        build_instance(Hypergraph.of(2, [[0, 1]]), records, Kind.SORTING)


def test_ids_must_be_dense():
    record = VertexRecord(1, UncertaintyInterval.open(0, 2), Fraction(1), Fraction(1))
    with pytest.raises(InvalidInstanceError):
        build_instance(None, [record])


def test_with_weights_keeps_intervals_and_predictions(fig3l):
    changed = fig3l.with_weights([1, 2, 3, 4])
    assert changed.intervals == fig3l.intervals
    assert changed.predictions == fig3l.predictions
    assert changed.true_weight(3) == 4


# ---------------------------------------------------------------------------
# Instance files
# ---------------------------------------------------------------------------


def test_instance_file_round_trip(tmp_path, fig3l, fig4):
    for instance in (fig3l, fig4):
        path = tmp_path / 'instance.json'
        instance.save(path)
        loaded = Instance.from_file(path)
        assert loaded == instance
        assert loaded.true_weights() == instance.true_weights()


def test_instance_file_uses_decimal_strings(fig3l):
    data = fig3l.to_dict()
    assert data['kind'] == 'hypergraph-orientation'
    assert data['vertices'][0] == {'id': 0, 'L': '0', 'U': '4', 'w': '2.75', 'what': '1'}


def test_trivial_vertex_in_file():
    data = {
        'kind': 'hypergraph-orientation',
        'vertex_count': 2,
        'vertices': [
            {'id': 0, 'value': '1', 'w': '1', 'what': '1'},
            {'id': 1, 'L': '0', 'U': '2', 'w': '1.5', 'what': '0.5'},
        ],
        'hyperedges': [[0, 1]],
    }
    instance = Instance.from_dict(data)
    assert instance.intervals[0].is_trivial


@pytest.mark.parametrize(
    'text',
    [
        'not json',
        '{"kind": "sorting"}',
        '{"kind": "bogus", "vertex_count": 0, "vertices": []}',
        '{"kind": "sorting", "vertex_count": 1, "vertices": [{"id": 0, "L": "0", "U": "1", "w": "3", "what": "0.5"}]}',
    ],
)
def test_bad_instance_text_rejected(text):
    with pytest.raises(InvalidInstanceError):
        Instance.loads(text)
