import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .config import logger
from .exceptions import InvalidInstanceError

Rational = Fraction
Number = Union[Fraction, int, str, float]


def to_rational(value: Number) -> Fraction:
    """Converts decimal strings, 'p/q' strings, ints and floats into an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInstanceError(f'<{value}> is not a rational number') from exc


def format_rational(value: Number) -> str:
    """Renders a rational as a terminating decimal string when possible, else as 'p/q'."""
    q = to_rational(value)
    rest, places2, places5 = q.denominator, 0, 0
    while rest % 2 == 0:
        rest //= 2
        places2 += 1
    while rest % 5 == 0:
        rest //= 5
        places5 += 1
    if rest != 1:
        return f'{q.numerator}/{q.denominator}'

    places = max(places2, places5)
    if places == 0:
        return str(q.numerator)
    scaled = int(q * 10**places)
    digits = str(abs(scaled)).rjust(places + 1, '0')
    sign = '-' if scaled < 0 else ''
    return f'{sign}{digits[:-places]}.{digits[-places:]}'


class Kind(str, Enum):
    HYPERGRAPH = 'hypergraph-orientation'
    SORTING = 'sorting'


@dataclass(frozen=True)
class UncertaintyInterval:
    """Open interval (lower, upper), or a trivial point when lower == upper."""

    lower: Fraction
    upper: Fraction

    @classmethod
    def open(cls, lower: Number, upper: Number) -> 'UncertaintyInterval':
        lower, upper = to_rational(lower), to_rational(upper)
        if lower >= upper:
            raise InvalidInstanceError(f'degenerate open interval ({lower}, {upper})')
        return cls(lower, upper)

    @classmethod
    def trivial(cls, value: Number) -> 'UncertaintyInterval':
        value = to_rational(value)
        return cls(value, value)

    @property
    def is_trivial(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Fraction:
        if not self.is_trivial:
            raise ValueError(f'{self} is not trivial')
        return self.lower

    def contains(self, x: Fraction) -> bool:
        """Strict membership; a trivial interval contains only its own value."""
        if self.is_trivial:
            return x == self.lower
        return self.lower < x < self.upper

    def intersects(self, other: 'UncertaintyInterval') -> bool:
        if self.is_trivial and other.is_trivial:
            return False
        if self.is_trivial:
            return other.contains(self.lower)
        if other.is_trivial:
            return self.contains(other.lower)
        return self.lower < other.upper and other.lower < self.upper

    def within(self, other: 'UncertaintyInterval') -> bool:
        """True when this interval is nested inside `other` (limits may coincide)."""
        return other.lower <= self.lower and self.upper <= other.upper

    def __repr__(self):
        if self.is_trivial:
            return f'[{self.lower}]'
        return f'({self.lower}, {self.upper})'


@dataclass(frozen=True)
class VertexRecord:
    id: int
    interval: UncertaintyInterval
    true_weight: Fraction = field(repr=False)
    predicted_weight: Fraction

    def validate(self):
        interval = self.interval
        if interval.is_trivial:
            if self.true_weight != interval.value:
                raise InvalidInstanceError(f'vertex {self.id}: weight {self.true_weight} differs from {interval}')
            if self.predicted_weight != interval.value:
                raise InvalidInstanceError(f'vertex {self.id}: prediction {self.predicted_weight} outside {interval}')
            return
        if not interval.contains(self.true_weight):
            raise InvalidInstanceError(f'vertex {self.id}: weight {self.true_weight} outside {interval}')
        if not interval.contains(self.predicted_weight):
            raise InvalidInstanceError(f'vertex {self.id}: prediction {self.predicted_weight} outside {interval}')


@dataclass(frozen=True)
class Hypergraph:
    vertex_count: int
    hyperedges: Tuple[Tuple[int, ...], ...]

    @classmethod
    def of(cls, vertex_count: int, hyperedges: Iterable[Iterable[int]]) -> 'Hypergraph':
        edges = []
        for index, members in enumerate(hyperedges):
            members = tuple(sorted(set(int(v) for v in members)))
            if len(members) < 2:
                raise InvalidInstanceError(f'hyperedge {index} has fewer than 2 distinct vertices')
            if members[0] < 0 or members[-1] >= vertex_count:
                raise InvalidInstanceError(f'hyperedge {index} references an unknown vertex')
            edges.append(members)
        return cls(vertex_count, tuple(edges))

    @cached_property
    def incident(self) -> Tuple[Tuple[int, ...], ...]:
        """Hyperedge indices per vertex, ascending."""
        table: List[List[int]] = [[] for _ in range(self.vertex_count)]
        for index, members in enumerate(self.hyperedges):
            for v in members:
                table[v].append(index)
        return tuple(tuple(row) for row in table)

    def shares_edge(self, v: int, u: int) -> bool:
        return any(u in self.hyperedges[i] for i in self.incident[v])

    def __len__(self):
        return len(self.hyperedges)


def sorting_edges(intervals: Sequence[UncertaintyInterval]) -> List[Tuple[int, int]]:
    """Pairs of vertices whose intervals intersect, in lexicographic order."""
    return [(v, u) for v, u in combinations(range(len(intervals)), 2) if intervals[v].intersects(intervals[u])]


@dataclass(frozen=True)
class Instance:
    """
    Immutable problem instance. Precise weights are kept private: algorithms reach them only
    through a QuerySession, while the offline optimum, metrics and oracles use `true_weight`.
    """

    hypergraph: Hypergraph
    intervals: Tuple[UncertaintyInterval, ...]
    predictions: Tuple[Fraction, ...]
    kind: Kind
    _weights: Tuple[Fraction, ...] = field(repr=False)

    def __repr__(self):
        return f'Instance(kind={self.kind.value}, n={self.n}, hyperedges={len(self.hypergraph)})'

    def __str__(self):
        return f'<Instance::{self.kind.value}: {self.n} vertices, {len(self.hypergraph)} hyperedges>'

    @property
    def n(self) -> int:
        return self.hypergraph.vertex_count

    def true_weight(self, v: int) -> Fraction:
        return self._weights[v]

    def true_weights(self) -> Tuple[Fraction, ...]:
        return tuple(self.true_weight(v) for v in range(self.n))

    def records(self) -> List[VertexRecord]:
        return [
            VertexRecord(v, self.intervals[v], self.true_weight(v), self.predictions[v])
            for v in range(self.n)
        ]

    def with_predictions(self, predictions: Sequence[Number]) -> 'Instance':
        records = [
            VertexRecord(r.id, r.interval, r.true_weight, to_rational(p)) for r, p in zip(self.records(), predictions)
        ]
        return build_instance(self._edges_for_rebuild(), records, self.kind)

    def with_weights(self, weights: Sequence[Number]) -> 'Instance':
        records = [
            VertexRecord(r.id, r.interval, to_rational(w), r.predicted_weight) for r, w in zip(self.records(), weights)
        ]
        return build_instance(self._edges_for_rebuild(), records, self.kind)

    def _edges_for_rebuild(self) -> Optional[Hypergraph]:
        return None if self.kind is Kind.SORTING else self.hypergraph

    # -----------------------------------------------------------------------
    # Instance files
    # -----------------------------------------------------------------------

    def to_dict(self) -> Dict:
        vertices = []
        for v in range(self.n):
            interval = self.intervals[v]
            entry: Dict = {'id': v}
            if interval.is_trivial:
                entry['value'] = format_rational(interval.value)
            else:
                entry['L'] = format_rational(interval.lower)
                entry['U'] = format_rational(interval.upper)
            entry['w'] = format_rational(self.true_weight(v))
            entry['what'] = format_rational(self.predictions[v])
            vertices.append(entry)

        data: Dict = {'kind': self.kind.value, 'vertex_count': self.n, 'vertices': vertices}
        if self.kind is Kind.HYPERGRAPH:
            data['hyperedges'] = [list(members) for members in self.hypergraph.hyperedges]
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def save(self, path: Union[str, Path]):
        Path(path).write_text(self.dumps() + '\n')
        logger.debug(f'{self} saved to {path}')

    @classmethod
    def from_dict(cls, data: Dict) -> 'Instance':
        try:
            kind = Kind(data['kind'])
            vertex_count = int(data['vertex_count'])
            entries = sorted(data['vertices'], key=lambda entry: int(entry['id']))
            records = [_record_from_entry(entry) for entry in entries]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInstanceError):
                raise
            raise InvalidInstanceError(f'malformed instance data: {exc}') from exc

        if [r.id for r in records] != list(range(vertex_count)):
            raise InvalidInstanceError('vertex ids must be dense 0..vertex_count-1')
        hypergraph = None
        if 'hyperedges' in data:
            hypergraph = Hypergraph.of(vertex_count, data['hyperedges'])
        elif kind is Kind.HYPERGRAPH:
            hypergraph = Hypergraph.of(vertex_count, [])
        return build_instance(hypergraph, records, kind)

    @classmethod
    def loads(cls, text: str) -> 'Instance':
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInstanceError(f'instance file is not valid JSON: {exc}') from exc
        return cls.from_dict(data)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'Instance':
        """
        Read an instance file.

        Args:
            path: Path to a JSON instance file

        Returns:
            The validated Instance
        """
        instance = cls.loads(Path(path).read_text())
        logger.debug(f'{instance} loaded from {path}')
        return instance


def interval_from_entry(entry: Dict) -> UncertaintyInterval:
    if 'value' in entry:
        return UncertaintyInterval.trivial(entry['value'])
    return UncertaintyInterval.open(entry['L'], entry['U'])


def _record_from_entry(entry: Dict) -> VertexRecord:
    return VertexRecord(
        int(entry['id']),
        interval_from_entry(entry),
        to_rational(entry['w']),
        to_rational(entry['what']),
    )


def build_instance(
    hypergraph: Optional[Hypergraph],
    records: Sequence[VertexRecord],
    kind: Union[Kind, str] = Kind.HYPERGRAPH,
) -> Instance:
    """
    Validate vertex records and assemble an Instance.

    Args:
        hypergraph: Hyperedges over the records; must be None or edgeless for the sorting kind
        records: One VertexRecord per vertex, ids dense from 0
        kind: hypergraph-orientation or sorting

    Returns:
        The validated Instance; sorting instances get their edges from interval intersections
    """
    kind = Kind(kind)
    records = sorted(records, key=lambda r: r.id)
    if [r.id for r in records] != list(range(len(records))):
        raise InvalidInstanceError('vertex ids must be dense 0..n-1')
    for record in records:
        record.validate()

    intervals = tuple(r.interval for r in records)
    if kind is Kind.SORTING:
        if hypergraph is not None and len(hypergraph) > 0:
            raise InvalidInstanceError('sorting instances derive their edges; explicit hyperedges are not allowed')
        hypergraph = Hypergraph.of(len(records), sorting_edges(intervals))
    elif hypergraph is None:
        hypergraph = Hypergraph.of(len(records), [])
    if hypergraph.vertex_count != len(records):
        raise InvalidInstanceError(
            f'hypergraph has {hypergraph.vertex_count} vertices but {len(records)} records were given'
        )

    return Instance(
        hypergraph=hypergraph,
        intervals=intervals,
        predictions=tuple(r.predicted_weight for r in records),
        kind=kind,
        _weights=tuple(r.true_weight for r in records),
    )


def make_records(
    intervals: Sequence[Tuple[Number, Number]],
    weights: Sequence[Number],
    predictions: Sequence[Number],
) -> List[VertexRecord]:
    """Shorthand for records over open intervals given as (L, U) pairs."""
    return [
        VertexRecord(v, UncertaintyInterval.open(*bounds), to_rational(w), to_rational(p))
        for v, (bounds, w, p) in enumerate(zip(intervals, weights, predictions))
    ]
