from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Protocol, Sequence, Tuple

from .config import Config, logger
from .exceptions import DuplicateQueryError, InvalidInstanceError, SizeLimitError
from .models import Hypergraph, Instance, UncertaintyInterval


class WeightSource(Protocol):
    """Commits the precise weight of a vertex at the moment it is queried."""

    def reveal(self, v: int, session: 'QuerySession') -> Fraction: ...

    def realize(self, instance: Instance, session: 'QuerySession') -> Instance:
        """The instance carrying the weights this source committed to (after the run)."""
        ...


class InstanceSource:
    """Static realization: every weight was fixed when the instance was built."""

    def __init__(self, instance: Instance):
        self._instance = instance

    def reveal(self, v: int, session: 'QuerySession') -> Fraction:  # noqa: ARG002
        return self._instance.true_weight(v)

    def realize(self, instance: Instance, session: 'QuerySession') -> Instance:  # noqa: ARG002
        return instance


class RealizationSource:
    """Static realization given as an explicit weight vector."""

    def __init__(self, weights: Sequence[Fraction]):
        self._weights = tuple(weights)

    def reveal(self, v: int, session: 'QuerySession') -> Fraction:  # noqa: ARG002
        return self._weights[v]

    def realize(self, instance: Instance, session: 'QuerySession') -> Instance:  # noqa: ARG002
        return instance.with_weights(self._weights)


class QuerySession:
    """
    Adaptive information state of one algorithm run.

    The session is the only place where precise weights enter an algorithm: `query(v)` asks the
    weight source, collapses I_v to [w_v] and appends v to the trace.
    """

    def __init__(self, instance: Instance, source: Optional[WeightSource] = None):
        self.instance = instance
        self._source = source if source is not None else InstanceSource(instance)
        self._current: List[UncertaintyInterval] = list(instance.intervals)
        self._trace: List[int] = []
        self._queried: set = set()

    def __repr__(self):
        return f'QuerySession(instance={self.instance!r}, queried={len(self._trace)})'

    @property
    def hypergraph(self) -> Hypergraph:
        return self.instance.hypergraph

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def trace(self) -> Tuple[int, ...]:
        return tuple(self._trace)

    @property
    def queried(self) -> FrozenSet[int]:
        return frozenset(self._queried)

    @property
    def cost(self) -> int:
        return len(self._trace)

    def interval(self, v: int) -> UncertaintyInterval:
        return self._current[v]

    @property
    def intervals(self) -> Tuple[UncertaintyInterval, ...]:
        return tuple(self._current)

    def predicted(self, v: int) -> Fraction:
        return self.instance.predictions[v]

    def is_queried(self, v: int) -> bool:
        return v in self._queried

    def is_trivial(self, v: int) -> bool:
        return self._current[v].is_trivial

    def unqueried(self) -> List[int]:
        return [v for v in range(self.n) if v not in self._queried]

    def query(self, v: int) -> Fraction:
        if v in self._queried:
            raise DuplicateQueryError(f'vertex {v} has already been queried')

        interval = self._current[v]
        weight = self._source.reveal(v, self)
        if interval.is_trivial:
            if weight != interval.value:
                raise InvalidInstanceError(f'vertex {v}: revealed {weight} differs from {interval}')
        elif not interval.contains(weight):
            raise InvalidInstanceError(f'vertex {v}: revealed {weight} outside {interval}')

        self._current[v] = UncertaintyInterval.trivial(weight)
        self._queried.add(v)
        self._trace.append(v)
        logger.debug(f'query v{v} -> {weight}')
        return weight

    def query_all(self, vertices: Iterable[int]) -> List[int]:
        """Queries the given vertices in order, skipping those already queried."""
        done = []
        for v in vertices:
            if v not in self._queried:
                self.query(v)
                done.append(v)
        return done

    def weights_with_predictions(self) -> List[Fraction]:
        """Revealed weights for queried vertices, predicted weights elsewhere."""
        return [
            self._current[v].value if v in self._queried else self.instance.predictions[v] for v in range(self.n)
        ]


@dataclass(frozen=True)
class Orientation:
    """Chosen minimum-weight vertex per hyperedge, indexed like the hyperedge list."""

    minima: Tuple[int, ...]

    def __getitem__(self, index: int) -> int:
        return self.minima[index]

    def __len__(self):
        return len(self.minima)


def interval_precedes(intervals: Sequence[UncertaintyInterval], v: int, u: int) -> bool:
    a, b = intervals[v], intervals[u]
    if a.is_trivial and b.is_trivial and a.value == b.value:
        return v < u
    return a.upper <= b.lower


def provably_precedes(session: QuerySession, v: int, u: int) -> bool:
    """True iff w_v <= w_u in every realization consistent with the current intervals."""
    return interval_precedes(session.intervals, v, u)


def edge_minimum(intervals: Sequence[UncertaintyInterval], members: Sequence[int]) -> Optional[int]:
    for v in members:
        if all(interval_precedes(intervals, v, u) for u in members if u != v):
            return v
    return None


def hyperedge_solved(session: QuerySession, index: int) -> bool:
    return edge_minimum(session.intervals, session.hypergraph.hyperedges[index]) is not None


def is_solved(session: QuerySession) -> Optional[Orientation]:
    """Returns the orientation once every hyperedge has a provable minimum, otherwise None."""
    intervals = session.intervals
    minima = []
    for members in session.hypergraph.hyperedges:
        chosen = edge_minimum(intervals, members)
        if chosen is None:
            return None
        minima.append(chosen)
    return Orientation(tuple(minima))


def replay(instance: Instance, trace: Iterable[int], source: Optional[WeightSource] = None) -> QuerySession:
    session = QuerySession(instance, source)
    for v in trace:
        session.query(v)
    return session


def feasible_oracle(instance: Instance, queries: Iterable[int], weights: Optional[Sequence[Fraction]] = None) -> bool:
    """Simulates querying exactly `queries` under the given (default: true) weights."""
    source = RealizationSource(weights) if weights is not None else None
    session = replay(instance, sorted(set(queries)), source)
    return is_solved(session) is not None


def _check_brute_force_size(instance: Instance):
    if instance.n > Config.BRUTE_FORCE_LIMIT:
        raise SizeLimitError(
            f'{instance.n} vertices exceed the brute-force limit of {Config.BRUTE_FORCE_LIMIT}'
        )


def min_feasible_set(instance: Instance, weights: Optional[Sequence[Fraction]] = None) -> FrozenSet[int]:
    """Smallest feasible query set by subset enumeration in increasing size (lexicographic within a size)."""
    _check_brute_force_size(instance)
    for size in range(instance.n + 1):
        for subset in combinations(range(instance.n), size):
            if feasible_oracle(instance, subset, weights):
                return frozenset(subset)
    raise AssertionError('querying every vertex always solves an instance')


def min_feasible_size(instance: Instance, weights: Optional[Sequence[Fraction]] = None) -> int:
    return len(min_feasible_set(instance, weights))


def is_mandatory_by_simulation(instance: Instance, v: int, weights: Optional[Sequence[Fraction]] = None) -> bool:
    """v is mandatory iff querying every other vertex leaves the instance unsolved."""
    return not feasible_oracle(instance, [u for u in range(instance.n) if u != v], weights)
