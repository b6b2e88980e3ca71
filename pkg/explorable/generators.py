from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from .adversaries import (
    AdversaryScript,
    ErrorMeasureAdversary,
    MandatoryDistanceAdversary,
    TradeoffAdversary,
    WrongCountAdversary,
)
from .config import Config, logger
from .exceptions import InvalidInstanceError, UnknownFamilyError
from .models import Hypergraph, Instance, Kind, build_instance, make_records

RANDOM_FAMILIES = ('hypergraph', 'graph', 'sorting')
CORRUPTIONS = ('none', 'flip', 'adversarial')


@dataclass(frozen=True)
class GeneratorConfig:
    """
    Parameters of a random instance. The same config always yields the same instance.

    Intervals have integer limits; weights sit on the grid k + j/GRID_DENOMINATOR (0 < j < GRID_DENOMINATOR),
    so no weight ever coincides with a limit.
    """

    family: str = 'hypergraph'
    n: int = 8
    edges: int = 5
    max_edge_size: int = 3
    span: Optional[int] = None
    max_length: int = 3
    corruption: str = 'none'
    level: float = 0.0
    seed: int = 0

    def __str__(self):
        return f'<GeneratorConfig::{self.family}: n={self.n}, corruption={self.corruption}@{self.level}, seed={self.seed}>'

    @property
    def kind(self) -> Kind:
        return Kind.SORTING if self.family == 'sorting' else Kind.HYPERGRAPH

    def validate(self):
        if self.family not in RANDOM_FAMILIES:
            raise UnknownFamilyError(f'unknown random family <{self.family}>; choose from {RANDOM_FAMILIES}')
        if self.corruption not in CORRUPTIONS:
            raise ValueError(f'unknown corruption model <{self.corruption}>; choose from {CORRUPTIONS}')
        if self.n < 1:
            raise ValueError('an instance needs at least one vertex')
        if not 0 <= self.level <= 1:
            raise ValueError(f'corruption level must lie in [0, 1], got {self.level}')
        if self.max_length < 1 or (self.span is not None and self.span < 1):
            raise ValueError('interval span and length must be positive')
        if self.kind is Kind.HYPERGRAPH and self.edges > 0:
            if self.n < 2:
                raise ValueError('hyperedges need at least two vertices')
            if self.max_edge_size < 2:
                raise ValueError('max_edge_size must be at least 2')

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class _WeightGrid:
    rng: np.random.Generator
    denominator: int = field(default_factory=lambda: Config.GRID_DENOMINATOR)

    def points(self, lower: int, upper: int) -> List[Fraction]:
        return [Fraction(k * self.denominator + j, self.denominator) for k in range(lower, upper) for j in range(1, self.denominator)]

    def pick(self, lower: int, upper: int, avoid: Set[Fraction] = frozenset()) -> Fraction:
        """Uniform grid point in (lower, upper) off `avoid`; falls back to any grid point when all are taken."""
        candidates = self.points(lower, upper)
        free = [x for x in candidates if x not in avoid] or candidates
        return free[int(self.rng.integers(len(free)))]


def _random_intervals(config: GeneratorConfig, rng: np.random.Generator) -> List[Tuple[int, int]]:
    span = config.span if config.span is not None else max(2, config.n)
    intervals = []
    for _ in range(config.n):
        lower = int(rng.integers(0, span))
        intervals.append((lower, lower + int(rng.integers(1, config.max_length + 1))))
    return intervals


def _random_hyperedges(config: GeneratorConfig, rng: np.random.Generator) -> List[Tuple[int, ...]]:
    if config.kind is Kind.SORTING or config.edges == 0:
        return []
    largest = 2 if config.family == 'graph' else min(config.max_edge_size, config.n)
    seen, edges = set(), []
    for _ in range(config.edges * 10):
        if len(edges) == config.edges:
            break
        size = int(rng.integers(2, largest + 1))
        members = tuple(sorted(int(v) for v in rng.choice(config.n, size=size, replace=False)))
        if members not in seen:
            seen.add(members)
            edges.append(members)
    if len(edges) < config.edges:
        logger.warning(f'{config}: only {len(edges)} distinct hyperedges could be drawn')
    return edges


def _inner_limits(intervals: Sequence[Tuple[int, int]], v: int) -> List[int]:
    lower, upper = intervals[v]
    return sorted({x for u, bounds in enumerate(intervals) if u != v for x in bounds if lower < x < upper})


def _corrupt(
    config: GeneratorConfig,
    intervals: Sequence[Tuple[int, int]],
    predictions: Sequence[Fraction],
    grid: _WeightGrid,
) -> List[Fraction]:
    weights = list(predictions)
    if config.corruption == 'none' or config.level == 0:
        return weights

    count = int(round(config.level * config.n))
    chosen = sorted(int(v) for v in grid.rng.choice(config.n, size=count, replace=False))
    used = set(weights)
    for v in chosen:
        lower, upper = intervals[v]
        predicted = predictions[v]
        if config.corruption == 'adversarial':
            low, high = Fraction(lower) + Fraction(1, grid.denominator), Fraction(upper) - Fraction(1, grid.denominator)
            moved = low if predicted - low >= high - predicted else high
        else:
            limits = _inner_limits(intervals, v)
            if limits:
                crossing = limits[int(grid.rng.integers(len(limits)))]
                side = (crossing, upper) if predicted < crossing else (lower, crossing)
                moved = grid.pick(*side, avoid=used)
            else:
                moved = grid.pick(lower, upper, avoid=used | {predicted})
        weights[v] = moved
        used.add(moved)
    logger.debug(f'{config}: corrupted vertices {chosen}')
    return weights


def gen_random(config: GeneratorConfig) -> Instance:
    """
    Draws a random instance.

    Args:
        config: Family, sizes, corruption model and seed

    Returns:
        Instance with predicted weights drawn first and true weights derived by the corruption model
    """
    config.validate()
    rng = np.random.default_rng(config.seed)
    grid = _WeightGrid(rng)

    intervals = _random_intervals(config, rng)
    predictions, used = [], set()
    for lower, upper in intervals:
        predicted = grid.pick(lower, upper, avoid=used)
        predictions.append(predicted)
        used.add(predicted)
    edges = _random_hyperedges(config, rng)
    weights = _corrupt(config, intervals, predictions, grid)

    records = make_records(intervals, weights, predictions)
    hypergraph = Hypergraph.of(config.n, edges) if config.kind is Kind.HYPERGRAPH else None
    return build_instance(hypergraph, records, config.kind)


def random_suite(count: int, seed: int = 0, **params) -> List[Instance]:
    """`count` instances with seeds seed, seed+1, ..."""
    return [gen_random(GeneratorConfig(seed=seed + offset, **params)) for offset in range(count)]


# ---------------------------------------------------------------------------
# Fixed and lower-bound families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NamedFixture:
    """A static instance, or a skeleton whose weights an adaptive adversary decides during the run."""

    name: str
    instance: Instance
    adversary: Optional[AdversaryScript] = None

    @property
    def is_adaptive(self) -> bool:
        return self.adversary is not None


def _one_edge(intervals, weights, predictions) -> Instance:
    records = make_records(intervals, weights, predictions)
    return build_instance(Hypergraph.of(len(records), [range(len(records))]), records)


def _fig3l() -> Instance:
    return _one_edge(
        [(0, 4), ('1.5', 6), ('2.5', 6), ('3.1', 6)],
        ['2.75', 2, '5.5', '3.75'],
        [1, '4.5', '4.5', '3.25'],
    )


def _fig3r() -> Instance:
    return _one_edge(
        [(0, 4), ('1.5', 6), ('2.5', 6), (3, 6)],
        [1, '5.5', '5.5', '5.5'],
        [1, '3.25', '3.25', '3.25'],
    )


def _fig4() -> Instance:
    records = make_records(
        [(0, 3), (2, 5), (4, 7), (6, 9), (8, 11)],
        [1, '3.5', '4.5', '7.5', '8.5'],
        ['0.5', '2.5', '5.5', '7.5', '9.5'],
    )
    return build_instance(None, records, Kind.SORTING)


def _error_pairs(copies: int) -> Instance:
    intervals, weights, predictions = [], [], []
    for j in range(copies):
        base = 4 * j
        intervals += [(base, base + 2), (base + 1, base + 3)]
        weights += [base + Fraction(3, 2), base + Fraction(5, 2)]
        predictions += [base + Fraction(3, 2)] * 2
    return build_instance(None, make_records(intervals, weights, predictions), Kind.SORTING)


def _fig2() -> Instance:
    return _error_pairs(1)


def _lb1(beta: int = 2) -> NamedFixture:
    if beta < 1:
        raise ValueError(f'lb1 needs β ≥ 1, got {beta}')
    intervals = [(0, 2)] + [(1, 3)] * beta
    predictions = ['1.5'] + ['2.5'] * beta
    weights = ['0.5'] + ['2.5'] * (beta - 1) + ['1.5']
    instance = _one_edge(intervals, weights, predictions)
    return NamedFixture('lb1', instance, TradeoffAdversary(instance, beta))


def _lb_wrong(n: int = 2) -> NamedFixture:
    if n < 1:
        raise ValueError(f'lb_wrong needs n ≥ 1, got {n}')
    intervals = [(0, 2)] * n + [(1, 3)] * n
    predictions = ['0.5'] * n + ['2.5'] * n
    right = list(range(n, 2 * n))
    edges = [[i] + right for i in range(n)]
    records = make_records(intervals, predictions, predictions)
    instance = build_instance(Hypergraph.of(2 * n, edges), records)
    return NamedFixture('lb_wrong', instance, WrongCountAdversary(instance, n))


def _lb_error(copies: int = 1) -> NamedFixture:
    if copies < 1:
        raise ValueError(f'lb_error needs at least one copy, got {copies}')
    instance = _error_pairs(copies)
    return NamedFixture('lb_error', instance, ErrorMeasureAdversary(instance))


def _lb_fig5(a: int = 4, b: int = 2) -> NamedFixture:
    if not (b > 0 and a >= 2 * b):
        raise ValueError(f'lb_fig5 needs integers a ≥ 2b > 0, got a={a}, b={b}')
    intervals = [(0, 2)] * b + [(1, 3)] * (a - b)
    predictions = ['1.5'] * b + ['2.5'] * (a - b)
    weights = ['0.5'] * b + ['2.5'] * (a - b - 1) + ['1.5']
    right = list(range(b, a))
    edges = [[i] + right for i in range(b)]
    instance = build_instance(Hypergraph.of(a, edges), make_records(intervals, weights, predictions))
    return NamedFixture('lb_fig5', instance, MandatoryDistanceAdversary(instance, a, b))


STATIC_FIXTURES: Dict[str, Callable[[], Instance]] = {
    'fig2': _fig2,
    'fig3l': _fig3l,
    'fig3r': _fig3r,
    'fig4': _fig4,
}

ADAPTIVE_FIXTURES: Dict[str, Callable[..., NamedFixture]] = {
    'lb1': _lb1,
    'lb_wrong': _lb_wrong,
    'lb_error': _lb_error,
    'lb_fig5': _lb_fig5,
}

FIXTURE_NAMES = tuple(STATIC_FIXTURES) + tuple(ADAPTIVE_FIXTURES)


def gen_named_fixture(name: str, **params) -> NamedFixture:
    """
    Builds a named fixture.

    Args:
        name: fig2, fig3l, fig3r, fig4 (static) or lb1 (beta), lb_wrong (n), lb_error (copies), lb_fig5 (a, b)
        params: Size parameters of the lower-bound families

    Returns:
        NamedFixture; lower-bound families carry a fresh adversary
    """
    if name in STATIC_FIXTURES:
        if params:
            raise ValueError(f'fixture <{name}> takes no parameters')
        return NamedFixture(name, STATIC_FIXTURES[name]())
    if name in ADAPTIVE_FIXTURES:
        try:
            return ADAPTIVE_FIXTURES[name](**params)
        except TypeError as exc:
            raise ValueError(f'bad parameters for <{name}>: {exc}') from exc
    raise UnknownFamilyError(f'unknown fixture <{name}>; choose from {FIXTURE_NAMES}')


# ---------------------------------------------------------------------------
# Vertex-cover reduction
# ---------------------------------------------------------------------------


def subdivision_graph(edges: Iterable[Tuple[int, int]], vertex_count: Optional[int] = None) -> nx.Graph:
    """The 2-subdivision: edge i = (u, v), u < v, becomes the path u - (n+2i) - (n+2i+1) - v."""
    edges = _simple_edges(edges)
    n = _vertex_count(edges, vertex_count)
    graph = nx.Graph()
    graph.add_nodes_from(range(n + 2 * len(edges)))
    for i, (u, v) in enumerate(edges):
        first, second = n + 2 * i, n + 2 * i + 1
        graph.add_edges_from([(u, first), (first, second), (second, v)])
    return graph


def _simple_edges(edges: Iterable[Tuple[int, int]]) -> List[Tuple[int, int]]:
    seen, result = set(), []
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise InvalidInstanceError(f'self-loop at vertex {u}; the reduction needs a simple graph')
        if u < 0 or v < 0:
            raise InvalidInstanceError('vertex ids must be non-negative')
        pair = (min(u, v), max(u, v))
        if pair in seen:
            raise InvalidInstanceError(f'duplicate edge {pair}; the reduction needs a simple graph')
        seen.add(pair)
        result.append(pair)
    return result


def _vertex_count(edges: Sequence[Tuple[int, int]], vertex_count: Optional[int]) -> int:
    needed = max((v for _, v in edges), default=-1) + 1
    if vertex_count is None:
        return needed
    if vertex_count < needed:
        raise InvalidInstanceError(f'edge list references vertex {needed - 1} but vertex_count is {vertex_count}')
    return vertex_count


def gen_subdivision_reduction(edges: Iterable[Tuple[int, int]], vertex_count: Optional[int] = None) -> Instance:
    """
    Orientation instance whose minimum feasible query set is a minimum vertex cover of the
    2-subdivision of the given graph.

    Original vertex k gets (6k, 6k+3) with weight 6k+2. The two subdivision vertices of an edge
    (u, v), u < v, get (6u+2, 6v) with weight 6u+3 and (6u+3, 6v+1) with weight 6v. Along every
    path edge the two intervals overlap while neither weight lies in the other interval, so each
    path edge needs one of its ends queried. Predictions equal the weights.
    """
    edges = _simple_edges(edges)
    n = _vertex_count(edges, vertex_count)

    intervals: List[Tuple[int, int]] = [(6 * k, 6 * k + 3) for k in range(n)]
    weights: List[int] = [6 * k + 2 for k in range(n)]
    hyperedges = []
    for i, (u, v) in enumerate(edges):
        intervals += [(6 * u + 2, 6 * v), (6 * u + 3, 6 * v + 1)]
        weights += [6 * u + 3, 6 * v]
        first, second = n + 2 * i, n + 2 * i + 1
        hyperedges += [(u, first), (first, second), (second, v)]

    records = make_records(intervals, weights, weights)
    instance = build_instance(Hypergraph.of(len(records), hyperedges), records)
    logger.info(f'reduction of {n} vertices / {len(edges)} edges -> {instance}')
    return instance


def read_edge_list(lines: Iterable[str]) -> List[Tuple[int, int]]:
    """Parses 'u v' lines; blank lines and '#' comments are skipped."""
    edges = []
    for number, line in enumerate(lines, start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidInstanceError(f'line {number}: expected "u v", got <{line}>')
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise InvalidInstanceError(f'line {number}: vertex ids must be integers') from exc
    return edges
