import json
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import logger
from .exceptions import InvalidInstanceError
from .models import (
    Hypergraph,
    Instance,
    Kind,
    UncertaintyInterval,
    format_rational,
    interval_from_entry,
    sorting_edges,
    to_rational,
)
from .structure import mandatory_set

SAMPLING_MODELS = ('uniform', 'point', 'two-point')
GRID_STEPS = 20


@dataclass(frozen=True)
class WeightSampleSet:
    """m realizations over a fixed skeleton (hyperedges and intervals)."""

    hypergraph: Hypergraph
    intervals: Tuple[UncertaintyInterval, ...]
    samples: Tuple[Tuple[Fraction, ...], ...]
    kind: Kind = Kind.HYPERGRAPH

    def __post_init__(self):
        for index, sample in enumerate(self.samples):
            if len(sample) != len(self.intervals):
                raise InvalidInstanceError(f'sample {index} has {len(sample)} weights for {len(self.intervals)} vertices')
            for v, (interval, weight) in enumerate(zip(self.intervals, sample)):
                if not interval.contains(weight):
                    raise InvalidInstanceError(f'sample {index}: weight {weight} of vertex {v} outside {interval}')

    def __len__(self):
        return len(self.samples)

    def __repr__(self):
        return f'WeightSampleSet(n={len(self.intervals)}, m={len(self.samples)})'

    @classmethod
    def of(cls, skeleton: Instance, samples: Iterable[Sequence]) -> 'WeightSampleSet':
        rows = tuple(tuple(to_rational(w) for w in sample) for sample in samples)
        return cls(skeleton.hypergraph, skeleton.intervals, rows, skeleton.kind)

    def to_dict(self) -> Dict:
        vertices = []
        for v, interval in enumerate(self.intervals):
            if interval.is_trivial:
                vertices.append({'id': v, 'value': format_rational(interval.value)})
            else:
                vertices.append({'id': v, 'L': format_rational(interval.lower), 'U': format_rational(interval.upper)})
        data: Dict = {'kind': self.kind.value, 'vertex_count': len(self.intervals), 'vertices': vertices}
        if self.kind is Kind.HYPERGRAPH:
            data['hyperedges'] = [list(members) for members in self.hypergraph.hyperedges]
        data['samples'] = [[format_rational(w) for w in sample] for sample in self.samples]
        return data

    def save(self, path: Union[str, Path]):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + '\n')

    @classmethod
    def from_dict(cls, data: Dict) -> 'WeightSampleSet':
        try:
            kind = Kind(data['kind'])
            entries = sorted(data['vertices'], key=lambda entry: int(entry['id']))
            intervals = tuple(interval_from_entry(entry) for entry in entries)
            if kind is Kind.SORTING:
                hypergraph = Hypergraph.of(len(intervals), sorting_edges(intervals))
            else:
                hypergraph = Hypergraph.of(len(intervals), data.get('hyperedges', []))
            samples = tuple(tuple(to_rational(w) for w in sample) for sample in data['samples'])
        except (KeyError, TypeError) as exc:
            raise InvalidInstanceError(f'malformed sample file: {exc}') from exc
        return cls(hypergraph, intervals, samples, kind)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'WeightSampleSet':
        sample_set = cls.from_dict(json.loads(Path(path).read_text()))
        logger.debug(f'{sample_set!r} loaded from {path}')
        return sample_set


def _grid_point(interval: UncertaintyInterval, step: int) -> Fraction:
    return interval.lower + (interval.upper - interval.lower) * Fraction(step, GRID_STEPS)


def sample_weights(
    instance: Instance, m: int, model: str = 'uniform', rng: Optional[np.random.Generator] = None
) -> WeightSampleSet:
    """
    Draws m independent realizations.

    Args:
        instance: Skeleton; its predictions are used by the point model
        m: Number of samples
        model: uniform (grid inside each interval), point (mass at ŵ_v) or two-point (grid extremes)
        rng: Seeded generator

    Returns:
        WeightSampleSet over the instance skeleton
    """
    if model not in SAMPLING_MODELS:
        raise ValueError(f'unknown sampling model <{model}>; choose from {SAMPLING_MODELS}')
    rng = rng if rng is not None else np.random.default_rng()

    samples = []
    for _ in range(m):
        sample = []
        for v, interval in enumerate(instance.intervals):
            if interval.is_trivial:
                sample.append(interval.value)
            elif model == 'point':
                sample.append(instance.predictions[v])
            elif model == 'two-point':
                sample.append(_grid_point(interval, 1 if rng.random() < 0.5 else GRID_STEPS - 1))
            else:
                sample.append(_grid_point(interval, int(rng.integers(1, GRID_STEPS))))
        samples.append(sample)
    return WeightSampleSet.of(instance, samples)


def mandatory_counts(sample_set: WeightSampleSet) -> List[int]:
    """p_v: number of samples in which v is mandatory."""
    counts = [0] * len(sample_set.intervals)
    for sample in sample_set.samples:
        for v in mandatory_set(sample_set, sample):
            counts[v] += 1
    return counts


def erm_mandatory_set(sample_set: WeightSampleSet) -> FrozenSet[int]:
    """Vertices mandatory in at least half of the samples (q_v <= p_v)."""
    m = len(sample_set)
    if m == 0:
        raise ValueError('empirical risk minimization needs at least one sample')
    counts = mandatory_counts(sample_set)
    chosen = frozenset(v for v, p in enumerate(counts) if m - p <= p)
    logger.info(f'ERM over {m} samples selected {sorted(chosen)}')
    return chosen


def empirical_km(predicted: Iterable[int], sample_set: WeightSampleSet) -> Fraction:
    """Mean mandatory query distance |I_R(sample) △ P| over the samples."""
    predicted = frozenset(predicted)
    if not len(sample_set):
        raise ValueError('empirical error of an empty sample set')
    total = sum(len(mandatory_set(sample_set, sample) ^ predicted) for sample in sample_set.samples)
    return Fraction(total, len(sample_set))


@dataclass(frozen=True)
class CandidateSet:
    """Per vertex: limits of other intervals inside I_v and one midpoint per gap between them."""

    limits: Tuple[Tuple[Fraction, ...], ...]
    representatives: Tuple[Tuple[Fraction, ...], ...]

    def candidates(self, v: int) -> Tuple[Fraction, ...]:
        return tuple(sorted(self.limits[v] + self.representatives[v]))

    def snap(self, v: int, predicted: Fraction) -> Fraction:
        """The candidate standing for `predicted`: itself if it is a limit, else its gap's midpoint."""
        limits = self.limits[v]
        position = bisect_left(limits, predicted)
        if position < len(limits) and limits[position] == predicted:
            return predicted
        return self.representatives[v][position]

    def __len__(self):
        return len(self.limits)


def discretize_candidates(instance: Instance) -> CandidateSet:
    intervals = instance.intervals
    all_limits, all_midpoints = [], []
    for v, interval in enumerate(intervals):
        if interval.is_trivial:
            all_limits.append(())
            all_midpoints.append((interval.value,))
            continue
        inside = sorted(
            {
                x
                for u, other in enumerate(intervals)
                if u != v
                for x in (other.lower, other.upper)
                if interval.lower < x < interval.upper
            }
        )
        bounds = [interval.lower, *inside, interval.upper]
        all_limits.append(tuple(inside))
        all_midpoints.append(tuple((a + b) / 2 for a, b in zip(bounds, bounds[1:])))
    return CandidateSet(tuple(all_limits), tuple(all_midpoints))


def snap_predictions(instance: Instance, candidates: Optional[CandidateSet] = None) -> Instance:
    """Replaces every prediction by its representative candidate."""
    candidates = candidates or discretize_candidates(instance)
    snapped = [candidates.snap(v, instance.predictions[v]) for v in range(instance.n)]
    return instance.with_predictions(snapped)
