"""
Query algorithms for hypergraph orientation.

Every algorithm comes as a `query_*` core that acts on a QuerySession and returns a diagnostics
record, and as a public wrapper that runs the core on a fresh session and builds a RunResult.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np

from .config import logger
from .exceptions import PreconditionError, SizeLimitError
from .metrics import error_report
from .models import Instance
from .results import Gamma, RunResult, guarantee
from .session import QuerySession, WeightSource, is_solved
from .structure import (
    enforcement_pairs,
    is_mandatory_given_weights,
    is_witness_pair,
    known_mandatory_closure,
    leftmost,
    prediction_mandatory_set,
    unsolved_hyperedges,
    vertex_cover_instance,
)
from .vcover import CoverBackend, cover_backend

Backend = Union[str, CoverBackend, None]


@dataclass
class CoverStage:
    pre_closure: List[int]
    cover: List[int]
    final_closure: List[int]
    exact: bool


@dataclass
class HopIteration:
    mandatory_queries: List[int] = field(default_factory=list)
    branch_queries: List[int] = field(default_factory=list)
    closure_queries: List[int] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not (self.mandatory_queries or self.branch_queries or self.closure_queries)


@dataclass
class HopDiagnostics:
    initial_closure: List[int]
    iterations: List[HopIteration]
    cover_stage: CoverStage


@dataclass
class KmDiagnostics:
    initial_mandatory: frozenset
    rounds: List[List[int]]
    cover_stage: CoverStage


def _resolve_backend(backend: Backend) -> CoverBackend:
    if backend is None or isinstance(backend, str):
        return cover_backend(backend)
    return backend


def check_gamma(gamma: Gamma) -> int:
    """Deterministic algorithms take an integral γ ≥ 2."""
    value = Fraction(gamma)
    if value.denominator != 1 or value < 2:
        raise ValueError(f'γ must be an integer ≥ 2, got {gamma}')
    return int(value)


def _ensure_solved(session: QuerySession, algorithm: str):
    if is_solved(session) is None:
        raise RuntimeError(f'{algorithm} stopped on an unsolved instance after {session.cost} queries')


def finish_with_cover(session: QuerySession, backend: Backend = None) -> CoverStage:
    """Closure, a minimum vertex cover of the vertex-cover instance, then closure again."""
    solve = _resolve_backend(backend)
    pre_closure = known_mandatory_closure(session)
    result = solve(vertex_cover_instance(session))
    if not result.exact:
        logger.warning('approximate vertex cover in use; competitive guarantees do not apply')
    cover = session.query_all(sorted(result.cover))
    final_closure = known_mandatory_closure(session)
    return CoverStage(pre_closure, cover, final_closure, result.exact)


# ---------------------------------------------------------------------------
# Offline optimum
# ---------------------------------------------------------------------------


def query_offline(session: QuerySession, weights: Iterable[Fraction], backend: Backend = None) -> CoverStage:
    """Mandatory vertices under full knowledge first, then the vertex-cover stage."""
    weights = list(weights)
    while True:
        mandatory = next(
            (v for v in session.unqueried() if is_mandatory_given_weights(session, v, weights)),
            None,
        )
        if mandatory is None:
            break
        session.query(mandatory)
    return finish_with_cover(session, backend)


@lru_cache(maxsize=4096)
def optimum_size(instance: Instance) -> int:
    session = QuerySession(instance)
    query_offline(session, instance.true_weights(), 'exact')
    return session.cost


def _optimum(instance: Instance) -> Tuple[int, bool]:
    """Offline optimum and whether it is exact; above the cover size guard the approximate cover stands in."""
    try:
        return optimum_size(instance), True
    except SizeLimitError as e:
        logger.warning(f'offline optimum falls back to the approximate cover: {e}')
    session = QuerySession(instance)
    query_offline(session, instance.true_weights(), 'approx')
    return session.cost, False


def build_result(
    instance: Instance,
    algorithm: str,
    session: QuerySession,
    *,
    gamma: Optional[Gamma] = None,
    gamma_drawn: Optional[int] = None,
    seed: Optional[int] = None,
    exact: bool = True,
    details=None,
    source: Optional[WeightSource] = None,
) -> RunResult:
    """RunResult for a finished session; adaptive sources contribute their committed realization."""
    _ensure_solved(session, algorithm)
    realized = source.realize(instance, session) if source is not None else instance
    errors = error_report(realized)
    opt, opt_exact = _optimum(realized)
    effective = gamma_drawn if gamma_drawn is not None else gamma
    result = RunResult(
        algorithm=algorithm,
        trace=session.trace,
        opt_size=opt,
        errors=errors,
        bound_rhs=guarantee(algorithm, opt, errors, effective),
        gamma=Fraction(gamma) if gamma is not None else None,
        gamma_drawn=gamma_drawn,
        seed=seed,
        guarantee_exact=exact and opt_exact,
        details=details,
    )
    logger.debug(str(result))
    return result


def offline_optimal(instance: Instance, backend: Backend = None) -> RunResult:
    session = QuerySession(instance)
    stage = query_offline(session, instance.true_weights(), backend)
    return build_result(instance, 'offline', session, exact=stage.exact, details=stage)


# ---------------------------------------------------------------------------
# Witness-pair baseline
# ---------------------------------------------------------------------------


def query_witness(session: QuerySession) -> List[Tuple[int, int]]:
    """Queries witness pairs of the first unsolved hyperedge until solved; ignores predictions."""
    pairs = []
    known_mandatory_closure(session)
    while pending := unsolved_hyperedges(session):
        members = session.hypergraph.hyperedges[pending[0]]
        first = leftmost(session, members)
        current = session.interval(first)
        partner = next(
            (
                u
                for u in members
                if u != first and not session.is_trivial(u) and current.intersects(session.interval(u))
            ),
            None,
        )
        if current.is_trivial or partner is None:
            raise PreconditionError(f'hyperedge {pending[0]} is unsolved but has no witness pair after closure')
        session.query(first)
        session.query(partner)
        pairs.append((first, partner))
        known_mandatory_closure(session)
    return pairs


def witness_baseline(instance: Instance, source: Optional[WeightSource] = None) -> RunResult:
    session = QuerySession(instance, source)
    pairs = query_witness(session)
    return build_result(instance, 'witness', session, details=pairs, source=source)


# ---------------------------------------------------------------------------
# Hop-distance algorithm
# ---------------------------------------------------------------------------


def _find_triple(session: QuerySession) -> Optional[Tuple[int, int, int]]:
    for u, v in enforcement_pairs(session):
        for w in session.unqueried():
            if w not in (u, v) and is_witness_pair(session, u, w):
                return u, v, w
    return None


def query_alg_hop(session: QuerySession, gamma: int, backend: Backend = None) -> HopDiagnostics:
    gamma = check_gamma(gamma)
    initial_closure = known_mandatory_closure(session)
    iterations: List[HopIteration] = []

    while True:
        iteration = HopIteration()
        pending = prediction_mandatory_set(session)
        while pending and len(iteration.mandatory_queries) < gamma - 2:
            v = min(pending)
            session.query(v)
            iteration.mandatory_queries.append(v)
            iteration.closure_queries += known_mandatory_closure(session)
            pending = prediction_mandatory_set(session)

        triple = _find_triple(session)
        if triple is not None:
            u, v, w = triple
            session.query(u)
            session.query(w)
            iteration.branch_queries += [u, w]
            if not session.is_queried(v) and session.interval(v).contains(session.interval(u).value):
                session.query(v)
                iteration.branch_queries.append(v)
        else:
            pair = next(enforcement_pairs(session), None)
            if pair is not None:
                session.query(pair[1])
                iteration.branch_queries.append(pair[1])
        iteration.closure_queries += known_mandatory_closure(session)
        iterations.append(iteration)
        logger.debug(
            f'hop iteration {len(iterations)}: {iteration.mandatory_queries} / '
            f'{iteration.branch_queries} / {iteration.closure_queries}'
        )

        if not prediction_mandatory_set(session):
            break
        if iteration.is_empty:
            logger.warning('hop iteration made no progress; continuing with the vertex-cover stage')
            break

    return HopDiagnostics(initial_closure, iterations, finish_with_cover(session, backend))


def alg_hop(
    instance: Instance, gamma: Gamma, backend: Backend = None, source: Optional[WeightSource] = None
) -> RunResult:
    session = QuerySession(instance, source)
    details = query_alg_hop(session, gamma, backend)
    return build_result(
        instance, 'alg1', session, gamma=gamma, exact=details.cover_stage.exact, details=details, source=source
    )


# ---------------------------------------------------------------------------
# Mandatory-distance algorithm
# ---------------------------------------------------------------------------


def _witness_partner(session: QuerySession, pending: set) -> Optional[Tuple[int, int]]:
    for p in sorted(pending):
        if session.is_queried(p):
            continue
        for b in session.unqueried():
            if b != p and is_witness_pair(session, p, b):
                return p, b
    return None


def query_alg_km(
    session: QuerySession,
    gamma: int,
    backend: Backend = None,
    predicted_mandatory: Optional[Iterable[int]] = None,
) -> KmDiagnostics:
    """
    The initial prediction-mandatory set P is fixed once and only shrinks.

    Args:
        session: Fresh session
        gamma: Integral tradeoff parameter ≥ 2
        backend: Vertex cover backend name or callable
        predicted_mandatory: Externally learned P replacing the one derived from predicted weights
    """
    gamma = check_gamma(gamma)
    if predicted_mandatory is None:
        pending = set(prediction_mandatory_set(session))
    else:
        pending = {v for v in predicted_mandatory if not session.is_queried(v)}
    initial = frozenset(pending)
    rounds: List[List[int]] = []

    while (found := _witness_partner(session, pending)) is not None:
        p, b = found
        if len(pending) >= gamma - 1:
            chosen = [p] + sorted(pending - {p})[: gamma - 2]
            batch = chosen + ([b] if b not in chosen else [])
            queried = session.query_all(batch)
            pending -= set(batch)
        else:
            queried = session.query_all(sorted(pending))
            pending.clear()
        closed = known_mandatory_closure(session)
        pending -= set(closed)
        pending = {v for v in pending if not session.is_queried(v)}
        rounds.append(queried + closed)
        logger.debug(f'km round {len(rounds)}: {queried} then closure {closed}')

    return KmDiagnostics(initial, rounds, finish_with_cover(session, backend))


def alg_km(
    instance: Instance,
    gamma: Gamma,
    backend: Backend = None,
    source: Optional[WeightSource] = None,
    predicted_mandatory: Optional[Iterable[int]] = None,
) -> RunResult:
    session = QuerySession(instance, source)
    details = query_alg_km(session, gamma, backend, predicted_mandatory)
    return build_result(
        instance, 'alg2', session, gamma=gamma, exact=details.cover_stage.exact, details=details, source=source
    )


# ---------------------------------------------------------------------------
# Randomized fractional-γ wrappers
# ---------------------------------------------------------------------------


def to_gamma(gamma: Union[Gamma, float, str]) -> Fraction:
    value = Fraction(repr(gamma)) if isinstance(gamma, float) else Fraction(gamma)
    if value < 2:
        raise ValueError(f'γ must be at least 2, got {gamma}')
    return value


def draw_gamma(gamma: Union[Gamma, float], rng: np.random.Generator) -> int:
    """⌈γ⌉ with probability equal to the fractional part of γ, otherwise ⌊γ⌋."""
    gamma = to_gamma(gamma)
    floor = math.floor(gamma)
    fraction = gamma - floor
    if fraction == 0:
        return floor
    return floor + 1 if rng.random() < fraction else floor


def alg_randomized(
    instance: Instance,
    gamma: Union[Gamma, float],
    flavor: str = 'km',
    rng: Optional[np.random.Generator] = None,
    seed: Optional[int] = None,
    backend: Backend = None,
    source: Optional[WeightSource] = None,
) -> RunResult:
    if flavor not in ('hop', 'km'):
        raise ValueError(f'unknown flavor <{flavor}>; choose hop or km')
    gamma = to_gamma(gamma)
    rng = rng if rng is not None else np.random.default_rng(seed)
    drawn = draw_gamma(gamma, rng)

    session = QuerySession(instance, source)
    if flavor == 'hop':
        details, name = query_alg_hop(session, drawn, backend), 'alg1r'
    else:
        details, name = query_alg_km(session, drawn, backend), 'alg2r'
    return build_result(
        instance,
        name,
        session,
        gamma=gamma,
        gamma_drawn=drawn,
        seed=seed,
        exact=details.cover_stage.exact,
        details=details,
        source=source,
    )
