"""
Structural analysis of a query session: leftmost vertices, witness pairs, mandatory and
prediction-mandatory vertices, the known-mandatory closure, enforcement and the vertex-cover instance.

Functions taking a `problem` accept anything with `hypergraph` and `intervals` attributes, so they
work on an Instance (initial intervals) as well as on a QuerySession (current intervals).
"""
from fractions import Fraction
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .session import QuerySession, edge_minimum


def leftmost(session: QuerySession, members: Sequence[int]) -> int:
    """Member with the minimum current lower limit, lowest id on ties."""
    if not members:
        raise ValueError('leftmost of an empty hyperedge')
    return min(members, key=lambda v: (session.interval(v).lower, v))


def unsolved_hyperedges(session: QuerySession) -> List[int]:
    intervals = session.intervals
    return [
        index
        for index, members in enumerate(session.hypergraph.hyperedges)
        if edge_minimum(intervals, members) is None
    ]


def is_witness_pair(session: QuerySession, v: int, u: int) -> bool:
    if v == u:
        raise ValueError('a witness pair needs two distinct vertices')
    first, second = session.interval(v), session.interval(u)
    if first.is_trivial or second.is_trivial or not first.intersects(second):
        return False

    hypergraph = session.hypergraph
    for index in hypergraph.incident[v]:
        members = hypergraph.hyperedges[index]
        if u not in members or edge_minimum(session.intervals, members) is not None:
            continue
        if leftmost(session, members) in (v, u):
            return True
    return False


def is_mandatory_given_weights(problem, v: int, weights: Sequence[Fraction]) -> bool:
    """
    Two-case characterization: v is mandatory iff some hyperedge S containing v either has v as its
    minimum and another member's weight inside I_v, or has its minimum weight inside I_v.
    """
    interval = problem.intervals[v]
    if interval.is_trivial:
        return False

    hypergraph = problem.hypergraph
    for index in hypergraph.incident[v]:
        members = hypergraph.hyperedges[index]
        minimum = min(members, key=lambda x: (weights[x], x))
        if minimum == v:
            if any(interval.contains(weights[x]) for x in members if x != v):
                return True
        elif interval.contains(weights[minimum]):
            return True
    return False


def mandatory_set(problem, weights: Sequence[Fraction]) -> FrozenSet[int]:
    return frozenset(v for v in range(len(problem.intervals)) if is_mandatory_given_weights(problem, v, weights))


def prediction_mandatory_set(session: QuerySession) -> FrozenSet[int]:
    """Unqueried vertices that are mandatory when unqueried weights equal their predictions."""
    weights = session.weights_with_predictions()
    return frozenset(v for v in session.unqueried() if is_mandatory_given_weights(session, v, weights))


def known_mandatory_vertex(session: QuerySession) -> Optional[int]:
    """
    First vertex (by hyperedge index, then id) that is leftmost in an unsolved hyperedge and whose
    interval contains a revealed weight or another member's interval.
    """
    intervals = session.intervals
    for members in session.hypergraph.hyperedges:
        if edge_minimum(intervals, members) is not None:
            continue
        low = min(intervals[v].lower for v in members)
        for v in members:
            candidate = intervals[v]
            if candidate.is_trivial or candidate.lower != low:
                continue
            for u in members:
                if u == v:
                    continue
                other = intervals[u]
                if other.is_trivial:
                    if candidate.contains(other.value):
                        return v
                elif other.within(candidate):
                    return v
    return None


def known_mandatory_closure(session: QuerySession) -> List[int]:
    """Queries known-mandatory vertices until none is left; returns them in query order."""
    closed = []
    while (v := known_mandatory_vertex(session)) is not None:
        session.query(v)
        closed.append(v)
    return closed


def enforces(session: QuerySession, u: int, v: int) -> bool:
    """True iff the prediction of u, if correct, would certify v as mandatory."""
    if u == v:
        raise ValueError('enforcement needs two distinct vertices')
    if session.is_trivial(u) or session.is_trivial(v):
        return False
    if not session.interval(v).contains(session.predicted(u)):
        return False

    hypergraph = session.hypergraph
    for index in hypergraph.incident[u]:
        members = hypergraph.hyperedges[index]
        if v not in members or edge_minimum(session.intervals, members) is not None:
            continue
        first = leftmost(session, members)
        if first == v:
            return True
        if first == u and leftmost(session, [x for x in members if x != u]) == v:
            return True
    return False


def enforcement_pairs(session: QuerySession) -> Iterator[Tuple[int, int]]:
    """All (u, v) with enforces(u, v), scanned by (id_u, id_v)."""
    candidates = session.unqueried()
    for u in candidates:
        for v in candidates:
            if u != v and enforces(session, u, v):
                yield u, v


def vertex_cover_instance(session: QuerySession) -> nx.Graph:
    """
    Graph on unqueried vertices with an edge {v, u} whenever v is leftmost in a not yet solved
    hyperedge containing u and the current intervals of v and u intersect.
    """
    graph = nx.Graph()
    intervals = session.intervals
    for index in unsolved_hyperedges(session):
        members = session.hypergraph.hyperedges[index]
        first = leftmost(session, members)
        if intervals[first].is_trivial:
            continue
        for u in members:
            if u != first and not intervals[u].is_trivial and intervals[first].intersects(intervals[u]):
                graph.add_edge(min(first, u), max(first, u))
    return graph
