from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Optional, Set

import networkx as nx

from .config import Config, logger
from .exceptions import SizeLimitError

Adjacency = Dict[int, Set[int]]


@dataclass(frozen=True)
class CoverResult:
    cover: FrozenSet[int]
    exact: bool

    def __len__(self):
        return len(self.cover)


CoverBackend = Callable[[nx.Graph], CoverResult]


def _adjacency(graph: nx.Graph) -> Adjacency:
    adjacency = {v: set(graph.neighbors(v)) - {v} for v in graph.nodes}
    return {v: neighbours for v, neighbours in adjacency.items() if neighbours}


def _without(adjacency: Adjacency, removed: Set[int]) -> Adjacency:
    remaining = {v: neighbours - removed for v, neighbours in adjacency.items() if v not in removed}
    return {v: neighbours for v, neighbours in remaining.items() if neighbours}


def _greedy_matching(adjacency: Adjacency) -> Set[int]:
    matched: Set[int] = set()
    for v in sorted(adjacency):
        if v in matched:
            continue
        for u in sorted(adjacency[v]):
            if u not in matched:
                matched.update((v, u))
                break
    return matched


def _reduce(adjacency: Adjacency, chosen: FrozenSet[int]):
    """Degree-1 rule: some optimum cover takes the neighbour of a pendant vertex."""
    while True:
        pendant = next((v for v in sorted(adjacency) if len(adjacency[v]) == 1), None)
        if pendant is None:
            return adjacency, chosen
        (neighbour,) = adjacency[pendant]
        chosen = chosen | {neighbour}
        adjacency = _without(adjacency, {neighbour})


class _CoverSearch:
    """Branch and bound on a maximum-degree vertex with a matching lower bound."""

    def __init__(self, adjacency: Adjacency):
        self.adjacency = adjacency
        self.best: FrozenSet[int] = frozenset(_greedy_matching(adjacency))
        self.nodes = 0

    def solve(self) -> FrozenSet[int]:
        self._branch(self.adjacency, frozenset())
        return self.best

    def _branch(self, adjacency: Adjacency, chosen: FrozenSet[int]):
        self.nodes += 1
        adjacency, chosen = _reduce(adjacency, chosen)
        if not adjacency:
            if len(chosen) < len(self.best):
                self.best = chosen
            return
        if len(chosen) + len(_greedy_matching(adjacency)) // 2 >= len(self.best):
            return

        v = max(adjacency, key=lambda x: (len(adjacency[x]), -x))
        self._branch(_without(adjacency, {v}), chosen | {v})
        neighbours = adjacency[v]
        self._branch(_without(adjacency, neighbours | {v}), chosen | neighbours)


def min_vertex_cover_exact(graph: nx.Graph, limit: Optional[int] = None) -> CoverResult:
    """
    Minimum vertex cover by deterministic branch and bound.

    Args:
        graph: Undirected graph; isolated vertices are ignored
        limit: Maximum number of non-isolated vertices (defaults to Config.VC_EXACT_LIMIT)

    Returns:
        CoverResult with exact=True
    """
    limit = Config.VC_EXACT_LIMIT if limit is None else limit
    adjacency = _adjacency(graph)
    if len(adjacency) > limit:
        raise SizeLimitError(
            f'exact vertex cover limited to {limit} vertices, got {len(adjacency)}; use the approx backend (--vc approx)'
        )
    if not adjacency:
        return CoverResult(frozenset(), True)

    search = _CoverSearch(adjacency)
    cover = search.solve()
    logger.debug(f'exact vertex cover of size {len(cover)} after {search.nodes} search nodes')
    return CoverResult(cover, True)


def min_vertex_cover_approx(graph: nx.Graph) -> CoverResult:
    """Both endpoints of a maximal matching; at most twice the optimum."""
    matching = nx.maximal_matching(graph)
    cover = frozenset(v for edge in matching for v in edge)
    return CoverResult(cover, False)


BACKENDS: Dict[str, CoverBackend] = {
    'exact': min_vertex_cover_exact,
    'approx': min_vertex_cover_approx,
}


def cover_backend(name: Optional[str] = None) -> CoverBackend:
    name = name or Config.VC_BACKEND
    if name not in BACKENDS:
        raise ValueError(f'unknown vertex cover backend <{name}>; choose from {sorted(BACKENDS)}')
    return BACKENDS[name]
