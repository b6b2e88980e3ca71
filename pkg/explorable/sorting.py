"""
Sorting under uncertainty with predictions.

The first phase queries every prediction-mandatory vertex plus the known-mandatory closure around
it. The queried vertices are grouped into cliques from a forest of arborescences (an arc (π(v), v)
means ŵ_π(v) ∈ I_v), and every isolated clique that is not known mandatory gets a distinct partner.
The second phase walks the path components of the remaining interval graph and queries a minimum
vertex cover of each path, picking the side of the partner for even paths.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx
from networkx.utils import UnionFind

from .config import logger
from .exceptions import IncompatiblePredictionError, PreconditionError
from .models import Instance, Kind, UncertaintyInterval
from .results import RunResult
from .session import QuerySession, WeightSource, is_solved
from .structure import known_mandatory_closure, known_mandatory_vertex, prediction_mandatory_set


@dataclass(frozen=True)
class ArborescenceForest:
    """
    proposed: the chosen parent π(v) of every v in I_P \\ M
    parent: accepted arcs as child -> parent (a proposal is rejected when it would close a cycle)
    """

    proposed: Mapping[int, int]
    parent: Mapping[int, int]

    @property
    def arcs(self) -> List[Tuple[int, int]]:
        return sorted((p, v) for v, p in self.parent.items())

    @property
    def vertices(self) -> Set[int]:
        return set(self.proposed) | set(self.parent.values())

    def root_of(self, v: int) -> int:
        while v in self.parent:
            v = self.parent[v]
        return v

    def children(self, u: int) -> List[int]:
        return sorted(v for v, p in self.parent.items() if p == u)


@dataclass(frozen=True)
class CliquePartition:
    """
    cliques: disjoint vertex sets, each pairwise intersecting
    partners: isolated (critical) vertex -> its distinct partner outside I_P ∪ M
    known_mandatory: isolated vertices that are known mandatory
    """

    cliques: Tuple[FrozenSet[int], ...]
    partners: Mapping[int, int] = field(default_factory=dict)
    known_mandatory: FrozenSet[int] = frozenset()

    @property
    def critical_partners(self) -> FrozenSet[int]:
        return frozenset(self.partners.values())

    @property
    def covered(self) -> FrozenSet[int]:
        return frozenset().union(*self.cliques) if self.cliques else frozenset()


@dataclass(frozen=True)
class PathComponent:
    """Vertices x_1 ... x_p ordered by non-increasing lower limit."""

    vertices: Tuple[int, ...]

    def __len__(self):
        return len(self.vertices)

    @property
    def interior(self) -> Tuple[int, ...]:
        return self.vertices[1:-1]


@dataclass
class SortingDiagnostics:
    predicted_mandatory: FrozenSet[int]
    first_closure: List[int]
    phase_queries: List[int]
    second_closure: List[int]
    forest: ArborescenceForest
    partition: CliquePartition
    paths: List[PathComponent] = field(default_factory=list)


def is_clique(members: Iterable[int], intervals: Sequence[UncertaintyInterval]) -> bool:
    return all(intervals[a].intersects(intervals[b]) for a, b in combinations(sorted(members), 2))


def _require_sorting(instance: Instance):
    if instance.kind is not Kind.SORTING:
        raise PreconditionError('the sorting algorithm needs a sorting instance')


def build_arborescence_forest(
    session: QuerySession, predicted_mandatory: Iterable[int], known_mandatory: Iterable[int]
) -> ArborescenceForest:
    """Parent π(v) = lowest-id u with ŵ_u ∈ I_v; arcs accepted in ascending v unless they close a cycle."""
    instance = session.instance
    _require_sorting(instance)
    intervals, predictions = instance.intervals, instance.predictions

    components = UnionFind()
    proposed: Dict[int, int] = {}
    parent: Dict[int, int] = {}
    for v in sorted(set(predicted_mandatory) - set(known_mandatory)):
        candidate = next((u for u in range(instance.n) if u != v and intervals[v].contains(predictions[u])), None)
        if candidate is None:
            raise PreconditionError(f'vertex {v} is prediction mandatory but contains no predicted weight')
        proposed[v] = candidate
        if components[candidate] != components[v]:
            parent[v] = candidate
            components.union(candidate, v)
        else:
            logger.debug(f'arc ({candidate}, {v}) rejected: it would close a cycle')
    return ArborescenceForest(proposed, parent)


def _depths(parent: Mapping[int, int], nodes: Iterable[int]) -> Dict[int, int]:
    depth: Dict[int, int] = {}

    def measure(v: int) -> int:
        if v not in depth:
            depth[v] = measure(parent[v]) + 1 if v in parent else 0
        return depth[v]

    for v in nodes:
        measure(v)
    return depth


def partition_forest(selected: Iterable[int], parent: Mapping[int, int]) -> List[FrozenSet[int]]:
    """
    Deepest-vertex grouping: the selected children of a common parent form a clique, joined by
    the parent while it is still selected; a selected vertex without parent arc stays alone.
    """
    remaining = set(selected)
    children: Dict[int, Set[int]] = defaultdict(set)
    for child, p in parent.items():
        children[p].add(child)
    depth = _depths(parent, remaining)

    cliques = []
    while remaining:
        v = max(remaining, key=lambda x: (depth[x], -x))
        if v in parent:
            p = parent[v]
            clique = {c for c in children[p] if c in remaining}
            if p in remaining:
                clique.add(p)
        else:
            clique = {v}
        remaining -= clique
        cliques.append(frozenset(clique))
    return cliques


def _subtree(parent: Mapping[int, int], top: int, nodes: Iterable[int]) -> Set[int]:
    members = set()
    for v in nodes:
        x = v
        while True:
            if x == top:
                members.add(v)
                break
            if x not in parent:
                break
            x = parent[x]
    return members


def _restrict(parent: Mapping[int, int], members: Set[int]) -> Dict[int, int]:
    return {c: p for c, p in parent.items() if c in members and p in members}


def _clique_of(cliques: List[FrozenSet[int]], v: int) -> FrozenSet[int]:
    return next(c for c in cliques if v in c)


def repartition_tree(
    parent: Mapping[int, int],
    root: int,
    anchor: int,
    intervals: Sequence[UncertaintyInterval],
    predictions: Sequence,
) -> List[FrozenSet[int]]:
    """
    Clique partition without singletons for a tree of prediction-mandatory vertices whose root r
    has a descendant `anchor` with ŵ_anchor ∈ I_r.
    """
    parent = dict(parent)
    nodes = {root} | set(parent)
    target = predictions[root]
    for v in sorted(nodes - {root}):
        if parent[v] != root and intervals[v].contains(target):
            parent[v] = root

    children = sorted(c for c, p in parent.items() if p == root)
    subtrees = {c: _subtree(parent, c, nodes) for c in children}
    parts = {c: partition_forest(subtrees[c], _restrict(parent, subtrees[c])) for c in children}
    heads = {c: _clique_of(parts[c], c) for c in children}

    def assemble(replaced: Dict[int, List[FrozenSet[int]]], extra: List[FrozenSet[int]]) -> List[FrozenSet[int]]:
        cliques = list(extra)
        for c in children:
            cliques.extend(replaced.get(c, parts[c]))
        return cliques

    singles = [c for c in children if len(heads[c]) == 1]
    if singles:
        replaced = {c: [q for q in parts[c] if q != heads[c]] for c in singles}
        return assemble(replaced, [frozenset({root, *singles})])

    large = [c for c in children if len(heads[c]) >= 3]
    if large:
        s = large[0]
        rest = [q for q in parts[s] if q != heads[s]] + [heads[s] - {s}]
        return assemble({s: rest}, [frozenset({s, root})])

    fitting = [c for c in children if intervals[root].contains(predictions[c])]
    if fitting:
        c = fitting[0]
        rest = [q for q in parts[c] if q != heads[c]] + [heads[c] | {root}]
        return assemble({c: rest}, [])

    top = next((c for c in children if anchor in subtrees[c]), None)
    if top is None or top == anchor:
        raise PreconditionError(f'anchor {anchor} is not a deeper descendant of root {root}')
    lower = _subtree(parent, anchor, subtrees[top])
    upper = subtrees[top] - lower
    part_lower = partition_forest(lower, _restrict(parent, lower))
    part_upper = partition_forest(upper, _restrict(parent, upper))
    head_lower, head_upper = _clique_of(part_lower, anchor), _clique_of(part_upper, top)

    alone = [h for h in (head_lower, head_upper) if len(h) == 1]
    if alone:
        kept = [q for q in part_lower + part_upper if q not in alone]
        merged = frozenset({root}.union(*alone))
        return assemble({top: kept}, [merged])
    kept = [q for q in part_lower if q != head_lower] + part_upper + [head_lower | {root}]
    return assemble({top: kept}, [])


def _path_endpoints(instance: Instance, outside: Set[int]) -> Set[int]:
    """Vertices of degree ≤ 1 in the interval graph induced by `outside`."""
    intervals = instance.intervals
    degree = {v: 0 for v in outside}
    for v, u in combinations(sorted(outside), 2):
        if intervals[v].intersects(intervals[u]):
            degree[v] += 1
            degree[u] += 1
    return {v for v, d in degree.items() if d <= 1}


def clique_partition(
    session: QuerySession,
    predicted_mandatory: Iterable[int],
    known_mandatory: Iterable[int],
    forest: Optional[ArborescenceForest] = None,
) -> CliquePartition:
    """
    Partition I_P ∪ M into cliques so that every isolated vertex is known mandatory or has a
    distinct partner u ∉ I_P ∪ M with an intersecting interval.
    """
    instance = session.instance
    _require_sorting(instance)
    predicted, known = set(predicted_mandatory), set(known_mandatory)
    selected = predicted | known
    if any(not session.is_queried(v) for v in selected) or known_mandatory_vertex(session) is not None:
        raise PreconditionError('clique partition needs I_P queried and the closure exhausted')

    forest = forest or build_arborescence_forest(session, predicted, known)
    intervals, predictions = instance.intervals, instance.predictions

    trees: Dict[int, Set[int]] = defaultdict(set)
    for v in selected | forest.vertices:
        trees[forest.root_of(v)].add(v)

    cliques: List[FrozenSet[int]] = []
    loose: List[int] = []
    for root in sorted(trees):
        members = trees[root]
        arcs = _restrict(forest.parent, members)
        if root in predicted and root not in known:
            cliques.extend(repartition_tree(arcs, root, forest.proposed[root], intervals, predictions))
            continue
        for clique in partition_forest(members & selected, arcs):
            if len(clique) == 1 and not clique <= known:
                loose.extend(clique)
            else:
                cliques.append(clique)

    outside = set(range(instance.n)) - selected
    endpoints = _path_endpoints(instance, outside)
    chosen: Dict[int, int] = {}
    for v in sorted(loose):
        candidates = [u for u in sorted(outside) if intervals[v].contains(predictions[u])]
        preferred = [u for u in candidates if u in endpoints]
        default = forest.proposed.get(v)
        if default in preferred:
            chosen[v] = default
        elif preferred:
            chosen[v] = preferred[0]
        elif default is not None:
            chosen[v] = default
        else:
            raise PreconditionError(f'isolated vertex {v} has no partner outside I_P ∪ M')

    by_partner: Dict[int, List[int]] = defaultdict(list)
    for v, u in chosen.items():
        by_partner[u].append(v)
    partners: Dict[int, int] = {}
    for u, group in sorted(by_partner.items()):
        cliques.append(frozenset(group))
        if len(group) == 1:
            partners[group[0]] = u

    singles_known = frozenset(v for c in cliques if len(c) == 1 for v in c if v in known)
    ordered = tuple(sorted(cliques, key=min))
    logger.debug(f'clique partition {[sorted(c) for c in ordered]} with partners {partners}')
    return CliquePartition(ordered, partners, singles_known)


def path_components(session: QuerySession) -> List[PathComponent]:
    """Components of the interval graph over unqueried vertices; each must be a path or a single vertex."""
    if prediction_mandatory_set(session) or known_mandatory_vertex(session) is not None:
        raise PreconditionError('path components need a session without (prediction) mandatory vertices')

    intervals = session.intervals
    graph = nx.Graph()
    open_vertices = [v for v in session.unqueried() if not intervals[v].is_trivial]
    graph.add_nodes_from(open_vertices)
    for v, u in combinations(open_vertices, 2):
        if intervals[v].intersects(intervals[u]):
            graph.add_edge(v, u)

    components = []
    for nodes in sorted(nx.connected_components(graph), key=min):
        order = tuple(sorted(nodes, key=lambda v: (-intervals[v].lower, v)))
        consecutive = all(graph.has_edge(a, b) for a, b in zip(order, order[1:]))
        if graph.subgraph(nodes).number_of_edges() != len(order) - 1 or not consecutive:
            raise PreconditionError(f'component {sorted(nodes)} is not a path')
        components.append(PathComponent(order))
    return components


def _path_cover(component: PathComponent, partners: FrozenSet[int]) -> Tuple[int, ...]:
    x = component.vertices
    if len(x) % 2 == 1:
        return x[1::2]
    if x[0] in partners:
        return x[0::2]
    return x[1::2]


def query_alg_sorting(session: QuerySession) -> SortingDiagnostics:
    _require_sorting(session.instance)
    predicted = prediction_mandatory_set(session)
    first_closure = known_mandatory_closure(session)
    phase_queries = session.query_all(sorted(predicted))
    second_closure = known_mandatory_closure(session)

    known = set(first_closure) | set(second_closure)
    forest = build_arborescence_forest(session, predicted, known)
    partition = clique_partition(session, predicted, known, forest)
    diagnostics = SortingDiagnostics(predicted, first_closure, phase_queries, second_closure, forest, partition)

    while is_solved(session) is None:
        paths = [c for c in path_components(session) if len(c) >= 2]
        if not paths:
            raise RuntimeError('sorting instance unsolved without a path component to query')
        component = paths[0]
        diagnostics.paths.append(component)
        session.query_all(_path_cover(component, partition.critical_partners))
        known_mandatory_closure(session)
    return diagnostics


def alg_sorting(
    instance: Instance,
    source: Optional[WeightSource] = None,
    predicted_mandatory: Optional[Iterable[int]] = None,
) -> RunResult:
    from .orient import build_result

    if predicted_mandatory is not None:
        raise IncompatiblePredictionError('the sorting algorithm needs predicted weights, not a bare mandatory set')
    session = QuerySession(instance, source)
    details = query_alg_sorting(session)
    return build_result(instance, 'sorting', session, details=details, source=source)
