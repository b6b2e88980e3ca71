from dataclasses import dataclass
from typing import FrozenSet, Tuple

from .models import Instance
from .structure import mandatory_set


@dataclass(frozen=True)
class ErrorReport:
    k_number: int
    k_hop: int
    k_hop_per_vertex: Tuple[int, ...]
    k_mandatory: int
    pred_mandatory: FrozenSet[int]
    real_mandatory: FrozenSet[int]
    k_hop_restricted: int

    def measure(self, name: str) -> int:
        return {'k_num': self.k_number, 'k_hop': self.k_hop, 'k_mand': self.k_mandatory}[name]


def k_number(instance: Instance) -> int:
    return sum(1 for v in range(instance.n) if instance.true_weight(v) != instance.predictions[v])


def hop_indicator(instance: Instance, v: int, u: int) -> int:
    """1 if the value of v passes over a limit of I_u on its way from prediction to precise weight."""
    if u == v:
        raise ValueError('hop indicator needs two distinct vertices')
    weight, predicted = instance.true_weight(v), instance.predictions[v]
    lower, upper = instance.intervals[u].lower, instance.intervals[u].upper
    crossed = (
        predicted <= lower < weight
        or weight <= lower < predicted
        or weight < upper <= predicted
        or predicted < upper <= weight
    )
    return int(crossed)


def hop_per_vertex(instance: Instance) -> Tuple[int, ...]:
    return tuple(
        sum(hop_indicator(instance, v, u) for u in range(instance.n) if u != v) for v in range(instance.n)
    )


def k_hop(instance: Instance) -> int:
    return sum(hop_per_vertex(instance))


def k_hop_restricted(instance: Instance) -> int:
    """Hop count over pairs that share a hyperedge only; never larger than k_hop."""
    hypergraph = instance.hypergraph
    return sum(
        hop_indicator(instance, v, u)
        for v in range(instance.n)
        for u in range(instance.n)
        if u != v and hypergraph.shares_edge(v, u)
    )


def k_mandatory(instance: Instance) -> Tuple[int, FrozenSet[int], FrozenSet[int]]:
    """Mandatory query distance |I_P △ I_R| together with I_P and I_R."""
    predicted = mandatory_set(instance, instance.predictions)
    real = mandatory_set(instance, instance.true_weights())
    return len(predicted ^ real), predicted, real


def error_report(instance: Instance) -> ErrorReport:
    per_vertex = hop_per_vertex(instance)
    distance, predicted, real = k_mandatory(instance)
    return ErrorReport(
        k_number=k_number(instance),
        k_hop=sum(per_vertex),
        k_hop_per_vertex=per_vertex,
        k_mandatory=distance,
        pred_mandatory=predicted,
        real_mandatory=real,
        k_hop_restricted=k_hop_restricted(instance),
    )
