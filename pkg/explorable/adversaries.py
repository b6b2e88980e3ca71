"""
Adaptive adversaries for the lower-bound families.

A script answers each query lazily from the order in which the algorithm has asked so far and
commits the answer. `realize` completes the unqueried vertices in ascending id order, as if the
algorithm had continued, so replaying the committed weights statically reproduces the same trace.
"""
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .config import logger
from .exceptions import InvalidInstanceError, UnknownFamilyError
from .models import Instance

HALF = Fraction(1, 2)


class AdversaryScript:
    family: str = ''

    def __init__(self, instance: Instance):
        self.instance = instance
        self._committed: Dict[int, Fraction] = {}
        self._order: List[int] = []

    def __repr__(self):
        return f'{type(self).__name__}(n={self.instance.n}, answered={len(self._order)})'

    @property
    def committed(self) -> Dict[int, Fraction]:
        return dict(self._committed)

    def reset(self):
        self._committed.clear()
        self._order.clear()

    def fresh(self) -> 'AdversaryScript':
        """An unanswered copy over the same skeleton, for the next run."""
        clone = type(self).__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone._committed, clone._order = {}, []
        return clone

    def _answer(self, v: int, answered: List[int], committed: Dict[int, Fraction]) -> Fraction:
        raise NotImplementedError

    def _commit(self, v: int, answered: List[int], committed: Dict[int, Fraction]) -> Fraction:
        weight = self._answer(v, answered, committed)
        if not self.instance.intervals[v].contains(weight):
            raise InvalidInstanceError(f'{self.family}: answer {weight} for vertex {v} outside its interval')
        committed[v] = weight
        answered.append(v)
        return weight

    def reveal(self, v: int, session=None) -> Fraction:  # noqa: ARG002
        if v in self._committed:
            return self._committed[v]
        weight = self._commit(v, self._order, self._committed)
        logger.debug(f'{self.family} answers v{v} -> {weight}')
        return weight

    def complete(self) -> Tuple[Fraction, ...]:
        """Committed weights, with the unanswered vertices answered in ascending id order."""
        answered, committed = list(self._order), dict(self._committed)
        for v in range(self.instance.n):
            if v not in committed:
                self._commit(v, answered, committed)
        return tuple(committed[v] for v in range(self.instance.n))

    def realize(self, instance: Optional[Instance] = None, session=None) -> Instance:  # noqa: ARG002
        return (instance or self.instance).with_weights(self.complete())


class TradeoffAdversary(AdversaryScript):
    """
    One hyperedge over 0..β. Vertex 0 sits left of the others; every prediction is consistent
    with querying 1..β only. If the algorithm trusts that and leaves 0 for last, the last of
    1..β lands inside I_0 and w_0 leaves all other intervals.
    """

    family = 'lb1'

    def __init__(self, instance: Instance, beta: int):
        super().__init__(instance)
        self.beta = beta

    def _answer(self, v: int, answered: List[int], committed: Dict[int, Fraction]) -> Fraction:
        if v == 0:
            deviated = any(committed[u] == Fraction(3, 2) for u in answered)
            return HALF if deviated else Fraction(3, 2)
        rest = set(range(1, self.beta + 1)) - set(answered) - {v}
        if not rest and 0 not in answered:
            return Fraction(3, 2)
        return Fraction(5, 2)


class WrongCountAdversary(AdversaryScript):
    """
    Left group 0..n-1 and right group n..2n-1, hyperedges {i} ∪ right. Predictions stay correct
    until one group is about to be finished; its last vertex then lands inside the other
    group's intervals, forcing every remaining vertex there.
    """

    family = 'lb_wrong'

    def __init__(self, instance: Instance, n: int):
        super().__init__(instance)
        self.n = n

    def _answer(self, v: int, answered: List[int], committed: Dict[int, Fraction]) -> Fraction:  # noqa: ARG002
        left = set(range(self.n))
        own, other = (left, set(range(self.n, 2 * self.n))) if v in left else (set(range(self.n, 2 * self.n)), left)
        done = set(answered)
        if not (own - done - {v}) and (other - done):
            return Fraction(3, 2)
        return self.instance.predictions[v]


class ErrorMeasureAdversary(AdversaryScript):
    """
    Disjoint copies of two overlapping intervals v = (4j, 4j+2), u = (4j+1, 4j+3) predicted at
    4j + 3/2. The first queried vertex of a copy confirms its prediction; the second then falls
    outside the first's interval, so the optimum queries only that second vertex.
    """

    family = 'lb_error'

    def _answer(self, v: int, answered: List[int], committed: Dict[int, Fraction]) -> Fraction:  # noqa: ARG002
        partner = v ^ 1
        base = 4 * (v // 2)
        if partner not in answered:
            return self.instance.predictions[v]
        return base + (Fraction(1, 2) if v % 2 == 0 else Fraction(5, 2))


class MandatoryDistanceAdversary(AdversaryScript):
    """
    Left group 0..b-1 in (0, 2), right group b..a-1 in (1, 3), hyperedges {i} ∪ right.
    Whichever group the algorithm finishes first decides where the other group's last vertex
    goes: finishing the right group makes every left vertex mandatory; finishing the left
    group first makes the remaining right vertices mandatory with k_M = 0.
    """

    family = 'lb_fig5'

    def __init__(self, instance: Instance, a: int, b: int):
        super().__init__(instance)
        self.a, self.b = a, b

    def _answer(self, v: int, answered: List[int], committed: Dict[int, Fraction]) -> Fraction:  # noqa: ARG002
        done = set(answered)
        left, right = set(range(self.b)), set(range(self.b, self.a))
        if v in right:
            if right - done - {v}:
                return Fraction(5, 2)
            return Fraction(5, 2) if left <= done else Fraction(3, 2)
        if left - done - {v}:
            return HALF
        return HALF if right <= done else Fraction(3, 2)


ADVERSARIES = {
    'lb1': TradeoffAdversary,
    'lb_wrong': WrongCountAdversary,
    'lb_error': ErrorMeasureAdversary,
    'lb_fig5': MandatoryDistanceAdversary,
}


def adversary_class(family: str) -> type:
    try:
        return ADVERSARIES[family]
    except KeyError:
        raise UnknownFamilyError(f'no adversary for family <{family}>; choose from {sorted(ADVERSARIES)}') from None
