import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Tuple, Union

from .metrics import ErrorReport

Gamma = Union[int, Fraction]


def xi_km(gamma: Gamma) -> Fraction:
    """Additive loss of the randomized mandatory-distance wrapper over 1 + 1/(γ-1)."""
    gamma = Fraction(gamma)
    frac = gamma - math.floor(gamma)
    if frac == 0:
        return Fraction(0)
    floor = math.floor(gamma)
    return frac * (1 - frac) / ((gamma - 1) * floor * (floor - 1))


def xi_hop(gamma: Gamma) -> Fraction:
    """Additive loss of the randomized hop-distance wrapper over 1 + 1/γ; at most 1/48."""
    gamma = Fraction(gamma)
    frac = gamma - math.floor(gamma)
    if frac == 0:
        return Fraction(0)
    return frac * (1 - frac) / (gamma * math.floor(gamma) * math.ceil(gamma))


def bound_hop(opt: int, k_h: int, gamma: Gamma) -> Fraction:
    gamma = Fraction(gamma)
    return min((1 + 1 / gamma) * (opt + k_h), gamma * opt)


def bound_km(opt: int, k_m: int, gamma: Gamma) -> Fraction:
    gamma = Fraction(gamma)
    return min((1 + 1 / (gamma - 1)) * (opt + k_m), gamma * opt)


def expected_bound_hop(opt: int, k_h: int, gamma: Gamma) -> Fraction:
    gamma = Fraction(gamma)
    return min((1 + 1 / gamma + xi_hop(gamma)) * (opt + k_h), gamma * opt)


def expected_bound_km(opt: int, k_m: int, gamma: Gamma) -> Fraction:
    gamma = Fraction(gamma)
    return min((1 + 1 / (gamma - 1) + xi_km(gamma)) * (opt + k_m), gamma * opt)


def bound_sorting(opt: int, errors: ErrorReport) -> Fraction:
    k = min(errors.k_number, errors.k_mandatory, errors.k_hop)
    return Fraction(min(opt + k, 2 * opt))


def guarantee(algorithm: str, opt: int, errors: ErrorReport, gamma: Optional[Gamma] = None) -> Fraction:
    """Worst-case number of queries the algorithm may spend on this instance."""
    if algorithm == 'offline':
        return Fraction(opt)
    if algorithm == 'witness':
        return Fraction(2 * opt)
    if algorithm in ('alg1', 'alg1r'):
        return bound_hop(opt, errors.k_hop, gamma)
    if algorithm in ('alg2', 'alg2r'):
        return bound_km(opt, errors.k_mandatory, gamma)
    if algorithm == 'sorting':
        return bound_sorting(opt, errors)
    raise ValueError(f'unknown algorithm <{algorithm}>')


@dataclass(frozen=True)
class RunResult:
    """
    Outcome of one algorithm run.

    `gamma` is the requested tradeoff parameter, `gamma_drawn` the integral value actually used
    (they differ only for the randomized wrappers). `bound_rhs` is evaluated with `gamma_drawn`.
    """

    algorithm: str
    trace: Tuple[int, ...]
    opt_size: int
    errors: ErrorReport
    bound_rhs: Fraction
    gamma: Optional[Fraction] = None
    gamma_drawn: Optional[int] = None
    seed: Optional[int] = None
    guarantee_exact: bool = True
    details: Any = field(default=None, repr=False, compare=False)

    def __str__(self):
        gamma = f', γ={self.gamma}' if self.gamma is not None else ''
        return f'<RunResult::{self.algorithm}{gamma}: cost={self.cost}, opt={self.opt_size}, bound={self.bound_rhs}>'

    @property
    def cost(self) -> int:
        return len(self.trace)

    @property
    def ratio(self) -> Fraction:
        """cost/opt; a pre-solved instance (opt 0) reports 1 when nothing was queried."""
        if self.opt_size == 0:
            return Fraction(max(self.cost, 1))
        return Fraction(self.cost, self.opt_size)

    @property
    def bound_ok(self) -> bool:
        return self.cost <= self.bound_rhs
