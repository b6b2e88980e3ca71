import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import pandas as pd

from .adversaries import AdversaryScript
from .config import METADATA, Config, logger
from .exceptions import InvalidInstanceError
from .generators import GeneratorConfig, NamedFixture, gen_named_fixture, gen_random
from .models import Instance, Kind, format_rational, to_rational
from .orient import alg_hop, alg_km, alg_randomized, offline_optimal, witness_baseline
from .results import RunResult, guarantee
from .session import WeightSource, min_feasible_size
from .sorting import alg_sorting
from .threads import run_threads

COLUMNS = (
    'instance', 'family', 'n', 'algorithm', 'gamma', 'seed', 'cost', 'opt', 'ratio',
    'k_num', 'k_hop', 'k_mand', 'bound_rhs', 'bound_ok',
)
EXTRA_COLUMNS = ('k_hop_edges', 'gamma_drawn', 'error_level', 'error')
DETERMINISTIC_GAMMA = ('alg1', 'alg2')
RANDOMIZED = ('alg1r', 'alg2r')


def run_algorithm(
    name: str,
    instance: Instance,
    gamma=None,
    seed: Optional[int] = None,
    backend: Optional[str] = None,
    source: Optional[WeightSource] = None,
    predicted_mandatory: Optional[Iterable[int]] = None,
) -> RunResult:
    """Dispatches one run by algorithm name."""
    if name == 'offline':
        realized = source.realize(instance, None) if source is not None else instance
        return offline_optimal(realized, backend)
    if name == 'witness':
        return witness_baseline(instance, source)
    if name == 'alg1':
        return alg_hop(instance, gamma, backend, source)
    if name == 'alg2':
        return alg_km(instance, gamma, backend, source, predicted_mandatory)
    if name in RANDOMIZED:
        flavor = 'hop' if name == 'alg1r' else 'km'
        return alg_randomized(instance, gamma, flavor, seed=seed, backend=backend, source=source)
    if name == 'sorting':
        return alg_sorting(instance, source, predicted_mandatory)
    raise ValueError(f'unknown algorithm <{name}>; choose from {Config.ALGORITHMS}')


# ---------------------------------------------------------------------------
# Result rows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResultRow:
    instance: str
    family: str
    n: int
    algorithm: str
    gamma: Optional[Fraction] = None
    seed: Optional[int] = None
    cost: Optional[int] = None
    opt: Optional[int] = None
    k_num: Optional[int] = None
    k_hop: Optional[int] = None
    k_mand: Optional[int] = None
    bound_rhs: Optional[Fraction] = None
    bound_ok: Optional[bool] = None
    k_hop_edges: Optional[int] = None
    gamma_drawn: Optional[int] = None
    error_level: Optional[Fraction] = None
    error: str = ''

    def __str__(self):
        if self.failed:
            return f'<ResultRow::{self.instance}/{self.algorithm}: failed ({self.error})>'
        return f'<ResultRow::{self.instance}/{self.algorithm}: cost={self.cost}, opt={self.opt}, ok={self.bound_ok}>'

    @property
    def failed(self) -> bool:
        return bool(self.error)

    @property
    def ratio(self) -> Optional[Fraction]:
        if self.cost is None or self.opt is None:
            return None
        return Fraction(max(self.cost, 1)) if self.opt == 0 else Fraction(self.cost, self.opt)

    @classmethod
    def from_result(cls, job: 'SuiteJob', result: RunResult) -> 'ResultRow':
        errors = result.errors
        return cls(
            **job.key(),
            gamma=result.gamma,
            seed=result.seed if result.seed is not None else job.seed,
            cost=result.cost,
            opt=result.opt_size,
            k_num=errors.k_number,
            k_hop=errors.k_hop,
            k_mand=errors.k_mandatory,
            bound_rhs=result.bound_rhs,
            bound_ok=result.bound_ok if result.guarantee_exact else None,
            k_hop_edges=errors.k_hop_restricted,
            gamma_drawn=result.gamma_drawn,
        )

    @classmethod
    def failure(cls, job: 'SuiteJob', exc: BaseException) -> 'ResultRow':
        return cls(**job.key(), gamma=job.gamma, seed=job.seed, error=f'{type(exc).__name__}: {exc}')

    def to_record(self) -> Dict[str, str]:
        ratio = self.ratio
        return {
            'instance': self.instance,
            'family': self.family,
            'n': str(self.n),
            'algorithm': self.algorithm,
            'gamma': _text(self.gamma),
            'seed': _text(self.seed),
            'cost': _text(self.cost),
            'opt': _text(self.opt),
            'ratio': f'{float(ratio):.{Config.RATIO_DIGITS}f}' if ratio is not None else '',
            'k_num': _text(self.k_num),
            'k_hop': _text(self.k_hop),
            'k_mand': _text(self.k_mand),
            'bound_rhs': _text(self.bound_rhs),
            'bound_ok': '' if self.bound_ok is None else str(self.bound_ok).lower(),
            'k_hop_edges': _text(self.k_hop_edges),
            'gamma_drawn': _text(self.gamma_drawn),
            'error_level': _text(self.error_level),
            'error': self.error,
        }

    @classmethod
    def from_record(cls, record: Dict[str, str]) -> 'ResultRow':
        def integer(name):
            return int(record[name]) if record.get(name, '') != '' else None

        def rational(name):
            return to_rational(record[name]) if record.get(name, '') != '' else None

        flag = record.get('bound_ok', '')
        return cls(
            instance=record['instance'],
            family=record['family'],
            n=int(record['n']),
            algorithm=record['algorithm'],
            gamma=rational('gamma'),
            seed=integer('seed'),
            cost=integer('cost'),
            opt=integer('opt'),
            k_num=integer('k_num'),
            k_hop=integer('k_hop'),
            k_mand=integer('k_mand'),
            bound_rhs=rational('bound_rhs'),
            bound_ok=None if flag == '' else flag == 'true',
            k_hop_edges=integer('k_hop_edges'),
            gamma_drawn=integer('gamma_drawn'),
            error_level=rational('error_level'),
            error=record.get('error', ''),
        )


def _text(value) -> str:
    if value is None:
        return ''
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


class ResultTable:
    """Rows in suite order: instance, then algorithm, then γ, then seed."""

    def __init__(self, rows: Iterable[ResultRow] = ()):
        self.rows: List[ResultRow] = list(rows)

    def __len__(self):
        return len(self.rows)

    def __iter__(self) -> Iterator[ResultRow]:
        return iter(self.rows)

    def __getitem__(self, index: int) -> ResultRow:
        return self.rows[index]

    def __eq__(self, other):
        return isinstance(other, ResultTable) and self.rows == other.rows

    def __repr__(self):
        return f'ResultTable(rows={len(self.rows)}, failures={len(self.failures)})'

    @property
    def failures(self) -> List[ResultRow]:
        return [row for row in self.rows if row.failed]

    @property
    def violations(self) -> List[ResultRow]:
        return [row for row in self.rows if not row.failed and row.bound_ok is False]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.to_record() for row in self.rows], columns=list(COLUMNS + EXTRA_COLUMNS))

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> 'ResultTable':
        missing = [name for name in COLUMNS if name not in frame.columns]
        if missing:
            raise InvalidInstanceError(f'result table lacks columns {missing}')
        frame = frame.fillna('').astype(str)
        return cls(ResultRow.from_record(record) for record in frame.to_dict('records'))


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteInstance:
    id: str
    family: str
    instance: Instance
    adversary: Optional[AdversaryScript] = None
    error_level: Optional[Fraction] = None


@dataclass(frozen=True)
class SuiteJob:
    entry: SuiteInstance
    algorithm: str
    gamma: Optional[Fraction] = None
    seed: Optional[int] = None

    def key(self) -> Dict:
        entry = self.entry
        return {
            'instance': entry.id,
            'family': entry.family,
            'n': entry.instance.n,
            'algorithm': self.algorithm,
            'error_level': entry.error_level,
        }


@dataclass
class SuiteParams:
    gammas: Sequence = field(default_factory=lambda: list(METADATA['gammas']))
    seeds: Sequence[int] = (0,)
    backend: str = Config.VC_BACKEND
    brute_force_opt: bool = False
    workers: int = Config.NUM_WORKERS


SuiteEntry = Union[SuiteInstance, NamedFixture, Instance]


def as_suite_instance(entry: SuiteEntry, index: int = 0) -> SuiteInstance:
    if isinstance(entry, SuiteInstance):
        return entry
    if isinstance(entry, NamedFixture):
        return SuiteInstance(entry.name, entry.name, entry.instance, entry.adversary)
    if isinstance(entry, Instance):
        return SuiteInstance(f'instance-{index}', entry.kind.value, entry)
    raise TypeError(f'cannot run a suite over {type(entry).__name__}')


def expand_jobs(entries: Sequence[SuiteInstance], algorithms: Sequence[str], params: SuiteParams) -> List[SuiteJob]:
    unknown = [name for name in algorithms if name not in Config.ALGORITHMS]
    if unknown:
        raise ValueError(f'unknown algorithms {unknown}; choose from {Config.ALGORITHMS}')

    gammas = [to_rational(g) for g in params.gammas]
    jobs = []
    for entry in entries:
        for algorithm in algorithms:
            if algorithm == 'sorting' and entry.instance.kind is not Kind.SORTING:
                logger.debug(f'skip sorting on {entry.id}: not a sorting instance')
                continue
            if algorithm in DETERMINISTIC_GAMMA:
                jobs += [SuiteJob(entry, algorithm, g) for g in gammas if g.denominator == 1]
            elif algorithm in RANDOMIZED:
                jobs += [SuiteJob(entry, algorithm, g, seed) for g in gammas for seed in params.seeds]
            else:
                jobs.append(SuiteJob(entry, algorithm))
    return jobs


def _recompute_opt(job: SuiteJob, result: RunResult, source: Optional[WeightSource]) -> RunResult:
    realized = source.realize(job.entry.instance, None) if source is not None else job.entry.instance
    opt = min_feasible_size(realized)
    effective = result.gamma_drawn if result.gamma_drawn is not None else result.gamma
    return replace(result, opt_size=opt, bound_rhs=guarantee(result.algorithm, opt, result.errors, effective))


def _make_runner(params: SuiteParams):
    def run(job: SuiteJob) -> ResultRow:
        adversary = job.entry.adversary
        source = adversary.fresh() if adversary is not None else None
        result = run_algorithm(job.algorithm, job.entry.instance, job.gamma, job.seed, params.backend, source)
        if params.brute_force_opt:
            result = _recompute_opt(job, result, source)
        if result.guarantee_exact and not result.bound_ok:
            logger.error(f'bound violated: {result} on {job.entry.id}')
        return ResultRow.from_result(job, result)

    return run


def run_suite(
    instances: Iterable[SuiteEntry],
    algorithms: Sequence[str] = Config.ALGORITHMS,
    params: Optional[SuiteParams] = None,
) -> ResultTable:
    """
    Runs every (instance, algorithm, γ, seed) combination in a fresh session.

    Args:
        instances: Instances, fixtures or SuiteInstance entries
        algorithms: Algorithm names; `sorting` runs on sorting instances only
        params: γ values, seeds, vertex-cover backend, brute-force opt flag and thread count

    Returns:
        ResultTable in deterministic job order; failed runs appear as rows carrying the error
    """
    params = params or SuiteParams()
    entries = [as_suite_instance(entry, index) for index, entry in enumerate(instances)]
    jobs = expand_jobs(entries, algorithms, params)
    logger.info(f'running {len(jobs)} jobs over {len(entries)} instances')
    if not jobs:
        return ResultTable()

    outcomes = run_threads(jobs, _make_runner(params), workers=params.workers)
    rows = [
        ResultRow.failure(job, outcome) if isinstance(outcome, BaseException) else outcome
        for job, outcome in zip(jobs, outcomes)
    ]
    table = ResultTable(rows)
    logger.info(f'{table!r}: {len(table.violations)} bound violations')
    return table


# ---------------------------------------------------------------------------
# Bench configuration files
# ---------------------------------------------------------------------------


@dataclass
class BenchConfig:
    """
    A sweep description, read from JSON:

        {"algorithms": [...], "gammas": [2, 3], "seeds": [0], "brute_force_opt": false,
         "random": [{"family": "hypergraph", "n": 8, "edges": 5, "corruption": "flip",
                     "levels": [0, 0.25, 1.0], "count": 20, "seed": 0}],
         "fixtures": [{"name": "lb1", "beta": 3}, {"name": "fig4"}]}
    """

    algorithms: Tuple[str, ...] = Config.ALGORITHMS
    params: SuiteParams = field(default_factory=SuiteParams)
    random: List[Dict] = field(default_factory=list)
    fixtures: List[Dict] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: Dict) -> 'BenchConfig':
        params = SuiteParams(
            gammas=data.get('gammas', list(METADATA['gammas'])),
            seeds=data.get('seeds', [0]),
            backend=data.get('vc', Config.VC_BACKEND),
            brute_force_opt=bool(data.get('brute_force_opt', False)),
            workers=int(data.get('workers', Config.NUM_WORKERS)),
        )
        return cls(
            algorithms=tuple(data.get('algorithms', Config.ALGORITHMS)),
            params=params,
            random=list(data.get('random', [])),
            fixtures=list(data.get('fixtures', [])),
        )

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'BenchConfig':
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise InvalidInstanceError(f'bench config is not valid JSON: {exc}') from exc
        return cls.from_dict(data)

    def entries(self) -> List[SuiteInstance]:
        entries = []
        for sweep in self.random:
            sweep = dict(sweep)
            count = int(sweep.pop('count', 1))
            base_seed = int(sweep.pop('seed', 0))
            levels = sweep.pop('levels', [sweep.pop('level', 0.0)])
            for level in levels:
                for offset in range(count):
                    config = GeneratorConfig(seed=base_seed + offset, level=float(level), **sweep)
                    instance = gen_random(config)
                    name = f'{config.family}-n{config.n}-{config.corruption}{level}-s{config.seed}'
                    entries.append(SuiteInstance(name, config.family, instance, error_level=to_rational(level)))
        for fixture_entry in self.fixtures:
            fixture_entry = dict(fixture_entry)
            name = fixture_entry.pop('name')
            fixture = gen_named_fixture(name, **fixture_entry)
            label = name + ''.join(f'-{key}{value}' for key, value in sorted(fixture_entry.items()))
            entries.append(SuiteInstance(label, name, fixture.instance, fixture.adversary))
        return entries

    def run(self) -> ResultTable:
        return run_suite(self.entries(), self.algorithms, self.params)
