import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
from dotenv import load_dotenv

from explorable import (
    FIXTURE_NAMES,
    BenchConfig,
    Config,
    ExplorableError,
    GeneratorConfig,
    Instance,
    ResultRow,
    ResultTable,
    SuiteInstance,
    SuiteJob,
    WeightSampleSet,
    emit,
    empirical_km,
    erm_mandatory_set,
    format_rational,
    gen_named_fixture,
    gen_random,
    gen_subdivision_reduction,
    logger,
    read_edge_list,
    run_algorithm,
    sample_weights,
    summarize,
    to_rational,
)

EXIT_OK, EXIT_BOUND_VIOLATED, EXIT_INPUT_ERROR = 0, 1, 2


def print_separator(char: str = '-', width: int = 80) -> None:
    print(char * width)


def parse_params(pairs: List[str]) -> Dict[str, int]:
    """Turns ['beta=3', 'a=4'] into {'beta': 3, 'a': 4}."""
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition('=')
        if not sep:
            raise ValueError(f'expected key=value, got <{pair}>')
        params[key.strip()] = int(value)
    return params


def read_mandatory_file(path: str) -> List[int]:
    data = json.loads(Path(path).read_text())
    return [int(v) for v in data['mandatory']]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.family in FIXTURE_NAMES:
        fixture = gen_named_fixture(args.family, **parse_params(args.param))
        instance = fixture.instance
        if fixture.is_adaptive:
            logger.info(f'{args.family} is adversary-driven; the saved weights are one committed realization')
    else:
        config = GeneratorConfig(
            family=args.family,
            n=args.n,
            edges=args.edges,
            max_edge_size=args.max_edge_size,
            corruption=args.corruption,
            level=args.level,
            seed=args.seed,
        )
        instance = gen_random(config)
    instance.save(args.out)
    print(f'{instance} written to {args.out}')
    return EXIT_OK


def _print_result(row: ResultRow):
    print_separator('=')
    print(f'{row.algorithm} on {row.instance}')
    print_separator('=')
    print(f'cost      {row.cost}')
    print(f'opt       {row.opt}')
    print(f'ratio     {format_rational(row.ratio)}')
    print(f'errors    k_num={row.k_num}  k_hop={row.k_hop}  k_mand={row.k_mand}')
    print(f'bound     {format_rational(row.bound_rhs)}  ok={row.bound_ok}')


def cmd_run(args) -> int:
    instance = Instance.from_file(args.instance)
    gamma = to_rational(args.gamma)
    predicted = read_mandatory_file(args.predicted_mandatory) if args.predicted_mandatory else None
    result = run_algorithm(args.algorithm, instance, gamma, args.seed, args.vc, predicted_mandatory=predicted)

    entry = SuiteInstance(Path(args.instance).stem, instance.kind.value, instance)
    row = ResultRow.from_result(SuiteJob(entry, args.algorithm, gamma, args.seed), result)
    _print_result(row)
    print(f'trace     {list(result.trace)}')
    if args.out:
        emit(ResultTable([row]), args.format, args.out)
    if args.assert_bounds and result.guarantee_exact and not result.bound_ok:
        return EXIT_BOUND_VIOLATED
    return EXIT_OK


def cmd_bench(args) -> int:
    bench = BenchConfig.from_file(args.config)
    if args.vc:
        bench.params.backend = args.vc
    if args.brute_force_opt:
        bench.params.brute_force_opt = True
    if args.seed is not None:
        bench.params.seeds = [args.seed]

    table = bench.run()
    emit(table, args.format, args.out)
    print(summarize(table).to_string(index=False))
    if table.failures:
        logger.warning(f'{len(table.failures)} runs failed; see the error column')
    if args.assert_bounds and table.violations:
        for row in table.violations:
            print(f'bound violated: {row}', file=sys.stderr)
        return EXIT_BOUND_VIOLATED
    return EXIT_OK


def cmd_reduce(args) -> int:
    with open(args.edges) as f:
        edges = read_edge_list(f)
    instance = gen_subdivision_reduction(edges, args.vertex_count)
    instance.save(args.out)
    print(f'{instance} written to {args.out}')
    return EXIT_OK


def cmd_sample(args) -> int:
    instance = Instance.from_file(args.instance)
    samples = sample_weights(instance, args.m, args.model, np.random.default_rng(args.seed))
    samples.save(args.out)
    print(f'{samples!r} written to {args.out}')
    return EXIT_OK


def cmd_learn(args) -> int:
    samples = WeightSampleSet.from_file(args.samples)
    predicted = erm_mandatory_set(samples)
    error = empirical_km(predicted, samples)
    payload = {'mandatory': sorted(predicted), 'empirical_km': format_rational(error), 'samples': len(samples)}
    Path(args.out).write_text(json.dumps(payload, indent=2) + '\n')
    print(f'P = {sorted(predicted)} (empirical k_M {format_rational(error)}) written to {args.out}')
    return EXIT_OK


COMMANDS = {
    'gen': cmd_gen,
    'run': cmd_run,
    'bench': cmd_bench,
    'reduce': cmd_reduce,
    'sample': cmd_sample,
    'learn': cmd_learn,
}


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    formatter = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        description='Query-minimizing algorithms for explorable uncertainty with predictions',
        formatter_class=formatter,
    )
    commands = parser.add_subparsers(dest='command', required=True)

    gen = commands.add_parser('gen', help='Generate an instance file', formatter_class=formatter)
    gen.add_argument('family', help=f'hypergraph | graph | sorting | {" | ".join(FIXTURE_NAMES)}')
    gen.add_argument('--param', action='append', default=[], help='Fixture parameter key=value (beta, n, copies, a, b)')
    gen.add_argument('--n', type=int, default=8, help='Number of vertices')
    gen.add_argument('--edges', type=int, default=5, help='Number of hyperedges')
    gen.add_argument('--max-edge-size', type=int, default=3, help='Largest hyperedge')
    gen.add_argument('--corruption', default='none', choices=('none', 'flip', 'adversarial'))
    gen.add_argument('--level', type=float, default=0.0, help='Fraction of corrupted vertices')
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--out', required=True, help='Instance file to write')

    run = commands.add_parser('run', help='Run one algorithm on an instance file', formatter_class=formatter)
    run.add_argument('instance', help='Instance file')
    run.add_argument('--algorithm', default='alg2', choices=Config.ALGORITHMS)
    run.add_argument('--gamma', default='2', help='Tradeoff parameter; fractional values (e.g. 2.5) for alg1r/alg2r only')
    run.add_argument('--seed', type=int, default=None, help='Seed of the randomized wrappers')
    run.add_argument(
        '--vc',
        default=Config.VC_BACKEND,
        choices=('exact', 'approx'),
        help='Vertex-cover backend; opt stays exact up to VC_EXACT_LIMIT, approx results carry no guarantee',
    )
    run.add_argument('--predicted-mandatory', default=None, help='Learned P file from `learn` (alg2 only)')
    run.add_argument('--format', default='csv', choices=('csv', 'plotdata'))
    run.add_argument('--out', default=None, help='Optional result file')
    run.add_argument('--assert-bounds', action='store_true', help='Exit 1 if the guarantee is violated')

    bench = commands.add_parser('bench', help='Run a sweep described by a JSON config', formatter_class=formatter)
    bench.add_argument('config', help='Bench config file')
    bench.add_argument('--vc', default=None, choices=('exact', 'approx'), help='Vertex-cover backend for every run')
    bench.add_argument('--seed', type=int, default=None, help='Single seed for the randomized wrappers')
    bench.add_argument('--brute-force-opt', action='store_true', help='Compute opt by subset enumeration')
    bench.add_argument('--format', default='csv', choices=('csv', 'plotdata'))
    bench.add_argument('--out', default=None, help='Result file (default: OUTPUT_DIR)')
    bench.add_argument('--assert-bounds', action='store_true', help='Exit 1 if any guarantee is violated')

    reduce = commands.add_parser('reduce', help='Vertex-cover reduction of an edge list', formatter_class=formatter)
    reduce.add_argument('edges', help='Edge-list file with one "u v" pair per line')
    reduce.add_argument('--vertex-count', type=int, default=None, help='Include isolated vertices up to this count')
    reduce.add_argument('--out', required=True, help='Instance file to write')

    sample = commands.add_parser('sample', help='Draw weight samples for an instance', formatter_class=formatter)
    sample.add_argument('instance', help='Instance file')
    sample.add_argument('--m', type=int, default=10, help='Number of samples')
    sample.add_argument('--model', default='uniform', choices=('uniform', 'point', 'two-point'))
    sample.add_argument('--seed', type=int, default=0)
    sample.add_argument('--out', required=True, help='Sample file to write')

    learn = commands.add_parser('learn', help='Learn a predicted mandatory set from samples', formatter_class=formatter)
    learn.add_argument('samples', help='Sample file')
    learn.add_argument('--out', required=True, help='P file to write')

    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    logger.info(f'command {args.command}')
    try:
        return COMMANDS[args.command](args)
    except (ExplorableError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f'Error: {exc}', file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == '__main__':
    load_dotenv()
    raise SystemExit(main())
