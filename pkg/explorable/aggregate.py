import os
from collections import defaultdict
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from .batch import ResultRow, ResultTable
from .config import Config, logger
from .results import bound_hop, bound_km, expected_bound_hop, expected_bound_km

FORMATS = ('csv', 'plotdata')
PLOT_COLUMNS = ('series', 'algorithm', 'gamma', 'error_level', 'runs', 'mean_ratio', 'bound_rhs')


def error_measure(row: ResultRow) -> int:
    """
    The error each algorithm's guarantee is stated in; 0 for prediction-free algorithms.

    Sorting is bounded by the smallest of k_#, k_h and k_M, so that minimum is its x-axis.
    """
    if row.algorithm in ('alg1', 'alg1r'):
        return row.k_hop
    if row.algorithm in ('alg2', 'alg2r'):
        return row.k_mand
    if row.algorithm == 'sorting':
        return min(row.k_num, row.k_hop, row.k_mand)
    return 0


def ratio_bound(algorithm: str, gamma: Optional[Fraction], x: Fraction) -> Fraction:
    """Guaranteed competitive ratio at relative error x = k/opt."""
    if algorithm == 'alg1':
        return bound_hop(1, x, gamma)
    if algorithm == 'alg1r':
        return expected_bound_hop(1, x, gamma)
    if algorithm == 'alg2':
        return bound_km(1, x, gamma)
    if algorithm == 'alg2r':
        return expected_bound_km(1, x, gamma)
    if algorithm == 'sorting':
        return min(1 + x, Fraction(2))
    if algorithm == 'witness':
        return Fraction(2)
    return Fraction(1)


def plot_data(table: ResultTable) -> pd.DataFrame:
    """
    Mean ratio per (algorithm, γ) series and relative error level.

    Args:
        table: Suite results; failed runs and pre-solved instances (opt 0) are left out

    Returns:
        DataFrame with PLOT_COLUMNS, series in first-seen order, rows ascending in error_level
    """
    groups = defaultdict(list)
    order = []
    for row in table:
        if row.failed or not row.opt:
            continue
        series = (row.algorithm, row.gamma)
        if series not in order:
            order.append(series)
        groups[series, Fraction(error_measure(row), row.opt)].append(row.ratio)

    records = []
    for algorithm, gamma in order:
        name = algorithm if gamma is None else f'{algorithm}@{gamma}'
        levels = sorted(x for (series, x) in groups if series == (algorithm, gamma))
        for x in levels:
            ratios = groups[(algorithm, gamma), x]
            records.append(
                {
                    'series': name,
                    'algorithm': algorithm,
                    'gamma': '' if gamma is None else str(gamma),
                    'error_level': round(float(x), Config.RATIO_DIGITS),
                    'runs': len(ratios),
                    'mean_ratio': round(float(sum(ratios) / len(ratios)), Config.RATIO_DIGITS),
                    'bound_rhs': round(float(ratio_bound(algorithm, gamma, x)), Config.RATIO_DIGITS),
                }
            )
    return pd.DataFrame(records, columns=list(PLOT_COLUMNS))


def emit(table: ResultTable, format: str = 'csv', path: Union[str, Path, None] = None) -> Path:
    """
    Writes a result table.

    Args:
        table: Suite results
        format: csv (one row per run) or plotdata (aggregated series)
        path: Target file; defaults to OUTPUT_DIR/results.<format>.csv

    Returns:
        The path written
    """
    if format not in FORMATS:
        raise ValueError(f'unknown format <{format}>; choose from {FORMATS}')
    if path is None:
        path = os.path.join(Config.OUTPUT_DIR, 'results.csv' if format == 'csv' else 'plotdata.csv')
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    frame = table.to_frame() if format == 'csv' else plot_data(table)
    frame.to_csv(path, index=False, lineterminator='\n')
    logger.info(f'exported {len(frame)} {format} rows to {path}')
    return path


def read_table(path: Union[str, Path]) -> ResultTable:
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    table = ResultTable.from_frame(frame)
    logger.debug(f'{table!r} read from {path}')
    return table


def summarize(table: ResultTable) -> pd.DataFrame:
    """Per-algorithm run count, mean and worst ratio, failures and bound violations."""
    summary = defaultdict(lambda: {'runs': 0, 'ratios': [], 'failed': 0, 'violations': 0})
    for row in table:
        entry = summary[row.algorithm]
        entry['runs'] += 1
        if row.failed:
            entry['failed'] += 1
            continue
        entry['ratios'].append(row.ratio)
        entry['violations'] += row.bound_ok is False

    records = [
        {
            'algorithm': algorithm,
            'runs': entry['runs'],
            'mean_ratio': round(float(sum(entry['ratios']) / len(entry['ratios'])), Config.RATIO_DIGITS)
            if entry['ratios']
            else None,
            'max_ratio': round(float(max(entry['ratios'])), Config.RATIO_DIGITS) if entry['ratios'] else None,
            'failed': entry['failed'],
            'violations': entry['violations'],
        }
        for algorithm, entry in summary.items()
    ]
    return pd.DataFrame(records)
