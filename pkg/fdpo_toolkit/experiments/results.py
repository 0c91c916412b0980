"""
    Result CSV files and their per (algorithm, sweep value) summary.
"""
import csv
import dataclasses
from pathlib import Path
from typing import Iterable, List, Sequence

import pandas as pd
from bx_py_utils.path import assert_is_file
from scipy import stats

from fdpo_toolkit.exceptions import InsufficientDataError, InvalidModelError
from fdpo_toolkit.experiments.sweeps import ResultRow
from fdpo_toolkit.json_utils import format_float


RESULT_HEADER = tuple(field.name for field in dataclasses.fields(ResultRow))
SUMMARY_COLUMNS = ('algorithm', 'sweep_value', 'mean', 'half_width', 'trials')


def format_row(row: ResultRow) -> tuple:
    return (
        row.experiment,
        row.trial,
        row.seed,
        row.algorithm,
        format_float(row.sweep_value),
        format_float(row.mean_return),
        format_float(row.optimal_return),
        format_float(row.suboptimality),
        '' if row.chosen_action is None else row.chosen_action,
    )


def write_results(rows: Iterable[ResultRow], path: Path) -> None:
    with Path(path).open('w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(RESULT_HEADER)
        writer.writerows(format_row(row) for row in rows)


def read_results(lines) -> List[ResultRow]:
    """
    >>> header = 'experiment,trial,seed,algorithm,sweep_value,mean_return,optimal_return,suboptimality,chosen_action'
    >>> rows = read_results([header, 'bandit,0,7,ua,10000,0.98999999999999999,0.98999999999999999,0,0'])
    >>> rows[0].algorithm, rows[0].sweep_value, rows[0].mean_return, rows[0].suboptimality, rows[0].chosen_action
    ('ua', 10000.0, 0.99, 0.0, 0)
    >>> read_results([header, 'size,1,7,naive,10,0.5,1,0.5,'])[0].chosen_action is None
    True
    """
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None or tuple(header) != RESULT_HEADER:
        raise InvalidModelError(f'Result CSV header must be {",".join(RESULT_HEADER)!r}, got: {header!r}')
    rows = []
    for line_no, values in enumerate(reader, start=2):
        if not values:
            continue
        if len(values) != len(RESULT_HEADER):
            raise InvalidModelError(f'Line {line_no}: expected {len(RESULT_HEADER)} columns, got: {values!r}')
        experiment, trial, seed, algorithm, *numbers, chosen_action = values
        try:
            rows.append(
                ResultRow(
                    experiment,
                    int(trial),
                    int(seed),
                    algorithm,
                    *(float(value) for value in numbers),
                    chosen_action=int(chosen_action) if chosen_action else None,
                )
            )
        except ValueError as err:
            raise InvalidModelError(f'Line {line_no}: {err}') from err
    return rows


def load_results(path: Path) -> List[ResultRow]:
    path = Path(path)
    assert_is_file(path)
    with path.open(newline='') as f:
        return read_results(f)


def results_frame(rows: Sequence[ResultRow]) -> pd.DataFrame:
    return pd.DataFrame([dataclasses.astuple(row) for row in rows], columns=list(RESULT_HEADER))


def summarize(rows: Sequence[ResultRow], confidence: float = 0.95, column: str = 'suboptimality') -> pd.DataFrame:
    """
    Mean and normal approximation confidence half-width z * std / sqrt(n) of ``column``
    per (algorithm, sweep value). ``std`` is the population standard deviation.
    Algorithms keep their first-seen order, sweep values are sorted.
    """
    if not 0 < confidence < 1:
        raise ValueError(f'confidence must be in (0, 1), got: {confidence!r}')
    if not rows:
        raise InsufficientDataError('No result rows to summarize')
    frame = results_frame(rows)
    if column not in frame.columns:
        raise ValueError(f'Unknown result column: {column!r}')

    z = stats.norm.ppf(0.5 + confidence / 2)
    grouped = frame.groupby(['algorithm', 'sweep_value'], sort=False)[column]
    summary = grouped.agg(
        mean='mean',
        half_width=lambda values: z * stats.sem(values, ddof=0),
        trials='count',
    ).reset_index()

    too_small = summary[summary['trials'] < 2]
    if not too_small.empty:
        cells = [
            (str(algorithm), float(value))
            for algorithm, value in zip(too_small['algorithm'], too_small['sweep_value'])
        ]
        raise InsufficientDataError(f'Need at least 2 trials per cell, got fewer for: {cells!r}')

    order = {algorithm: index for index, algorithm in enumerate(frame['algorithm'].unique())}
    summary = summary.sort_values(
        ['algorithm', 'sweep_value'], key=lambda series: series.map(order) if series.name == 'algorithm' else series
    )
    return summary.reset_index(drop=True)[list(SUMMARY_COLUMNS)]
