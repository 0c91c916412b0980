"""
    Dataset CSV files: header ``state,action,reward,next_state``, one record per line.
"""
import csv
from pathlib import Path

from bx_py_utils.path import assert_is_file

from fdpo_toolkit.dataset.data_classes import TransitionDataset
from fdpo_toolkit.exceptions import InvalidModelError
from fdpo_toolkit.json_utils import format_float


DATASET_HEADER = ('state', 'action', 'reward', 'next_state')


def dump_dataset(dataset: TransitionDataset, path: Path) -> None:
    with Path(path).open('w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(DATASET_HEADER)
        for state, action, reward, next_state in dataset.records:
            writer.writerow((state, action, format_float(reward), next_state))


def read_dataset(lines, n_states: int, n_actions: int) -> TransitionDataset:
    """
    Parse CSV lines, validating every record against the MDP shape.

    >>> read_dataset(['state,action,reward,next_state', '0,1,0.5,0'], n_states=1, n_actions=2).records
    [(0, 1, 0.5, 0)]
    """
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None or tuple(name.strip() for name in header) != DATASET_HEADER:
        raise InvalidModelError(f'Dataset CSV header must be {",".join(DATASET_HEADER)!r}, got: {header!r}')

    records = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(DATASET_HEADER):
            raise InvalidModelError(f'Line {line_no}: expected 4 columns, got: {row!r}')
        try:
            record = (int(row[0]), int(row[1]), float(row[2]), int(row[3]))
        except ValueError as err:
            raise InvalidModelError(f'Line {line_no}: {err}') from err
        records.append(record)

    return TransitionDataset.from_records(n_states, n_actions, records)


def load_dataset(path: Path, n_states: int, n_actions: int) -> TransitionDataset:
    path = Path(path)
    assert_is_file(path)
    with path.open(newline='') as f:
        return read_dataset(f, n_states=n_states, n_actions=n_actions)
