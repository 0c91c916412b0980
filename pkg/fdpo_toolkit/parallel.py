"""
    Order preserving map over independent trials.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List


logger = logging.getLogger(__name__)


def map_tasks(func: Callable, tasks: Iterable, jobs: int = 1, chunksize: int = 1) -> List:
    """
    Apply ``func`` to every task, in worker processes if jobs > 1.
    Results come back in task order, so the outcome does not depend on ``jobs``.

    >>> map_tasks(abs, [-1, 2, -3])
    [1, 2, 3]
    """
    tasks = list(tasks)
    if jobs < 1:
        raise ValueError(f'jobs must be >= 1, got: {jobs!r}')
    if jobs == 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]

    logger.debug('Run %i tasks in %i worker processes', len(tasks), jobs)
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(func, tasks, chunksize=chunksize))
