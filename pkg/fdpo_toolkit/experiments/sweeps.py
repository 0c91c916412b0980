"""
    Seeded Monte Carlo sweeps over the behavior policy's exploration, the dataset size
    and the many-armed bandit.

    Every (sweep value, trial) pair is one task with its own RNG streams derived from
    (master_seed, sweep_index, trial_index). Tasks may run in worker processes, the
    rows always come back in (sweep, trial, algorithm) order.
"""
import dataclasses
import enum
import itertools
import logging
from typing import List, Optional, Sequence

import numpy as np

from fdpo_toolkit import constants
from fdpo_toolkit.algorithms.data_classes import AlgorithmConfig, Family
from fdpo_toolkit.algorithms.families import run_algorithm
from fdpo_toolkit.dataset.collection import collect, collect_with_counts, stationary_data_distribution
from fdpo_toolkit.dataset.empirical import build_empirical_model
from fdpo_toolkit.exceptions import InvalidModelError
from fdpo_toolkit.experiments.environments import GridworldSpec, bandit_counts, bandit_mdp, generate_gridworld
from fdpo_toolkit.mdp.data_classes import TabularMdp, TabularPolicy
from fdpo_toolkit.mdp.evaluation import expected_return
from fdpo_toolkit.mdp.solvers import run_policy_iteration
from fdpo_toolkit.parallel import map_tasks
from fdpo_toolkit.rng import derive_seed
from fdpo_toolkit.uncertainty.data_classes import UncertaintyKind, UncertaintySpec


logger = logging.getLogger(__name__)

# Sub-stream indices below a trial seed:
MDP_STREAM = 0
DATA_STREAM = 1
FILL_STREAM = 2


class ExperimentKind(enum.Enum):
    EXPLORATION = 'exploration'
    SIZE = 'size'
    BANDIT = 'bandit'


DEFAULT_GRIDS = {
    ExperimentKind.EXPLORATION: constants.EPSILON_GRID,
    ExperimentKind.SIZE: constants.SIZE_GRID,
    # The bandit "sweeps" over how often the best arm was pulled:
    ExperimentKind.BANDIT: (constants.BANDIT_BEST_PULLS,),
}


def epsilon_greedy_behavior(optimal: TabularPolicy, epsilon: float) -> TabularPolicy:
    """
    (1 - epsilon) * optimal + epsilon * uniform, per state.

    >>> epsilon_greedy_behavior(TabularPolicy.deterministic([0], n_actions=4), 0.5).probs.tolist()
    [[0.625, 0.125, 0.125, 0.125]]
    """
    if not 0 <= epsilon <= 1:
        raise InvalidModelError(f'epsilon must be in [0, 1], got: {epsilon!r}')
    uniform = np.full(optimal.probs.shape, 1.0 / optimal.n_actions)
    return TabularPolicy(probs=(1.0 - epsilon) * optimal.probs + epsilon * uniform)


def default_algorithms(
    kind: ExperimentKind, delta: float = constants.DEFAULT_DELTA, alphas: Sequence[float] = (1.0,)
) -> tuple:
    """
    The gridworld sweeps compare all four families, the bandit only naive against UA.

    >>> [config.label for config in default_algorithms(ExperimentKind.SIZE, alphas=(1.0, 0.5))]
    ['imitation', 'naive', 'ua', 'ua@0.5', 'proximal', 'proximal@0.5']
    >>> [config.label for config in default_algorithms(ExperimentKind.BANDIT)]
    ['naive', 'ua']
    """
    uncertainty = UncertaintySpec(kind=UncertaintyKind.HOEFFDING_SA, delta=delta)
    ua = [AlgorithmConfig(Family.UA_PESSIMISTIC, alpha=alpha, uncertainty=uncertainty) for alpha in alphas]
    if kind is ExperimentKind.BANDIT:
        return (AlgorithmConfig(Family.NAIVE), *ua)
    proximal = [AlgorithmConfig(Family.PROXIMAL_PESSIMISTIC, alpha=alpha) for alpha in alphas]
    return (AlgorithmConfig(Family.IMITATION), AlgorithmConfig(Family.NAIVE), *ua, *proximal)


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything that determines the rows of one experiment run.
    Empty ``algorithms`` / ``grid`` are replaced by the defaults of the experiment kind.
    ``jobs`` never changes the result.
    """

    kind: ExperimentKind
    trials: int = 1
    master_seed: int = 0
    algorithms: tuple = ()
    grid: tuple = ()
    delta: float = constants.DEFAULT_DELTA
    jobs: int = constants.DEFAULT_JOBS
    dataset_size: int = constants.EXPLORATION_SWEEP_SIZE
    epsilon: float = constants.SIZE_SWEEP_EPSILON
    gridworld: GridworldSpec = GridworldSpec()
    stationary_horizon: int = constants.STATIONARY_HORIZON
    max_sweeps: int = constants.POLICY_ITERATION_MAX_SWEEPS

    def __post_init__(self):
        object.__setattr__(self, 'kind', ExperimentKind(self.kind))
        if not self.algorithms:
            object.__setattr__(self, 'algorithms', default_algorithms(self.kind, self.delta))
        if not self.grid:
            object.__setattr__(self, 'grid', DEFAULT_GRIDS[self.kind])
        object.__setattr__(self, 'algorithms', tuple(self.algorithms))
        object.__setattr__(self, 'grid', tuple(self.grid))

        if self.trials < 1:
            raise InvalidModelError(f'trials must be >= 1, got: {self.trials!r}')
        if self.jobs < 1:
            raise InvalidModelError(f'jobs must be >= 1, got: {self.jobs!r}')
        labels = [config.label for config in self.algorithms]
        if len(set(labels)) != len(labels):
            raise InvalidModelError(f'Algorithm labels must be unique, got: {labels!r}')
        if self.kind is ExperimentKind.EXPLORATION:
            if not all(0 <= value <= 1 for value in self.grid):
                raise InvalidModelError(f'Exploration grid values must be in [0, 1], got: {self.grid!r}')
        elif not all(value >= 1 and float(value).is_integer() for value in self.grid):
            raise InvalidModelError(f'{self.kind.value} grid values must be positive integers, got: {self.grid!r}')

    @property
    def n_rows(self) -> int:
        return len(self.algorithms) * len(self.grid) * self.trials


@dataclasses.dataclass(frozen=True)
class ResultRow:
    experiment: str
    trial: int
    seed: int
    algorithm: str
    sweep_value: float
    mean_return: float
    optimal_return: float
    suboptimality: float
    # Most likely action in the first state, only recorded for the bandit:
    chosen_action: Optional[int] = None


@dataclasses.dataclass(frozen=True)
class TrialTask:
    config: ExperimentConfig
    sweep_index: int
    sweep_value: float
    trial: int

    @property
    def seed(self) -> int:
        return derive_seed(self.config.master_seed, self.sweep_index, self.trial)

    def stream(self, index: int) -> int:
        return derive_seed(self.seed, index)


def _evaluate_algorithms(
    task: TrialTask, mdp: TabularMdp, empirical, optimal: float, record_action: bool = False
) -> List[ResultRow]:
    rows = []
    for algorithm in task.config.algorithms:
        policy = run_algorithm(algorithm, empirical)
        mean_return = expected_return(mdp, policy)
        rows.append(
            ResultRow(
                experiment=task.config.kind.value,
                trial=task.trial,
                seed=task.seed,
                algorithm=algorithm.label,
                sweep_value=float(task.sweep_value),
                mean_return=mean_return,
                optimal_return=optimal,
                suboptimality=optimal - mean_return,
                chosen_action=int(policy.actions[0]) if record_action else None,
            )
        )
    return rows


def _gridworld_trial(task: TrialTask, epsilon: float, dataset_size: int) -> List[ResultRow]:
    config = task.config
    mdp = generate_gridworld(task.stream(MDP_STREAM), config.gridworld)
    optimal = run_policy_iteration(mdp, max_sweeps=config.max_sweeps)
    behavior = epsilon_greedy_behavior(optimal.policy, epsilon)
    phi = stationary_data_distribution(mdp, behavior, horizon=config.stationary_horizon)
    dataset = collect(mdp, phi, dataset_size, seed=task.stream(DATA_STREAM))
    empirical = build_empirical_model(dataset, mdp, fill_seed=task.stream(FILL_STREAM))
    return _evaluate_algorithms(task, mdp, empirical, float(np.dot(mdp.start_dist, optimal.values)))


def _bandit_trial(task: TrialTask) -> List[ResultRow]:
    mdp = bandit_mdp()
    counts = bandit_counts(best_pulls=int(task.sweep_value))
    dataset = collect_with_counts(mdp, counts, seed=task.stream(DATA_STREAM))
    empirical = build_empirical_model(dataset, mdp, fill_seed=task.stream(FILL_STREAM))
    optimal = run_policy_iteration(mdp, max_sweeps=task.config.max_sweeps)
    optimal_return = float(np.dot(mdp.start_dist, optimal.values))
    return _evaluate_algorithms(task, mdp, empirical, optimal_return, record_action=True)


def run_trial(task: TrialTask) -> List[ResultRow]:
    config = task.config
    if config.kind is ExperimentKind.EXPLORATION:
        return _gridworld_trial(task, epsilon=task.sweep_value, dataset_size=config.dataset_size)
    if config.kind is ExperimentKind.SIZE:
        return _gridworld_trial(task, epsilon=config.epsilon, dataset_size=int(task.sweep_value))
    return _bandit_trial(task)


def _log_progress(config: ExperimentConfig, rows: List[ResultRow]) -> None:
    for sweep_value, group in itertools.groupby(rows, key=lambda row: row.sweep_value):
        group = list(group)
        means = {
            algorithm.label: np.mean([row.suboptimality for row in group if row.algorithm == algorithm.label])
            for algorithm in config.algorithms
        }
        logger.info(
            '%s sweep value %g: mean suboptimality %s',
            config.kind.value,
            sweep_value,
            ', '.join(f'{label}={mean:.4f}' for label, mean in means.items()),
        )


def run_experiment(config: ExperimentConfig) -> List[ResultRow]:
    tasks = [
        TrialTask(config=config, sweep_index=sweep_index, sweep_value=sweep_value, trial=trial)
        for sweep_index, sweep_value in enumerate(config.grid)
        for trial in range(config.trials)
    ]
    logger.debug('%s: %i tasks with %i jobs', config.kind.value, len(tasks), config.jobs)
    rows = list(itertools.chain.from_iterable(map_tasks(run_trial, tasks, jobs=config.jobs)))
    assert len(rows) == config.n_rows, f'{len(rows)} rows != {config.n_rows}'
    _log_progress(config, rows)
    return rows


def run_exploration_sweep(config: ExperimentConfig) -> List[ResultRow]:
    assert config.kind is ExperimentKind.EXPLORATION, f'Wrong experiment: {config.kind!r}'
    return run_experiment(config)


def run_size_sweep(config: ExperimentConfig) -> List[ResultRow]:
    assert config.kind is ExperimentKind.SIZE, f'Wrong experiment: {config.kind!r}'
    return run_experiment(config)


def run_bandit_demo(config: ExperimentConfig) -> List[ResultRow]:
    assert config.kind is ExperimentKind.BANDIT, f'Wrong experiment: {config.kind!r}'
    return run_experiment(config)


def best_arm_frequency(rows: Sequence[ResultRow], algorithm: str, best_action: int = 0) -> float:
    """
    Share of the bandit trials in which ``algorithm`` chose ``best_action``.
    """
    rows = [row for row in rows if row.algorithm == algorithm]
    if not rows:
        raise InvalidModelError(f'No rows for algorithm {algorithm!r}')
    if any(row.chosen_action is None for row in rows):
        raise InvalidModelError(f'Rows of {algorithm!r} have no chosen action')
    picks = [row.chosen_action == best_action for row in rows]
    return sum(picks) / len(picks)
