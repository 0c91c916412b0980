from pathlib import Path

from django.core.management.base import CommandError

from fdpo_toolkit.app_settings import (
    get_default_delta,
    get_default_jobs,
    get_epsilon_grid,
    get_size_grid,
    get_solver_limits,
)
from fdpo_toolkit.constants import EXPLORATION_SWEEP_SIZE, SIZE_SWEEP_EPSILON
from fdpo_toolkit.experiments.plot import emit_plot
from fdpo_toolkit.experiments.results import summarize, write_results
from fdpo_toolkit.experiments.sweeps import ExperimentConfig, ExperimentKind, default_algorithms, run_experiment
from fdpo_toolkit.management.base import FdpoBaseCommand


X_LABELS = {
    ExperimentKind.EXPLORATION: 'behavior epsilon',
    ExperimentKind.SIZE: 'dataset size',
    ExperimentKind.BANDIT: 'pulls of the best arm',
}


class Command(FdpoBaseCommand):
    """
    Manage command "experiment": Run a seeded sweep and write the result CSV (and plot)
    """

    help = 'Run the exploration, dataset size or bandit experiment'

    def add_arguments(self, parser):
        parser.add_argument('kind', choices=[kind.value for kind in ExperimentKind])
        parser.add_argument('--trials', type=int, default=10, help='Trials per sweep value (default: %(default)s)')
        parser.add_argument('--master-seed', type=int, default=0)
        parser.add_argument('--alphas', type=float, nargs='+', default=[1.0], help='Pessimism of ua and proximal')
        parser.add_argument('--delta', type=float, default=None, help='Failure probability (default: settings)')
        parser.add_argument('--jobs', type=int, default=None, help='Worker processes (default: settings)')
        parser.add_argument('--grid', type=float, nargs='+', default=None, help='Sweep values (default: settings)')
        parser.add_argument('--dataset-size', type=int, default=EXPLORATION_SWEEP_SIZE)
        parser.add_argument('--epsilon', type=float, default=SIZE_SWEEP_EPSILON, help='Behavior of the size sweep')
        parser.add_argument('--out', type=Path, required=True, help='Result CSV file to write')
        parser.add_argument('--plot', type=Path, default=None, help='Optional SVG plot of the mean suboptimality')

    def run(
        self, *, kind, trials, master_seed, alphas, delta, jobs, grid, dataset_size, epsilon, out, plot, **options
    ):
        kind = ExperimentKind(kind)
        if delta is None:
            delta = get_default_delta()
        if grid is None:
            grid = {ExperimentKind.EXPLORATION: get_epsilon_grid(), ExperimentKind.SIZE: get_size_grid()}.get(kind, ())
        limits = get_solver_limits()
        config = ExperimentConfig(
            kind=kind,
            trials=trials,
            master_seed=master_seed,
            algorithms=default_algorithms(kind, delta=delta, alphas=alphas),
            grid=tuple(grid),
            delta=delta,
            jobs=jobs or get_default_jobs(),
            dataset_size=dataset_size,
            epsilon=epsilon,
            stationary_horizon=limits.stationary_horizon,
            max_sweeps=limits.policy_iteration_max_sweeps,
        )

        rows = run_experiment(config)
        write_results(rows, out)
        self.stdout.write(f'{len(rows)} result rows written to {out}')

        if config.trials >= 2:
            summary = summarize(rows)
            self.stdout.write(summary.to_string(index=False))
            if plot:
                emit_plot(summary, plot, xlabel=X_LABELS[kind])
                self.stdout.write(f'Plot written to {plot}')
        elif plot:
            raise CommandError('A plot needs at least 2 trials per sweep value')
