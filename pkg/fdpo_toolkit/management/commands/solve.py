from pathlib import Path

from fdpo_toolkit.algorithms.data_classes import FAMILY_SHORT_NAMES, AlgorithmConfig, Family
from fdpo_toolkit.algorithms.families import penalized_return, run_algorithm
from fdpo_toolkit.app_settings import get_default_delta
from fdpo_toolkit.dataset.csv_io import load_dataset
from fdpo_toolkit.dataset.empirical import build_empirical_model
from fdpo_toolkit.management.base import FdpoBaseCommand
from fdpo_toolkit.mdp.evaluation import expected_return
from fdpo_toolkit.mdp.serialization import dump_policy, load_mdp
from fdpo_toolkit.mdp.solvers import suboptimality
from fdpo_toolkit.uncertainty.data_classes import UncertaintyKind, UncertaintySpec


class Command(FdpoBaseCommand):
    """
    Manage command "solve": Run one FDPO algorithm on a dataset and write the policy
    """

    help = 'Run one FDPO algorithm family on a dataset CSV and write the policy as JSON'

    def add_arguments(self, parser):
        parser.add_argument('--mdp', type=Path, required=True, help='MDP JSON (shape, discount and start states)')
        parser.add_argument('--data', type=Path, required=True, help='Dataset CSV')
        parser.add_argument('--family', choices=sorted(FAMILY_SHORT_NAMES.values()), required=True)
        parser.add_argument('--alpha', type=float, default=1.0, help='Pessimism (default: %(default)s)')
        parser.add_argument('--delta', type=float, default=None, help='Failure probability (default: settings)')
        parser.add_argument(
            '--uncertainty',
            choices=[UncertaintyKind.TRIVIAL.value, UncertaintyKind.HOEFFDING_SA.value],
            default=UncertaintyKind.HOEFFDING_SA.value,
            help='Bellman uncertainty of the "ua" family (default: %(default)s)',
        )
        parser.add_argument('--fill-seed', type=int, default=0, help='Seed for rewards of unseen state-actions')
        parser.add_argument('--out', type=Path, required=True, help='Policy JSON file to write')

    def run(self, *, mdp, data, family, alpha, delta, uncertainty, fill_seed, out, **options):
        true_mdp = load_mdp(mdp)
        dataset = load_dataset(data, n_states=true_mdp.n_states, n_actions=true_mdp.n_actions)
        empirical = build_empirical_model(dataset, true_mdp, fill_seed=fill_seed)

        if delta is None:
            delta = get_default_delta()
        config = AlgorithmConfig.from_settings(
            Family.parse(family), alpha=alpha, uncertainty=UncertaintySpec(kind=uncertainty, delta=delta)
        )
        policy = run_algorithm(config, empirical)
        estimate = penalized_return(config, empirical, policy)
        dump_policy(policy, out, algorithm=config.to_dict(), dataset_size=len(dataset), estimate=estimate)

        self.stdout.write(f'{config.label} on {len(dataset)} records, policy written to {out}')
        self.stdout.write(f'Estimated return ....: {estimate:.6f}')
        self.stdout.write(f'Return in the MDP ...: {expected_return(true_mdp, policy):.6f}')
        self.stdout.write(f'Suboptimality .......: {suboptimality(true_mdp, policy):.6f}')
