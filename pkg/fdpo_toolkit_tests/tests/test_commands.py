import io
import tempfile
from pathlib import Path
from unittest import mock

import numpy as np
from django.core.management import CommandError, call_command
from django.test import SimpleTestCase

from fdpo_toolkit.bounds.data_classes import VerificationResult
from fdpo_toolkit.bounds.verification import VERIFICATIONS
from fdpo_toolkit.dataset.collection import collect_with_counts
from fdpo_toolkit.dataset.csv_io import dump_dataset
from fdpo_toolkit.experiments.environments import GridworldSpec, generate_gridworld
from fdpo_toolkit.experiments.results import load_results
from fdpo_toolkit.mdp.serialization import load_mdp, load_policy, mdp_to_json


def run_command(*args, **kwargs) -> str:
    capture_stdout = io.StringIO()
    call_command(*args, stdout=capture_stdout, **kwargs)
    return capture_stdout.getvalue()


def failing_verification(trials: int = 1, seed: int = 0):
    return [VerificationResult(name='always_fails', trials=trials, successes=0)]


class GenMdpCommandTestCase(SimpleTestCase):
    def test_gridworld(self):
        with tempfile.TemporaryDirectory() as temp:
            path = Path(temp, 'mdp.json')
            output = run_command('gen_mdp', '--seed', '1', '--width', '3', '--height', '3', '--out', str(path))
            self.assertEqual(output, f'<TabularMdp 9 states x 4 actions, discount=0.99> written to {path}\n')
            expected = generate_gridworld(1, GridworldSpec(width=3, height=3))
            self.assertEqual(mdp_to_json(load_mdp(path)), mdp_to_json(expected))

    def test_bandit(self):
        with tempfile.TemporaryDirectory() as temp:
            path = Path(temp, 'bandit.json')
            run_command('gen_mdp', '--bandit', '--out', str(path))
            mdp = load_mdp(path)
            self.assertEqual(mdp.shape, (1, 1000))
            self.assertEqual(mdp.discount, 0.0)


class SolveCommandTestCase(SimpleTestCase):
    def test_solve(self):
        mdp = generate_gridworld(2, GridworldSpec(width=3, height=3))
        dataset = collect_with_counts(mdp, np.full((9, 4), 5), seed=0)
        with tempfile.TemporaryDirectory() as temp:
            temp = Path(temp)
            run_command('gen_mdp', '--seed', '2', '--width', '3', '--height', '3', '--out', str(temp / 'mdp.json'))
            dump_dataset(dataset, temp / 'data.csv')

            for family in ('imitation', 'naive', 'ua', 'proximal'):
                with self.subTest(family=family):
                    out = temp / f'{family}.json'
                    output = run_command(
                        'solve',
                        '--mdp',
                        str(temp / 'mdp.json'),
                        '--data',
                        str(temp / 'data.csv'),
                        '--family',
                        family,
                        '--out',
                        str(out),
                    )
                    self.assertIn(f'{family} on 180 records, policy written to {out}', output)
                    self.assertIn('Suboptimality .......: ', output)
                    self.assertEqual(load_policy(out).probs.shape, (9, 4))

    def test_invalid_dataset(self):
        with tempfile.TemporaryDirectory() as temp:
            temp = Path(temp)
            run_command('gen_mdp', '--width', '2', '--height', '2', '--out', str(temp / 'mdp.json'))
            (temp / 'data.csv').write_text('s,a,r,s2\n0,0,1,0\n')
            with self.assertRaisesMessage(CommandError, 'InvalidModelError: Dataset CSV header must be'):
                run_command(
                    'solve',
                    '--mdp',
                    str(temp / 'mdp.json'),
                    '--data',
                    str(temp / 'data.csv'),
                    '--family',
                    'naive',
                    '--out',
                    str(temp / 'policy.json'),
                )
            self.assertFalse((temp / 'policy.json').exists())


class ExperimentCommandTestCase(SimpleTestCase):
    def test_bandit(self):
        with tempfile.TemporaryDirectory() as temp:
            temp = Path(temp)
            with self.assertLogs('fdpo_toolkit', level='INFO'):
                output = run_command(
                    'experiment',
                    'bandit',
                    '--trials',
                    '2',
                    '--master-seed',
                    '3',
                    '--jobs',
                    '1',
                    '--out',
                    str(temp / 'results.csv'),
                    '--plot',
                    str(temp / 'plot.svg'),
                )
            self.assertIn(f'4 result rows written to {temp / "results.csv"}', output)
            self.assertIn(f'Plot written to {temp / "plot.svg"}', output)
            self.assertTrue((temp / 'plot.svg').is_file())

            rows = load_results(temp / 'results.csv')
            self.assertEqual([row.algorithm for row in rows], ['naive', 'ua', 'naive', 'ua'])
            self.assertEqual({row.experiment for row in rows}, {'bandit'})
            self.assertTrue(all(isinstance(row.chosen_action, int) for row in rows))

    def test_plot_needs_trials(self):
        with tempfile.TemporaryDirectory() as temp:
            temp = Path(temp)
            with self.assertLogs('fdpo_toolkit', level='INFO'):
                with self.assertRaisesMessage(CommandError, 'A plot needs at least 2 trials per sweep value'):
                    run_command(
                        'experiment',
                        'bandit',
                        '--trials',
                        '1',
                        '--jobs',
                        '1',
                        '--out',
                        str(temp / 'results.csv'),
                        '--plot',
                        str(temp / 'plot.svg'),
                    )
            self.assertFalse((temp / 'plot.svg').exists())


class VerifyCommandTestCase(SimpleTestCase):
    def test_proxy_regret(self):
        with self.assertLogs('fdpo_toolkit', level='INFO'):
            output = run_command('verify', 'proxy-regret', '--trials', '50', '--seed', '1')
        self.assertIn('proxy_regret_holds: 50/50 = 1.0000 (required >= 1.0000): passed', output)
        self.assertIn("Verification 'proxy-regret' passed (2 properties)", output)

    def test_bound_targets(self):
        for target, trials, properties in (
            ('theorem1', '20', 2),
            ('lemma3', '3', 3),
            ('theorem2', '3', 1),
            ('theorem3', '3', 3),
            ('theorem4', '3', 4),
        ):
            with self.subTest(target=target):
                with self.assertLogs('fdpo_toolkit', level='INFO') as logs:
                    output = run_command('verify', target, '--trials', trials, '--delta', '0.1', '--seed', '2')
                self.assertEqual(len(logs.records), properties)
                self.assertIn(f"Verification '{target}' passed ({properties} properties)", output)

    def test_unknown_target(self):
        with self.assertRaisesMessage(CommandError, "argument target: invalid choice: 'theorem5'"):
            run_command('verify', 'theorem5')

    def test_failure(self):
        with mock.patch.dict(VERIFICATIONS, {'identities': failing_verification}):
            with self.assertRaisesMessage(CommandError, "Verification 'identities' failed: always_fails"):
                run_command('verify', 'identities', '--trials', '3')
