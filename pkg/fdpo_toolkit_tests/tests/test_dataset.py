import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose, assert_array_equal

from fdpo_toolkit.dataset.collection import collect, collect_with_counts, stationary_data_distribution
from fdpo_toolkit.dataset.csv_io import dump_dataset, load_dataset, read_dataset
from fdpo_toolkit.dataset.data_classes import DataDistribution, TransitionDataset
from fdpo_toolkit.dataset.empirical import build_empirical_model
from fdpo_toolkit.exceptions import InvalidModelError
from fdpo_toolkit.mdp.data_classes import TabularMdp, TabularPolicy
from fdpo_toolkit.mdp.generators import random_mdp
from fdpo_toolkit.rng import make_rng
from fdpo_toolkit_tests.tests import two_state_mdp


class CollectionTestCase(SimpleTestCase):
    def test_deterministic(self):
        mdp = random_mdp(3, 2, 0.9, make_rng(0))
        phi = DataDistribution.uniform(3, 2)
        first = collect(mdp, phi, 50, seed=123)
        self.assertEqual(len(first), 50)
        self.assertEqual(first.records, collect(mdp, phi, 50, seed=123).records)
        self.assertNotEqual(first.records, collect(mdp, phi, 50, seed=124).records)

    def test_point_mass(self):
        mdp = random_mdp(3, 2, 0.9, make_rng(1))
        dataset = collect(mdp, DataDistribution.point_mass(3, 2, state=2, action=1), 20, seed=0)
        assert_array_equal(dataset.states, np.full(20, 2))
        assert_array_equal(dataset.actions, np.ones(20))
        self.assertEqual(dataset.counts.tolist(), [[0, 0], [0, 0], [0, 20]])
        self.assertEqual(dataset.state_counts.tolist(), [0, 0, 20])

    def test_rewards(self):
        bernoulli = random_mdp(2, 2, 0.9, make_rng(2))
        dataset = collect(bernoulli, DataDistribution.uniform(2, 2), 200, seed=0)
        self.assertEqual(set(dataset.rewards.tolist()), {0.0, 1.0})

        deterministic = two_state_mdp()
        dataset = collect(deterministic, DataDistribution.uniform(2, 2), 200, seed=0)
        assert_array_equal(dataset.rewards, deterministic.mean_reward[dataset.states, dataset.actions])

    def test_next_states_follow_the_model(self):
        mdp = two_state_mdp()
        dataset = collect(mdp, DataDistribution.uniform(2, 2), 100, seed=5)
        for state, action, reward, next_state in dataset.records:
            self.assertEqual(mdp.transition[state, action, next_state], 1.0)

    def test_empty(self):
        dataset = collect(two_state_mdp(), DataDistribution.uniform(2, 2), 0, seed=0)
        self.assertEqual(len(dataset), 0)
        self.assertEqual(repr(dataset), '<TransitionDataset 0 records, 2 states x 2 actions>')

    def test_collect_with_counts(self):
        mdp = random_mdp(2, 3, 0.9, make_rng(3))
        counts = np.array([[2, 0, 1], [0, 4, 0]])
        dataset = collect_with_counts(mdp, counts, seed=1)
        assert_array_equal(dataset.counts, counts)

        with self.assertRaisesMessage(InvalidModelError, 'Counts must not be negative'):
            collect_with_counts(mdp, np.array([[1, -1, 0], [0, 0, 0]]), seed=1)
        with self.assertRaisesMessage(InvalidModelError, 'Counts shape (1, 3) != MDP shape (2, 3)'):
            collect_with_counts(mdp, np.array([[1, 1, 0]]), seed=1)

    def test_invalid(self):
        mdp = two_state_mdp()
        with self.assertRaisesMessage(InvalidModelError, 'Data distribution shape (1, 2) != MDP shape (2, 2)'):
            collect(mdp, DataDistribution.uniform(1, 2), 10, seed=0)
        with self.assertRaisesMessage(InvalidModelError, 'data distribution rows must sum to 1'):
            DataDistribution(probs=[[0.5, 0.0], [0.0, 0.0]])
        with self.assertRaisesMessage(InvalidModelError, 'Dataset actions out of range [0, 2)'):
            TransitionDataset.from_records(2, 2, [(0, 2, 0.0, 0)])
        with self.assertRaisesMessage(InvalidModelError, 'Dataset rewards must be within [0, 1]'):
            TransitionDataset.from_records(2, 2, [(0, 0, 1.5, 0)])


class StationaryDistributionTestCase(SimpleTestCase):
    def test_absorbing_chain(self):
        mdp = two_state_mdp()
        leave = TabularPolicy.deterministic([1, 0], n_actions=2)
        phi = stationary_data_distribution(mdp, leave, horizon=4)
        assert_allclose(phi.probs, [[0.0, 0.25], [0.75, 0.0]])

    def test_periodic_chain(self):
        swap = TabularMdp(
            mean_reward=[[0.0], [1.0]],
            transition=[[[0.0, 1.0]], [[1.0, 0.0]]],
            discount=0.9,
            start_dist=[1.0, 0.0],
        )
        phi = stationary_data_distribution(swap, TabularPolicy.uniform(2, 1), horizon=200)
        assert_allclose(phi.probs, [[0.5], [0.5]])

    def test_mixes_behavior(self):
        mdp = random_mdp(4, 3, 0.9, make_rng(4))
        behavior = TabularPolicy(probs=make_rng(5).dirichlet(np.ones(3), size=4))
        phi = stationary_data_distribution(mdp, behavior)
        self.assertAlmostEqual(phi.probs.sum(), 1.0, delta=1e-12)
        state_dist = phi.probs.sum(axis=1)
        assert_allclose(phi.probs, state_dist[:, None] * behavior.probs)

        with self.assertRaisesMessage(ValueError, 'horizon must be >= 1, got: 0'):
            stationary_data_distribution(mdp, behavior, horizon=0)


class EmpiricalModelTestCase(SimpleTestCase):
    def test_estimates(self):
        mdp = two_state_mdp()
        dataset = TransitionDataset.from_records(2, 2, [(0, 0, 1.0, 1), (0, 0, 0.0, 0), (0, 1, 1.0, 0)])
        empirical = build_empirical_model(dataset, mdp, fill_seed=0)

        self.assertEqual(empirical.counts.tolist(), [[2, 1], [0, 0]])
        self.assertEqual(empirical.reward[0].tolist(), [0.5, 1.0])
        self.assertEqual(empirical.transition[0].tolist(), [[0.5, 0.5], [1.0, 0.0]])
        assert_allclose(empirical.empirical_policy.probs, [[2 / 3, 1 / 3], [0.5, 0.5]])
        assert_allclose(empirical.transition[1], [[0.5, 0.5], [0.5, 0.5]])
        self.assertEqual(empirical.discount, mdp.discount)
        assert_array_equal(empirical.start_dist, mdp.start_dist)
        self.assertEqual(repr(empirical), '<EmpiricalModel 2 states x 2 actions, 3 records>')

        as_mdp = empirical.as_mdp()
        assert_array_equal(as_mdp.mean_reward, empirical.reward)

    def test_fill_values(self):
        mdp = random_mdp(3, 2, 0.9, make_rng(6))
        empty = build_empirical_model(TransitionDataset.empty(3, 2), mdp, fill_seed=9)
        assert_array_equal(empty.counts, np.zeros((3, 2)))
        assert_allclose(empty.transition, np.full((3, 2, 3), 1 / 3))
        assert_allclose(empty.empirical_policy.probs, np.full((3, 2), 0.5))
        self.assertTrue(np.all((empty.reward >= 0) & (empty.reward <= 1)))

        # The fill value of a cell does not depend on other cells:
        partial = build_empirical_model(TransitionDataset.from_records(3, 2, [(0, 0, 1.0, 2)]), mdp, fill_seed=9)
        assert_array_equal(partial.reward[1:], empty.reward[1:])
        self.assertEqual(partial.reward[0, 1], empty.reward[0, 1])

        other = build_empirical_model(TransitionDataset.empty(3, 2), mdp, fill_seed=10)
        self.assertFalse(np.array_equal(other.reward, empty.reward))

    def test_converges_to_the_model(self):
        mdp = random_mdp(2, 2, 0.9, make_rng(7))
        dataset = collect(mdp, DataDistribution.uniform(2, 2), 20_000, seed=8)
        empirical = build_empirical_model(dataset, mdp, fill_seed=0)
        assert_allclose(empirical.reward, mdp.mean_reward, rtol=0, atol=0.05)
        assert_allclose(empirical.transition, mdp.transition, rtol=0, atol=0.05)
        assert_allclose(empirical.empirical_policy.probs, np.full((2, 2), 0.5), rtol=0, atol=0.05)

    def test_consistency_over_dataset_sizes(self):
        mdp = random_mdp(3, 2, 0.9, make_rng(11))
        phi = DataDistribution.uniform(3, 2)
        sizes = (100, 1000, 10_000, 100_000)
        reward_errors = np.zeros((5, len(sizes)))
        transition_errors = np.zeros((5, len(sizes)))
        for seed in range(5):
            for index, size in enumerate(sizes):
                empirical = build_empirical_model(collect(mdp, phi, size, seed=seed), mdp, fill_seed=seed)
                reward_errors[seed, index] = np.abs(empirical.reward - mdp.mean_reward).max()
                transition_errors[seed, index] = 0.5 * np.abs(empirical.transition - mdp.transition).sum(axis=2).max()

        for errors in (reward_errors, transition_errors):
            means = errors.mean(axis=0)
            self.assertTrue(np.all(np.diff(means) < 0), means)
            self.assertTrue(np.all(errors[:, -1] < 0.05), errors[:, -1])

    def test_shape_mismatch(self):
        with self.assertRaisesMessage(InvalidModelError, 'Dataset shape (3, 2) != MDP shape (2, 2)'):
            build_empirical_model(TransitionDataset.empty(3, 2), two_state_mdp(), fill_seed=0)


class CsvTestCase(SimpleTestCase):
    def test_file_round_trip(self):
        dataset = collect(random_mdp(3, 2, 0.9, make_rng(0)), DataDistribution.uniform(3, 2), 25, seed=1)
        with tempfile.TemporaryDirectory() as temp:
            path = Path(temp, 'data.csv')
            dump_dataset(dataset, path)
            lines = path.read_text().splitlines()
            self.assertEqual(lines[0], 'state,action,reward,next_state')
            self.assertEqual(len(lines), 26)
            self.assertEqual(load_dataset(path, n_states=3, n_actions=2).records, dataset.records)

    def test_invalid_files(self):
        message = "Dataset CSV header must be 'state,action,reward,next_state'"
        with self.assertRaisesMessage(InvalidModelError, message):
            read_dataset(['s,a,r,t', '0,0,1,0'], n_states=1, n_actions=1)
        with self.assertRaisesMessage(InvalidModelError, "Line 2: expected 4 columns, got: ['0', '0', '1']"):
            read_dataset(['state,action,reward,next_state', '0,0,1'], n_states=1, n_actions=1)
        with self.assertRaisesMessage(InvalidModelError, 'Dataset next states out of range [0, 1)'):
            read_dataset(['state,action,reward,next_state', '0,0,1,1'], n_states=1, n_actions=1)
        with self.assertRaisesMessage(InvalidModelError, 'Line 3:'):
            read_dataset(['state,action,reward,next_state', '0,0,1,0', '0,x,1,0'], n_states=1, n_actions=1)
