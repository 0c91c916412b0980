import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose, assert_array_equal

from fdpo_toolkit.exceptions import InstanceTooLargeError, InvalidModelError, NonConvergenceError
from fdpo_toolkit.mdp.data_classes import QVector, RewardKind, TabularMdp, TabularPolicy, ValueVector
from fdpo_toolkit.mdp.evaluation import (
    bellman_backup,
    bellman_residual,
    discounted_visitation,
    exact_policy_evaluation,
    expected_return,
    iterative_policy_evaluation,
    policy_q_values,
)
from fdpo_toolkit.mdp.generators import random_mdp, random_policy
from fdpo_toolkit.mdp.serialization import (
    dump_mdp,
    dump_policy,
    load_mdp,
    load_policy,
    mdp_from_json,
    mdp_to_json,
)
from fdpo_toolkit.mdp.solvers import (
    brute_force_optimal,
    optimal_return,
    policy_iteration,
    run_policy_iteration,
    suboptimality,
    value_iteration,
)
from fdpo_toolkit.rng import make_rng
from fdpo_toolkit_tests.tests import two_state_mdp


def misleading_reward_mdp() -> TabularMdp:
    """
    Action 0 in state 0 pays 0.6 and stays, action 1 pays nothing but leads to
    the absorbing state 1 with reward 1. The greedy start policy is wrong.
    """
    return TabularMdp(
        mean_reward=[[0.6, 0.0], [1.0, 1.0]],
        transition=[[[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [0.0, 1.0]]],
        discount=0.9,
        start_dist=[1.0, 0.0],
    )


class TabularMdpTestCase(SimpleTestCase):
    def test_validation(self):
        mdp = two_state_mdp()
        self.assertEqual(mdp.shape, (2, 2))
        self.assertEqual(mdp.value_cap, 2.0)
        assert_array_equal(mdp.bernoulli_mask, [[False, False], [False, False]])
        self.assertFalse(mdp.transition.flags.writeable)
        self.assertEqual(repr(mdp), '<TabularMdp 2 states x 2 actions, discount=0.5>')

        with self.assertRaisesMessage(InvalidModelError, 'transition rows must sum to 1'):
            mdp.replace(transition=[[[1.0, 0.0], [0.5, 0.4]], [[0.0, 1.0], [0.0, 1.0]]])
        with self.assertRaisesMessage(InvalidModelError, 'start_dist rows must sum to 1'):
            mdp.replace(start_dist=[0.5, 0.4])
        with self.assertRaisesMessage(InvalidModelError, 'mean_reward entries must be within [0, 1]'):
            mdp.replace(mean_reward=[[1.5, 0.0], [0.5, 0.5]])
        with self.assertRaisesMessage(InvalidModelError, 'discount must be in [0, 1), got: 1.0'):
            mdp.replace(discount=1.0)
        with self.assertRaisesMessage(InvalidModelError, 'transition has negative entries'):
            mdp.replace(transition=[[[1.5, -0.5], [0.0, 1.0]], [[0.0, 1.0], [0.0, 1.0]]])

    def test_reward_kind(self):
        mdp = TabularMdp(
            mean_reward=[[0.5, 0.5]],
            transition=[[[1.0], [1.0]]],
            discount=0.0,
            start_dist=[1.0],
            reward_kind=['bernoulli', 'deterministic'],
        )
        self.assertEqual(mdp.reward_kind.tolist(), [[RewardKind.BERNOULLI, RewardKind.DETERMINISTIC]])
        assert_array_equal(mdp.bernoulli_mask, [[True, False]])

        with self.assertRaisesMessage(InvalidModelError, 'reward_kind needs 2 entries, got 3'):
            mdp.replace(reward_kind=['bernoulli'] * 3)

    def test_policy(self):
        policy = TabularPolicy(probs=[[0.25, 0.75], [1.0, 0.0]])
        self.assertFalse(policy.is_deterministic)
        assert_array_equal(policy.actions, [1, 0])
        self.assertEqual(repr(policy), '<TabularPolicy stochastic 2 states x 2 actions>')
        self.assertTrue(TabularPolicy.uniform(2, 2).allclose(TabularPolicy(probs=[[0.5, 0.5], [0.5, 0.5]])))

        with self.assertRaisesMessage(InvalidModelError, 'policy rows must sum to 1'):
            TabularPolicy(probs=[[0.5, 0.6]])
        with self.assertRaisesMessage(InvalidModelError, 'Actions out of range [0, 2)'):
            TabularPolicy.deterministic([2], n_actions=2)

    def test_activity_matrix(self):
        policy = TabularPolicy(probs=random_policy(4, 3, make_rng(1)))
        activity = policy.activity_matrix()
        self.assertEqual(activity.shape, (4, 12))
        assert_allclose(activity.sum(axis=1), np.ones(4))
        for state in range(4):
            outside = np.delete(activity[state], np.s_[state * 3:(state + 1) * 3])
            assert_array_equal(outside, np.zeros(9))


class EvaluationTestCase(SimpleTestCase):
    def test_discount_zero(self):
        mdp = random_mdp(3, 2, 0.0, make_rng(0))
        policy = TabularPolicy(probs=random_policy(3, 2, make_rng(1)))
        values = exact_policy_evaluation(mdp, policy).values
        assert_allclose(values, np.sum(policy.probs * mdp.mean_reward, axis=1), rtol=0, atol=1e-15)

    def test_geometric_series(self):
        mdp = TabularMdp(mean_reward=[[1.0]], transition=[[[1.0]]], discount=0.5, start_dist=[1.0])
        values = exact_policy_evaluation(mdp, TabularPolicy(probs=[[1.0]]))
        self.assertEqual(values.values.tolist(), [2.0])
        self.assertFalse(values.penalized)

    def test_two_state_values(self):
        mdp = two_state_mdp()
        stay = TabularPolicy.deterministic([0, 0], n_actions=2)
        leave = TabularPolicy.deterministic([1, 0], n_actions=2)
        assert_allclose(exact_policy_evaluation(mdp, stay).values, [2.0, 1.0])
        assert_allclose(exact_policy_evaluation(mdp, leave).values, [0.5, 1.0])
        self.assertAlmostEqual(expected_return(mdp, leave), 0.5)

    def test_matches_iterative_evaluation(self):
        for seed in range(3):
            rng = make_rng(seed)
            mdp = random_mdp(5, 3, 0.9, rng)
            policy = TabularPolicy(probs=random_policy(5, 3, rng))
            exact = exact_policy_evaluation(mdp, policy).values
            iterative = iterative_policy_evaluation(mdp, policy, n_steps=10_000).values
            assert_allclose(exact, iterative, rtol=0, atol=1e-8)
            self.assertTrue(np.all(exact >= 0))
            self.assertTrue(np.all(exact <= mdp.value_cap))

    def test_bellman_backup(self):
        rng = make_rng(7)
        mdp = random_mdp(4, 3, 0.8, rng)
        policy = TabularPolicy(probs=random_policy(4, 3, rng))

        values = exact_policy_evaluation(mdp, policy)
        assert_allclose(bellman_backup(mdp, policy, values).values, values.values, rtol=0, atol=1e-10)
        self.assertLessEqual(bellman_residual(mdp, policy, values), 1e-10)

        zero = bellman_backup(mdp, policy, ValueVector(values=np.zeros(4)))
        assert_allclose(zero.values, np.sum(policy.probs * mdp.mean_reward, axis=1))

        # Dense matrix oracle: A^pi (r + gamma P v) with P as [(s,a) x s'] matrix
        v = rng.uniform(0, mdp.value_cap, size=4)
        dense_transition = mdp.transition.reshape(12, 4)
        expected = policy.activity_matrix() @ (mdp.mean_reward.ravel() + mdp.discount * dense_transition @ v)
        assert_allclose(bellman_backup(mdp, policy, ValueVector(values=v)).values, expected)

    def test_q_values(self):
        rng = make_rng(3)
        mdp = random_mdp(4, 2, 0.9, rng)
        policy = TabularPolicy(probs=random_policy(4, 2, rng))
        q = policy_q_values(mdp, policy)
        self.assertIsInstance(q, QVector)
        assert_allclose(q.state_values(policy).values, exact_policy_evaluation(mdp, policy).values)

    def test_discounted_visitation(self):
        mdp = random_mdp(3, 2, 0.0, make_rng(0))
        policy = TabularPolicy.uniform(3, 2)
        assert_allclose(discounted_visitation(mdp, policy), np.eye(3), rtol=0, atol=1e-15)

        one_state = TabularMdp(mean_reward=[[0.5]], transition=[[[1.0]]], discount=0.99, start_dist=[1.0])
        assert_allclose(discounted_visitation(one_state, TabularPolicy(probs=[[1.0]])), [[100.0]], rtol=1e-12)

        rng = make_rng(11)
        mdp = random_mdp(5, 3, 0.95, rng)
        policy = TabularPolicy(probs=random_policy(5, 3, rng))
        visitation = discounted_visitation(mdp, policy)
        assert_allclose(visitation.sum(axis=1), np.full(5, 20.0), rtol=0, atol=1e-9)
        system = np.eye(5) - mdp.discount * np.einsum('sa,sat->st', policy.probs, mdp.transition)
        assert_allclose(visitation @ system, np.eye(5), rtol=0, atol=1e-9)


class SolversTestCase(SimpleTestCase):
    def test_policy_iteration_matches_brute_force(self):
        for seed in range(5):
            mdp = random_mdp(3, 3, 0.9, make_rng(seed))
            policy = policy_iteration(mdp)
            self.assertTrue(policy.is_deterministic)
            best_policy, best_value = brute_force_optimal(mdp)
            self.assertAlmostEqual(expected_return(mdp, policy), best_value, delta=1e-9)
            self.assertAlmostEqual(optimal_return(mdp), best_value, delta=1e-9)

    def test_monotone_improvement(self):
        mdp = random_mdp(6, 4, 0.95, make_rng(42))
        result = run_policy_iteration(mdp)
        for previous, current in zip(result.value_history, result.value_history[1:]):
            self.assertTrue(np.all(current >= previous - 1e-10))

        # Every greedy action is optimal in its own values:
        q = policy_q_values(mdp, result.policy).values
        assert_allclose(q.max(axis=1), result.values, rtol=0, atol=1e-10)

    def test_value_iteration(self):
        mdp = random_mdp(4, 3, 0.9, make_rng(5))
        policy, values = value_iteration(mdp, tol=1e-12)
        assert_allclose(values.values, run_policy_iteration(mdp).values, rtol=0, atol=1e-9)
        self.assertAlmostEqual(expected_return(mdp, policy), optimal_return(mdp), delta=1e-9)

        with self.assertRaisesMessage(NonConvergenceError, 'Value iteration did not converge within 3 backups'):
            value_iteration(mdp, max_backups=3)

    def test_greedy_start_is_improved(self):
        mdp = misleading_reward_mdp()
        result = run_policy_iteration(mdp)
        self.assertEqual(result.sweeps, 2)
        assert_array_equal(result.policy.actions, [1, 0])
        assert_allclose(result.values, [9.0, 10.0])

        with self.assertRaisesMessage(NonConvergenceError, 'Policy iteration did not converge within 1 sweeps'):
            run_policy_iteration(mdp, max_sweeps=1)

    def test_ties_go_to_lowest_action(self):
        mdp = two_state_mdp()
        policy = policy_iteration(mdp)
        assert_array_equal(policy.probs, [[1.0, 0.0], [1.0, 0.0]])

    def test_suboptimality(self):
        bandit = TabularMdp(mean_reward=[[0.9, 0.1]], transition=[[[1.0], [1.0]]], discount=0.0, start_dist=[1.0])
        second_arm = TabularPolicy.deterministic([1], n_actions=2)
        self.assertAlmostEqual(suboptimality(bandit, second_arm), 0.8, delta=1e-12)
        self.assertAlmostEqual(suboptimality(bandit, policy_iteration(bandit)), 0.0, delta=1e-12)

    def test_enumeration_limit(self):
        mdp = random_mdp(4, 3, 0.9, make_rng(0))
        with self.assertRaisesMessage(InstanceTooLargeError, '3^4 = 81 deterministic policies exceed the limit of 80'):
            brute_force_optimal(mdp, enumeration_limit=80)


class SerializationTestCase(SimpleTestCase):
    def test_mdp_json(self):
        mdp = random_mdp(3, 2, 0.9, make_rng(0))
        restored = mdp_from_json(mdp_to_json(mdp))
        assert_array_equal(restored.mean_reward, mdp.mean_reward)
        assert_array_equal(restored.transition, mdp.transition)
        assert_array_equal(restored.start_dist, mdp.start_dist)
        self.assertEqual(restored.discount, mdp.discount)
        self.assertEqual(restored.reward_kind.tolist(), mdp.reward_kind.tolist())
        self.assertEqual(mdp_to_json(restored), mdp_to_json(mdp))

        with self.assertRaisesMessage(InvalidModelError, "MDP document misses the fields: ['transition']"):
            mdp_from_json('{"n_states": 1, "n_actions": 1, "discount": 0, "start_dist": [1], "mean_reward": [[1]],'
                          ' "reward_kind": [["bernoulli"]]}')

    def test_files(self):
        mdp = two_state_mdp()
        policy = TabularPolicy(probs=[[0.25, 0.75], [1.0, 0.0]])
        with tempfile.TemporaryDirectory() as temp:
            mdp_path = Path(temp, 'mdp.json')
            dump_mdp(mdp, mdp_path)
            assert_array_equal(load_mdp(mdp_path).transition, mdp.transition)

            policy_path = Path(temp, 'policy.json')
            dump_policy(policy, policy_path, family='imitation')
            self.assertIn('"family": "imitation"', policy_path.read_text())
            assert_array_equal(load_policy(policy_path).probs, policy.probs)
