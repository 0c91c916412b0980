import os
import unittest

import numpy as np

from fdpo_toolkit.dataset.collection import collect
from fdpo_toolkit.dataset.data_classes import DataDistribution
from fdpo_toolkit.dataset.empirical import build_empirical_model
from fdpo_toolkit.mdp.data_classes import RewardKind, TabularMdp
from fdpo_toolkit.mdp.generators import random_mdp
from fdpo_toolkit.rng import make_rng


# Hacky way to display more "assert"-Context in failing tests:
unittest.util._MAX_LENGTH = os.environ.get('UNITTEST_MAX_LENGTH', 200)


def two_state_mdp(discount: float = 0.5) -> TabularMdp:
    """
    State 0: action 0 stays (reward 1), action 1 moves to state 1 (reward 0).
    State 1: absorbing, both actions give reward 0.5.
    """
    return TabularMdp(
        mean_reward=[[1.0, 0.0], [0.5, 0.5]],
        transition=[[[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [0.0, 1.0]]],
        discount=discount,
        start_dist=[1.0, 0.0],
        reward_kind=RewardKind.DETERMINISTIC,
    )


def random_instance(seed: int, n_states=3, n_actions=2, gamma=0.9, dataset_size=40) -> tuple:
    """(true MDP, empirical model) with uniformly drawn dataset cells"""
    rng = make_rng(seed)
    mdp = random_mdp(n_states, n_actions, gamma, rng)
    dataset = collect(mdp, DataDistribution.uniform(n_states, n_actions), dataset_size, seed=seed + 1)
    return mdp, build_empirical_model(dataset, mdp, fill_seed=seed + 2)


def random_policy_probs(seed: int, n_states: int, n_actions: int) -> np.ndarray:
    rng = make_rng(seed)
    probs = rng.dirichlet(np.ones(n_actions), size=n_states)
    return probs / probs.sum(axis=1, keepdims=True)
