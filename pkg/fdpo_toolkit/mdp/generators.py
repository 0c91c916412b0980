import numpy as np

from fdpo_toolkit.mdp.data_classes import RewardKind, TabularMdp


def random_mdp(n_states: int, n_actions: int, gamma: float, rng: np.random.Generator) -> TabularMdp:
    """
    A random instance: Dirichlet(1) transition rows and start distribution,
    uniform mean rewards with Bernoulli reward draws.
    """
    transition = rng.dirichlet(np.ones(n_states), size=(n_states, n_actions))
    start_dist = rng.dirichlet(np.ones(n_states))
    mean_reward = rng.uniform(0.0, 1.0, size=(n_states, n_actions))
    return TabularMdp(
        mean_reward=mean_reward,
        transition=_renormalize(transition),
        discount=gamma,
        start_dist=_renormalize(start_dist),
        reward_kind=RewardKind.BERNOULLI,
    )


def random_policy(n_states: int, n_actions: int, rng: np.random.Generator) -> np.ndarray:
    """A random stochastic policy matrix (Dirichlet(1) rows)"""
    return _renormalize(rng.dirichlet(np.ones(n_actions), size=n_states))


def _renormalize(probs: np.ndarray) -> np.ndarray:
    # Dirichlet draws can be off by a few ulps:
    return probs / probs.sum(axis=-1, keepdims=True)
