"""
    Draw i.i.d. transition datasets from an MDP.
"""
import logging

import numpy as np

from fdpo_toolkit.constants import STATIONARY_HORIZON
from fdpo_toolkit.dataset.data_classes import DataDistribution, TransitionDataset
from fdpo_toolkit.exceptions import InvalidModelError
from fdpo_toolkit.mdp.data_classes import TabularMdp, TabularPolicy
from fdpo_toolkit.mdp.evaluation import policy_transition
from fdpo_toolkit.rng import make_rng


logger = logging.getLogger(__name__)


def stationary_data_distribution(
    mdp: TabularMdp, behavior: TabularPolicy, horizon: int = STATIONARY_HORIZON
) -> DataDistribution:
    """
    Cesaro average over the first ``horizon`` steps of the rho-started state
    distribution under the behavior policy, composed with its action probabilities.
    Well defined for periodic and reducible chains.
    """
    if horizon < 1:
        raise ValueError(f'horizon must be >= 1, got: {horizon!r}')
    chain = policy_transition(behavior.probs, mdp.transition)
    state_dist = np.array(mdp.start_dist, dtype=float)
    total = np.zeros(mdp.n_states)
    for _ in range(horizon):
        total += state_dist
        state_dist = state_dist @ chain
    total /= horizon
    total /= total.sum()
    return DataDistribution(probs=total[:, None] * behavior.probs)


def _sample_records(mdp: TabularMdp, cells: np.ndarray, rng: np.random.Generator) -> TransitionDataset:
    n_states, n_actions = mdp.shape
    size = cells.size
    states, actions = np.divmod(cells, n_actions)

    # Next states by inverse transform sampling, one cumulative row per visited cell:
    cumulative = np.cumsum(mdp.transition.reshape(n_states * n_actions, n_states), axis=1)
    uniforms = rng.random(size)
    next_states = np.empty(size, dtype=np.int64)
    for cell in np.unique(cells):
        mask = cells == cell
        next_states[mask] = np.searchsorted(cumulative[cell], uniforms[mask], side='right')
    np.minimum(next_states, n_states - 1, out=next_states)

    means = mdp.mean_reward.ravel()[cells]
    bernoulli = mdp.bernoulli_mask.ravel()[cells]
    draws = (rng.random(size) < means).astype(float)
    rewards = np.where(bernoulli, draws, means)

    return TransitionDataset(
        n_states=n_states,
        n_actions=n_actions,
        states=states,
        actions=actions,
        rewards=rewards,
        next_states=next_states,
    )


def collect(mdp: TabularMdp, phi: DataDistribution, d: int, seed: int) -> TransitionDataset:
    """
    Draw ``d`` records: every (state, action) i.i.d. from phi, then reward and next state
    from the MDP. Identical arguments give identical datasets.
    """
    if d < 0:
        raise ValueError(f'Dataset size must be >= 0, got: {d!r}')
    if phi.probs.shape != mdp.shape:
        raise InvalidModelError(f'Data distribution shape {phi.probs.shape!r} != MDP shape {mdp.shape!r}')
    rng = make_rng(seed)
    probs = phi.probs.ravel()
    cells = rng.choice(probs.size, size=d, p=probs / probs.sum()).astype(np.int64)
    dataset = _sample_records(mdp, cells, rng)
    logger.debug('Collected %r with seed %r', dataset, seed)
    return dataset


def collect_with_counts(mdp: TabularMdp, counts: np.ndarray, seed: int) -> TransitionDataset:
    """
    Draw exactly counts[s, a] records for every state-action.

    >>> mdp = TabularMdp(
    ...     mean_reward=[[1.0, 0.0]], transition=[[[1.0], [1.0]]], discount=0.0, start_dist=[1.0],
    ...     reward_kind='deterministic',
    ... )
    >>> dataset = collect_with_counts(mdp, np.array([[3, 1]]), seed=0)
    >>> dataset.counts.tolist(), dataset.rewards.tolist()
    ([[3, 1]], [1.0, 1.0, 1.0, 0.0])
    """
    counts = np.asarray(counts, dtype=np.int64)
    if counts.shape != mdp.shape:
        raise InvalidModelError(f'Counts shape {counts.shape!r} != MDP shape {mdp.shape!r}')
    if np.any(counts < 0):
        raise InvalidModelError('Counts must not be negative')
    cells = np.repeat(np.arange(counts.size, dtype=np.int64), counts.ravel())
    return _sample_records(mdp, cells, make_rng(seed))
