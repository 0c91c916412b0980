"""
    Maximum-likelihood estimates from a dataset.
"""
import logging

import numpy as np

from fdpo_toolkit.dataset.data_classes import EmpiricalModel, TransitionDataset
from fdpo_toolkit.exceptions import InvalidModelError
from fdpo_toolkit.mdp.data_classes import TabularMdp, TabularPolicy
from fdpo_toolkit.rng import make_rng


logger = logging.getLogger(__name__)


def build_empirical_model(dataset: TransitionDataset, mdp: TabularMdp, fill_seed: int) -> EmpiricalModel:
    """
    Build r_D, P_D and the empirical policy. Only the shape, discount and start
    distribution of ``mdp`` are used.

    Cells without records get a reward drawn uniformly from [0, 1] (the whole fill
    matrix is drawn from ``fill_seed``, so a cell's fill value never depends on the
    coverage of other cells), a uniform next-state row and, if the whole state is
    unseen, a uniform empirical policy row.
    """
    n_states, n_actions = mdp.shape
    if (dataset.n_states, dataset.n_actions) != (n_states, n_actions):
        raise InvalidModelError(
            f'Dataset shape {(dataset.n_states, dataset.n_actions)!r} != MDP shape {(n_states, n_actions)!r}'
        )
    n_cells = n_states * n_actions
    cells = dataset.cells

    counts = np.bincount(cells, minlength=n_cells).reshape(n_states, n_actions)
    seen = counts > 0
    divisor = np.maximum(counts, 1)

    reward_sums = np.bincount(cells, weights=dataset.rewards, minlength=n_cells).reshape(n_states, n_actions)
    fill_rewards = make_rng(fill_seed).random((n_states, n_actions))
    reward = np.where(seen, reward_sums / divisor, fill_rewards)

    transition_counts = np.bincount(
        cells * n_states + dataset.next_states, minlength=n_cells * n_states
    ).reshape(n_states, n_actions, n_states)
    transition = np.where(seen[:, :, None], transition_counts / divisor[:, :, None], 1.0 / n_states)

    state_counts = counts.sum(axis=1)
    policy_probs = np.where(
        state_counts[:, None] > 0, counts / np.maximum(state_counts, 1)[:, None], 1.0 / n_actions
    )

    unseen = int(n_cells - seen.sum())
    if unseen:
        logger.debug('Filled %i of %i state-action cells without data (fill_seed=%r)', unseen, n_cells, fill_seed)

    return EmpiricalModel(
        reward=reward,
        transition=transition,
        empirical_policy=TabularPolicy(probs=policy_probs),
        counts=counts,
        discount=mdp.discount,
        start_dist=mdp.start_dist,
        fill_seed=fill_seed,
    )
