"""
    Proximal pessimism: values are penalized by alpha * TV(pi, empirical policy) / (1-gamma)^2
    at every state.

    The penalty only depends on the action distribution at the state itself, so
    policy iteration stays valid when the greedy step is replaced by the per-state
    maximizer of  sum_a pi(a) q(a) - alpha/(1-gamma)^2 * TV(pi, empirical).
"""
import itertools
import logging
from functools import lru_cache

import numpy as np

from fdpo_toolkit.constants import POLICY_ITERATION_MAX_SWEEPS, SIMPLEX_GRID_RESOLUTION, TIE_TOLERANCE
from fdpo_toolkit.dataset.data_classes import EmpiricalModel
from fdpo_toolkit.mdp.data_classes import TabularPolicy, ValueVector
from fdpo_toolkit.mdp.evaluation import solve_policy_values
from fdpo_toolkit.mdp.solvers import PolicyIterationResult, greedy_probs, penalized_policy_iteration
from fdpo_toolkit.uncertainty.value import proximal_penalty_vector, total_variation


logger = logging.getLogger(__name__)


def penalty_scale(gamma: float, alpha: float) -> float:
    return alpha / (1.0 - gamma) ** 2


def local_opt_probs(q: np.ndarray, emp_probs: np.ndarray, gamma: float, alpha: float) -> np.ndarray:
    """
    Row-wise closed form maximizer. With threshold z = max q - alpha/(1-gamma)^2 every
    action with q >= z keeps its empirical mass, the mass of all other actions moves
    to the (lowest index) argmax. alpha=0 gives the deterministic argmax.
    """
    if alpha < 0:
        raise ValueError(f'alpha must be >= 0, got: {alpha!r}')
    best = greedy_probs(q, TIE_TOLERANCE)
    if alpha == 0:
        return best
    threshold = q.max(axis=1, keepdims=True) - penalty_scale(gamma, alpha)
    keep = q >= threshold
    probs = np.where(keep, emp_probs, 0.0)
    leftover = np.where(keep, 0.0, emp_probs).sum(axis=1)
    return probs + best * leftover[:, None]


def proximal_local_opt(q_row: np.ndarray, emp_row: np.ndarray, gamma: float, alpha: float) -> np.ndarray:
    """
    >>> proximal_local_opt(np.array([1.0, 0.5, 0.2]), np.array([0.2, 0.3, 0.5]), gamma=0.0, alpha=0.6).tolist()
    [0.7, 0.3, 0.0]
    >>> proximal_local_opt(np.array([1.0, 0.5]), np.array([0.5, 0.5]), gamma=0.0, alpha=0.0).tolist()
    [1.0, 0.0]
    """
    q_row = np.asarray(q_row, dtype=float)
    emp_row = np.asarray(emp_row, dtype=float)
    return local_opt_probs(q_row[None, :], emp_row[None, :], gamma, alpha)[0]


def local_score(probs: np.ndarray, q: np.ndarray, emp_probs: np.ndarray, gamma: float, alpha: float) -> np.ndarray:
    """Penalized one-step score of policy rows: pi . q - alpha/(1-gamma)^2 * TV(pi, empirical)"""
    return np.sum(probs * q, axis=-1) - penalty_scale(gamma, alpha) * total_variation(probs, emp_probs)


def proximal_policy_iteration(
    reward: np.ndarray,
    transition: np.ndarray,
    gamma: float,
    emp_probs: np.ndarray,
    alpha: float,
    *,
    max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS,
) -> PolicyIterationResult:
    """
    Maximize the fixed point of v = A^pi (reward + gamma P v) - alpha TV(pi, empirical)/(1-gamma)^2,
    starting from the empirical policy.
    """
    scale = penalty_scale(gamma, alpha)
    return penalized_policy_iteration(
        reward,
        transition,
        gamma,
        improve=lambda q: local_opt_probs(q, emp_probs, gamma, alpha),
        state_penalty=lambda probs: scale * total_variation(probs, emp_probs),
        initial_probs=emp_probs,
        max_sweeps=max_sweeps,
    )


def proximal_fdpe(empirical: EmpiricalModel, policy: TabularPolicy, alpha: float) -> ValueVector:
    """
    Fixed point of v = A^pi (r_D + gamma P_D v) - alpha TV(pi, empirical)/(1-gamma)^2
    """
    if not 0 <= alpha <= 1:
        raise ValueError(f'alpha must be in [0, 1], got: {alpha!r}')
    penalty = alpha * proximal_penalty_vector(policy, empirical.empirical_policy, empirical.discount)
    values = solve_policy_values(
        policy.probs, empirical.reward, empirical.transition, empirical.discount, state_penalty=penalty
    )
    return ValueVector(values=values, penalized=alpha > 0)


def proximal_fdpo(
    empirical: EmpiricalModel, alpha: float, *, max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS
) -> TabularPolicy:
    if not 0 <= alpha <= 1:
        raise ValueError(f'alpha must be in [0, 1], got: {alpha!r}')
    if alpha == 0:
        # No penalty: plain policy iteration from the greedy start, like the naive family.
        result = penalized_policy_iteration(
            empirical.reward, empirical.transition, empirical.discount, max_sweeps=max_sweeps
        )
    else:
        result = proximal_policy_iteration(
            empirical.reward,
            empirical.transition,
            empirical.discount,
            empirical.empirical_policy.probs,
            alpha,
            max_sweeps=max_sweeps,
        )
    logger.debug('Proximal policy iteration (alpha=%r) took %i sweeps', alpha, result.sweeps)
    return result.policy


@lru_cache(maxsize=8)
def simplex_grid(n_actions: int, resolution: float = SIMPLEX_GRID_RESOLUTION) -> np.ndarray:
    """
    All action distributions whose entries are multiples of ``resolution``.

    >>> simplex_grid(2, 0.5).tolist()
    [[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]]
    """
    if n_actions == 1:
        grid = np.ones((1, 1))
        grid.flags.writeable = False
        return grid
    steps = int(round(1.0 / resolution))
    # Stars and bars: choose the positions of n_actions - 1 separators among steps + n_actions - 1 slots.
    bars = np.array(list(itertools.combinations(range(steps + n_actions - 1), n_actions - 1)), dtype=np.int64)
    bounds = np.concatenate(
        [np.full((bars.shape[0], 1), -1), bars, np.full((bars.shape[0], 1), steps + n_actions - 1)], axis=1
    )
    parts = np.diff(bounds, axis=1) - 1
    grid = parts / steps
    grid.flags.writeable = False
    return grid


def grid_search_local_opt(
    q_row: np.ndarray,
    emp_row: np.ndarray,
    gamma: float,
    alpha: float,
    resolution: float = SIMPLEX_GRID_RESOLUTION,
) -> tuple:
    """
    Testing oracle for proximal_local_opt(): best (probs, score) over the simplex grid.
    """
    q_row = np.asarray(q_row, dtype=float)
    grid = simplex_grid(q_row.size, resolution)
    scores = local_score(grid, q_row[None, :], np.asarray(emp_row, dtype=float)[None, :], gamma, alpha)
    index = int(np.argmax(scores))
    return grid[index].copy(), float(scores[index])


def grid_search_policy_iteration(
    reward: np.ndarray,
    transition: np.ndarray,
    gamma: float,
    emp_probs: np.ndarray,
    alpha: float,
    resolution: float = SIMPLEX_GRID_RESOLUTION,
    *,
    max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS,
) -> PolicyIterationResult:
    """
    Like proximal_policy_iteration() but the improvement step searches the simplex grid
    instead of using the closed form. Use with few actions only.
    """
    grid = simplex_grid(emp_probs.shape[1], resolution)
    scale = penalty_scale(gamma, alpha)

    def improve(q):
        probs = np.empty_like(q)
        for state in range(q.shape[0]):
            scores = local_score(grid, q[state][None, :], emp_probs[state][None, :], gamma, alpha)
            probs[state] = grid[int(np.argmax(scores))]
        return probs

    return penalized_policy_iteration(
        reward,
        transition,
        gamma,
        improve=improve,
        state_penalty=lambda probs: scale * total_variation(probs, emp_probs),
        max_sweeps=max_sweeps,
    )


def grid_search_proximal_fdpo(
    empirical: EmpiricalModel,
    alpha: float,
    resolution: float = SIMPLEX_GRID_RESOLUTION,
    *,
    max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS,
) -> PolicyIterationResult:
    """
    Testing oracle for proximal_fdpo(): the best policy whose rows lie on the simplex grid.
    """
    return grid_search_policy_iteration(
        empirical.reward,
        empirical.transition,
        empirical.discount,
        empirical.empirical_policy.probs,
        alpha,
        resolution,
        max_sweeps=max_sweeps,
    )
