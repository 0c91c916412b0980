"""
    Optimal-policy solvers: policy iteration, value iteration and an enumeration oracle.

    Greedy steps break ties by the lowest action index. Values within
    TIE_TOLERANCE (relative to the row maximum) count as tied, so floating point
    noise can not flip a greedy choice.
"""
import dataclasses
import itertools
import logging
from typing import Callable, Iterator, Optional

import numpy as np

from fdpo_toolkit.constants import (
    ENUMERATION_LIMIT,
    POLICY_ITERATION_MAX_SWEEPS,
    TIE_TOLERANCE,
    VALUE_ITERATION_MAX_BACKUPS,
)
from fdpo_toolkit.exceptions import InstanceTooLargeError, NonConvergenceError
from fdpo_toolkit.mdp.data_classes import TabularMdp, TabularPolicy, ValueVector
from fdpo_toolkit.mdp.evaluation import expected_return, solve_policy_values, state_action_values


logger = logging.getLogger(__name__)

# Policies are "the same" if they differ by less than this in every entry:
POLICY_CHANGE_ATOL = 1e-12

# Allowed decrease between two policy iteration sweeps before we log a warning:
MONOTONE_SLACK = 1e-10


@dataclasses.dataclass(frozen=True, eq=False)
class PolicyIterationResult:
    """
    Outcome of penalized_policy_iteration()
    """

    probs: np.ndarray
    values: np.ndarray
    sweeps: int
    # State values after every evaluation step:
    value_history: tuple = ()

    @property
    def policy(self) -> TabularPolicy:
        return TabularPolicy(probs=self.probs)


def greedy_probs(q: np.ndarray, tie_tolerance: float = TIE_TOLERANCE) -> np.ndarray:
    """
    Deterministic greedy policy matrix for the given [state x action] values.

    >>> greedy_probs(np.array([[0.0, 1.0, 1.0], [2.0, 0.0, 2.0]])).tolist()
    [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]
    """
    best = q.max(axis=1, keepdims=True)
    candidates = q >= best - tie_tolerance * np.maximum(1.0, np.abs(best))
    actions = np.argmax(candidates, axis=1)
    probs = np.zeros_like(q, dtype=float)
    probs[np.arange(q.shape[0]), actions] = 1.0
    return probs


def penalized_policy_iteration(
    reward: np.ndarray,
    transition: np.ndarray,
    gamma: float,
    *,
    improve: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    state_penalty: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    initial_probs: Optional[np.ndarray] = None,
    max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS,
) -> PolicyIterationResult:
    """
    Policy iteration on the fixed point v = A^pi (reward + gamma P v) - state_penalty(pi).

    ``improve`` maps [state x action] values q = reward + gamma P v to the next
    policy matrix (default: greedy). ``state_penalty`` maps a policy matrix to a
    per-state penalty (default: none). Stops as soon as the improvement step
    returns the current policy.
    """
    if improve is None:
        improve = greedy_probs
    if initial_probs is None:
        probs = improve(np.array(reward, dtype=float))
    else:
        probs = np.array(initial_probs, dtype=float)

    history = []
    previous = None
    for sweep in range(1, max_sweeps + 1):
        penalty = None if state_penalty is None else state_penalty(probs)
        values = solve_policy_values(probs, reward, transition, gamma, state_penalty=penalty)
        history.append(values)

        if previous is not None:
            decrease = np.max(previous - values)
            if decrease > MONOTONE_SLACK * max(1.0, np.max(np.abs(values))):
                logger.warning('Policy iteration sweep %i decreased a value by %r', sweep, decrease)
        previous = values

        q = state_action_values(reward, transition, gamma, values)
        new_probs = improve(q)
        if np.allclose(new_probs, probs, rtol=0, atol=POLICY_CHANGE_ATOL):
            logger.debug('Policy iteration converged after %i sweeps', sweep)
            return PolicyIterationResult(probs=probs, values=values, sweeps=sweep, value_history=tuple(history))
        probs = new_probs

    raise NonConvergenceError(f'Policy iteration did not converge within {max_sweeps} sweeps')


def run_policy_iteration(mdp: TabularMdp, *, max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS) -> PolicyIterationResult:
    return penalized_policy_iteration(mdp.mean_reward, mdp.transition, mdp.discount, max_sweeps=max_sweeps)


def policy_iteration(mdp: TabularMdp, *, max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS) -> TabularPolicy:
    """
    Deterministic optimal policy of the MDP.
    """
    return run_policy_iteration(mdp, max_sweeps=max_sweeps).policy


def solve_value_iteration(
    reward: np.ndarray,
    transition: np.ndarray,
    gamma: float,
    tol: float = 1e-10,
    max_backups: int = VALUE_ITERATION_MAX_BACKUPS,
) -> tuple:
    """
    Value iteration on arrays, returns (greedy policy matrix, values).
    """
    if tol <= 0:
        raise ValueError(f'tol must be positive, got: {tol!r}')
    values = np.zeros(reward.shape[0])
    for backup in range(1, max_backups + 1):
        new_values = state_action_values(reward, transition, gamma, values).max(axis=1)
        delta = np.max(np.abs(new_values - values))
        values = new_values
        if delta <= tol:
            logger.debug('Value iteration converged after %i backups (delta=%r)', backup, delta)
            q = state_action_values(reward, transition, gamma, values)
            return greedy_probs(q), values
    raise NonConvergenceError(f'Value iteration did not converge within {max_backups} backups')


def value_iteration(
    mdp: TabularMdp, tol: float = 1e-10, *, max_backups: int = VALUE_ITERATION_MAX_BACKUPS
) -> tuple:
    """
    Returns (greedy policy, final values). At exit two consecutive iterates differ by at most tol.
    """
    probs, values = solve_value_iteration(mdp.mean_reward, mdp.transition, mdp.discount, tol, max_backups)
    return TabularPolicy(probs=probs), ValueVector(values=values)


def optimal_return(mdp: TabularMdp, *, max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS) -> float:
    """E_rho[v*]"""
    result = run_policy_iteration(mdp, max_sweeps=max_sweeps)
    return float(np.dot(mdp.start_dist, result.values))


def suboptimality(mdp: TabularMdp, policy: TabularPolicy, optimal: Optional[float] = None) -> float:
    """
    E_rho[v^pi*] - E_rho[v^pi] in the given (true) MDP.
    Pass ``optimal`` to reuse an already computed optimal return.
    """
    if optimal is None:
        optimal = optimal_return(mdp)
    return optimal - expected_return(mdp, policy)


def count_deterministic_policies(n_states: int, n_actions: int) -> int:
    return n_actions**n_states


def enumerate_deterministic_policies(
    n_states: int, n_actions: int, *, enumeration_limit: int = ENUMERATION_LIMIT
) -> Iterator[np.ndarray]:
    """
    Yield all deterministic policies as policy matrices, in lexicographic action order.

    >>> [probs.argmax(axis=1).tolist() for probs in enumerate_deterministic_policies(2, 2)]
    [[0, 0], [0, 1], [1, 0], [1, 1]]
    """
    count = count_deterministic_policies(n_states, n_actions)
    if count > enumeration_limit:
        raise InstanceTooLargeError(
            f'{n_actions}^{n_states} = {count} deterministic policies exceed the limit of {enumeration_limit}'
        )
    eye = np.eye(n_actions)
    for actions in itertools.product(range(n_actions), repeat=n_states):
        yield eye[list(actions)]


def brute_force_optimal(mdp: TabularMdp, *, enumeration_limit: int = ENUMERATION_LIMIT) -> tuple:
    """
    Testing oracle: (best deterministic policy, its E_rho[v]) by evaluating every deterministic policy.
    The first maximizer in lexicographic order wins ties.
    """
    best_probs, best_value = None, -np.inf
    for probs in enumerate_deterministic_policies(mdp.n_states, mdp.n_actions, enumeration_limit=enumeration_limit):
        values = solve_policy_values(probs, mdp.mean_reward, mdp.transition, mdp.discount)
        value = float(np.dot(mdp.start_dist, values))
        if best_probs is None or value > best_value + TIE_TOLERANCE * max(1.0, abs(best_value)):
            best_probs, best_value = probs, value
    return TabularPolicy(probs=best_probs), best_value
