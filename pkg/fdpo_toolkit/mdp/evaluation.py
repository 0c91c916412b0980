"""
    Exact tabular policy evaluation.

    The array level functions work on plain numpy arrays (reward [S x A],
    transition [S x A x S]) so they can be reused for auxiliary MDPs whose
    "rewards" are uncertainties or penalties and thus may leave [0, 1].
"""
from typing import Optional

import numpy as np
from scipy import linalg

from fdpo_toolkit.exceptions import SolverError
from fdpo_toolkit.mdp.data_classes import QVector, TabularMdp, TabularPolicy, ValueVector


def policy_reward(probs: np.ndarray, reward: np.ndarray) -> np.ndarray:
    """A^pi r"""
    return np.sum(probs * reward, axis=1)


def policy_transition(probs: np.ndarray, transition: np.ndarray) -> np.ndarray:
    """A^pi P, a [state x state] stochastic matrix"""
    return np.einsum('sa,sat->st', probs, transition)


def _system_matrix(probs, transition, gamma) -> np.ndarray:
    n_states = probs.shape[0]
    return np.eye(n_states) - gamma * policy_transition(probs, transition)


def solve_visitation_system(probs: np.ndarray, transition: np.ndarray, gamma: float, rhs: np.ndarray) -> np.ndarray:
    """
    Solve (I - gamma A^pi P) x = rhs with a dense LU factorization.
    """
    system = _system_matrix(probs, transition, gamma)
    try:
        solution = linalg.solve(system, rhs)
    except (linalg.LinAlgError, ValueError) as err:
        raise SolverError(f'Solving the visitation system failed: {err}') from err
    if not np.all(np.isfinite(solution)):
        raise SolverError('Solving the visitation system returned non-finite values')
    return solution


def solve_policy_values(
    probs: np.ndarray,
    reward: np.ndarray,
    transition: np.ndarray,
    gamma: float,
    state_penalty: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Unique fixed point of v = A^pi (r + gamma P v) - state_penalty
    """
    rhs = policy_reward(probs, reward)
    if state_penalty is not None:
        rhs = rhs - state_penalty
    return solve_visitation_system(probs, transition, gamma, rhs)


def state_action_values(reward: np.ndarray, transition: np.ndarray, gamma: float, values: np.ndarray) -> np.ndarray:
    """q = r + gamma P v"""
    return reward + gamma * transition @ values


def exact_policy_evaluation(mdp: TabularMdp, policy: TabularPolicy) -> ValueVector:
    """
    Values of the policy in the MDP via a linear solve of (I - gamma A^pi P) v = A^pi r
    """
    assert policy.probs.shape == mdp.shape, f'Policy shape {policy.probs.shape!r} != MDP shape {mdp.shape!r}'
    values = solve_policy_values(policy.probs, mdp.mean_reward, mdp.transition, mdp.discount)
    return ValueVector(values=values)


def q_values(mdp: TabularMdp, values: ValueVector) -> QVector:
    return QVector(values=state_action_values(mdp.mean_reward, mdp.transition, mdp.discount, values.values))


def policy_q_values(mdp: TabularMdp, policy: TabularPolicy) -> QVector:
    return q_values(mdp, exact_policy_evaluation(mdp, policy))


def bellman_backup(mdp: TabularMdp, policy: TabularPolicy, v: ValueVector) -> ValueVector:
    """
    One application of the policy's Bellman operator: A^pi (r + gamma P v)
    """
    q = state_action_values(mdp.mean_reward, mdp.transition, mdp.discount, v.values)
    return ValueVector(values=policy_reward(policy.probs, q), penalized=v.penalized)


def discounted_visitation(mdp: TabularMdp, policy: TabularPolicy) -> np.ndarray:
    """
    (I - gamma A^pi P)^-1, every row sums to 1/(1-gamma)
    """
    return solve_visitation_system(policy.probs, mdp.transition, mdp.discount, np.eye(mdp.n_states))


def expected_return(mdp: TabularMdp, policy: TabularPolicy) -> float:
    """E_rho[v^pi]"""
    return exact_policy_evaluation(mdp, policy).expected(mdp.start_dist)


def bellman_residual(mdp: TabularMdp, policy: TabularPolicy, v: ValueVector) -> float:
    """Sup-norm distance between v and its Bellman backup"""
    return float(np.max(np.abs(bellman_backup(mdp, policy, v).values - v.values)))


def iterative_policy_evaluation(mdp: TabularMdp, policy: TabularPolicy, n_steps: int = 10_000) -> ValueVector:
    """
    Evaluate by repeated Bellman backups starting from zero.
    Slow, used as a testing oracle for exact_policy_evaluation().
    """
    reward = policy_reward(policy.probs, mdp.mean_reward)
    transition = policy_transition(policy.probs, mdp.transition)
    values = np.zeros(mdp.n_states)
    for _ in range(n_steps):
        values = reward + mdp.discount * transition @ values
    return ValueVector(values=values)
