"""
    Value uncertainty: Bellman uncertainty accumulated along the empirical visitation.
"""
from typing import Optional

import numpy as np

from fdpo_toolkit.dataset.data_classes import EmpiricalModel
from fdpo_toolkit.mdp.data_classes import TabularPolicy
from fdpo_toolkit.mdp.evaluation import solve_visitation_system, state_action_values
from fdpo_toolkit.uncertainty.data_classes import BellmanUncertainty, ValueUncertainty


def value_uncertainty(
    empirical: EmpiricalModel, policy: TabularPolicy, bellman_unc: BellmanUncertainty
) -> ValueUncertainty:
    """
    mu^pi = (I - gamma A^pi P_D)^-1 u^pi
    """
    gamma = empirical.discount
    per_state = solve_visitation_system(
        policy.probs, empirical.transition, gamma, bellman_unc.for_policy(policy)
    )
    # The solve may leave tiny negative noise when u^pi is (close to) zero:
    return ValueUncertainty(gamma=gamma, per_state=np.maximum(per_state, 0.0))


def relative_value_uncertainty(
    empirical: EmpiricalModel,
    policy: TabularPolicy,
    other_policy: TabularPolicy,
    sa_bellman_unc: BellmanUncertainty,
    other_value_unc: Optional[ValueUncertainty] = None,
) -> np.ndarray:
    """
    mu^pi - mu^pi' written relative to pi':

        (I - gamma A^pi P_D)^-1 ((A^pi - A^pi') (u + gamma P_D mu^pi'))
    """
    assert sa_bellman_unc.decomposable, 'Relative value uncertainty needs a state-action-wise Bellman uncertainty'
    gamma = empirical.discount
    if other_value_unc is None:
        other_value_unc = value_uncertainty(empirical, other_policy, sa_bellman_unc)
    backup = state_action_values(
        sa_bellman_unc.per_state_action, empirical.transition, gamma, other_value_unc.per_state
    )
    rhs = np.sum((policy.probs - other_policy.probs) * backup, axis=1)
    return solve_visitation_system(policy.probs, empirical.transition, gamma, rhs)


def total_variation(probs: np.ndarray, other_probs: np.ndarray) -> np.ndarray:
    """
    Per-state total variation distance of two policy matrices.

    >>> total_variation(np.array([[0.75, 0.25]]), np.array([[0.25, 0.75]])).tolist()
    [0.5]
    """
    return 0.5 * np.abs(np.asarray(probs) - np.asarray(other_probs)).sum(axis=1)


def proximal_penalty_vector(policy: TabularPolicy, empirical_policy: TabularPolicy, gamma: float) -> np.ndarray:
    """
    TV(pi(.|s), empirical(.|s)) / (1-gamma)^2 per state
    """
    return total_variation(policy.probs, empirical_policy.probs) / (1.0 - gamma) ** 2


def relative_error_bound(
    empirical: EmpiricalModel,
    policy: TabularPolicy,
    other_policy: TabularPolicy,
    sa_bellman_unc: BellmanUncertainty,
) -> np.ndarray:
    """
    Upper bound of mu^pi that only needs mu^pi' and the policy distance:

        mu^pi' + (I - gamma A^pi P_D)^-1 (TV(pi, pi') / (1-gamma)^2)

    Valid for every state-action-wise Bellman uncertainty within the trivial bound.
    With pi' = the empirical policy this turns the uncertainty-aware penalty into the
    proximal one.
    """
    gamma = empirical.discount
    other = value_uncertainty(empirical, other_policy, sa_bellman_unc)
    distance = total_variation(policy.probs, other_policy.probs) / (1.0 - gamma) ** 2
    return other.per_state + solve_visitation_system(policy.probs, empirical.transition, gamma, distance)
