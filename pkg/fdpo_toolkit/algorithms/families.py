"""
    Fixed-dataset policy evaluation (fdpe) and optimization (fdpo) of the
    imitation, naive and uncertainty-aware pessimistic families.
"""
import logging

import numpy as np

from fdpo_toolkit.algorithms.data_classes import AlgorithmConfig, Family, SolverMethod
from fdpo_toolkit.algorithms.proximal import proximal_fdpe, proximal_fdpo
from fdpo_toolkit.constants import POLICY_ITERATION_MAX_SWEEPS, VALUE_ITERATION_MAX_BACKUPS
from fdpo_toolkit.dataset.data_classes import EmpiricalModel
from fdpo_toolkit.exceptions import InvalidModelError
from fdpo_toolkit.mdp.data_classes import TabularPolicy, ValueVector
from fdpo_toolkit.mdp.evaluation import solve_policy_values
from fdpo_toolkit.mdp.solvers import PolicyIterationResult, penalized_policy_iteration, solve_value_iteration
from fdpo_toolkit.uncertainty.bellman import bellman_uncertainty_from_spec
from fdpo_toolkit.uncertainty.data_classes import BellmanUncertainty, UncertaintyKind, UncertaintySpec


logger = logging.getLogger(__name__)


def imitation(empirical: EmpiricalModel) -> TabularPolicy:
    """The empirical policy: actions in proportion to their observed frequencies"""
    return empirical.empirical_policy


def naive_fdpe(empirical: EmpiricalModel, policy: TabularPolicy) -> ValueVector:
    """Values of the policy in the empirical MDP"""
    values = solve_policy_values(policy.probs, empirical.reward, empirical.transition, empirical.discount)
    return ValueVector(values=values)


def naive_fdpo(
    empirical: EmpiricalModel,
    method: SolverMethod = SolverMethod.POLICY_ITERATION,
    *,
    max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS,
    max_backups: int = VALUE_ITERATION_MAX_BACKUPS,
    tol: float = 1e-10,
) -> TabularPolicy:
    """Optimal policy of the empirical MDP"""
    method = SolverMethod(method)
    if method is SolverMethod.VALUE_ITERATION:
        probs, _ = solve_value_iteration(
            empirical.reward, empirical.transition, empirical.discount, tol=tol, max_backups=max_backups
        )
        return TabularPolicy(probs=probs)

    result = penalized_policy_iteration(
        empirical.reward, empirical.transition, empirical.discount, max_sweeps=max_sweeps
    )
    logger.debug('Naive policy iteration took %i sweeps', result.sweeps)
    return result.policy


def ua_fdpe(
    empirical: EmpiricalModel, policy: TabularPolicy, bellman_unc: BellmanUncertainty, alpha: float
) -> ValueVector:
    """
    Fixed point of v = A^pi (r_D + gamma P_D v) - alpha u^pi, i.e. the naive values
    minus alpha times the value uncertainty.
    """
    if not 0 <= alpha <= 1:
        raise ValueError(f'alpha must be in [0, 1], got: {alpha!r}')
    values = solve_policy_values(
        policy.probs,
        empirical.reward,
        empirical.transition,
        empirical.discount,
        state_penalty=alpha * bellman_unc.for_policy(policy),
    )
    return ValueVector(values=values, penalized=alpha > 0)


def ua_policy_iteration(
    empirical: EmpiricalModel,
    bellman_unc: BellmanUncertainty,
    alpha: float,
    *,
    max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS,
) -> PolicyIterationResult:
    """Greedy policy iteration on the reward r_D - alpha u"""
    penalized_reward = empirical.reward - alpha * bellman_unc.per_state_action
    return penalized_policy_iteration(
        penalized_reward, empirical.transition, empirical.discount, max_sweeps=max_sweeps
    )


def ua_fdpo(
    empirical: EmpiricalModel,
    uncertainty_spec: UncertaintySpec,
    alpha: float,
    *,
    max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS,
) -> TabularPolicy:
    """
    Policy iteration on the empirical MDP with the reward r_D - alpha u.
    Needs a state-action-wise Bellman uncertainty.
    """
    if not 0 <= alpha <= 1:
        raise ValueError(f'alpha must be in [0, 1], got: {alpha!r}')
    if uncertainty_spec.kind is UncertaintyKind.HOEFFDING_STATEWISE:
        raise InvalidModelError(f'{uncertainty_spec.kind!r} can not be optimized, use a state-action-wise bound')
    bellman_unc = bellman_uncertainty_from_spec(uncertainty_spec, empirical)
    result = ua_policy_iteration(empirical, bellman_unc, alpha, max_sweeps=max_sweeps)
    logger.debug('Uncertainty-aware policy iteration (alpha=%r) took %i sweeps', alpha, result.sweeps)
    return result.policy


def run_algorithm(config: AlgorithmConfig, empirical: EmpiricalModel) -> TabularPolicy:
    if config.family is Family.IMITATION:
        return imitation(empirical)
    if config.family is Family.NAIVE:
        return naive_fdpo(
            empirical,
            config.method,
            max_sweeps=config.max_sweeps,
            max_backups=config.max_backups,
            tol=config.value_iteration_tol,
        )
    if config.family is Family.UA_PESSIMISTIC:
        return ua_fdpo(empirical, config.uncertainty, config.alpha, max_sweeps=config.max_sweeps)
    return proximal_fdpo(empirical, config.alpha, max_sweeps=config.max_sweeps)


def penalized_evaluation(config: AlgorithmConfig, empirical: EmpiricalModel, policy: TabularPolicy) -> ValueVector:
    """
    The family's own value estimate of the policy (imitation uses the naive estimate).
    """
    if config.family is Family.UA_PESSIMISTIC:
        bellman_unc = bellman_uncertainty_from_spec(config.uncertainty, empirical, policy)
        return ua_fdpe(empirical, policy, bellman_unc, config.alpha)
    if config.family is Family.PROXIMAL_PESSIMISTIC:
        return proximal_fdpe(empirical, policy, config.alpha)
    return naive_fdpe(empirical, policy)


def penalized_return(config: AlgorithmConfig, empirical: EmpiricalModel, policy: TabularPolicy) -> float:
    """E_rho of penalized_evaluation()"""
    return float(np.dot(empirical.start_dist, penalized_evaluation(config, empirical, policy).values))
