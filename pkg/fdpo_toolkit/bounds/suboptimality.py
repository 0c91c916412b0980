"""
    Suboptimality bounds of the naive, uncertainty-aware and proximal families,
    evaluated on enumerable instances.

    The infimum terms are taken over a finite candidate set: every deterministic
    policy, the empirical policy and the returned policy. Any candidate set gives a
    valid (over-estimated) infimum. All reports use the same set, so the alpha=0
    reports agree exactly. The supremum terms are solved exactly as auxiliary MDPs
    over the empirical dynamics with the uncertainty as reward.
"""
import dataclasses
from typing import Optional

import numpy as np

from fdpo_toolkit.algorithms.families import naive_fdpo, ua_fdpo
from fdpo_toolkit.algorithms.proximal import proximal_fdpo, proximal_policy_iteration
from fdpo_toolkit.bounds.data_classes import BoundReport
from fdpo_toolkit.constants import ENUMERATION_LIMIT, POLICY_ITERATION_MAX_SWEEPS
from fdpo_toolkit.dataset.data_classes import EmpiricalModel
from fdpo_toolkit.exceptions import InvalidModelError
from fdpo_toolkit.mdp.data_classes import TabularMdp, TabularPolicy
from fdpo_toolkit.mdp.evaluation import expected_return, solve_visitation_system
from fdpo_toolkit.mdp.solvers import enumerate_deterministic_policies, optimal_return, penalized_policy_iteration
from fdpo_toolkit.uncertainty.bellman import bellman_uncertainty_from_spec
from fdpo_toolkit.uncertainty.data_classes import BellmanUncertainty, UncertaintyKind, UncertaintySpec
from fdpo_toolkit.uncertainty.value import total_variation, value_uncertainty


@dataclasses.dataclass(frozen=True, eq=False)
class CandidateTerms:
    """
    Per candidate policy: true suboptimality, E_rho[mu^pi] and
    E_rho[(I - gamma A^pi P_D)^-1 TV(pi, empirical)/(1-gamma)^2]
    """

    suboptimality: np.ndarray
    uncertainty: np.ndarray
    proximal_visitation: np.ndarray


def state_action_uncertainty(spec: UncertaintySpec, empirical: EmpiricalModel) -> BellmanUncertainty:
    if spec.kind is UncertaintyKind.HOEFFDING_STATEWISE:
        raise InvalidModelError('Suboptimality bounds need a state-action-wise Bellman uncertainty')
    return bellman_uncertainty_from_spec(spec, empirical)


def candidate_policies(
    empirical: EmpiricalModel, returned: TabularPolicy, *, enumeration_limit: int = ENUMERATION_LIMIT
) -> list:
    candidates = [
        TabularPolicy(probs=probs)
        for probs in enumerate_deterministic_policies(
            empirical.n_states, empirical.n_actions, enumeration_limit=enumeration_limit
        )
    ]
    candidates.append(empirical.empirical_policy)
    candidates.append(returned)
    return candidates


def candidate_terms(
    mdp: TabularMdp,
    empirical: EmpiricalModel,
    bellman_unc: BellmanUncertainty,
    candidates: list,
    optimal: float,
) -> CandidateTerms:
    gamma = empirical.discount
    emp_probs = empirical.empirical_policy.probs
    suboptimality, uncertainty, proximal_visitation = [], [], []
    for policy in candidates:
        suboptimality.append(optimal - expected_return(mdp, policy))
        uncertainty.append(value_uncertainty(empirical, policy, bellman_unc).expected(empirical.start_dist))
        distance = total_variation(policy.probs, emp_probs) / (1.0 - gamma) ** 2
        visitation = solve_visitation_system(policy.probs, empirical.transition, gamma, distance)
        proximal_visitation.append(float(np.dot(empirical.start_dist, visitation)))
    return CandidateTerms(
        suboptimality=np.array(suboptimality),
        uncertainty=np.array(uncertainty),
        proximal_visitation=np.array(proximal_visitation),
    )


def uncertainty_sup(
    empirical: EmpiricalModel, bellman_unc: BellmanUncertainty, *, max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS
) -> float:
    """
    sup_pi E_rho[mu^pi]: the optimal return of the MDP with dynamics P_D and reward u.
    A deterministic policy attains it.
    """
    result = penalized_policy_iteration(
        np.array(bellman_unc.per_state_action), empirical.transition, empirical.discount, max_sweeps=max_sweeps
    )
    return float(np.dot(empirical.start_dist, result.values))


def _uncertainty_weighted_report(
    mdp: TabularMdp,
    empirical: EmpiricalModel,
    uncertainty_spec: UncertaintySpec,
    policy: TabularPolicy,
    alpha: float,
    enumeration_limit: int,
    max_sweeps: int,
    metadata: dict,
) -> BoundReport:
    bellman_unc = state_action_uncertainty(uncertainty_spec, empirical)
    optimal = optimal_return(mdp, max_sweeps=max_sweeps)
    candidates = candidate_policies(empirical, policy, enumeration_limit=enumeration_limit)
    terms = candidate_terms(mdp, empirical, bellman_unc, candidates, optimal)

    inf_term = float(np.min(terms.suboptimality + (1.0 + alpha) * terms.uncertainty))
    sup_term = (1.0 - alpha) * uncertainty_sup(empirical, bellman_unc, max_sweeps=max_sweeps)
    lhs = optimal - expected_return(mdp, policy)

    metadata.setdefault('delta', uncertainty_spec.delta)
    metadata.setdefault('uncertainty', uncertainty_spec.kind.value)
    return BoundReport(lhs=lhs, inf_term=inf_term, sup_term=sup_term, metadata=metadata)


def naive_bound_report(
    mdp: TabularMdp,
    empirical: EmpiricalModel,
    uncertainty_spec: UncertaintySpec,
    *,
    policy: Optional[TabularPolicy] = None,
    enumeration_limit: int = ENUMERATION_LIMIT,
    max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS,
    **metadata,
) -> BoundReport:
    """
    suboptimality(naive) <= inf_pi (suboptimality(pi) + E_rho[mu^pi]) + sup_pi E_rho[mu^pi]

    ``policy`` defaults to the output of naive_fdpo().
    """
    if policy is None:
        policy = naive_fdpo(empirical, max_sweeps=max_sweeps)
    metadata.setdefault('family', 'naive')
    return _uncertainty_weighted_report(
        mdp, empirical, uncertainty_spec, policy, 0.0, enumeration_limit, max_sweeps, metadata
    )


def ua_bound_report(
    mdp: TabularMdp,
    empirical: EmpiricalModel,
    uncertainty_spec: UncertaintySpec,
    alpha: float,
    *,
    policy: Optional[TabularPolicy] = None,
    enumeration_limit: int = ENUMERATION_LIMIT,
    max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS,
    **metadata,
) -> BoundReport:
    """
    suboptimality(ua) <= inf_pi (suboptimality(pi) + (1+alpha) E_rho[mu^pi]) + (1-alpha) sup_pi E_rho[mu^pi]

    ``policy`` defaults to the output of ua_fdpo().
    """
    if not 0 <= alpha <= 1:
        raise ValueError(f'alpha must be in [0, 1], got: {alpha!r}')
    if policy is None:
        policy = ua_fdpo(empirical, uncertainty_spec, alpha, max_sweeps=max_sweeps)
    metadata.setdefault('family', 'ua_pessimistic')
    metadata.setdefault('alpha', alpha)
    return _uncertainty_weighted_report(
        mdp, empirical, uncertainty_spec, policy, alpha, enumeration_limit, max_sweeps, metadata
    )


def proximal_uncertainty_sup(
    empirical: EmpiricalModel,
    bellman_unc: BellmanUncertainty,
    alpha: float,
    *,
    max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS,
) -> float:
    """
    sup_pi E_rho[mu^pi - alpha (I - gamma A^pi P_D)^-1 TV(pi, empirical)/(1-gamma)^2],
    a proximal policy iteration with the uncertainty as reward.
    """
    if alpha == 0:
        return uncertainty_sup(empirical, bellman_unc, max_sweeps=max_sweeps)
    result = proximal_policy_iteration(
        np.array(bellman_unc.per_state_action),
        empirical.transition,
        empirical.discount,
        empirical.empirical_policy.probs,
        alpha,
        max_sweeps=max_sweeps,
    )
    return float(np.dot(empirical.start_dist, result.values))


def proximal_bound_report(
    mdp: TabularMdp,
    empirical: EmpiricalModel,
    alpha: float,
    uncertainty_spec: Optional[UncertaintySpec] = None,
    *,
    policy: Optional[TabularPolicy] = None,
    enumeration_limit: int = ENUMERATION_LIMIT,
    max_sweeps: int = POLICY_ITERATION_MAX_SWEEPS,
    **metadata,
) -> BoundReport:
    """
    suboptimality(proximal) <= inf_pi (suboptimality(pi) + E_rho[mu^pi + alpha W^pi])
                               + sup_pi E_rho[mu^pi - alpha W^pi]

    with W^pi = (I - gamma A^pi P_D)^-1 TV(pi, empirical)/(1-gamma)^2. The term
    alpha E_rho[mu^empirical] is added to the infimum and subtracted from the
    supremum, so the sum is unchanged and the supremum term is at most zero for
    alpha=1 with the trivial uncertainty.

    ``policy`` defaults to the output of proximal_fdpo(), ``uncertainty_spec`` to
    the state-action-wise Hoeffding bound.
    """
    if not 0 <= alpha <= 1:
        raise ValueError(f'alpha must be in [0, 1], got: {alpha!r}')
    if uncertainty_spec is None:
        uncertainty_spec = UncertaintySpec(kind=UncertaintyKind.HOEFFDING_SA)
    if policy is None:
        policy = proximal_fdpo(empirical, alpha, max_sweeps=max_sweeps)

    bellman_unc = state_action_uncertainty(uncertainty_spec, empirical)
    optimal = optimal_return(mdp, max_sweeps=max_sweeps)
    candidates = candidate_policies(empirical, policy, enumeration_limit=enumeration_limit)
    terms = candidate_terms(mdp, empirical, bellman_unc, candidates, optimal)
    empirical_unc = value_uncertainty(empirical, empirical.empirical_policy, bellman_unc).expected(
        empirical.start_dist
    )

    inf_term = float(
        np.min(terms.suboptimality + terms.uncertainty + alpha * terms.proximal_visitation)
        + alpha * empirical_unc
    )
    sup_term = proximal_uncertainty_sup(empirical, bellman_unc, alpha, max_sweeps=max_sweeps) - alpha * empirical_unc
    lhs = optimal - expected_return(mdp, policy)

    metadata.setdefault('family', 'proximal_pessimistic')
    metadata.setdefault('alpha', alpha)
    metadata.setdefault('delta', uncertainty_spec.delta)
    metadata.setdefault('uncertainty', uncertainty_spec.kind.value)
    return BoundReport(lhs=lhs, inf_term=inf_term, sup_term=sup_term, metadata=metadata)
