"""
    Bellman uncertainty functions: high-probability bounds on the error of one
    empirical Bellman backup, all intersected with the trivial bound 1/(1-gamma).
"""
from typing import Optional

import numpy as np

from fdpo_toolkit.dataset.data_classes import EmpiricalModel
from fdpo_toolkit.exceptions import PolicyNotInLocalSetError
from fdpo_toolkit.mdp.data_classes import TabularPolicy
from fdpo_toolkit.uncertainty.data_classes import (
    BellmanUncertainty,
    UncertaintyKind,
    UncertaintySpec,
    policy_in_local_set,
)


def trivial_bellman_uncertainty(gamma: float, n_states: int = 1, n_actions: int = 1) -> BellmanUncertainty:
    """
    >>> trivial_bellman_uncertainty(0.5, n_states=1, n_actions=2).per_state_action.tolist()
    [[2.0, 2.0]]
    """
    cap = 1.0 / (1.0 - gamma)
    return BellmanUncertainty(gamma=gamma, per_state_action=np.full((n_states, n_actions), cap))


def hoeffding_constant(n_events: int, delta: float) -> float:
    """sqrt(1/2 ln(2 n_events / delta))"""
    return float(np.sqrt(0.5 * np.log(2 * n_events / delta)))


def hoeffding_sa_uncertainty(
    counts: np.ndarray, gamma: float, delta: float, n_cells: Optional[int] = None
) -> BellmanUncertainty:
    """
    u(s,a) = 1/(1-gamma) * min(c / sqrt(n(s,a)), 1) with c = sqrt(1/2 ln(2|SxA|/delta)).
    Cells without data get the cap.

    >>> u = hoeffding_sa_uncertainty(np.array([[0, 10**12]]), gamma=0.0, delta=0.1).per_state_action
    >>> float(u[0, 0]), bool(u[0, 1] < 1e-5)
    (1.0, True)
    """
    counts = np.asarray(counts, dtype=float)
    if n_cells is None:
        n_cells = counts.size
    constant = hoeffding_constant(n_cells, delta)
    ratio = np.where(counts > 0, constant / np.sqrt(np.maximum(counts, 1.0)), 1.0)
    return BellmanUncertainty(gamma=gamma, per_state_action=np.minimum(ratio, 1.0) / (1.0 - gamma))


def hoeffding_statewise_uncertainty(
    counts: np.ndarray,
    empirical_policy: TabularPolicy,
    policy: TabularPolicy,
    gamma: float,
    delta: float,
    local_policy_set: Optional[np.ndarray] = None,
) -> BellmanUncertainty:
    """
    Importance-weighted Hoeffding bound for one policy whose action distribution at
    every state is a member of ``local_policy_set`` (default: the deterministic choices):

        u^pi(s) = 1/(1-gamma) * min(sqrt(1/2 ln(2|S x local set|/delta) * sum_a pi(a|s)^2 / n(s,a)), 1)

    A state where the policy puts mass on an action without data (or one the empirical
    policy never takes) gets the cap.
    """
    counts = np.asarray(counts, dtype=float)
    n_states, n_actions = counts.shape
    local_set = np.eye(n_actions) if local_policy_set is None else np.asarray(local_policy_set, dtype=float)

    members = policy_in_local_set(policy.probs, local_set)
    if not np.all(members):
        raise PolicyNotInLocalSetError(
            f'Policy rows at states {np.flatnonzero(~members).tolist()!r} are not in the local policy set'
        )

    constant = hoeffding_constant(n_states * local_set.shape[0], delta)
    supported = policy.probs > 0
    unsupported = supported & ((counts == 0) | (empirical_policy.probs == 0))
    weighted = np.where(supported & ~unsupported, policy.probs**2 / np.maximum(counts, 1.0), 0.0).sum(axis=1)
    ratio = np.where(unsupported.any(axis=1), 1.0, constant * np.sqrt(weighted))
    return BellmanUncertainty(gamma=gamma, per_state=np.minimum(ratio, 1.0) / (1.0 - gamma))


def bellman_uncertainty_from_spec(
    spec: UncertaintySpec, empirical: EmpiricalModel, policy: Optional[TabularPolicy] = None
) -> BellmanUncertainty:
    """
    Build the Bellman uncertainty described by ``spec`` for the empirical model.
    The state-wise Hoeffding bound is specific to one policy and needs ``policy``.
    """
    gamma = empirical.discount
    if spec.kind is UncertaintyKind.TRIVIAL:
        return trivial_bellman_uncertainty(gamma, *empirical.shape)
    if spec.kind is UncertaintyKind.HOEFFDING_SA:
        return hoeffding_sa_uncertainty(empirical.counts, gamma, spec.delta)

    assert policy is not None, 'The state-wise Hoeffding bound needs a policy'
    return hoeffding_statewise_uncertainty(
        counts=empirical.counts,
        empirical_policy=empirical.empirical_policy,
        policy=policy,
        gamma=gamma,
        delta=spec.delta,
        local_policy_set=spec.resolved_local_set(empirical.n_actions),
    )
