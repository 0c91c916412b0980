"""
    Numerical verification of the decomposition, the uncertainty identities and the
    suboptimality bounds on ensembles of small random instances.

    Every check returns VerificationResult objects. Instance draws depend only on
    (seed, trial), so results do not depend on the number of worker processes.
"""
import dataclasses
import logging
from functools import partial
from typing import Callable, Dict, List

import numpy as np

from fdpo_toolkit.algorithms.families import naive_fdpe, naive_fdpo, ua_fdpe, ua_fdpo
from fdpo_toolkit.algorithms.proximal import (
    grid_search_proximal_fdpo,
    grid_search_policy_iteration,
    proximal_fdpe,
    proximal_fdpo,
)
from fdpo_toolkit.bounds.data_classes import BoundReport, ProxyInstance, VerificationResult
from fdpo_toolkit.bounds.proxy import proxy_regret_decomposition, value_based_bound_report
from fdpo_toolkit.bounds.suboptimality import (
    naive_bound_report,
    proximal_bound_report,
    proximal_uncertainty_sup,
    ua_bound_report,
)
from fdpo_toolkit.constants import DEFAULT_DELTA, SIMPLEX_GRID_RESOLUTION
from fdpo_toolkit.dataset.collection import collect, collect_with_counts
from fdpo_toolkit.dataset.data_classes import DataDistribution
from fdpo_toolkit.dataset.empirical import build_empirical_model
from fdpo_toolkit.mdp.data_classes import TabularPolicy
from fdpo_toolkit.mdp.evaluation import (
    exact_policy_evaluation,
    expected_return,
    policy_reward,
    solve_visitation_system,
    state_action_values,
)
from fdpo_toolkit.mdp.generators import random_mdp, random_policy
from fdpo_toolkit.mdp.solvers import brute_force_optimal, enumerate_deterministic_policies
from fdpo_toolkit.parallel import map_tasks
from fdpo_toolkit.rng import derive_seed, make_rng
from fdpo_toolkit.uncertainty.bellman import hoeffding_sa_uncertainty, trivial_bellman_uncertainty
from fdpo_toolkit.uncertainty.data_classes import UncertaintyKind, UncertaintySpec
from fdpo_toolkit.uncertainty.value import relative_error_bound, relative_value_uncertainty, value_uncertainty


logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = 1e-9


@dataclasses.dataclass(frozen=True)
class EnsembleConfig:
    """
    Random instances: random_mdp() of the given size, a dataset of ``dataset_size``
    records drawn uniformly over all state-actions.
    """

    n_states: int = 4
    n_actions: int = 2
    gamma: float = 0.9
    dataset_size: int = 30
    delta: float = DEFAULT_DELTA

    @property
    def spec(self) -> UncertaintySpec:
        return UncertaintySpec(kind=UncertaintyKind.HOEFFDING_SA, delta=self.delta)


def draw_instance(config: EnsembleConfig, seed: int, trial: int) -> tuple:
    """(true MDP, empirical model) of one ensemble member"""
    mdp = random_mdp(config.n_states, config.n_actions, config.gamma, make_rng(derive_seed(seed, trial, 0)))
    phi = DataDistribution.uniform(config.n_states, config.n_actions)
    dataset = collect(mdp, phi, config.dataset_size, seed=derive_seed(seed, trial, 1))
    empirical = build_empirical_model(dataset, mdp, fill_seed=derive_seed(seed, trial, 2))
    return mdp, empirical


def _deterministic_policies(n_states: int, n_actions: int) -> list:
    return [TabularPolicy(probs=probs) for probs in enumerate_deterministic_policies(n_states, n_actions)]


def _max_error(actual: np.ndarray, expected: np.ndarray) -> float:
    """Largest deviation relative to the magnitude of the expected values (at least 1)"""
    expected = np.asarray(expected)
    scale = max(1.0, float(np.max(np.abs(expected), initial=0.0)))
    return float(np.max(np.abs(np.asarray(actual) - expected), initial=0.0)) / scale


def _count(name: str, flags: List[bool], required_frequency: float, **details) -> VerificationResult:
    return VerificationResult(
        name=name,
        trials=len(flags),
        successes=int(sum(bool(flag) for flag in flags)),
        required_frequency=required_frequency,
        details=details,
    )


def _mean_of(outcomes: list, key: str) -> float:
    return float(np.mean([outcome[key] for outcome in outcomes])) if outcomes else 0.0


def _log_results(results: List[VerificationResult]) -> List[VerificationResult]:
    for result in results:
        if result.passed:
            logger.info('%s', result)
        else:
            logger.warning('%s', result)
    return results


# -----------------------------------------------------------------------------------------------


def tightness_instance() -> ProxyInstance:
    """
    Two choices, objective (0, 1), proxy (1, 1): the proxy tie goes to choice 0
    and the regret equals the bound.
    """
    return ProxyInstance(objective=[0.0, 1.0], proxy=[1.0, 1.0])


def verify_proxy_regret(trials: int = 10_000, seed: int = 0, max_choices: int = 20) -> List[VerificationResult]:
    rng = make_rng(derive_seed(seed))
    flags, worst_slack = [], np.inf
    for _ in range(trials):
        size = int(rng.integers(1, max_choices + 1))
        # Rounding creates ties in both objectives:
        objective = np.round(rng.random(size), 1)
        proxy = np.round(rng.random(size), 1)
        report = proxy_regret_decomposition(ProxyInstance(objective=objective, proxy=proxy))
        flags.append(report.holds)
        worst_slack = min(worst_slack, report.slack)

    tight = proxy_regret_decomposition(tightness_instance())
    return _log_results(
        [
            _count('proxy_regret_holds', flags, 1.0, worst_slack=worst_slack),
            _count('proxy_regret_tight', [tight.lhs == tight.rhs], 1.0, report=tight.to_dict()),
        ]
    )


# -----------------------------------------------------------------------------------------------


def _identity_trial(config: EnsembleConfig, seed: int, trial: int) -> Dict[str, float]:
    mdp, empirical = draw_instance(config, seed, trial)
    rng = make_rng(derive_seed(seed, trial, 3))
    n_states, n_actions = mdp.shape
    policy = TabularPolicy(probs=random_policy(n_states, n_actions, rng))
    other = TabularPolicy(probs=random_policy(n_states, n_actions, rng))
    values = rng.uniform(0.0, mdp.value_cap, size=n_states)
    alpha = float(rng.random())
    gamma = mdp.discount

    # Value error equals the Bellman residual summed over the visitation:
    true_values = exact_policy_evaluation(mdp, policy).values
    residual = policy_reward(policy.probs, state_action_values(mdp.mean_reward, mdp.transition, gamma, values))
    residual_visitation = _max_error(
        solve_visitation_system(policy.probs, mdp.transition, gamma, residual - values), true_values - values
    )

    # Pessimistic values are the naive values minus alpha times the value uncertainty:
    sa_unc = hoeffding_sa_uncertainty(empirical.counts, gamma, config.delta)
    expected = naive_fdpe(empirical, policy).values - alpha * value_uncertainty(empirical, policy, sa_unc).per_state
    decomposition = _max_error(ua_fdpe(empirical, policy, sa_unc, alpha).values, expected)

    relative = _max_error(
        relative_value_uncertainty(empirical, policy, other, sa_unc),
        value_uncertainty(empirical, policy, sa_unc).per_state - value_uncertainty(empirical, other, sa_unc).per_state,
    )

    # The trivial uncertainty is below the proximal conversion:
    trivial_unc = trivial_bellman_uncertainty(gamma, n_states, n_actions)
    bound = relative_error_bound(empirical, policy, empirical.empirical_policy, trivial_unc)
    excess = float(np.max(value_uncertainty(empirical, policy, trivial_unc).per_state - bound))

    return {
        'residual_visitation': residual_visitation,
        'ua_decomposition': decomposition,
        'relative_value_uncertainty': relative,
        'proximal_conversion': excess,
    }


def verify_identities(
    trials: int = 200, seed: int = 0, config: EnsembleConfig = EnsembleConfig(), jobs: int = 1
) -> List[VerificationResult]:
    outcomes = map_tasks(partial(_identity_trial, config, seed), range(trials), jobs=jobs)
    results = []
    for name in ('residual_visitation', 'ua_decomposition', 'relative_value_uncertainty', 'proximal_conversion'):
        errors = [outcome[name] for outcome in outcomes]
        results.append(
            _count(name, [error <= IDENTITY_TOLERANCE for error in errors], 1.0, max_error=max(errors, default=0.0))
        )
    return _log_results(results)


# -----------------------------------------------------------------------------------------------


def _coverage_trial(config: EnsembleConfig, seed: int, trial: int) -> Dict[str, bool]:
    mdp, empirical = draw_instance(config, seed, trial)
    rng = make_rng(derive_seed(seed, trial, 3))
    gamma = mdp.discount
    sa_unc = hoeffding_sa_uncertainty(empirical.counts, gamma, config.delta)
    random_values = rng.uniform(0.0, mdp.value_cap, size=mdp.n_states)

    bellman, naive_error, lower_bound = True, True, True
    for policy in _deterministic_policies(*mdp.shape):
        true_values = exact_policy_evaluation(mdp, policy).values
        policy_unc = sa_unc.for_policy(policy)
        for values in (np.zeros(mdp.n_states), true_values, random_values):
            true_backup = state_action_values(mdp.mean_reward, mdp.transition, gamma, values)
            empirical_backup = state_action_values(empirical.reward, empirical.transition, gamma, values)
            gap = np.abs(policy_reward(policy.probs, true_backup - empirical_backup))
            bellman &= bool(np.all(gap <= policy_unc + 1e-12))

        mu = value_uncertainty(empirical, policy, sa_unc).per_state
        naive_values = naive_fdpe(empirical, policy).values
        naive_error &= bool(np.all(np.abs(true_values - naive_values) <= mu + IDENTITY_TOLERANCE))

        pessimistic = ua_fdpe(empirical, policy, sa_unc, alpha=1.0).values
        lower_bound &= bool(np.all(pessimistic <= true_values + IDENTITY_TOLERANCE))

    return {'bellman_coverage': bellman, 'naive_error_bound': naive_error, 'value_lower_bound': lower_bound}


def verify_coverage(
    trials: int = 500, seed: int = 0, config: EnsembleConfig = EnsembleConfig(), jobs: int = 1
) -> List[VerificationResult]:
    """
    High-probability events over fresh datasets, each must hold with frequency >= 1 - delta.
    """
    outcomes = map_tasks(partial(_coverage_trial, config, seed), range(trials), jobs=jobs)
    return _log_results(
        [
            _count(name, [outcome[name] for outcome in outcomes], 1.0 - config.delta)
            for name in ('bellman_coverage', 'naive_error_bound', 'value_lower_bound')
        ]
    )


# -----------------------------------------------------------------------------------------------


def _same_report(first: BoundReport, second: BoundReport) -> bool:
    return all(
        abs(getattr(first, name) - getattr(second, name)) <= IDENTITY_TOLERANCE
        for name in ('lhs', 'inf_term', 'sup_term')
    )


def _naive_bound_trial(config: EnsembleConfig, seed: int, trial: int) -> Dict:
    mdp, empirical = draw_instance(config, seed, trial)
    report = naive_bound_report(mdp, empirical, config.spec, seed=seed, trial=trial)
    return {'holds': report.holds, 'rhs': report.rhs}


def verify_naive_bound(
    trials: int = 500, seed: int = 0, config: EnsembleConfig = EnsembleConfig(), jobs: int = 1
) -> List[VerificationResult]:
    outcomes = map_tasks(partial(_naive_bound_trial, config, seed), range(trials), jobs=jobs)
    return _log_results(
        [
            _count(
                'naive_bound_holds',
                [outcome['holds'] for outcome in outcomes],
                1.0 - config.delta,
                mean_rhs=_mean_of(outcomes, 'rhs'),
            )
        ]
    )


def _ua_bound_trial(config: EnsembleConfig, alpha: float, seed: int, trial: int) -> Dict:
    mdp, empirical = draw_instance(config, seed, trial)
    report = ua_bound_report(mdp, empirical, config.spec, alpha, seed=seed, trial=trial)
    naive = naive_bound_report(mdp, empirical, config.spec)
    reduced = ua_bound_report(mdp, empirical, config.spec, 0.0)
    fully_pessimistic = report if alpha == 1.0 else ua_bound_report(mdp, empirical, config.spec, 1.0)
    return {
        'holds': report.holds,
        'rhs': report.rhs,
        'naive_rhs': naive.rhs,
        'alpha_zero_reduction': _same_report(reduced, naive),
        'alpha_one_sup': fully_pessimistic.sup_term == 0.0,
    }


def verify_ua_bound(
    trials: int = 500,
    seed: int = 0,
    alpha: float = 1.0,
    config: EnsembleConfig = EnsembleConfig(),
    jobs: int = 1,
) -> List[VerificationResult]:
    outcomes = map_tasks(partial(_ua_bound_trial, config, alpha, seed), range(trials), jobs=jobs)
    return _log_results(
        [
            _count(
                'ua_bound_holds',
                [outcome['holds'] for outcome in outcomes],
                1.0 - config.delta,
                alpha=alpha,
                mean_rhs=_mean_of(outcomes, 'rhs'),
                mean_naive_rhs=_mean_of(outcomes, 'naive_rhs'),
            ),
            _count('ua_alpha_zero_reduction', [outcome['alpha_zero_reduction'] for outcome in outcomes], 1.0),
            _count('ua_alpha_one_sup_zero', [outcome['alpha_one_sup'] for outcome in outcomes], 1.0),
        ]
    )


def _proximal_bound_trial(config: EnsembleConfig, alpha: float, resolution: float, seed: int, trial: int) -> Dict:
    mdp, empirical = draw_instance(config, seed, trial)
    report = proximal_bound_report(mdp, empirical, alpha, config.spec, seed=seed, trial=trial)
    naive = naive_bound_report(mdp, empirical, config.spec)
    reduced = proximal_bound_report(mdp, empirical, 0.0, config.spec)

    trivial_spec = UncertaintySpec(kind=UncertaintyKind.TRIVIAL, delta=config.delta)
    trivial = proximal_bound_report(mdp, empirical, 1.0, trivial_spec)

    # The closed form supremum must dominate the grid restricted one:
    sa_unc = hoeffding_sa_uncertainty(empirical.counts, empirical.discount, config.delta)
    exact_sup = proximal_uncertainty_sup(empirical, sa_unc, alpha)
    grid_result = grid_search_policy_iteration(
        np.array(sa_unc.per_state_action),
        empirical.transition,
        empirical.discount,
        empirical.empirical_policy.probs,
        alpha,
        resolution,
    )
    grid_sup = float(np.dot(empirical.start_dist, grid_result.values))

    return {
        'holds': report.holds,
        'rhs': report.rhs,
        'alpha_zero_reduction': _same_report(reduced, naive),
        'trivial_sup_nonpositive': trivial.sup_term <= IDENTITY_TOLERANCE,
        'sup_dominates_grid': exact_sup >= grid_sup - IDENTITY_TOLERANCE,
    }


def verify_proximal_bound(
    trials: int = 500,
    seed: int = 0,
    alpha: float = 1.0,
    config: EnsembleConfig = EnsembleConfig(),
    resolution: float = SIMPLEX_GRID_RESOLUTION,
    jobs: int = 1,
) -> List[VerificationResult]:
    outcomes = map_tasks(partial(_proximal_bound_trial, config, alpha, resolution, seed), range(trials), jobs=jobs)
    return _log_results(
        [
            _count(
                'proximal_bound_holds',
                [outcome['holds'] for outcome in outcomes],
                1.0 - config.delta,
                alpha=alpha,
                mean_rhs=_mean_of(outcomes, 'rhs'),
            ),
            _count('proximal_alpha_zero_reduction', [outcome['alpha_zero_reduction'] for outcome in outcomes], 1.0),
            _count(
                'proximal_trivial_sup_nonpositive', [outcome['trivial_sup_nonpositive'] for outcome in outcomes], 1.0
            ),
            _count('proximal_sup_dominates_grid', [outcome['sup_dominates_grid'] for outcome in outcomes], 1.0),
        ]
    )


# -----------------------------------------------------------------------------------------------


def _value_based_trial(config: EnsembleConfig, seed: int, trial: int) -> Dict[str, bool]:
    mdp, empirical = draw_instance(config, seed, trial)
    sa_unc = hoeffding_sa_uncertainty(empirical.counts, empirical.discount, config.delta)

    def pessimistic(empirical_model, policy):
        return ua_fdpe(empirical_model, policy, sa_unc, alpha=1.0)

    naive = value_based_bound_report(mdp, empirical, naive_fdpe)
    ua = value_based_bound_report(mdp, empirical, pessimistic)
    return {'naive': naive.holds, 'ua': ua.holds}


def verify_value_based(
    trials: int = 200, seed: int = 0, config: EnsembleConfig = EnsembleConfig(), jobs: int = 1
) -> List[VerificationResult]:
    """
    The value-based decomposition is exact, it must hold on every instance.
    """
    outcomes = map_tasks(partial(_value_based_trial, config, seed), range(trials), jobs=jobs)
    return _log_results(
        [
            _count(f'value_based_{name}', [outcome[name] for outcome in outcomes], 1.0)
            for name in ('naive', 'ua')
        ]
    )


# -----------------------------------------------------------------------------------------------


def _optimizer_trial(gamma: float, delta: float, resolution: float, seed: int, trial: int) -> Dict[str, float]:
    rng = make_rng(derive_seed(seed, trial, 0))
    n_states = int(rng.integers(1, 4))
    n_actions = int(rng.integers(2, 4))
    alpha = float(rng.random())
    mdp = random_mdp(n_states, n_actions, gamma, rng)

    # Ten records per state, so every empirical policy row lies on the simplex grid:
    counts = np.stack([rng.multinomial(10, rng.dirichlet(np.ones(n_actions))) for _ in range(n_states)])
    dataset = collect_with_counts(mdp, counts, seed=derive_seed(seed, trial, 1))
    empirical = build_empirical_model(dataset, mdp, fill_seed=derive_seed(seed, trial, 2))
    start = empirical.start_dist
    spec = UncertaintySpec(kind=UncertaintyKind.HOEFFDING_SA, delta=delta)
    sa_unc = hoeffding_sa_uncertainty(empirical.counts, gamma, delta)

    _, naive_best = brute_force_optimal(empirical.as_mdp())
    naive_gap = abs(expected_return(empirical.as_mdp(), naive_fdpo(empirical)) - naive_best)

    ua_best = max(
        ua_fdpe(empirical, policy, sa_unc, alpha).expected(start)
        for policy in _deterministic_policies(n_states, n_actions)
    )
    ua_gap = abs(ua_fdpe(empirical, ua_fdpo(empirical, spec, alpha), sa_unc, alpha).expected(start) - ua_best)

    grid_best = float(np.dot(start, grid_search_proximal_fdpo(empirical, alpha, resolution).values))
    proximal_gap = abs(proximal_fdpe(empirical, proximal_fdpo(empirical, alpha), alpha).expected(start) - grid_best)

    return {'naive': naive_gap, 'ua': ua_gap, 'proximal': proximal_gap}


def verify_optimizers(
    trials: int = 100,
    seed: int = 0,
    gamma: float = 0.9,
    delta: float = DEFAULT_DELTA,
    resolution: float = 1e-3,
    tolerance: float = 1e-6,
    jobs: int = 1,
) -> List[VerificationResult]:
    """
    Every optimizer must reach the brute force maximum of its own penalized objective.
    """
    outcomes = map_tasks(partial(_optimizer_trial, gamma, delta, resolution, seed), range(trials), jobs=jobs)
    results = []
    for name in ('naive', 'ua', 'proximal'):
        gaps = [outcome[name] for outcome in outcomes]
        results.append(
            _count(f'{name}_optimizer', [gap <= tolerance for gap in gaps], 1.0, max_gap=max(gaps, default=0.0))
        )
    return _log_results(results)


VERIFICATIONS: Dict[str, Callable[..., List[VerificationResult]]] = {
    'proxy-regret': verify_proxy_regret,
    'identities': verify_identities,
    'coverage': verify_coverage,
    'naive-bound': verify_naive_bound,
    'ua-bound': verify_ua_bound,
    'proximal-bound': verify_proximal_bound,
    'value-based': verify_value_based,
    'optimizers': verify_optimizers,
}

# Command line names of the bound checks:
VERIFICATION_ALIASES = {
    'theorem1': 'proxy-regret',
    'lemma3': 'coverage',
    'theorem2': 'naive-bound',
    'theorem3': 'ua-bound',
    'theorem4': 'proximal-bound',
}


def verification_targets() -> List[str]:
    """
    >>> verification_targets()[:5]
    ['lemma3', 'theorem1', 'theorem2', 'theorem3', 'theorem4']
    """
    return sorted(VERIFICATION_ALIASES) + sorted(VERIFICATIONS)


def get_verification(target: str) -> Callable[..., List[VerificationResult]]:
    """
    >>> get_verification('theorem2') is get_verification('naive-bound') is verify_naive_bound
    True
    """
    name = VERIFICATION_ALIASES.get(target, target)
    try:
        return VERIFICATIONS[name]
    except KeyError:
        raise KeyError(f'Unknown verification target {target!r}, choose from: {verification_targets()!r}') from None
