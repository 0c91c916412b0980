"""
    Regret of optimizing a proxy objective instead of the true one.
"""
from typing import Callable

import numpy as np

from fdpo_toolkit.bounds.data_classes import BoundReport, ProxyInstance
from fdpo_toolkit.constants import ENUMERATION_LIMIT
from fdpo_toolkit.dataset.data_classes import EmpiricalModel
from fdpo_toolkit.mdp.data_classes import TabularMdp, TabularPolicy, ValueVector
from fdpo_toolkit.mdp.evaluation import expected_return
from fdpo_toolkit.mdp.solvers import enumerate_deterministic_policies


def proxy_regret_decomposition(inst: ProxyInstance, **metadata) -> BoundReport:
    """
    Exact over/under decomposition of the regret f(x*) - f(x^*), where x^* maximizes the proxy:

        inf_x ([f(x*) - f(x)] + [f(x) - proxy(x)])  +  sup_x (proxy(x) - f(x))

    >>> report = proxy_regret_decomposition(ProxyInstance(objective=[0.0, 1.0], proxy=[1.0, 1.0]))
    >>> report.lhs, report.inf_term, report.sup_term, report.holds
    (1.0, 0.0, 1.0, True)
    """
    f, f_hat = inst.objective, inst.proxy
    best = float(f[inst.best_index])
    lhs = best - float(f[inst.proxy_best_index])
    inf_term = float(np.min((best - f) + (f - f_hat)))
    sup_term = float(np.max(f_hat - f))
    return BoundReport(lhs=lhs, inf_term=inf_term, sup_term=sup_term, metadata=metadata)


def value_based_bound_report(
    mdp: TabularMdp,
    empirical: EmpiricalModel,
    evaluator: Callable[[EmpiricalModel, TabularPolicy], ValueVector],
    *,
    enumeration_limit: int = ENUMERATION_LIMIT,
    **metadata,
) -> BoundReport:
    """
    Suboptimality bound of "pick the deterministic policy with the highest estimated
    return", as a proxy decomposition: objective = E_rho[v^pi] in the true MDP,
    proxy = E_rho[evaluator(empirical, pi)].
    """
    objective, proxy = [], []
    for probs in enumerate_deterministic_policies(mdp.n_states, mdp.n_actions, enumeration_limit=enumeration_limit):
        policy = TabularPolicy(probs=probs)
        objective.append(expected_return(mdp, policy))
        proxy.append(evaluator(empirical, policy).expected(empirical.start_dist))
    return proxy_regret_decomposition(ProxyInstance(objective=objective, proxy=proxy), **metadata)
