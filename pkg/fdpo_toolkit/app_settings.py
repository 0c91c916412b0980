"""
    Access to the FDPO_* Django settings, with fallback to fdpo_toolkit.constants
"""
import dataclasses

from django.conf import settings

from fdpo_toolkit import constants


@dataclasses.dataclass(frozen=True)
class SolverLimits:
    """
    Iteration caps and guards handed down to the numeric core.
    """

    policy_iteration_max_sweeps: int = constants.POLICY_ITERATION_MAX_SWEEPS
    value_iteration_max_backups: int = constants.VALUE_ITERATION_MAX_BACKUPS
    enumeration_limit: int = constants.ENUMERATION_LIMIT
    stationary_horizon: int = constants.STATIONARY_HORIZON


def get_setting(name: str):
    return getattr(settings, f'FDPO_{name}', getattr(constants, name))


def get_solver_limits() -> SolverLimits:
    return SolverLimits(
        policy_iteration_max_sweeps=get_setting('POLICY_ITERATION_MAX_SWEEPS'),
        value_iteration_max_backups=get_setting('VALUE_ITERATION_MAX_BACKUPS'),
        enumeration_limit=get_setting('ENUMERATION_LIMIT'),
        stationary_horizon=get_setting('STATIONARY_HORIZON'),
    )


def get_default_delta() -> float:
    return get_setting('DEFAULT_DELTA')


def get_default_jobs() -> int:
    return get_setting('DEFAULT_JOBS')


def get_epsilon_grid() -> tuple:
    return tuple(get_setting('EPSILON_GRID'))


def get_size_grid() -> tuple:
    return tuple(get_setting('SIZE_GRID'))
