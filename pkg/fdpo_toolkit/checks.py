from django.core.checks import Error, register

from fdpo_toolkit.app_settings import get_setting


POSITIVE_INT_SETTINGS = (
    'POLICY_ITERATION_MAX_SWEEPS',
    'VALUE_ITERATION_MAX_BACKUPS',
    'STATIONARY_HORIZON',
    'ENUMERATION_LIMIT',
    'DEFAULT_JOBS',
)


@register()
def fdpo_settings_check(app_configs, **kwargs):
    errors = []

    for name in POSITIVE_INT_SETTINGS:
        value = get_setting(name)
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            errors.append(
                Error(
                    msg=f'settings.FDPO_{name} must be a positive integer, got: {value!r}',
                    id='fdpo.E001',
                )
            )

    delta = get_setting('DEFAULT_DELTA')
    if not isinstance(delta, (int, float)) or not 0 < delta < 1:
        errors.append(
            Error(
                msg=f'settings.FDPO_DEFAULT_DELTA must be in (0, 1), got: {delta!r}',
                hint='e.g.: FDPO_DEFAULT_DELTA = 0.1',
                id='fdpo.E002',
            )
        )

    epsilon_grid = get_setting('EPSILON_GRID')
    if not epsilon_grid or any(not 0 <= epsilon <= 1 for epsilon in epsilon_grid):
        errors.append(
            Error(
                msg=f'settings.FDPO_EPSILON_GRID must be a non-empty list of values in [0, 1], got: {epsilon_grid!r}',
                id='fdpo.E003',
            )
        )

    size_grid = get_setting('SIZE_GRID')
    if not size_grid or any(not isinstance(size, int) or size < 1 for size in size_grid):
        errors.append(
            Error(
                msg=f'settings.FDPO_SIZE_GRID must be a non-empty list of dataset sizes, got: {size_grid!r}',
                id='fdpo.E004',
            )
        )

    return errors
