import inspect

from django.core.management.base import CommandError

from fdpo_toolkit.app_settings import get_default_delta, get_default_jobs
from fdpo_toolkit.bounds.verification import EnsembleConfig, get_verification, verification_targets
from fdpo_toolkit.management.base import FdpoBaseCommand


def verification_kwargs(func, *, trials, seed, delta, alpha, jobs) -> dict:
    """
    Keep only the options the verification accepts. The random-instance
    verifications get ``delta`` through their ensemble.
    """
    parameters = inspect.signature(func).parameters
    candidates = {
        'trials': trials,
        'seed': seed,
        'delta': delta,
        'alpha': alpha,
        'jobs': jobs,
        'config': EnsembleConfig(delta=delta),
    }
    return {name: value for name, value in candidates.items() if name in parameters and value is not None}


class Command(FdpoBaseCommand):
    """
    Manage command "verify": Check a bound or identity numerically, exit non-zero on failure
    """

    help = 'Run a numerical verification of the bounds and identities'

    def add_arguments(self, parser):
        parser.add_argument('target', choices=verification_targets())
        parser.add_argument('--trials', type=int, default=None, help='Number of random instances')
        parser.add_argument('--delta', type=float, default=None, help='Failure probability (default: settings)')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--alpha', type=float, default=None, help='Pessimism of the bound reports')
        parser.add_argument('--jobs', type=int, default=None, help='Worker processes (default: settings)')

    def run(self, *, target, trials, delta, seed, alpha, jobs, **options):
        func = get_verification(target)
        kwargs = verification_kwargs(
            func,
            trials=trials,
            seed=seed,
            delta=get_default_delta() if delta is None else delta,
            alpha=alpha,
            jobs=jobs or get_default_jobs(),
        )
        results = func(**kwargs)
        for result in results:
            self.stdout.write(str(result))

        failed = [result.name for result in results if not result.passed]
        if failed:
            raise CommandError(f'Verification {target!r} failed: {", ".join(failed)}')
        self.stdout.write(self.style.SUCCESS(f'Verification {target!r} passed ({len(results)} properties)'))
