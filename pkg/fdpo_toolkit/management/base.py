from django.core.management.base import BaseCommand, CommandError

from fdpo_toolkit.exceptions import FdpoError


class FdpoBaseCommand(BaseCommand):
    """
    Base of all fdpo_toolkit commands: implement run(), FdpoError becomes a CommandError.
    """

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except FdpoError as err:
            raise CommandError(f'{err.__class__.__name__}: {err}') from err

    def run(self, **options):
        raise NotImplementedError
