from django.apps import AppConfig


class FdpoToolkitAppConfig(AppConfig):
    """
    Django app for tabular fixed-dataset policy optimization.
    Provides the management commands: gen_mdp, solve, experiment and verify
    """

    name = 'fdpo_toolkit'
    verbose_name = 'Fixed-Dataset Policy Optimization'

    def ready(self):
        # Register system checks:
        import fdpo_toolkit.checks  # noqa
