from django.test import SimpleTestCase, override_settings

from fdpo_toolkit.checks import fdpo_settings_check


class ChecksTestCase(SimpleTestCase):
    def test_defaults(self):
        self.assertEqual(fdpo_settings_check(app_configs=None), [])

    @override_settings(FDPO_POLICY_ITERATION_MAX_SWEEPS=0, FDPO_DEFAULT_JOBS=True)
    def test_e001(self):
        errors = fdpo_settings_check(app_configs=None)
        self.assertEqual([error.id for error in errors], ['fdpo.E001', 'fdpo.E001'])
        self.assertEqual(errors[0].msg, 'settings.FDPO_POLICY_ITERATION_MAX_SWEEPS must be a positive integer, got: 0')
        self.assertEqual(errors[1].msg, 'settings.FDPO_DEFAULT_JOBS must be a positive integer, got: True')

    @override_settings(FDPO_DEFAULT_DELTA=1)
    def test_e002(self):
        errors = fdpo_settings_check(app_configs=None)
        self.assertEqual(len(errors), 1)
        error = errors[0]
        self.assertEqual(error.id, 'fdpo.E002')
        self.assertEqual(error.msg, 'settings.FDPO_DEFAULT_DELTA must be in (0, 1), got: 1')
        self.assertEqual(error.hint, 'e.g.: FDPO_DEFAULT_DELTA = 0.1')

    @override_settings(FDPO_EPSILON_GRID=[0.0, 1.5])
    def test_e003(self):
        errors = fdpo_settings_check(app_configs=None)
        self.assertEqual(len(errors), 1)
        self.assertEqual(errors[0].id, 'fdpo.E003')

        with self.settings(FDPO_EPSILON_GRID=[]):
            self.assertEqual([error.id for error in fdpo_settings_check(app_configs=None)], ['fdpo.E003'])

    @override_settings(FDPO_SIZE_GRID=[100, 0.5])
    def test_e004(self):
        errors = fdpo_settings_check(app_configs=None)
        self.assertEqual(len(errors), 1)
        error = errors[0]
        self.assertEqual(error.id, 'fdpo.E004')
        self.assertEqual(
            error.msg, 'settings.FDPO_SIZE_GRID must be a non-empty list of dataset sizes, got: [100, 0.5]'
        )
