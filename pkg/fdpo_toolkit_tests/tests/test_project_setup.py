from pathlib import Path

from django.test import SimpleTestCase, override_settings
from packaging.version import Version

import fdpo_toolkit
from fdpo_toolkit import __version__, constants
from fdpo_toolkit.app_settings import SolverLimits, get_default_delta, get_size_grid, get_solver_limits
from fdpo_toolkit.cli import translate_argv


class ProjectSetupTestCase(SimpleTestCase):
    def test_version(self):
        self.assertIsNotNone(__version__)

        version = Version(__version__)  # Will raise InvalidVersion() if wrong formatted
        self.assertEqual(str(version), __version__)

    def test_cli_aliases(self):
        self.assertEqual(
            translate_argv(['fdpo', 'gen-mdp', '--out', 'x.json']), ['fdpo', 'gen_mdp', '--out', 'x.json']
        )
        self.assertEqual(translate_argv(['fdpo', 'verify', 'coverage']), ['fdpo', 'verify', 'coverage'])

    def test_module_loggers_are_used(self):
        package_path = Path(fdpo_toolkit.__file__).parent
        modules = [path for path in package_path.rglob('*.py') if 'logger = logging.getLogger(' in path.read_text()]
        self.assertIn(package_path / 'mdp' / 'solvers.py', modules)
        for path in modules:
            with self.subTest(module=str(path.relative_to(package_path))):
                self.assertIn('logger.', path.read_text())

        for name in ('mdp/evaluation.py', 'bounds/suboptimality.py'):
            self.assertNotIn(package_path / name, modules)


class AppSettingsTestCase(SimpleTestCase):
    def test_fallback_to_constants(self):
        self.assertEqual(get_default_delta(), constants.DEFAULT_DELTA)
        self.assertEqual(get_size_grid(), tuple(constants.SIZE_GRID))

    @override_settings(FDPO_DEFAULT_DELTA=0.05, FDPO_SIZE_GRID=[10, 20])
    def test_settings_win(self):
        self.assertEqual(get_default_delta(), 0.05)
        self.assertEqual(get_size_grid(), (10, 20))

    def test_solver_limits(self):
        # fdpo_toolkit_tests.test_project.settings lowers the caps:
        limits = get_solver_limits()
        self.assertIsInstance(limits, SolverLimits)
        self.assertEqual(limits.policy_iteration_max_sweeps, 1000)
        self.assertEqual(limits.stationary_horizon, 200)
        self.assertEqual(limits.enumeration_limit, constants.ENUMERATION_LIMIT)
