#!/usr/bin/env python3
"""
    Run management commands with the test project settings, e.g.:

        ./manage.py test
        ./manage.py verify identities --trials 20
"""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'fdpo_toolkit_tests.test_project.settings')
    from django.core.management import execute_from_command_line

    from fdpo_toolkit.cli import translate_argv

    execute_from_command_line(translate_argv(sys.argv))


if __name__ == '__main__':
    main()
