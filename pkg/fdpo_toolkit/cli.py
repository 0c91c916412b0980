"""
    The "fdpo" console script: manage.py for the fdpo_toolkit commands.

    Sub-commands may be written with dashes: "fdpo gen-mdp" runs "gen_mdp".
"""
import os
import sys

from django.core.management import execute_from_command_line


COMMAND_ALIASES = {
    'gen-mdp': 'gen_mdp',
}


def translate_argv(argv: list) -> list:
    """
    >>> translate_argv(['fdpo', 'gen-mdp', '--seed', '1'])
    ['fdpo', 'gen_mdp', '--seed', '1']
    >>> translate_argv(['fdpo'])
    ['fdpo']
    """
    argv = list(argv)
    if len(argv) > 1:
        argv[1] = COMMAND_ALIASES.get(argv[1], argv[1])
    return argv


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'fdpo_toolkit.settings')
    execute_from_command_line(translate_argv(sys.argv))
