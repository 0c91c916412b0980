from pathlib import Path

from fdpo_toolkit.experiments.environments import GridworldSpec, bandit_mdp, generate_gridworld
from fdpo_toolkit.management.base import FdpoBaseCommand
from fdpo_toolkit.mdp.serialization import dump_mdp


class Command(FdpoBaseCommand):
    """
    Manage command "gen_mdp": Write a random gridworld (or the bandit) as MDP JSON
    """

    help = 'Generate a gridworld MDP (or the many-armed bandit) and write it as JSON'

    def add_arguments(self, parser):
        parser.add_argument('--seed', type=int, default=0, help='Seed of the reward means (default: %(default)s)')
        parser.add_argument('--out', type=Path, required=True, help='MDP JSON file to write')
        parser.add_argument('--bandit', action='store_true', help='Write the many-armed bandit instead')
        parser.add_argument('--width', type=int, default=GridworldSpec.width)
        parser.add_argument('--height', type=int, default=GridworldSpec.height)
        parser.add_argument('--slip', type=float, default=GridworldSpec.slip)

    def run(self, *, seed, out, bandit, width, height, slip, **options):
        if bandit:
            mdp = bandit_mdp()
        else:
            mdp = generate_gridworld(seed, GridworldSpec(width=width, height=height, slip=slip))
        dump_mdp(mdp, out)
        self.stdout.write(f'{mdp!r} written to {out}')
