"""
    Benchmark environments: a slippery gridworld and a many-armed bandit.
"""
import dataclasses
import enum

import numpy as np

from fdpo_toolkit import constants
from fdpo_toolkit.mdp.data_classes import RewardKind, TabularMdp
from fdpo_toolkit.rng import make_rng


class Move(enum.IntEnum):
    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3


MOVE_OFFSETS = {
    Move.UP: (0, -1),
    Move.DOWN: (0, 1),
    Move.LEFT: (-1, 0),
    Move.RIGHT: (1, 0),
}


@dataclasses.dataclass(frozen=True)
class GridworldSpec:
    """
    A width x height grid. An action moves in its direction with probability 1 - slip,
    otherwise in one of the three other directions (slip/3 each). Moves off the grid
    stay in place. Bernoulli rewards with Beta(beta_a, beta_b) distributed means,
    uniform start distribution.
    """

    width: int = constants.GRID_WIDTH
    height: int = constants.GRID_HEIGHT
    slip: float = constants.GRID_SLIP
    discount: float = constants.GRID_DISCOUNT
    beta_a: float = constants.GRID_BETA_A
    beta_b: float = constants.GRID_BETA_B

    @property
    def n_states(self) -> int:
        return self.width * self.height

    def state(self, x: int, y: int) -> int:
        return y * self.width + x

    def step(self, state: int, move: Move) -> int:
        """
        >>> GridworldSpec(width=2, height=2).step(0, Move.RIGHT), GridworldSpec(width=2, height=2).step(0, Move.UP)
        (1, 0)
        """
        y, x = divmod(state, self.width)
        dx, dy = MOVE_OFFSETS[move]
        x = min(max(x + dx, 0), self.width - 1)
        y = min(max(y + dy, 0), self.height - 1)
        return self.state(x, y)

    def transition(self) -> np.ndarray:
        n_states, n_actions = self.n_states, len(Move)
        transition = np.zeros((n_states, n_actions, n_states))
        other = self.slip / (n_actions - 1)
        for state in range(n_states):
            for action in Move:
                for move in Move:
                    probability = 1.0 - self.slip if move is action else other
                    transition[state, action, self.step(state, move)] += probability
        return transition


def generate_gridworld(seed: int, spec: GridworldSpec = GridworldSpec()) -> TabularMdp:
    """
    A gridworld with freshly drawn reward means. Identical seeds give identical MDPs.
    """
    rng = make_rng(seed)
    mean_reward = rng.beta(spec.beta_a, spec.beta_b, size=(spec.n_states, len(Move)))
    return TabularMdp(
        mean_reward=mean_reward,
        transition=spec.transition(),
        discount=spec.discount,
        start_dist=np.full(spec.n_states, 1.0 / spec.n_states),
        reward_kind=RewardKind.BERNOULLI,
    )


def bandit_mdp(
    n_arms: int = constants.BANDIT_ARMS,
    best_mean: float = constants.BANDIT_BEST_MEAN,
    other_mean: float = constants.BANDIT_OTHER_MEAN,
) -> TabularMdp:
    """
    A single state, discount 0 and Bernoulli arms: the first arm has ``best_mean``,
    all others ``other_mean``.

    >>> bandit_mdp(n_arms=3).mean_reward.tolist()
    [[0.99, 0.01, 0.01]]
    """
    mean_reward = np.full((1, n_arms), other_mean)
    mean_reward[0, 0] = best_mean
    return TabularMdp(
        mean_reward=mean_reward,
        transition=np.ones((1, n_arms, 1)),
        discount=0.0,
        start_dist=np.ones(1),
        reward_kind=RewardKind.BERNOULLI,
    )


def bandit_counts(
    n_arms: int = constants.BANDIT_ARMS,
    best_pulls: int = constants.BANDIT_BEST_PULLS,
    other_pulls: int = constants.BANDIT_OTHER_PULLS,
) -> np.ndarray:
    """
    >>> bandit_counts(n_arms=3, best_pulls=5, other_pulls=1).tolist()
    [[5, 1, 1]]
    """
    counts = np.full((1, n_arms), other_pulls, dtype=np.int64)
    counts[0, 0] = best_pulls
    return counts
