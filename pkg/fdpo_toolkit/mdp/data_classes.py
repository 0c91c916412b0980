import dataclasses
import enum
from typing import Optional, Sequence

import numpy as np

from fdpo_toolkit.constants import PROBABILITY_ATOL
from fdpo_toolkit.exceptions import InvalidModelError


class RewardKind(enum.Enum):
    """
    How a reward is drawn from its mean when collecting data.
    """

    BERNOULLI = 'bernoulli'
    DETERMINISTIC = 'deterministic'


def frozen_array(value, dtype=float) -> np.ndarray:
    """
    Return a read-only copy of the given array-like.

    >>> frozen_array([1, 2]).flags.writeable
    False
    """
    array = np.array(value, dtype=dtype, copy=True)
    array.flags.writeable = False
    return array


def check_stochastic(name: str, array: np.ndarray, atol: float = PROBABILITY_ATOL) -> None:
    """
    Raise InvalidModelError if the last axis of array is not a probability distribution.
    """
    if not np.all(np.isfinite(array)):
        raise InvalidModelError(f'{name} contains non-finite values')
    if np.any(array < 0):
        raise InvalidModelError(f'{name} has negative entries: min={array.min()!r}')
    sums = array.sum(axis=-1)
    worst = np.max(np.abs(sums - 1.0))
    if worst > atol:
        raise InvalidModelError(f'{name} rows must sum to 1, worst deviation: {worst!r}')


@dataclasses.dataclass(frozen=True, eq=False)
class TabularMdp:
    """
    A finite discounted MDP with rewards in [0, 1].

    ``transition`` has shape (n_states, n_actions, n_states), ``mean_reward`` and
    ``reward_kind`` have shape (n_states, n_actions).
    """

    mean_reward: np.ndarray
    transition: np.ndarray
    discount: float
    start_dist: np.ndarray
    reward_kind: Optional[np.ndarray] = None  # array of RewardKind, default: all bernoulli

    def __post_init__(self):
        mean_reward = frozen_array(self.mean_reward)
        transition = frozen_array(self.transition)
        start_dist = frozen_array(self.start_dist)

        if mean_reward.ndim != 2:
            raise InvalidModelError(f'mean_reward must be a [state x action] matrix, got shape {mean_reward.shape!r}')
        n_states, n_actions = mean_reward.shape
        if n_states < 1 or n_actions < 1:
            raise InvalidModelError(f'MDP needs at least one state and one action, got shape {mean_reward.shape!r}')
        if transition.shape != (n_states, n_actions, n_states):
            raise InvalidModelError(
                f'transition shape {transition.shape!r} does not match {(n_states, n_actions, n_states)!r}'
            )
        if start_dist.shape != (n_states,):
            raise InvalidModelError(f'start_dist shape {start_dist.shape!r} does not match {(n_states,)!r}')
        if not 0 <= self.discount < 1:
            raise InvalidModelError(f'discount must be in [0, 1), got: {self.discount!r}')
        if not np.all(np.isfinite(mean_reward)) or mean_reward.min() < 0 or mean_reward.max() > 1:
            raise InvalidModelError('mean_reward entries must be within [0, 1]')
        check_stochastic('transition', transition)
        check_stochastic('start_dist', start_dist)

        if self.reward_kind is None:
            reward_kind = np.full((n_states, n_actions), RewardKind.BERNOULLI, dtype=object)
        else:
            reward_kind = np.array(
                [RewardKind(kind) for kind in np.asarray(self.reward_kind, dtype=object).ravel()], dtype=object
            )
            if reward_kind.size == 1:
                reward_kind = np.full((n_states, n_actions), reward_kind[0], dtype=object)
            elif reward_kind.size != n_states * n_actions:
                raise InvalidModelError(f'reward_kind needs {n_states * n_actions} entries, got {reward_kind.size}')
            reward_kind = reward_kind.reshape(n_states, n_actions)
        reward_kind.flags.writeable = False

        object.__setattr__(self, 'mean_reward', mean_reward)
        object.__setattr__(self, 'transition', transition)
        object.__setattr__(self, 'start_dist', start_dist)
        object.__setattr__(self, 'discount', float(self.discount))
        object.__setattr__(self, 'reward_kind', reward_kind)

    @property
    def n_states(self) -> int:
        return self.mean_reward.shape[0]

    @property
    def n_actions(self) -> int:
        return self.mean_reward.shape[1]

    @property
    def shape(self) -> tuple:
        return self.n_states, self.n_actions

    @property
    def value_cap(self) -> float:
        """Largest possible value of an unpenalized state: 1/(1-discount)"""
        return 1.0 / (1.0 - self.discount)

    @property
    def bernoulli_mask(self) -> np.ndarray:
        return np.vectorize(lambda kind: kind is RewardKind.BERNOULLI, otypes=[bool])(self.reward_kind)

    def replace(self, **changes) -> 'TabularMdp':
        return dataclasses.replace(self, **changes)

    def __repr__(self):
        return f'<TabularMdp {self.n_states} states x {self.n_actions} actions, discount={self.discount!r}>'


@dataclasses.dataclass(frozen=True, eq=False)
class TabularPolicy:
    """
    A state-conditional action distribution, stored as a [state x action] matrix.
    """

    probs: np.ndarray

    def __post_init__(self):
        probs = frozen_array(self.probs)
        if probs.ndim != 2 or 0 in probs.shape:
            raise InvalidModelError(f'Policy must be a non-empty [state x action] matrix, got shape {probs.shape!r}')
        check_stochastic('policy', probs)
        object.__setattr__(self, 'probs', probs)

    @classmethod
    def uniform(cls, n_states: int, n_actions: int) -> 'TabularPolicy':
        return cls(probs=np.full((n_states, n_actions), 1.0 / n_actions))

    @classmethod
    def deterministic(cls, actions: Sequence[int], n_actions: int) -> 'TabularPolicy':
        """
        >>> TabularPolicy.deterministic([1, 0], n_actions=2).probs.tolist()
        [[0.0, 1.0], [1.0, 0.0]]
        """
        actions = np.asarray(actions, dtype=int)
        if actions.ndim != 1 or actions.min(initial=0) < 0 or actions.max(initial=0) >= n_actions:
            raise InvalidModelError(f'Actions out of range [0, {n_actions}): {actions!r}')
        probs = np.zeros((actions.size, n_actions))
        probs[np.arange(actions.size), actions] = 1.0
        return cls(probs=probs)

    @property
    def n_states(self) -> int:
        return self.probs.shape[0]

    @property
    def n_actions(self) -> int:
        return self.probs.shape[1]

    @property
    def is_deterministic(self) -> bool:
        return bool(np.all((self.probs == 0) | (self.probs == 1)))

    @property
    def actions(self) -> np.ndarray:
        """Most likely action per state (lowest index on ties)"""
        return np.argmax(self.probs, axis=1)

    def activity_matrix(self) -> np.ndarray:
        """
        The [state x (state*action)] matrix that maps state-action quantities to
        state quantities under this policy. Row s only has mass on the pairs of state s.

        >>> TabularPolicy(probs=[[0.25, 0.75], [1.0, 0.0]]).activity_matrix().tolist()
        [[0.25, 0.75, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]
        """
        n_states, n_actions = self.probs.shape
        matrix = np.zeros((n_states, n_states * n_actions))
        for state in range(n_states):
            matrix[state, state * n_actions:(state + 1) * n_actions] = self.probs[state]
        return matrix

    def allclose(self, other: 'TabularPolicy', atol: float = PROBABILITY_ATOL) -> bool:
        return self.probs.shape == other.probs.shape and bool(np.allclose(self.probs, other.probs, rtol=0, atol=atol))

    def __repr__(self):
        kind = 'deterministic' if self.is_deterministic else 'stochastic'
        return f'<TabularPolicy {kind} {self.n_states} states x {self.n_actions} actions>'


@dataclasses.dataclass(frozen=True, eq=False)
class ValueVector:
    """
    State values. Values of penalized fixed points may leave [0, 1/(1-discount)].
    """

    values: np.ndarray
    penalized: bool = False

    def __post_init__(self):
        values = frozen_array(self.values)
        assert values.ndim == 1, f'ValueVector must be one-dimensional, got shape {values.shape!r}'
        object.__setattr__(self, 'values', values)

    def expected(self, start_dist: np.ndarray) -> float:
        """E_rho[v]"""
        return float(np.dot(start_dist, self.values))

    def __len__(self):
        return self.values.size


@dataclasses.dataclass(frozen=True, eq=False)
class QVector:
    """
    State-action values, [state x action]
    """

    values: np.ndarray

    def __post_init__(self):
        values = frozen_array(self.values)
        assert values.ndim == 2, f'QVector must be a [state x action] matrix, got shape {values.shape!r}'
        object.__setattr__(self, 'values', values)

    def state_values(self, policy: TabularPolicy) -> ValueVector:
        """v = row-wise expectation of q under the policy"""
        return ValueVector(values=np.sum(policy.probs * self.values, axis=1))
