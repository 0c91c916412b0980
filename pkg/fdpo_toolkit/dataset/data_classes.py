import dataclasses

import numpy as np

from fdpo_toolkit.exceptions import InvalidModelError
from fdpo_toolkit.mdp.data_classes import TabularMdp, TabularPolicy, check_stochastic, frozen_array


@dataclasses.dataclass(frozen=True, eq=False)
class DataDistribution:
    """
    Distribution over state-action pairs that dataset cells are drawn from, [state x action]
    """

    probs: np.ndarray

    def __post_init__(self):
        probs = frozen_array(self.probs)
        if probs.ndim != 2:
            raise InvalidModelError(f'DataDistribution must be a [state x action] matrix, got shape {probs.shape!r}')
        check_stochastic('data distribution', probs.ravel())
        object.__setattr__(self, 'probs', probs)

    @classmethod
    def point_mass(cls, n_states: int, n_actions: int, state: int, action: int) -> 'DataDistribution':
        probs = np.zeros((n_states, n_actions))
        probs[state, action] = 1.0
        return cls(probs=probs)

    @classmethod
    def uniform(cls, n_states: int, n_actions: int) -> 'DataDistribution':
        return cls(probs=np.full((n_states, n_actions), 1.0 / (n_states * n_actions)))


@dataclasses.dataclass(frozen=True, eq=False)
class TransitionDataset:
    """
    A multiset of (state, action, reward, next_state) records, stored column-wise.
    """

    n_states: int
    n_actions: int
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray

    def __post_init__(self):
        states = frozen_array(self.states, dtype=np.int64)
        actions = frozen_array(self.actions, dtype=np.int64)
        rewards = frozen_array(self.rewards)
        next_states = frozen_array(self.next_states, dtype=np.int64)

        size = states.size
        if not (actions.size == rewards.size == next_states.size == size):
            raise InvalidModelError('Dataset columns must have equal length')
        if size:
            if states.min() < 0 or states.max() >= self.n_states:
                raise InvalidModelError(f'Dataset states out of range [0, {self.n_states})')
            if next_states.min() < 0 or next_states.max() >= self.n_states:
                raise InvalidModelError(f'Dataset next states out of range [0, {self.n_states})')
            if actions.min() < 0 or actions.max() >= self.n_actions:
                raise InvalidModelError(f'Dataset actions out of range [0, {self.n_actions})')
            if not np.all(np.isfinite(rewards)) or rewards.min() < 0 or rewards.max() > 1:
                raise InvalidModelError('Dataset rewards must be within [0, 1]')

        object.__setattr__(self, 'states', states)
        object.__setattr__(self, 'actions', actions)
        object.__setattr__(self, 'rewards', rewards)
        object.__setattr__(self, 'next_states', next_states)

    @classmethod
    def empty(cls, n_states: int, n_actions: int) -> 'TransitionDataset':
        return cls(
            n_states=n_states, n_actions=n_actions, states=[], actions=[], rewards=[], next_states=[]
        )

    @classmethod
    def from_records(cls, n_states: int, n_actions: int, records) -> 'TransitionDataset':
        """
        >>> TransitionDataset.from_records(1, 2, [(0, 1, 0.5, 0)]).counts.tolist()
        [[0, 1]]
        """
        records = list(records)
        columns = list(zip(*records)) if records else ([], [], [], [])
        return cls(n_states, n_actions, *columns)

    def __len__(self):
        return int(self.states.size)

    @property
    def records(self) -> list:
        return [
            (int(s), int(a), float(r), int(s_next))
            for s, a, r, s_next in zip(self.states, self.actions, self.rewards, self.next_states)
        ]

    @property
    def cells(self) -> np.ndarray:
        """Flat state-action index of every record"""
        return self.states * self.n_actions + self.actions

    @property
    def counts(self) -> np.ndarray:
        """Number of records per state-action, [state x action]"""
        flat = np.bincount(self.cells, minlength=self.n_states * self.n_actions)
        return flat.reshape(self.n_states, self.n_actions)

    @property
    def state_counts(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def __repr__(self):
        return f'<TransitionDataset {len(self)} records, {self.n_states} states x {self.n_actions} actions>'


@dataclasses.dataclass(frozen=True, eq=False)
class EmpiricalModel:
    """
    Maximum-likelihood model of a dataset: the empirical MDP (reward, transition),
    the empirical policy and the counts. Cells without data were filled from ``fill_seed``.

    The discount and start distribution are not estimated: they are known a priori.
    """

    reward: np.ndarray
    transition: np.ndarray
    empirical_policy: TabularPolicy
    counts: np.ndarray
    discount: float
    start_dist: np.ndarray
    fill_seed: int

    def __post_init__(self):
        object.__setattr__(self, 'reward', frozen_array(self.reward))
        object.__setattr__(self, 'transition', frozen_array(self.transition))
        object.__setattr__(self, 'counts', frozen_array(self.counts, dtype=np.int64))
        object.__setattr__(self, 'start_dist', frozen_array(self.start_dist))
        check_stochastic('empirical transition', self.transition)

    @property
    def n_states(self) -> int:
        return self.reward.shape[0]

    @property
    def n_actions(self) -> int:
        return self.reward.shape[1]

    @property
    def shape(self) -> tuple:
        return self.reward.shape

    @property
    def state_counts(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def as_mdp(self) -> TabularMdp:
        """The empirical MDP"""
        return TabularMdp(
            mean_reward=self.reward,
            transition=self.transition,
            discount=self.discount,
            start_dist=self.start_dist,
        )

    def __repr__(self):
        return f'<EmpiricalModel {self.n_states} states x {self.n_actions} actions, {int(self.counts.sum())} records>'
