import dataclasses
import enum
import json
from typing import Optional

import numpy as np

from fdpo_toolkit.constants import DEFAULT_DELTA, PROBABILITY_ATOL
from fdpo_toolkit.exceptions import InvalidModelError
from fdpo_toolkit.json_utils import to_json
from fdpo_toolkit.mdp.data_classes import TabularPolicy, check_stochastic, frozen_array


# Relative slack for the [0, cap] range checks of uncertainty vectors:
RANGE_RTOL = 1e-9


class UncertaintyKind(enum.Enum):
    TRIVIAL = 'trivial'
    HOEFFDING_SA = 'hoeffding_sa'
    HOEFFDING_STATEWISE = 'hoeffding_statewise'


@dataclasses.dataclass(frozen=True, eq=False)
class UncertaintySpec:
    """
    Which Bellman uncertainty function to use.

    ``local_policy_set`` is a [k x action] matrix of state-local action distributions,
    only used by the state-wise Hoeffding bound. None means the deterministic
    action choices (the identity matrix).

    >>> UncertaintySpec(kind=UncertaintyKind.HOEFFDING_SA, delta=0.05).to_json()
    '{"delta": 0.05, "kind": "hoeffding_sa"}'
    """

    kind: UncertaintyKind = UncertaintyKind.HOEFFDING_SA
    delta: float = DEFAULT_DELTA
    local_policy_set: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, 'kind', UncertaintyKind(self.kind))
        if not 0 < self.delta < 1:
            raise InvalidModelError(f'delta must be in (0, 1), got: {self.delta!r}')
        if self.local_policy_set is not None:
            local_set = frozen_array(self.local_policy_set)
            if local_set.ndim != 2 or local_set.shape[0] == 0:
                raise InvalidModelError(
                    f'local_policy_set must be a non-empty [k x action] matrix, got shape {local_set.shape!r}'
                )
            check_stochastic('local policy set', local_set)
            object.__setattr__(self, 'local_policy_set', local_set)

    def resolved_local_set(self, n_actions: int) -> np.ndarray:
        if self.local_policy_set is None:
            return np.eye(n_actions)
        if self.local_policy_set.shape[1] != n_actions:
            raise InvalidModelError(
                f'local_policy_set has {self.local_policy_set.shape[1]} actions, the model has {n_actions}'
            )
        return self.local_policy_set

    def to_dict(self) -> dict:
        data = {'kind': self.kind, 'delta': self.delta}
        if self.local_policy_set is not None:
            data['local_policy_set'] = self.local_policy_set
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'UncertaintySpec':
        try:
            kind = UncertaintyKind(data['kind'])
        except (KeyError, ValueError) as err:
            raise InvalidModelError(f'Invalid uncertainty kind in: {data!r}') from err
        return cls(
            kind=kind,
            delta=float(data.get('delta', DEFAULT_DELTA)),
            local_policy_set=data.get('local_policy_set'),
        )

    def to_json(self) -> str:
        return to_json(self.to_dict())

    @classmethod
    def from_json(cls, content: str) -> 'UncertaintySpec':
        return cls.from_dict(json.loads(content))


def _check_range(name: str, values: np.ndarray, cap: float) -> None:
    if not np.all(np.isfinite(values)):
        raise InvalidModelError(f'{name} contains non-finite values')
    slack = RANGE_RTOL * max(1.0, cap)
    if values.min(initial=0.0) < -slack or values.max(initial=0.0) > cap + slack:
        raise InvalidModelError(
            f'{name} must be within [0, {cap!r}], got [{values.min()!r}, {values.max()!r}]'
        )


@dataclasses.dataclass(frozen=True, eq=False)
class BellmanUncertainty:
    """
    Either a state-action-wise matrix u (decomposable: the state-wise uncertainty of
    a policy is A^pi u) or the state-wise vector of one specific policy.
    """

    gamma: float
    per_state_action: Optional[np.ndarray] = None
    per_state: Optional[np.ndarray] = None

    def __post_init__(self):
        if (self.per_state_action is None) == (self.per_state is None):
            raise InvalidModelError('BellmanUncertainty needs exactly one of per_state_action or per_state')
        cap = 1.0 / (1.0 - self.gamma)
        for name in ('per_state_action', 'per_state'):
            value = getattr(self, name)
            if value is not None:
                value = frozen_array(value)
                _check_range(f'Bellman uncertainty {name}', value, cap)
                object.__setattr__(self, name, value)

    @property
    def decomposable(self) -> bool:
        return self.per_state_action is not None

    def for_policy(self, policy: TabularPolicy) -> np.ndarray:
        """State-wise uncertainty of the policy"""
        if self.decomposable:
            return np.sum(policy.probs * self.per_state_action, axis=1)
        return self.per_state

    def __repr__(self):
        form = 'state-action-wise' if self.decomposable else 'state-wise'
        return f'<BellmanUncertainty {form}, gamma={self.gamma!r}>'


@dataclasses.dataclass(frozen=True, eq=False)
class ValueUncertainty:
    """
    mu^pi, the visitation-propagated Bellman uncertainty of a policy.
    """

    gamma: float
    per_state: np.ndarray

    def __post_init__(self):
        per_state = frozen_array(self.per_state)
        _check_range('Value uncertainty', per_state, 1.0 / (1.0 - self.gamma) ** 2)
        object.__setattr__(self, 'per_state', per_state)

    def expected(self, start_dist: np.ndarray) -> float:
        return float(np.dot(start_dist, self.per_state))


def policy_in_local_set(probs: np.ndarray, local_set: np.ndarray, atol: float = PROBABILITY_ATOL) -> np.ndarray:
    """
    Per state: is the action distribution a member of the local set?

    >>> policy_in_local_set(np.array([[1.0, 0.0], [0.5, 0.5]]), np.eye(2)).tolist()
    [True, False]
    """
    distance = np.abs(probs[:, None, :] - local_set[None, :, :]).max(axis=2)
    return np.any(distance <= atol, axis=1)
