import dataclasses
from typing import Optional, Sequence

import numpy as np

from fdpo_toolkit.exceptions import InvalidModelError
from fdpo_toolkit.json_utils import to_json
from fdpo_toolkit.mdp.data_classes import frozen_array


# A bound "holds" if lhs <= rhs + HOLD_TOLERANCE:
HOLD_TOLERANCE = 1e-9


@dataclasses.dataclass(frozen=True, eq=False)
class ProxyInstance:
    """
    A finite decision problem: choose the index maximizing ``objective``,
    while only ``proxy`` is observable. Ties go to the lowest index.
    """

    objective: np.ndarray
    proxy: np.ndarray
    choices: Optional[Sequence] = None

    def __post_init__(self):
        objective = frozen_array(self.objective)
        proxy = frozen_array(self.proxy)
        if objective.ndim != 1 or objective.size == 0:
            raise InvalidModelError(f'objective must be a non-empty vector, got shape {objective.shape!r}')
        if proxy.shape != objective.shape:
            raise InvalidModelError(f'proxy shape {proxy.shape!r} != objective shape {objective.shape!r}')
        if self.choices is not None and len(self.choices) != objective.size:
            raise InvalidModelError(f'{len(self.choices)} choices for {objective.size} objective values')
        object.__setattr__(self, 'objective', objective)
        object.__setattr__(self, 'proxy', proxy)

    def __len__(self):
        return self.objective.size

    @property
    def best_index(self) -> int:
        """x*: argmax of the objective"""
        return int(np.argmax(self.objective))

    @property
    def proxy_best_index(self) -> int:
        """x^*: argmax of the proxy"""
        return int(np.argmax(self.proxy))


@dataclasses.dataclass(frozen=True)
class BoundReport:
    """
    lhs: the actual regret / suboptimality, rhs = inf_term + sup_term: its bound.
    """

    lhs: float
    inf_term: float
    sup_term: float
    metadata: dict = dataclasses.field(default_factory=dict)

    @property
    def rhs(self) -> float:
        return self.inf_term + self.sup_term

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + HOLD_TOLERANCE

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {
            'lhs': self.lhs,
            'rhs': self.rhs,
            'inf_term': self.inf_term,
            'sup_term': self.sup_term,
            'holds': self.holds,
            'metadata': self.metadata,
        }

    def to_json(self) -> str:
        return to_json(self.to_dict())

    def __str__(self):
        verdict = 'holds' if self.holds else 'VIOLATED'
        return (
            f'lhs={self.lhs:.6g} <= rhs={self.rhs:.6g}'
            f' (inf={self.inf_term:.6g}, sup={self.sup_term:.6g}): {verdict}'
        )


@dataclasses.dataclass(frozen=True)
class VerificationResult:
    """
    Outcome of a numerical property check over an ensemble of random instances.
    """

    name: str
    trials: int
    successes: int
    required_frequency: float = 1.0
    details: dict = dataclasses.field(default_factory=dict)

    @property
    def frequency(self) -> float:
        return self.successes / self.trials if self.trials else 1.0

    @property
    def passed(self) -> bool:
        return self.frequency >= self.required_frequency

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'trials': self.trials,
            'successes': self.successes,
            'frequency': self.frequency,
            'required_frequency': self.required_frequency,
            'passed': self.passed,
            'details': self.details,
        }

    def __str__(self):
        verdict = 'passed' if self.passed else 'FAILED'
        return (
            f'{self.name}: {self.successes}/{self.trials} = {self.frequency:.4f}'
            f' (required >= {self.required_frequency:.4f}): {verdict}'
        )
