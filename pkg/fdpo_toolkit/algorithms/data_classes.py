import dataclasses
import enum
import json

from fdpo_toolkit import constants
from fdpo_toolkit.exceptions import InvalidModelError
from fdpo_toolkit.json_utils import to_json
from fdpo_toolkit.uncertainty.data_classes import UncertaintySpec


class Family(enum.Enum):
    IMITATION = 'imitation'
    NAIVE = 'naive'
    UA_PESSIMISTIC = 'ua_pessimistic'
    PROXIMAL_PESSIMISTIC = 'proximal_pessimistic'

    @property
    def short_name(self) -> str:
        return FAMILY_SHORT_NAMES[self]

    @property
    def is_pessimistic(self) -> bool:
        return self in (Family.UA_PESSIMISTIC, Family.PROXIMAL_PESSIMISTIC)

    @classmethod
    def parse(cls, name: str) -> 'Family':
        """
        Accepts the value or the short name.

        >>> Family.parse('ua'), Family.parse('proximal_pessimistic')
        (<Family.UA_PESSIMISTIC: 'ua_pessimistic'>, <Family.PROXIMAL_PESSIMISTIC: 'proximal_pessimistic'>)
        """
        for family, short_name in FAMILY_SHORT_NAMES.items():
            if name in (family.value, short_name):
                return family
        raise InvalidModelError(f'Unknown algorithm family: {name!r}')


FAMILY_SHORT_NAMES = {
    Family.IMITATION: 'imitation',
    Family.NAIVE: 'naive',
    Family.UA_PESSIMISTIC: 'ua',
    Family.PROXIMAL_PESSIMISTIC: 'proximal',
}


class SolverMethod(enum.Enum):
    POLICY_ITERATION = 'policy_iteration'
    VALUE_ITERATION = 'value_iteration'


@dataclasses.dataclass(frozen=True)
class AlgorithmConfig:
    """
    One FDPO algorithm: the family, its pessimism ``alpha`` and solver caps.
    ``uncertainty`` is only used by the uncertainty-aware family, ``method`` only
    by the naive family. ``alpha=1`` with the uncertainty-aware family is the
    value-lower-bound algorithm.
    """

    family: Family
    alpha: float = 1.0
    uncertainty: UncertaintySpec = dataclasses.field(default_factory=UncertaintySpec)
    method: SolverMethod = SolverMethod.POLICY_ITERATION
    max_sweeps: int = constants.POLICY_ITERATION_MAX_SWEEPS
    max_backups: int = constants.VALUE_ITERATION_MAX_BACKUPS
    value_iteration_tol: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, 'family', Family(self.family))
        object.__setattr__(self, 'method', SolverMethod(self.method))
        if not 0 <= self.alpha <= 1:
            raise InvalidModelError(f'alpha must be in [0, 1], got: {self.alpha!r}')

    @classmethod
    def from_settings(cls, family: Family, alpha: float = 1.0, **kwargs) -> 'AlgorithmConfig':
        """
        Build a config with the solver caps and default delta from the FDPO_* Django settings.
        """
        from fdpo_toolkit.app_settings import get_default_delta, get_solver_limits

        limits = get_solver_limits()
        kwargs.setdefault('uncertainty', UncertaintySpec(delta=get_default_delta()))
        kwargs.setdefault('max_sweeps', limits.policy_iteration_max_sweeps)
        kwargs.setdefault('max_backups', limits.value_iteration_max_backups)
        return cls(family=family, alpha=alpha, **kwargs)

    @property
    def label(self) -> str:
        """
        Name used in result files.

        >>> AlgorithmConfig(Family.NAIVE).label, AlgorithmConfig(Family.UA_PESSIMISTIC, alpha=0.5).label
        ('naive', 'ua@0.5')
        """
        name = self.family.short_name
        if self.family.is_pessimistic and self.alpha != 1.0:
            return f'{name}@{self.alpha:g}'
        return name

    def to_dict(self) -> dict:
        return {
            'family': self.family,
            'alpha': self.alpha,
            'uncertainty': self.uncertainty.to_dict(),
            'method': self.method,
            'max_sweeps': self.max_sweeps,
            'max_backups': self.max_backups,
            'value_iteration_tol': self.value_iteration_tol,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'AlgorithmConfig':
        data = dict(data)
        if 'family' not in data:
            raise InvalidModelError(f'Algorithm config misses "family": {data!r}')
        data['family'] = Family.parse(data['family'])
        if 'uncertainty' in data:
            data['uncertainty'] = UncertaintySpec.from_dict(data['uncertainty'])
        unknown = set(data) - {field.name for field in dataclasses.fields(cls)}
        if unknown:
            raise InvalidModelError(f'Unknown algorithm config fields: {sorted(unknown)!r}')
        return cls(**data)

    def to_json(self) -> str:
        return to_json(self.to_dict())

    @classmethod
    def from_json(cls, content: str) -> 'AlgorithmConfig':
        return cls.from_dict(json.loads(content))
