import enum
from typing import Any, Callable

import numpy as np
from django.core.serializers.json import DjangoJSONEncoder

from fdpo_toolkit.constants import CSV_FLOAT_FORMAT


def normalize_float(value) -> float:
    """
    Pass a float through 17 significant digits. Doubles survive this bit-exact.

    >>> normalize_float(0.1)
    0.1
    >>> normalize_float(1 / 3) == 1 / 3
    True
    >>> normalize_float(np.float64(2.5))
    2.5
    """
    return float(format(float(value), CSV_FLOAT_FORMAT))


def format_float(value) -> str:
    """
    Float formatting used in all CSV files.

    >>> format_float(0.5)
    '0.5'
    >>> format_float(1 / 3)
    '0.33333333333333331'
    """
    return format(float(value), CSV_FLOAT_FORMAT)


def make_json_serializable(value: Any, convert_func: Callable = repr) -> Any:
    """
    Convert value to a JSON serializable value: numpy arrays become nested lists,
    numpy scalars Python numbers, enums their value.
    Objects without a known conversion are passed to the convert callback.

    >>> make_json_serializable({'a': np.array([[1.0, 0.5]]), 'b': np.int64(3)})
    {'a': [[1.0, 0.5]], 'b': 3}
    """
    if value is None:
        return None
    elif isinstance(value, enum.Enum):
        return make_json_serializable(value.value, convert_func)
    elif isinstance(value, np.ndarray):
        return make_json_serializable(value.tolist(), convert_func)
    elif isinstance(value, (bool, np.bool_)):
        return bool(value)
    elif isinstance(value, (int, np.integer)):
        return int(value)
    elif isinstance(value, (float, np.floating)):
        return normalize_float(value)
    elif isinstance(value, str):
        return value
    elif isinstance(value, (set, list, tuple)):
        return [make_json_serializable(item, convert_func) for item in value]
    elif isinstance(value, dict):
        return {
            make_json_serializable(key, convert_func): make_json_serializable(item, convert_func)
            for key, item in value.items()
        }

    return convert_func(value)


def to_json(value: Any, sort_keys=True, ensure_ascii=False, convert_func: Callable = repr, **json_kwargs) -> str:
    """
    Convert value to JSON via make_json_serializable() and DjangoJSONEncoder()

    >>> to_json({'b': np.float64(0.25), 'a': [1, 2]})
    '{"a": [1, 2], "b": 0.25}'
    """
    value = make_json_serializable(value, convert_func=convert_func)
    return DjangoJSONEncoder(sort_keys=sort_keys, ensure_ascii=ensure_ascii, **json_kwargs).encode(value)
