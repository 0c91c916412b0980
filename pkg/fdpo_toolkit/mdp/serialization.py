"""
    JSON (de-)serialization of MDPs and policies.

    MDP documents have the fields: n_states, n_actions, discount, start_dist,
    mean_reward (row-major [state][action]), transition (row-major
    [state*action][state]) and reward_kind (row-major [state][action]).
"""
import json
from pathlib import Path

import numpy as np
from bx_py_utils.path import assert_is_file

from fdpo_toolkit.exceptions import InvalidModelError
from fdpo_toolkit.json_utils import to_json
from fdpo_toolkit.mdp.data_classes import TabularMdp, TabularPolicy


MDP_FIELDS = ('n_states', 'n_actions', 'discount', 'start_dist', 'mean_reward', 'transition', 'reward_kind')


def mdp_to_dict(mdp: TabularMdp) -> dict:
    return {
        'n_states': mdp.n_states,
        'n_actions': mdp.n_actions,
        'discount': mdp.discount,
        'start_dist': mdp.start_dist,
        'mean_reward': mdp.mean_reward,
        'transition': mdp.transition.reshape(mdp.n_states * mdp.n_actions, mdp.n_states),
        'reward_kind': [[kind.value for kind in row] for row in mdp.reward_kind],
    }


def mdp_from_dict(data: dict) -> TabularMdp:
    missing = [field for field in MDP_FIELDS if field not in data]
    if missing:
        raise InvalidModelError(f'MDP document misses the fields: {missing!r}')
    n_states, n_actions = int(data['n_states']), int(data['n_actions'])
    try:
        mean_reward = np.array(data['mean_reward'], dtype=float).reshape(n_states, n_actions)
        transition = np.array(data['transition'], dtype=float).reshape(n_states, n_actions, n_states)
        reward_kind = np.array(data['reward_kind'], dtype=object).reshape(n_states, n_actions)
    except ValueError as err:
        raise InvalidModelError(f'MDP document has inconsistent shapes: {err}') from err
    return TabularMdp(
        mean_reward=mean_reward,
        transition=transition,
        discount=float(data['discount']),
        start_dist=np.array(data['start_dist'], dtype=float),
        reward_kind=reward_kind,
    )


def mdp_to_json(mdp: TabularMdp) -> str:
    return to_json(mdp_to_dict(mdp), indent=2)


def mdp_from_json(content: str) -> TabularMdp:
    return mdp_from_dict(json.loads(content))


def dump_mdp(mdp: TabularMdp, path: Path) -> None:
    Path(path).write_text(mdp_to_json(mdp))


def load_mdp(path: Path) -> TabularMdp:
    path = Path(path)
    assert_is_file(path)
    return mdp_from_json(path.read_text())


def policy_to_dict(policy: TabularPolicy) -> dict:
    return {
        'n_states': policy.n_states,
        'n_actions': policy.n_actions,
        'probs': policy.probs,
    }


def policy_from_dict(data: dict) -> TabularPolicy:
    probs = np.array(data['probs'], dtype=float)
    if probs.shape != (data['n_states'], data['n_actions']):
        raise InvalidModelError(f'Policy probs shape {probs.shape!r} does not match the declared shape')
    return TabularPolicy(probs=probs)


def dump_policy(policy: TabularPolicy, path: Path, **metadata) -> None:
    data = policy_to_dict(policy)
    if metadata:
        data['metadata'] = metadata
    Path(path).write_text(to_json(data, indent=2))


def load_policy(path: Path) -> TabularPolicy:
    path = Path(path)
    assert_is_file(path)
    return policy_from_dict(json.loads(path.read_text()))
