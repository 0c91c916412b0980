import json

import numpy as np
from django.test import SimpleTestCase

from fdpo_toolkit.json_utils import format_float, to_json
from fdpo_toolkit.mdp.data_classes import RewardKind
from fdpo_toolkit.parallel import map_tasks
from fdpo_toolkit.rng import derive_seed, make_rng


def square(value):
    return value * value


class JsonUtilsTestCase(SimpleTestCase):
    def test_to_json(self):
        data = {
            'kind': RewardKind.BERNOULLI,
            'matrix': np.array([[0.1, 1 / 3]]),
            'count': np.int64(7),
            'flag': np.bool_(True),
        }
        content = to_json(data)
        self.assertEqual(
            content, '{"count": 7, "flag": true, "kind": "bernoulli", "matrix": [[0.1, 0.3333333333333333]]}'
        )
        self.assertEqual(json.loads(content)['matrix'][0][1], 1 / 3)

    def test_format_float(self):
        for value in (0.1, 1 / 3, 2 / 3, 1e-17, 0.98999999999999999):
            self.assertEqual(float(format_float(value)), value)
        self.assertEqual(format_float(1.0), '1')


class RngTestCase(SimpleTestCase):
    def test_streams(self):
        self.assertEqual(make_rng(5).random(3).tolist(), make_rng(5).random(3).tolist())
        self.assertNotEqual(make_rng(5).random(3).tolist(), make_rng(6).random(3).tolist())

        seeds = {derive_seed(0, sweep, trial) for sweep in range(10) for trial in range(10)}
        self.assertEqual(len(seeds), 100)
        self.assertTrue(all(0 <= seed < 2**64 for seed in seeds))
        self.assertNotEqual(derive_seed(1, 0, 0), derive_seed(2, 0, 0))

    def test_seed_type(self):
        with self.assertRaisesMessage(AssertionError, 'Seed must be an integer, got: float'):
            make_rng(1.5)


class MapTasksTestCase(SimpleTestCase):
    def test_order(self):
        tasks = list(range(7))
        self.assertEqual(map_tasks(square, tasks), [0, 1, 4, 9, 16, 25, 36])
        self.assertEqual(map_tasks(square, tasks, jobs=2), [0, 1, 4, 9, 16, 25, 36])
        self.assertEqual(map_tasks(square, []), [])

        with self.assertRaisesMessage(ValueError, 'jobs must be >= 1, got: 0'):
            map_tasks(square, tasks, jobs=0)
