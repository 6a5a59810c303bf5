# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: 
"""
import json
import os
import sys
import tempfile
import unittest

sys.path.append('..')
from chiraltalbot.config import PRESETS, ROOT_DIR, load_config, resolve_output_dir
from chiraltalbot.constants import NM
from chiraltalbot.errors import ConfigError
from chiraltalbot.models import ChiralMirror, CoatedSiN, PerfectChiral
from chiraltalbot.scenarios import Scenario

BASE = {
    "scenario": "coated_g2",
    "molecule": {"mass_da": 1000.0, "omega1_rad_s": 6.283185307179586e15, "R01_cgs_1e40": 1000.0,
                 "g_e": 0.2, "g_m": 5.0},
    "geometry": {"d_nm": 80.0, "b_nm": 160.0, "L_mm": 10.0, "f": 0.45},
    "run": {"v_z_mps": 140.0},
}


def with_changes(**blocks):
    data = json.loads(json.dumps(BASE))
    for key, value in blocks.items():
        if isinstance(value, dict) and isinstance(data.get(key), dict):
            data[key].update(value)
        else:
            data[key] = value
    return data


class ConfigTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, data, name="config.json"):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f)
        return path

    def test_presets_load(self):
        for name in PRESETS:
            config = load_config(name)
            self.assertIn(config.scenario, list(Scenario))
        fig2i = load_config("fig2i")
        runs = fig2i.scenario_runs(fig2i.velocity())
        self.assertEqual(runs.right.g2.wall, PerfectChiral(1))
        self.assertAlmostEqual(runs.right.L_over_talbot, 5.12, delta=0.01)
        self.assertEqual(len(load_config("fig5").sweep_grid().bins), 10)

    def test_conversion(self):
        config = load_config(self.write(BASE))
        runs = config.scenario_runs(config.velocity())
        self.assertIsInstance(runs.right.g2.wall, CoatedSiN)
        self.assertAlmostEqual(runs.right.period, 80 * NM, delta=1e-20)
        self.assertEqual(config.engine_settings().l_max, 64)
        self.assertEqual(config.engine_settings(for_sweep=True).l_max_cap, 64)

    def test_open_fraction_out_of_range(self):
        with self.assertRaises(ConfigError) as ctx:
            load_config(self.write(with_changes(geometry={"f": 1.2})))
        self.assertIn("open_fraction", str(ctx.exception))

    def test_unknown_key_rejected(self):
        with self.assertRaises(ConfigError):
            load_config(self.write(with_changes(geometry={"color": "red"})))

    def test_walls_only_with_custom(self):
        walls = {"g1": {"kind": "none"}, "g2": {"kind": "chiral_mirror", "r": 0.1, "r_c": 1.0}, "g3": {"kind": "none"}}
        with self.assertRaises(ConfigError):
            load_config(self.write(with_changes(walls=walls)))
        with self.assertRaises(ConfigError):
            load_config(self.write(with_changes(scenario="custom")))
        config = load_config(self.write(with_changes(scenario="custom", walls=walls)))
        self.assertEqual(config.scenario_runs().right.g2.wall, ChiralMirror(0.1, 1.0))

    def test_missing_velocity(self):
        config = load_config(self.write(with_changes(run={"v_z_mps": None})))
        with self.assertRaises(ConfigError):
            config.velocity()

    def test_velocity_bins_must_tile(self):
        with self.assertRaises(ConfigError):
            load_config(self.write(with_changes(run={"v_range": {"min": 100.0, "max": 205.0, "bin": 10.0}})))

    def test_invalid_json_and_missing_file(self):
        path = os.path.join(self.tmp.name, "broken.json")
        with open(path, 'w', encoding='utf-8') as f:
            f.write("{")
        with self.assertRaises(ConfigError):
            load_config(path)
        with self.assertRaises(ConfigError):
            load_config(os.path.join(self.tmp.name, "absent.json"))

    def test_fingerprint_ignores_output_dir(self):
        a = load_config(self.write(with_changes(output_dir="out_a"), "a.json"))
        b = load_config(self.write(with_changes(output_dir="out_b"), "b.json"))
        c = load_config(self.write(with_changes(run={"v_z_mps": 150.0}), "c.json"))
        self.assertEqual(a.fingerprint(), b.fingerprint())
        self.assertNotEqual(a.fingerprint(), c.fingerprint())

    def test_output_dir(self):
        config = load_config(self.write(BASE))
        self.assertEqual(resolve_output_dir(config), os.path.join(ROOT_DIR, "output"))
        self.assertEqual(resolve_output_dir(config, self.tmp.name), self.tmp.name)


if __name__ == '__main__':
    unittest.main()
