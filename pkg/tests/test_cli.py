# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: 
"""
import io
import json
import os
import sys
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

sys.path.append('..')
from chiraltalbot.cli import main
from chiraltalbot.config import CLI_VERSION

IDEAL = {
    "scenario": "custom",
    "molecule": {"mass_da": 328.0, "omega1_rad_s": 6.283185307179586e15, "R01_cgs_1e40": 700.0},
    "geometry": {"d_nm": 257.0, "b_nm": 160.0, "L_mm": 50.0, "f": 0.45},
    "walls": {"g1": {"kind": "none"}, "g2": {"kind": "none"}, "g3": {"kind": "none"}},
    "run": {"v_z_mps": 180.0, "x3_samples": 256, "l_max": 16, "l_max_cap": 16},
}


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = os.path.join(self.tmp.name, "out")

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, data):
        path = os.path.join(self.tmp.name, "config.json")
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f)
        return path

    def run_cli(self, *argv):
        err = io.StringIO()
        with redirect_stderr(err), redirect_stdout(io.StringIO()):
            code = main(list(argv))
        return code, err.getvalue()

    def test_version(self):
        out = io.StringIO()
        with redirect_stdout(out):
            self.assertEqual(main(["--version"]), 0)
        self.assertIn(CLI_VERSION, out.getvalue())

    def test_config_error_exit_code(self):
        data = json.loads(json.dumps(IDEAL))
        data["geometry"]["f"] = 1.2
        code, err = self.run_cli("fringe", self.write(data), "-o", self.out)
        self.assertEqual(code, 2)
        self.assertIn("ERROR config: open_fraction", err)

    def test_bad_thread_count_is_a_config_error(self):
        with mock.patch.dict(os.environ, {"CHIRALTALBOT_THREADS": "four"}):
            code, err = self.run_cli("fringe", self.write(IDEAL), "-o", self.out)
        self.assertEqual(code, 2)
        self.assertIn("ERROR config: CHIRALTALBOT_THREADS", err)

    def test_nyquist_exit_code(self):
        data = json.loads(json.dumps(IDEAL))
        data["oracle"] = {"n_periods": 32, "samples_per_period": 64, "L_over_talbot": 0.5}
        code, err = self.run_cli("oracle-check", self.write(data), "-o", self.out)
        self.assertEqual(code, 2)
        self.assertIn("ERROR nyquist", err)

    def test_fringe_outputs(self):
        code, _ = self.run_cli("fringe", self.write(IDEAL), "-o", self.out)
        self.assertEqual(code, 0)
        with open(os.path.join(self.out, "fringe.csv"), 'r', encoding='utf-8') as f:
            lines = f.read().split("\n")
        self.assertEqual(lines[0], "x3_nm,S_left,S_right")
        self.assertEqual(lines[-1], "")
        # no wall interaction: both enantiomers give the same fringe
        for line in lines[1:-1]:
            _, left, right = line.split(",")
            self.assertEqual(left, right)
        with open(os.path.join(self.out, "meta.json"), 'r', encoding='utf-8') as f:
            meta = json.load(f)
        self.assertEqual(meta["x_c_g2_right_nm"], 0.0)
        self.assertAlmostEqual(meta["L_over_talbot"], 5.12, delta=0.01)
        self.assertAlmostEqual(meta["R01_cgs_1e40"], 700.0, places=6)
        self.assertEqual(meta["delta_S"], 0.0)
        self.assertTrue(os.path.exists(os.path.join(self.out, "run.log")))

    def test_fringe_is_reproducible(self):
        path = self.write(IDEAL)
        self.run_cli("fringe", path, "-o", self.out)
        with open(os.path.join(self.out, "fringe.csv"), 'rb') as f:
            first = f.read()
        self.run_cli("fringe", path, "-o", self.out)
        with open(os.path.join(self.out, "fringe.csv"), 'rb') as f:
            self.assertEqual(f.read(), first)

    def test_visibility_rows(self):
        code, _ = self.run_cli("visibility", self.write(IDEAL), "-o", self.out)
        self.assertEqual(code, 0)
        with open(os.path.join(self.out, "visibility.csv"), 'r', encoding='utf-8') as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], "v_mps,vis_left,vis_right")
        self.assertEqual(len(lines), 11)
        self.assertTrue(lines[1].startswith("105,"))

    def test_potential_tables(self):
        code, _ = self.run_cli("potential", "fig3i", "-o", self.out)
        self.assertEqual(code, 0)
        for i in (1, 2, 3):
            with open(os.path.join(self.out, f"potential_g{i}.csv"), 'r', encoding='utf-8') as f:
                lines = f.read().splitlines()
            self.assertEqual(lines[0], "x_nm,V_J,F_N")
            self.assertEqual(len(lines), 201)
            self.assertLess(float(lines[1].split(",")[1]), 0.0)

    def test_oracle_check_ideal(self):
        data = json.loads(json.dumps(IDEAL))
        data["run"].update({"l_max": 256, "l_max_cap": 256})
        data["oracle"] = {"L_over_talbot": 1.0}
        code, err = self.run_cli("oracle-check", self.write(data), "-o", self.out)
        self.assertEqual(code, 0, msg=err)
        with open(os.path.join(self.out, "oracle.csv"), 'r', encoding='utf-8') as f:
            self.assertEqual(f.readline().strip(), "x3_nm,S_engine,S_oracle")


if __name__ == '__main__':
    unittest.main()
