# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: 
"""
import math
import os
import sys
import tempfile
import unittest

import numpy as np

sys.path.append('..')
from chiraltalbot.config import load_config
from chiraltalbot.errors import ConfigError
from chiraltalbot.journal import SweepJournal
from chiraltalbot.models import BareSiN, CoatedSiN, Molecule, PerfectChiral
from chiraltalbot.scenarios import (
    FIG2_GEOMETRY,
    FIG34_GEOMETRY,
    Scenario,
    ScenarioRuns,
    SweepBase,
    SweepGrid,
    build_scenario,
    delta_s,
    run_sweep,
)
from chiraltalbot.talbot import EngineSettings, FringeResult, signal, visibility_curve

OMEGA1 = 2 * math.pi * 1e15
HEXAHELICENE = Molecule.from_lab_units(328.0, OMEGA1, 700.0)
MOLECULE = Molecule.from_lab_units(1000.0, OMEGA1, 1000.0, 0.2, 5.0)
FAST = EngineSettings(l_max=16, l_max_cap=16, samples_per_period=256)
SMALL_GRID = dict(v_min=130.0, v_max=150.0, v_bin=20.0)


class ScenarioTestCase(unittest.TestCase):

    def test_perfect_chiral_g2(self):
        runs = build_scenario(Scenario.PERFECT_CHIRAL_G2, HEXAHELICENE, FIG2_GEOMETRY, 180.0)
        self.assertIsInstance(runs.right.g1.wall, BareSiN)
        self.assertEqual(runs.right.g2.wall, PerfectChiral(1))
        self.assertIsInstance(runs.right.g3.wall, BareSiN)
        self.assertTrue(runs.right.molecule.is_right_handed)
        self.assertFalse(runs.left.molecule.is_right_handed)

    def test_coated_scenarios(self):
        coated_g2 = build_scenario(Scenario.COATED_G2, MOLECULE, FIG34_GEOMETRY, 140.0)
        self.assertIsInstance(coated_g2.right.g1.wall, BareSiN)
        self.assertIsInstance(coated_g2.right.g2.wall, CoatedSiN)
        all_coated = build_scenario(Scenario.ALL_COATED, MOLECULE, FIG34_GEOMETRY, 140.0, coating_handedness=-1)
        for grating in all_coated.right.gratings:
            self.assertIsInstance(grating.wall, CoatedSiN)
            self.assertFalse(grating.wall.coating.is_right_handed)
        # the coating does not change between the enantiomer runs
        self.assertEqual(all_coated.left.g2, all_coated.right.g2)

    def test_custom_needs_walls(self):
        with self.assertRaises(ConfigError):
            build_scenario(Scenario.CUSTOM, MOLECULE, FIG34_GEOMETRY, 140.0)

    def test_runs_must_be_enantiomers(self):
        runs = build_scenario(Scenario.PERFECT_CHIRAL_G2, HEXAHELICENE, FIG2_GEOMETRY, 180.0)
        with self.assertRaises(ConfigError):
            ScenarioRuns(runs.left, runs.right.with_velocity(150.0))

    def test_fig2ii_visibility_curves_differ(self):
        config = load_config("fig2ii")
        runs = config.scenario_runs()
        centres = config.velocity_grid().bin_centers
        settings = EngineSettings(l_max=64, l_max_cap=64, samples_per_period=256)
        left = visibility_curve(runs.left, (centres[0], centres[-1]), len(centres), settings)
        right = visibility_curve(runs.right, (centres[0], centres[-1]), len(centres), settings)
        self.assertEqual(len(right), 10)
        for (v, _), centre in zip(right, centres):
            self.assertAlmostEqual(v, centre, places=9)
        self.assertGreater(max(abs(a[1] - b[1]) for a, b in zip(left, right)), 1e-3)

    def test_fig2_transmission_deficit(self):
        runs = build_scenario(Scenario.PERFECT_CHIRAL_G2, HEXAHELICENE, FIG2_GEOMETRY, 180.0)
        settings = EngineSettings(l_max=32, l_max_cap=32, samples_per_period=256)
        left, right = signal(runs.left, settings), signal(runs.right, settings)
        self.assertEqual(left.cutoffs[1].x_c, 0.0)
        self.assertGreater(right.cutoffs[1].x_c, 0.0)
        self.assertLess(right.dc_level, left.dc_level)
        self.assertGreater(delta_s(left, right, 0.45, FIG2_GEOMETRY.d), 0.0)


class MetricTestCase(unittest.TestCase):

    def fringe(self, scale=1.0):
        x3 = np.linspace(-1.0, 1.0, 201)
        return FringeResult(x3, scale * (2.0 + np.cos(np.pi * x3)), 0.5, 2.0)

    def test_delta_s(self):
        self.assertEqual(delta_s(self.fringe(), self.fringe(), 0.5, 1.0), 0.0)
        self.assertAlmostEqual(delta_s(self.fringe(), self.fringe(0.9), 0.5, 1.0), 0.1, places=12)

    def test_delta_s_needs_common_grid(self):
        other = FringeResult(np.linspace(-1.0, 1.0, 101), np.ones(101), 0.0, 1.0)
        with self.assertRaises(ConfigError):
            delta_s(self.fringe(), other, 0.5, 1.0)


class SweepGridTestCase(unittest.TestCase):

    def test_default_bins(self):
        grid = SweepGrid.default()
        self.assertEqual(len(grid.R_values), 21)
        self.assertEqual(len(grid.g_e_values), 17)
        self.assertEqual(len(grid.bins), 10)
        self.assertEqual(grid.bin_centers[0], 105.0)
        self.assertEqual(grid.bin_centers[-1], 195.0)
        self.assertAlmostEqual(grid.R_values[-1], 10000.0, places=6)

    def test_invalid_grid(self):
        with self.assertRaises(ConfigError):
            SweepGrid((1000.0,), (0.2,), v_min=100.0, v_max=205.0, v_bin=10.0)
        with self.assertRaises(ConfigError):
            SweepGrid((1000.0, 500.0), (0.2,))


class SweepTestCase(unittest.TestCase):

    def test_single_cell(self):
        grid = SweepGrid((1000.0,), (0.2,), **SMALL_GRID)
        result = run_sweep(grid, SweepBase(), FAST)
        self.assertEqual(len(result.cells), 1)
        cell = result.cells[0]
        self.assertIsNone(cell.error)
        self.assertGreater(cell.delta_S, 0.0)
        self.assertGreaterEqual(cell.delta_V_max, 0.0)

    def test_workers_and_journal_resume(self):
        grid = SweepGrid((1000.0,), (0.2, 0.4), **SMALL_GRID)
        serial = run_sweep(grid, SweepBase(), FAST, workers=1)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "sweep_journal.json")
            parallel = run_sweep(grid, SweepBase(), FAST, workers=2, journal=SweepJournal(path, "abc"))
            self.assertEqual(serial.rows(), parallel.rows())
            resumed_journal = SweepJournal(path, "abc")
            self.assertEqual(len(resumed_journal.cells), 2)
            resumed = run_sweep(grid, SweepBase(), FAST, journal=resumed_journal)
            self.assertEqual(resumed.rows(), serial.rows())

    def test_metrics_grow_with_chiral_coupling(self):
        grid = SweepGrid((100.0, 1000.0, 10000.0), (0.1, 0.5))
        result = run_sweep(grid, SweepBase(), EngineSettings(l_max=32, l_max_cap=32), workers=2)
        self.assertEqual(result.failures, [])
        cells = {(c.R_cgs_1e40, c.g_e): c for c in result.cells}
        for g_e in grid.g_e_values:
            row = [cells[(r, g_e)].delta_S for r in grid.R_values]
            self.assertEqual(row, sorted(row), msg=f"g_e={g_e}")
        corner = cells[(100.0, 0.1)].delta_S
        self.assertGreater(cells[(10000.0, 0.5)].delta_S, corner)
        self.assertGreater(cells[(1000.0, 0.5)].delta_S, corner)
        for cell in result.cells:
            self.assertGreaterEqual(cell.delta_V_max, 0.0)


if __name__ == '__main__':
    unittest.main()
