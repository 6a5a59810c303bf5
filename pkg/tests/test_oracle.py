# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: 
"""
import math
import sys
import unittest
from dataclasses import replace

import numpy as np

sys.path.append('..')
from chiraltalbot.constants import NM
from chiraltalbot.errors import ConfigError, NyquistError
from chiraltalbot.models import NO_WALL, Molecule
from chiraltalbot.oracle import (
    OracleComparison,
    WaveGrid,
    compare,
    free_flight,
    propagate_three_gratings,
    ray_binning_signal,
)
from chiraltalbot.scenarios import FIG2_GEOMETRY, Scenario, build_scenario
from chiraltalbot.talbot import EngineSettings, signal

OMEGA1 = 2 * math.pi * 1e15
HEXAHELICENE = Molecule.from_lab_units(328.0, OMEGA1, 700.0)
SETTINGS = EngineSettings(l_max=256, l_max_cap=256, samples_per_period=256)


def ideal_config(L_over_talbot):
    cfg = build_scenario(Scenario.CUSTOM, HEXAHELICENE, FIG2_GEOMETRY, 180.0, walls=[NO_WALL] * 3).right
    return replace(cfg, separation_L=L_over_talbot * cfg.talbot_length)


class WaveGridTestCase(unittest.TestCase):

    def test_default_grid_is_valid(self):
        grid = WaveGrid.for_config(ideal_config(1.0))
        grid.validate()
        self.assertEqual(grid.n_samples, 64 * 512)
        self.assertAlmostEqual(grid.width, 64 * 257 * NM, delta=1e-18)

    def test_coarse_grid_fails_nyquist(self):
        grid = WaveGrid.for_config(ideal_config(0.5), n_periods=32, samples_per_period=64)
        with self.assertRaises(NyquistError) as ctx:
            grid.validate()
        self.assertEqual(ctx.exception.code, "nyquist")
        self.assertEqual(ctx.exception.exit_code, 2)

    def test_grid_shape_checks(self):
        with self.assertRaises(ConfigError):
            WaveGrid.for_config(ideal_config(1.0), n_periods=48, samples_per_period=512).validate()
        with self.assertRaises(ConfigError):
            WaveGrid.for_config(ideal_config(1.0), n_periods=16, samples_per_period=512).validate()

    def test_free_flight_is_unitary(self):
        grid = WaveGrid.for_config(ideal_config(1.0), n_periods=32, samples_per_period=256)
        rng = np.random.default_rng(7)
        psi = rng.normal(size=grid.n_samples) + 1j * rng.normal(size=grid.n_samples)
        out = free_flight(psi, grid)
        self.assertAlmostEqual(np.sum(np.abs(out) ** 2) / np.sum(np.abs(psi) ** 2), 1.0, places=10)


class OracleTestCase(unittest.TestCase):

    def test_ideal_gratings_match_engine(self):
        design_tau = FIG2_GEOMETRY.L / ideal_config(1.0).talbot_length
        self.assertAlmostEqual(design_tau, 5.12, delta=0.01)
        for tau in (0.5, 1.0, 2.0, design_tau):
            cfg = ideal_config(tau)
            engine = signal(cfg, SETTINGS)
            result = propagate_three_gratings(cfg, WaveGrid.for_config(cfg), x3=engine.x3_samples)
            self.assertAlmostEqual(result.fringe.dc_level / engine.dc_level, 1.0, delta=0.01)
            comparison = compare(engine, result.fringe)
            self.assertLess(abs(comparison.vis_engine - comparison.vis_oracle), 0.01, msg=f"tau={tau}")

    def test_dressed_g2_matches_engine(self):
        runs = build_scenario(Scenario.PERFECT_CHIRAL_G2, HEXAHELICENE, FIG2_GEOMETRY, 180.0)
        for cfg in (runs.right, runs.left):
            cfg = replace(cfg, separation_L=cfg.talbot_length)
            engine = signal(cfg, SETTINGS)
            result = propagate_three_gratings(cfg, WaveGrid.for_config(cfg), cutoffs=engine.cutoffs,
                                              x3=engine.x3_samples)
            self.assertTrue(result.converged)
            comparison = compare(engine, result.fringe)
            label = "right" if cfg.molecule.is_right_handed else "left"
            self.assertLess(comparison.rms_relative, 0.02, msg=label)
            self.assertLess(abs(comparison.vis_engine - comparison.vis_oracle), 0.01, msg=label)

    def test_ray_shadow_rejects_misaligned_bins(self):
        with self.assertRaises(ConfigError):
            ray_binning_signal(ideal_config(1.0), n_rays=1000, n_bins=512)

    def test_comparison_verdict(self):
        self.assertTrue(OracleComparison(0.30, 0.305, 0.01, 0.01, 0.02).passed)
        self.assertFalse(OracleComparison(0.30, 0.32, 0.01, 0.01, 0.02).passed)
        self.assertFalse(OracleComparison(0.30, 0.30, 0.05, 0.01, 0.02).passed)


if __name__ == '__main__':
    unittest.main()
