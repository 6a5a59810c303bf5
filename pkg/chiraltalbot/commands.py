# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Command implementations of the CLI, dispatched by name
"""
import os
from dataclasses import replace
from typing import Any, Callable, Dict, List, Tuple

import numpy as np
from loguru import logger

from chiraltalbot.config import RunConfig
from chiraltalbot.constants import NM
from chiraltalbot.cutoff import X_MIN, CutoffResult
from chiraltalbot.errors import NumericalError, OracleMismatchError
from chiraltalbot.journal import SweepJournal
from chiraltalbot.models import NO_WALL, InterferometerConfig
from chiraltalbot.oracle import WaveGrid, compare, propagate_three_gratings
from chiraltalbot.output import column_rows, write_csv, write_meta
from chiraltalbot.potentials import tabulate_wall
from chiraltalbot.scenarios import delta_s, run_sweep
from chiraltalbot.talbot import bin_averaged_coefficients, signal, visibility_curve, visibility_from_coefficients
from chiraltalbot.version import __version__

POTENTIAL_SAMPLES = 200


def _base_meta(command: str, config: RunConfig, cfg: InterferometerConfig) -> Dict[str, Any]:
    tol = config.run.tolerances
    return {
        "command": command,
        "version": __version__,
        "scenario": config.scenario.value,
        "config_sha256": config.fingerprint(),
        "R01_cgs_1e40": cfg.molecule.rotatory_strength_cgs_1e40,
        "v_z_mps": cfg.v_z,
        "wavelength_m": cfg.wavelength,
        "talbot_length_m": cfg.talbot_length,
        "L_over_talbot": cfg.L_over_talbot,
        "l_max_initial": config.run.l_max,
        "l_max_cap": config.run.l_max_cap,
        "tol_truncation": tol.truncation,
        "tol_quadrature": tol.quadrature,
        "tol_edge": tol.edge,
        "x3_samples_per_period": config.run.x3_samples,
        "talbot_phase": config.run.talbot_phase,
    }


def _cutoff_meta(label: str, cutoffs: Tuple[CutoffResult, ...]) -> Dict[str, Any]:
    meta = {}
    for i, result in enumerate(cutoffs, start=1):
        meta[f"x_c_g{i}_{label}_nm"] = result.x_c / NM
        if result.diagnostic:
            meta[f"x_c_g{i}_{label}_note"] = result.diagnostic
    return meta


def cmd_fringe(config: RunConfig, out_dir: str, threads: int = 1) -> List[str]:
    """Fringes of both enantiomers: fringe.csv and meta.json"""
    runs = config.scenario_runs(config.velocity())
    settings = config.engine_settings()
    left = signal(runs.left, settings)
    right = signal(runs.right, settings)
    logger.info(f"Visibility left={left.visibility:.6g}, right={right.visibility:.6g}")
    files = [write_csv(os.path.join(out_dir, "fringe.csv"), ["x3_nm", "S_left", "S_right"],
                       column_rows(left.x3_samples / NM, left.S_values, right.S_values))]
    meta = _base_meta("fringe", config, runs.right)
    meta.update(_cutoff_meta("left", left.cutoffs))
    meta.update(_cutoff_meta("right", right.cutoffs))
    meta.update({
        "l_max_left": left.l_max,
        "l_max_right": right.l_max,
        "visibility_left": left.visibility,
        "visibility_right": right.visibility,
        "dc_left": left.dc_level,
        "dc_right": right.dc_level,
        "delta_S": delta_s(left, right, runs.left.g3.open_fraction_f, runs.left.period),
    })
    files.append(write_meta(os.path.join(out_dir, "meta.json"), meta))
    return files


def cmd_visibility(config: RunConfig, out_dir: str, threads: int = 1) -> List[str]:
    """Visibility of both enantiomers at the velocity bin centres: visibility.csv"""
    runs = config.scenario_runs()
    settings = config.engine_settings()
    grid = config.velocity_grid()
    centres = grid.bin_centers
    if config.run.bin_average:
        left, right = ([visibility_from_coefficients(bin_averaged_coefficients(cfg, lo, hi, settings))
                        for lo, hi in grid.bins] for cfg in (runs.left, runs.right))
    else:
        v_range = (centres[0], centres[-1])
        left, right = ([vis for _, vis in visibility_curve(cfg, v_range, len(centres), settings)]
                       for cfg in (runs.left, runs.right))
    rows = []
    for centre, vis_left, vis_right in zip(centres, left, right):
        logger.debug(f"v={centre:.6g} m/s: visibility left={vis_left:.6g}, right={vis_right:.6g}")
        rows.append([centre, vis_left, vis_right])
    files = [write_csv(os.path.join(out_dir, "visibility.csv"), ["v_mps", "vis_left", "vis_right"], rows)]
    meta = _base_meta("visibility", config, runs.right)
    meta.update({
        "v_min_mps": grid.v_min,
        "v_max_mps": grid.v_max,
        "v_bin_mps": grid.v_bin,
        "bin_average": config.run.bin_average,
        "max_visibility_difference": max(abs(r[1] - r[2]) for r in rows),
    })
    files.append(write_meta(os.path.join(out_dir, "meta.json"), meta))
    return files


def cmd_sweep(config: RunConfig, out_dir: str, threads: int = 1) -> List[str]:
    """Enantiomer metrics over the (R01, g_e) grid: sweep.csv, resumable through sweep_journal.json"""
    grid = config.sweep_grid()
    journal = SweepJournal(os.path.join(out_dir, "sweep_journal.json"), config.fingerprint())
    result = run_sweep(grid, config.sweep_base(), config.engine_settings(for_sweep=True), threads, journal)
    files = [write_csv(os.path.join(out_dir, "sweep.csv"), ["R_cgs_1e40", "g_e", "delta_S", "delta_V_max"],
                       result.rows())]
    for cell in result.failures:
        logger.warning(f"Sweep cell R={cell.R_cgs_1e40:.6g}, g_e={cell.g_e:.6g} failed: {cell.error}")
    meta = _base_meta("sweep", config, config.scenario_runs().right)
    meta.update({
        "n_R": len(grid.R_values),
        "n_g_e": len(grid.g_e_values),
        "sweep_l_max": config.sweep.l_max,
        "sweep_g_m": config.sweep.g_m,
        "failed_cells": len(result.failures),
    })
    files.append(write_meta(os.path.join(out_dir, "meta.json"), meta))
    return files


def oracle_config(config: RunConfig) -> InterferometerConfig:
    """Right-handed run of the config, with ideal masks and the separation override when requested"""
    cfg = config.scenario_runs(config.velocity()).right
    if config.oracle.ideal:
        cfg = replace(cfg, g1=replace(cfg.g1, wall=NO_WALL), g2=replace(cfg.g2, wall=NO_WALL),
                      g3=replace(cfg.g3, wall=NO_WALL))
    if config.oracle.L_over_talbot is not None:
        cfg = replace(cfg, separation_L=config.oracle.L_over_talbot * cfg.talbot_length)
    return cfg


def cmd_oracle_check(config: RunConfig, out_dir: str, threads: int = 1) -> List[str]:
    """Engine against explicit wave propagation: oracle.csv; fails unless the tolerances are met"""
    o = config.oracle
    cfg = oracle_config(config)
    grid = WaveGrid.for_config(cfg, o.n_periods, o.samples_per_period)
    grid.validate()
    engine = signal(cfg, config.engine_settings())
    result = propagate_three_gratings(cfg, grid, o.n_source_points, cutoffs=engine.cutoffs, x3=engine.x3_samples)
    comparison = compare(engine, result.fringe, o.vis_tol, o.rms_tol)
    logger.info(f"Oracle: visibility engine={comparison.vis_engine:.6g}, oracle={comparison.vis_oracle:.6g}, "
                f"RMS/dc={comparison.rms_relative:.4g}")
    files = [write_csv(os.path.join(out_dir, "oracle.csv"), ["x3_nm", "S_engine", "S_oracle"],
                       column_rows(engine.x3_samples / NM, engine.S_values, result.fringe.S_values))]
    meta = _base_meta("oracle-check", config, cfg)
    meta.update(_cutoff_meta("right", engine.cutoffs))
    meta.update({
        "oracle_ideal": o.ideal,
        "oracle_n_periods": o.n_periods,
        "oracle_samples_per_period": o.samples_per_period,
        "oracle_sources": result.n_sources,
        "oracle_source_visibility_change": result.visibility_change,
        "visibility_engine": comparison.vis_engine,
        "visibility_oracle": comparison.vis_oracle,
        "rms_relative": comparison.rms_relative,
        "passed": comparison.passed and result.converged,
    })
    files.append(write_meta(os.path.join(out_dir, "meta.json"), meta))
    if not result.converged:
        raise NumericalError("oracle source average not converged", visibility_change=result.visibility_change)
    if not comparison.passed:
        raise OracleMismatchError("engine and oracle disagree", vis_engine=comparison.vis_engine,
                                  vis_oracle=comparison.vis_oracle, rms_relative=comparison.rms_relative)
    return files


def cmd_potential(config: RunConfig, out_dir: str, threads: int = 1) -> List[str]:
    """Single-wall potential and force of each grating for the configured molecule: potential_g{1,2,3}.csv"""
    molecule = config.molecule.to_molecule()
    cfg = config.scenario_runs()
    files = []
    for i, grating in enumerate(cfg.right.gratings, start=1):
        a = grating.coating_thickness_a
        distances = a + np.geomspace(X_MIN, grating.open_half_width, POTENTIAL_SAMPLES)
        table = tabulate_wall(grating.wall, molecule, distances)
        table[:, 0] /= NM
        files.append(write_csv(os.path.join(out_dir, f"potential_g{i}.csv"), ["x_nm", "V_J", "F_N"], table))
    return files


COMMANDS: Dict[str, Callable[[RunConfig, str, int], List[str]]] = {
    "fringe": cmd_fringe,
    "visibility": cmd_visibility,
    "sweep": cmd_sweep,
    "oracle-check": cmd_oracle_check,
    "potential": cmd_potential,
}
