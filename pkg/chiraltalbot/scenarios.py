# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Grating scenarios, enantiomer-difference metrics and the (R01, g_e) sweep
"""
import math
import multiprocessing
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.integrate import trapezoid

from chiraltalbot.constants import MM, NM
from chiraltalbot.errors import ChiralTalbotError, ConfigError, NumericalError
from chiraltalbot.models import (
    SILICON_NITRIDE,
    BareSiN,
    CoatedSiN,
    Deflection,
    DielectricModel,
    FlyThrough,
    GratingSpec,
    InterferometerConfig,
    Molecule,
    PerfectChiral,
    WallModel,
)
from chiraltalbot.talbot import (
    EngineSettings,
    FringeResult,
    bin_averaged_coefficients,
    fringe_from_coefficients,
)

OMEGA1_DEFAULT = 2 * math.pi * 1e15


class Scenario(str, Enum):
    PERFECT_CHIRAL_G2 = "perfect_chiral_g2"
    COATED_G2 = "coated_g2"
    ALL_COATED = "all_coated"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Geometry:
    """
    Shared grating geometry of the symmetric interferometer

    Attributes:
        d: period, m
        b: grating thickness, m
        L: grating separation, m
        f: open fraction
        a: coating thickness, m
        n_B: coating number density, 1/m^3
        theta1: acceptance angle at G1, rad
        theta2: acceptance angle at G2, rad
        dielectric: grating material
    """
    d: float
    b: float
    L: float
    f: float
    a: float = 10 * NM
    n_B: float = 5e28
    theta1: float = 1e-3
    theta2: float = 2e-3
    dielectric: DielectricModel = SILICON_NITRIDE


FIG2_GEOMETRY = Geometry(d=257 * NM, b=160 * NM, L=50 * MM, f=0.45)
FIG34_GEOMETRY = Geometry(d=80 * NM, b=160 * NM, L=10 * MM, f=0.45)


@dataclass(frozen=True)
class ScenarioRuns:
    """Left- and right-handed runs of one scenario"""
    left: InterferometerConfig
    right: InterferometerConfig

    def __post_init__(self):
        if self.left.enantiomer() != self.right:
            raise ConfigError("enantiomer runs must differ only in the sign of the rotatory strength")


def coating_molecule_for(molecule: Molecule, handedness: int = 1) -> Molecule:
    """Coating molecule B: the matter-wave molecule with R_B = handedness * |R_A|"""
    return molecule.with_handedness(handedness)


def _walls_for(kind: Scenario, molecule: Molecule, geometry: Geometry, coating_handedness: int,
               walls: Optional[Sequence[WallModel]]) -> Tuple[WallModel, WallModel, WallModel]:
    bare = BareSiN(geometry.dielectric)
    if kind is Scenario.PERFECT_CHIRAL_G2:
        return bare, PerfectChiral(1), bare
    if kind in (Scenario.COATED_G2, Scenario.ALL_COATED):
        coated = CoatedSiN(coating_molecule_for(molecule, coating_handedness), geometry.n_B, geometry.a,
                           geometry.dielectric)
        if kind is Scenario.COATED_G2:
            return bare, coated, bare
        return coated, coated, coated
    if walls is None or len(walls) != 3:
        raise ConfigError("custom scenario needs one wall model per grating")
    return walls[0], walls[1], walls[2]


def build_scenario(kind: Scenario, molecule: Molecule, geometry: Geometry, v_z: float,
                   coating_handedness: int = 1, walls: Optional[Sequence[WallModel]] = None) -> ScenarioRuns:
    """
    Interferometer pair for a scenario

    Args:
        kind: scenario
        molecule: matter-wave molecule, its handedness is ignored
        geometry: grating geometry
        v_z: velocity, m/s
        coating_handedness: +1 right-handed coating molecules, -1 left-handed
        walls: (g1, g2, g3) wall models of the custom scenario

    Returns:
        ScenarioRuns
    """
    kind = Scenario(kind)
    w1, w2, w3 = _walls_for(kind, molecule, geometry, coating_handedness, walls)

    def grating(wall, rule):
        return GratingSpec(geometry.d, geometry.b, geometry.f, wall, rule)

    g1 = grating(w1, Deflection(geometry.theta1))
    g2 = grating(w2, Deflection(geometry.theta2))
    g3 = grating(w3, FlyThrough())
    left, right = molecule.with_handedness(-1), molecule.with_handedness(1)
    return ScenarioRuns(
        left=InterferometerConfig(g1, g2, g3, geometry.L, left, v_z),
        right=InterferometerConfig(g1, g2, g3, geometry.L, right, v_z),
    )


def delta_s(fringe_left: FringeResult, fringe_right: FringeResult, f: float, d: float) -> float:
    """
    Mean relative transmission deficit of the right-handed run, (1/4fd) int_{-2fd}^{2fd} (S_L - S_R)/S_L dx3

    Args:
        fringe_left: left-handed fringe
        fringe_right: right-handed fringe on the same x3 grid
        f: open fraction
        d: period, m

    Returns:
        dimensionless deficit
    """
    x3 = np.asarray(fringe_left.x3_samples)
    if x3.shape != np.shape(fringe_right.x3_samples) or not np.array_equal(x3, fringe_right.x3_samples):
        raise ConfigError("fringes sampled on different x3 grids")
    span = 2.0 * f * d
    inside = np.abs(x3) <= span * (1 + 1e-12)
    if np.count_nonzero(inside) < 2:
        raise ConfigError("x3 grid does not cover [-2fd, 2fd]", f=f, d=d)
    s_left = np.asarray(fringe_left.S_values)[inside]
    s_right = np.asarray(fringe_right.S_values)[inside]
    if np.any(s_left <= 0):
        raise NumericalError("non-positive left-handed signal", S_min=float(np.min(s_left)))
    x = x3[inside]
    return float(trapezoid((s_left - s_right) / s_left, x) / (x[-1] - x[0]))


@dataclass(frozen=True)
class SweepGrid:
    """Rotatory strengths (1e-40 cgs), electric anisotropy factors and velocity bins of a sweep"""
    R_values: Tuple[float, ...]
    g_e_values: Tuple[float, ...]
    v_min: float = 100.0
    v_max: float = 200.0
    v_bin: float = 10.0

    def __post_init__(self):
        for name in ("R_values", "g_e_values"):
            values = np.asarray(getattr(self, name), dtype=float)
            if values.size == 0 or np.any(values <= 0) or np.any(np.diff(values) <= 0):
                raise ConfigError(f"{name} must be positive and strictly increasing")
        n_bins = (self.v_max - self.v_min) / self.v_bin
        if not (self.v_min > 0 and self.v_bin > 0 and n_bins >= 1 and abs(n_bins - round(n_bins)) < 1e-9):
            raise ConfigError("velocity bins must tile the velocity range",
                              v_min=self.v_min, v_max=self.v_max, v_bin=self.v_bin)

    @classmethod
    def default(cls, n_R: int = 21, n_g_e: int = 17, R_min: float = 100.0, R_max: float = 10000.0,
                g_e_min: float = 0.1, g_e_max: float = 0.5, **velocity) -> "SweepGrid":
        R_values = np.geomspace(R_min, R_max, n_R) if n_R > 1 else np.array([R_min])
        g_e_values = np.linspace(g_e_min, g_e_max, n_g_e) if n_g_e > 1 else np.array([g_e_min])
        return cls(tuple(float(r) for r in R_values), tuple(float(g) for g in g_e_values), **velocity)

    @property
    def bins(self) -> List[Tuple[float, float]]:
        n_bins = int(round((self.v_max - self.v_min) / self.v_bin))
        edges = self.v_min + self.v_bin * np.arange(n_bins + 1)
        edges[-1] = self.v_max
        return [(float(lo), float(hi)) for lo, hi in zip(edges[:-1], edges[1:])]

    @property
    def bin_centers(self) -> List[float]:
        return [0.5 * (lo + hi) for lo, hi in self.bins]


@dataclass(frozen=True)
class BinMetrics:
    v_lo: float
    v_hi: float
    delta_S: float
    vis_left: float
    vis_right: float


def bin_metrics(runs: ScenarioRuns, grid: SweepGrid, settings: Optional[EngineSettings] = None,
                n_nodes: int = 11) -> List[BinMetrics]:
    """Velocity-averaged fringes of both enantiomers, bin by bin"""
    settings = settings or EngineSettings()
    out = []
    for lo, hi in grid.bins:
        fringes = []
        for cfg in (runs.left, runs.right):
            coefficients = bin_averaged_coefficients(cfg, lo, hi, settings, n_nodes)
            fringes.append(fringe_from_coefficients(coefficients, cfg.with_velocity(0.5 * (lo + hi)), settings))
        left, right = fringes
        ds = delta_s(left, right, runs.left.g3.open_fraction_f, runs.left.period)
        out.append(BinMetrics(lo, hi, ds, left.visibility, right.visibility))
    return out


def delta_v_max(runs: ScenarioRuns, grid: SweepGrid, settings: Optional[EngineSettings] = None) -> float:
    """Largest enantiomer visibility difference over the velocity bins"""
    return max(abs(m.vis_left - m.vis_right) for m in bin_metrics(runs, grid, settings))


@dataclass(frozen=True)
class SweepBase:
    """Fixed molecule and geometry of a sweep; the coating molecule tracks the swept molecule"""
    mass_da: float = 1000.0
    omega1: float = OMEGA1_DEFAULT
    g_m: Optional[float] = 5.0
    geometry: Geometry = FIG34_GEOMETRY
    coating_handedness: int = 1
    scenario: Scenario = Scenario.ALL_COATED


@dataclass
class SweepCell:
    R_cgs_1e40: float
    g_e: float
    delta_S: float = math.nan
    delta_V_max: float = math.nan
    error: Optional[str] = None


@dataclass
class SweepResult:
    """Cells in row-major order: R outer, g_e inner"""
    cells: List[SweepCell] = field(default_factory=list)

    @property
    def failures(self) -> List[SweepCell]:
        return [c for c in self.cells if c.error is not None]

    def rows(self) -> List[Tuple[float, float, float, float]]:
        return [(c.R_cgs_1e40, c.g_e, c.delta_S, c.delta_V_max) for c in self.cells]


def cell_key(r_cgs_1e40: float, g_e: float) -> str:
    return f"{r_cgs_1e40!r}|{g_e!r}"


def evaluate_cell(base: SweepBase, r_cgs_1e40: float, g_e: float, grid: SweepGrid,
                  settings: EngineSettings) -> SweepCell:
    """One sweep point; failures are recorded in the cell instead of raised"""
    try:
        molecule = Molecule.from_lab_units(base.mass_da, base.omega1, r_cgs_1e40, g_e, base.g_m)
        runs = build_scenario(base.scenario, molecule, base.geometry, 0.5 * (grid.v_min + grid.v_max),
                              base.coating_handedness)
        metrics = bin_metrics(runs, grid, settings)
        return SweepCell(
            R_cgs_1e40=r_cgs_1e40,
            g_e=g_e,
            delta_S=max(m.delta_S for m in metrics),
            delta_V_max=max(abs(m.vis_left - m.vis_right) for m in metrics),
        )
    except ChiralTalbotError as e:
        logger.error(f"Sweep cell R={r_cgs_1e40:.6g}, g_e={g_e:.6g} failed: {e.code}: {e}")
        return SweepCell(r_cgs_1e40, g_e, error=f"{e.code}: {e}")


def _evaluate_task(task) -> SweepCell:
    return evaluate_cell(*task)


def run_sweep(grid: SweepGrid, base: Optional[SweepBase] = None, settings: Optional[EngineSettings] = None,
              workers: int = 1, journal=None) -> SweepResult:
    """
    Enantiomer metrics over the (R01, g_e) grid

    Args:
        grid: sweep grid
        base: fixed molecule and geometry
        settings: engine settings of every cell
        workers: process count, 1 runs in this process
        journal: optional SweepJournal; finished cells are skipped and new ones recorded

    Returns:
        SweepResult, row-major by R then g_e, independent of the worker count
    """
    base = base or SweepBase()
    settings = settings or EngineSettings(l_max=64, l_max_cap=64)
    points = [(r, g) for r in grid.R_values for g in grid.g_e_values]
    done: Dict[str, SweepCell] = {}
    if journal is not None:
        for r, g in points:
            key = cell_key(r, g)
            if journal.is_done(key):
                done[key] = SweepCell(**journal.get(key))
    pending = [(r, g) for r, g in points if cell_key(r, g) not in done]
    logger.info(f"Sweep: {len(points)} cells, {len(points) - len(pending)} from journal, {workers} workers")

    def finish(cell: SweepCell):
        done[cell_key(cell.R_cgs_1e40, cell.g_e)] = cell
        if journal is not None:
            journal.record(cell_key(cell.R_cgs_1e40, cell.g_e), asdict(cell))
        logger.debug(f"Cell R={cell.R_cgs_1e40:.6g}, g_e={cell.g_e:.6g} done ({len(done)}/{len(points)})")

    if workers <= 1 or len(pending) <= 1:
        for r, g in pending:
            finish(evaluate_cell(base, r, g, grid, settings))
    else:
        with multiprocessing.Pool(workers) as pool:
            for cell in pool.imap_unordered(_evaluate_task, [(base, r, g, grid, settings) for r, g in pending]):
                finish(cell)
    return SweepResult([done[cell_key(r, g)] for r, g in points])
