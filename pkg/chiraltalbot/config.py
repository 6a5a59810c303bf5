# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Run configuration: JSON schema, presets and conversion to the domain records
"""
import hashlib
import json
import os
from typing import Any, Dict, List, Literal, Optional, Tuple

from dotenv import load_dotenv
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from chiraltalbot.constants import MM, NM
from chiraltalbot.errors import ConfigError
from chiraltalbot.models import (
    NO_WALL,
    BareSiN,
    ChiralMirror,
    CoatedSiN,
    Molecule,
    PerfectChiral,
    WallModel,
    anisotropy_condition_ok,
)
from chiraltalbot.scenarios import Geometry, Scenario, ScenarioRuns, SweepBase, SweepGrid, build_scenario
from chiraltalbot.talbot import EngineSettings
from chiraltalbot.version import __version__

load_dotenv()

ROOT_DIR = os.getenv("CHIRALTALBOT_HOME", os.getcwd())
PRESET_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "presets")
PRESETS = ("fig2i", "fig2ii", "fig3i", "fig3ii", "fig4i", "fig4ii", "fig5")
CLI_VERSION = __version__

# Names used in diagnostics for config fields
FIELD_LABELS = {
    "f": "open_fraction",
    "d_nm": "period",
    "b_nm": "thickness",
    "L_mm": "separation",
    "a_nm": "coating_thickness",
    "n_B_per_m3": "coating_density",
    "mass_da": "mass",
    "omega1_rad_s": "transition_frequency",
    "R01_cgs_1e40": "rotatory_strength",
    "g_e": "electric_anisotropy",
    "g_m": "magnetic_anisotropy",
    "v_z_mps": "velocity",
}


def _sign(handedness: str) -> int:
    return 1 if handedness == "right" else -1


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class MoleculeBlock(_Block):
    mass_da: float = Field(gt=0)
    omega1_rad_s: float = Field(gt=0)
    R01_cgs_1e40: float
    g_e: Optional[float] = Field(default=None, gt=0)
    g_m: Optional[float] = Field(default=None, gt=0)

    def to_molecule(self) -> Molecule:
        return Molecule.from_lab_units(self.mass_da, self.omega1_rad_s, self.R01_cgs_1e40, self.g_e, self.g_m)


class GeometryBlock(_Block):
    d_nm: float = Field(gt=0)
    b_nm: float = Field(gt=0)
    L_mm: float = Field(gt=0)
    f: float = Field(gt=0, le=1)
    a_nm: float = Field(default=10.0, ge=0)
    n_B_per_m3: float = Field(default=5e28, gt=0)
    theta1_mrad: float = Field(default=1.0, gt=0)
    theta2_mrad: float = Field(default=2.0, gt=0)
    coating_handedness: Literal["right", "left"] = "right"

    def to_geometry(self) -> Geometry:
        return Geometry(
            d=self.d_nm * NM,
            b=self.b_nm * NM,
            L=self.L_mm * MM,
            f=self.f,
            a=self.a_nm * NM,
            n_B=self.n_B_per_m3,
            theta1=self.theta1_mrad * 1e-3,
            theta2=self.theta2_mrad * 1e-3,
        )


class WallBlock(_Block):
    kind: Literal["none", "bare_sin", "coated_sin", "perfect_chiral", "chiral_mirror"]
    r: float = Field(default=0.0, ge=-1, le=1)
    r_c: float = Field(default=0.0, ge=-1, le=1)
    handedness: Literal["right", "left"] = "right"

    def to_wall(self, molecule: Molecule, geometry: Geometry) -> WallModel:
        if self.kind == "none":
            return NO_WALL
        if self.kind == "bare_sin":
            return BareSiN(geometry.dielectric)
        if self.kind == "coated_sin":
            coating = molecule.with_handedness(_sign(self.handedness))
            return CoatedSiN(coating, geometry.n_B, geometry.a, geometry.dielectric)
        if self.kind == "perfect_chiral":
            return PerfectChiral(_sign(self.handedness))
        wall = ChiralMirror(self.r, self.r_c)
        anisotropy_condition_ok(molecule, wall)
        return wall


class WallsBlock(_Block):
    g1: WallBlock
    g2: WallBlock
    g3: WallBlock


class VelocityRange(_Block):
    min: float = Field(default=100.0, gt=0)
    max: float = Field(default=200.0, gt=0)
    bin: float = Field(default=10.0, gt=0)

    @model_validator(mode="after")
    def _check_tiling(self):
        n_bins = (self.max - self.min) / self.bin
        if n_bins < 1 or abs(n_bins - round(n_bins)) > 1e-9:
            raise ValueError("bins must tile [min, max] exactly")
        return self


class Tolerances(_Block):
    truncation: float = Field(default=1e-6, gt=0)
    quadrature: float = Field(default=1e-8, gt=0)
    edge: float = Field(default=1e-7, gt=0)
    negativity: float = Field(default=1e-4, ge=0)


class RunBlock(_Block):
    v_z_mps: Optional[float] = Field(default=None, gt=0)
    v_range: VelocityRange = VelocityRange()
    x3_samples: int = Field(default=512, ge=256)
    l_max: int = Field(default=64, ge=1)
    l_max_cap: int = Field(default=1024, ge=1)
    tolerances: Tolerances = Tolerances()
    bin_average: bool = False
    talbot_phase: bool = True


class SweepBlock(_Block):
    R_min_cgs_1e40: float = Field(default=100.0, gt=0)
    R_max_cgs_1e40: float = Field(default=10000.0, gt=0)
    n_R: int = Field(default=21, ge=1)
    g_e_min: float = Field(default=0.1, gt=0)
    g_e_max: float = Field(default=0.5, gt=0)
    n_g_e: int = Field(default=17, ge=1)
    g_m: Optional[float] = Field(default=5.0, gt=0)
    l_max: int = Field(default=64, ge=1)


class OracleBlock(_Block):
    n_periods: int = Field(default=64, ge=1)
    samples_per_period: int = Field(default=512, ge=2)
    n_source_points: int = Field(default=128, ge=2)
    L_over_talbot: Optional[float] = Field(default=None, gt=0)
    ideal: bool = True
    vis_tol: float = Field(default=0.01, gt=0)
    rms_tol: float = Field(default=0.02, gt=0)


class RunConfig(_Block):
    """Schema of a run config file"""
    scenario: Scenario
    molecule: MoleculeBlock
    geometry: GeometryBlock
    walls: Optional[WallsBlock] = None
    run: RunBlock = RunBlock()
    sweep: SweepBlock = SweepBlock()
    oracle: OracleBlock = OracleBlock()
    output_dir: str = "output"

    @model_validator(mode="after")
    def _check_walls(self):
        if self.scenario is Scenario.CUSTOM and self.walls is None:
            raise ValueError("the custom scenario needs a walls block")
        if self.scenario is not Scenario.CUSTOM and self.walls is not None:
            raise ValueError("a walls block is only allowed with the custom scenario")
        if self.run.l_max_cap < self.run.l_max:
            raise ValueError("l_max_cap must not be below l_max")
        return self

    def engine_settings(self, for_sweep: bool = False) -> EngineSettings:
        tol = self.run.tolerances
        l_max = self.sweep.l_max if for_sweep else self.run.l_max
        return EngineSettings(
            l_max=l_max,
            l_max_cap=l_max if for_sweep else self.run.l_max_cap,
            truncation_tol=tol.truncation,
            quad_rtol=tol.quadrature,
            edge_tol=tol.edge,
            negativity_tol=tol.negativity,
            samples_per_period=self.run.x3_samples,
            talbot_phase=self.run.talbot_phase,
        )

    def velocity(self) -> float:
        if self.run.v_z_mps is None:
            raise ConfigError("velocity (run.v_z_mps) is required for this command")
        return self.run.v_z_mps

    def scenario_runs(self, v_z: Optional[float] = None) -> ScenarioRuns:
        """Left- and right-handed interferometers, every domain invariant re-checked"""
        molecule = self.molecule.to_molecule()
        geometry = self.geometry.to_geometry()
        walls = None
        if self.walls is not None:
            walls = [block.to_wall(molecule, geometry) for block in (self.walls.g1, self.walls.g2, self.walls.g3)]
        v_z = v_z if v_z is not None else (self.run.v_z_mps or self.run.v_range.min)
        return build_scenario(self.scenario, molecule, geometry, v_z,
                              _sign(self.geometry.coating_handedness), walls)

    def velocity_grid(self) -> SweepGrid:
        """Bins of run.v_range, without molecular axes"""
        return SweepGrid((1.0,), (1.0,), self.run.v_range.min, self.run.v_range.max, self.run.v_range.bin)

    def sweep_grid(self) -> SweepGrid:
        s, v = self.sweep, self.run.v_range
        return SweepGrid.default(s.n_R, s.n_g_e, s.R_min_cgs_1e40, s.R_max_cgs_1e40, s.g_e_min, s.g_e_max,
                                 v_min=v.min, v_max=v.max, v_bin=v.bin)

    def sweep_base(self) -> SweepBase:
        if self.scenario is Scenario.CUSTOM:
            raise ConfigError("sweeps run one of the built-in scenarios")
        return SweepBase(
            mass_da=self.molecule.mass_da,
            omega1=self.molecule.omega1_rad_s,
            g_m=self.sweep.g_m,
            geometry=self.geometry.to_geometry(),
            coating_handedness=_sign(self.geometry.coating_handedness),
            scenario=self.scenario,
        )

    def fingerprint(self) -> str:
        """Hash of everything that determines the results"""
        payload = self.model_dump(mode="json", exclude={"output_dir"})
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8")).hexdigest()


def format_validation_error(error: ValidationError) -> str:
    """One-line message naming the first offending field"""
    messages: List[str] = []
    for item in error.errors():
        loc: Tuple[Any, ...] = tuple(item.get("loc", ()))
        dotted = ".".join(str(p) for p in loc)
        names = [str(p) for p in loc if isinstance(p, str)]
        label = FIELD_LABELS.get(names[-1], names[-1]) if names else "config"
        messages.append(f"{label} ({dotted}): {item.get('msg', 'invalid')}" if dotted else item.get("msg", "invalid"))
    return "; ".join(messages)


def resolve_config_path(name_or_path: str) -> str:
    """A config file path, or the name of a shipped preset"""
    if os.path.exists(name_or_path):
        return name_or_path
    if name_or_path in PRESETS:
        return os.path.join(PRESET_DIR, f"{name_or_path}.json")
    raise ConfigError(f"config file not found: {name_or_path}")


def load_config(config_path: str) -> RunConfig:
    """
    Load and validate a run config

    Args:
        config_path: JSON file path or preset name

    Returns:
        RunConfig, with the domain records already built once
    """
    path = resolve_config_path(config_path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data: Dict[str, Any] = json.load(f)
    except ValueError as e:
        raise ConfigError(f"config is not valid JSON: {e}", path=path)
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(format_validation_error(e))
    config.scenario_runs()
    logger.debug(f"Loaded config {path}: scenario={config.scenario.value}")
    return config


def default_threads() -> int:
    """Worker count from CHIRALTALBOT_THREADS, 1 when unset"""
    value = os.getenv("CHIRALTALBOT_THREADS", "1")
    try:
        threads = int(value)
    except ValueError:
        raise ConfigError("CHIRALTALBOT_THREADS must be an integer", value=value)
    if threads < 1:
        raise ConfigError("CHIRALTALBOT_THREADS must be at least 1", value=value)
    return threads


def resolve_output_dir(config: RunConfig, override: Optional[str] = None) -> str:
    out = override or config.output_dir
    return out if os.path.isabs(out) else os.path.join(ROOT_DIR, out)
