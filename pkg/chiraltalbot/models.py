# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Domain records: molecules, grating walls, gratings and the interferometer
"""
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple, Union

from loguru import logger

from chiraltalbot.constants import CONST, RotatoryStrength, de_broglie_wavelength, talbot_length
from chiraltalbot.errors import ConfigError, DomainError


@dataclass(frozen=True)
class Molecule:
    """
    A molecule with a single dominant transition

    Attributes:
        mass: kg
        omega1: transition angular frequency, rad/s
        rotatory_strength: signed R01 in C^2*m^3/s, positive is right-handed
        g_e: electric anisotropy factor, None when unknown
        g_m: magnetic anisotropy factor, None when unknown
    """
    mass: float
    omega1: float
    rotatory_strength: float
    g_e: Optional[float] = None
    g_m: Optional[float] = None

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError("molecule mass must be positive", mass=self.mass)
        if not self.omega1 > 0:
            raise DomainError("transition frequency must be positive", omega1=self.omega1)
        if not math.isfinite(self.rotatory_strength):
            raise DomainError("rotatory strength must be finite")
        for name in ("g_e", "g_m"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise DomainError(f"anisotropy factor {name} must be positive", **{name: value})

    @classmethod
    def from_lab_units(cls, mass_da: float, omega1: float, r01_cgs_1e40: float,
                       g_e: Optional[float] = None, g_m: Optional[float] = None) -> "Molecule":
        """Build from Da and 1e-40 cgs inputs"""
        return cls(
            mass=mass_da * CONST.dalton,
            omega1=omega1,
            rotatory_strength=RotatoryStrength.from_cgs_1e40(r01_cgs_1e40).value_si,
            g_e=g_e,
            g_m=g_m,
        )

    @property
    def rotatory_strength_cgs_1e40(self) -> float:
        return RotatoryStrength(self.rotatory_strength).value_cgs_1e40

    @property
    def is_right_handed(self) -> bool:
        return self.rotatory_strength > 0

    def enantiomer(self) -> "Molecule":
        """Mirror image: same moduli, opposite rotatory strength"""
        return replace(self, rotatory_strength=-self.rotatory_strength)

    def with_handedness(self, sign: int) -> "Molecule":
        return replace(self, rotatory_strength=math.copysign(abs(self.rotatory_strength), sign))


def dipole_moments(mol: Molecule) -> Tuple[float, float]:
    """
    Squared transition dipole moments from the rotatory strength and anisotropy factors

    Args:
        mol: the molecule

    Returns:
        (|d01|^2 in C^2*m^2, |m01|^2 in (A*m^2)^2); an unknown factor contributes zero
    """
    r_abs = abs(mol.rotatory_strength)
    if mol.g_e == 0 or mol.g_m == 0:
        raise DomainError("anisotropy factors must be nonzero", g_e=mol.g_e, g_m=mol.g_m)
    d2 = r_abs / (CONST.c * mol.g_e) if mol.g_e is not None else 0.0
    m2 = r_abs * CONST.c / mol.g_m if mol.g_m is not None else 0.0
    return d2, m2


@dataclass(frozen=True)
class DielectricModel:
    """Single-oscillator dielectric function, rad/s"""
    Omega_L: float
    Omega_T: float
    gamma_L: float
    gamma_T: float

    def __post_init__(self):
        for name in ("Omega_L", "Omega_T", "gamma_L", "gamma_T"):
            if not getattr(self, name) > 0:
                raise DomainError(f"dielectric parameter {name} must be positive")


SILICON_NITRIDE = DielectricModel(Omega_L=2.69e16, Omega_T=1.33e16, gamma_L=3.05e16, gamma_T=6.40e15)


@dataclass(frozen=True)
class WallModel:
    """A grating wall, modelled as a half-space seen from distance x"""

    @property
    def coating_thickness(self) -> float:
        return 0.0

    def mirrored(self) -> "WallModel":
        """The same wall with every handedness flipped"""
        return self


@dataclass(frozen=True)
class PerfectChiral(WallModel):
    """Perfectly chiral mirror, r -> 0, |r_c| -> 1"""
    r_c_sign: int = 1

    def __post_init__(self):
        if self.r_c_sign not in (1, -1):
            raise DomainError("r_c_sign must be +1 or -1", r_c_sign=self.r_c_sign)

    def mirrored(self) -> "PerfectChiral":
        return PerfectChiral(r_c_sign=-self.r_c_sign)


@dataclass(frozen=True)
class ChiralMirror(WallModel):
    """Chiral mirror with reflection matrix ((-r, r_c), (r_c, r))"""
    r: float
    r_c: float

    def __post_init__(self):
        if abs(self.r) > 1 or abs(self.r_c) > 1:
            raise DomainError("reflection coefficients must satisfy |r|, |r_c| <= 1", r=self.r, r_c=self.r_c)

    @property
    def is_inert(self) -> bool:
        return self.r == 0 and self.r_c == 0

    def mirrored(self) -> "ChiralMirror":
        return ChiralMirror(r=self.r, r_c=-self.r_c)


@dataclass(frozen=True)
class BareSiN(WallModel):
    """Non-chiral dielectric grating"""
    dielectric: DielectricModel = SILICON_NITRIDE


@dataclass(frozen=True)
class CoatedSiN(WallModel):
    """Dielectric grating covered by a layer of coating molecules"""
    coating: Molecule
    n_B: float
    a: float
    dielectric: DielectricModel = SILICON_NITRIDE

    def __post_init__(self):
        if not self.n_B > 0:
            raise DomainError("coating number density must be positive", n_B=self.n_B)
        if self.a < 0:
            raise DomainError("coating thickness must be non-negative", a=self.a)

    @property
    def coating_thickness(self) -> float:
        return self.a

    def mirrored(self) -> "CoatedSiN":
        return replace(self, coating=self.coating.enantiomer())


# An interaction-free wall, used for ideal masks
NO_WALL = ChiralMirror(r=0.0, r_c=0.0)


def anisotropy_condition_ok(mol: Molecule, wall: ChiralMirror) -> bool:
    """
    Whether the chiral potential dominates: r/r_c <= g_e and r/r_c <= g_m

    Args:
        mol: the molecule
        wall: chiral mirror wall

    Returns:
        True if the condition holds
    """
    if wall.r_c == 0:
        logger.warning(f"Anisotropy condition violated: r_c = 0 for wall {wall}")
        return False
    if mol.g_e is None or mol.g_m is None:
        logger.warning("Anisotropy condition cannot be checked: g_e or g_m unknown")
        return False
    ratio = wall.r / wall.r_c
    ok = ratio <= mol.g_e and ratio <= mol.g_m
    if not ok:
        logger.warning(f"Anisotropy condition violated: r/r_c={ratio:.4g}, g_e={mol.g_e}, g_m={mol.g_m}")
    return ok


@dataclass(frozen=True)
class Deflection:
    """Cutoff from deflection beyond the acceptance angle theta (rad)"""
    theta: float

    def __post_init__(self):
        if not self.theta > 0:
            raise DomainError("acceptance angle must be positive", theta=self.theta)


@dataclass(frozen=True)
class FlyThrough:
    """Cutoff from wall collisions during transit"""


CutoffRule = Union[Deflection, FlyThrough]


@dataclass(frozen=True)
class GratingSpec:
    """
    One grating of the interferometer

    Attributes:
        period_d: m
        thickness_b: m
        open_fraction_f: slit width over period, in (0, 1]
        wall: wall model of both slit walls
        cutoff_rule: Deflection(theta) or FlyThrough()
    """
    period_d: float
    thickness_b: float
    open_fraction_f: float
    wall: WallModel
    cutoff_rule: CutoffRule

    def __post_init__(self):
        if not self.period_d > 0:
            raise ConfigError("period must be positive", period_d=self.period_d)
        if not self.thickness_b > 0:
            raise ConfigError("thickness must be positive", thickness_b=self.thickness_b)
        if not 0 < self.open_fraction_f <= 1:
            raise ConfigError("open_fraction must lie in (0, 1]", f=self.open_fraction_f)
        if not self.x_o > self.coating_thickness_a:
            raise ConfigError("coating fills the slit", x_o=self.x_o, a=self.coating_thickness_a)

    @property
    def x_o(self) -> float:
        """Half slit width to the bare wall"""
        return self.open_fraction_f * self.period_d / 2

    @property
    def coating_thickness_a(self) -> float:
        return self.wall.coating_thickness

    @property
    def open_half_width(self) -> float:
        """Half width of the geometrically open region between coatings"""
        return self.x_o - self.coating_thickness_a

    def mirrored(self) -> "GratingSpec":
        return replace(self, wall=self.wall.mirrored())


@dataclass(frozen=True)
class InterferometerConfig:
    """Symmetric three-grating Talbot-Lau interferometer with a monochromatic beam"""
    g1: GratingSpec
    g2: GratingSpec
    g3: GratingSpec
    separation_L: float
    molecule: Molecule
    v_z: float

    def __post_init__(self):
        if not (self.g1.period_d == self.g2.period_d == self.g3.period_d):
            raise ConfigError("all gratings must share the same period")
        if not self.separation_L > 0:
            raise ConfigError("grating separation must be positive", L=self.separation_L)
        if not self.v_z > 0:
            raise DomainError("velocity must be positive", v_z=self.v_z)

    @property
    def period(self) -> float:
        return self.g1.period_d

    @property
    def gratings(self) -> Tuple[GratingSpec, GratingSpec, GratingSpec]:
        return self.g1, self.g2, self.g3

    @property
    def wavelength(self) -> float:
        return de_broglie_wavelength(self.molecule.mass, self.v_z)

    @property
    def talbot_length(self) -> float:
        return talbot_length(self.period, self.wavelength)

    @property
    def L_over_talbot(self) -> float:
        return self.separation_L / self.talbot_length

    @property
    def p_z(self) -> float:
        return self.molecule.mass * self.v_z

    def with_velocity(self, v_z: float) -> "InterferometerConfig":
        return replace(self, v_z=v_z)

    def with_molecule(self, molecule: Molecule) -> "InterferometerConfig":
        return replace(self, molecule=molecule)

    def enantiomer(self) -> "InterferometerConfig":
        """Same interferometer, mirror-image matter-wave molecule"""
        return replace(self, molecule=self.molecule.enantiomer())

    def mirrored(self) -> "InterferometerConfig":
        """Full parity: molecule and every chiral wall or coating flipped"""
        return replace(
            self,
            g1=self.g1.mirrored(),
            g2=self.g2.mirrored(),
            g3=self.g3.mirrored(),
            molecule=self.molecule.enantiomer(),
        )
