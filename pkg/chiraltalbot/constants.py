# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Physical constants (CODATA 2018 via scipy.constants) and the fixed unit conversions

Rotatory strength conversion, cgs -> SI:
    R = d . m, with d in statC*cm and m in erg/G (cgs), or C*m and J/T = A*m^2 (SI).
    1 statC = 1/(10 c) C with c in m/s, so 1 statC*cm = 1e-3/c C*m = 3.33564e-12 C*m.
    1 erg/G = 1e-7 J / 1e-4 T = 1e-3 J/T.
    K_R = (1e-3/c) * 1e-3 = 1e-6/c = 3.33564e-15, in C^2*m^3/s per cgs unit.
The "cgs" unit of the literature values is assumed to be statC*cm*erg/G.
"""
from dataclasses import dataclass

from scipy import constants as sp

from chiraltalbot.errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    """Physical constants in SI units"""
    hbar: float = sp.hbar
    h: float = sp.h
    c: float = sp.c
    eps0: float = sp.epsilon_0
    mu0: float = sp.mu_0
    dalton: float = sp.physical_constants["atomic mass constant"][0]


CONST = PhysicalConstants()

# SI rotatory strength per cgs unit
K_R = 1e-6 / CONST.c
# Literature values are quoted in units of 1e-40 cgs
CGS_1E40 = 1e-40

NM = 1e-9
MM = 1e-3


@dataclass(frozen=True)
class RotatoryStrength:
    """Signed rotatory strength; positive is right-handed"""
    value_si: float

    @classmethod
    def from_cgs_1e40(cls, value: float) -> "RotatoryStrength":
        return cls(cgs_rotatory_to_si(value))

    @property
    def value_cgs_1e40(self) -> float:
        return si_rotatory_to_cgs(self.value_si)

    @property
    def is_right_handed(self) -> bool:
        return self.value_si > 0


def cgs_rotatory_to_si(r_cgs_1e40: float) -> float:
    """
    Convert a rotatory strength in units of 1e-40 cgs to SI (C^2*m^3/s)

    Args:
        r_cgs_1e40: signed rotatory strength in 1e-40 cgs

    Returns:
        signed rotatory strength in C^2*m^3/s
    """
    return r_cgs_1e40 * CGS_1E40 * K_R


def si_rotatory_to_cgs(r_si: float) -> float:
    """Inverse of cgs_rotatory_to_si"""
    return r_si / K_R / CGS_1E40


def de_broglie_wavelength(mass: float, v_z: float) -> float:
    """
    de Broglie wavelength h / (m v)

    Args:
        mass: particle mass in kg
        v_z: longitudinal velocity in m/s

    Returns:
        wavelength in m
    """
    if not mass > 0 or not v_z > 0:
        raise DomainError("mass and velocity must be positive", mass=mass, v_z=v_z)
    return CONST.h / (mass * v_z)


def talbot_length(period: float, wavelength: float) -> float:
    """Talbot length d^2 / lambda"""
    if not period > 0 or not wavelength > 0:
        raise DomainError("period and wavelength must be positive", period=period, wavelength=wavelength)
    return period ** 2 / wavelength
