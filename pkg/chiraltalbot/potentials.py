# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Non-retarded Casimir-Polder potentials and forces of molecule-wall pairs, and the two-wall slit

Distances x are measured from the bare wall surface. Forces are F = -dV/dx, negative when attractive.
All functions accept scalars or numpy arrays.
"""
import math
from functools import lru_cache

import numpy as np
from loguru import logger
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from chiraltalbot.constants import CONST
from chiraltalbot.errors import DomainError, QuadratureError
from chiraltalbot.models import (
    BareSiN,
    ChiralMirror,
    CoatedSiN,
    DielectricModel,
    GratingSpec,
    Molecule,
    PerfectChiral,
    WallModel,
    dipole_moments,
)

_PI = math.pi


def _positive(x, lower: float = 0.0, what: str = "distance"):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > lower)):
        raise DomainError(f"{what} must exceed {lower:.6g} m", x_min=float(np.min(x)))
    return x


def alpha_imag(mol: Molecule, xi):
    """
    Isotropic electric polarizability at imaginary frequency, C*m^2/V

    Args:
        mol: the molecule
        xi: imaginary frequency in rad/s, >= 0

    Returns:
        alpha(i xi) = 2/(3 hbar) * omega1 |d01|^2 / (omega1^2 + xi^2)
    """
    d2, _ = dipole_moments(mol)
    xi = np.asarray(xi, dtype=float)
    return 2.0 / (3.0 * CONST.hbar) * mol.omega1 * d2 / (mol.omega1 ** 2 + xi ** 2)


def epsilon_imag(diel: DielectricModel, xi):
    """
    Dielectric function at imaginary frequency

    Args:
        diel: oscillator parameters
        xi: imaginary frequency in rad/s, >= 0

    Returns:
        (Omega_L^2 + xi^2 + xi gamma_L) / (Omega_T^2 + xi^2 + xi gamma_T)
    """
    xi = np.asarray(xi, dtype=float)
    return (diel.Omega_L ** 2 + xi ** 2 + xi * diel.gamma_L) / (diel.Omega_T ** 2 + xi ** 2 + xi * diel.gamma_T)


def _reflection_factor(diel: DielectricModel, xi):
    eps = epsilon_imag(diel, xi)
    return (eps - 1.0) / (eps + 1.0)


# ---------------------------------------------------------------------------
# Chiral mirror
# ---------------------------------------------------------------------------

def _chiral_mirror_terms(x, mol: Molecule, r: float, r_c: float):
    x = _positive(x)
    d2, m2 = dipole_moments(mol)
    v_em = (-r * d2 + r * m2 / CONST.c ** 2) / (48.0 * _PI * CONST.eps0 * x ** 3)
    k_chiral = r_c * CONST.mu0 * CONST.c * mol.rotatory_strength / (12.0 * _PI ** 2)
    log_term = np.log(mol.omega1 * x / CONST.c)
    return x, v_em, k_chiral, log_term


def v_chiral_mirror(x, mol: Molecule, r: float, r_c: float):
    """
    Electric, magnetic and chiral CP potential of a chiral mirror, J

    Args:
        x: distance from the wall, m
        mol: the molecule
        r: achiral reflection coefficient
        r_c: chiral (cross-polarisation) reflection coefficient

    Returns:
        V_e + V_m + V_c
    """
    x, v_em, k_chiral, log_term = _chiral_mirror_terms(x, mol, r, r_c)
    return v_em + k_chiral * log_term / x ** 3


def force_chiral_mirror(x, mol: Molecule, r: float, r_c: float):
    """Analytic force -dV/dx of v_chiral_mirror, N"""
    x, v_em, k_chiral, log_term = _chiral_mirror_terms(x, mol, r, r_c)
    return 3.0 * v_em / x + k_chiral * (3.0 * log_term - 1.0) / x ** 4


# ---------------------------------------------------------------------------
# Molecular coating layer
# ---------------------------------------------------------------------------

def coating_strength(mol_a: Molecule, mol_b: Molecule, n_b: float) -> float:
    """
    Prefactor P of the coating potential V = -P (1/(x-a)^3 - 1/x^3), J*m^3

    Electric, magnetic and chiral pair terms summed over a single transition of each molecule.
    """
    d2a, m2a = dipole_moments(mol_a)
    d2b, m2b = dipole_moments(mol_b)
    energy = CONST.hbar * (mol_a.omega1 + mol_b.omega1)
    electric = d2a * d2b / (144.0 * _PI)
    magnetic = m2a * m2b / (144.0 * _PI * CONST.c ** 4)
    chiral = mol_a.rotatory_strength * mol_b.rotatory_strength / (72.0 * _PI * CONST.c ** 2)
    return n_b / (CONST.eps0 ** 2 * energy) * (electric + magnetic + chiral)


def v_coating(x, mol_a: Molecule, mol_b: Molecule, n_b: float, a: float):
    """
    Potential of a layer of thickness a of B molecules on the wall, J

    Args:
        x: distance from the bare wall surface, m, > a
        mol_a: matter-wave molecule
        mol_b: coating molecule
        n_b: number density of the coating, 1/m^3
        a: layer thickness, m

    Returns:
        the coating potential
    """
    x = _positive(x, a, "distance to the bare wall")
    p = coating_strength(mol_a, mol_b, n_b)
    return -p * (1.0 / (x - a) ** 3 - 1.0 / x ** 3)


def force_coating(x, mol_a: Molecule, mol_b: Molecule, n_b: float, a: float):
    """Analytic force -dV/dx of v_coating, N"""
    x = _positive(x, a, "distance to the bare wall")
    p = coating_strength(mol_a, mol_b, n_b)
    return 3.0 * p * (1.0 / x ** 4 - 1.0 / (x - a) ** 4)


# ---------------------------------------------------------------------------
# Bare dielectric grating
# ---------------------------------------------------------------------------

def casimir_integral_fixed(omega1: float, diel: DielectricModel, rtol: float = 1e-8, max_nodes: int = 4096) -> float:
    """
    J = int_0^inf dxi omega1/(omega1^2 + xi^2) (eps-1)/(eps+1), by Gauss-Legendre on xi = omega1 t/(1-t)

    The substitution turns the Lorentzian weight into 1/((1-t)^2 + t^2) on [0, 1).
    The node count is doubled until the relative change drops below rtol.
    """
    previous = None
    n = 32
    while n <= max_nodes:
        t, w = leggauss(n)
        t = 0.5 * (t + 1.0)
        w = 0.5 * w
        xi = omega1 * t / (1.0 - t)
        value = float(np.sum(w * _reflection_factor(diel, xi) / ((1.0 - t) ** 2 + t ** 2)))
        if previous is not None and abs(value - previous) <= rtol * abs(value):
            return value
        previous = value
        n *= 2
    raise QuadratureError("Casimir integral did not converge", omega1=omega1, nodes=max_nodes)


def casimir_integral_adaptive(omega1: float, diel: DielectricModel, rtol: float = 1e-10) -> float:
    """Same integral as casimir_integral_fixed, by adaptive quadrature on [0, inf)"""
    value, abserr = integrate.quad(
        lambda xi: omega1 / (omega1 ** 2 + xi ** 2) * _reflection_factor(diel, xi),
        0.0, np.inf, epsabs=0.0, epsrel=rtol, limit=200,
    )
    if abserr > 100 * rtol * abs(value) + 1e-300:
        raise QuadratureError("adaptive Casimir integral did not converge", omega1=omega1, abserr=abserr)
    return value


@lru_cache(maxsize=512)
def _cached_casimir_integral(omega1: float, diel: DielectricModel) -> float:
    value = casimir_integral_fixed(omega1, diel)
    logger.debug(f"Casimir integral for omega1={omega1:.6g}: {value:.12g}")
    return value


def bare_grating_strength(mol: Molecule, diel: DielectricModel) -> float:
    """C of V = -C/x^3 for the bare grating, J*m^3"""
    d2, _ = dipole_moments(mol)
    if d2 == 0:
        return 0.0
    # hbar/(16 pi^2 eps0) * 2 d2/(3 hbar) * J
    return d2 * _cached_casimir_integral(mol.omega1, diel) / (24.0 * _PI ** 2 * CONST.eps0)


def v_bare_grating(x, mol: Molecule, diel: DielectricModel):
    """
    Lifshitz-type non-retarded potential of the bare dielectric grating, J

    Args:
        x: distance from the wall, m
        mol: the molecule
        diel: dielectric model of the grating

    Returns:
        -C / x^3
    """
    x = _positive(x)
    return -bare_grating_strength(mol, diel) / x ** 3


def force_bare_grating(x, mol: Molecule, diel: DielectricModel):
    """Analytic force of v_bare_grating, N"""
    x = _positive(x)
    return -3.0 * bare_grating_strength(mol, diel) / x ** 4


# ---------------------------------------------------------------------------
# Wall models and the slit
# ---------------------------------------------------------------------------

def wall_potential(wall: WallModel, x, mol: Molecule):
    """Potential of one wall at distance x from its bare surface"""
    if isinstance(wall, PerfectChiral):
        return v_chiral_mirror(x, mol, 0.0, float(wall.r_c_sign))
    if isinstance(wall, ChiralMirror):
        return v_chiral_mirror(x, mol, wall.r, wall.r_c)
    if isinstance(wall, BareSiN):
        return v_bare_grating(x, mol, wall.dielectric)
    if isinstance(wall, CoatedSiN):
        x = _positive(x, wall.a, "distance to the bare wall")
        return v_bare_grating(x, mol, wall.dielectric) + v_coating(x, mol, wall.coating, wall.n_B, wall.a)
    raise TypeError(f"Unknown wall model: {wall!r}")


def wall_force(wall: WallModel, x, mol: Molecule):
    """Force of one wall at distance x from its bare surface, negative towards the wall"""
    if isinstance(wall, PerfectChiral):
        return force_chiral_mirror(x, mol, 0.0, float(wall.r_c_sign))
    if isinstance(wall, ChiralMirror):
        return force_chiral_mirror(x, mol, wall.r, wall.r_c)
    if isinstance(wall, BareSiN):
        return force_bare_grating(x, mol, wall.dielectric)
    if isinstance(wall, CoatedSiN):
        x = _positive(x, wall.a, "distance to the bare wall")
        return force_bare_grating(x, mol, wall.dielectric) + force_coating(x, mol, wall.coating, wall.n_B, wall.a)
    raise TypeError(f"Unknown wall model: {wall!r}")


def wall_is_inert(wall: WallModel, mol: Molecule) -> bool:
    """True when the wall exerts no potential at all on this molecule"""
    d2, m2 = dipole_moments(mol)
    chiral_off = mol.rotatory_strength == 0
    if isinstance(wall, PerfectChiral):
        return chiral_off
    if isinstance(wall, ChiralMirror):
        return (wall.r == 0 or (d2 == 0 and m2 == 0)) and (wall.r_c == 0 or chiral_off)
    if isinstance(wall, BareSiN):
        return d2 == 0
    if isinstance(wall, CoatedSiN):
        return d2 == 0 and (wall.a == 0 or coating_strength(mol, wall.coating, wall.n_B) == 0)
    raise TypeError(f"Unknown wall model: {wall!r}")


def _slit_distances(x, spec: GratingSpec):
    x = np.asarray(x, dtype=float)
    limit = spec.open_half_width
    if np.any(np.abs(x) >= limit):
        raise DomainError("slit coordinate inside a wall or coating", x_max=float(np.max(np.abs(x))), limit=limit)
    return spec.x_o - x, spec.x_o + x


def slit_potential(x, spec: GratingSpec, mol: Molecule):
    """
    Potential inside the slit from both walls, J

    Args:
        x: slit coordinate, |x| < x_o - a
        spec: grating
        mol: the molecule

    Returns:
        V_wall(x_o - x) + V_wall(x_o + x)
    """
    right, left = _slit_distances(x, spec)
    return wall_potential(spec.wall, right, mol) + wall_potential(spec.wall, left, mol)


def slit_force(x, spec: GratingSpec, mol: Molecule):
    """-dV_slit/dx, N"""
    right, left = _slit_distances(x, spec)
    return wall_force(spec.wall, left, mol) - wall_force(spec.wall, right, mol)


def tabulate_wall(wall: WallModel, mol: Molecule, distances) -> np.ndarray:
    """Rows (x, V, F) of a single wall, for export"""
    distances = np.asarray(distances, dtype=float)
    return np.column_stack([distances, wall_potential(wall, distances, mol), wall_force(wall, distances, mol)])
