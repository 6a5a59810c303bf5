# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Cut-off distances near the grating walls

Molecules closer to a wall than x_c are lost: at G1 and G2 they are deflected beyond the
acceptance angle, at G3 they hit the wall during transit. Distances y are counted from the
coating surface (the bare surface when uncoated), so a molecule at y sits at a + y from the wall.
"""
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from loguru import logger
from scipy import integrate, optimize

from chiraltalbot.constants import NM
from chiraltalbot.errors import NumericalError, SlitClosureError
from chiraltalbot.models import CutoffRule, Deflection, FlyThrough, GratingSpec, Molecule, WallModel
from chiraltalbot.potentials import wall_force, wall_is_inert, wall_potential

# Below this distance the continuum CP model is not trusted
X_MIN = 0.1 * NM
N_SCAN = 512
XTOL = 1e-18
RTOL = 1e-14


@dataclass(frozen=True)
class CutoffResult:
    """
    Solved cut-off distance

    Attributes:
        x_c: m, >= 0
        rule: the cutoff rule used
        converged: False only when the root was clamped to the lower search edge
        residual: criterion mismatch at x_c, relative to the threshold
        diagnostic: human-readable note, empty when nothing unusual happened
    """
    x_c: float
    rule: Union[Deflection, FlyThrough]
    converged: bool = True
    residual: float = 0.0
    diagnostic: str = ""


def _scan_grid(x_min: float, x_max: float, n_scan: int) -> np.ndarray:
    if not x_max > x_min:
        raise SlitClosureError("open slit narrower than the minimum wall distance", x_max=x_max, x_min=x_min)
    return np.geomspace(x_min, x_max, n_scan)


def cutoff_deflection(wall: WallModel, mol: Molecule, b: float, p_z: float, theta: float, x_max: float,
                      x_min: float = X_MIN, n_scan: int = N_SCAN, xtol: float = XTOL,
                      rtol: float = RTOL) -> CutoffResult:
    """
    Largest distance at which the wall deflects a molecule by the acceptance angle

    Solves |F(x_c)| m b / p_z^2 = theta for the attractive part of the wall force.

    Args:
        wall: wall model
        mol: the molecule
        b: grating thickness, m
        p_z: longitudinal momentum, kg*m/s
        theta: acceptance angle, rad
        x_max: upper edge of the search bracket (the slit centre), m
        x_min: lower edge of the search bracket, m
        n_scan: log-spaced bracketing points
        xtol: absolute root tolerance, m
        rtol: relative root tolerance

    Returns:
        CutoffResult
    """
    rule = Deflection(theta)
    if wall_is_inert(wall, mol):
        return CutoffResult(0.0, rule)
    a = wall.coating_thickness
    threshold = theta * p_z ** 2 / (mol.mass * b)

    def excess(y):
        attraction = np.maximum(-wall_force(wall, a + np.asarray(y, dtype=float), mol), 0.0)
        return attraction / threshold - 1.0

    ys = _scan_grid(x_min, x_max, n_scan)
    values = excess(ys)
    above = np.nonzero(values >= 0)[0]
    if above.size == 0:
        if -float(wall_force(wall, a + x_min, mol)) > 0:
            note = f"deflection root below {x_min:.3g} m, clamped"
            logger.debug(f"{note} (wall={wall}, theta={theta})")
            return CutoffResult(x_min, rule, converged=False, residual=float(values[0]), diagnostic=note)
        return CutoffResult(0.0, rule)
    i = int(above[-1])
    if i == ys.size - 1:
        raise SlitClosureError("deflection cut-off closes the slit", theta=theta, x_max=x_max)
    try:
        root = optimize.brentq(excess, ys[i], ys[i + 1], xtol=xtol, rtol=rtol, maxiter=200)
    except (ValueError, RuntimeError) as e:
        raise NumericalError(f"deflection root not bracketed: {e}", lower=ys[i], upper=ys[i + 1])
    return CutoffResult(float(root), rule, residual=float(excess(root)))


def fall_time(wall: WallModel, mol: Molecule, y: float, epsrel: float = 1e-12) -> float:
    """
    Time to reach the wall from distance y, starting at rest: sqrt(m/2) int_0^y ds / sqrt(-V(a + s))

    Args:
        wall: attractive wall model
        mol: the molecule
        y: starting distance from the coating surface, m
        epsrel: relative quadrature tolerance

    Returns:
        seconds
    """
    if y <= 0:
        return 0.0
    a = wall.coating_thickness

    def integrand(s):
        depth = -float(wall_potential(wall, a + s, mol))
        return 1.0 / math.sqrt(depth) if depth > 0 else math.inf

    value, abserr = integrate.quad(integrand, 0.0, y, epsabs=0.0, epsrel=epsrel, limit=200)
    if not math.isfinite(value) or abserr > 1e3 * epsrel * abs(value):
        raise NumericalError("fall-time quadrature failed", y=y, abserr=abserr)
    return math.sqrt(mol.mass / 2.0) * value


def cutoff_flythrough(wall: WallModel, mol: Molecule, b: float, v_z: float, x_max: float,
                      x_min: float = X_MIN, n_scan: int = N_SCAN, xtol: float = XTOL, rtol: float = RTOL,
                      epsrel: float = 1e-12) -> CutoffResult:
    """
    Largest starting distance from which a molecule falls onto the wall while crossing the grating

    Solves b / v_z = sqrt(m/2) int_0^{x_c} dx / sqrt(-V(x)) for the nearest wall alone.

    Args:
        wall: wall model
        mol: the molecule
        b: grating thickness, m
        v_z: velocity, m/s
        x_max: slit centre distance, m
        x_min: no capture is assumed when the wall is not attractive here
        n_scan: points used to locate the attractive region
        xtol: absolute root tolerance, m
        rtol: relative root tolerance
        epsrel: relative tolerance of the inner quadrature

    Returns:
        CutoffResult
    """
    rule = FlyThrough()
    if wall_is_inert(wall, mol):
        return CutoffResult(0.0, rule)
    a = wall.coating_thickness
    if not float(wall_potential(wall, a + x_min, mol)) < 0:
        return CutoffResult(0.0, rule, diagnostic="wall not attractive at contact")
    transit = b / v_z

    ys = _scan_grid(x_min, x_max, n_scan)
    non_attractive = np.nonzero(wall_potential(wall, a + ys, mol) >= 0)[0]
    y_hi = float(ys[non_attractive[0] - 1]) if non_attractive.size else x_max

    def mismatch(y):
        return fall_time(wall, mol, y, epsrel) / transit - 1.0

    top = mismatch(y_hi)
    if top < 0:
        if y_hi >= x_max:
            raise SlitClosureError("fly-through cut-off closes the slit", transit=transit, x_max=x_max)
        note = "attractive region captured entirely"
        logger.debug(f"{note}: x_c set to {y_hi:.6g} m")
        return CutoffResult(y_hi, rule, residual=top, diagnostic=note)
    try:
        root = optimize.brentq(mismatch, 0.0, y_hi, xtol=xtol, rtol=rtol, maxiter=200)
    except (ValueError, RuntimeError) as e:
        raise NumericalError(f"fly-through root not bracketed: {e}", upper=y_hi)
    return CutoffResult(float(root), rule, residual=float(mismatch(root)))


def solve_cutoff(spec: GratingSpec, mol: Molecule, v_z: float, x_min: float = X_MIN) -> CutoffResult:
    """Cut-off of one grating according to its rule"""
    rule: CutoffRule = spec.cutoff_rule
    x_max = spec.open_half_width
    if isinstance(rule, Deflection):
        result = cutoff_deflection(spec.wall, mol, spec.thickness_b, mol.mass * v_z, rule.theta, x_max, x_min)
    elif isinstance(rule, FlyThrough):
        result = cutoff_flythrough(spec.wall, mol, spec.thickness_b, v_z, x_max, x_min)
    else:
        raise TypeError(f"Unknown cutoff rule: {rule!r}")
    if not result.x_c < x_max:
        raise SlitClosureError("cut-off closes the slit", x_c=result.x_c, x_max=x_max)
    return result
