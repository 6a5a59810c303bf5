# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Talbot-Lau coefficient engine: grating Fourier spectra, Talbot coefficients, signal and visibility

Conventions:
    t(x) = sum_l a_l exp(2 pi i l x / d),  a_l = (1/d) int_period t(x) exp(-2 pi i l x / d) dx
    S(x3) = sum_l conj(A_l) conj(A'_l) B_{2l} exp(2 pi i l x3 / d)
G1 and G3 act through their intensity masks, which are binary, so A_l = sin(pi l f)/(pi l).
The G2 coefficients B_n are evaluated in real space,
    B_n = exp(-i pi n^2 tau / 2) (1/d) int t2(y) conj(t2(y + n tau d / 2)) exp(-2 pi i n y / d) dy,
which is the infinite-truncation limit of the spectral sum in talbot_B.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from numpy.polynomial.legendre import leggauss
from scipy import interpolate, optimize

from chiraltalbot.constants import CONST
from chiraltalbot.cutoff import X_MIN, CutoffResult, solve_cutoff
from chiraltalbot.errors import ConfigError, QuadratureError, SlitClosureError, TruncationError
from chiraltalbot.models import GratingSpec, InterferometerConfig, Molecule
from chiraltalbot.potentials import slit_force, slit_potential, wall_is_inert
from chiraltalbot.quadrature import graded_breaks, integrate_doubling


@dataclass(frozen=True)
class EngineSettings:
    """
    Numerical settings of the engine

    Attributes:
        l_max: initial truncation order of the signal sum
        l_max_cap: l_max is doubled up to this value until the truncation check passes
        truncation_tol: allowed change of S (relative to dc) and of the visibility on doubling l_max
        quad_rtol: relative accuracy of the Fourier quadratures
        edge_tol: window-relative size of the skipped wall-side tail where the phase diverges
        negativity_tol: allowed negative S, relative to dc
        samples_per_period: x3 samples per grating period
        talbot_phase: False gives the classical moire limit
        x_min: lower edge of the cut-off search
    """
    l_max: int = 64
    l_max_cap: int = 1024
    truncation_tol: float = 1e-6
    quad_rtol: float = 1e-8
    edge_tol: float = 1e-7
    negativity_tol: float = 1e-4
    samples_per_period: int = 512
    talbot_phase: bool = True
    x_min: float = X_MIN

    def __post_init__(self):
        if self.l_max < 1 or self.l_max_cap < self.l_max:
            raise ConfigError("need 1 <= l_max <= l_max_cap", l_max=self.l_max, l_max_cap=self.l_max_cap)
        if self.samples_per_period < 256:
            raise ConfigError("at least 256 x3 samples per period are required",
                              samples_per_period=self.samples_per_period)


@dataclass(frozen=True)
class FourierSpectrum:
    """Coefficients of orders -l_max..l_max, stored at index l + l_max"""
    coefficients: np.ndarray
    l_max: int

    def __post_init__(self):
        if self.coefficients.shape != (2 * self.l_max + 1,):
            raise ValueError(f"expected {2 * self.l_max + 1} coefficients, got {self.coefficients.shape}")

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.l_max, self.l_max + 1)

    @property
    def tail_bound(self) -> float:
        """Largest modulus on the truncation boundary"""
        return float(max(abs(self.coefficients[0]), abs(self.coefficients[-1])))

    def __getitem__(self, l: int) -> complex:
        if abs(l) > self.l_max:
            return 0j
        return complex(self.coefficients[l + self.l_max])


@dataclass
class FringeResult:
    """Sampled detector signal S(x3) and its visibility"""
    x3_samples: np.ndarray
    S_values: np.ndarray
    visibility: float
    dc_level: float
    l_max: int = 0
    tail_bound: float = 0.0
    L_over_talbot: float = math.nan
    cutoffs: Tuple[CutoffResult, ...] = field(default_factory=tuple)

    @property
    def sampled_visibility(self) -> float:
        s_max, s_min = float(np.max(self.S_values)), float(np.min(self.S_values))
        return (s_max - s_min) / (s_max + s_min)

    @property
    def mean_signal(self) -> float:
        return float(np.mean(self.S_values))


def binary_coeffs(f_eff: float, orders) -> np.ndarray:
    """Fourier coefficients sin(pi l f)/(pi l) of a centred binary window of open fraction f_eff"""
    orders = np.asarray(orders)
    if f_eff >= 1:
        return (orders == 0).astype(float)
    safe = np.where(orders == 0, 1, orders)
    return np.where(orders == 0, f_eff, np.sin(np.pi * safe * f_eff) / (np.pi * safe))


def geometric_coeffs(f_eff: float, d: float, l_max: int) -> FourierSpectrum:
    """
    Spectrum of an amplitude-only slit of width f_eff * d centred at x = 0

    Args:
        f_eff: effective open fraction after cut-off and coating, in (0, 1]
        d: period, m
        l_max: truncation order

    Returns:
        FourierSpectrum
    """
    if not f_eff > 0:
        raise SlitClosureError("effective slit is closed", f_eff=f_eff, d=d)
    if f_eff > 1:
        raise ConfigError("effective open fraction exceeds 1", f_eff=f_eff)
    orders = np.arange(-l_max, l_max + 1)
    return FourierSpectrum(binary_coeffs(f_eff, orders).astype(complex), l_max)


def _window_integral(p: float, q: float, n: int, d: float) -> complex:
    """int_p^q exp(-2 pi i n y / d) dy"""
    if n == 0:
        return complex(q - p)
    k = -2j * np.pi * n / d
    return complex((np.exp(k * q) - np.exp(k * p)) / k)


class SlitTransmission:
    """
    Eikonal transmission t(x) = exp(-i phi(x)) of one slit of the second grating, zero outside |x| <= support

    phi(x) = m b V_slit(x) / (p_z hbar). When the window reaches a wall with a diverging potential,
    a thin wall-side tail of rapidly rotating phase is dropped; its contribution is below
    edge_tol times the window width.
    """

    def __init__(self, spec: GratingSpec, mol: Molecule, v_z: float, x_c: float,
                 rtol: float = 1e-8, edge_tol: float = 1e-7, max_dphase: float = 4.0):
        self.spec = spec
        self.mol = mol
        self.period = spec.period_d
        self.half_width = spec.open_half_width - x_c
        if not self.half_width > 0:
            raise SlitClosureError("cut-off closes the second grating", x_c=x_c)
        self.x_c = x_c
        self.rtol = rtol
        self.k_phase = spec.thickness_b / (v_z * CONST.hbar)
        self.has_phase = not wall_is_inert(spec.wall, mol)
        self.margin = self._edge_margin(edge_tol) if self.has_phase and x_c == 0 else 0.0
        self.support = self.half_width - self.margin
        if self.has_phase:
            self.breaks = self._phase_breaks(max_dphase)
        else:
            self.breaks = np.array([-self.support, self.support])

    def phase(self, x):
        return self.k_phase * slit_potential(x, self.spec, self.mol)

    def phase_slope(self, x):
        return -self.k_phase * slit_force(x, self.spec, self.mol)

    def __call__(self, x):
        return np.exp(-1j * self.phase(x)) if self.has_phase else np.ones_like(np.asarray(x, dtype=float), complex)

    @property
    def effective_fraction(self) -> float:
        return 2.0 * self.support / self.period

    def _edge_margin(self, edge_tol: float) -> float:
        w = self.half_width
        steep = 4.0 / (edge_tol * 2.0 * w)

        def excess(log_s):
            return math.log(abs(float(self.phase_slope(w - math.exp(log_s)))) + 1e-300) - math.log(steep)

        lo, hi = math.log(w * 1e-12), math.log(w / 2)
        if excess(lo) < 0:
            return math.exp(lo)
        if excess(hi) >= 0:
            logger.warning(f"eikonal phase steep across the whole slit, half width {w:.4g} m")
            return math.exp(hi)
        margin = math.exp(optimize.brentq(excess, lo, hi, xtol=1e-6))
        logger.debug(f"skipping {margin:.4g} m of diverging phase at each wall")
        return margin

    def _phase_breaks(self, max_dphase: float, max_points: int = 2_000_000) -> np.ndarray:
        s = self.support
        x = graded_breaks(-s, s, 32)
        for _ in range(80):
            jumps = np.abs(np.diff(self.phase(x))) > max_dphase
            if not jumps.any():
                return x
            mids = 0.5 * (x[:-1][jumps] + x[1:][jumps])
            x = np.sort(np.concatenate([x, mids]))
            if x.size > max_points:
                break
        raise QuadratureError("eikonal phase could not be resolved", support=s, points=x.size)

    def _breaks_on(self, p: float, q: float, max_order: int, shift: Optional[float] = None) -> np.ndarray:
        parts = [np.array([p, q]), self.breaks[(self.breaks > p) & (self.breaks < q)]]
        if shift is not None:
            shifted = self.breaks - shift
            parts.append(shifted[(shifted > p) & (shifted < q)])
        n_osc = int(math.ceil(2.0 * abs(max_order) * (q - p) / self.period))
        if n_osc > 1:
            parts.append(np.linspace(p, q, n_osc + 1))
        return np.unique(np.concatenate(parts))

    def spectrum(self, l_max: int) -> FourierSpectrum:
        """b_l = (1/d) int_window t(x) exp(-2 pi i l x / d) dx for |l| <= l_max"""
        if not self.has_phase:
            return geometric_coeffs(self.effective_fraction, self.period, l_max)
        s, d = self.support, self.period
        orders = np.arange(-l_max, l_max + 1)

        def integrand(x):
            return np.exp(-2j * np.pi * np.outer(orders, x) / d - 1j * self.phase(x)[None, :])

        values = integrate_doubling(integrand, self._breaks_on(-s, s, l_max), scale=2 * s, rtol=self.rtol,
                                    label=f"for |l| <= {l_max} on window [{-s:.6g}, {s:.6g}] m")
        return FourierSpectrum(values / d, l_max)

    def overlap_B(self, n: int, tau: float) -> complex:
        """Second-grating Talbot coefficient B_n at L/L_lambda = tau, by the real-space overlap integral"""
        d, s = self.period, self.support
        delta = n * tau * d / 2.0
        delta = delta - d * round(delta / d)
        prefactor = np.exp(-1j * np.pi * math.fmod(n * n * tau / 2.0, 2.0))
        total = 0j
        for k in range(math.ceil((delta - 2 * s) / d), math.floor((delta + 2 * s) / d) + 1):
            shift = delta - k * d
            p, q = max(-s, -s - shift), min(s, s - shift)
            if not q > p:
                continue
            if not self.has_phase:
                total += _window_integral(p, q, n, d)
                continue

            def integrand(y, shift=shift):
                return np.exp(-1j * (self.phase(y) - self.phase(y + shift)) - 2j * np.pi * n * y / d)

            total += complex(integrate_doubling(integrand, self._breaks_on(p, q, n, shift), scale=q - p,
                                                rtol=self.rtol, label=f"for B_{n} on [{p:.6g}, {q:.6g}] m"))
        return complex(prefactor * total / d)

    def continued_spectrum(self, j_max: int) -> FourierSpectrum:
        """
        Full-period coefficients c_j of exp(-i psi(x)), psi = phi inside the window

        Across the bar psi is a cubic Hermite bridge matching phi and phi' at both window edges
        (value only when the window edge was pulled back from a diverging wall).
        """
        if not self.has_phase:
            orders = np.arange(-j_max, j_max + 1)
            return FourierSpectrum((orders == 0).astype(complex), j_max)
        s, d = self.support, self.period
        window = self.spectrum(j_max).coefficients * d
        if not d - 2 * s > 0:
            return FourierSpectrum(window / d, j_max)
        edges = np.array([s, -s])
        slopes = self.phase_slope(edges) if self.margin == 0 else np.zeros(2)
        bridge = interpolate.CubicHermiteSpline([s, d - s], self.phase(edges), slopes)
        points = np.linspace(s, d - s, 4097)
        variation = float(np.sum(np.abs(np.diff(bridge(points)))))
        n_panels = max(int(math.ceil(variation / 2.0)), int(math.ceil(2.0 * j_max * (d - 2 * s) / d)), 4)
        orders = np.arange(-j_max, j_max + 1)

        def integrand(x):
            return np.exp(-2j * np.pi * np.outer(orders, x) / d - 1j * bridge(x)[None, :])

        bar = integrate_doubling(integrand, np.linspace(s, d - s, n_panels + 1), scale=d - 2 * s,
                                 rtol=self.rtol, label="across the grating bar")
        return FourierSpectrum((window + bar) / d, j_max)


def eikonal_coeffs(spec: GratingSpec, mol: Molecule, v_z: float, x_c: float, l_max: int,
                   rtol: float = 1e-8, edge_tol: float = 1e-7) -> FourierSpectrum:
    """
    Fourier coefficients of the potential-dressed slit of the second grating

    Args:
        spec: grating
        mol: the molecule
        v_z: velocity, m/s
        x_c: cut-off distance of this grating, m
        l_max: truncation order
        rtol: relative quadrature accuracy, checked by panel doubling
        edge_tol: see SlitTransmission

    Returns:
        FourierSpectrum of b_l
    """
    return SlitTransmission(spec, mol, v_z, x_c, rtol, edge_tol).spectrum(l_max)


def convolution_coeffs(spec: GratingSpec, mol: Molecule, v_z: float, x_c: float, l_max: int,
                       n_terms: int = 2048, rtol: float = 1e-8, edge_tol: float = 1e-7) -> FourierSpectrum:
    """b_l = sum_{|j| <= n_terms} b'_j c_{l-j}: window coefficients convolved with the full-period phase factor"""
    transmission = SlitTransmission(spec, mol, v_z, x_c, rtol, edge_tol)
    c_max = l_max + n_terms
    phase_factor = transmission.continued_spectrum(c_max).coefficients
    window = binary_coeffs(transmission.effective_fraction, np.arange(-n_terms, n_terms + 1))
    full = np.convolve(window, phase_factor)
    centre = n_terms + c_max
    return FourierSpectrum(full[centre - l_max:centre + l_max + 1], l_max)


def _autocorrelation(spectrum: FourierSpectrum, l: int, tau: float) -> complex:
    lm = spectrum.l_max
    lo, hi = max(-lm, l - lm), min(lm, l + lm)
    if lo > hi:
        return 0j
    j = np.arange(lo, hi + 1)
    b = spectrum.coefficients
    terms = b[j + lm] * np.conj(b[j - l + lm])
    if tau:
        terms = terms * np.exp(1j * np.pi * (l * l - 2 * j * l) * tau / 2.0)
    return complex(np.sum(terms))


def talbot_A(spectrum: FourierSpectrum, l: int) -> complex:
    """A_l = sum_j a_j conj(a_{j-l})"""
    return _autocorrelation(spectrum, l, 0.0)


def talbot_B(spectrum: FourierSpectrum, l: int, L_over_Ltalbot: float) -> complex:
    """B_l = sum_j b_j conj(b_{j-l}) exp(i pi (l^2 - 2 j l) L/L_lambda / 2)"""
    return _autocorrelation(spectrum, l, L_over_Ltalbot)


def sample_signal(coefficients: np.ndarray, d: float, x3) -> np.ndarray:
    """S(x3) from the coefficients c_l of orders l = 0..l_max, with c_{-l} = conj(c_l)"""
    x3 = np.asarray(x3, dtype=float)
    orders = np.arange(1, coefficients.size)
    harmonics = np.exp(2j * np.pi * np.outer(x3, orders) / d) @ coefficients[1:]
    return coefficients[0].real + 2.0 * harmonics.real


def visibility_from_coefficients(coefficients: np.ndarray) -> float:
    """Sinusoidal visibility |sum_n c_{2n-1}| / (c_0/2 + sum_n c_{2n})"""
    numerator = abs(np.sum(coefficients[1::2]))
    denominator = (0.5 * coefficients[0] + np.sum(coefficients[2::2])).real
    if not denominator > 0:
        raise ConfigError("no transmission through the interferometer", denominator=denominator)
    return float(numerator / denominator)


def x3_grid(d: float, f: float, samples_per_period: int = 512) -> np.ndarray:
    """G3 displacements covering [-X, X], X = max(2 f d, d/2)"""
    half_span = max(2.0 * f * d, d / 2.0)
    n = 2 * int(round(half_span / d * samples_per_period)) + 1
    return np.linspace(-half_span, half_span, n)


class InterferometerSolution:
    """Cut-offs, effective masks and cached second-grating coefficients of one monochromatic configuration"""

    def __init__(self, cfg: InterferometerConfig, settings: Optional[EngineSettings] = None):
        self.cfg = cfg
        self.settings = settings or EngineSettings()
        mol, v_z, d = cfg.molecule, cfg.v_z, cfg.period
        self.cutoffs = tuple(solve_cutoff(g, mol, v_z, self.settings.x_min) for g in cfg.gratings)
        self.f1 = 2.0 * (cfg.g1.open_half_width - self.cutoffs[0].x_c) / d
        self.f3 = 2.0 * (cfg.g3.open_half_width - self.cutoffs[2].x_c) / d
        self.transmission = SlitTransmission(cfg.g2, mol, v_z, self.cutoffs[1].x_c,
                                             self.settings.quad_rtol, self.settings.edge_tol)
        self.tau = cfg.L_over_talbot if self.settings.talbot_phase else 0.0
        self._overlap: Dict[int, complex] = {}

    def B(self, n: int) -> complex:
        if n not in self._overlap:
            self._overlap[n] = self.transmission.overlap_B(n, self.tau)
        return self._overlap[n]

    def coefficients(self, l_max: int) -> np.ndarray:
        """c_l = conj(A_l) conj(A'_l) B_{2l} for l = 0..l_max"""
        orders = np.arange(l_max + 1)
        a1 = binary_coeffs(self.f1, orders)
        a3 = binary_coeffs(self.f3, orders)
        b = np.array([self.B(2 * int(l)) for l in orders])
        return np.conj(a1) * np.conj(a3) * b

    def converged_coefficients(self) -> Tuple[np.ndarray, int]:
        """Coefficients with l_max doubled until S and the visibility stop changing"""
        s = self.settings
        d = self.cfg.period
        points = np.linspace(0.0, d, 257)
        l_max = s.l_max
        coefficients = self.coefficients(l_max)
        while l_max < s.l_max_cap:
            finer = self.coefficients(2 * l_max)
            dc = finer[0].real
            change_s = float(np.max(np.abs(sample_signal(finer, d, points) - sample_signal(coefficients, d, points))))
            change_v = abs(visibility_from_coefficients(finer) - visibility_from_coefficients(coefficients))
            coefficients, l_max = finer, 2 * l_max
            logger.debug(f"l_max={l_max}: dS/dc={change_s / dc:.3g}, dV={change_v:.3g}")
            if change_s <= s.truncation_tol * dc and change_v <= s.truncation_tol:
                return coefficients, l_max
        if s.l_max < s.l_max_cap:
            logger.warning(f"truncation check not met at l_max cap {s.l_max_cap}")
        return coefficients, l_max


def fringe_from_coefficients(coefficients: np.ndarray, cfg: InterferometerConfig, settings: EngineSettings,
                             cutoffs: Tuple[CutoffResult, ...] = ()) -> FringeResult:
    """Sample S on the x3 grid and check it is a density"""
    d = cfg.period
    x3 = x3_grid(d, cfg.g3.open_fraction_f, settings.samples_per_period)
    values = sample_signal(coefficients, d, x3)
    dc = float(coefficients[0].real)
    if float(np.min(values)) < -settings.negativity_tol * dc:
        raise TruncationError("negative signal, increase l_max", S_min=float(np.min(values)), dc=dc,
                              l_max=coefficients.size - 1)
    return FringeResult(
        x3_samples=x3,
        S_values=values,
        visibility=visibility_from_coefficients(coefficients),
        dc_level=dc,
        l_max=coefficients.size - 1,
        tail_bound=float(abs(coefficients[-1])),
        L_over_talbot=cfg.L_over_talbot,
        cutoffs=tuple(cutoffs),
    )


def signal(cfg: InterferometerConfig, settings: Optional[EngineSettings] = None) -> FringeResult:
    """
    Detector signal S(x3) of a monochromatic configuration

    Args:
        cfg: interferometer
        settings: numerical settings

    Returns:
        FringeResult
    """
    settings = settings or EngineSettings()
    solution = InterferometerSolution(cfg, settings)
    coefficients, _ = solution.converged_coefficients()
    return fringe_from_coefficients(coefficients, cfg, settings, solution.cutoffs)


def visibility(cfg: InterferometerConfig, settings: Optional[EngineSettings] = None) -> float:
    settings = settings or EngineSettings()
    coefficients, _ = InterferometerSolution(cfg, settings).converged_coefficients()
    return visibility_from_coefficients(coefficients)


def visibility_curve(cfg: InterferometerConfig, v_range: Sequence[float], n_points: int,
                     settings: Optional[EngineSettings] = None) -> List[Tuple[float, float]]:
    """Visibility at n_points velocities spread evenly over v_range, cut-offs re-solved at every velocity"""
    v_lo, v_hi = float(v_range[0]), float(v_range[1])
    if not 0 < v_lo <= v_hi or n_points < 1:
        raise ConfigError("velocity range must be positive and increasing", v_range=tuple(v_range))
    velocities = np.linspace(v_lo, v_hi, n_points) if n_points > 1 else np.array([v_lo])
    return [(float(v), visibility(cfg.with_velocity(float(v)), settings)) for v in velocities]


def bin_averaged_coefficients(cfg: InterferometerConfig, v_lo: float, v_hi: float,
                              settings: Optional[EngineSettings] = None, n_nodes: int = 11) -> np.ndarray:
    """Signal coefficients averaged uniformly over [v_lo, v_hi] with Gauss-Legendre nodes"""
    settings = settings or EngineSettings()
    nodes, weights = leggauss(n_nodes)
    centre, half = 0.5 * (v_lo + v_hi), 0.5 * (v_hi - v_lo)
    parts = []
    for x, w in zip(nodes, weights):
        coefficients, _ = InterferometerSolution(cfg.with_velocity(centre + half * x), settings).converged_coefficients()
        parts.append((0.5 * w, coefficients))
    size = max(c.size for _, c in parts)
    total = np.zeros(size, dtype=complex)
    for w, c in parts:
        total[:c.size] += w * c
    return total
