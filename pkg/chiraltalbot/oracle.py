# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Brute-force wave optics through the three gratings, to validate the coefficient engine

An incoherent source behind G1 is modelled as a set of mutually incoherent point sources across one
open slit. Each is propagated on a periodic transverse grid: free flight by the paraxial transfer
function in Fourier space, the dressed G2 mask, another free flight. The G3-plane intensity is folded
onto one period and correlated with the G3 intensity mask. Only the cut-off distances are taken from
the rest of the package.
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy import fft

from chiraltalbot.constants import CONST
from chiraltalbot.cutoff import CutoffResult, solve_cutoff
from chiraltalbot.errors import ConfigError, NyquistError
from chiraltalbot.models import InterferometerConfig
from chiraltalbot.potentials import slit_potential, wall_is_inert
from chiraltalbot.talbot import FringeResult, x3_grid

SOURCE_CONVERGENCE = 0.002


@dataclass(frozen=True)
class WaveGrid:
    """
    Periodic transverse grid

    Attributes:
        period: grating period, m
        wavelength: de Broglie wavelength, m
        separation: grating separation L, m
        n_periods: grating periods inside the window
        samples_per_period: samples per period
    """
    period: float
    wavelength: float
    separation: float
    n_periods: int = 64
    samples_per_period: int = 512

    @classmethod
    def for_config(cls, cfg: InterferometerConfig, n_periods: int = 64, samples_per_period: int = 512) -> "WaveGrid":
        return cls(cfg.period, cfg.wavelength, cfg.separation_L, n_periods, samples_per_period)

    @property
    def n_samples(self) -> int:
        return self.n_periods * self.samples_per_period

    @property
    def width(self) -> float:
        return self.n_periods * self.period

    @property
    def dx(self) -> float:
        return self.period / self.samples_per_period

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.n_samples) - self.n_samples // 2) * self.dx

    @property
    def nyquist_limit(self) -> float:
        return self.wavelength * self.separation / (2.0 * self.width)

    def validate(self) -> None:
        n = self.n_samples
        if n & (n - 1):
            raise ConfigError("oracle sample count must be a power of two", n_samples=n)
        if self.n_periods < 32:
            raise ConfigError("oracle window needs at least 32 periods", n_periods=self.n_periods)
        if self.dx > self.nyquist_limit:
            raise NyquistError("oracle grid too coarse for the free-flight phase",
                               dx=self.dx, limit=self.nyquist_limit)


@dataclass
class OracleResult:
    fringe: FringeResult
    converged: bool
    n_sources: int
    visibility_change: float


@dataclass(frozen=True)
class OracleComparison:
    vis_engine: float
    vis_oracle: float
    rms_relative: float
    vis_tol: float
    rms_tol: float

    @property
    def passed(self) -> bool:
        return abs(self.vis_engine - self.vis_oracle) <= self.vis_tol and self.rms_relative <= self.rms_tol


def _wrap(x: np.ndarray, period: float) -> np.ndarray:
    """Coordinate relative to the nearest slit centre"""
    return np.mod(x + period / 2.0, period) - period / 2.0


def free_flight(psi: np.ndarray, grid: WaveGrid) -> np.ndarray:
    """Paraxial propagation over the grating separation along the last axis; unitary"""
    k = fft.fftfreq(grid.n_samples, d=grid.dx)
    transfer = np.exp(-1j * np.pi * grid.wavelength * grid.separation * k ** 2)
    return fft.ifft(fft.fft(psi, axis=-1) * transfer, axis=-1)


def _fold(intensity: np.ndarray, grid: WaveGrid) -> np.ndarray:
    return intensity.reshape(grid.n_periods, grid.samples_per_period).sum(axis=0)


def _correlate_mask(density: np.ndarray, mask: np.ndarray, dx: float, period: float) -> np.ndarray:
    """S[m] = (1/d) sum_j density[j] mask[j - m] dx on one period"""
    return fft.ifft(fft.fft(density) * np.conj(fft.fft(mask))).real * dx / period


def _resample(samples: np.ndarray, period: float, x3: np.ndarray) -> np.ndarray:
    """Trigonometric interpolation of periodic samples at u = j * period / n"""
    n = samples.size
    coefficients = fft.fft(samples) / n
    k = fft.fftfreq(n, d=1.0 / n)
    keep = np.abs(k) < n / 2
    return (np.exp(2j * np.pi * np.outer(x3, k[keep]) / period) @ coefficients[keep]).real


def _period_visibility(samples: np.ndarray) -> float:
    """(S(0) - S(d/2)) / (S(0) + S(d/2)) for samples starting at x3 = 0"""
    s0, s_half = samples[0], samples[samples.size // 2]
    return float(abs(s0 - s_half) / (s0 + s_half))


def _fringe(samples: np.ndarray, period: float, x3: np.ndarray, cfg: InterferometerConfig,
            cutoffs: Tuple[CutoffResult, ...]) -> FringeResult:
    return FringeResult(
        x3_samples=x3,
        S_values=_resample(samples, period, x3),
        visibility=_period_visibility(samples),
        dc_level=float(np.mean(samples)),
        L_over_talbot=cfg.L_over_talbot,
        cutoffs=cutoffs,
    )


def propagate_three_gratings(cfg: InterferometerConfig, grid: WaveGrid, n_source_points: int = 128,
                             cutoffs: Optional[Sequence[CutoffResult]] = None, x3: Optional[np.ndarray] = None,
                             batch: int = 32) -> OracleResult:
    """
    Detector signal from explicit wave propagation

    Args:
        cfg: interferometer
        grid: transverse grid, validated here
        n_source_points: minimum number of incoherent point sources in one G1 slit
        cutoffs: cut-off results per grating, solved when omitted
        x3: G3 displacements of the output, the engine grid by default
        batch: sources propagated together

    Returns:
        OracleResult
    """
    grid.validate()
    d, mol = cfg.period, cfg.molecule
    if cutoffs is None:
        cutoffs = tuple(solve_cutoff(g, mol, cfg.v_z) for g in cfg.gratings)
    cutoffs = tuple(cutoffs)
    if x3 is None:
        x3 = x3_grid(d, cfg.g3.open_fraction_f)
    half_widths = [g.open_half_width - c.x_c for g, c in zip(cfg.gratings, cutoffs)]

    local = _wrap(grid.x, d)
    t2 = (np.abs(local) < half_widths[1]).astype(complex)
    if not wall_is_inert(cfg.g2.wall, mol):
        inside = t2.real > 0
        k_phase = cfg.g2.thickness_b / (cfg.v_z * CONST.hbar)
        t2[inside] = np.exp(-1j * k_phase * slit_potential(local[inside], cfg.g2, mol))

    # point sources across the open G1 slit of the central period
    first = (grid.n_periods // 2) * grid.samples_per_period
    period_idx = first + np.arange(grid.samples_per_period)
    open_idx = period_idx[np.abs(local[period_idx]) < half_widths[0]]
    if open_idx.size == 0:
        raise ConfigError("first grating is closed on the oracle grid")
    stride = max(1, open_idx.size // n_source_points)
    sources = open_idx[::stride]
    if sources.size < n_source_points:
        logger.warning(f"Oracle grid resolves only {sources.size} source points (< {n_source_points})")
    weight = grid.dx * stride

    total = np.zeros(grid.n_samples)
    even = np.zeros(grid.n_samples)
    amplitude = 1.0 / math.sqrt(grid.dx)
    for start in range(0, sources.size, batch):
        chunk = sources[start:start + batch]
        psi = np.zeros((chunk.size, grid.n_samples), dtype=complex)
        psi[np.arange(chunk.size), chunk] = amplitude
        psi = free_flight(free_flight(psi, grid) * t2, grid)
        intensity = np.abs(psi) ** 2
        total += weight * intensity.sum(axis=0)
        parity = (np.arange(start, start + chunk.size) % 2) == 0
        even += 2.0 * weight * intensity[parity].sum(axis=0)

    u = np.arange(grid.samples_per_period) * grid.dx
    mask3 = (np.abs(_wrap(u, d)) < half_widths[2]).astype(float)
    signal_all = _correlate_mask(_fold(total, grid), mask3, grid.dx, d)
    signal_even = _correlate_mask(_fold(even, grid), mask3, grid.dx, d)
    change = abs(_period_visibility(signal_all) - _period_visibility(signal_even))
    converged = change <= SOURCE_CONVERGENCE
    if not converged:
        logger.warning(f"Oracle source average not converged: visibility change {change:.4g}")
    return OracleResult(_fringe(signal_all, d, x3, cfg, cutoffs), converged, int(sources.size), change)


def ray_binning_signal(cfg: InterferometerConfig, n_rays: int = 2048, n_bins: int = 512,
                       cutoffs: Optional[Sequence[CutoffResult]] = None,
                       x3: Optional[np.ndarray] = None) -> FringeResult:
    """
    Classical shadow of the three masks by straight rays, the short-wavelength limit

    Rays from x1 at G1 through x2 at G2 land at 2 x2 - x1 on G3; both are sampled over one period
    and the landing points are histogrammed.
    """
    if n_rays % n_bins:
        raise ConfigError("n_rays must be a multiple of n_bins", n_rays=n_rays, n_bins=n_bins)
    d, mol = cfg.period, cfg.molecule
    if cutoffs is None:
        cutoffs = tuple(solve_cutoff(g, mol, cfg.v_z) for g in cfg.gratings)
    cutoffs = tuple(cutoffs)
    if x3 is None:
        x3 = x3_grid(d, cfg.g3.open_fraction_f)
    w1, w2, w3 = [g.open_half_width - c.x_c for g, c in zip(cfg.gratings, cutoffs)]

    u = (np.arange(n_rays) + 0.5) * d / n_rays - d / 2.0
    x1 = u[np.abs(u) < w1]
    x2 = u[np.abs(u) < w2]
    landing = np.mod(2.0 * x2[None, :] - x1[:, None], d).ravel()
    counts, _ = np.histogram(landing, bins=n_bins, range=(0.0, d))
    bin_width = d / n_bins
    density = counts * (d / n_rays) ** 2 / bin_width / d

    centres = (np.arange(n_bins) + 0.5) * bin_width
    mask3 = (np.abs(_wrap(centres, d)) < w3).astype(float)
    # the landing density is sampled at bin centres, the mask at bin centres too, so offsets are whole bins
    samples = _correlate_mask(density, mask3, bin_width, d)
    return _fringe(samples, d, x3, cfg, cutoffs)


def compare(engine: FringeResult, oracle: FringeResult, vis_tol: float = 0.01, rms_tol: float = 0.02) -> OracleComparison:
    """Visibility difference and RMS signal difference relative to the engine dc level"""
    if not np.array_equal(engine.x3_samples, oracle.x3_samples):
        raise ConfigError("engine and oracle sampled on different x3 grids")
    rms = float(np.sqrt(np.mean((engine.S_values - oracle.S_values) ** 2))) / engine.dc_level
    return OracleComparison(engine.visibility, oracle.visibility, rms, vis_tol, rms_tol)
