# -*- coding: utf-8 -*-
"""
@author:XuMing(xuming624@qq.com)
@description: Composite Gauss-Legendre quadrature on explicit panel breakpoints, with node doubling
"""
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from chiraltalbot.errors import QuadratureError

GL_ORDER = 16
# complex entries evaluated per integrand chunk
_CHUNK_ENTRIES = 1 << 22


@lru_cache(maxsize=8)
def _reference_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    return nodes, weights


def panel_nodes(breaks: np.ndarray, order: int = GL_ORDER) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gauss-Legendre nodes and weights on every panel [breaks[i], breaks[i+1]]

    Args:
        breaks: strictly increasing panel edges
        order: points per panel

    Returns:
        (nodes, weights), flat arrays
    """
    breaks = np.asarray(breaks, dtype=float)
    ref_x, ref_w = _reference_rule(order)
    mid = 0.5 * (breaks[1:] + breaks[:-1])
    half = 0.5 * (breaks[1:] - breaks[:-1])
    nodes = (mid[:, None] + half[:, None] * ref_x[None, :]).ravel()
    weights = (half[:, None] * ref_w[None, :]).ravel()
    return nodes, weights


def refine(breaks: np.ndarray) -> np.ndarray:
    """Split every panel in two"""
    breaks = np.asarray(breaks, dtype=float)
    mids = 0.5 * (breaks[1:] + breaks[:-1])
    out = np.empty(breaks.size + mids.size)
    out[0::2] = breaks
    out[1::2] = mids
    return out


def graded_breaks(p: float, q: float, n_panels: int, levels: int = 40, ratio: float = 0.5) -> np.ndarray:
    """Uniform panels on [p, q] plus geometric grading towards both ends"""
    if not q > p:
        raise QuadratureError("empty integration interval", p=p, q=q)
    uniform = np.linspace(p, q, max(int(n_panels), 1) + 1)
    h = (q - p) / max(int(n_panels), 1)
    steps = h * ratio ** np.arange(1, levels + 1)
    extra = np.concatenate([p + steps, q - steps])
    return np.unique(np.concatenate([uniform, extra]))


def integrate_panels(integrand: Callable[[np.ndarray], np.ndarray], breaks: np.ndarray,
                     order: int = GL_ORDER) -> np.ndarray:
    """
    Composite rule for an integrand returning shape (..., n) for n nodes

    The nodes are fed in chunks, so matrix-valued integrands stay bounded in memory.
    """
    nodes, weights = panel_nodes(breaks, order)
    first = np.asarray(integrand(nodes[:1]))
    rows = max(int(np.prod(first.shape[:-1])), 1)
    chunk = max(_CHUNK_ENTRIES // rows, order)
    total = np.zeros(first.shape[:-1], dtype=complex)
    for start in range(0, nodes.size, chunk):
        values = np.asarray(integrand(nodes[start:start + chunk]))
        total = total + values @ weights[start:start + chunk]
    return total


def integrate_doubling(integrand: Callable[[np.ndarray], np.ndarray], breaks: np.ndarray, scale: float,
                       rtol: float = 1e-8, max_doublings: int = 6, label: str = "") -> np.ndarray:
    """
    Integrate on breaks, then on successively split panels, until two estimates agree

    Args:
        integrand: vectorised integrand, see integrate_panels
        breaks: initial panel edges
        scale: magnitude the tolerance is relative to, usually the interval length
        rtol: relative tolerance
        max_doublings: panel splits allowed before giving up
        label: context for the error message

    Returns:
        the finer of the two agreeing estimates
    """
    previous = integrate_panels(integrand, breaks)
    for _ in range(max_doublings):
        breaks = refine(breaks)
        current = integrate_panels(integrand, breaks)
        change = float(np.max(np.abs(current - previous))) if np.size(current) else 0.0
        if change <= rtol * scale:
            return current
        previous = current
    raise QuadratureError(f"quadrature did not converge {label}".strip(), panels=breaks.size - 1, change=change)
