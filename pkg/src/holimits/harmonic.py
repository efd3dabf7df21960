"""Harmonic counterpart of the holomorphy tools: mean values, Poisson extension,
and harmonicity maps for real-valued sequences."""

from __future__ import annotations

import numpy as np

from .geometry import Grid, as_point
from .maps import CellMap
from .osgood import _cell_circle_residual, _tail_deviation
from .sequences import FunctionSequence


def mean_value_residual(u, center, r: float, n: int = 64) -> float:
    """``|u(c) - (1/n) sum u(c + r e^{2 pi i k/n})|``."""
    if not r > 0:
        raise ValueError("radius must be positive")
    if n < 32:
        raise ValueError("need at least 32 circle nodes")
    c = as_point(center)
    ring = c + r * np.exp(2j * np.pi * np.arange(n) / n)
    at_c = np.real(np.asarray(u(np.array([c])))).ravel()[0]
    return float(abs(at_c - np.mean(np.real(u(ring)))))


def circle_nodes(center, R: float, n: int) -> np.ndarray:
    return as_point(center) + R * np.exp(2j * np.pi * np.arange(n) / n)


def poisson_extend(boundary, center, R: float, w) -> float:
    """Poisson integral of values given at ``n`` equispaced nodes on the circle."""
    boundary = np.asarray(boundary, dtype=float)
    c, w = as_point(center), as_point(w)
    if not R > 0:
        raise ValueError("radius must be positive")
    d = w - c
    rho = abs(d)
    if rho >= R:
        raise ValueError(f"point {w} is not inside the circle")
    n = boundary.size
    theta = 2 * np.pi * np.arange(n) / n
    kernel = (R * R - rho * rho) / (R * R - 2 * R * rho * np.cos(theta - np.angle(d)) + rho * rho)
    return float(np.mean(boundary * kernel))


class HarmonicityMap(CellMap):
    positive_label = "harmonic"


def classify_harmonicity(seq: FunctionSequence, grid: Grid, tail_pairs, accept_tol: float = 1e-3,
                         reject_tol: float = 1e-1, *, sub: int = 4, contour_nodes: int = 64,
                         min_radius: float = 1e-6) -> HarmonicityMap:
    """Like the holomorphy classifier with the mean-value residual in place of Cauchy reproduction."""
    if not accept_tol < reject_tol:
        raise ValueError("accept_tol must be below reject_tol")
    tail_pairs = [tuple(p) for p in tail_pairs]
    for l, m in tail_pairs:
        if not (1 <= l <= seq.j_max and 1 <= m <= seq.j_max):
            raise ValueError(f"tail pair {(l, m)} outside 1..{seq.j_max}")
    real = lambda j, z: np.real(seq.checked(j, z))
    dev = _tail_deviation(FunctionSequence(real, seq.j_max), grid, tail_pairs, sub)
    resid = _cell_circle_residual(lambda z: real(seq.j_max, z), grid, contour_nodes, min_radius)
    return HarmonicityMap.from_diagnostics(grid, dev, resid, accept_tol, reject_tol,
                                           ("tail_deviation", "mean_value_residual"))


def poisson_sequence(boundary_fn, center, R: float, j_max: int, n: int = 256) -> FunctionSequence:
    """``u_j`` = Poisson extension of ``boundary_fn(j, theta)`` sampled at ``n`` nodes."""
    c = as_point(center)
    theta = 2 * np.pi * np.arange(n) / n

    def ev(j, z):
        b = np.asarray(boundary_fn(j, theta), dtype=float)
        d = np.asarray(z, dtype=complex) - c
        rho = np.abs(d)[..., None]
        if np.any(rho >= R):
            raise ValueError("evaluation point outside the Poisson disc")
        kernel = (R * R - rho ** 2) / (R * R - 2 * R * rho * np.cos(theta - np.angle(d)[..., None])
                                       + rho ** 2)
        return np.mean(b * kernel, axis=-1)

    return FunctionSequence(ev, j_max, "Poisson extensions")
