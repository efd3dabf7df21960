"""Osgood's theorem at grid resolution.

Baire level sets of ``max_j |f_j|``, the dense-ball search of the proof,
a holomorphy classifier built on tail deviations and Cauchy reproduction,
Montel-style diagonal subsequences, and the bounded/Schlicht checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .geometry import Disc, Grid, sample_region
from .maps import EXCEPTIONAL, HOLOMORPHIC, CellMap
from .sequences import EvaluationError, FunctionSequence

__all__ = [
    "FunctionSequence", "BaireDecomposition", "bounded_index_map", "DenseBall",
    "DenseBallNotFound", "find_dense_ball", "uniform_cauchy_deviation", "HolomorphyMap",
    "classify_holomorphy", "axis_band_mask", "UniformBoundReport", "check_uniform_bound",
    "MontelResult", "montel_diagonal", "schlicht_growth_check",
]

DEFAULT_K_CAP = 10 ** 6


@dataclass(frozen=True)
class BaireDecomposition:
    grid: Grid
    sup_values: np.ndarray   # max_j |f_j| per node, shape (ny, nx)
    k_of: np.ndarray         # ceil(sup); -1 where divergent
    divergent: np.ndarray
    k_cap: int

    def level_set(self, k: int) -> np.ndarray:
        return (~self.divergent) & (self.k_of <= k)

    def check_invariants(self) -> bool:
        levels = sorted(set(self.k_of[~self.divergent].tolist()))
        prev = np.zeros_like(self.divergent)
        for k in levels:
            cur = self.level_set(k)
            if np.any(prev & ~cur):
                return False
            prev = cur
        covered = self.level_set(self.k_cap) | self.divergent
        return bool(covered.all())


def bounded_index_map(seq: FunctionSequence, grid: Grid, k_cap: int = DEFAULT_K_CAP) -> BaireDecomposition:
    """Per-node ``k(z) = ceil(max_{j <= j_max} |f_j(z)|)``; nodes above ``k_cap`` are divergent."""
    nodes = grid.nodes
    sup = np.zeros(nodes.shape)
    for j in range(1, seq.j_max + 1):
        try:
            sup = np.maximum(sup, np.abs(seq.checked(j, nodes)))
        except EvaluationError as exc:
            raise EvaluationError(f"bounded_index_map: {exc}", j=exc.j, location=exc.location) from exc
    divergent = sup > k_cap
    k = np.ceil(sup - 1e-12).astype(np.int64)
    k[divergent] = -1
    decomp = BaireDecomposition(grid, sup, k, divergent, k_cap)
    assert decomp.check_invariants()
    return decomp


@dataclass(frozen=True)
class DenseBall:
    center: complex
    radius: float
    k: int
    node_count: int


class DenseBallNotFound(LookupError):
    pass


def find_dense_ball(decomp: BaireDecomposition) -> DenseBall:
    """Grid-aligned disc whose nodes all lie in ``S_k`` for the smallest possible ``k``.

    The disc must contain a 3x3 block of nodes and stay inside the grid.
    Among admissible discs at that ``k`` the largest wins, ties going to the
    lexicographically smallest (row, column) center.
    """
    g = decomp.grid
    dx, dy = g.dx, g.dy
    iy, ix = np.indices(g.nodes.shape)
    to_edge = np.minimum.reduce([ix * dx, (g.nx - 1 - ix) * dx, iy * dy, (g.ny - 1 - iy) * dy])
    r_min = math.hypot(dx, dy)
    for k in sorted(set(decomp.k_of[~decomp.divergent].tolist())):
        mask = decomp.level_set(k)
        if mask.all():
            to_bad = np.full(mask.shape, np.inf)
        else:
            to_bad = ndimage.distance_transform_edt(mask, sampling=(dy, dx))
        # nodes strictly closer than the nearest bad node are good
        radius = np.minimum(to_edge, to_bad * (1 - 1e-9))
        radius = np.where(mask, radius, -np.inf)
        if radius.max() < r_min * (1 - 1e-9):
            continue
        best = radius.max()
        cand = np.argwhere(radius >= best * (1 - 1e-12))
        r0, c0 = (int(v) for v in min(map(tuple, cand)))
        center = g.nodes[r0, c0]
        count = int(np.sum(np.abs(g.nodes - center) <= best))
        return DenseBall(complex(center), float(best), int(k), count)
    raise DenseBallNotFound("no grid-aligned disc lies in any level set; sampling looks pathological")


def uniform_cauchy_deviation(seq: FunctionSequence, region, l: int, m: int, spacing: float) -> float:
    """``max |f_l - f_m|`` over the samples of ``region`` (a CompactRegion or Disc)."""
    pts = region.sample(spacing) if isinstance(region, Disc) else sample_region(region, spacing)
    return float(np.max(np.abs(seq.checked(l, pts) - seq.checked(m, pts))))


class HolomorphyMap(CellMap):
    positive_label = "holomorphic"


def _tail_deviation(seq, grid: Grid, tail_pairs, sub: int) -> np.ndarray:
    fine = grid.refined(sub)
    pts = fine.nodes
    ny, nx = grid.cell_shape
    dev = np.zeros((ny, nx))
    cache: dict[int, np.ndarray] = {}

    def vals(j):
        if j not in cache:
            cache[j] = seq.checked(j, pts)
        return cache[j]

    for l, m in tail_pairs:
        d = np.abs(vals(l) - vals(m))
        # max over the (sub+1)^2 fine nodes of each coarse cell
        win = np.lib.stride_tricks.sliding_window_view(d, (sub + 1, sub + 1))[::sub, ::sub]
        dev = np.maximum(dev, win.max(axis=(-2, -1)))
    return dev


def _cell_circle_residual(f_vals_fn, grid: Grid, n_nodes: int, min_radius: float,
                          offsets=(0,)):
    """Max over probes ``w = c + offset * r`` of ``|f(w) - (1/2 pi i) sum w_i f(zeta_i)/(zeta_i - w)|``."""
    centers = grid.cell_centers
    r = 0.5 * min(grid.dx, grid.dy)
    if r < min_radius:
        return np.full(centers.shape, np.nan)
    e = np.exp(2j * np.pi * np.arange(n_nodes) / n_nodes)
    ring_vals = f_vals_fn(centers[..., None] + r * e)
    out = np.zeros(centers.shape)
    for off in offsets:
        w = centers + off * r
        # weights (2 pi i/n)(zeta_i - c), so the quadrature is a weighted node mean
        kernel = e / (e - off)
        reproduced = np.mean(ring_vals * kernel, axis=-1)
        out = np.maximum(out, np.abs(f_vals_fn(w) - reproduced))
    return out


# the center probe alone only tests the mean-value property, which conj(z)^2 also has
CAUCHY_PROBES = (0, 0.5, 0.5j, -0.5, -0.5j)


def classify_holomorphy(seq: FunctionSequence, grid: Grid, tail_pairs, accept_tol: float = 1e-3,
                        reject_tol: float = 1e-1, *, sub: int = 4, contour_nodes: int = 64,
                        min_radius: float = 1e-6) -> HolomorphyMap:
    """Per-cell verdict from tail deviation and Cauchy reproduction of ``f_{j_max}``.

    Reproduction is checked at the cell center and at four points half way
    to the inscribed circle.

    Cells are the rectangles between adjacent grid nodes.  A cell is
    holomorphic when both diagnostics are below ``accept_tol``, exceptional
    when either exceeds ``reject_tol``, undetermined otherwise (including
    cells too small for a contour).
    """
    if not accept_tol < reject_tol:
        raise ValueError("accept_tol must be below reject_tol")
    tail_pairs = [tuple(p) for p in tail_pairs]
    for l, m in tail_pairs:
        if not (1 <= l <= seq.j_max and 1 <= m <= seq.j_max):
            raise ValueError(f"tail pair {(l, m)} outside 1..{seq.j_max}")
    dev = _tail_deviation(seq, grid, tail_pairs, sub)
    resid = _cell_circle_residual(lambda z: seq.checked(seq.j_max, z), grid, contour_nodes,
                                  min_radius, CAUCHY_PROBES)
    return HolomorphyMap.from_diagnostics(grid, dev, resid, accept_tol, reject_tol,
                                          ("tail_deviation", "cauchy_residual"))


def axis_band_mask(grid: Grid, dilation: int = 1) -> np.ndarray:
    """Cells whose closure meets the ``dilation``-cell neighborhood of the two axes."""
    xs, ys = grid.xs, grid.ys
    bx, by = dilation * grid.dx, dilation * grid.dy
    x_lo, x_hi = xs[:-1], xs[1:]
    y_lo, y_hi = ys[:-1], ys[1:]
    near_x = np.maximum(np.maximum(x_lo, -x_hi), 0.0) <= bx * (1 + 1e-12)
    near_y = np.maximum(np.maximum(y_lo, -y_hi), 0.0) <= by * (1 + 1e-12)
    return near_y[:, None] | near_x[None, :]


@dataclass(frozen=True)
class UniformBoundReport:
    M: float
    hypothesis_holds: bool
    measured_sup: float
    sup_by_index: tuple[float, ...]
    exceptional_interior_cells: int | None
    holomorphic_fraction: float | None

    @property
    def consistent(self) -> bool:
        """Uniform boundedness must rule out exceptional cells."""
        return (not self.hypothesis_holds) or self.exceptional_interior_cells == 0


def check_uniform_bound(seq: FunctionSequence, region, M: float, *, spacing: float = 0.02,
                        grid_cells: int = 32, tail_pairs=None, **classify_kw) -> UniformBoundReport:
    """Test ``|f_j| <= M`` on samples; when it holds, classify the region's interior cells.

    A violated hypothesis is reported, not raised.
    """
    if not M > 0:
        raise ValueError("M must be positive")
    pts = region.sample(spacing) if isinstance(region, Disc) else sample_region(region, spacing)
    sups = tuple(float(np.max(np.abs(seq.checked(j, pts)))) for j in range(1, seq.j_max + 1))
    measured = max(sups)
    holds = measured <= M
    if not holds:
        return UniformBoundReport(M, False, measured, sups, None, None)
    if isinstance(region, Disc):
        c, r = region.center, region.radius
        bb = (c.real - r, c.real + r, c.imag - r, c.imag + r)
    else:
        box = region.bounding_box()
        bb = (box.x0, box.x1, box.y0, box.y1)
    grid = Grid(*bb, grid_cells + 1, grid_cells + 1)
    if tail_pairs is None:
        tail_pairs = [(seq.j_max - 1, seq.j_max)] if seq.j_max > 1 else [(1, 1)]
    hmap = classify_holomorphy(seq, grid, tail_pairs, **classify_kw)
    corners = [grid.nodes[:-1, :-1], grid.nodes[:-1, 1:], grid.nodes[1:, :-1], grid.nodes[1:, 1:]]
    interior = np.logical_and.reduce([region.contains(cn) for cn in corners])
    exc = int(np.sum((hmap.verdict == EXCEPTIONAL) & interior))
    frac = float(np.mean(hmap.verdict[interior] == HOLOMORPHIC)) if interior.any() else float("nan")
    return UniformBoundReport(M, True, measured, sups, exc, frac)


@dataclass(frozen=True)
class MontelResult:
    indices: tuple[int, ...]
    tail_diameters: tuple[float, ...]
    truncated: bool


def montel_diagonal(seq: FunctionSequence, nested_samples, tol_schedule) -> MontelResult:
    """Greedy diagonal subsequence.

    Level ``r`` picks the smallest index ``J`` above the previous pick such
    that every pair in the tail ``J..j_max`` (at least two indices) is within
    ``tol_schedule[r]`` on ``nested_samples[r]``.
    """
    tols = [float(t) for t in tol_schedule]
    if any(t <= 0 for t in tols) or any(b >= a for a, b in zip(tols, tols[1:])):
        raise ValueError("tol_schedule must be positive and strictly decreasing")
    if len(nested_samples) != len(tols):
        raise ValueError("one sample set per tolerance level")
    n = seq.j_max
    picks: list[int] = []
    diams: list[float] = []
    for pts, tol in zip(nested_samples, tols):
        pts = np.asarray(pts, dtype=complex).ravel()
        vals = seq.stack(range(1, n + 1), pts)
        # tail_diam[J-1] = max over l, m >= J of max_z |f_l - f_m|
        tail_diam = np.zeros(n)
        cur = 0.0
        for J in range(n, 0, -1):
            row = np.max(np.abs(vals[J - 1:] - vals[J - 1]), axis=1).max() if J < n else 0.0
            cur = max(cur, row)
            tail_diam[J - 1] = cur
        start = picks[-1] + 1 if picks else 1
        found = next((J for J in range(start, n) if tail_diam[J - 1] <= tol), None)
        if found is None:
            return MontelResult(tuple(picks), tuple(diams), True)
        picks.append(found)
        diams.append(float(tail_diam[found - 1]))
    return MontelResult(tuple(picks), tuple(diams), False)


def schlicht_growth_check(f, radii, angles_per_radius: int) -> float:
    """``max |f(z)| - |z| (1 - |z|)^-2`` over ``z = r e^{2 pi i k/n}``; <= 0 means the bound holds."""
    radii = np.asarray(radii, dtype=float)
    if np.any((radii <= 0) | (radii >= 1)):
        raise ValueError("radii must lie in (0, 1)")
    theta = 2 * np.pi * np.arange(angles_per_radius) / angles_per_radius
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    bound = radii[:, None] / (1 - radii[:, None]) ** 2
    return float(np.max(np.abs(f(z)) - bound))
