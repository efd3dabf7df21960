"""Contour and area integrals: Cauchy reproduction, the Lusin split bound,
and the Cauchy-Pompeiu representation with a smooth radial cutoff."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .geometry import Disc, QuadratureContour, as_point, circle_contour
from .sequences import FunctionSequence


def cauchy_reproduce(f_values, contour: QuadratureContour, w) -> complex:
    """``(1/2 pi i) sum_i w_i f(zeta_i) / (zeta_i - w)``.

    ``w`` must sit inside the contour at least one node spacing away from it.
    """
    w = as_point(w)
    if contour.inner_distance(w) < contour.node_spacing:
        raise ValueError(f"point {w} is not strictly inside the contour")
    f_values = np.asarray(f_values)
    return complex(np.sum(contour.weights * f_values / (contour.nodes - w)) / (2j * np.pi))


@dataclass(frozen=True)
class LusinSplit:
    contour: QuadratureContour
    good_nodes: np.ndarray
    bad_nodes: np.ndarray
    eps_star: float
    tail_start: int
    measure_E: float
    measure_bad: float
    max_deviation: np.ndarray   # per node, max over the test pairs

    @property
    def degenerate(self) -> bool:
        return len(self.good_nodes) == 0


def lusin_split(seq: FunctionSequence, contour: QuadratureContour, eps_star: float, J: int,
                test_pairs) -> LusinSplit:
    """Split contour nodes into E (tail pairs within ``eps_star``) and the rest.

    Measures are arc-length weights; an empty E is returned (``degenerate``)
    rather than raised.
    """
    pairs = [tuple(p) for p in test_pairs]
    if not pairs:
        raise ValueError("need at least one test pair")
    for l, m in pairs:
        if not (J < l <= seq.j_max and J < m <= seq.j_max):
            raise ValueError(f"pair {(l, m)} must satisfy {J} < l, m <= {seq.j_max}")
    z = contour.nodes
    dev = np.zeros(len(z))
    for l, m in pairs:
        dev = np.maximum(dev, np.abs(seq.checked(l, z) - seq.checked(m, z)))
    good = dev <= eps_star
    arc = contour.arc_weights
    return LusinSplit(contour, np.flatnonzero(good), np.flatnonzero(~good), float(eps_star), J,
                      float(arc[good].sum()), float(arc[~good].sum()), dev)


def remark_bound(eps_star: float, measure_E: float, measure_bad: float, k: float, delta: float) -> float:
    """``eps* |E| / (2 pi delta) + |bad| 2k / (2 pi delta)``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    if k < 0:
        raise ValueError("k must be non-negative")
    return (eps_star * measure_E + measure_bad * 2.0 * k) / (2.0 * math.pi * delta)


@dataclass(frozen=True)
class BoundCheck:
    pair: tuple[int, int]
    measured_max: float
    bound: float
    delta: float
    eps_star: float
    measure_bad: float
    k: float

    @property
    def holds(self) -> bool:
        return self.measured_max <= self.bound

    def to_dict(self) -> dict:
        return asdict(self)


def verify_remark_bound(seq: FunctionSequence, center, radius: float, delta: float, *,
                        pairs, eps_star: float, J: int, n_nodes: int = 512,
                        k_spacing: float | None = None) -> list[BoundCheck]:
    """Measured ``max_K |f_l - f_m|`` against the bound, K the concentric disc of radius ``radius - delta``.

    E is built from all the tested pairs together; ``k`` is the largest
    sampled ``|f_j|`` (any ``j <= j_max``) on the bad nodes.
    """
    contour = circle_contour(center, radius, n_nodes)
    split = lusin_split(seq, contour, eps_star, J, pairs)
    if len(split.bad_nodes):
        bad_z = contour.nodes[split.bad_nodes]
        k = max(float(np.max(np.abs(seq.checked(j, bad_z)))) for j in range(1, seq.j_max + 1))
    else:
        k = 0.0
    bound = remark_bound(eps_star, split.measure_E, split.measure_bad, k, delta)
    K = Disc(center, radius - delta)
    pts = K.sample(k_spacing or (radius - delta) / 20)
    out = []
    for l, m in pairs:
        l, m = int(l), int(m)
        measured = float(np.max(np.abs(seq.checked(l, pts) - seq.checked(m, pts))))
        out.append(BoundCheck((l, m), measured, bound, delta, eps_star, split.measure_bad, k))
    return out


# ---------------------------------------------------------------- area integrals


def _smoothstep5(s):
    return s ** 3 * (10 - 15 * s + 6 * s * s)


def _smoothstep5_deriv(s):
    return 30 * s * s * (1 - s) ** 2


@dataclass(frozen=True)
class CutoffFunction:
    """Radial cutoff: 1 on ``|z - c| <= inner``, 0 on ``|z - c| >= outer``,
    quintic smoothstep ramp in between (C^2 at both seams)."""

    center: complex
    inner: float
    outer: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not 0 < self.inner < self.outer:
            raise ValueError("need 0 < inner < outer")

    @property
    def width(self) -> float:
        return self.outer - self.inner

    # sup of |dbar phi| is (1/2) * max(smoothstep') / width = 0.9375 / width
    profile_constant = 0.9375

    def _s(self, rho):
        return np.clip((self.outer - rho) / self.width, 0.0, 1.0)

    def phi(self, z):
        rho = np.abs(np.asarray(z, dtype=complex) - self.center)
        return _smoothstep5(self._s(rho))

    def dbar(self, z):
        """``d phi / d conj(z) = (1/2) phi'(rho) (z - c) / rho``."""
        d = np.asarray(z, dtype=complex) - self.center
        rho = np.abs(d)
        ramp = (rho > self.inner) & (rho < self.outer)
        dphi = -_smoothstep5_deriv(self._s(rho)) / self.width
        out = np.zeros(d.shape, dtype=complex)
        out[ramp] = 0.5 * dphi[ramp] * d[ramp] / rho[ramp]
        return out

    def ramp_cells(self, quad_n: int):
        """Midpoint-rule cells of the support box that fall inside the ramp annulus."""
        h = 2 * self.outer / quad_n
        t = -self.outer + h * (np.arange(quad_n) + 0.5)
        X, Y = np.meshgrid(t, t)
        zeta = self.center + (X + 1j * Y).ravel()
        rho = np.abs(zeta - self.center)
        keep = (rho > self.inner) & (rho < self.outer)
        return zeta[keep], h * h


def pompeiu_reproduce(f, cutoff: CutoffFunction, z, quad_n: int = 400) -> complex:
    """``(1/pi) sum f(zeta) dbar phi(zeta) / (z - zeta) dA`` over the ramp annulus."""
    z = as_point(z)
    if abs(z - cutoff.center) > cutoff.inner:
        raise ValueError("z must lie where the cutoff equals 1")
    zeta, area = cutoff.ramp_cells(quad_n)
    vals = np.asarray(f(zeta)) * cutoff.dbar(zeta) / (z - zeta)
    return complex(np.sum(vals) * area / np.pi)


def dominated_bound(g, cutoff: CutoffFunction, K, quad_n: int = 400) -> float:
    """``(1/pi) sum g(zeta) |dbar phi(zeta)| / dist(K, zeta) dA``.

    ``K`` is anything with a vectorized ``distance`` (CompactRegion, Disc).
    """
    zeta, area = cutoff.ramp_cells(quad_n)
    dist = np.asarray(K.distance(zeta), dtype=float)
    if np.any(dist <= 0):
        raise ValueError("K touches the ramp annulus of the cutoff")
    vals = np.asarray(g(zeta), dtype=float) * np.abs(cutoff.dbar(zeta)) / dist
    return float(np.sum(vals) * area / np.pi)
