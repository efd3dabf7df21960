"""Plane geometry shared by the analysis modules.

Points in the plane are plain Python/numpy complex numbers.  Regions are
finite unions of closed axis-aligned rectangles and axis-parallel segments;
everything that needs a distance gets it in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Membership slack for points produced by linspace arithmetic.
CONTAINS_ATOL = 1e-12


def as_point(z) -> complex:
    """Coerce ``z`` to a finite complex number."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite point {z!r}")
    return z


def _lattice_1d(lo: float, hi: float, spacing: float) -> np.ndarray:
    if hi == lo:
        return np.array([lo])
    n = int(math.ceil((hi - lo) / spacing - 1e-12)) + 1
    return np.linspace(lo, hi, max(n, 2))


@dataclass(frozen=True)
class Rect:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 <= self.x1 and self.y0 <= self.y1):
            raise ValueError(f"degenerate rectangle intervals: {self}")

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return self.x0, self.x1, self.y0, self.y1

    def distance(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        dx = np.maximum(np.maximum(self.x0 - z.real, z.real - self.x1), 0.0)
        dy = np.maximum(np.maximum(self.y0 - z.imag, z.imag - self.y1), 0.0)
        return np.hypot(dx, dy)

    def contains(self, z) -> np.ndarray:
        return self.distance(z) <= CONTAINS_ATOL

    def sample(self, spacing: float) -> np.ndarray:
        xs = _lattice_1d(self.x0, self.x1, spacing)
        ys = _lattice_1d(self.y0, self.y1, spacing)
        X, Y = np.meshgrid(xs, ys)
        return (X + 1j * Y).ravel()

    def sample_boundary(self, spacing: float) -> np.ndarray:
        xs = _lattice_1d(self.x0, self.x1, spacing)
        ys = _lattice_1d(self.y0, self.y1, spacing)
        pts = np.concatenate([
            xs + 1j * self.y0, xs + 1j * self.y1,
            self.x0 + 1j * ys, self.x1 + 1j * ys,
        ])
        return np.unique(pts)

    def to_dict(self) -> dict:
        return {"x": [self.x0, self.x1], "y": [self.y0, self.y1]}


@dataclass(frozen=True)
class Segment:
    """Closed axis-parallel segment.

    ``axis="re"`` runs along the real direction: ``{im = offset, re in extent}``;
    ``axis="im"`` runs along the imaginary direction: ``{re = offset, im in extent}``.
    """

    axis: str
    offset: float
    lo: float
    hi: float

    def __post_init__(self):
        if self.axis not in ("re", "im"):
            raise ValueError(f"axis must be 're' or 'im', got {self.axis!r}")
        if not self.lo <= self.hi:
            raise ValueError(f"segment extent has lower > upper: {self}")

    def as_rect(self) -> Rect:
        if self.axis == "re":
            return Rect(self.lo, self.hi, self.offset, self.offset)
        return Rect(self.offset, self.offset, self.lo, self.hi)

    def distance(self, z) -> np.ndarray:
        return self.as_rect().distance(z)

    def sample(self, spacing: float) -> np.ndarray:
        t = _lattice_1d(self.lo, self.hi, spacing)
        if self.axis == "re":
            return t + 1j * self.offset
        return self.offset + 1j * t

    def to_dict(self) -> dict:
        return {"axis": self.axis, "offset": self.offset, "extent": [self.lo, self.hi]}


@dataclass(frozen=True)
class CompactRegion:
    rects: tuple[Rect, ...] = ()
    segments: tuple[Segment, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rects", tuple(self.rects))
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.rects and not self.segments:
            raise ValueError("a region needs at least one rectangle or segment")

    @property
    def boxes(self) -> list[Rect]:
        return list(self.rects) + [s.as_rect() for s in self.segments]

    def distance(self, z) -> np.ndarray:
        """Euclidean distance to the region; exactly 0 wherever ``contains`` holds."""
        z = np.asarray(z, dtype=complex)
        d = np.min([b.distance(z) for b in self.boxes], axis=0)
        return np.where(d <= CONTAINS_ATOL, 0.0, d)

    def contains(self, z) -> np.ndarray:
        return self.distance(z) == 0.0

    def bounding_box(self) -> Rect:
        boxes = self.boxes
        return Rect(min(b.x0 for b in boxes), max(b.x1 for b in boxes),
                    min(b.y0 for b in boxes), max(b.y1 for b in boxes))

    def distance_to(self, other: "CompactRegion") -> float:
        """Closed-form distance between two regions (min over component boxes)."""
        best = math.inf
        for a in self.boxes:
            for b in other.boxes:
                dx = max(a.x0 - b.x1, b.x0 - a.x1, 0.0)
                dy = max(a.y0 - b.y1, b.y0 - a.y1, 0.0)
                best = min(best, math.hypot(dx, dy))
        return best

    def to_dict(self) -> dict:
        return {"rects": [r.to_dict() for r in self.rects],
                "segments": [s.to_dict() for s in self.segments]}

    @classmethod
    def from_dict(cls, data: dict) -> "CompactRegion":
        unknown = set(data) - {"rects", "segments"}
        if unknown:
            raise ValueError(f"unknown region keys: {sorted(unknown)}")
        rects = [Rect(r["x"][0], r["x"][1], r["y"][0], r["y"][1]) for r in data.get("rects", [])]
        segs = [Segment(s["axis"], s["offset"], s["extent"][0], s["extent"][1])
                for s in data.get("segments", [])]
        return cls(tuple(rects), tuple(segs))


def build_square_domain() -> CompactRegion:
    """Closed square [-1, 1]^2, the closure of the open square used by the cross example."""
    return CompactRegion(rects=(Rect(-1.0, 1.0, -1.0, 1.0),))


def sample_region(region: CompactRegion, spacing: float) -> np.ndarray:
    """Deterministic lattice samples with pitch <= ``spacing``.

    Rectangles get a full tensor lattice (corners included), segments get
    collinear points including both endpoints.
    """
    if not spacing > 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    parts = [r.sample(spacing) for r in region.rects]
    parts += [s.sample(spacing) for s in region.segments]
    return np.concatenate(parts)


def sample_boundary(region: CompactRegion, spacing: float) -> np.ndarray:
    """Rectangle perimeters plus segments.

    For holomorphic data the sup over a rectangle is attained on its
    perimeter, so this is the cheap sampling used for fitting.
    """
    if not spacing > 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    parts = [r.sample_boundary(spacing) for r in region.rects]
    parts += [s.sample(spacing) for s in region.segments]
    return np.concatenate(parts)


@dataclass(frozen=True)
class Disc:
    """Closed disc; used for compact sets K and for disc-shaped sample sets."""

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not self.radius > 0:
            raise ValueError("disc radius must be positive")

    def distance(self, z) -> np.ndarray:
        d = np.abs(np.asarray(z, dtype=complex) - self.center) - self.radius
        return np.where(d <= CONTAINS_ATOL, 0.0, d)

    def contains(self, z) -> np.ndarray:
        return self.distance(z) == 0.0

    def sample(self, spacing: float) -> np.ndarray:
        """Square lattice clipped to the disc, plus the boundary circle."""
        if not spacing > 0:
            raise ValueError(f"spacing must be positive, got {spacing}")
        r, c = self.radius, self.center
        t = _lattice_1d(-r, r, spacing)
        X, Y = np.meshgrid(t, t)
        pts = (X + 1j * Y).ravel()
        pts = pts[np.abs(pts) <= r] + c
        n = max(16, int(math.ceil(2 * math.pi * r / spacing)))
        ring = c + r * np.exp(2j * np.pi * np.arange(n) / n)
        return np.concatenate([pts, ring])


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 nodes per direction")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid bounds must be strictly ordered")

    @classmethod
    def square(cls, half_width: float, n: int, center: complex = 0j) -> "Grid":
        c = complex(center)
        return cls(c.real - half_width, c.real + half_width,
                   c.imag - half_width, c.imag + half_width, n, n)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / (self.ny - 1)

    @property
    def nodes(self) -> np.ndarray:
        """Row-major node array of shape (ny, nx); row index runs along y."""
        X, Y = np.meshgrid(self.xs, self.ys)
        return X + 1j * Y

    @property
    def cell_centers(self) -> np.ndarray:
        xc = 0.5 * (self.xs[:-1] + self.xs[1:])
        yc = 0.5 * (self.ys[:-1] + self.ys[1:])
        X, Y = np.meshgrid(xc, yc)
        return X + 1j * Y

    @property
    def cell_shape(self) -> tuple[int, int]:
        return self.ny - 1, self.nx - 1

    def refined(self, factor: int) -> "Grid":
        """Same bounds, every cell split into ``factor`` x ``factor`` sub-cells."""
        return Grid(self.x_min, self.x_max, self.y_min, self.y_max,
                    (self.nx - 1) * factor + 1, (self.ny - 1) * factor + 1)


@dataclass(frozen=True)
class QuadratureContour:
    """Closed, positively oriented contour with weights for integrals of ``g(z) dz``.

    ``sum(weights * g(nodes))`` approximates the contour integral of ``g``.
    Closure and winding number about ``center`` are checked on construction.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    center: complex
    radius: float | None = None
    half_widths: tuple[float, float] | None = None
    winding_tol: float = 1e-10

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=complex)
        weights = np.asarray(self.weights, dtype=complex)
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.shape != weights.shape:
            raise ValueError("nodes and weights must have the same length")
        if abs(weights.sum()) > 1e-12:
            raise ValueError(f"contour not closed: |sum w| = {abs(weights.sum()):.3e}")
        wind = self.winding_number(self.center)
        if abs(wind - 1) > self.winding_tol:
            raise ValueError(f"winding number about center is {wind}, not 1")

    def winding_number(self, c: complex) -> complex:
        return np.sum(self.weights / (self.nodes - c)) / (2j * np.pi)

    @property
    def arc_weights(self) -> np.ndarray:
        """Arc-length element carried by each node (|dz| weights)."""
        return np.abs(self.weights)

    @property
    def length(self) -> float:
        return float(self.arc_weights.sum())

    @property
    def node_spacing(self) -> float:
        return float(self.arc_weights.max())

    def inner_distance(self, w: complex) -> float:
        """Distance from ``w`` to the contour, negative when ``w`` is outside."""
        w = complex(w)
        if self.kind == "circle":
            return self.radius - abs(w - self.center)
        hx, hy = self.half_widths
        d = w - self.center
        return min(hx - abs(d.real), hy - abs(d.imag))

    def integrate(self, values) -> complex:
        return complex(np.sum(self.weights * np.asarray(values)))


def circle_contour(center, radius: float, n: int) -> QuadratureContour:
    """Trapezoid rule on the circle ``|z - center| = radius`` with ``n`` nodes."""
    if n < 16:
        raise ValueError(f"need at least 16 nodes, got {n}")
    if not radius > 0:
        raise ValueError("radius must be positive")
    c = as_point(center)
    e = np.exp(2j * np.pi * np.arange(n) / n)
    nodes = c + radius * e
    weights = (2j * np.pi / n) * (radius * e)
    return QuadratureContour(nodes, weights, "circle", c, radius=float(radius))


def rectangle_contour(center, half_width: float, half_height: float,
                      n_per_edge: int = 1024) -> QuadratureContour:
    """Composite trapezoid on each edge of a rectangle, counter-clockwise.

    Corner nodes appear once per adjacent edge, each with half weight.
    Corners cost the trapezoid rule its spectral accuracy, so the winding
    check is relaxed to 1e-6.
    """
    if n_per_edge < 16:
        raise ValueError(f"need at least 16 nodes per edge, got {n_per_edge}")
    c = as_point(center)
    hx, hy = float(half_width), float(half_height)
    corners = [c + complex(hx, -hy), c + complex(hx, hy),
               c + complex(-hx, hy), c + complex(-hx, -hy)]
    nodes, weights = [], []
    t = np.linspace(0.0, 1.0, n_per_edge + 1)
    tw = np.full(n_per_edge + 1, 1.0 / n_per_edge)
    tw[[0, -1]] *= 0.5
    for a, b in zip(corners, corners[1:] + corners[:1]):
        nodes.append(a + (b - a) * t)
        weights.append((b - a) * tw)
    return QuadratureContour(np.concatenate(nodes), np.concatenate(weights), "rectangle", c,
                             half_widths=(hx, hy), winding_tol=1e-6)

