"""Two complex variables: line restrictions, polydisc Cauchy integrals,
separate versus joint holomorphy, and convergence along analytic discs.

Domains are products of two discs or two rectangles, so a complex line
meets them in an intersection of at most two discs or two convex polygons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import Disc, Grid, Rect
from .osgood import HolomorphyMap, classify_holomorphy
from .sequences import EvaluationError, FunctionSequence


@dataclass(frozen=True)
class C2Point:
    z1: complex
    z2: complex

    def __post_init__(self):
        object.__setattr__(self, "z1", complex(self.z1))
        object.__setattr__(self, "z2", complex(self.z2))
        if not all(math.isfinite(v) for v in (self.z1.real, self.z1.imag, self.z2.real, self.z2.imag)):
            raise ValueError("C2Point components must be finite")

    @classmethod
    def of(cls, p) -> "C2Point":
        return p if isinstance(p, C2Point) else cls(*p)

    @property
    def norm(self) -> float:
        return math.hypot(abs(self.z1), abs(self.z2))


@dataclass(frozen=True)
class ProductDomain:
    """``D1 x D2`` with both factors discs or both rectangles."""

    first: Disc | Rect
    second: Disc | Rect

    def __post_init__(self):
        if type(self.first) is not type(self.second) or not isinstance(self.first, (Disc, Rect)):
            raise ValueError("factors must be two discs or two rectangles")

    @classmethod
    def polydisc(cls, center=(0, 0), radii=(1.0, 1.0)) -> "ProductDomain":
        c = C2Point.of(center)
        return cls(Disc(c.z1, radii[0]), Disc(c.z2, radii[1]))

    @property
    def factors(self):
        return (self.first, self.second)

    def contains(self, z1, z2) -> np.ndarray:
        return self.first.contains(z1) & self.second.contains(z2)


@dataclass(frozen=True)
class TwoVarSequence:
    """``j -> f_j(z1, z2)`` on a product domain."""

    evaluator: Callable[[int, np.ndarray, np.ndarray], np.ndarray]
    j_max: int
    domain: ProductDomain
    description: str = ""

    def __call__(self, j: int, z1, z2):
        if not 1 <= j <= self.j_max:
            raise IndexError(f"index {j} outside 1..{self.j_max}")
        z1, z2 = np.broadcast_arrays(np.asarray(z1, dtype=complex), np.asarray(z2, dtype=complex))
        return np.broadcast_to(np.asarray(self.evaluator(j, z1, z2)), z1.shape).copy()

    def checked(self, j: int, z1, z2) -> np.ndarray:
        try:
            vals = self(j, z1, z2)
        except Exception as exc:
            raise EvaluationError(f"evaluator failed for j={j}: {exc}", j=j) from exc
        if not np.all(np.isfinite(vals)):
            raise EvaluationError(f"non-finite value for j={j}", j=j)
        return vals


def product_geometric(j_max: int = 40, radius: float = 0.9) -> TwoVarSequence:
    """``f_j = sum_{k<=j} (z1 z2)^k`` on the polydisc of the given radius."""
    def ev(j, z1, z2):
        w = z1 * z2
        acc = np.zeros_like(w)
        for _ in range(j + 1):
            acc = acc * w + 1
        return acc

    return TwoVarSequence(ev, j_max, ProductDomain.polydisc(radii=(radius, radius)),
                          "product geometric partial sums")


def constant2(c: complex, j_max: int = 10, radius: float = 1.0) -> TwoVarSequence:
    return TwoVarSequence(lambda j, z1, z2: np.full(np.shape(z1), c), j_max,
                          ProductDomain.polydisc(radii=(radius, radius)), f"constant {c}")


def lift(seq: FunctionSequence, domain: ProductDomain, variable: int = 1) -> TwoVarSequence:
    """``g_j(z1, z2) = f_j(z_variable)``."""
    if variable not in (1, 2):
        raise ValueError("variable must be 1 or 2")
    pick = (lambda z1, z2: z1) if variable == 1 else (lambda z1, z2: z2)
    return TwoVarSequence(lambda j, z1, z2: seq(j, pick(z1, z2)), seq.j_max, domain,
                          f"lift of {seq.description}")


# ---------------------------------------------------------------- complex lines


@dataclass(frozen=True)
class ComplexLine:
    """``t -> a + t b`` with ``|b| = 1``."""

    base: C2Point
    direction: C2Point

    def __post_init__(self):
        a, b = C2Point.of(self.base), C2Point.of(self.direction)
        n = b.norm
        if n == 0:
            raise ValueError("direction must be nonzero")
        object.__setattr__(self, "base", a)
        object.__setattr__(self, "direction", C2Point(b.z1 / n, b.z2 / n))

    def point(self, t):
        t = np.asarray(t, dtype=complex)
        return self.base.z1 + t * self.direction.z1, self.base.z2 + t * self.direction.z2


def _clip(poly: np.ndarray, clipper: np.ndarray) -> np.ndarray:
    """Sutherland-Hodgman: convex ``poly`` clipped by counter-clockwise convex ``clipper``."""
    out = list(poly)
    for k in range(len(clipper)):
        p, q = clipper[k], clipper[(k + 1) % len(clipper)]
        side = lambda z: ((q - p).conjugate() * (z - p)).imag   # >= 0 on the inner side
        src, out = out, []
        for i in range(len(src)):
            cur, prev = src[i], src[i - 1]
            sc, sp = side(cur), side(prev)
            if sc >= 0:
                if sp < 0:
                    out.append(prev + (cur - prev) * sp / (sp - sc))
                out.append(cur)
            elif sp >= 0:
                out.append(prev + (cur - prev) * sp / (sp - sc))
        if not out:
            break
    return np.array(out, dtype=complex)


@dataclass(frozen=True)
class LineDomain:
    """Preimage of a product domain in the line parameter: discs or one convex polygon."""

    discs: tuple[Disc, ...] = ()
    polygon: np.ndarray | None = None   # counter-clockwise vertices
    unbounded: bool = False

    def contains(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=complex)
        ok = np.ones(t.shape, dtype=bool)
        for d in self.discs:
            ok &= d.contains(t)
        if self.polygon is not None:
            P = self.polygon
            for k in range(len(P)):
                p, q = P[k], P[(k + 1) % len(P)]
                ok &= ((q - p).conjugate() * (t - p)).imag >= -1e-12
        return ok

    def interior_point(self) -> complex:
        if self.polygon is not None:
            return complex(np.mean(self.polygon))
        if len(self.discs) == 1:
            return self.discs[0].center
        d1, d2 = self.discs
        gap = d2.center - d1.center
        dist = abs(gap)
        if dist == 0:
            return d1.center
        lo, hi = max(0.0, dist - d2.radius), min(dist, d1.radius)
        return d1.center + gap / dist * 0.5 * (lo + hi)

    def inscribed_square(self) -> tuple[complex, float]:
        """A square (center, half-width) inside the domain, found by halving."""
        if self.unbounded:
            raise ValueError("line lies entirely inside the domain; pass an explicit grid")
        c = self.interior_point()
        h = max([d.radius for d in self.discs] + ([float(np.max(np.abs(self.polygon - c)))]
                                                  if self.polygon is not None else []))
        corners = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j])
        for _ in range(60):
            if np.all(self.contains(c + h * corners)):
                return c, h
            h /= 2
        raise ValueError("line meets the domain in a set with empty interior")


def line_preimage(domain: ProductDomain, line: ComplexLine) -> LineDomain:
    """Closed-form ``{t : a + t b in D1 x D2}``; raises ValueError when empty."""
    a = (line.base.z1, line.base.z2)
    b = (line.direction.z1, line.direction.z2)
    discs, polys = [], []
    for factor, ak, bk in zip(domain.factors, a, b):
        if bk == 0:
            if not factor.contains(ak):
                raise ValueError("line misses the domain")
            continue
        if isinstance(factor, Disc):
            discs.append(Disc((factor.center - ak) / bk, factor.radius / abs(bk)))
        else:
            corners = np.array([complex(factor.x0, factor.y0), complex(factor.x1, factor.y0),
                                complex(factor.x1, factor.y1), complex(factor.x0, factor.y1)])
            polys.append((corners - ak) / bk)   # similarity keeps counter-clockwise order
    if len(discs) == 2:
        d1, d2 = discs
        if abs(d1.center - d2.center) > d1.radius + d2.radius:
            raise ValueError("line misses the domain")
    poly = None
    if polys:
        poly = polys[0] if len(polys) == 1 else _clip(polys[0], polys[1])
        if len(poly) == 0:
            raise ValueError("line misses the domain")
    return LineDomain(tuple(discs), poly, unbounded=not discs and not polys)


@dataclass(frozen=True)
class LineSequence(FunctionSequence):
    line: ComplexLine | None = None
    line_domain: LineDomain | None = None


def restrict_to_line(seq2: TwoVarSequence, line: ComplexLine) -> LineSequence:
    """One-variable sequence ``(j, t) -> f_j(a + t b)`` with its parameter domain."""
    dom = line_preimage(seq2.domain, line)

    def ev(j, t):
        z1, z2 = line.point(t)
        return seq2(j, z1, z2)

    return LineSequence(ev, seq2.j_max, f"{seq2.description} on a line", line, dom)


def analyze_line(seq2: TwoVarSequence, line: ComplexLine, tail_pairs, *, grid: Grid | None = None,
                 cells: int = 32, **classify_kw) -> HolomorphyMap:
    """Holomorphy map of the line restriction on a square inside its parameter domain."""
    restricted = restrict_to_line(seq2, line)
    if grid is None:
        c, h = restricted.line_domain.inscribed_square()
        grid = Grid.square(h, cells + 1, c)
    return classify_holomorphy(restricted, grid, tail_pairs, **classify_kw)


# ---------------------------------------------------------------- polydisc Cauchy integrals


def _circle(c: complex, r: float, n: int):
    e = np.exp(2j * np.pi * np.arange(n) / n)
    return c + r * e, r * e   # nodes, zeta - c


def torus_reproduce(f, center, radii, n_nodes: int, w) -> complex:
    """Iterated Cauchy integral over the distinguished boundary of the polydisc."""
    c, w = C2Point.of(center), C2Point.of(w)
    r1, r2 = radii
    if not (abs(w.z1 - c.z1) < r1 and abs(w.z2 - c.z2) < r2):
        raise ValueError(f"{w} is not inside the polydisc")
    if n_nodes < 16:
        raise ValueError("need at least 16 nodes per circle")
    z1, d1 = _circle(c.z1, r1, n_nodes)
    z2, d2 = _circle(c.z2, r2, n_nodes)
    k1 = d1 / (z1 - w.z1)
    k2 = d2 / (z2 - w.z2)
    vals = np.asarray(f(z1[:, None], z2[None, :]), dtype=complex)
    return complex(k1 @ vals @ k2) / n_nodes ** 2


@dataclass(frozen=True)
class HartogsReport:
    per_variable_max: tuple[float, float]
    joint_max: float
    separate_tol: float
    joint_tol: float

    @property
    def separately_holomorphic(self) -> bool:
        return max(self.per_variable_max) < self.separate_tol

    @property
    def jointly_holomorphic(self) -> bool:
        return self.joint_max < self.joint_tol

    @property
    def implication_holds(self) -> bool:
        return (not self.separately_holomorphic) or self.jointly_holomorphic

    def to_dict(self) -> dict:
        return {"per_variable_max": list(self.per_variable_max), "joint_max": self.joint_max,
                "separately_holomorphic": self.separately_holomorphic,
                "jointly_holomorphic": self.jointly_holomorphic,
                "implication_holds": self.implication_holds}


def hartogs_check(f, center, radii, n_nodes: int, probes, *, separate_tol: float = 1e-8,
                  joint_tol: float = 1e-6) -> HartogsReport:
    """One-variable Cauchy reproduction in each slot (other frozen at the probe) and on the torus."""
    c = C2Point.of(center)
    r1, r2 = radii
    z1, d1 = _circle(c.z1, r1, n_nodes)
    z2, d2 = _circle(c.z2, r2, n_nodes)
    res1 = res2 = joint = 0.0
    for p in map(C2Point.of, probes):
        direct = complex(np.asarray(f(np.asarray(p.z1), np.asarray(p.z2))))
        v1 = np.mean(np.asarray(f(z1, np.full(n_nodes, p.z2))) * d1 / (z1 - p.z1))
        v2 = np.mean(np.asarray(f(np.full(n_nodes, p.z1), z2)) * d2 / (z2 - p.z2))
        res1 = max(res1, abs(v1 - direct))
        res2 = max(res2, abs(v2 - direct))
        joint = max(joint, abs(torus_reproduce(f, c, radii, n_nodes, p) - direct))
    return HartogsReport((float(res1), float(res2)), float(joint), separate_tol, joint_tol)


# ---------------------------------------------------------------- analytic discs


@dataclass(frozen=True)
class AnalyticDisc:
    """``zeta -> (p1(zeta), p2(zeta))`` with ascending coefficients, on the closed unit disc."""

    coeffs1: tuple[complex, ...]
    coeffs2: tuple[complex, ...]
    label: str = ""

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return (np.polynomial.polynomial.polyval(zeta, self.coeffs1),
                np.polynomial.polynomial.polyval(zeta, self.coeffs2))

    def samples(self, spacing: float = 0.05) -> np.ndarray:
        return Disc(0, 1).sample(spacing)

    @classmethod
    def coordinate(cls, c: complex, slot: int = 1, base=(0, 0)) -> "AnalyticDisc":
        b = C2Point.of(base)
        if slot == 1:
            return cls((b.z1, c), (b.z2,), f"coordinate z1 c={c}")
        return cls((b.z1,), (b.z2, c), f"coordinate z2 c={c}")

    @classmethod
    def diagonal(cls, c: complex) -> "AnalyticDisc":
        return cls((0, c), (0, c), f"diagonal c={c}")

    @classmethod
    def random(cls, rng: np.random.Generator, domain: ProductDomain, degree: int = 3,
               attempts: int = 100) -> "AnalyticDisc":
        """Random polynomial disc, rescaled about the domain center until it fits."""
        centers = [f.center if isinstance(f, Disc) else complex((f.x0 + f.x1) / 2, (f.y0 + f.y1) / 2)
                   for f in domain.factors]
        raw = [rng.standard_normal(degree) + 1j * rng.standard_normal(degree) for _ in range(2)]
        scale = 1.0
        for _ in range(attempts):
            disc = cls((centers[0], *(scale * raw[0])), (centers[1], *(scale * raw[1])),
                       f"random degree {degree}")
            z1, z2 = disc(disc.samples())
            if np.all(domain.contains(z1, z2)):
                return disc
            scale /= 2
        raise ValueError("could not fit a random disc in the domain")


@dataclass(frozen=True)
class DiscReport:
    label: str
    deviation: float
    tol: float
    limit_residual: float | None
    samples: np.ndarray = field(repr=False)
    deviations: np.ndarray = field(repr=False)
    scope: str = "checked family only"

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tol

    def to_dict(self) -> dict:
        return {"disc": self.label, "deviation": self.deviation, "tol": self.tol,
                "passed": self.passed, "limit_residual": self.limit_residual, "scope": self.scope}


def disc_uniform_convergence(seq2: TwoVarSequence, disc: AnalyticDisc, tol: float, tail_pairs, *,
                             spacing: float = 0.05, cauchy_nodes: int = 128,
                             probes=(0, 0.3, 0.5j, -0.4 + 0.2j)) -> DiscReport:
    """Tail deviation of ``f_j o phi`` on the closed disc; on a pass, Cauchy-check the composed limit."""
    zeta = disc.samples(spacing)
    z1, z2 = disc(zeta)
    if not np.all(seq2.domain.contains(z1, z2)):
        raise ValueError("disc image leaves the domain")
    dev = np.zeros(zeta.shape)
    for l, m in tail_pairs:
        dev = np.maximum(dev, np.abs(seq2.checked(l, z1, z2) - seq2.checked(m, z1, z2)))
    worst = float(dev.max())
    resid = None
    if worst <= tol:
        nodes, d = _circle(0j, 1.0, cauchy_nodes)
        g = seq2.checked(seq2.j_max, *disc(nodes))
        resid = 0.0
        for w in probes:
            direct = complex(seq2.checked(seq2.j_max, *disc(np.asarray(complex(w)))))
            resid = max(resid, abs(np.mean(g * d / (nodes - w)) - direct))
        resid = float(resid)
    return DiscReport(disc.label, worst, tol, resid, zeta, dev)


def coordinate_consistency(seq2: TwoVarSequence, c: float, tail_pairs, *, slot: int = 1,
                           spacing: float = 0.05) -> float:
    """Largest gap between disc and line-restriction tail deviations at shared points ``t = c zeta``."""
    disc = AnalyticDisc.coordinate(c, slot)
    rep = disc_uniform_convergence(seq2, disc, math.inf, tail_pairs, spacing=spacing)
    line = ComplexLine(C2Point(0, 0), C2Point(1, 0) if slot == 1 else C2Point(0, 1))
    restricted = restrict_to_line(seq2, line)
    t = c * rep.samples
    line_dev = np.zeros(t.shape)
    for l, m in tail_pairs:
        line_dev = np.maximum(line_dev, np.abs(restricted.checked(l, t) - restricted.checked(m, t)))
    return float(np.max(np.abs(line_dev - rep.deviations)))


__all__ = [
    "C2Point", "ProductDomain", "TwoVarSequence", "product_geometric", "constant2", "lift",
    "ComplexLine", "LineDomain", "line_preimage", "LineSequence", "restrict_to_line",
    "analyze_line", "torus_reproduce", "HartogsReport", "hartogs_check", "AnalyticDisc",
    "DiscReport", "disc_uniform_convergence", "coordinate_consistency",
]
