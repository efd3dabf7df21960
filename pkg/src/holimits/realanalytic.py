"""Factorial derivative bounds and Taylor-coefficient limits on an interval.

Derivatives come either from closed forms supplied by a family or from a
Chebyshev interpolant (``method="spectral"``), capped at order 8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial

from .sequences import FunctionSequence

MAX_ORDER = 8


def estimate_derivatives(f: Callable, interval: tuple[float, float], L: int, N: int,
                         centers) -> np.ndarray:
    """Derivatives 0..L at ``centers`` of the degree-N Chebyshev interpolant of ``f``.

    Returns an array of shape ``(len(centers), L + 1)``.
    """
    if L > MAX_ORDER:
        raise ValueError(f"derivative order {L} above the accuracy floor {MAX_ORDER}")
    if L > N:
        raise ValueError("need L <= N")
    a, b = interval
    if not a < b:
        raise ValueError("interval must be nondegenerate")
    p = Chebyshev.interpolate(f, N, domain=[a, b])
    x = np.asarray(centers, dtype=float)
    out = np.empty((x.size, L + 1))
    for l in range(L + 1):
        out[:, l] = p.deriv(l)(x) if l else p(x)
    return out


def _sqrt_series(u: list[float], n: int) -> list[float]:
    """Taylor coefficients of sqrt(u(x)) from those of u (u[0] > 0)."""
    s = [math.sqrt(u[0])]
    for k in range(1, n + 1):
        uk = u[k] if k < len(u) else 0.0
        acc = sum(s[i] * s[k - i] for i in range(1, k))
        s.append((uk - acc) / (2 * s[0]))
    return s


@dataclass(frozen=True)
class RealFamily:
    """Named family of real-analytic functions with closed-form derivatives."""

    name: str
    j_max: int
    value: Callable[[int, np.ndarray], np.ndarray]
    derivative: Callable[[int, float, int], float]

    def as_sequence(self) -> FunctionSequence:
        v = self.value
        return FunctionSequence(lambda j, z: v(j, np.real(z)), self.j_max, self.name)


def exp_partial_sums(j_max: int = 12) -> RealFamily:
    """f_j = sum_{k<=j} x^k/k!; the l-th derivative is the same sum truncated at j - l."""
    def value(j, x):
        return sum(np.asarray(x, dtype=float) ** k / math.factorial(k) for k in range(j + 1))

    def deriv(j, x, l):
        return float(sum(x ** k / math.factorial(k) for k in range(j - l + 1)))

    return RealFamily("exp-partial-sum", j_max, value, deriv)


def geometric_partial_sums(j_max: int = 12) -> RealFamily:
    def value(j, x):
        return sum(np.asarray(x, dtype=float) ** k for k in range(j + 1))

    def deriv(j, x, l):
        return float(sum(math.perm(k, l) * x ** (k - l) for k in range(l, j + 1)))

    return RealFamily("geometric-partial-sum", j_max, value, deriv)


def sqrt_shift(j_max: int = 64) -> RealFamily:
    """f_j = sqrt(x^2 + 1/j), converging to |x|; f_j''(0) = sqrt(j)."""
    def value(j, x):
        return np.sqrt(np.asarray(x, dtype=float) ** 2 + 1.0 / j)

    def deriv(j, x, l):
        # Taylor coefficients of x^2 + 1/j about x
        u = [x * x + 1.0 / j, 2 * x, 1.0]
        return _sqrt_series(u, l)[l] * math.factorial(l)

    return RealFamily("sqrt-shift", j_max, value, deriv)


def polynomial_family(coefficients, j_max: int = 1) -> RealFamily:
    """Constant-in-j family given by ascending power coefficients."""
    p = Polynomial(np.asarray(coefficients, dtype=float))

    def value(j, x):
        return p(np.asarray(x, dtype=float))

    def deriv(j, x, l):
        return float(p.deriv(l)(x)) if l else float(p(x))

    return RealFamily("polynomial", j_max, value, deriv)


def constant_family(c: float, j_max: int = 10) -> RealFamily:
    return polynomial_family([c], j_max)


REAL_FAMILIES = {
    "exp-partial-sum": exp_partial_sums,
    "geometric-partial-sum": geometric_partial_sums,
    "sqrt-shift": sqrt_shift,
}


@dataclass(frozen=True)
class DerivativeTable:
    interval: tuple[float, float]
    indices: tuple[int, ...]
    centers: np.ndarray
    L: int
    values: np.ndarray   # (len(indices), len(centers), L + 1)
    method: str

    def to_csv(self) -> str:
        lines = ["j,x,order,value"]
        for a, j in enumerate(self.indices):
            for b, x in enumerate(self.centers):
                for l in range(self.L + 1):
                    lines.append(f"{j},{x:.17g},{l},{self.values[a, b, l]:.17g}")
        return "\n".join(lines) + "\n"


def derivative_table(family: RealFamily, indices, interval, centers, L: int,
                     method: str = "closed-form", N: int = 32) -> DerivativeTable:
    centers = np.asarray(centers, dtype=float)
    indices = tuple(indices)
    vals = np.empty((len(indices), centers.size, L + 1))
    for a, j in enumerate(indices):
        if method == "closed-form":
            for b, x in enumerate(centers):
                for l in range(L + 1):
                    vals[a, b, l] = family.derivative(j, float(x), l)
        elif method == "spectral":
            vals[a] = estimate_derivatives(lambda x: family.value(j, x), interval, L, N, centers)
        else:
            raise ValueError(f"unknown method {method!r}")
    return DerivativeTable(tuple(interval), indices, centers, L, vals, method)


@dataclass(frozen=True)
class FactorialBoundReport:
    K: float
    R: float
    worst_ratio: float
    worst_witness: tuple[int, float, int]   # (j, x, order)

    @property
    def passed(self) -> bool:
        return self.worst_ratio <= 1.0


def _scaled(table: DerivativeTable, R: float) -> np.ndarray:
    l = np.arange(table.L + 1)
    fact = np.array([math.factorial(int(k)) for k in l], dtype=float)
    return np.abs(table.values) * R ** l / fact


def check_factorial_bound(table: DerivativeTable, K: float, R: float) -> FactorialBoundReport:
    """Worst ``|f_j^(l)(x)| R^l / (K l!)`` over the table."""
    if not (K > 0 and R > 0):
        raise ValueError("K and R must be positive")
    ratio = _scaled(table, R) / K
    a, b, l = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
    return FactorialBoundReport(K, R, float(ratio[a, b, l]),
                                (table.indices[a], float(table.centers[b]), int(l)))


def minimal_K(table: DerivativeTable, R: float) -> float:
    """Smallest K for which the factorial bound holds on the table at this R."""
    return float(_scaled(table, R).max())


@dataclass(frozen=True)
class TaylorLimit:
    center: float
    alphas: np.ndarray
    variation: np.ndarray
    converged: np.ndarray


def taylor_limit_coeffs(family: RealFamily, center: float, N: int, tail, *, tol: float = 1e-8,
                        method: str = "closed-form", interval=(-1.0, 1.0),
                        spectral_degree: int = 32) -> TaylorLimit:
    """alpha_l = f_J^(l)(center) at the last tail index J, with the spread over the tail.

    An order is flagged non-convergent when its spread across the tail
    window exceeds ``tol * max(1, |alpha_l|)``.
    """
    tail = list(tail)
    if not tail or max(tail) > family.j_max or min(tail) < 1:
        raise ValueError("tail window must lie within 1..j_max")
    table = derivative_table(family, tail, interval, [center], N, method, spectral_degree)
    v = table.values[:, 0, :]
    alphas = v[-1]
    variation = v.max(axis=0) - v.min(axis=0)
    converged = variation <= tol * np.maximum(1.0, np.abs(alphas))
    return TaylorLimit(float(center), alphas, variation, converged)


@dataclass(frozen=True)
class AnalyticVerdict:
    center: float
    verdict: str            # "analytic" | "not-analytic" | "undetermined"
    radius_estimate: float


def radius_estimate(alphas) -> float:
    """Root-test radius ``1 / max (|alpha_l| / l!)^(1/l)`` over the upper half of the orders."""
    alphas = np.asarray(alphas, dtype=float)
    N = len(alphas) - 1
    lo = max(1, (N + 1) // 2)
    roots = [(abs(alphas[l]) / math.factorial(l)) ** (1.0 / l) for l in range(lo, N + 1)]
    top = max(roots)
    return math.inf if top == 0 else 1.0 / top


def classify_analytic(coeff_field, decay_tol: float = 0.1) -> list[AnalyticVerdict]:
    """Verdict per center from its TaylorLimit (needs orders 0..4)."""
    out = []
    for tl in coeff_field:
        if len(tl.alphas) < 5:
            raise ValueError("classification needs alpha_0 .. alpha_4")
        r = radius_estimate(tl.alphas)
        if not np.all(tl.converged):
            out.append(AnalyticVerdict(tl.center, "not-analytic", r))
        elif r >= decay_tol:
            out.append(AnalyticVerdict(tl.center, "analytic", r))
        else:
            out.append(AnalyticVerdict(tl.center, "undetermined", r))
    return out
