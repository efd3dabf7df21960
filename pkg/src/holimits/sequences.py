"""Indexed families f_1, f_2, ... that every analyzer consumes, plus built-ins."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

Evaluator = Callable[[int, np.ndarray], np.ndarray]


class EvaluationError(RuntimeError):
    """An evaluator raised or returned non-finite values; carries where it happened."""

    def __init__(self, message: str, j: int | None = None, location: complex | None = None):
        super().__init__(message)
        self.j = j
        self.location = location


@dataclass(frozen=True)
class FunctionSequence:
    """A family ``j -> f_j`` of functions on the plane, ``1 <= j <= j_max``.

    ``evaluator(j, z)`` must accept a numpy array of complex points and return
    an array of the same shape (scalars are broadcast).
    """

    evaluator: Evaluator
    j_max: int
    description: str = ""

    def __post_init__(self):
        if self.j_max < 1:
            raise ValueError("j_max must be >= 1")

    def __call__(self, j: int, z):
        if not 1 <= j <= self.j_max:
            raise IndexError(f"index {j} outside 1..{self.j_max}")
        z_arr = np.asarray(z, dtype=complex)
        out = np.broadcast_to(np.asarray(self.evaluator(j, z_arr)), z_arr.shape).copy()
        if z_arr.ndim == 0:
            return out[()]
        return out

    def checked(self, j: int, z: np.ndarray) -> np.ndarray:
        """Like ``__call__`` but raises :class:`EvaluationError` on failure or non-finite output."""
        z = np.asarray(z, dtype=complex)
        try:
            vals = np.asarray(self(j, z))
        except Exception as exc:  # evaluator failures are re-raised with context
            raise EvaluationError(f"evaluator failed for j={j}: {exc}", j=j) from exc
        bad = ~np.isfinite(vals)
        if bad.any():
            loc = complex(z[bad].flat[0]) if z.ndim else complex(z)
            raise EvaluationError(f"non-finite value for j={j} at {loc}", j=j, location=loc)
        return vals

    def stack(self, indices, z: np.ndarray) -> np.ndarray:
        """Values for several indices, shape ``(len(indices),) + z.shape``."""
        return np.stack([self.checked(j, z) for j in indices])

    def real_part(self) -> "FunctionSequence":
        ev = self.evaluator
        return FunctionSequence(lambda j, z: np.real(ev(j, z)), self.j_max,
                                f"Re of {self.description}")


def constant(c: complex, j_max: int = 10) -> FunctionSequence:
    return FunctionSequence(lambda j, z: np.full(np.shape(z), c), j_max, f"constant {c}")


def index_growth(j_max: int = 10) -> FunctionSequence:
    """f_j(z) = j everywhere; bounded at no point uniformly in j."""
    return FunctionSequence(lambda j, z: np.full(np.shape(z), float(j)), j_max, "f_j = j")


def powers(j_max: int = 60) -> FunctionSequence:
    return FunctionSequence(lambda j, z: z ** j, j_max, "f_j = z^j")


def _weighted_partial_sum(z: np.ndarray, j: int, coeff) -> np.ndarray:
    # Horner on sum_{k=0}^{j} coeff(k) z^k
    acc = np.zeros_like(z, dtype=complex)
    for k in range(j, -1, -1):
        acc = acc * z + coeff(k)
    return acc


def geometric_partial_sums(j_max: int = 40) -> FunctionSequence:
    """f_j = sum_{k=0}^{j} z^k."""
    return FunctionSequence(lambda j, z: _weighted_partial_sum(z, j, lambda k: 1.0),
                            j_max, "geometric partial sums")


def koebe_partial_sums(j_max: int = 100) -> FunctionSequence:
    """f_j = sum_{k=1}^{j} k z^k, partial sums of z/(1-z)^2."""
    return FunctionSequence(lambda j, z: _weighted_partial_sum(z, j, float),
                            j_max, "Koebe partial sums")


def koebe(z):
    z = np.asarray(z, dtype=complex)
    return z / (1 - z) ** 2


BUILTIN_FAMILIES = {
    "constant": constant,
    "index-growth": index_growth,
    "powers": powers,
    "geometric": geometric_partial_sums,
    "koebe": koebe_partial_sums,
}
