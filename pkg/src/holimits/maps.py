"""Per-cell verdict maps and their CSV / plain-PGM exporters."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import Grid

HOLOMORPHIC = 1   # also "harmonic" for harmonicity maps
UNDETERMINED = 0
EXCEPTIONAL = -1

_GRAY = {HOLOMORPHIC: 255, UNDETERMINED: 128, EXCEPTIONAL: 0}


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class CellMap:
    """Verdicts on the cells of ``grid`` (shape ``grid.cell_shape``, row index along y)."""

    grid: Grid
    verdict: np.ndarray
    diagnostics: tuple[np.ndarray, np.ndarray]
    diagnostic_names: tuple[str, str]
    accept_tol: float
    reject_tol: float

    positive_label = "positive"

    @classmethod
    def from_diagnostics(cls, grid, first, second, accept_tol, reject_tol, names):
        first = np.asarray(first, dtype=float)
        second = np.asarray(second, dtype=float)
        missing = np.isnan(first) | np.isnan(second)
        accept = (first < accept_tol) & (second < accept_tol) & ~missing
        reject = ((first > reject_tol) | (second > reject_tol)) & ~missing
        verdict = np.full(first.shape, UNDETERMINED, dtype=np.int8)
        verdict[accept] = HOLOMORPHIC
        verdict[reject] = EXCEPTIONAL
        return cls(grid, verdict, (first, second), tuple(names), accept_tol, reject_tol)

    def labels(self) -> dict[int, str]:
        return {HOLOMORPHIC: self.positive_label, UNDETERMINED: "undetermined",
                EXCEPTIONAL: "exceptional"}

    def count(self, code: int) -> int:
        return int(np.sum(self.verdict == code))

    @property
    def positive_fraction(self) -> float:
        return float(np.mean(self.verdict == HOLOMORPHIC))

    @property
    def exceptional_mask(self) -> np.ndarray:
        return self.verdict == EXCEPTIONAL

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["center_re", "center_im", "verdict", *self.diagnostic_names])
        labels = self.labels()
        centers = self.grid.cell_centers
        for idx in np.ndindex(self.verdict.shape):
            c = centers[idx]
            w.writerow([fmt(c.real), fmt(c.imag), labels[int(self.verdict[idx])],
                        fmt(self.diagnostics[0][idx]), fmt(self.diagnostics[1][idx])])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    def to_pgm(self, path=None) -> str:
        """Plain PGM (P2); top row of the image is the largest imaginary part."""
        ny, nx = self.verdict.shape
        rows = [" ".join(str(_GRAY[int(v)]) for v in self.verdict[i]) for i in range(ny - 1, -1, -1)]
        text = f"P2\n{nx} {ny}\n255\n" + "\n".join(rows) + "\n"
        if path is not None:
            Path(path).write_text(text)
        return text
