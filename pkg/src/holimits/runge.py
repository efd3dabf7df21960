"""The cross example: polynomials close to 1 on a cross and close to 0 on four squares.

Runge's theorem guarantees such polynomials exist because the complement of
``S_j u T_j`` is connected.  They are built here by discrete least squares in
a Vandermonde-with-Arnoldi basis, followed by Lawson reweighting toward the
minimax fit, with the degree escalated until the sampled sup errors drop
below the tolerance.

Sup-error certificates are sampled suprema, not rigorous enclosures.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geometry import CompactRegion, Rect, Segment, sample_boundary, sample_region
from .sequences import FunctionSequence


class ApproximationFailure(RuntimeError):
    """Degree cap reached before the tolerance was met.

    ``best`` holds the best polynomial found (with its measured certificates),
    ``errors`` its sup errors on (S, T), and ``j`` the sequence index if known.
    """

    def __init__(self, message: str, best: "CertifiedPolynomial", errors: tuple[float, float],
                 j: int | None = None):
        super().__init__(message)
        self.best = best
        self.errors = errors
        self.j = j


class OutOfDomain(ValueError):
    pass


def build_S(j: int) -> CompactRegion:
    """Cross of the two axes, arms of half-length ``1 - 1/(j+2)``."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    L = 1.0 - 1.0 / (j + 2)
    return CompactRegion(segments=(Segment("re", 0.0, -L, L), Segment("im", 0.0, -L, L)))


def build_T(j: int) -> CompactRegion:
    """Four closed squares ``1/(j+2) <= |Re z|, |Im z| <= 1 - 1/(j+2)``."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    g = 1.0 / (j + 2)
    L = 1.0 - g
    rects = tuple(Rect(*sorted((sx * g, sx * L)), *sorted((sy * g, sy * L)))
                  for sx, sy in ((1, 1), (-1, 1), (-1, -1), (1, -1)))
    return CompactRegion(rects=rects)


def limit_example(z):
    """Pointwise limit of the cross example: 1 on the axes, 0 elsewhere in the open square."""
    z = np.asarray(z, dtype=complex)
    if np.any((np.abs(z.real) >= 1) | (np.abs(z.imag) >= 1)):
        raise OutOfDomain("limit_example is defined on the open square |Re z|, |Im z| < 1")
    out = ((z.real == 0) | (z.imag == 0)).astype(float)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------- Arnoldi basis


@dataclass(frozen=True)
class ArnoldiBasis:
    """Polynomial basis orthonormalized on a point set by Arnoldi.

    The basis variable is ``w = z**power``; ``power > 1`` is used for targets
    invariant under rotation by ``2*pi/power``.  Column ``k`` of the basis is
    a polynomial of degree ``k`` in ``w``.
    """

    hessenberg: np.ndarray
    power: int = 1

    @property
    def size(self) -> int:
        return self.hessenberg.shape[1]

    @classmethod
    def build(cls, z: np.ndarray, n: int, power: int = 1) -> tuple["ArnoldiBasis", np.ndarray]:
        w = np.asarray(z, dtype=complex) ** power
        m = len(w)
        Q = np.zeros((m, n + 1), dtype=complex)
        H = np.zeros((n + 1, n), dtype=complex)
        Q[:, 0] = 1.0
        for k in range(n):
            q = w * Q[:, k]
            # two passes of modified Gram-Schmidt
            for _ in range(2):
                h = Q[:, : k + 1].conj().T @ q / m
                q = q - Q[:, : k + 1] @ h
                H[: k + 1, k] += h
            H[k + 1, k] = np.linalg.norm(q) / math.sqrt(m)
            Q[:, k + 1] = q / H[k + 1, k]
        return cls(H, power), Q

    def vandermonde(self, z) -> np.ndarray:
        w = np.asarray(z, dtype=complex).ravel() ** self.power
        n = self.size
        H = self.hessenberg
        W = np.zeros((len(w), n + 1), dtype=complex)
        W[:, 0] = 1.0
        for k in range(n):
            W[:, k + 1] = (w * W[:, k] - W[:, : k + 1] @ H[: k + 1, k]) / H[k + 1, k]
        return W


@dataclass(frozen=True)
class Certificate:
    region_id: str
    region: CompactRegion
    target: complex
    spacing: float
    sup_error: float
    refinements: int = 0

    def to_dict(self) -> dict:
        return {"region_id": self.region_id, "region": self.region.to_dict(),
                "target": [self.target.real, self.target.imag], "spacing": self.spacing,
                "sup_error": self.sup_error, "refinements": self.refinements,
                "kind": "sampled-supremum (heuristic)"}

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        return cls(d["region_id"], CompactRegion.from_dict(d["region"]),
                   complex(*d["target"]), d["spacing"], d["sup_error"], d.get("refinements", 0))


@dataclass(frozen=True)
class CertifiedPolynomial:
    fit_nodes: np.ndarray
    basis: ArnoldiBasis
    coefficients: np.ndarray
    eps: float
    certificates: tuple[Certificate, ...] = field(default=())

    @property
    def degree(self) -> int:
        """Degree in z (``power`` times the degree in the basis variable)."""
        return self.basis.power * (len(self.coefficients) - 1)

    @property
    def certified(self) -> bool:
        return bool(self.certificates) and all(c.sup_error < self.eps for c in self.certificates)

    def __call__(self, z):
        z_arr = np.asarray(z, dtype=complex)
        vals = (self.basis.vandermonde(z_arr) @ self.coefficients).reshape(z_arr.shape)
        return vals[()] if vals.ndim == 0 else vals

    def sampled_sup_error(self, region: CompactRegion, target: complex, spacing: float) -> float:
        pts = sample_region(region, spacing)
        return float(np.max(np.abs(self(pts) - target)))

    def recheck(self, cert: Certificate) -> float:
        """Re-evaluate a certificate on its recorded sampling."""
        return self.sampled_sup_error(cert.region, cert.target, cert.spacing)

    def error_on(self, region_id: str) -> float:
        return next(c.sup_error for c in self.certificates if c.region_id == region_id)

    def to_dict(self) -> dict:
        pairs = lambda a: [[float(v.real), float(v.imag)] for v in np.ravel(a)]
        return {
            "kind": "certified-polynomial",
            "degree": self.degree,
            "power": self.basis.power,
            "eps": self.eps,
            "fit_nodes": pairs(self.fit_nodes),
            "hessenberg_shape": list(self.basis.hessenberg.shape),
            "hessenberg": pairs(self.basis.hessenberg),
            "coefficients": pairs(self.coefficients),
            "certificates": [c.to_dict() for c in self.certificates],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CertifiedPolynomial":
        arr = lambda p: np.array([complex(a, b) for a, b in p], dtype=complex)
        H = arr(d["hessenberg"]).reshape(d["hessenberg_shape"])
        return cls(arr(d["fit_nodes"]), ArnoldiBasis(H, d["power"]), arr(d["coefficients"]),
                   d["eps"], tuple(Certificate.from_dict(c) for c in d["certificates"]))


def certify(poly_eval, region: CompactRegion, target: complex, spacing: float,
            region_id: str, max_halvings: int = 4) -> Certificate:
    """Sampled sup of ``|p - target|``, halving the pitch until it moves by < 5%."""
    def sup(h):
        return float(np.max(np.abs(poly_eval(sample_region(region, h)) - target)))

    h, err = spacing, sup(spacing)
    for k in range(1, max_halvings + 1):
        finer = sup(h / 2)
        h, prev, err = h / 2, err, finer
        if abs(finer - prev) < 0.05 * max(prev, 1e-300):
            return Certificate(region_id, region, complex(target), h, err, k)
    return Certificate(region_id, region, complex(target), h, err, max_halvings)


# ---------------------------------------------------------------- fitting


def _lawson(Q: np.ndarray, F: np.ndarray, iters: int) -> tuple[np.ndarray, float]:
    """Least squares, then Lawson reweighting; returns the coefficients with smallest max error."""
    w = np.full(len(F), 1.0 / len(F))
    best_c, best_err = None, math.inf
    stall = 0
    for _ in range(iters + 1):
        sw = np.sqrt(w)
        c = np.linalg.lstsq(Q * sw[:, None], F * sw, rcond=None)[0]
        r = np.abs(Q @ c - F)
        err = float(r.max())
        if err < best_err * (1 - 1e-4):
            best_c, best_err, stall = c, err, 0
        else:
            stall += 1
            if stall >= 8:
                break
        w = w * r
        total = w.sum()
        if not total > 0:
            break
        w /= total
    return best_c, best_err


def _degree_schedule(cap: int, step: int, power: int) -> list[int]:
    degs = sorted({0, *range(step, cap + 1, step), cap})
    ns = []
    for d in degs:
        n = d // power
        if n not in ns:
            ns.append(n)
    return ns


def fit_two_level(S: CompactRegion, T: CompactRegion, eps: float, degree_cap: int, *,
                  symmetry: int = 1, fit_spacing: float | None = None,
                  degree_step: int = 8, lawson_iters: int = 40) -> CertifiedPolynomial:
    """Polynomial with sampled sup ``|p - 1| < eps`` on S and ``|p| < eps`` on T.

    Parameters
    ----------
    S, T : CompactRegion
        Disjoint compact sets; the target is 1 on S and 0 on T.
    eps : float
        Tolerance the validation certificates must beat.
    degree_cap : int
        Largest degree in z tried; degrees escalate 0, 8, 16, ...
    symmetry : int
        Use the basis variable ``z**symmetry``.  Only valid when S, T and the
        targets are invariant under rotation by ``2*pi/symmetry``.
    fit_spacing : float, optional
        Fit pitch; defaults to ``dist(S, T) / 8``.  Validation starts at half.

    Raises
    ------
    ApproximationFailure
        If no degree up to the cap is certified; carries the best polynomial.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if degree_cap < 0:
        raise ValueError("degree_cap must be >= 0")
    gap = S.distance_to(T)
    if not gap > 0:
        raise ValueError("S and T must be disjoint")
    h = fit_spacing if fit_spacing is not None else gap / 8
    h_val = h / 2

    zS = np.unique(sample_boundary(S, h))
    zT = np.unique(sample_boundary(T, h))
    Z = np.concatenate([zS, zT])
    F = np.concatenate([np.ones(len(zS)), np.zeros(len(zT))]).astype(complex)

    schedule = _degree_schedule(degree_cap, degree_step, symmetry)
    basis_full, Q_full = ArnoldiBasis.build(Z, schedule[-1], symmetry)

    best = None
    for n in schedule:
        c, fit_err = _lawson(Q_full[:, : n + 1], F, lawson_iters)
        if best is not None and fit_err >= max(best.error_on("S"), best.error_on("T")):
            continue
        poly = _with_certificates(Z, basis_full, n, c, eps, S, T, h_val)
        if poly.certified:
            return poly
        if best is None or max(poly.error_on("S"), poly.error_on("T")) < max(
                best.error_on("S"), best.error_on("T")):
            best = poly

    measured = (best.error_on("S"), best.error_on("T"))
    raise ApproximationFailure(
        f"degree cap {degree_cap} reached: best sup errors S={measured[0]:.4g}, "
        f"T={measured[1]:.4g} at degree {best.degree}, tolerance {eps:.4g}",
        best, measured)


def _with_certificates(Z, basis_full: ArnoldiBasis, n: int, c: np.ndarray, eps: float,
                       S: CompactRegion, T: CompactRegion, h_val: float) -> CertifiedPolynomial:
    basis = ArnoldiBasis(basis_full.hessenberg[: n + 1, :n].copy(), basis_full.power)
    poly = CertifiedPolynomial(Z, basis, np.asarray(c), eps)
    certs = (certify(poly, S, 1.0, h_val, "S"), certify(poly, T, 0.0, h_val, "T"))
    return CertifiedPolynomial(Z, basis, np.asarray(c), eps, certs)


# ---------------------------------------------------------------- the sequence


@dataclass(frozen=True)
class ExampleSequence:
    entries: tuple[tuple[int, CertifiedPolynomial], ...]
    j_max: int

    @property
    def certified(self) -> bool:
        return all(p.certified for _, p in self.entries)

    def polynomial(self, j: int) -> CertifiedPolynomial:
        return dict(self.entries)[j]

    def as_function_sequence(self) -> FunctionSequence:
        polys = dict(self.entries)
        tag = "certified" if self.certified else "best-effort, not certified"
        return FunctionSequence(lambda j, z: polys[j](z), self.j_max,
                                f"cross-example polynomials ({tag})")

    def save(self, directory) -> Path:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        manifest = {"kind": "example-sequence", "j_max": self.j_max, "entries": []}
        for j, p in self.entries:
            name = f"f_{j:03d}.json"
            (d / name).write_text(json.dumps(p.to_dict()))
            manifest["entries"].append({
                "j": j, "file": name, "degree": p.degree, "eps": p.eps,
                "certified": p.certified,
                "sup_error_S": p.error_on("S"), "sup_error_T": p.error_on("T"),
            })
        (d / "manifest.json").write_text(json.dumps(manifest, indent=2))
        return d

    @classmethod
    def load(cls, directory) -> "ExampleSequence":
        d = Path(directory)
        manifest = json.loads((d / "manifest.json").read_text())
        entries = tuple((e["j"], CertifiedPolynomial.from_dict(json.loads((d / e["file"]).read_text())))
                        for e in manifest["entries"])
        return cls(entries, manifest["j_max"])


def fit_example(j: int, degree_cap: int = 160, **kw) -> CertifiedPolynomial:
    """f_j of the cross example; exploits the four-fold rotational symmetry of S_j, T_j."""
    kw.setdefault("symmetry", 4)
    try:
        return fit_two_level(build_S(j), build_T(j), 1.0 / j, degree_cap, **kw)
    except ApproximationFailure as exc:
        exc.j = j
        exc.args = (f"j={j}: {exc.args[0]}",)
        raise


def build_example_sequence(j_max: int = 6, degree_cap: int = 160, *, strict: bool = True,
                           parallel: int = 1, **kw) -> ExampleSequence:
    """Certified f_1 .. f_{j_max}.

    With ``strict=False`` an uncertifiable index keeps the best polynomial
    found (``certified`` is then False) instead of raising.
    """
    if j_max < 1:
        raise ValueError("j_max must be >= 1")

    def one(j):
        try:
            return fit_example(j, degree_cap, **kw)
        except ApproximationFailure as exc:
            if strict:
                raise
            return exc.best

    js = range(1, j_max + 1)
    if parallel > 1:
        with ThreadPoolExecutor(parallel) as pool:
            polys = list(pool.map(one, js))
    else:
        polys = [one(j) for j in js]
    return ExampleSequence(tuple(zip(js, polys)), j_max)
