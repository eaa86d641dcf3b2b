"""Hermitian matrices, a cyclic Jacobi eigensolver and the functional calculus.

Everything here is immutable: a ``HermitianMatrix`` wraps a read-only
complex array whose self-adjointness is exact (``M == M.conj().T``
bit for bit), and each instance caches its own spectral decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    DomainViolation,
    NotHermitian,
    NotSquare,
)

TAU_EIG = 1e-12
TAU_DOM = 1e-9
MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            raise ValueError(f"bad interval [{self.lo}, {self.hi}]")

    def contains(self, t: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= t <= self.hi + tol

    def covers(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def to_json(self):
        return [None if math.isinf(self.lo) else self.lo,
                None if math.isinf(self.hi) else self.hi]

    @classmethod
    def from_json(cls, pair) -> "Interval":
        lo, hi = pair
        return cls(-math.inf if lo is None else float(lo),
                   math.inf if hi is None else float(hi))


REAL_LINE = Interval(-math.inf, math.inf)
HALF_LINE = Interval(0.0, math.inf)


def as_complex_matrix(raw) -> np.ndarray:
    """Coerce ``raw`` to a finite 2-D complex128 array (the ComplexMatrix carrier)."""
    m = np.array(raw, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def frobenius_norm(m) -> float:
    if isinstance(m, HermitianMatrix):
        m = m.data
    return float(np.linalg.norm(m))


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self, values: np.ndarray | None = None) -> np.ndarray:
        lam = self.eigenvalues if values is None else values
        u = self.eigenvectors
        return (u * lam) @ u.conj().T


class HermitianMatrix:
    """Complex self-adjoint matrix with exact symmetry.

    Construct through :func:`hermitize` (which checks the asymmetry of raw
    input) or directly from data that is already Hermitian up to ``tol``.
    """

    __slots__ = ("_data", "_spectral")

    def __init__(self, data, tol: float = HERMITIAN_TOL):
        m = as_complex_matrix(data)
        if m.shape[0] != m.shape[1]:
            raise NotSquare(f"shape {m.shape} is not square")
        asym = np.linalg.norm(m - m.conj().T)
        if asym > tol * max(1.0, np.linalg.norm(m)):
            raise NotHermitian(f"asymmetry {asym:.3g} exceeds tolerance")
        h = 0.5 * (m + m.conj().T)
        # (M + M^H)/2 can leave the two triangles differing in the last bit.
        h = np.triu(h) + np.triu(h, 1).conj().T
        h[np.diag_indices_from(h)] = h.diagonal().real
        h.setflags(write=False)
        self._data = h
        self._spectral = None

    @classmethod
    def _trusted(cls, h: np.ndarray) -> "HermitianMatrix":
        obj = cls.__new__(cls)
        h = np.triu(h) + np.triu(h, 1).conj().T
        h[np.diag_indices_from(h)] = h.diagonal().real
        h.setflags(write=False)
        obj._data = h
        obj._spectral = None
        return obj

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def __repr__(self):
        return f"HermitianMatrix({self._data.tolist()!r})"

    def __array__(self, dtype=None, copy=None):
        return self._data if dtype is None else self._data.astype(dtype)

    def _check_dim(self, other: "HermitianMatrix"):
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimensions {self.dim} and {other.dim} differ")

    def __add__(self, other):
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        self._check_dim(other)
        return HermitianMatrix._trusted(self._data + other._data)

    def __sub__(self, other):
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        self._check_dim(other)
        return HermitianMatrix._trusted(self._data - other._data)

    def __neg__(self):
        return HermitianMatrix._trusted(-self._data)

    def __mul__(self, alpha):
        if isinstance(alpha, complex) or not np.isrealobj(alpha):
            raise TypeError("Hermitian matrices can only be scaled by reals")
        return HermitianMatrix._trusted(float(alpha) * self._data)

    __rmul__ = __mul__

    def __truediv__(self, alpha):
        return self * (1.0 / float(alpha))

    def __matmul__(self, other) -> np.ndarray:
        rhs = other.data if isinstance(other, HermitianMatrix) else np.asarray(other)
        if rhs.shape[0] != self.dim:
            raise DimensionMismatch(f"cannot multiply {self.dim}x{self.dim} by {rhs.shape}")
        return self._data @ rhs

    def __eq__(self, other):
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def adjoint(self) -> "HermitianMatrix":
        return self

    def shift(self, s: float) -> "HermitianMatrix":
        """Return ``self - s * I``, reusing this matrix's eigenbasis."""
        h = self._data.copy()
        h[np.diag_indices_from(h)] -= s
        out = HermitianMatrix._trusted(h)
        if self._spectral is not None:
            dec = self._spectral
            lam = dec.eigenvalues - s
            lam.setflags(write=False)
            out._spectral = SpectralDecomposition(lam, dec.eigenvectors, 0)
        return out

    def spectral(self) -> SpectralDecomposition:
        if self._spectral is None:
            self._spectral = _jacobi_eigh(self._data)
        return self._spectral

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectral().eigenvalues


def identity(n: int) -> HermitianMatrix:
    return HermitianMatrix._trusted(np.eye(n, dtype=np.complex128))


def zeros(n: int) -> HermitianMatrix:
    return HermitianMatrix._trusted(np.zeros((n, n), dtype=np.complex128))


def diag(values) -> HermitianMatrix:
    return HermitianMatrix._trusted(np.diag(np.asarray(values, dtype=float)).astype(np.complex128))


def hermitize(raw, tol: float = HERMITIAN_TOL) -> HermitianMatrix:
    """Symmetrize ``raw`` to ``(raw + raw^H)/2`` after checking it is Hermitian within ``tol``."""
    m = as_complex_matrix(raw)
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"shape {m.shape} is not square")
    return HermitianMatrix(m, tol=tol)


def _phase_fix(u: np.ndarray) -> np.ndarray:
    for k in range(u.shape[1]):
        col = u[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-10)
        if nz.size:
            z = col[nz[0]]
            u[:, k] = col * (abs(z) / z)
            u[nz[0], k] = abs(z)
    return u


def _jacobi_eigh(a: np.ndarray, tol: float = TAU_EIG, max_sweeps: int = MAX_SWEEPS) -> SpectralDecomposition:
    """Cyclic complex Jacobi: each rotation first removes the phase of a_pq,
    then applies the real symmetric rotation that annihilates it.

    Works on Python lists of complex scalars; at the dimensions used here
    that is several times faster than per-rotation numpy slicing.
    """
    n = a.shape[0]
    m = a.tolist()
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    norm = float(np.linalg.norm(a))
    floor = 1e-18 * norm
    stop = 4.0 * np.finfo(float).eps * norm
    sweeps = 0
    while n > 1 and norm > 0.0:
        off = math.sqrt(2.0 * sum(abs(m[i][j]) ** 2 for i in range(n) for j in range(i + 1, n)))
        if off <= stop:
            break
        if sweeps >= max_sweeps:
            if off > tol * max(1.0, norm):
                raise ConvergenceFailure(
                    f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {off:.3g})")
            break
        sweeps += 1
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p][q]
                r = abs(apq)
                if r <= floor:
                    continue
                rotated = True
                u = (apq / r).conjugate()
                theta = (m[q][q].real - m[p][p].real) / (2.0 * r)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^H A J and V <- V J with J = [[c, s], [-s u, c u]] on (p, q).
                su, cu = s * u, c * u
                suc, cuc = su.conjugate(), cu.conjugate()
                for row in m:
                    x, y = row[p], row[q]
                    row[p] = c * x - su * y
                    row[q] = s * x + cu * y
                rp, rq = m[p], m[q]
                for k in range(n):
                    x, y = rp[k], rq[k]
                    rp[k] = c * x - suc * y
                    rq[k] = s * x + cuc * y
                rp[q] = rq[p] = 0j
                rp[p] = complex(rp[p].real)
                rq[q] = complex(rq[q].real)
                for row in v:
                    x, y = row[p], row[q]
                    row[p] = c * x - su * y
                    row[q] = s * x + cu * y
        if not rotated:
            break
    lam = np.array([m[i][i].real for i in range(n)])
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    vec = _phase_fix(np.array(v, dtype=np.complex128)[:, order])
    lam.setflags(write=False)
    vec.setflags(write=False)
    return SpectralDecomposition(lam, vec, sweeps)


def spectral_decompose(a: HermitianMatrix) -> SpectralDecomposition:
    return a.spectral()


def _evaluator(f) -> Callable[[np.ndarray], np.ndarray]:
    return f.eval if hasattr(f, "eval") else f


def clamp_to_domain(values: np.ndarray, domain: Interval, tol: float = TAU_DOM) -> np.ndarray:
    lo, hi = domain.lo, domain.hi
    bad = (values < lo - tol) | (values > hi + tol)
    if np.any(bad):
        raise DomainViolation(
            f"eigenvalues {values[bad].tolist()} fall outside [{lo}, {hi}]")
    return np.clip(values, lo, hi)


def apply_function(f, a: HermitianMatrix, tol_dom: float = TAU_DOM) -> HermitianMatrix:
    """Functional calculus ``f(A) = U diag(f(lambda)) U^H``.

    ``f`` is a ScalarFunction (its ``domain`` is enforced, with eigenvalues up
    to ``tol_dom`` outside it clamped onto the boundary) or a bare vectorized
    callable, which is taken to be defined on the whole real line.
    """
    dec = a.spectral()
    lam = dec.eigenvalues
    domain = getattr(f, "domain", None)
    if isinstance(domain, Interval):
        lam = clamp_to_domain(lam, domain, tol_dom)
    values = np.asarray(_evaluator(f)(lam), dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainViolation("function is not finite on the spectrum")
    return HermitianMatrix._trusted(dec.reconstruct(values))


def operator_abs(a: HermitianMatrix) -> HermitianMatrix:
    return apply_function(np.abs, a)


def quadratic_form(a: HermitianMatrix, x) -> float:
    """Real part of ``x^H A x``."""
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if x.shape[0] != a.dim:
        raise DimensionMismatch(f"vector of length {x.shape[0]} for a {a.dim}x{a.dim} matrix")
    val = np.vdot(x, a.data @ x)
    assert abs(val.imag) <= 1e-12 * max(np.linalg.norm(a.data), 1e-300) * float(np.vdot(x, x).real) + 1e-300
    return float(val.real)


def operator_norm(a: HermitianMatrix) -> float:
    lam = a.eigenvalues
    return float(max(abs(lam[0]), abs(lam[-1])))


def function_sup_norm(f, a: HermitianMatrix) -> float:
    """sup of |f| over the spectrum of ``a``."""
    values = np.asarray(_evaluator(f)(a.eigenvalues), dtype=float)
    return float(np.max(np.abs(values)))


def spectrum_in(a: HermitianMatrix, interval: Interval, tol: float = TAU_DOM) -> bool:
    lam = a.eigenvalues
    return bool(lam[0] >= interval.lo - tol and lam[-1] <= interval.hi + tol)


def is_psd(a: HermitianMatrix, tol: float = TAU_DOM) -> bool:
    return spectrum_in(a, HALF_LINE, tol)


def loewner_leq(a: HermitianMatrix, b: HermitianMatrix, tol: float = TAU_DOM) -> bool:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim} differ")
    return bool((b - a).eigenvalues[0] >= -tol)


def matrix_to_json(m) -> dict:
    data = m.data if isinstance(m, HermitianMatrix) else np.asarray(m)
    rows, cols = data.shape
    entries = [[float(z.real), float(z.imag)] for z in data.reshape(-1)]
    out = {"dim": rows, "entries": entries}
    if rows != cols:
        out = {"rows": rows, "cols": cols, "entries": entries}
    return out


def complex_matrix_from_json(obj) -> np.ndarray:
    rows = obj.get("rows", obj.get("dim"))
    cols = obj.get("cols", obj.get("dim"))
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise DimensionMismatch(f"{len(entries)} entries for a {rows}x{cols} matrix")
    flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    return as_complex_matrix(flat.reshape(rows, cols))


def hermitian_from_json(obj, tol: float = HERMITIAN_TOL) -> HermitianMatrix:
    return hermitize(complex_matrix_from_json(obj), tol)


def vector_to_json(x) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(x, dtype=np.complex128)]


def vector_from_json(obj) -> np.ndarray:
    return np.array([complex(re, im) for re, im in obj], dtype=np.complex128)
