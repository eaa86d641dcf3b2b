"""Positive linear maps in Kraus form, ``Phi(A) = sum_j V_j^H A V_j``.

Kraus form makes positivity structural; only unitality needs checking.
Every generator here produces completely positive maps, which are a
subclass of the positive maps the inequalities are stated for.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, LengthMismatch, NotIsometry, NotUnital, ShapeMismatch
from .hermitian import (
    HermitianMatrix,
    as_complex_matrix,
    complex_matrix_from_json,
    matrix_to_json,
)

UNITAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class PositiveUnitalMap:
    """Kraus-form map from ``dim_h``-square to ``dim_k``-square matrices.

    ``kraus`` holds an ``(m, dim_h, dim_k)`` stack. ``unital`` records
    whether ``sum V_j^H V_j = I_K`` was verified at construction; family
    members carry ``unital=False``.
    """

    dim_h: int
    dim_k: int
    kraus: np.ndarray
    unital: bool

    def apply_raw(self, m: np.ndarray) -> np.ndarray:
        """Apply to an arbitrary square complex matrix, no hermitization."""
        m = np.asarray(m, dtype=np.complex128)
        if m.shape != (self.dim_h, self.dim_h):
            raise DimensionMismatch(f"map expects {self.dim_h}x{self.dim_h}, got {m.shape}")
        k = self.kraus
        return np.einsum("jab,ac,jcd->bd", k.conj(), m, k)

    def apply(self, a: HermitianMatrix) -> HermitianMatrix:
        return HermitianMatrix._trusted(self.apply_raw(a.data))

    __call__ = apply

    def unit_image(self) -> np.ndarray:
        k = self.kraus
        return np.einsum("jab,jad->bd", k.conj(), k)

    def to_json(self) -> dict:
        return {
            "dim_h": self.dim_h,
            "dim_k": self.dim_k,
            "kraus": [matrix_to_json(v) for v in self.kraus],
            "unital": self.unital,
        }

    @classmethod
    def from_json(cls, obj) -> "PositiveUnitalMap":
        ops = [complex_matrix_from_json(v) for v in obj["kraus"]]
        phi = make_kraus(ops, require_unital=bool(obj.get("unital", True)))
        if phi.dim_h != obj["dim_h"] or phi.dim_k != obj["dim_k"]:
            raise ShapeMismatch("declared dimensions disagree with Kraus operators")
        return phi


@dataclass(frozen=True, eq=False)
class UncheckedMap:
    """A linear map given as a callable, for maps without a Kraus form.

    Positivity is not (and cannot be) verified; unitality is checked
    numerically when ``require_unital`` is set. Intended for experiments
    such as the transpose map.
    """

    dim_h: int
    dim_k: int
    fn: Callable[[np.ndarray], np.ndarray]
    unital: bool = False

    def apply_raw(self, m: np.ndarray) -> np.ndarray:
        m = np.asarray(m, dtype=np.complex128)
        if m.shape != (self.dim_h, self.dim_h):
            raise DimensionMismatch(f"map expects {self.dim_h}x{self.dim_h}, got {m.shape}")
        return np.asarray(self.fn(m), dtype=np.complex128)

    def apply(self, a: HermitianMatrix) -> HermitianMatrix:
        return HermitianMatrix(self.apply_raw(a.data), tol=1e-8)

    __call__ = apply

    def unit_image(self) -> np.ndarray:
        return self.apply_raw(np.eye(self.dim_h, dtype=np.complex128))


def unchecked_map(fn, dim_h: int, dim_k: int, require_unital: bool = True) -> UncheckedMap:
    phi = UncheckedMap(dim_h, dim_k, fn, unital=require_unital)
    if require_unital:
        _check_unital(phi.unit_image(), dim_k)
    return phi


def transpose_map(n: int) -> UncheckedMap:
    """Positive, unital, not completely positive."""
    return unchecked_map(lambda m: m.T.copy(), n, n)


def _check_unital(image: np.ndarray, dim_k: int):
    err = np.linalg.norm(image - np.eye(dim_k))
    if err > UNITAL_TOL * dim_k:
        raise NotUnital(f"||Phi(I) - I||_F = {err:.3g}")


def make_kraus(ops: Sequence, require_unital: bool = True) -> PositiveUnitalMap:
    if len(ops) == 0:
        raise ShapeMismatch("at least one Kraus operator is required")
    mats = [as_complex_matrix(v) for v in ops]
    shape = mats[0].shape
    if any(v.shape != shape for v in mats):
        raise ShapeMismatch(f"Kraus operators have differing shapes {[v.shape for v in mats]}")
    stack = np.stack(mats)
    stack.setflags(write=False)
    phi = PositiveUnitalMap(shape[0], shape[1], stack, bool(require_unital))
    if require_unital:
        _check_unital(phi.unit_image(), phi.dim_k)
    return phi


def make_identity(n: int) -> PositiveUnitalMap:
    return make_kraus([np.eye(n)])


def make_conjugation(u) -> PositiveUnitalMap:
    """``Phi(A) = U^H A U`` for a unitary ``U``."""
    return make_kraus([u])


def make_pinching(n: int) -> PositiveUnitalMap:
    """Projection onto the diagonal."""
    ops = []
    for i in range(n):
        p = np.zeros((n, n))
        p[i, i] = 1.0
        ops.append(p)
    return make_kraus(ops)


def make_trace_average(n: int) -> PositiveUnitalMap:
    """``Phi(A) = (tr A / n) I`` from the n^2 operators ``E_ij / sqrt(n)``."""
    if n < 1:
        raise ValueError("n must be positive")
    ops = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n))
            e[i, j] = 1.0 / np.sqrt(n)
            ops.append(e)
    return make_kraus(ops)


def make_compression(v) -> PositiveUnitalMap:
    """``Phi(A) = V^H A V`` for an isometry ``V`` (n_H x n_K, ``V^H V = I_K``)."""
    v = as_complex_matrix(v)
    err = np.linalg.norm(v.conj().T @ v - np.eye(v.shape[1]))
    if err > UNITAL_TOL:
        raise NotIsometry(f"||V^H V - I||_F = {err:.3g}")
    return make_kraus([v])


def apply_map(phi, a: HermitianMatrix) -> HermitianMatrix:
    return phi.apply(a)


@dataclass(frozen=True, eq=False)
class MapFamily:
    """Positive maps ``Phi_j`` with ``sum_j Phi_j(I_H) = I_K``."""

    maps: tuple

    def __post_init__(self):
        if not self.maps:
            raise LengthMismatch("a map family needs at least one map")
        dims = {(m.dim_h, m.dim_k) for m in self.maps}
        if len(dims) != 1:
            raise ShapeMismatch(f"family members disagree on dimensions: {sorted(dims)}")
        total = sum(m.unit_image() for m in self.maps)
        _check_unital(total, self.dim_k)

    @property
    def dim_h(self) -> int:
        return self.maps[0].dim_h

    @property
    def dim_k(self) -> int:
        return self.maps[0].dim_k

    def __len__(self):
        return len(self.maps)

    def to_json(self) -> list:
        return [m.to_json() for m in self.maps]

    @classmethod
    def from_json(cls, obj) -> "MapFamily":
        maps = []
        for entry in obj:
            ops = [complex_matrix_from_json(v) for v in entry["kraus"]]
            maps.append(make_kraus(ops, require_unital=False))
        return cls(tuple(maps))


def make_family(maps: Sequence) -> MapFamily:
    return MapFamily(tuple(maps))


def family_apply_raw(fam: MapFamily, ms: Sequence[np.ndarray]) -> np.ndarray:
    if len(ms) != len(fam.maps):
        raise LengthMismatch(f"{len(ms)} operators for {len(fam.maps)} maps")
    return sum(phi.apply_raw(m) for phi, m in zip(fam.maps, ms))


def family_apply(fam: MapFamily, ops: Sequence[HermitianMatrix]) -> HermitianMatrix:
    """``sum_j Phi_j(A_j)``."""
    if len(ops) != len(fam.maps):
        raise LengthMismatch(f"{len(ops)} operators for {len(fam.maps)} maps")
    return HermitianMatrix._trusted(family_apply_raw(fam, [a.data for a in ops]))


def as_family(phi) -> MapFamily:
    """View a single unital map as a one-member family."""
    if isinstance(phi, MapFamily):
        return phi
    return MapFamily((phi,))


def map_from_json(obj):
    """Decode either a single map object or a family list."""
    if isinstance(obj, list):
        return MapFamily.from_json(obj)
    return PositiveUnitalMap.from_json(obj)
