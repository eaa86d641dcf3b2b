"""Seeded random operators, vectors, maps and claim instances."""

from __future__ import annotations

import math
import re

import numpy as np

from ..errors import BadParameter, GenerationFailure
from ..functions import parse_function
from ..hermitian import HermitianMatrix, Interval, apply_function
from ..maps import (
    MapFamily,
    PositiveUnitalMap,
    make_compression,
    make_conjugation,
    make_identity,
    make_kraus,
    make_pinching,
    make_trace_average,
)

COND_LIMIT = 1e8
MAX_RETRIES = 10

MAP_KINDS = ("identity", "unitary", "pinching", "trace_average", "random_kraus", "compression", "family")


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial, keyed on (master seed, trial index)."""
    return np.random.default_rng(np.random.SeedSequence(int(master_seed), spawn_key=(int(trial),)))


def _gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2.0)


def _orthonormalize(g: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    phases = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return q * phases


def gen_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """QR of a complex Gaussian with the phases of diag(R) moved into Q."""
    return _orthonormalize(_gaussian(rng, n, n))


def gen_isometry(rng: np.random.Generator, n_h: int, n_k: int) -> np.ndarray:
    return _orthonormalize(_gaussian(rng, n_h, n_k))


def _finite(interval: Interval):
    if math.isinf(interval.lo) or math.isinf(interval.hi):
        raise BadParameter(f"cannot sample from unbounded interval [{interval.lo}, {interval.hi}]")


def from_spectrum(eigenvalues, u: np.ndarray) -> HermitianMatrix:
    lam = np.asarray(eigenvalues, dtype=float)
    return HermitianMatrix._trusted((u * lam) @ u.conj().T)


def gen_hermitian(rng: np.random.Generator, dim: int, interval: Interval) -> HermitianMatrix:
    """Eigenvalues uniform on the interval, rotated by a random unitary."""
    _finite(interval)
    lam = rng.uniform(interval.lo, interval.hi, size=dim)
    if dim == 1:
        return from_spectrum(lam, np.ones((1, 1), dtype=np.complex128))
    return from_spectrum(lam, gen_unitary(rng, dim))


def gen_unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    x = _gaussian(rng, dim, 1).reshape(-1)
    x = x / np.linalg.norm(x)
    x.setflags(write=False)
    return x


def parse_map_kind(kind: str):
    """``"random_kraus:3"`` or ``"random_kraus(3)"`` -> ("random_kraus", 3)."""
    m = re.fullmatch(r"\s*([a-z_]+)\s*(?:[:(]\s*(\d+)\s*\)?)?\s*", kind)
    if not m or m.group(1) not in MAP_KINDS:
        raise BadParameter(f"unknown map kind {kind!r}")
    name, arg = m.group(1), m.group(2)
    if name in ("random_kraus", "family"):
        arg = int(arg) if arg is not None else (3 if name == "random_kraus" else 2)
        if arg < 1:
            raise BadParameter(f"{kind!r}: count must be positive")
        return name, arg
    if arg is not None:
        raise BadParameter(f"{kind!r} takes no argument")
    return name, None


def _normalized_kraus(rng, blocks: int, n_h: int, n_k: int):
    """Gaussian blocks W_i right-normalized by S^{-1/2}, S = sum W_i^H W_i."""
    for _ in range(MAX_RETRIES):
        ws = [_gaussian(rng, n_h, n_k) for _ in range(blocks)]
        s = HermitianMatrix._trusted(sum(w.conj().T @ w for w in ws))
        lam = s.eigenvalues
        if lam[0] <= 0 or lam[-1] / lam[0] > COND_LIMIT:
            continue
        root = apply_function(lambda t: 1.0 / np.sqrt(t), s).data
        return [w @ root for w in ws]
    raise GenerationFailure(f"Gram matrix ill-conditioned after {MAX_RETRIES} draws")


def gen_map(rng: np.random.Generator, kind: str, dim_h: int, dim_k: int | None = None) -> PositiveUnitalMap:
    name, arg = parse_map_kind(kind)
    if name == "family":
        raise BadParameter("use gen_family for family kinds")
    if name == "compression":
        n_k = dim_k if dim_k is not None else int(rng.integers(1, dim_h + 1))
        return make_compression(gen_isometry(rng, dim_h, n_k))
    if name == "random_kraus":
        n_k = dim_k if dim_k is not None else dim_h
        return make_kraus(_normalized_kraus(rng, arg, dim_h, n_k))
    if dim_k not in (None, dim_h):
        raise BadParameter(f"{name} maps are square (dim_k = dim_h)")
    if name == "identity":
        return make_identity(dim_h)
    if name == "unitary":
        return make_conjugation(gen_unitary(rng, dim_h))
    if name == "pinching":
        return make_pinching(dim_h)
    return make_trace_average(dim_h)


def gen_family(rng: np.random.Generator, k: int, dim_h: int, dim_k: int | None = None,
               kraus_per_map: int = 2) -> MapFamily:
    """k positive maps normalized jointly so that sum_j Phi_j(I) = I."""
    n_k = dim_h if dim_k is None else dim_k
    ops = _normalized_kraus(rng, k * kraus_per_map, dim_h, n_k)
    maps = [make_kraus(ops[j * kraus_per_map:(j + 1) * kraus_per_map], require_unital=False)
            for j in range(k)]
    return MapFamily(tuple(maps))


SHAPE_OPERATORS = {
    "single": ("A",),
    "norm-single": ("A",),
    "family-single": ("A",),
    "triple": ("A", "B", "D"),
    "family-triple": ("A", "B", "D"),
    "hlawka": ("A", "B", "C"),
    "norm-triple": ("A", "B", "C"),
    "scalar3": (),
}
FAMILY_SHAPES = ("family-single", "family-triple")
VECTOR_SHAPES = ("single", "triple", "family-single", "family-triple", "hlawka")


def gen_instance(claim, rng: np.random.Generator, dims, map_kinds, functions, interval: Interval,
                 windows=None):
    """One random instance of the claim's shape.

    Draw order is fixed: dimension, map kind, function, map, operators
    (name by name, member by member), vector.
    """
    from ..claims.instance import Instance

    dim = int(dims[int(rng.integers(len(dims)))])
    kind = map_kinds[int(rng.integers(len(map_kinds)))]
    fspec = functions[int(rng.integers(len(functions)))] if functions else None
    f = parse_function(fspec) if fspec else None
    window = (windows or {}).get(fspec, interval)
    if claim.shape == "scalar3":
        _finite(window)
        scalars = tuple(float(v) for v in rng.uniform(window.lo, window.hi, size=3))
        return Instance(claim.claim_id, {}, None, None, f, window, scalars)

    name, arg = parse_map_kind(kind)
    if claim.shape in FAMILY_SHAPES:
        if name == "family":
            phi = gen_family(rng, arg, dim)
        else:
            phi = MapFamily((gen_map(rng, kind, dim),))
        members = len(phi.maps)
    else:
        phi = gen_map(rng, kind, dim)
        members = 1
    operators = {}
    for op_name in SHAPE_OPERATORS[claim.shape]:
        operators[op_name] = tuple(gen_hermitian(rng, dim, window) for _ in range(members))
    x = gen_unit_vector(rng, phi.dim_k) if claim.shape in VECTOR_SHAPES else None
    return Instance(claim.claim_id, operators, phi, x, f, window, None)
