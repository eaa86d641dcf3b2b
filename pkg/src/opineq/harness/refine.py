"""Greedy local search that pushes a claim's gap downward."""

from __future__ import annotations

import math

import numpy as np

from ..claims.instance import Instance
from ..claims.registry import get_claim
from ..errors import HypothesisViolation
from ..hermitian import Interval
from .generators import _gaussian, _orthonormalize, from_spectrum

MIN_STEP = 1e-6


def _width(iv: Interval, values) -> float:
    if math.isinf(iv.lo) or math.isinf(iv.hi):
        return max(1.0, float(np.max(np.abs(values))) if len(values) else 1.0)
    return max(iv.hi - iv.lo, 1e-12)


def _clip(values, iv: Interval):
    return np.clip(values, iv.lo, iv.hi)


class _State:
    """Instance held as (eigenvalues, eigenvectors) per operator member."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.spectra = {
            name: [(m.spectral().eigenvalues.copy(), m.spectral().eigenvectors.copy()) for m in mats]
            for name, mats in inst.operators.items()
        }

    def moves(self) -> list:
        out = []
        if self.spectra:
            out.append("eig")
            if any(lam.size > 1 for mats in self.spectra.values() for lam, _ in mats):
                out.append("unitary")
        if self.inst.x is not None and self.inst.x.size > 1:
            out.append("vector")
        if self.inst.scalars is not None:
            out.append("scalar")
        return out

    def propose(self, rng: np.random.Generator, move: str, step: float) -> Instance:
        inst = self.inst
        iv = inst.interval
        if move == "scalar":
            vals = np.array(inst.scalars, dtype=float)
            k = int(rng.integers(vals.size))
            vals[k] += step * _width(iv, vals) * rng.standard_normal()
            return inst.replace(scalars=tuple(float(v) for v in _clip(vals, iv)))
        if move == "vector":
            x = inst.x + step * _gaussian(rng, inst.x.size, 1).reshape(-1)
            x = x / np.linalg.norm(x)
            x.setflags(write=False)
            return inst.replace(x=x)
        names = sorted(self.spectra)
        name = names[int(rng.integers(len(names)))]
        members = self.spectra[name]
        j = int(rng.integers(len(members)))
        lam, u = members[j]
        if move == "eig":
            lam = lam.copy()
            k = int(rng.integers(lam.size))
            lam[k] += step * _width(iv, lam) * rng.standard_normal()
            lam = _clip(lam, iv)
        else:
            u = _orthonormalize(u + step * _gaussian(rng, *u.shape))
        ops = dict(inst.operators)
        mats = list(ops[name])
        mats[j] = from_spectrum(lam, u)
        ops[name] = tuple(mats)
        return inst.replace(operators=ops)


def refine_counterexample(claim_id: str, start: Instance, budget: int, seed: int = 0,
                          step: float = 0.25) -> Instance:
    """Spend ``budget`` evaluations on improving moves; return the best instance.

    Candidates are projected back onto the spectrum window (eigenvalue
    clipping) and the unit sphere, and any candidate that still fails the
    claim's hypotheses is rejected. A rejected or non-improving move halves
    the step; an accepted one grows it back towards the initial size.
    """
    claim = get_claim(claim_id)
    best = start
    best_gap = claim.evaluator(start).gap
    state = _State(best)
    moves = state.moves()
    if budget <= 0 or not moves:
        return start
    rng = np.random.default_rng(seed)
    h = step
    for _ in range(budget):
        move = moves[int(rng.integers(len(moves)))]
        cand = state.propose(rng, move, h)
        try:
            gap = claim.evaluator(cand).gap
        except HypothesisViolation:
            gap = math.inf
        if gap < best_gap:
            best, best_gap = cand, gap
            state = _State(best)
            h = min(step, 2.0 * h)
        else:
            h *= 0.5
            if h < MIN_STEP:
                h = step
    return best
