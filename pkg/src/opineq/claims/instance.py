"""Instances a claim is evaluated on, and the result records."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..functions import ScalarFunction, parse_function
from ..hermitian import (
    HALF_LINE,
    HermitianMatrix,
    Interval,
    hermitian_from_json,
    matrix_to_json,
    vector_from_json,
    vector_to_json,
)
from ..maps import MapFamily, PositiveUnitalMap, map_from_json

ABS_TOL = 1e-8
REL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Instance:
    """Operators, map (or map family), unit vector, function and window.

    ``operators`` maps a name (``A``, ``B``, ``D`` or ``C``) to a tuple of
    matrices, one per family member; single-map instances use 1-tuples.
    Scalar claims use ``scalars`` instead of operators.
    """

    claim: Optional[str] = None
    operators: dict = field(default_factory=dict)
    phi: object = None
    x: Optional[np.ndarray] = None
    f: Optional[ScalarFunction] = None
    interval: Interval = HALF_LINE
    scalars: Optional[tuple] = None

    @classmethod
    def make(cls, claim=None, *, phi=None, x=None, f=None, interval=HALF_LINE, scalars=None, **ops):
        operators = {}
        for name, val in ops.items():
            if isinstance(val, HermitianMatrix):
                val = (val,)
            operators[name] = tuple(val)
        if isinstance(f, str):
            f = parse_function(f)
        if x is not None:
            x = np.asarray(x, dtype=np.complex128).reshape(-1)
            x.setflags(write=False)
        if scalars is not None:
            scalars = tuple(float(s) for s in scalars)
        return cls(claim, operators, phi, x, f, interval, scalars)

    def op(self, name: str) -> HermitianMatrix:
        """The single operator under ``name`` (single-map instances)."""
        ops = self.operators[name]
        if len(ops) != 1:
            raise ValueError(f"operator {name} has {len(ops)} members; expected one")
        return ops[0]

    def replace(self, **changes) -> "Instance":
        import dataclasses

        return dataclasses.replace(self, **changes)

    def to_json(self) -> dict:
        out: dict = {"claim": self.claim}
        if self.scalars is not None:
            out["scalars"] = list(self.scalars)
        if self.operators:
            ops = {}
            for name, mats in self.operators.items():
                enc = [matrix_to_json(m) for m in mats]
                ops[name] = enc[0] if isinstance(self.phi, PositiveUnitalMap) and len(enc) == 1 else enc
            out["operators"] = ops
        if isinstance(self.phi, MapFamily):
            out["family"] = self.phi.to_json()
        elif self.phi is not None:
            out["map"] = self.phi.to_json()
        if self.x is not None:
            out["x"] = vector_to_json(self.x)
        if self.f is not None:
            out["f"] = self.f.name
        out["interval"] = self.interval.to_json()
        return out

    @classmethod
    def from_json(cls, obj) -> "Instance":
        phi = None
        if "family" in obj:
            phi = map_from_json(obj["family"])
        elif "map" in obj:
            phi = map_from_json(obj["map"])
        operators = {}
        for name, enc in obj.get("operators", {}).items():
            items = enc if isinstance(enc, list) else [enc]
            operators[name] = tuple(hermitian_from_json(m) for m in items)
        x = None
        if obj.get("x") is not None:
            x = vector_from_json(obj["x"])
            x.setflags(write=False)
        f = parse_function(obj["f"]) if obj.get("f") else None
        interval = Interval.from_json(obj["interval"]) if "interval" in obj else HALF_LINE
        scalars = tuple(float(s) for s in obj["scalars"]) if "scalars" in obj else None
        return cls(obj.get("claim"), operators, phi, x, f, interval, scalars)


def violation_threshold(lhs: float, rhs: float, abs_tol: float = ABS_TOL, rel_tol: float = REL_TOL) -> float:
    scale = max(abs(lhs), abs(rhs), 1.0)
    return -(abs_tol + rel_tol * scale)


@dataclass
class TermBreakdown:
    """Named terms of both sides; ``gap = lhs - rhs`` and the claim asserts ``gap >= 0``."""

    claim_id: str
    lhs_terms: list
    rhs_terms: list
    hypothesis_report: list = field(default_factory=list)
    lhs: float = field(init=False)
    rhs: float = field(init=False)
    gap: float = field(init=False)

    def __post_init__(self):
        self.lhs_terms = [(str(n), float(v)) for n, v in self.lhs_terms]
        self.rhs_terms = [(str(n), float(v)) for n, v in self.rhs_terms]
        self.lhs = math.fsum(v for _, v in self.lhs_terms)
        self.rhs = math.fsum(v for _, v in self.rhs_terms)
        self.gap = self.lhs - self.rhs

    @property
    def scale(self) -> float:
        return max(abs(self.lhs), abs(self.rhs), 1.0)

    def violated(self, abs_tol: float = ABS_TOL, rel_tol: float = REL_TOL) -> bool:
        return self.gap < violation_threshold(self.lhs, self.rhs, abs_tol, rel_tol)

    def term(self, name: str) -> float:
        for n, v in self.lhs_terms + self.rhs_terms:
            if n == name:
                return v
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "claim": self.claim_id,
            "lhs_terms": [{"name": n, "value": v} for n, v in self.lhs_terms],
            "rhs_terms": [{"name": n, "value": v} for n, v in self.rhs_terms],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "hypotheses": [{"name": n, "ok": ok} for n, ok in self.hypothesis_report],
        }


@dataclass
class StepRecord:
    label: str
    lhs: float
    rhs: float
    dropped: Optional[float] = None

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    @property
    def scale(self) -> float:
        return max(abs(self.lhs), abs(self.rhs), 1.0)

    def to_json(self) -> dict:
        out = {"step": self.label, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack}
        if self.dropped is not None:
            out["dropped"] = self.dropped
        return out


@dataclass
class StepTrace:
    """Replay of the superquadratic Popoviciu argument on one instance.

    ``s`` are the three pairwise-mean quadratic forms, ``C_s`` their support
    constants and ``C`` the minimum. ``t_halves`` and ``t_sixths`` are the
    coefficient vectors the minimum constant multiplies; each sums to zero.
    """

    claim_id: str
    steps: list
    s: tuple
    C_s: tuple
    C: float
    t_halves: tuple
    t_sixths: tuple

    def step(self, label: str) -> StepRecord:
        for st in self.steps:
            if st.label == label:
                return st
        raise KeyError(label)

    @property
    def t_sums(self) -> tuple:
        return (math.fsum(self.t_halves), math.fsum(self.t_sixths))

    def to_json(self) -> dict:
        return {
            "claim": self.claim_id,
            "s": list(self.s),
            "C_s": list(self.C_s),
            "C": self.C,
            "t_halves": list(self.t_halves),
            "t_sixths": list(self.t_sixths),
            "t_sums": list(self.t_sums),
            "steps": [st.to_json() for st in self.steps],
        }

    def table(self) -> str:
        rows = [("step", "lhs", "rhs", "slack", "note")]
        for st in self.steps:
            note = f"minC drop {st.dropped:+.6g}" if st.dropped is not None else ""
            rows.append((st.label, f"{st.lhs:.12g}", f"{st.rhs:.12g}", f"{st.slack:+.6g}", note))
        widths = [max(len(r[i]) for r in rows) for i in range(5)]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)
