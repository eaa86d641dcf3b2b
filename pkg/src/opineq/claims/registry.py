"""Registry of every claim with its hypotheses, instance shape and evaluator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import DomainViolation, HypothesisViolation, NonPositiveFunction, UnknownClaim
from ..hermitian import Interval
from . import operator as op
from .instance import Instance, TermBreakdown
from .operator import Hypotheses
from .scalar import scalar_gg_popoviciu, scalar_hlawka, scalar_popoviciu

# Instance shapes, used by the generators:
#   scalar3       three reals
#   single        A, one unital map, unit vector
#   triple        A, B, D, one unital map, unit vector
#   family-single A_j, map family, unit vector
#   family-triple A_j, B_j, D_j, map family, unit vector
#   norm-single   A, one unital map (no vector)
#   hlawka        A, B, C selfadjoint, one unital map, unit vector
#   norm-triple   A, B, C, one unital map (no vector)


@dataclass(frozen=True)
class ClaimInfo:
    claim_id: str
    anchor: str
    hypothesis: str
    shape: str
    evaluator: Callable[[Instance], TermBreakdown]
    default_f: str
    default_interval: Interval
    note: str = ""

    def describe(self) -> dict:
        out = {
            "claim": self.claim_id,
            "anchor": self.anchor,
            "hypothesis": self.hypothesis,
            "shape": self.shape,
            "default_f": self.default_f,
            "default_interval": self.default_interval.to_json(),
        }
        if self.note:
            out["note"] = self.note
        return out


def _scalar_args(inst: Instance, h: Hypotheses):
    ok = inst.scalars is not None and len(inst.scalars) == 3
    h.check("three scalars given", ok)
    h.require()
    return inst.scalars


def _eval_eq15(inst: Instance) -> TermBreakdown:
    h = Hypotheses("EQ1.5")
    x, y, z = _scalar_args(inst, h)
    f = op._fn_present(h, inst)
    forward = op._direction(h, f, "convex", "concave")
    h.check("x, y, z in the domain of f", all(f.domain.contains(v) for v in (x, y, z)))
    h.require()
    br = scalar_popoviciu(x, y, z, f, concave=not forward)
    br.hypothesis_report = list(h.items)
    return br


def _eval_hlawka_scalar(inst: Instance) -> TermBreakdown:
    h = Hypotheses("HLAWKA-SCALAR")
    x, y, z = _scalar_args(inst, h)
    br = scalar_hlawka(x, y, z)
    br.hypothesis_report = list(h.items)
    return br


def _eval_gg(inst: Instance) -> TermBreakdown:
    h = Hypotheses("GG-POP")
    x, y, z = _scalar_args(inst, h)
    f = op._fn_present(h, inst)
    h.check("x, y, z > 0", min(x, y, z) > 0)
    h.check("f GG-convex", f.has("gg_convex"))
    h.require()
    try:
        br = scalar_gg_popoviciu(x, y, z, f)
    except (DomainViolation, NonPositiveFunction) as exc:
        raise HypothesisViolation("GG-POP", [str(exc)]) from None
    br.hypothesis_report = list(h.items)
    return br


def _bohr_super(inst):
    return op.evaluate_bohr_norm(inst, "super")


def _bohr_sub(inst):
    return op.evaluate_bohr_norm(inst, "sub")


def _convex(claim_id):
    def run(inst):
        return op.evaluate_popoviciu_convex(inst, claim_id)
    run.__name__ = f"evaluate_popoviciu_convex_{claim_id}"
    return run


PSD = Interval(0.0, 4.0)
SYM = Interval(-3.0, 3.0)

_CLAIMS = [
    ClaimInfo("EQ1.5", "scalar Popoviciu inequality",
              "f convex (concave: reversed); x, y, z in dom f", "scalar3",
              _eval_eq15, "pow:2", Interval(0.0, 5.0)),
    ClaimInfo("HLAWKA-SCALAR", "scalar Hlawka inequality",
              "none", "scalar3", _eval_hlawka_scalar, "abs", Interval(-5.0, 5.0)),
    ClaimInfo("GG-POP", "GG-convex Popoviciu inequality",
              "x, y, z > 0; f positive and GG-convex", "scalar3",
              _eval_gg, "exp", Interval(0.1, 5.0)),
    ClaimInfo("THM1", "operator Jensen inequality for superquadratic functions",
              "A PSD; Phi unital; f superquadratic (subquadratic: reversed); ||x|| = 1", "single",
              op.evaluate_jensen_superquadratic, "pow:3", PSD),
    ClaimInfo("THM2.1", "operator Popoviciu inequality for superquadratic functions",
              "A,B,D PSD; Phi unital; f superquadratic", "triple",
              op.evaluate_popoviciu_superquadratic, "pow:3", PSD),
    ClaimInfo("COR1", "operator Popoviciu inequality for subquadratic functions",
              "A,B,D PSD; Phi unital; f subquadratic", "triple",
              op.evaluate_popoviciu_subquadratic, "pow:1.5", PSD),
    ClaimInfo("COR2", "refined operator Jensen inequality (with f(0))",
              "A PSD; Phi unital; f superquadratic (subquadratic: reversed); ||x|| = 1", "single",
              op.evaluate_jensen_refined, "pow:3", PSD),
    ClaimInfo("BOHR-SUPER", "Bohr-type norm inequality, superquadratic part",
              "A PSD; Phi unital; f superquadratic", "norm-single",
              _bohr_super, "pow:2", PSD),
    ClaimInfo("BOHR-SUB", "Bohr-type norm inequality, subquadratic part",
              "A PSD; Phi unital; f subquadratic", "norm-single",
              _bohr_sub, "pow:1.5", PSD),
    ClaimInfo("COR5-POP", "multi-map operator Popoviciu inequality",
              "A_j,B_j,D_j PSD; sum_j Phi_j(1) = 1; f superquadratic", "family-triple",
              op.evaluate_multimap_popoviciu, "pow:3", PSD,
              note="inner products written with per-member vectors are read with the single vector u"),
    ClaimInfo("COR5-JENSEN", "multi-map refined Jensen inequality",
              "A_j PSD; sum_j Phi_j(1) = 1; f superquadratic (subquadratic: reversed)", "family-single",
              op.evaluate_multimap_jensen, "pow:3", PSD,
              note="stated with >= (<=) under a superquadratic hypothesis; read as >= for "
                   "superquadratic and <= for subquadratic f"),
    ClaimInfo("PRP1", "convex operator Popoviciu inequality via superquadraticity",
              "A,B,D PSD; Phi unital; f superquadratic and nonnegative", "triple",
              _convex("PRP1"), "pow:2", PSD),
    ClaimInfo("PRP2", "operator Popoviciu inequality for the derivative",
              "A,B,D PSD; Phi unital; f(0) = f'(0) = 0; f' convex (concave: reversed)", "triple",
              op.evaluate_popoviciu_derivative, "pow:3", PSD),
    ClaimInfo("PRP3", "operator Popoviciu inequality for convex g with g(0) = 0",
              "A,B,D PSD; Phi unital; g convex (concave: reversed); g(0) = 0", "triple",
              _convex("PRP3"), "pow:2", PSD),
    ClaimInfo("THM3", "operator Popoviciu inequality for convex functions on [gamma, Gamma]",
              "spectra in [gamma, Gamma]; Phi unital (or a unital family); f convex (concave: reversed)",
              "triple", _convex("THM3"), "abs", SYM),
    ClaimInfo("HLAWKA-OP", "operator Hlawka inequality",
              "A,B,C selfadjoint; Phi unital; ||x|| = 1", "hlawka",
              op.evaluate_hlawka_operator, "abs", SYM),
    ClaimInfo("HLAWKA-NORM", "Hlawka norm inequality",
              "A,B,C selfadjoint; Phi unital", "norm-triple",
              op.evaluate_hlawka_norm, "abs", SYM),
    ClaimInfo("POP-NORM", "Popoviciu extension of the Hlawka norm inequality",
              "A,B,C PSD; Phi unital; g convex and increasing", "norm-triple",
              op.evaluate_popoviciu_norm, "pow:2", PSD),
]

REGISTRY = {c.claim_id: c for c in _CLAIMS}


def list_claims() -> list:
    return list(_CLAIMS)


def get_claim(claim_id: str) -> ClaimInfo:
    try:
        return REGISTRY[claim_id]
    except KeyError:
        raise UnknownClaim(claim_id) from None


def evaluate(claim_id: str, inst: Instance) -> TermBreakdown:
    return get_claim(claim_id).evaluator(inst)
