from .instance import Instance, StepRecord, StepTrace, TermBreakdown, violation_threshold
from .operator import (
    evaluate_bohr_norm,
    evaluate_hlawka_norm,
    evaluate_hlawka_operator,
    evaluate_jensen_refined,
    evaluate_jensen_superquadratic,
    evaluate_multimap_jensen,
    evaluate_multimap_popoviciu,
    evaluate_popoviciu_convex,
    evaluate_popoviciu_derivative,
    evaluate_popoviciu_norm,
    evaluate_popoviciu_subquadratic,
    evaluate_popoviciu_superquadratic,
)
from .registry import REGISTRY, ClaimInfo, evaluate, get_claim, list_claims
from .scalar import scalar_gg_popoviciu, scalar_hlawka, scalar_popoviciu
from .trace import decomposition_residual, trace_popoviciu

__all__ = [
    "Instance", "StepRecord", "StepTrace", "TermBreakdown", "violation_threshold",
    "evaluate_bohr_norm", "evaluate_hlawka_norm", "evaluate_hlawka_operator",
    "evaluate_jensen_refined", "evaluate_jensen_superquadratic", "evaluate_multimap_jensen",
    "evaluate_multimap_popoviciu", "evaluate_popoviciu_convex", "evaluate_popoviciu_derivative",
    "evaluate_popoviciu_norm", "evaluate_popoviciu_subquadratic",
    "evaluate_popoviciu_superquadratic",
    "REGISTRY", "ClaimInfo", "evaluate", "get_claim", "list_claims",
    "scalar_gg_popoviciu", "scalar_hlawka", "scalar_popoviciu",
    "decomposition_residual", "trace_popoviciu",
]
