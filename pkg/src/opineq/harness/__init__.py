"""Random instance generation, verification campaigns and witness refinement."""

from .campaign import (
    CampaignConfig,
    CampaignReport,
    TrialRecord,
    build_instance,
    histogram,
    run_campaign,
    worker_count,
)
from .generators import (
    gen_family,
    gen_hermitian,
    gen_instance,
    gen_isometry,
    gen_map,
    gen_unit_vector,
    gen_unitary,
    parse_map_kind,
    trial_rng,
)
from .refine import refine_counterexample

__all__ = [
    "CampaignConfig", "CampaignReport", "TrialRecord", "build_instance", "histogram",
    "run_campaign", "worker_count",
    "gen_family", "gen_hermitian", "gen_instance", "gen_isometry", "gen_map",
    "gen_unit_vector", "gen_unitary", "parse_map_kind", "trial_rng",
    "refine_counterexample",
]
