"""Seeded verification campaigns.

Every trial draws from its own stream ``trial_rng(master_seed, i)``, so a
trial's instance depends only on the config and its index. Workers return
small per-trial records; the parent sorts them by index and rebuilds the
worst instances from their seeds, which keeps the report identical for
any worker count.
"""

from __future__ import annotations

import bisect
import csv
import io
import json
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from ..claims.instance import ABS_TOL, REL_TOL, Instance, violation_threshold
from ..claims.registry import ClaimInfo, get_claim
from ..errors import BadParameter, GenerationFailure, HypothesisViolation
from ..functions import parse_function
from ..hermitian import Interval
from .generators import FAMILY_SHAPES, gen_instance, parse_map_kind, trial_rng

HIST_EDGES = (-1.0, -1e-2, -1e-4, -1e-6, -1e-8, 1e-8, 1e-6, 1e-4, 1e-2, 1.0)
TOP_K = 5


def _interval(obj) -> Interval:
    if isinstance(obj, Interval):
        return obj
    return Interval.from_json(list(obj))


@dataclass
class CampaignConfig:
    """What to sample and how to judge it.

    ``functions`` and ``map_kinds`` are lists; each trial picks one of each
    uniformly. ``windows`` optionally gives a function its own spectrum
    interval (keyed by the function spec string). ``None`` for
    ``functions`` or ``interval`` means the claim's defaults.
    """

    claim_id: str
    trials: int
    dims: tuple = (1, 2, 4)
    map_kinds: tuple = ("random_kraus:3",)
    functions: Optional[tuple] = None
    interval: Optional[Interval] = None
    master_seed: int = 0
    abs_tol: float = ABS_TOL
    rel_tol: float = REL_TOL
    windows: dict = field(default_factory=dict)

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if isinstance(self.map_kinds, str):
            self.map_kinds = (self.map_kinds,)
        self.map_kinds = tuple(self.map_kinds)
        if isinstance(self.functions, str):
            self.functions = (self.functions,)
        if self.functions is not None:
            self.functions = tuple(self.functions)
        if self.interval is not None:
            self.interval = _interval(self.interval)
        self.windows = {k: _interval(v) for k, v in self.windows.items()}
        self.master_seed = int(self.master_seed)

    def validate(self) -> ClaimInfo:
        claim = get_claim(self.claim_id)
        if self.trials < 1:
            raise BadParameter(f"trials must be at least 1 (got {self.trials})")
        if not self.dims or min(self.dims) < 1:
            raise BadParameter(f"dimensions must be at least 1 (got {list(self.dims)})")
        if not self.map_kinds:
            raise BadParameter("at least one map kind is required")
        for kind in self.map_kinds:
            name, _ = parse_map_kind(kind)
            if name == "family" and claim.shape not in FAMILY_SHAPES:
                raise BadParameter(f"claim {claim.claim_id} takes a single map, not {kind!r}")
        for spec in self.resolved_functions():
            parse_function(spec)
        for iv in (self.resolved_interval(), *self.windows.values()):
            if math.isinf(iv.lo) or math.isinf(iv.hi):
                raise BadParameter("campaign intervals must be bounded")
        return claim

    def resolved_functions(self) -> tuple:
        if self.functions is not None:
            return self.functions
        return (get_claim(self.claim_id).default_f,)

    def resolved_interval(self) -> Interval:
        if self.interval is not None:
            return self.interval
        return get_claim(self.claim_id).default_interval

    def to_json(self) -> dict:
        return {
            "claim": self.claim_id,
            "trials": self.trials,
            "dims": list(self.dims),
            "map_kinds": list(self.map_kinds),
            "functions": None if self.functions is None else list(self.functions),
            "interval": None if self.interval is None else self.interval.to_json(),
            "windows": {k: v.to_json() for k, v in sorted(self.windows.items())},
            "master_seed": self.master_seed,
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
        }

    @classmethod
    def from_json(cls, obj) -> "CampaignConfig":
        iv = obj.get("interval")
        return cls(
            claim_id=obj["claim"],
            trials=int(obj["trials"]),
            dims=tuple(obj.get("dims", (1, 2, 4))),
            map_kinds=tuple(obj.get("map_kinds", ("random_kraus:3",))),
            functions=None if obj.get("functions") is None else tuple(obj["functions"]),
            interval=None if iv is None else Interval.from_json(iv),
            master_seed=int(obj.get("master_seed", 0)),
            abs_tol=float(obj.get("abs_tol", ABS_TOL)),
            rel_tol=float(obj.get("rel_tol", REL_TOL)),
            windows={k: Interval.from_json(v) for k, v in obj.get("windows", {}).items()},
        )


@dataclass(frozen=True)
class TrialRecord:
    index: int
    gap: Optional[float]
    lhs: Optional[float]
    rhs: Optional[float]
    violated: bool
    skipped_reason: Optional[str] = None

    @property
    def hypothesis_ok(self) -> bool:
        return self.skipped_reason is None


def build_instance(cfg: CampaignConfig, claim: ClaimInfo, index: int) -> Instance:
    """The instance trial ``index`` evaluates (pure function of cfg and index)."""
    rng = trial_rng(cfg.master_seed, index)
    return gen_instance(claim, rng, cfg.dims, cfg.map_kinds, cfg.resolved_functions(),
                        cfg.resolved_interval(), cfg.windows)


def evaluate_record(cfg: CampaignConfig, claim: ClaimInfo, index: int, inst: Instance) -> TrialRecord:
    try:
        br = claim.evaluator(inst)
    except HypothesisViolation as exc:
        return TrialRecord(index, None, None, None, False, "hypotheses: " + "; ".join(exc.failed))
    violated = br.gap < violation_threshold(br.lhs, br.rhs, cfg.abs_tol, cfg.rel_tol)
    return TrialRecord(index, br.gap, br.lhs, br.rhs, violated)


def run_trial(cfg: CampaignConfig, claim: ClaimInfo, index: int) -> TrialRecord:
    try:
        inst = build_instance(cfg, claim, index)
    except GenerationFailure as exc:
        return TrialRecord(index, None, None, None, False, f"generation: {exc}")
    return evaluate_record(cfg, claim, index, inst)


def _run_chunk(cfg_json: dict, indices: list) -> list:
    cfg = CampaignConfig.from_json(cfg_json)
    claim = get_claim(cfg.claim_id)
    return [run_trial(cfg, claim, i) for i in indices]


def worker_count(default: Optional[int] = None) -> int:
    env = os.environ.get("OPINEQ_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise BadParameter(f"OPINEQ_THREADS must be an integer (got {env!r})") from None
        if n < 1:
            raise BadParameter("OPINEQ_THREADS must be positive")
        return n
    return default or os.cpu_count() or 1


def histogram(gaps) -> dict:
    """Counts over the fixed bins ``(-inf, e0), [e0, e1), ..., [e_last, inf)``."""
    counts = [0] * (len(HIST_EDGES) + 1)
    for g in gaps:
        counts[bisect.bisect_right(HIST_EDGES, g)] += 1
    return {"edges": list(HIST_EDGES), "counts": counts}


@dataclass
class CampaignReport:
    config: CampaignConfig
    records: list
    worst: list
    wall_time: float = 0.0

    @property
    def evaluated(self) -> list:
        return [r for r in self.records if r.gap is not None]

    @property
    def trials(self) -> int:
        return len(self.evaluated)

    @property
    def skipped(self) -> int:
        return len(self.records) - self.trials

    @property
    def violations(self) -> int:
        return sum(r.violated for r in self.records)

    @property
    def worst_gap(self) -> Optional[float]:
        gaps = [r.gap for r in self.evaluated]
        return min(gaps) if gaps else None

    @property
    def median_gap(self) -> Optional[float]:
        gaps = [r.gap for r in self.evaluated]
        return statistics.median(gaps) if gaps else None

    @property
    def witness(self) -> Optional[dict]:
        if self.violations == 0 or not self.worst:
            return None
        return self.worst[0]

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def verdict(self) -> dict:
        w = self.witness
        return {
            "claim": self.config.claim_id,
            "trials": self.trials,
            "violations": self.violations,
            "skipped": self.skipped,
            "worst_gap": self.worst_gap,
            "witness": None if w is None else w["instance"],
            "witness_trial": None if w is None else w["trial"],
        }

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "config": self.config.to_json(),
            "verdict": self.verdict(),
            "histogram": histogram(r.gap for r in self.evaluated),
            "min_gap": self.worst_gap,
            "median_gap": self.median_gap,
            "worst": self.worst,
            "skipped_trials": [
                {"trial": r.index, "reason": r.skipped_reason} for r in self.records if r.gap is None
            ],
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out

    def dumps(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_json(include_timing), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "gap", "hypothesis_ok"])
        for r in self.records:
            w.writerow([r.index, "" if r.gap is None else repr(r.gap), str(r.hypothesis_ok).lower()])
        return buf.getvalue()

    def summary(self) -> str:
        wg = self.worst_gap
        wg_s = "nan" if wg is None else f"{wg:.6g}"
        return (f"claim={self.config.claim_id} trials={self.trials} "
                f"violations={self.violations} worst_gap={wg_s}")


def _chunks(indices: list, parts: int) -> list:
    if not indices:
        return []
    size = max(1, math.ceil(len(indices) / parts))
    return [indices[i:i + size] for i in range(0, len(indices), size)]


def run_campaign(cfg: CampaignConfig, inject=(), workers: Optional[int] = None) -> CampaignReport:
    """Run ``cfg.trials`` trials and aggregate them.

    ``inject`` is a sequence of fixed instances used as trials ``0..k-1``
    in place of random draws. ``workers`` defaults to ``OPINEQ_THREADS`` or
    the machine's CPU count.
    """
    claim = cfg.validate()
    start = time.perf_counter()
    inject = list(inject)[: cfg.trials]
    records = [evaluate_record(cfg, claim, i, inst) for i, inst in enumerate(inject)]
    rest = list(range(len(inject), cfg.trials))
    n_workers = workers if workers is not None else worker_count()
    if n_workers <= 1 or len(rest) < 2:
        records.extend(run_trial(cfg, claim, i) for i in rest)
    else:
        cfg_json = cfg.to_json()
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            futures = [pool.submit(_run_chunk, cfg_json, chunk) for chunk in _chunks(rest, 4 * n_workers)]
            for fut in futures:
                records.extend(fut.result())
    records.sort(key=lambda r: r.index)

    ranked = sorted((r for r in records if r.gap is not None), key=lambda r: (r.gap, r.index))
    worst = []
    for r in ranked[:TOP_K]:
        inst = inject[r.index] if r.index < len(inject) else build_instance(cfg, claim, r.index)
        worst.append({"trial": r.index, "gap": r.gap, "lhs": r.lhs, "rhs": r.rhs,
                      "violated": r.violated, "instance": inst.to_json()})
    return CampaignReport(cfg, records, worst, time.perf_counter() - start)
