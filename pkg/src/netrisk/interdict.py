"""Greedy vulnerability prioritization.

Repeatedly patch the candidate whose removal kills the most currently
successful attack trials, until estimated risk falls to the threshold or no
candidate helps.  Trials are drawn once and reused across every candidate
evaluation, so comparisons are paired: a candidate is scored by exactly how
many of the surviving successes it flips.  Only surviving successes need
re-evaluation (failures cannot come back), and a candidate absent from all
of them is skipped outright.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

from . import rng
from .risk import AssessmentSpec, success_with_patches, trial_instance
from .scenario import ScenarioInstance


@dataclass(frozen=True)
class PrioritizationResult:
    order: tuple[str, ...]
    risk_trace: tuple[float, ...]
    theta: float
    reached_threshold: bool
    seed: int

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("rank,cve_id,risk_after,delta\n")
        for rank, cve in enumerate(self.order, start=1):
            after = self.risk_trace[rank]
            delta = self.risk_trace[rank - 1] - after
            out.write(f"{rank},{cve},{after:.6f},{delta:.6f}\n")
        return out.getvalue()

    def to_json(self) -> str:
        steps = []
        for rank, cve in enumerate(self.order, start=1):
            after = self.risk_trace[rank]
            steps.append(
                {
                    "rank": rank,
                    "cve_id": cve,
                    "risk_after": round(after, 6),
                    "delta": round(self.risk_trace[rank - 1] - after, 6),
                }
            )
        payload = {
            "theta": self.theta,
            "seed": self.seed,
            "initial_risk": round(self.risk_trace[0], 6),
            "final_risk": round(self.risk_trace[-1], 6),
            "reached_threshold": self.reached_threshold,
            "patched": list(self.order),
            "steps": steps,
        }
        return json.dumps(payload, indent=2) + "\n"


def candidate_vulns(spec: AssessmentSpec) -> list[str]:
    """Patchable candidates: every profile member not already patched."""
    members: set[str] = set()
    for profile in spec.profiles.values():
        members.update(profile.members)
    return sorted(members - spec.cfg.patched)


def _draw_trials(spec: AssessmentSpec, base_seed: int) -> list[ScenarioInstance]:
    return [
        trial_instance(spec, frozenset(), rng.derive(base_seed, rng.TRIAL, i))
        for i in range(spec.trials)
    ]


def marginal_impacts(
    spec: AssessmentSpec,
    current: frozenset[str] = frozenset(),
    base_seed: int = 0,
    candidates: list[str] | None = None,
) -> dict[str, float]:
    """Drop in estimated risk from patching each single candidate on top of
    `current`, under shared trial draws.  Defaults to every catalog member
    not yet patched; members outside all profiles simply score zero."""
    if candidates is None:
        candidates = sorted(
            set(spec.catalog.records) - current - spec.cfg.patched
        )
    instances = _draw_trials(spec, base_seed)
    alive = [s for s in instances if success_with_patches(s, current)]
    impacts = {}
    for cve in candidates:
        with_cve = current | {cve}
        flips = sum(
            1
            for s in alive
            if any(cve in h.present_vulns for h in s.hosts)
            and not success_with_patches(s, with_cve)
        )
        impacts[cve] = flips / spec.trials
    return impacts


def greedy_prioritize(
    spec: AssessmentSpec,
    theta: float,
    base_seed: int = 0,
    max_patches: int | None = None,
    eval_trials: int | None = None,
) -> PrioritizationResult:
    """Smallest-first greedy patch ordering.  Stops at the threshold, at the
    patch cap, or when no remaining candidate flips any surviving success.
    `eval_trials` caps how many trials score each candidate per round; the
    risk trace itself always uses the full trial set."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    candidates = candidate_vulns(spec)
    instances = _draw_trials(spec, base_seed)
    probe = spec.trials if eval_trials is None else max(1, eval_trials)

    patched: frozenset[str] = frozenset()
    alive = [
        (i, s) for i, s in enumerate(instances) if success_with_patches(s, patched)
    ]
    trace = [len(alive) / spec.trials]
    order: list[str] = []
    cap = len(candidates) if max_patches is None else max_patches

    while trace[-1] > theta and candidates and len(order) < cap:
        scoreable = [(i, s) for i, s in alive if i < probe]
        best_cve = None
        best_flips = 0
        for cve in candidates:
            touched = [
                s for _, s in scoreable
                if any(cve in h.present_vulns for h in s.hosts)
            ]
            if len(touched) <= best_flips:
                continue  # cannot beat the incumbent even if every flip lands
            with_cve = patched | {cve}
            flips = sum(1 for s in touched if not success_with_patches(s, with_cve))
            if flips > best_flips:
                best_cve, best_flips = cve, flips
        if best_cve is None:
            break  # stalled: nothing flips a surviving success
        patched |= {best_cve}
        order.append(best_cve)
        candidates.remove(best_cve)
        alive = [(i, s) for i, s in alive if success_with_patches(s, patched)]
        trace.append(len(alive) / spec.trials)

    return PrioritizationResult(
        order=tuple(order),
        risk_trace=tuple(trace),
        theta=theta,
        reached_threshold=trace[-1] <= theta,
        seed=base_seed,
    )
