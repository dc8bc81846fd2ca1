"""Monte Carlo estimation of attack success probability.

A trial draws a scenario (optionally regenerating the network) from seeds
derived per trial index, runs the attacker closure, and counts successes.
All randomness is keyed by (base_seed, trial index), so estimates under
different patch sets share every draw they have in common; patching can only
remove vulnerabilities from a trial, never reshuffle it.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Mapping

from . import rng
from .catalog import Catalog, OsClass, VulnProfile
from .planner import reach_closure
from .scenario import ScenarioConfig, ScenarioInstance, instantiate
from .topology import PolicySet, Topology, gen_erdos_renyi, gen_organizational


@dataclass(frozen=True)
class ErParams:
    """Regenerate an Erdos-Renyi network each trial (edge probability p)."""

    n: int
    p: float


@dataclass(frozen=True)
class OrgParams:
    """Regenerate an organizational network each trial."""

    n: int
    alpha: float
    policies: PolicySet = field(default_factory=PolicySet)


NetworkSource = Topology | ErParams | OrgParams


@dataclass(frozen=True)
class AssessmentSpec:
    network: NetworkSource
    cfg: ScenarioConfig
    catalog: Catalog
    profiles: Mapping[OsClass, VulnProfile]
    trials: int = 1000
    homogeneous_profile: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


@dataclass(frozen=True)
class RiskEstimate:
    p_s: float
    trials: int
    ci95_halfwidth: float
    base_seed: int

    @property
    def successes(self) -> int:
        return round(self.p_s * self.trials)

    @classmethod
    def from_counts(cls, successes: int, trials: int, base_seed: int) -> "RiskEstimate":
        p = successes / trials
        half = 1.96 * math.sqrt(p * (1.0 - p) / trials)
        return cls(p_s=p, trials=trials, ci95_halfwidth=half, base_seed=base_seed)


def trial_topology(spec: AssessmentSpec, trial_seed: int) -> Topology:
    src = spec.network
    if isinstance(src, Topology):
        return src
    gen_seed = rng.derive(trial_seed, rng.TOPOLOGY)
    if isinstance(src, ErParams):
        return gen_erdos_renyi(src.n, src.p, gen_seed)
    return gen_organizational(src.n, src.alpha, spec.cfg.p_n, src.policies, gen_seed)


def trial_instance(
    spec: AssessmentSpec,
    patched: frozenset[str],
    trial_seed: int,
    topology: Topology | None = None,
) -> ScenarioInstance:
    if topology is None:
        topology = trial_topology(spec, trial_seed)
    cfg = spec.cfg
    if patched:
        cfg = dataclasses.replace(cfg, patched=cfg.patched | patched)
    return instantiate(
        topology,
        spec.catalog,
        spec.profiles,
        cfg,
        trial_seed,
        homogeneous=spec.homogeneous_profile,
    )


def success_with_patches(s: ScenarioInstance, extra: frozenset[str]) -> bool:
    """Attack outcome after additionally patching `extra`.  Equivalent to
    re-drawing the trial with the larger patch set, because every random draw
    is keyed independently of patching."""
    if extra:
        hosts = tuple(
            dataclasses.replace(h, present_vulns=h.present_vulns - extra)
            if h.present_vulns & extra
            else h
            for h in s.hosts
        )
        s = dataclasses.replace(s, hosts=hosts)
    _, ok = reach_closure(s)
    return ok


def per_trial_success(
    spec: AssessmentSpec, patched: frozenset[str], trial_seed: int
) -> bool:
    _, ok = reach_closure(trial_instance(spec, patched, trial_seed))
    return ok


def estimate_risk(
    spec: AssessmentSpec,
    patched: frozenset[str] = frozenset(),
    base_seed: int = 0,
) -> RiskEstimate:
    patched = frozenset(patched)
    successes = 0
    for i in range(spec.trials):
        trial_seed = rng.derive(base_seed, rng.TRIAL, i)
        if per_trial_success(spec, patched, trial_seed):
            successes += 1
    return RiskEstimate.from_counts(successes, spec.trials, base_seed)
