"""Named experiment sweeps with CSV tables and line-chart output.

Each experiment mirrors one figure-style study: a family of curves, each a
sweep of one parameter, estimated by the Monte Carlo risk machinery.  One
CSV per curve (`<experiment>__<curve>.csv`, schema
`param_name,param_value,p_s,ci95,trials,seed`), one SVG per experiment.
Everything is reproducible from (name, grid, trials, base_seed).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .catalog import Catalog, OsClass, VulnProfile, bundled_catalog, bundled_profiles
from .interdict import PrioritizationResult, greedy_prioritize
from .risk import AssessmentSpec, ErParams, OrgParams, estimate_risk
from .scenario import ScenarioConfig
from .topology import ErThreshold, PolicySet, er_threshold_p

PN_GRID = tuple(round(0.01 * k, 2) for k in range(1, 21))
PP_GRID = tuple(round(0.01 * k, 2) for k in range(1, 21))
HOST_COUNTS = (25, 50, 100, 150)
INTERDICT_HOSTS = (25, 50)
DEFAULT_ALPHA = 2.5
INTERDICT_THETA = 0.05

_FF = PolicySet(False, False)
_TT = PolicySet(True, True)


class ExperimentName(Enum):
    ER_SWEEP = "er_1"
    HOST_SWEEP = "gen1-host"
    POLICY_COMPARISON = "gen1-comp"
    NO_VPN = "gen1-novpn"
    PHISH_SWEEP = "gen1-phish"
    INTERDICT_RUN = "threat-vuln"


@dataclass(frozen=True)
class ExperimentSpec:
    name: ExperimentName
    grid: tuple[float, ...]
    trials: int = 1000
    base_seed: int = 0
    out_dir: Path = Path("results")
    curves: tuple[str, ...] | None = None  # None = every curve

    def __post_init__(self):
        if not self.grid:
            raise ValueError("experiment grid must be non-empty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        object.__setattr__(self, "out_dir", Path(self.out_dir))


def default_spec(
    name: ExperimentName | str,
    trials: int = 1000,
    base_seed: int = 0,
    out_dir: str | Path = "results",
    grid: tuple[float, ...] | None = None,
    curves: tuple[str, ...] | None = None,
) -> ExperimentSpec:
    name = ExperimentName(name) if isinstance(name, str) else name
    if grid is None:
        grid = {
            ExperimentName.PHISH_SWEEP: PP_GRID,
            ExperimentName.INTERDICT_RUN: tuple(float(n) for n in INTERDICT_HOSTS),
        }.get(name, PN_GRID)
    return ExperimentSpec(
        name=name, grid=tuple(grid), trials=trials, base_seed=base_seed,
        out_dir=Path(out_dir), curves=curves,
    )


@dataclass(frozen=True)
class Curve:
    slug: str
    legend: str
    param_name: str
    rows: tuple[tuple[float, float, float], ...]  # (param_value, p_s, ci95)


def _assessment(spec: ExperimentSpec, network, cfg,
                catalog, profiles, homogeneous=None) -> AssessmentSpec:
    return AssessmentSpec(
        network=network, cfg=cfg, catalog=catalog, profiles=profiles,
        trials=spec.trials, homogeneous_profile=homogeneous,
    )


def _sweep(spec: ExperimentSpec, slug, legend, param_name, build) -> Curve:
    """Estimate one curve; `build(value)` yields the AssessmentSpec per point."""
    rows = []
    for value in spec.grid:
        est = estimate_risk(build(value), base_seed=spec.base_seed)
        rows.append((value, est.p_s, est.ci95_halfwidth))
    return Curve(slug=slug, legend=legend, param_name=param_name, rows=tuple(rows))


def _er_curves(spec, catalog, profiles):
    n = 100
    for kind, slug, legend in (
        (ErThreshold.NP1, "np1", "NP1 (np = 1)"),
        (ErThreshold.LNN, "lnn", "LNN (p = ln n / n)"),
    ):
        net = ErParams(n=n, p=er_threshold_p(n, kind))

        def build(v, net=net):
            cfg = ScenarioConfig(p_n=v, vpn_enabled=False)
            return _assessment(spec, net, cfg, catalog, profiles,
                               homogeneous="WindowsDesktop")

        yield slug, legend, "p_n", build


def _host_curves(spec, catalog, profiles):
    for n in HOST_COUNTS:
        def build(v, n=n):
            cfg = ScenarioConfig(p_n=v)
            return _assessment(spec, OrgParams(n, DEFAULT_ALPHA, _FF), cfg,
                               catalog, profiles)

        yield f"n{n}", f"n = {n}", "p_n", build


def _policy_curves(spec, catalog, profiles):
    # Phishing is dialed down so that a meaningful share of trials has no
    # VPN bypass; otherwise connection policies barely register.
    for policies in (_FF, PolicySet(False, True), PolicySet(True, False), _TT):
        tag = policies.tag()

        def build(v, policies=policies):
            cfg = ScenarioConfig(p_n=v, p_p=0.01)
            return _assessment(spec, OrgParams(100, DEFAULT_ALPHA, policies), cfg,
                               catalog, profiles)

        yield tag.lower(), tag, "p_n", build


def _novpn_curves(spec, catalog, profiles):
    variants = [(a, _FF) for a in (2.0, 2.5, 3.0)] + [(2.5, _TT)]
    for alpha, policies in variants:
        tag = policies.tag()

        def build(v, alpha=alpha, policies=policies):
            cfg = ScenarioConfig(p_n=v, vpn_enabled=False)
            return _assessment(spec, OrgParams(100, alpha, policies), cfg,
                               catalog, profiles)

        yield f"{alpha}-{tag.lower()}", f"{alpha} {tag}", "p_n", build


def _phish_curves(spec, catalog, profiles):
    for n in HOST_COUNTS:
        def build(v, n=n):
            cfg = ScenarioConfig(p_n=0.01, p_p=v)
            return _assessment(spec, OrgParams(n, DEFAULT_ALPHA, _FF), cfg,
                               catalog, profiles)

        yield f"n{n}", f"n = {n}", "p_p", build


_CURVE_BUILDERS = {
    ExperimentName.ER_SWEEP: _er_curves,
    ExperimentName.HOST_SWEEP: _host_curves,
    ExperimentName.POLICY_COMPARISON: _policy_curves,
    ExperimentName.NO_VPN: _novpn_curves,
    ExperimentName.PHISH_SWEEP: _phish_curves,
}


def sweep_curves(
    spec: ExperimentSpec,
    catalog: Catalog | None = None,
    profiles: dict[OsClass, VulnProfile] | None = None,
) -> list[Curve]:
    """Compute every (selected) curve of a sweep experiment, no file output."""
    catalog = catalog if catalog is not None else bundled_catalog()
    profiles = profiles if profiles is not None else bundled_profiles(catalog)
    curves = []
    for slug, legend, param_name, build in _CURVE_BUILDERS[spec.name](
        spec, catalog, profiles
    ):
        if spec.curves is not None and slug not in spec.curves:
            continue
        curves.append(_sweep(spec, slug, legend, param_name, build))
    if not curves:
        raise ValueError("curve selection matched nothing")
    return curves


def interdiction_runs(
    spec: ExperimentSpec,
    catalog: Catalog | None = None,
    profiles: dict[OsClass, VulnProfile] | None = None,
    theta: float = INTERDICT_THETA,
) -> dict[int, PrioritizationResult]:
    """Greedy prioritization per host count (the experiment grid).  Zero-day
    exposure is turned off: it is unpatchable by construction, and with it on
    the residual risk alone exceeds any reasonable threshold."""
    catalog = catalog if catalog is not None else bundled_catalog()
    profiles = profiles if profiles is not None else bundled_profiles(catalog)
    results = {}
    for value in spec.grid:
        n = int(value)
        cfg = ScenarioConfig(p_n=0.01, p_z=0.0)
        assessment = _assessment(
            spec, OrgParams(n, DEFAULT_ALPHA, _FF), cfg, catalog, profiles
        )
        results[n] = greedy_prioritize(assessment, theta, base_seed=spec.base_seed)
    return results


def _interdict_curves(spec, results: dict[int, PrioritizationResult]) -> list[Curve]:
    curves = []
    for n, res in sorted(results.items()):
        rows = tuple(
            (float(rank), p, 1.96 * math.sqrt(p * (1.0 - p) / spec.trials))
            for rank, p in enumerate(res.risk_trace)
        )
        curves.append(
            Curve(slug=f"n{n}", legend=f"n = {n}", param_name="patch_rank", rows=rows)
        )
    return curves


def _write_curve_csv(path: Path, curve: Curve, trials: int, seed: int) -> None:
    lines = ["param_name,param_value,p_s,ci95,trials,seed"]
    for value, p_s, ci in curve.rows:
        lines.append(
            f"{curve.param_name},{value:g},{p_s:.6f},{ci:.6f},{trials},{seed}"
        )
    path.write_text("\n".join(lines) + "\n")


def _plot(path: Path, title: str, xlabel: str, curves: list[Curve]) -> None:
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "fixed"  # deterministic element ids
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for curve in curves:
        xs = [r[0] for r in curve.rows]
        ys = [r[1] for r in curve.rows]
        ax.plot(xs, ys, marker="o", markersize=3, label=curve.legend)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("attack success fraction")
    ax.set_ylim(bottom=0.0)
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def run_experiment(
    spec: ExperimentSpec,
    catalog: Catalog | None = None,
    profiles: dict[OsClass, VulnProfile] | None = None,
) -> dict:
    """Execute an experiment, write its CSVs and plot, return a manifest."""
    spec.out_dir.mkdir(parents=True, exist_ok=True)
    name = spec.name.value
    extra_files: dict[str, str] = {}

    if spec.name is ExperimentName.INTERDICT_RUN:
        results = interdiction_runs(spec, catalog, profiles)
        curves = _interdict_curves(spec, results)
        xlabel = "vulnerabilities patched"
        for n, res in sorted(results.items()):
            order_csv = spec.out_dir / f"{name}__n{n}-order.csv"
            order_csv.write_text(res.to_csv())
            order_json = spec.out_dir / f"{name}__n{n}-order.json"
            order_json.write_text(res.to_json())
            extra_files[f"n{n}-order.csv"] = str(order_csv)
            extra_files[f"n{n}-order.json"] = str(order_json)
    else:
        curves = sweep_curves(spec, catalog, profiles)
        xlabel = curves[0].param_name

    csv_paths = {}
    for curve in curves:
        path = spec.out_dir / f"{name}__{curve.slug}.csv"
        _write_curve_csv(path, curve, spec.trials, spec.base_seed)
        csv_paths[curve.slug] = str(path)

    plot_path = spec.out_dir / f"{name}.svg"
    _plot(plot_path, name, xlabel, curves)

    return {
        "experiment": name,
        "grid": list(spec.grid),
        "trials": spec.trials,
        "seed": spec.base_seed,
        "curves": csv_paths,
        "plot": str(plot_path),
        **({"extra": extra_files} if extra_files else {}),
    }
