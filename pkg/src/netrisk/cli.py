"""Command-line front end.

Subcommands: gen-net, assess, interdict, export-pddl, experiment.  Every run
prints its fully resolved configuration as JSON (provenance), then a JSON
results summary.  Exit codes: 0 success, 2 bad usage/parameters, 3 runtime
failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import rng
from .catalog import bundled_catalog, bundled_profiles
from .experiments import ExperimentName, default_spec, run_experiment
from .interdict import greedy_prioritize
from .pddl import write_pddl
from .risk import AssessmentSpec, ErParams, OrgParams, estimate_risk, trial_instance
from .scenario import ScenarioConfig
from .topology import (
    ErThreshold,
    PolicySet,
    er_threshold_p,
    gen_erdos_renyi,
    gen_organizational,
)

CSV_HEADER = "param_name,param_value,p_s,ci95,trials,seed"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="base seed for all randomness (default 0)")
    common.add_argument("--trials", type=int, default=1000,
                        help="Monte Carlo trials (default 1000)")
    common.add_argument("--out", type=Path, default=Path("./results"),
                        help="output directory (default ./results)")

    network = argparse.ArgumentParser(add_help=False)
    network.add_argument("--network", choices=("org", "er"), default="org",
                         help="network model (default org)")
    network.add_argument("--n", type=int, default=100, help="host count")
    network.add_argument("--er-p", type=float, default=None,
                         help="explicit edge probability (er only)")
    network.add_argument("--er-threshold", choices=("NP1", "LNN"), default=None,
                         help="edge probability from a named threshold (er only)")
    network.add_argument("--alpha", type=float, default=2.5,
                         help="community-size power-law exponent (org only)")
    network.add_argument("--restrict-gateways", action="store_true",
                         help="gateways may only reach their own community")
    network.add_argument("--restrict-servers", action="store_true",
                         help="servers may not initiate connections")

    scenario = argparse.ArgumentParser(add_help=False)
    scenario.add_argument("--p-n", type=float, default=0.1,
                          help="per-host external exposure probability")
    scenario.add_argument("--p-p", type=float, default=0.03,
                          help="per-desktop phishing probability")
    scenario.add_argument("--p-z", type=float, default=0.13,
                          help="per-host unpatchable-exposure probability")
    scenario.add_argument("--no-vpn", action="store_true",
                          help="disable the remote-access VPN rule")
    scenario.add_argument("--masquerade-read-only", action="store_true",
                          help="credential misuse grants read access only")
    scenario.add_argument("--profile", default=None,
                          help="force one vulnerability profile on every host")
    scenario.add_argument("--patch", action="append", default=[],
                          metavar="CVE_ID", help="treat this CVE as patched")

    parser = argparse.ArgumentParser(
        prog="netrisk",
        description="Network attack-risk assessment and patch prioritization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("gen-net", parents=[common, network],
                   help="generate a network and write it as JSON")
    sub.add_parser("assess", parents=[common, network, scenario],
                   help="Monte Carlo attack-success estimate")
    p_int = sub.add_parser("interdict", parents=[common, network, scenario],
                           help="greedy patch prioritization to a risk threshold")
    p_int.add_argument("--theta", type=float, default=0.05,
                       help="acceptable residual risk (default 0.05)")
    p_int.add_argument("--max-patches", type=int, default=None,
                       help="stop after this many patches")
    p_int.add_argument("--eval-trials", type=int, default=None,
                       help="trials used while scoring candidates")
    p_pddl = sub.add_parser("export-pddl", parents=[common, network, scenario],
                            help="emit planner files for one sampled scenario")
    p_pddl.add_argument("--name", default="attack",
                        help="file-name prefix (default attack)")
    p_exp = sub.add_parser("experiment", parents=[common],
                           help="run a named experiment sweep")
    p_exp.add_argument("--name", required=True,
                       choices=[e.value for e in ExperimentName])
    p_exp.add_argument("--grid", default=None,
                       help="comma-separated swept values (default per experiment)")
    p_exp.add_argument("--curves", default=None,
                       help="comma-separated curve subset (default all)")
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def _network_params(args):
    if args.network == "er":
        if args.er_p is not None and args.er_threshold is not None:
            raise ValueError("give either --er-p or --er-threshold, not both")
        if args.er_p is not None:
            p = args.er_p
        else:
            kind = ErThreshold(args.er_threshold or "NP1")
            p = er_threshold_p(args.n, kind)
        return ErParams(n=args.n, p=p)
    policies = PolicySet(args.restrict_gateways, args.restrict_servers)
    return OrgParams(n=args.n, alpha=args.alpha, policies=policies)


def _scenario_config(args) -> ScenarioConfig:
    return ScenarioConfig(
        p_n=args.p_n,
        p_p=args.p_p,
        p_z=args.p_z,
        vpn_enabled=not args.no_vpn,
        masquerade_compromises=not args.masquerade_read_only,
        patched=frozenset(args.patch),
    )


def _assessment_spec(args) -> AssessmentSpec:
    catalog = bundled_catalog()
    return AssessmentSpec(
        network=_network_params(args),
        cfg=_scenario_config(args),
        catalog=catalog,
        profiles=bundled_profiles(catalog),
        trials=args.trials,
        homogeneous_profile=args.profile,
    )


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _config_doc(args) -> dict:
    cfg = {
        k.replace("_", "-"): (str(v) if isinstance(v, Path) else v)
        for k, v in sorted(vars(args).items())
    }
    return {"resolved-config": cfg}


def _cmd_gen_net(args) -> dict:
    params = _network_params(args)
    if isinstance(params, ErParams):
        topo = gen_erdos_renyi(params.n, params.p, args.seed)
    else:
        topo = gen_organizational(params.n, params.alpha, 0.0,
                                  params.policies, args.seed)
    doc = {
        "nodes": [
            {
                "id": n.node_id,
                "role": n.role.value,
                "community": n.community_id,
                "remote": bool(n.remotely_accessible),
            }
            for n in topo.nodes
        ],
        "edges": sorted(list(e) for e in topo.edges),
    }
    path = args.out / "network.json"
    path.write_text(json.dumps(doc, indent=2) + "\n")
    return {"network": str(path), "hosts": len(topo.nodes),
            "edges": len(topo.edges)}


def _cmd_assess(args) -> dict:
    spec = _assessment_spec(args)
    est = estimate_risk(spec, base_seed=args.seed)
    path = args.out / "assess.csv"
    row = (f"p_n,{args.p_n:g},{est.p_s:.6f},{est.ci95_halfwidth:.6f},"
           f"{est.trials},{est.base_seed}")
    path.write_text(CSV_HEADER + "\n" + row + "\n")
    return {"csv": str(path), "p_s": round(est.p_s, 6),
            "ci95": round(est.ci95_halfwidth, 6)}


def _cmd_interdict(args) -> dict:
    spec = _assessment_spec(args)
    result = greedy_prioritize(
        spec, args.theta, base_seed=args.seed,
        max_patches=args.max_patches, eval_trials=args.eval_trials,
    )
    csv_path = args.out / "interdict.csv"
    csv_path.write_text(result.to_csv())
    json_path = args.out / "interdict.json"
    json_path.write_text(result.to_json())
    return {
        "csv": str(csv_path),
        "json": str(json_path),
        "patched": list(result.order),
        "final-risk": round(result.risk_trace[-1], 6),
        "reached-threshold": result.reached_threshold,
    }


def _cmd_export_pddl(args) -> dict:
    spec = _assessment_spec(args)
    trial_seed = rng.derive(args.seed, rng.TRIAL, 0)
    instance = trial_instance(spec, frozenset(), trial_seed)
    domain_path, problem_path = write_pddl(instance, args.name, args.out)
    return {"domain": str(domain_path), "problem": str(problem_path),
            "hosts": len(instance.hosts),
            "target": int(instance.target_host)}


def _cmd_experiment(args) -> dict:
    grid = None
    if args.grid is not None:
        grid = tuple(float(tok) for tok in args.grid.split(",") if tok)
    curves = None
    if args.curves is not None:
        curves = tuple(tok for tok in args.curves.split(",") if tok)
    spec = default_spec(args.name, trials=args.trials, base_seed=args.seed,
                        out_dir=args.out, grid=grid, curves=curves)
    return run_experiment(spec)


_COMMANDS = {
    "gen-net": _cmd_gen_net,
    "assess": _cmd_assess,
    "interdict": _cmd_interdict,
    "export-pddl": _cmd_export_pddl,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse already printed the usage message
        return exc.code if isinstance(exc.code, int) else 2
    try:
        _emit(_config_doc(args))
        args.out.mkdir(parents=True, exist_ok=True)
        results = _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"netrisk: parameter error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 — surface anything else as runtime
        print(f"netrisk: error: {exc}", file=sys.stderr)
        return 3
    _emit({"results": results})
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
