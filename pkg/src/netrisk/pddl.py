"""Export an attack scenario as a classical planning task.

The emitted domain/problem pair is plain STRIPS with types: one exploit
action per vulnerability observed in the instance (plus one for unpatchable
zero-day exposure), lateral movement via update_access, and a final access
action reading the target file.  Hosts, vulnerabilities, and the single
target file are domain constants, so the problem file carries only init
facts and the goal.  Output is byte-deterministic: everything is emitted in
sorted order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .catalog import AccessRequirement
from .planner import ZERO_DAY_ID
from .scenario import ScenarioInstance

FILE_OBJECT = "target-file"

_PREDICATES = """  (:predicates
    (connected ?src - host ?dst - host)
    (has_vuln ?h - host ?v - vulnerability)
    (network_access ?h - host)
    (adjacent_access ?h - host)
    (local_access ?h - host)
    (user_access ?h - host)
    (compromised ?h - host)
    (read_access ?h - host)
    (file_present ?f - file ?h - host)
    (file_read ?f - file))"""


class PddlKind(Enum):
    DOMAIN = "Domain"
    PROBLEM = "Problem"


@dataclass(frozen=True)
class PddlDocument:
    kind: PddlKind
    text: str


def _vuln_object(cve_id: str) -> str:
    return "v-" + cve_id.lower()


def _host_object(host_id: int) -> str:
    return f"h{host_id}"


def _instance_vulns(s: ScenarioInstance) -> list[str]:
    """Vulnerability ids that need exploit actions, zero-day included."""
    present: set[str] = set()
    for h in s.hosts:
        present.update(h.present_vulns)
    vulns = sorted(present)
    if any(h.zero_day for h in s.hosts):
        vulns.append(ZERO_DAY_ID)
    return vulns


def _access_clause(requirement: AccessRequirement) -> str:
    if requirement is AccessRequirement.REQUIRES_NETWORK_OR_ADJACENT:
        return "(or (network_access ?h) (adjacent_access ?h))"
    if requirement is AccessRequirement.REQUIRES_ADJACENT:
        return "(adjacent_access ?h)"
    return "(local_access ?h)"


def emit_domain(s: ScenarioInstance, name: str = "attack") -> PddlDocument:
    vulns = _instance_vulns(s)
    hosts = sorted(h.host_id for h in s.hosts)
    lines = [
        f"(define (domain {name})",
        "  (:requirements :strips :typing)",
        "  (:types host vulnerability file - object)",
        "  (:constants",
        f"    {' '.join(_host_object(h) for h in hosts)} - host",
    ]
    for v in vulns:
        lines.append(f"    {_vuln_object(v)} - vulnerability")
    lines.append(f"    {FILE_OBJECT} - file)")
    lines.append(_PREDICATES)

    for v in vulns:
        if v == ZERO_DAY_ID:
            requirement = AccessRequirement.REQUIRES_NETWORK_OR_ADJACENT
            creds = False
        else:
            d = s.exploits[v]
            requirement, creds = d.access_requirement, d.requires_credentials
        pre = [f"(has_vuln ?h {_vuln_object(v)})", _access_clause(requirement)]
        if creds:
            pre.append("(user_access ?h)")
        lines += [
            f"  (:action exploit-{v.lower()}",
            "    :parameters (?h - host)",
            f"    :precondition (and {' '.join(pre)})",
            "    :effect (and (read_access ?h) (compromised ?h)))",
        ]

    if any(h.phished for h in s.hosts):
        effect = "(and (read_access ?h) (compromised ?h))" if s.masquerade_compromises \
            else "(read_access ?h)"
        lines += [
            "  (:action masquerade",
            "    :parameters (?h - host)",
            "    :precondition (and (or (network_access ?h) (adjacent_access ?h))"
            " (user_access ?h))",
            f"    :effect {effect})",
        ]

    lines += [
        "  (:action update_access",
        "    :parameters (?src - host ?dst - host)",
        "    :precondition (and (compromised ?src) (connected ?src ?dst))",
        "    :effect (and (network_access ?dst) (adjacent_access ?dst)))",
        "  (:action access",
        "    :parameters (?h - host ?f - file)",
        "    :precondition (and (compromised ?h) (read_access ?h)"
        " (file_present ?f ?h))",
        "    :effect (file_read ?f)))",
    ]
    return PddlDocument(PddlKind.DOMAIN, "\n".join(lines) + "\n")


def emit_problem(s: ScenarioInstance, name: str = "attack") -> PddlDocument:
    lines = [
        f"(define (problem {name}-problem)",
        f"  (:domain {name})",
        "  (:init",
    ]
    init: list[str] = []
    for src, dst in sorted(s.topology.edges):
        init.append(f"(connected {_host_object(src)} {_host_object(dst)})")
    for h in sorted(s.hosts, key=lambda h: h.host_id):
        for v in sorted(h.present_vulns):
            init.append(f"(has_vuln {_host_object(h.host_id)} {_vuln_object(v)})")
        if h.zero_day:
            init.append(
                f"(has_vuln {_host_object(h.host_id)} {_vuln_object(ZERO_DAY_ID)})"
            )
    for h in sorted(s.hosts, key=lambda h: h.host_id):
        obj = _host_object(h.host_id)
        if h.access.network:
            init.append(f"(network_access {obj})")
        if h.access.adjacent:
            init.append(f"(adjacent_access {obj})")
        if h.access.local:
            init.append(f"(local_access {obj})")
        if h.access.user:
            init.append(f"(user_access {obj})")
    init.append(f"(file_present {FILE_OBJECT} {_host_object(s.target_host)})")
    lines += [f"    {fact}" for fact in init]
    lines[-1] += ")"
    lines.append(f"  (:goal (file_read {FILE_OBJECT})))")
    return PddlDocument(PddlKind.PROBLEM, "\n".join(lines) + "\n")


def write_pddl(s: ScenarioInstance, name: str, out_dir: str | Path) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    domain_path = out / f"{name}-domain.pddl"
    problem_path = out / f"{name}-problem.pddl"
    domain_path.write_text(emit_domain(s, name).text)
    problem_path.write_text(emit_problem(s, name).text)
    return domain_path, problem_path
