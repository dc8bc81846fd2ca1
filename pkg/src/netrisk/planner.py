"""Attacker model: delete-free reachability, plan extraction, validation.

All actions only add capabilities, so goal reachability is a least fixed
point and success is monotone in the available facts.  reach_closure works
at host level (every exploit on a host has the same effects, so only the
precondition category matters); extract_plan re-runs a per-action layered
closure to name concrete steps; brute_force_success is a deliberately naive
saturation over ground actions kept as an independent oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .catalog import AccessRequirement, DerivedExploit
from .scenario import AccessBits, ScenarioInstance

ZERO_DAY_ID = "zero-day"

_NET = AccessRequirement.REQUIRES_NETWORK_OR_ADJACENT
_ADJ = AccessRequirement.REQUIRES_ADJACENT
_LOC = AccessRequirement.REQUIRES_LOCAL


class ActionKind(Enum):
    EXPLORE = "EXPLORE"
    PROBE = "PROBE"
    MASQUERADE = "MASQUERADE"
    EXPLOIT = "EXPLOIT"
    UPDATE_ACCESS = "UPDATE_ACCESS"
    ACCESS = "ACCESS"


@dataclass(frozen=True)
class AttackAction:
    kind: ActionKind
    host: int
    vuln: str | None = None
    dst: int | None = None

    def serialize(self) -> str:
        if self.kind is ActionKind.EXPLOIT:
            return f"{self.kind.value} {self.host} {self.vuln}"
        if self.kind is ActionKind.UPDATE_ACCESS:
            return f"{self.kind.value} {self.host} {self.dst}"
        return f"{self.kind.value} {self.host}"


@dataclass(frozen=True)
class Plan:
    actions: tuple[AttackAction, ...]
    success: bool

    def serialize(self) -> str:
        return "\n".join(
            f"{i} {a.serialize()}" for i, a in enumerate(self.actions, start=1)
        ) + ("\n" if self.actions else "")


@dataclass(frozen=True)
class AttackState:
    access: dict[int, AccessBits]
    accessible: frozenset[int]
    compromised: frozenset[int]
    file_read: bool


def initial_state(s: ScenarioInstance) -> AttackState:
    access = {h.host_id: h.access for h in s.hosts}
    accessible = frozenset(h.host_id for h in s.hosts if h.access.network)
    compromised = frozenset(h.host_id for h in s.hosts if h.access.compromised)
    return AttackState(
        access=access, accessible=accessible, compromised=compromised,
        file_read=False,
    )


def _capabilities(s: ScenarioInstance):
    """Per-host exploit capability bits, split by precondition category."""
    caps = {}
    for h in s.hosts:
        net_free = h.zero_day
        adj_free = False
        net_cred = False
        adj_cred = False
        loc_free = False
        loc_cred = False
        for cid in h.present_vulns:
            d = s.exploits[cid]
            if d.access_requirement is _NET:
                if d.requires_credentials:
                    net_cred = True
                else:
                    net_free = True
            elif d.access_requirement is _ADJ:
                if d.requires_credentials:
                    adj_cred = True
                else:
                    adj_free = True
            else:
                if d.requires_credentials:
                    loc_cred = True
                else:
                    loc_free = True
        caps[h.host_id] = (net_free, adj_free, net_cred, adj_cred, loc_free, loc_cred)
    return caps


def reach_closure(s: ScenarioInstance) -> tuple[AttackState, bool]:
    """Least fixed point of the attacker's capabilities; returns the closure
    state and whether the target file is readable."""
    hosts = {h.host_id: h for h in s.hosts}
    caps = _capabilities(s)
    adj_out = s.topology.out_adjacency

    net = {hid: h.access.network for hid, h in hosts.items()}
    adj = {hid: h.access.adjacent for hid, h in hosts.items()}
    loc = {hid: h.access.local for hid, h in hosts.items()}
    user = {hid: h.access.user for hid, h in hosts.items()}
    read = {hid: h.access.read for hid, h in hosts.items()}
    write = {hid: h.access.write for hid, h in hosts.items()}
    comp = {hid: h.access.compromised for hid, h in hosts.items()}

    def evaluate(hid: int) -> None:
        """Fire every applicable exploit/masquerade on hid."""
        net_free, adj_free, net_cred, adj_cred, loc_free, loc_cred = caps[hid]
        reachable = net[hid] or adj[hid]
        exploited = (
            (reachable and net_free)
            or (adj[hid] and adj_free)
            or (reachable and net_cred and user[hid])
            or (adj[hid] and adj_cred and user[hid])
            or (loc[hid] and loc_free)
            or (loc[hid] and loc_cred and user[hid])
        )
        if exploited:
            read[hid] = True
            comp[hid] = True
        if reachable and user[hid]:  # masquerade with phished credentials
            read[hid] = True
            write[hid] = True
            if s.masquerade_compromises:
                comp[hid] = True

    pending = deque(sorted(hosts))
    pivoted: set[int] = set()
    while pending:
        hid = pending.popleft()
        evaluate(hid)
        if comp[hid] and hid not in pivoted:
            pivoted.add(hid)
            for dst in adj_out.get(hid, ()):
                if not (net[dst] and adj[dst]):
                    net[dst] = True
                    adj[dst] = True
                    pending.append(dst)

    target = s.target_host
    success = comp[target] and read[target]
    access = {
        hid: AccessBits(
            network=net[hid],
            adjacent=adj[hid],
            local=loc[hid],
            user=user[hid],
            root=hosts[hid].access.root,
            read=read[hid],
            write=write[hid],
            compromised=comp[hid],
        )
        for hid in hosts
    }
    state = AttackState(
        access=access,
        accessible=frozenset(hid for hid in hosts if net[hid] or adj[hid]),
        compromised=frozenset(hid for hid in hosts if comp[hid]),
        file_read=success,
    )
    return state, success


# --- plan extraction --------------------------------------------------------

def _ground_actions(s: ScenarioInstance):
    """Per-action grounding with CNF-style preconditions: a tuple of groups,
    each group a tuple of alternative facts, one alternative must hold."""
    actions = []
    req_group = {
        _NET: (("net",), ("adj",)),
        _ADJ: (("adj",),),
        _LOC: (("loc",),),
    }
    for h in sorted(s.hosts, key=lambda h: h.host_id):
        hid = h.host_id
        vulns: list[tuple[str, DerivedExploit | None]] = [
            (cid, s.exploits[cid]) for cid in sorted(h.present_vulns)
        ]
        if h.zero_day:
            vulns.append((ZERO_DAY_ID, None))
        for cid, d in vulns:
            if d is None:
                req, creds = _NET, False
            else:
                req, creds = d.access_requirement, d.requires_credentials
            groups = [tuple((kind, hid) for (kind,) in req_group[req])]
            if creds:
                groups.append((("user", hid),))
            actions.append(
                (
                    AttackAction(ActionKind.EXPLOIT, hid, vuln=cid),
                    tuple(groups),
                    (("read", hid), ("comp", hid)),
                )
            )
        effects = [("read", hid), ("write", hid)]
        if s.masquerade_compromises:
            effects.append(("comp", hid))
        actions.append(
            (
                AttackAction(ActionKind.MASQUERADE, hid),
                ((("net", hid), ("adj", hid)), (("user", hid),)),
                tuple(effects),
            )
        )
    for src, dst in sorted(s.topology.edges):
        actions.append(
            (
                AttackAction(ActionKind.UPDATE_ACCESS, src, dst=dst),
                ((("comp", src),),),
                (("net", dst), ("adj", dst)),
            )
        )
    t = s.target_host
    actions.append(
        (
            AttackAction(ActionKind.ACCESS, t),
            ((("comp", t),), (("read", t),)),
            (("goal",),),
        )
    )
    return actions


def _layered_closure(s: ScenarioInstance):
    facts: dict[tuple, int] = {}
    support: dict[tuple, tuple] = {}
    for h in s.hosts:
        hid = h.host_id
        for kind, on in (
            ("net", h.access.network),
            ("adj", h.access.adjacent),
            ("loc", h.access.local),
            ("user", h.access.user),
            ("read", h.access.read),
            ("comp", h.access.compromised),
        ):
            if on:
                facts[(kind, hid)] = 0
    actions = _ground_actions(s)
    layer = 0
    while True:
        layer += 1
        new: list[tuple] = []
        for action, groups, effects in actions:
            if all(any(f in facts for f in group) for group in groups):
                for eff in effects:
                    if eff not in facts and eff not in support:
                        support[eff] = (action, groups)
                        new.append(eff)
        if not new:
            break
        for eff in new:
            facts[eff] = layer
    return facts, support


def extract_plan(s: ScenarioInstance, closure: AttackState) -> Plan:
    """Backchain a concrete plan from a successful closure.  Raises
    ValueError when the closure did not reach the goal.  Ties break by
    earliest layer, then lowest host id, then lexicographic vulnerability
    id."""
    if not closure.file_read:
        raise ValueError("extract_plan requires a successful closure")
    facts, support = _layered_closure(s)
    if ("goal",) not in facts:
        raise ValueError("goal not reachable; no plan to extract")

    chosen: dict[AttackAction, int] = {}

    def need(fact: tuple) -> None:
        if facts[fact] == 0:
            return
        action, groups = support[fact]
        if action in chosen:
            return
        chosen[action] = facts[fact]
        for group in groups:
            have = [f for f in group if f in facts]
            pick = min(have, key=lambda f: (facts[f], f))
            need(pick)

    need(("goal",))

    def sort_key(item):
        action, layer = item
        return (
            layer,
            action.host,
            action.vuln or "",
            -1 if action.dst is None else action.dst,
        )

    ordered = [a for a, _ in sorted(chosen.items(), key=sort_key)]

    out: list[AttackAction] = []
    probed: set[int] = set()
    explored: set[int] = set()
    for a in ordered:
        if a.kind in (ActionKind.EXPLOIT, ActionKind.MASQUERADE) and a.host not in probed:
            out.append(AttackAction(ActionKind.PROBE, a.host))
            probed.add(a.host)
        if a.kind is ActionKind.UPDATE_ACCESS and a.host not in explored:
            out.append(AttackAction(ActionKind.EXPLORE, a.host))
            explored.add(a.host)
        out.append(a)
    return Plan(actions=tuple(out), success=True)


def validate_plan(s: ScenarioInstance, plan: Plan) -> bool:
    """Step-by-step simulation; True iff every precondition holds in order
    and a successful plan ends by reading the file on the target."""
    hosts = {h.host_id: h for h in s.hosts}
    net = {hid: h.access.network for hid, h in hosts.items()}
    adj = {hid: h.access.adjacent for hid, h in hosts.items()}
    loc = {hid: h.access.local for hid, h in hosts.items()}
    user = {hid: h.access.user for hid, h in hosts.items()}
    read = {hid: h.access.read for hid, h in hosts.items()}
    comp = {hid: h.access.compromised for hid, h in hosts.items()}
    edges = s.topology.edges
    file_read = False

    for a in plan.actions:
        if a.host not in hosts:
            return False
        reachable = net[a.host] or adj[a.host]
        if a.kind is ActionKind.PROBE:
            if not reachable:
                return False
        elif a.kind is ActionKind.EXPLORE:
            if not comp[a.host]:
                return False
        elif a.kind is ActionKind.MASQUERADE:
            if not (reachable and user[a.host]):
                return False
            read[a.host] = True
            if s.masquerade_compromises:
                comp[a.host] = True
        elif a.kind is ActionKind.EXPLOIT:
            h = hosts[a.host]
            if a.vuln == ZERO_DAY_ID:
                if not (h.zero_day and reachable):
                    return False
            else:
                if a.vuln not in h.present_vulns:
                    return False
                d = s.exploits[a.vuln]
                if d.requires_credentials and not user[a.host]:
                    return False
                if d.access_requirement is _NET and not reachable:
                    return False
                if d.access_requirement is _ADJ and not adj[a.host]:
                    return False
                if d.access_requirement is _LOC and not loc[a.host]:
                    return False
            read[a.host] = True
            comp[a.host] = True
        elif a.kind is ActionKind.UPDATE_ACCESS:
            if a.dst not in hosts or (a.host, a.dst) not in edges or not comp[a.host]:
                return False
            net[a.dst] = True
            adj[a.dst] = True
        elif a.kind is ActionKind.ACCESS:
            if not (comp[a.host] and read[a.host] and hosts[a.host].has_file):
                return False
            file_read = True
    if plan.success:
        if not plan.actions or plan.actions[-1].kind is not ActionKind.ACCESS:
            return False
        if plan.actions[-1].host != s.target_host:
            return False
        return file_read
    return True


# --- independent oracle -----------------------------------------------------

def brute_force_success(s: ScenarioInstance) -> bool:
    """Goal reachability by blind saturation, one ground action at a time,
    with preconditions spelled out inline rather than shared with the
    extractor.  Refuses instances beyond 6 hosts or 5 present vulnerabilities
    per host: it is an oracle for small cases, not an implementation."""
    if len(s.hosts) > 6:
        raise ValueError("brute force oracle limited to 6 hosts")
    if any(len(h.present_vulns) > 5 for h in s.hosts):
        raise ValueError("brute force oracle limited to 5 vulns per host")

    facts: set[tuple] = set()
    for h in s.hosts:
        if h.access.network:
            facts.add(("net", h.host_id))
        if h.access.adjacent:
            facts.add(("adj", h.host_id))
        if h.access.local:
            facts.add(("loc", h.host_id))
        if h.access.user:
            facts.add(("user", h.host_id))

    def gain(*new: tuple) -> bool:
        before = len(facts)
        facts.update(new)
        return len(facts) > before

    while True:
        added = False
        for h in s.hosts:
            hid = h.host_id
            reach = ("net", hid) in facts or ("adj", hid) in facts
            for cid in h.present_vulns:
                d = s.exploits[cid]
                if d.requires_credentials and ("user", hid) not in facts:
                    continue
                if d.access_requirement is _NET and reach:
                    added |= gain(("read", hid), ("comp", hid))
                elif d.access_requirement is _ADJ and ("adj", hid) in facts:
                    added |= gain(("read", hid), ("comp", hid))
                elif d.access_requirement is _LOC and ("loc", hid) in facts:
                    added |= gain(("read", hid), ("comp", hid))
            if h.zero_day and reach:
                added |= gain(("read", hid), ("comp", hid))
            if reach and ("user", hid) in facts:
                added |= gain(("read", hid), ("write", hid))
                if s.masquerade_compromises:
                    added |= gain(("comp", hid))
            if h.has_file and ("comp", hid) in facts and ("read", hid) in facts:
                added |= gain(("goal",))
        for src, dst in s.topology.edges:
            if ("comp", src) in facts:
                added |= gain(("net", dst), ("adj", dst))
        if not added:
            return ("goal",) in facts
