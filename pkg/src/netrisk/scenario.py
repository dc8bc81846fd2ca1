"""Scenario instantiation: one concrete attackable world per trial seed.

Profile assignment, vulnerability presence, phishing, zero-days, remote
accessibility, and file placement are all independent keyed draws, so any
single knob (for example one patched vulnerability) can change without
disturbing the rest of the world.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from . import rng
from .catalog import Catalog, DerivedExploit, OsClass, VulnProfile
from .topology import Role, Topology, topology_to_json


@dataclass(frozen=True)
class ScenarioConfig:
    p_n: float
    p_p: float = 0.03
    p_z: float = 0.13
    vpn_enabled: bool = True
    masquerade_compromises: bool = True
    desktop_windows: float = 0.7048
    desktop_linux: float = 0.2952
    server_linux: float = 0.664
    server_windows: float = 0.336
    patched: frozenset[str] = frozenset()

    def __post_init__(self):
        for name in ("p_n", "p_p", "p_z"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if abs(self.desktop_windows + self.desktop_linux - 1.0) > 1e-9:
            raise ValueError("desktop split fractions must sum to 1")
        if abs(self.server_linux + self.server_windows - 1.0) > 1e-9:
            raise ValueError("server split fractions must sum to 1")
        object.__setattr__(self, "patched", frozenset(self.patched))


@dataclass(frozen=True)
class AccessBits:
    network: bool = False
    adjacent: bool = False
    local: bool = False
    user: bool = False
    root: bool = False
    read: bool = False
    write: bool = False
    compromised: bool = False


@dataclass(frozen=True)
class HostInstance:
    host_id: int
    profile_name: str
    present_vulns: frozenset[str]
    zero_day: bool
    phished: bool
    has_file: bool
    access: AccessBits


@dataclass(frozen=True)
class ScenarioInstance:
    topology: Topology
    hosts: tuple[HostInstance, ...]
    target_host: int
    trial_seed: int
    exploits: Mapping[str, DerivedExploit]
    masquerade_compromises: bool

    def __post_init__(self):
        with_file = [h.host_id for h in self.hosts if h.has_file]
        if len(with_file) != 1 or with_file[0] != self.target_host:
            raise ValueError("exactly one host must hold the target file")


def assign_profiles(
    t: Topology,
    cfg: ScenarioConfig,
    profiles: Mapping[OsClass, VulnProfile],
    seed: int,
    homogeneous: str | None = None,
) -> dict[int, str]:
    """Profile name per host.  Servers and Gateways draw from the server OS
    split, Desktops from the desktop split; homogeneous mode forces one
    profile everywhere (used by the role-free ER experiments)."""
    if homogeneous is not None:
        names = {p.name for p in profiles.values()}
        if homogeneous not in names:
            raise ValueError(f"unknown profile {homogeneous!r}")
        return {n.node_id: homogeneous for n in t.nodes}
    for needed in OsClass:
        if needed not in profiles:
            raise ValueError(f"missing profile for {needed.value}")
    out: dict[int, str] = {}
    for node in t.nodes:
        u = rng.uniform(seed, rng.PROFILE, node.node_id)
        if node.role in (Role.SERVER, Role.GATEWAY):
            cls = OsClass.LINUX_SERVER if u < cfg.server_linux else OsClass.WINDOWS_SERVER
        else:
            cls = OsClass.WINDOWS_DESKTOP if u < cfg.desktop_windows else OsClass.LINUX_DESKTOP
        out[node.node_id] = profiles[cls].name
    return out


def instantiate(
    t: Topology,
    catalog: Catalog,
    profiles: Mapping[OsClass, VulnProfile],
    cfg: ScenarioConfig,
    trial_seed: int,
    homogeneous: str | None = None,
) -> ScenarioInstance:
    """Sample one world.  Draw addressing (all under trial_seed):

    - profile:   (PROFILE, host)
    - presence:  (PRESENCE, host, catalog index of cve) masked by cfg.patched
    - zero-day:  (ZERO_DAY, host), probability p_z
    - phishing:  (PHISH, host), probability p_p
    - network:   role-assigned topologies take the generation-time remote
                 flag; role-free ones sample (NET_ACCESS, host) vs p_n
    - file:      (FILE_PLACE,) uniform over hosts
    """
    assignment = assign_profiles(t, cfg, profiles, trial_seed, homogeneous=homogeneous)
    by_name = {p.name: p for p in profiles.values()}
    index_of = {cid: i for i, cid in enumerate(catalog.records)}

    node_ids = np.array(sorted(n.node_id for n in t.nodes))
    n = len(node_ids)
    u_phish = rng.uniform_row(trial_seed, rng.PHISH, node_ids)
    u_zday = rng.uniform_row(trial_seed, rng.ZERO_DAY, node_ids)
    u_net = rng.uniform_row(trial_seed, rng.NET_ACCESS, node_ids)
    target = int(node_ids[min(int(rng.uniform(trial_seed, rng.FILE_PLACE) * n), n - 1)])

    # presence draws, grouped by profile so each group is one vectorized grid
    present_by_host: dict[int, frozenset[str]] = {}
    for prof in by_name.values():
        hosts_here = np.array(
            [nid for nid in node_ids if assignment[nid] == prof.name], dtype=np.int64
        )
        if hosts_here.size == 0 or not prof.members:
            for nid in hosts_here:
                present_by_host[int(nid)] = frozenset()
            continue
        cols = np.array([index_of[cid] for cid in prof.members], dtype=np.int64)
        probs = np.array(
            [catalog.derived[cid].presence_probability for cid in prof.members]
        )
        unpatched = np.array([cid not in cfg.patched for cid in prof.members])
        grid = rng.uniform_grid(trial_seed, rng.PRESENCE, hosts_here, cols)
        present = (grid < probs[None, :]) & unpatched[None, :]
        for row, nid in enumerate(hosts_here):
            present_by_host[int(nid)] = frozenset(
                cid for j, cid in enumerate(prof.members) if present[row, j]
            )

    role_assigned = t.role_assigned
    hosts = []
    for i, nid in enumerate(node_ids):
        nid = int(nid)
        node = t.by_id[nid]
        if role_assigned:
            net = node.remotely_accessible
        else:
            net = bool(u_net[i] < cfg.p_n)
        phished = bool(u_phish[i] < cfg.p_p)
        hosts.append(
            HostInstance(
                host_id=nid,
                profile_name=assignment[nid],
                present_vulns=present_by_host[nid],
                zero_day=bool(u_zday[i] < cfg.p_z),
                phished=phished,
                has_file=(nid == target),
                access=AccessBits(network=net, user=phished),
            )
        )

    used = set().union(*(h.present_vulns for h in hosts)) if hosts else set()
    exploits = {cid: catalog.derived[cid] for cid in sorted(used)}
    inst = ScenarioInstance(
        topology=t,
        hosts=tuple(hosts),
        target_host=int(target),
        trial_seed=trial_seed,
        exploits=exploits,
        masquerade_compromises=cfg.masquerade_compromises,
    )
    if cfg.vpn_enabled:
        inst = apply_vpn_rule(inst)
    return inst


def apply_vpn_rule(s: ScenarioInstance) -> ScenarioInstance:
    """If any host was phished, Servers, Gateways, and non-community Desktops
    become remotely accessible (the attacker rides the VPN)."""
    if not any(h.phished for h in s.hosts):
        return s
    by_id = s.topology.by_id
    new_hosts = []
    for h in s.hosts:
        node = by_id[h.host_id]
        exposed = node.role in (Role.SERVER, Role.GATEWAY) or (
            node.role is Role.DESKTOP and node.community_id is None
        )
        if exposed and not h.access.network:
            h = replace(h, access=replace(h.access, network=True))
        new_hosts.append(h)
    return replace(s, hosts=tuple(new_hosts))


def scenario_to_json(s: ScenarioInstance) -> dict:
    """Stable JSON mirror for debugging and for the PDDL exporter."""
    return {
        "trial_seed": s.trial_seed,
        "target_host": s.target_host,
        "masquerade_compromises": s.masquerade_compromises,
        "topology": topology_to_json(s.topology),
        "hosts": [
            {
                "id": h.host_id,
                "profile": h.profile_name,
                "present": sorted(h.present_vulns),
                "zero_day": h.zero_day,
                "phished": h.phished,
                "has_file": h.has_file,
                "access": {
                    "network": h.access.network,
                    "adjacent": h.access.adjacent,
                    "local": h.access.local,
                    "user": h.access.user,
                    "root": h.access.root,
                    "read": h.access.read,
                    "write": h.access.write,
                    "compromised": h.access.compromised,
                },
            }
            for h in sorted(s.hosts, key=lambda h: h.host_id)
        ],
        "exploits": {
            cid: {
                "access_requirement": d.access_requirement.value,
                "requires_credentials": d.requires_credentials,
                "presence_probability": d.presence_probability,
                "grants": sorted(g.value for g in d.grants),
            }
            for cid, d in sorted(s.exploits.items())
        },
    }
