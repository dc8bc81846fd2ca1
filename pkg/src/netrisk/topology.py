"""Network topology generation: random digraphs and organizational networks.

Two generators: a directed Erdos-Renyi model (role-free, every node a
Desktop) and an organizational model built from a power-law degree sample,
where degree-1 nodes stay individual machines and larger degrees are grouped
into gateway-fronted communities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable

import numpy as np

from . import rng


class Role(Enum):
    DESKTOP = "Desktop"
    SERVER = "Server"
    GATEWAY = "Gateway"


class ErThreshold(Enum):
    NP1 = "NP1"  # p = 1/n, emergence of a giant component
    LNN = "LNN"  # p = ln(n)/n, connectivity threshold


@dataclass(frozen=True)
class Node:
    node_id: int
    role: Role
    community_id: int | None
    remotely_accessible: bool


@dataclass(frozen=True)
class PolicySet:
    restrict_gateways: bool = False
    restrict_servers: bool = False

    def tag(self) -> str:
        """Two-letter label, T/F per flag, gateways first."""
        return ("T" if self.restrict_gateways else "F") + (
            "T" if self.restrict_servers else "F"
        )


@dataclass(frozen=True)
class Topology:
    nodes: tuple[Node, ...]
    edges: frozenset[tuple[int, int]]

    @cached_property
    def by_id(self) -> dict[int, Node]:
        return {n.node_id: n for n in self.nodes}

    @cached_property
    def out_adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {n.node_id: [] for n in self.nodes}
        for src, dst in self.edges:
            adj[src].append(dst)
        return {k: tuple(sorted(v)) for k, v in adj.items()}

    @cached_property
    def role_assigned(self) -> bool:
        """True when generation already decided roles/remote access (the
        organizational model); False for role-free graphs (ER), where remote
        accessibility is sampled downstream."""
        return any(
            n.role is not Role.DESKTOP
            or n.community_id is not None
            or n.remotely_accessible
            for n in self.nodes
        )


def validate_topology(t: Topology) -> None:
    ids = {n.node_id for n in t.nodes}
    if len(ids) != len(t.nodes):
        raise ValueError("duplicate node ids")
    gateways_per_community: dict[int, int] = {}
    members_per_community: dict[int, int] = {}
    for n in t.nodes:
        if n.role is Role.SERVER and (n.community_id is not None or not n.remotely_accessible):
            raise ValueError(f"server {n.node_id} must be remote and community-free")
        if n.role is Role.GATEWAY and n.community_id is None:
            raise ValueError(f"gateway {n.node_id} must belong to a community")
        if n.community_id is not None:
            members_per_community[n.community_id] = members_per_community.get(n.community_id, 0) + 1
            if n.role is Role.GATEWAY:
                gateways_per_community[n.community_id] = (
                    gateways_per_community.get(n.community_id, 0) + 1
                )
    for cid in members_per_community:
        if gateways_per_community.get(cid, 0) != 1:
            raise ValueError(f"community {cid} must have exactly one gateway")
    for src, dst in t.edges:
        if src == dst:
            raise ValueError(f"self-loop at {src}")
        if src not in ids or dst not in ids:
            raise ValueError(f"edge ({src},{dst}) references unknown node")


def gen_erdos_renyi(n: int, p: float, seed: int) -> Topology:
    """Directed G(n, p): each ordered pair of distinct nodes gets an edge
    independently with probability p.  All nodes are Desktops; remote
    accessibility is left to scenario instantiation."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    g = rng.generator(seed, rng.TOPOLOGY)
    draws = g.random((n, n))
    mask = draws < p
    np.fill_diagonal(mask, False)
    edges = frozenset((int(s), int(d)) for s, d in np.argwhere(mask))
    nodes = tuple(Node(i, Role.DESKTOP, None, False) for i in range(n))
    return Topology(nodes=nodes, edges=edges)


def er_threshold_p(n: int, kind: ErThreshold) -> float:
    if not isinstance(n, int) or n < 2:
        raise ValueError("n must be an integer >= 2")
    if kind is ErThreshold.NP1:
        return 1.0 / n
    if kind is ErThreshold.LNN:
        return math.log(n) / n
    raise ValueError(f"unknown threshold kind {kind!r}")


def sample_powerlaw_degrees(n: int, alpha: float, seed: int) -> list[int]:
    """n i.i.d. draws from P(k) proportional to k^-alpha on 1..max(1, n-1),
    returned ascending."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    kmax = max(1, n - 1)
    ks = np.arange(1, kmax + 1, dtype=np.float64)
    weights = ks ** (-alpha)
    cdf = np.cumsum(weights / weights.sum())
    g = rng.generator(seed, rng.TOPOLOGY, 1)
    draws = g.random(n)
    degrees = np.searchsorted(cdf, draws, side="right") + 1
    return sorted(int(d) for d in degrees)


def group_communities(degrees: list[int]) -> tuple[int, list[int]]:
    """Split an ascending degree sample into singleton count and community
    sizes.  Degree-1 entries are singletons; the rest are consumed greedily,
    each group taking d+1 entries where d is the group's first value (the
    final group may be undersized)."""
    if any((not isinstance(d, int)) or d < 1 for d in degrees):
        raise ValueError("degrees must be integers >= 1")
    if list(degrees) != sorted(degrees):
        raise ValueError("degrees must be ascending")
    singles = sum(1 for d in degrees if d == 1)
    rest = [d for d in degrees if d > 1]
    sizes: list[int] = []
    while rest:
        d = rest[0]
        take = min(d + 1, len(rest))
        sizes.append(take)
        rest = rest[take:]
    return singles, sizes


def gen_organizational(
    n: int, alpha: float, p_n: float, policies: PolicySet, seed: int
) -> Topology:
    """Organizational network: power-law degrees grouped into communities
    (complete subgraphs fronted by one gateway each, the lowest node id),
    remaining nodes individual machines wired bi-directionally to each other
    and to every gateway.  Individual machines become remotely accessible
    Servers with probability p_n."""
    degrees = sample_powerlaw_degrees(n, alpha, seed)
    return build_organizational(degrees, p_n, policies, seed)


def build_organizational(
    degrees: list[int], p_n: float, policies: PolicySet, seed: int
) -> Topology:
    """Assemble an organizational topology from an explicit degree sample."""
    if not 0.0 <= p_n <= 1.0:
        raise ValueError("p_n must lie in [0, 1]")
    singles, sizes = group_communities(degrees)

    nodes: list[Node] = []
    for i in range(singles):
        is_server = rng.uniform(seed, rng.SERVER_FLAG, i) < p_n
        role = Role.SERVER if is_server else Role.DESKTOP
        nodes.append(Node(i, role, None, is_server))
    next_id = singles
    blocks: list[list[int]] = []
    for cid, size in enumerate(sizes):
        block = list(range(next_id, next_id + size))
        next_id += size
        blocks.append(block)
        for j, nid in enumerate(block):
            role = Role.GATEWAY if j == 0 else Role.DESKTOP
            nodes.append(Node(nid, role, cid, False))

    edges: set[tuple[int, int]] = set()
    single_ids = list(range(singles))
    gateway_ids = [b[0] for b in blocks]
    for a in single_ids:
        for b in single_ids:
            if a != b:
                edges.add((a, b))
    for s in single_ids:
        for g in gateway_ids:
            edges.add((s, g))
            edges.add((g, s))
    for block in blocks:
        for a in block:
            for b in block:
                if a != b:
                    edges.add((a, b))

    t = Topology(nodes=tuple(nodes), edges=frozenset(edges))
    return apply_policies(t, policies)


def apply_policies(t: Topology, policies: PolicySet) -> Topology:
    """Filter outgoing edges per policy; incoming edges are never touched and
    no edge is ever added."""
    if not (policies.restrict_gateways or policies.restrict_servers):
        return t
    by_id = t.by_id
    kept: set[tuple[int, int]] = set()
    for src, dst in t.edges:
        s = by_id[src]
        if policies.restrict_servers and s.role is Role.SERVER:
            continue
        if (
            policies.restrict_gateways
            and s.role is Role.GATEWAY
            and by_id[dst].community_id != s.community_id
        ):
            continue
        kept.add((src, dst))
    return Topology(nodes=t.nodes, edges=frozenset(kept))


# --- serialization ----------------------------------------------------------

def topology_to_json(t: Topology) -> dict:
    return {
        "nodes": [
            {
                "id": n.node_id,
                "role": n.role.value,
                "community": n.community_id,
                "remote": n.remotely_accessible,
            }
            for n in sorted(t.nodes, key=lambda n: n.node_id)
        ],
        "edges": [[s, d] for s, d in sorted(t.edges)],
    }


def topology_from_json(data: dict) -> Topology:
    nodes = tuple(
        Node(int(n["id"]), Role(n["role"]), n["community"], bool(n["remote"]))
        for n in data["nodes"]
    )
    edges = frozenset((int(s), int(d)) for s, d in data["edges"])
    t = Topology(nodes=nodes, edges=edges)
    validate_topology(t)
    return t


def topology_to_dot(t: Topology) -> str:
    lines = ["digraph topology {"]
    for n in sorted(t.nodes, key=lambda n: n.node_id):
        attrs = [f'label="{n.node_id}\\n{n.role.value}"']
        if n.role is Role.SERVER:
            attrs.append("shape=box")
        elif n.role is Role.GATEWAY:
            attrs.append("shape=diamond")
        if n.community_id is not None:
            attrs.append(f'comment="community {n.community_id}"')
        lines.append(f"  n{n.node_id} [{', '.join(attrs)}];")
    for s, d in sorted(t.edges):
        lines.append(f"  n{s} -> n{d};")
    lines.append("}")
    return "\n".join(lines) + "\n"
