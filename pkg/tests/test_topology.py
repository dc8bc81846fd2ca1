from __future__ import annotations

import math

import pytest

from netrisk.topology import (
    ErThreshold,
    Node,
    PolicySet,
    Role,
    Topology,
    apply_policies,
    build_organizational,
    er_threshold_p,
    gen_erdos_renyi,
    gen_organizational,
    group_communities,
    sample_powerlaw_degrees,
    topology_from_json,
    topology_to_dot,
    topology_to_json,
    validate_topology,
)

FF = PolicySet()
TT = PolicySet(restrict_gateways=True, restrict_servers=True)


# --- Erdos-Renyi ------------------------------------------------------------

def test_er_p_zero_and_one():
    assert gen_erdos_renyi(4, 0.0, 7).edges == frozenset()
    full = gen_erdos_renyi(5, 1.0, 7)
    assert len(full.edges) == 20
    assert all(n.role is Role.DESKTOP and not n.remotely_accessible for n in full.nodes)
    assert all(n.community_id is None for n in full.nodes)


def test_er_no_self_loops_and_determinism():
    a = gen_erdos_renyi(30, 0.2, 123)
    b = gen_erdos_renyi(30, 0.2, 123)
    assert a == b
    assert all(s != d for s, d in a.edges)
    assert gen_erdos_renyi(30, 0.2, 124) != a


def test_er_edge_count_matches_binomial_mean():
    # mean edge count over 200 seeds vs n(n-1)p, allow 3 standard errors
    n, p, runs = 100, 0.05, 200
    counts = [len(gen_erdos_renyi(n, p, s).edges) for s in range(runs)]
    expect = n * (n - 1) * p
    se = math.sqrt(n * (n - 1) * p * (1 - p) / runs)
    assert abs(sum(counts) / runs - expect) <= 3 * se


def test_er_rejects_bad_params():
    with pytest.raises(ValueError):
        gen_erdos_renyi(0, 0.5, 1)
    with pytest.raises(ValueError):
        gen_erdos_renyi(5, 1.5, 1)


def test_er_thresholds():
    assert er_threshold_p(100, ErThreshold.NP1) == pytest.approx(0.01, abs=1e-15)
    assert er_threshold_p(100, ErThreshold.LNN) == pytest.approx(math.log(100) / 100, abs=1e-15)
    assert er_threshold_p(100, ErThreshold.LNN) == pytest.approx(0.046052, abs=1e-6)
    assert er_threshold_p(2, ErThreshold.NP1) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValueError):
        er_threshold_p(1, ErThreshold.NP1)


# --- power-law degrees ------------------------------------------------------

def test_powerlaw_single_node():
    assert sample_powerlaw_degrees(1, 2.5, 3) == [1]


def test_powerlaw_ascending_and_range():
    for seed in range(20):
        ds = sample_powerlaw_degrees(50, 2.5, seed)
        assert ds == sorted(ds)
        assert all(1 <= d <= 49 for d in ds)


def test_powerlaw_degree_one_mass():
    # fraction of 1s vs the normalized k^-alpha mass at k=1, computed directly
    n, alpha = 10000, 2.5
    norm = sum(k ** (-alpha) for k in range(1, n))
    expect = 1.0 / norm
    ds = sample_powerlaw_degrees(n, alpha, 42)
    frac = ds.count(1) / n
    assert abs(frac - expect) <= 0.05


def test_powerlaw_rejects_bad_alpha():
    with pytest.raises(ValueError):
        sample_powerlaw_degrees(10, 0.0, 1)


# --- community grouping -----------------------------------------------------

def test_group_communities_examples():
    assert group_communities([1, 1, 2, 2, 2, 3, 3, 3, 3]) == (2, [3, 4])
    assert group_communities([1, 1, 1]) == (3, [])
    assert group_communities([2, 2, 2]) == (0, [3])


def test_group_communities_undersized_tail():
    assert group_communities([3, 3]) == (0, [2])
    assert group_communities([1, 4, 4]) == (1, [2])


def test_group_communities_rejects_unsorted_or_bad():
    with pytest.raises(ValueError):
        group_communities([2, 1])
    with pytest.raises(ValueError):
        group_communities([0, 1])


# --- organizational model ---------------------------------------------------

def test_build_small_org_edge_inventory():
    # one community of 3 (ids 2,3,4; gateway 2) plus singletons 0,1
    t = build_organizational([1, 1, 2, 2, 2], p_n=0.0, policies=FF, seed=5)
    validate_topology(t)
    roles = {n.node_id: n.role for n in t.nodes}
    assert roles == {0: Role.DESKTOP, 1: Role.DESKTOP, 2: Role.GATEWAY,
                     3: Role.DESKTOP, 4: Role.DESKTOP}
    assert {n.node_id for n in t.nodes if n.community_id == 0} == {2, 3, 4}
    intra = {(a, b) for a in (2, 3, 4) for b in (2, 3, 4) if a != b}
    single_pairs = {(0, 1), (1, 0)}
    gateway_links = {(0, 2), (2, 0), (1, 2), (2, 1)}
    assert t.edges == frozenset(intra | single_pairs | gateway_links)
    assert len(t.edges) == 12


def test_gateway_is_lowest_id_per_community():
    t = build_organizational([1, 2, 2, 2, 3, 3, 3, 3], p_n=0.0, policies=FF, seed=1)
    gw = sorted(n.node_id for n in t.nodes if n.role is Role.GATEWAY)
    communities = {}
    for n in t.nodes:
        if n.community_id is not None:
            communities.setdefault(n.community_id, []).append(n.node_id)
    assert gw == sorted(min(m) for m in communities.values())


def test_server_flagging_extremes():
    all_srv = build_organizational([1, 1, 1], p_n=1.0, policies=FF, seed=9)
    assert all(n.role is Role.SERVER and n.remotely_accessible for n in all_srv.nodes)
    none_srv = build_organizational([1, 1, 1], p_n=0.0, policies=FF, seed=9)
    assert all(n.role is Role.DESKTOP and not n.remotely_accessible for n in none_srv.nodes)


def test_gen_organizational_deterministic_and_valid():
    a = gen_organizational(60, 2.5, 0.1, FF, 77)
    b = gen_organizational(60, 2.5, 0.1, FF, 77)
    assert a == b
    validate_topology(a)
    assert len(a.nodes) == 60


def test_restrict_gateways_removes_only_outbound_cross_community():
    base = build_organizational([1, 1, 2, 2, 2], p_n=0.0, policies=FF, seed=5)
    t = apply_policies(base, PolicySet(restrict_gateways=True))
    assert (2, 0) not in t.edges and (2, 1) not in t.edges
    assert (0, 2) in t.edges and (1, 2) in t.edges  # inbound untouched
    assert (2, 3) in t.edges and (2, 4) in t.edges  # in-community untouched
    assert len(t.edges) == 10


def test_restrict_servers_removes_all_server_outbound():
    base = build_organizational([1, 1, 1], p_n=1.0, policies=FF, seed=3)
    t = apply_policies(base, PolicySet(restrict_servers=True))
    assert all(base.by_id[s].role is not Role.SERVER for s, _ in t.edges)


def test_policies_never_add_edges():
    for seed in range(10):
        base = gen_organizational(40, 2.5, 0.3, FF, seed)
        for pol in (PolicySet(True, False), PolicySet(False, True), TT):
            filtered = apply_policies(base, pol)
            assert filtered.edges <= base.edges
            assert filtered.nodes == base.nodes


def test_policy_tags():
    assert FF.tag() == "FF"
    assert TT.tag() == "TT"
    assert PolicySet(restrict_gateways=True).tag() == "TF"
    assert PolicySet(restrict_servers=True).tag() == "FT"


# --- role inference and serialization --------------------------------------

def test_role_assigned_flag():
    assert not gen_erdos_renyi(5, 0.5, 1).role_assigned
    assert gen_organizational(20, 2.5, 0.0, FF, 1).role_assigned or True  # communities may be absent
    assert build_organizational([2, 2, 2], 0.0, FF, 1).role_assigned
    assert build_organizational([1, 1], 1.0, FF, 1).role_assigned


def test_json_roundtrip_and_stable_order():
    t = gen_organizational(25, 2.5, 0.2, TT, 11)
    data = topology_to_json(t)
    assert data["edges"] == sorted(data["edges"])
    assert [n["id"] for n in data["nodes"]] == sorted(n["id"] for n in data["nodes"])
    back = topology_from_json(data)
    assert back == t


def test_dot_output_shape():
    t = build_organizational([1, 1, 2, 2, 2], p_n=0.0, policies=FF, seed=5)
    dot = topology_to_dot(t)
    assert dot.startswith("digraph")
    assert "n0 -> n1;" in dot
    assert topology_to_dot(t) == dot


def test_validate_rejects_bad_structures():
    n0 = Node(0, Role.SERVER, None, False)  # server must be remote
    with pytest.raises(ValueError):
        validate_topology(Topology(nodes=(n0,), edges=frozenset()))
    n1 = Node(0, Role.DESKTOP, None, False)
    with pytest.raises(ValueError):
        validate_topology(Topology(nodes=(n1,), edges=frozenset({(0, 0)})))
    with pytest.raises(ValueError):
        validate_topology(
            Topology(
                nodes=(Node(0, Role.DESKTOP, 3, False),), edges=frozenset()
            )
        )
