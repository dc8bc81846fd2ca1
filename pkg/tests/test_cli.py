"""Command-line interface: parsing, outputs, determinism, exit codes."""

import json
from pathlib import Path

from netrisk import cli
from netrisk.pddlsim import goal_reachable, parse_domain, parse_problem


def json_docs(stdout: str) -> list[dict]:
    decoder = json.JSONDecoder()
    docs, idx = [], 0
    while idx < len(stdout):
        while idx < len(stdout) and stdout[idx] in " \n\t":
            idx += 1
        if idx >= len(stdout):
            break
        doc, idx = decoder.raw_decode(stdout, idx)
        docs.append(doc)
    return docs


def test_parse_defaults():
    args = cli.parse_args(["assess"])
    assert args.seed == 0
    assert args.trials == 1000
    assert args.out == Path("./results")
    assert args.network == "org"
    assert args.p_n == 0.1


def test_unknown_subcommand_exits_2(capsys):
    assert cli.main(["frobnicate"]) == 2


def test_conflicting_er_flags_exit_2(tmp_path, capsys):
    code = cli.main([
        "assess", "--network", "er", "--er-p", "0.5", "--er-threshold", "NP1",
        "--out", str(tmp_path),
    ])
    assert code == 2
    assert "parameter error" in capsys.readouterr().err


def test_bad_probability_exits_2(tmp_path, capsys):
    code = cli.main(["assess", "--p-n", "2.0", "--out", str(tmp_path)])
    assert code == 2


def test_unwritable_out_exits_3(capsys):
    code = cli.main(["assess", "--trials", "1", "--out", "/dev/null/sub"])
    assert code == 3


def test_resolved_config_printed(tmp_path, capsys):
    code = cli.main([
        "assess", "--seed", "7", "--trials", "25", "--n", "20",
        "--out", str(tmp_path),
    ])
    assert code == 0
    docs = json_docs(capsys.readouterr().out)
    assert len(docs) == 2
    config = docs[0]["resolved-config"]
    assert config["seed"] == 7
    assert config["trials"] == 25
    assert config["n"] == 20
    assert config["command"] == "assess"
    assert "p_s" in docs[1]["results"]


def test_assess_rerun_byte_identical(tmp_path, capsys):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    argv = ["assess", "--seed", "7", "--trials", "60", "--n", "25"]
    assert cli.main(argv + ["--out", str(out_a)]) == 0
    assert cli.main(argv + ["--out", str(out_b)]) == 0
    csv_a = (out_a / "assess.csv").read_bytes()
    assert csv_a == (out_b / "assess.csv").read_bytes()
    header, row = csv_a.decode().splitlines()
    assert header == "param_name,param_value,p_s,ci95,trials,seed"
    assert row.startswith("p_n,0.1,") and row.endswith(",60,7")


def test_gen_net_writes_network_json(tmp_path, capsys):
    code = cli.main([
        "gen-net", "--network", "er", "--n", "12", "--er-threshold", "LNN",
        "--seed", "3", "--out", str(tmp_path),
    ])
    assert code == 0
    doc = json.loads((tmp_path / "network.json").read_text())
    assert len(doc["nodes"]) == 12
    assert all(len(e) == 2 for e in doc["edges"])


def test_gen_net_org_policies(tmp_path, capsys):
    code = cli.main([
        "gen-net", "--n", "30", "--restrict-gateways", "--restrict-servers",
        "--out", str(tmp_path),
    ])
    assert code == 0
    doc = json.loads((tmp_path / "network.json").read_text())
    roles = {n["role"] for n in doc["nodes"]}
    assert roles <= {"Desktop", "Server", "Gateway"}


def test_interdict_outputs(tmp_path, capsys):
    code = cli.main([
        "interdict", "--n", "25", "--p-n", "0.01", "--p-z", "0",
        "--trials", "80", "--theta", "0.05", "--out", str(tmp_path),
    ])
    assert code == 0
    docs = json_docs(capsys.readouterr().out)
    results = docs[1]["results"]
    assert results["reached-threshold"] is True
    csv_text = (tmp_path / "interdict.csv").read_text()
    assert csv_text.startswith("rank,cve_id,risk_after,delta")
    payload = json.loads((tmp_path / "interdict.json").read_text())
    assert payload["patched"] == results["patched"]


def test_export_pddl_files_validate(tmp_path, capsys):
    code = cli.main([
        "export-pddl", "--network", "er", "--n", "6", "--er-p", "0.4",
        "--seed", "11", "--out", str(tmp_path), "--name", "scn",
    ])
    assert code == 0
    domain_text = (tmp_path / "scn-domain.pddl").read_text()
    problem_text = (tmp_path / "scn-problem.pddl").read_text()
    parse_domain(domain_text)
    parse_problem(problem_text)
    goal_reachable(domain_text, problem_text)  # grounds without error


def test_experiment_subcommand(tmp_path, capsys):
    code = cli.main([
        "experiment", "--name", "gen1-comp", "--grid", "0.1",
        "--trials", "15", "--out", str(tmp_path),
    ])
    assert code == 0
    docs = json_docs(capsys.readouterr().out)
    curves = docs[1]["results"]["curves"]
    assert set(curves) == {"ff", "ft", "tf", "tt"}
    for path in curves.values():
        assert Path(path).exists()
    assert (tmp_path / "gen1-comp.svg").exists()


def test_experiment_bad_name_exits_2(capsys):
    assert cli.main(["experiment", "--name", "nope"]) == 2
