"""Experiment sweep runner: schemas, determinism, curve families."""

import math
from pathlib import Path

import pytest

from netrisk.experiments import (
    HOST_COUNTS,
    INTERDICT_HOSTS,
    PN_GRID,
    PP_GRID,
    Curve,
    ExperimentName,
    ExperimentSpec,
    default_spec,
    interdiction_runs,
    run_experiment,
    sweep_curves,
)

HEADER = "param_name,param_value,p_s,ci95,trials,seed"


def test_default_grids():
    assert default_spec("er_1").grid == PN_GRID
    assert default_spec("gen1-phish").grid == PP_GRID
    assert default_spec("threat-vuln").grid == (25.0, 50.0)
    assert len(PN_GRID) == 20 and PN_GRID[0] == 0.01 and PN_GRID[-1] == 0.20
    assert HOST_COUNTS == (25, 50, 100, 150)
    assert INTERDICT_HOSTS == (25, 50)


def test_empty_grid_rejected():
    with pytest.raises(ValueError):
        ExperimentSpec(name=ExperimentName.ER_SWEEP, grid=())
    with pytest.raises(ValueError):
        ExperimentSpec(name=ExperimentName.ER_SWEEP, grid=(0.1,), trials=0)


def test_unknown_name_rejected():
    with pytest.raises(ValueError):
        default_spec("no-such-experiment")


def test_er_sweep_csv_schema(tmp_path):
    spec = default_spec("er_1", trials=30, grid=(0.05, 0.20), out_dir=tmp_path)
    manifest = run_experiment(spec)
    assert set(manifest["curves"]) == {"np1", "lnn"}
    for path in manifest["curves"].values():
        lines = Path(path).read_text().splitlines()
        assert lines[0] == HEADER
        assert len(lines) == 1 + len(spec.grid)
        for line in lines[1:]:
            name, value, p_s, ci, trials, seed = line.split(",")
            assert name == "p_n"
            p, hw = float(p_s), float(ci)
            assert 0.0 <= p <= 1.0
            want = 1.96 * math.sqrt(p * (1.0 - p) / 30)
            assert hw == pytest.approx(want, abs=1e-6)
            assert trials == "30" and seed == "0"
    assert Path(manifest["plot"]).exists()


def test_rerun_byte_identical(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out in (out_a, out_b):
        run_experiment(
            default_spec("gen1-host", trials=20, grid=(0.10,), out_dir=out,
                         curves=("n25",))
        )
    csv_a = (out_a / "gen1-host__n25.csv").read_bytes()
    csv_b = (out_b / "gen1-host__n25.csv").read_bytes()
    assert csv_a == csv_b
    assert (out_a / "gen1-host.svg").read_bytes() == (
        out_b / "gen1-host.svg"
    ).read_bytes()


def test_seed_changes_estimates(tmp_path):
    spec_a = default_spec("er_1", trials=50, grid=(0.10,), curves=("np1",))
    spec_b = default_spec("er_1", trials=50, grid=(0.10,), curves=("np1",),
                          base_seed=99)
    rows_a = sweep_curves(spec_a)[0].rows
    rows_b = sweep_curves(spec_b)[0].rows
    assert rows_a != rows_b  # almost surely, at 50 trials


def test_curve_selection():
    spec = default_spec("gen1-novpn", trials=5, grid=(0.05,), curves=("2.5-tt",))
    curves = sweep_curves(spec)
    assert [c.slug for c in curves] == ["2.5-tt"]
    with pytest.raises(ValueError):
        sweep_curves(default_spec("er_1", trials=5, grid=(0.05,),
                                  curves=("nope",)))


def test_policy_comparison_curve_family():
    spec = default_spec("gen1-comp", trials=40, grid=(0.15,))
    curves = {c.slug: c for c in sweep_curves(spec)}
    assert set(curves) == {"ff", "ft", "tf", "tt"}
    # Restrictive policies only remove connections, and trials share random
    # numbers across curves, so full restriction can never beat no restriction.
    assert curves["tt"].rows[0][1] <= curves["ff"].rows[0][1]


def test_interdiction_run_outputs(tmp_path):
    spec = default_spec("threat-vuln", trials=100, grid=(25.0,), out_dir=tmp_path)
    manifest = run_experiment(spec)
    trace_lines = Path(manifest["curves"]["n25"]).read_text().splitlines()
    assert trace_lines[0] == HEADER
    values = [float(line.split(",")[2]) for line in trace_lines[1:]]
    assert all(a >= b for a, b in zip(values, values[1:]))
    order_csv = Path(manifest["extra"]["n25-order.csv"]).read_text()
    assert order_csv.startswith("rank,cve_id,risk_after,delta")
    assert Path(manifest["extra"]["n25-order.json"]).exists()


def test_interdiction_trace_matches_result():
    spec = default_spec("threat-vuln", trials=100, grid=(25.0,))
    results = interdiction_runs(spec)
    assert set(results) == {25}
    trace = results[25].risk_trace
    assert len(trace) == len(results[25].order) + 1


def test_phish_curve_uses_p_p():
    spec = default_spec("gen1-phish", trials=10, grid=(0.05,), curves=("n25",))
    (curve,) = sweep_curves(spec)
    assert curve.param_name == "p_p"
    assert isinstance(curve, Curve)
