import json

import numpy as np
import pytest
from click.testing import CliRunner
from dataclasses import replace

from isacsim.cli import main
from isacsim.errors import InputError
from isacsim.experiments import (SWEEP_M, ExperimentConfig, draw_trial, load_config, read_csv, run_scnr_cdf,
                                 run_se_sweep, run_trial, run_trials, scnr_cdf, to_csv, write_csv)

SMALL = dict(num_antennas=16, num_users=3, trials=3)


# -- config -----------------------------------------------------------------

def test_config_file_and_overrides(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\nseed = 7\nkappa_t = 0.02  # inline\nmethods = sca, mmse\nsweep-values = 1,2\n")
    cfg = load_config(p, base=dict(sweep_axis="m", trials=5), trials=9)
    assert cfg.seed == 7 and cfg.kappa_t == 0.02 and cfg.trials == 9
    assert cfg.methods == ("sca", "mmse") and cfg.sweep_values == (1.0, 2.0)
    assert cfg.sweep_axis == "m"


def test_none_overrides_are_ignored():
    assert load_config(None, seed=None) == ExperimentConfig()


@pytest.mark.parametrize("kwargs", [dict(bogus=1), dict(methods="sca,magic"), dict(sweep_axis="x"),
                                    dict(trials=0), dict(sweep_values="3,1")])
def test_bad_config_rejected(kwargs):
    with pytest.raises(InputError):
        load_config(None, **kwargs)


def test_sweep_axis_without_values_rejected():
    with pytest.raises(InputError):
        ExperimentConfig(sweep_axis="m").points()


def test_at_sets_swept_parameter():
    cfg = ExperimentConfig(**SWEEP_M)
    assert cfg.at(32.0).num_antennas == 32
    assert ExperimentConfig(sweep_axis="kappa_r", sweep_values=(0.0, 0.1)).at(0.1).kappa_r == 0.1


# -- trials -------------------------------------------------------------------

def test_common_random_numbers_across_methods():
    cfg = ExperimentConfig(**SMALL)
    s1, u1 = draw_trial(cfg, 1)
    s2, u2 = draw_trial(replace(cfg, methods=("mmse",), kappa_t=0.05), 1)
    assert s1 == s2 and np.array_equal(u1.H, u2.H)
    assert not np.array_equal(u1.H, draw_trial(cfg, 2)[1].H)


def test_zero_target_ideal_hardware_sca_equals_mmse():
    cfg = ExperimentConfig(**SMALL, gamma0=0.0, kappa_t=0.0, kappa_r=0.0, methods=("mmse", "sca"))
    for t in range(3):
        rows = run_trial(cfg, t)
        assert rows[0].sum_se == pytest.approx(rows[1].sum_se, rel=1e-12)


def test_power_allocation_meets_target_tightly():
    cfg = ExperimentConfig(num_antennas=64, trials=30, methods=("power_alloc",))
    rows = [r for r in run_trials(cfg) if r.feasible]
    assert rows
    s = np.array([r.scnr for r in rows])
    assert np.all(s >= cfg.gamma0 * (1 - 1e-9))
    # when the target binds the SCNR sits on it
    active = s[s < 1.5 * cfg.gamma0]
    if active.size > 2:
        assert np.percentile(active, 90) - np.percentile(active, 10) < 0.1 * cfg.gamma0


def test_rows_ordered_and_complete():
    cfg = ExperimentConfig(**SMALL, sweep_axis="m", sweep_values=(8, 16), hardware=("impaired", "ideal"),
                           methods=("mmse", "sca", "sca_unaware"))
    rows = run_trials(cfg)
    # unaware methods are skipped under ideal hardware
    assert len(rows) == 2 * 3 * (3 + 2)
    keys = [(r.sweep_value, r.trial) for r in rows]
    assert keys == sorted(keys)
    assert all(len(r.ue_sinr.split(";")) == 3 for r in rows)


def test_scnr_cdf_counts_and_monotone():
    cfg = ExperimentConfig(**SMALL)
    rows, points, counts = run_scnr_cdf(cfg)
    for (m, h), c in counts.items():
        pts = [p for p in points if p.method == m and p.hardware == h]
        assert c["trials"] == 3 and len(pts) == 3 - c["infeasible"]
        assert all(a.scnr <= b.scnr for a, b in zip(pts, pts[1:]))
        if pts:
            assert pts[-1].cdf == 1.0
    assert scnr_cdf([])[0] == []


def test_parallel_matches_serial():
    cfg = ExperimentConfig(**SMALL, methods=("mmse", "sca"))
    ser = to_csv(run_trials(cfg), cfg, exclude=["wall_time"])
    par = to_csv(run_trials(replace(cfg, workers=2)), cfg, exclude=["wall_time"])
    assert ser == par


# -- CSV -------------------------------------------------------------------------

def test_csv_reproducible_and_round_trips(tmp_path):
    cfg = ExperimentConfig(**SMALL, methods=("mmse", "power_alloc"))
    a = to_csv(run_trials(cfg), cfg, exclude=["wall_time"])
    b = to_csv(run_trials(cfg), cfg, exclude=["wall_time"])
    assert a == b
    rows, summary = run_se_sweep(replace(cfg, sweep_values=(8, 16)), axis="m")
    write_csv(tmp_path / "s.csv", summary, cfg)
    header, body = read_csv(tmp_path / "s.csv")
    assert "seed = 2025" in header and "num_antennas = 16" in header
    assert len(body) == 2 * 2
    for rec, pt in zip(body, summary):
        assert float(rec["mean_se"]) == pytest.approx(pt.mean_se, rel=1e-8, nan_ok=True)


def test_csv_cells():
    cfg = ExperimentConfig(**SMALL, methods=("mmse",))
    text = to_csv(run_trial(cfg, 0), None)
    head, first = text.split("\r\n")[:2]
    assert head.startswith("trial,seed,method")
    assert ",nan," in first
    assert to_csv([], cfg).startswith("# seed = 2025")


# -- CLI ---------------------------------------------------------------------------

def test_cli_validate_quick(tmp_path):
    res = CliRunner().invoke(main, ["validate", "--quick", "--out", str(tmp_path / "v.txt")])
    assert res.exit_code == 0, res.output
    lines = (tmp_path / "v.txt").read_text().splitlines()
    assert lines and all(ln.startswith("[PASS]") for ln in lines)


def test_cli_scnr_cdf(tmp_path):
    out, rows_out, scene = tmp_path / "c.csv", tmp_path / "r.csv", tmp_path / "scene.json"
    res = CliRunner().invoke(main, ["scnr-cdf", "--trials", "2", "--seed", "3", "--out", str(out),
                                    "--rows-out", str(rows_out), "--dump-scene", str(scene)])
    assert res.exit_code == 0, res.output
    header, body = read_csv(out)
    assert "trials = 2" in header and "seed = 3" in header
    assert {r["method"] for r in body} <= {"sca", "power_alloc", "sca_unaware", "power_alloc_unaware"}
    assert len(read_csv(rows_out)[1]) == 2 * 4
    d = json.loads(scene.read_text())
    assert d["seed"] == 3 and d["num_antennas"] == 100
    assert "H_real" not in d["users"]
    assert "infeasible" in res.stderr


def test_cli_se_sweep_with_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("num_users = 2\nnum_clutter = 2\n")
    res = CliRunner().invoke(main, ["se-sweep", "--axis", "kappa-r", "--values", "0,0.01", "--trials", "2",
                                    "--methods", "mmse,sca", "--config", str(cfg)])
    assert res.exit_code == 0, res.output
    lines = [ln for ln in res.stdout.splitlines() if not ln.startswith("#")]
    assert lines[0].startswith("sweep_axis,sweep_value,method")
    # two values, two hardware modes, two methods
    assert len(lines) == 1 + 8
    assert "# num_users = 2" in res.stdout and "# sweep_axis = kappa_r" in res.stdout


def test_cli_bad_input_is_usage_error():
    res = CliRunner().invoke(main, ["se-sweep", "--axis", "m", "--methods", "nope", "--trials", "1"])
    assert res.exit_code == 2
    assert "unknown methods" in res.output
