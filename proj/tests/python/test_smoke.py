"""End-to-end smoke checks: the module imports and the CLI round-trips."""

import json
import math
import os
import subprocess

import numpy as np
import pytest

import spinsync as ss


def test_module_import_and_version():
    assert ss.__version__
    assert hasattr(ss, "build_generator")


def test_generator_spectrum_contract():
    gen = ss.build_generator(ss.build_model(1.15, -1.0), ss.BathParams())
    sp = ss.spectrum(gen)
    vals = np.asarray(sp.values)
    assert vals.shape == (16,)
    assert vals.real.max() <= 1e-9
    assert not sp.defective


def test_slow_mode_frequency():
    gen = ss.build_generator(ss.build_model(1.15, -1.0), ss.BathParams())
    sp = ss.spectrum(gen)
    rho0 = ss.product_state(math.pi / 4, 0.0, math.pi / 8, math.pi / 2)
    pair = ss.select_slow_pair(gen, sp, rho0)
    assert pair.valid
    assert pair.slow.frequency == pytest.approx(2.306, abs=5e-3)
    assert pair.gap <= 0.0


def test_propagation_preserves_trace():
    gen = ss.build_generator(ss.build_model(1.02, -1.0), ss.BathParams())
    sp = ss.spectrum(gen)
    rho0 = ss.bell_state("psi_plus")
    run = ss.propagate(gen, sp, rho0, [0.0, 5.0, 25.0], store_states=True)
    for state in run.states:
        assert np.asarray(state).trace() == pytest.approx(1.0, abs=1e-10)
    assert max(run.trace_err) <= 1e-9


def test_dephasing_channel_protects_inner_coherence():
    ch = ss.make_dephasing_channel(ss.build_model(1.02, 1.0), ss.BathParams())
    rho = np.asarray(ch.evolve(ss.bell_state("psi_plus"), 300.0))
    assert abs(rho[1, 2]) == pytest.approx(0.5, abs=1e-10)
    assert list(ch.lambdas) == [4.0, 0.0, 0.0, -4.0]


def test_correlation_measures():
    v = ss.discord_and_classical(ss.bell_state("psi_minus"))
    assert v.discord == pytest.approx(1.0, abs=1e-6)
    assert v.mutual_info == pytest.approx(2.0, abs=1e-8)
    assert ss.concurrence(ss.bell_state("phi_plus")) == pytest.approx(1.0, abs=1e-10)
    w = 0.5 * np.asarray(ss.bell_state("psi_minus")) + 0.125 * np.eye(4)
    assert ss.concurrence(w) == pytest.approx(0.25, abs=1e-10)


def test_sync_analytics():
    cfg = ss.SyncConfig(horizon=60.0)
    gen = ss.build_generator(ss.build_model(1.02, -1.0), ss.BathParams())
    sp = ss.spectrum(gen)
    rho0 = ss.product_state(math.pi / 4, 0.0, math.pi / 8, math.pi / 2)
    times = ss.time_grid(cfg.horizon + cfg.window, cfg.dt)
    run = ss.propagate(gen, sp, rho0, times)
    rep = ss.sync_time(run.sigma1x, run.sigma2x, times, cfg)
    assert not rep.reached  # locks near t = 188, past this horizon
    assert len(rep.series) > 0


def cli():
    path = os.environ.get("SPINSYNC_CLI")
    if not path:
        pytest.skip("SPINSYNC_CLI not set")
    return path


def test_cli_evolve_roundtrip(tmp_path):
    cfg = {"evolve": {"t_max": 2.0, "dt": 0.5}}
    cfg_path = tmp_path / "run.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "out"
    res = subprocess.run(
        [cli(), "--config", str(cfg_path), "--out", str(out), "evolve"],
        capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    rows = (out / "run_trajectory.csv").read_text().strip().splitlines()
    assert rows[0].startswith("t,")
    assert len(rows) == 6  # header + 5 samples
    manifest = json.loads((out / "run_manifest.json").read_text())
    assert manifest["command"] == "evolve"


def test_cli_rejects_bad_config(tmp_path):
    res = subprocess.run(
        [cli(), "--override", "model.g=1.5", "--out", str(tmp_path / "o"), "evolve"],
        capture_output=True, text=True)
    assert res.returncode == 2
    assert "g" in res.stderr
