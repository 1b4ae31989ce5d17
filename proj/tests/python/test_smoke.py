import csv
import io
import math
import subprocess

import numpy as np
import pytest

import dremnorm as dn

HEADER = "t,u_amp,variant,omega,phi,theta_hat_0,theta_hat_1,theta_hat_2,theta_hat_3,err_norm,ub"


def test_realization_and_simulation():
    tf = dn.TransferFunction([2.0, 1.0], [1.0, 2.0])
    A, b, c = dn.realize_state_space(tf)
    np.testing.assert_array_equal(A, [[0, 1], [-2, -1]])
    np.testing.assert_array_equal(b, [0, 1])
    np.testing.assert_array_equal(c, [1, 2])
    y = dn.simulate(tf, dn.make_step_input(1.0, 0.01, 30.0), 0.01)
    assert abs(y[-1] - 0.5) <= 1e-3
    with pytest.raises(ValueError):
        dn.TransferFunction([1.0, 2.0], [3.0])


def test_noise_is_reproducible():
    y = [0.0] * 100
    a = dn.add_noise(y, 0.01, 0.1, 7)
    assert a == dn.add_noise(y, 0.01, 0.1, 7)
    assert max(abs(v) for v in a) <= 0.1


def test_normalizer():
    assert dn.numeric_order(100.0) == (1, pytest.approx(2.0))
    sign, eta = dn.numeric_order(0.0)
    assert sign == 1 and eta == -math.inf
    assert dn.saturate(-math.inf, -2.0) == -2.0
    phi, Y = dn.normalize(math.exp(-6.0), np.array([2.0, 1.0]) * math.exp(-6.0), -2.0)
    assert phi == pytest.approx(100 * math.exp(-6.0))
    np.testing.assert_allclose(Y, [2 * phi, phi])


def test_adjugate():
    adj, det = dn.adjugate_det(np.array([[1.0, 2.0], [3.0, 4.0]]))
    np.testing.assert_array_equal(adj, [[4, -2], [-3, 1]])
    assert det == -2.0
    rng = np.random.default_rng(1)
    M = rng.uniform(-1, 1, (5, 5))
    adj, det = dn.adjugate_det(M)
    np.testing.assert_allclose(adj @ M, det * np.eye(5), atol=1e-12)
    assert det == pytest.approx(np.linalg.det(M))
    with pytest.raises(ValueError):
        dn.adjugate_det(np.eye(9))


def test_excitation_analysis():
    t = np.arange(0, 10.001, 0.01)
    w = np.exp(-t)
    assert dn.excitation_level(w.tolist(), 0.01, 0.0, 10.0) == pytest.approx(0.5, abs=1e-4)
    T_j, crossings = dn.order_change_times(w.tolist(), 0.01, -2.0)
    assert T_j == pytest.approx(4.61, abs=0.01)
    assert crossings[0][1] == -1
    lower, upper = dn.error_bounds("plain", 1.0, 1.0, 10.0, alpha=0.5)
    assert lower is None and upper == pytest.approx(math.exp(-0.5))
    with pytest.raises(ValueError):
        dn.error_bounds("ne_mixed", 1.0, 1.0, 10.0)
    ub = dn.ub_curve(0.1, 0.7, 10.0, 0.0, 1.0, 20.0)
    assert ub[999] == 1.0 and ub[1000] == pytest.approx(math.exp(-0.07))


def test_synthetic_example():
    run = dn.run_synthetic(1.0)
    assert run["report"]["T_j"] == pytest.approx(4.61, abs=0.02)
    assert run["report"]["phi_energy"] == pytest.approx(5.11, rel=0.01)
    assert run["final_ratio"]["norm_excitation"] == pytest.approx(math.exp(-5.11), rel=0.01)


def test_experiment_and_csv(tmp_path):
    cfg = dn.preset_config("paper_sec5").replace("horizon = 20", "horizon = 2")
    result = dn.run_experiment(config_text=cfg)
    assert [r["u_amp"] for r in result.runs] == [1.0, 10.0, 100.0]
    text = result.to_csv()
    assert text.splitlines()[0] == HEADER
    assert len(text.splitlines()) == 1 + 3 * 3 * 200
    assert text == dn.run_experiment(config_text=cfg).to_csv()
    path = tmp_path / "out.csv"
    result.write_csv(str(path))
    assert path.read_text() == text
    rows = list(csv.DictReader(io.StringIO(text)))
    assert {r["variant"] for r in rows} == {"plain", "norm_excitation", "norm_classical"}
    assert all(r["ub"] == "" for r in rows if r["variant"] != "norm_excitation")


def test_sweep_labels():
    cfg = dn.preset_config("paper_sec5").replace("horizon = 20", "horizon = 1")
    result = dn.run_sweep([0.1, 1.0], config_text=cfg)
    assert list(result.runs[0]["loops"]) == ["norm_excitation@0.1", "norm_excitation@1"]


def test_errors_map_to_python():
    with pytest.raises(dn.ConfigError):
        dn.run_experiment(preset="nope")
    with pytest.raises(ValueError):
        dn.run_experiment(config_text="[gains]\nplain = -1\n")
    cfg = dn.preset_config("paper_sec5").replace("plain = 10000", "plain = 1e12")
    with pytest.raises(dn.NumericalError):
        dn.run_experiment(config_text=cfg)


def test_presets_match_shipped_files(config_dir):
    assert dn.preset_names() == ["paper_sec5", "example1", "example2"]
    for name in dn.preset_names():
        assert (config_dir / f"{name}.ini").read_text() == dn.preset_config(name)


def _run(cli, *args):
    return subprocess.run([cli, *args], capture_output=True, text=True, timeout=120)


def test_cli_run_writes_outputs(cli, tmp_path):
    proc = _run(cli, "run", "--preset", "paper_sec5", "--out-dir", str(tmp_path))
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "run.csv").read_text().splitlines()[0] == HEADER
    for svg in ("fig1_phi.svg", "fig2_error.svg"):
        body = (tmp_path / svg).read_text()
        assert "<svg" in body and "href" not in body


def test_cli_verbs(cli, tmp_path, config_dir):
    assert _run(cli, "synthetic", "--preset", "example2", "--out-dir", str(tmp_path)).returncode == 0
    assert (tmp_path / "synthetic.csv").exists()
    proc = _run(cli, "bounds", "--config", str(config_dir / "paper_sec5.ini"))
    assert proc.returncode == 0, proc.stderr
    assert "0.89" in proc.stdout
    proc = _run(cli, "sweep", "--gamma-sweep", "0.1,1", "--out-dir", str(tmp_path),
                "--ub-mode", "continuous", "--noise", "0", "--seed", "3")
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "fig3_sweep.svg").exists()


def test_cli_exit_codes(cli, tmp_path):
    assert _run(cli, "run", "--preset", "nope", "--out-dir", str(tmp_path)).returncode == 1
    assert _run(cli, "run", "--config", str(tmp_path / "missing.ini")).returncode == 1
    assert _run(cli, "frobnicate").returncode == 1
    assert _run(cli, "run", "--ub-mode", "linear").returncode == 1
    bad = tmp_path / "bad.ini"
    bad.write_text("[gains]\nplain = 1e12\n")
    proc = _run(cli, "run", "--config", str(bad), "--out-dir", str(tmp_path))
    assert proc.returncode == 2
    assert "estimator plain" in proc.stderr
