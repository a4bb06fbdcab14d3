"""Experiment harness: config resolution, presets, runner outputs, sweeps,
plots, and the CLI contract (exit codes, file outputs, determinism)."""

import json

import numpy as np
import pytest

from olasim import ConfigurationError, build_grid, nearest_index
from olasim.harness import cli, config as cfgmod, runner
from olasim.harness.plotting import emit_plot
from olasim.harness.presets import PRESETS


def small_config(**overrides):
    base = {
        "hypothesis": {"kind": "threshold1d", "resolution": 21},
        "horizon": {"T": 100},
        "seeds": [1, 2, 3],
        "learner": {"kind": "ola"},
        "analysis": {"phi_mc": 200, "n_mc": 2000},
        "grid_points": 10,
    }
    base.update(overrides)
    return cfgmod.resolve(base)


class TestConfigResolution:
    def test_defaults_pass_validation(self):
        cfg = cfgmod.resolve()
        assert cfg["learner"]["kind"] == "ola"
        assert cfg["horizon"]["T"] == 10000
        assert cfg["ola"]["m"] == 16
        assert cfg["threshold"]["scale"] == 0.15

    def test_preset_then_user_overrides(self):
        cfg = cfgmod.resolve({"horizon": {"T": 500}}, preset="fig1")
        assert cfg["hypothesis"]["kind"] == "threshold1d"
        assert cfg["learner"]["kind"] == ["ola", "a2", "dhm"]
        assert cfg["horizon"]["T"] == 500

    def test_preset_key_inside_config(self):
        cfg = cfgmod.resolve({"preset": "fig4"})
        assert cfg["hypothesis"]["kind"] == "halfspace"
        assert cfg["noise"]["kind"] == "linear_sphere"

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigurationError):
            cfgmod.resolve({"horizn": {"T": 10}})
        with pytest.raises(ConfigurationError):
            cfgmod.resolve({"horizon": {"TT": 10}})
        with pytest.raises(ConfigurationError):
            cfgmod.resolve(preset="fig9")

    def test_value_validation(self):
        with pytest.raises(ConfigurationError):
            cfgmod.resolve({"learner": {"kind": "gradient_descent"}})
        with pytest.raises(ConfigurationError):
            cfgmod.resolve({"horizon": {"T": 0}})
        with pytest.raises(ConfigurationError):
            cfgmod.resolve({"seeds": []})
        with pytest.raises(ConfigurationError):
            cfgmod.resolve({"seeds": [1, 1]})
        with pytest.raises(ConfigurationError):
            cfgmod.resolve({"noise": {"kind": "cauchy"}})

    def test_seed_list(self):
        assert cfgmod.seed_list(cfgmod.resolve({"seeds": 4})) == [1, 2, 3, 4]
        assert cfgmod.seed_list(cfgmod.resolve({"seeds": [7, 3]})) == [7, 3]

    def test_fingerprint_tracks_content(self):
        a = cfgmod.resolve({"seeds": 4})
        b = cfgmod.resolve({"seeds": 4})
        c = cfgmod.resolve({"seeds": 5})
        assert cfgmod.fingerprint(a) == cfgmod.fingerprint(b)
        assert cfgmod.fingerprint(a) != cfgmod.fingerprint(c)
        assert len(cfgmod.fingerprint(a)) == 16

    def test_dotted_paths(self):
        cfg = cfgmod.resolve()
        assert cfgmod.get_path(cfg, "ola.m") == 16
        cfgmod.set_path(cfg, "ola.m", 8)
        assert cfg["ola"]["m"] == 8
        with pytest.raises(ConfigurationError):
            cfgmod.get_path(cfg, "ola.q")
        with pytest.raises(ConfigurationError):
            cfgmod.set_path(cfg, "nope.m", 1)

    def test_load_config_errors(self, tmp_path):
        with pytest.raises(ConfigurationError):
            cfgmod.load_config(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(ConfigurationError):
            cfgmod.load_config(bad)


class TestPresets:
    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_presets_resolve(self, name):
        cfg = cfgmod.resolve(preset=name)
        assert cfgmod.learner_kinds(cfg)[0] == "ola"

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_bayes_params_on_grid(self, name):
        cfg = cfgmod.resolve(preset=name)
        grid = runner.build_grid_from_config(cfg)
        bayes = np.asarray(cfg["stream"]["bayes_params"], dtype=float)
        idx = nearest_index(grid, bayes)
        assert np.allclose(grid.params[idx], bayes, atol=1e-12)


class TestBuilders:
    def test_build_oracle_kinds(self):
        cfg = cfgmod.resolve(preset="fig1")
        oracle = runner.build_oracle(cfg, seed=1)
        assert oracle.noise.gamma == pytest.approx(0.25)
        sph = runner.build_oracle(cfgmod.resolve(preset="fig4"), seed=1)
        assert sph.distribution.dim == 2

    def test_build_learner_kinds(self):
        cfg = small_config()
        grid = runner.build_grid_from_config(cfg)
        oracle = runner.build_oracle(cfg, seed=1)
        for kind in ("ola", "a2", "dhm", "cbgz"):
            learner = runner.build_learner(kind, cfg, grid, 100, oracle, seed=1)
            assert hasattr(learner, "step")
        with pytest.raises(ConfigurationError):
            runner.build_learner("svm", cfg, grid, 100, oracle, seed=1)

    def test_cal_requires_realizable_stream(self):
        cfg = small_config()
        grid = runner.build_grid_from_config(cfg)
        oracle = runner.build_oracle(cfg, seed=1)
        with pytest.raises(ConfigurationError):
            runner.build_learner("cal", cfg, grid, 100, oracle, seed=1)
        clean = small_config(noise={"kind": "massart_flip", "eta_high": 1.0})
        learner = runner.build_learner("cal", clean, grid, 100, oracle, seed=1)
        assert learner.vs.active_count == grid.count


class TestRunExperiment:
    def test_summary_and_aggregate_shapes(self, tmp_path):
        cfg = small_config()
        result = runner.run_experiment(cfg, tmp_path / "out")
        assert len(result.runs) == 3
        assert [r.seed for r in result.runs] == [1, 2, 3]
        assert len(result.aggregate) == len(result.t_grid)
        for r in result.runs:
            assert r.Q_final == r.label_calls
            assert r.nested_ok
        summary = (tmp_path / "out" / "summary.csv").read_text().splitlines()
        assert len(summary) == 4  # header + one row per seed
        assert summary[0] == ",".join(runner.SUMMARY_COLUMNS)
        meta = json.loads((tmp_path / "out" / "meta.json").read_text())
        assert meta["fingerprint"] == result.fingerprint
        assert meta["seeds"] == [1, 2, 3]

    def test_learner_order_preserved(self, tmp_path):
        cfg = small_config(learner={"kind": ["ola", "cbgz"]}, seeds=[1, 2])
        result = runner.run_experiment(cfg, tmp_path / "out")
        assert [(r.learner, r.seed) for r in result.runs] == [
            ("ola", 1),
            ("ola", 2),
            ("cbgz", 1),
            ("cbgz", 2),
        ]
        learners = {row["learner"] for row in result.aggregate}
        assert learners == {"ola", "cbgz"}

    def test_outputs_byte_identical(self, tmp_path):
        cfg = small_config()
        runner.run_experiment(cfg, tmp_path / "a")
        runner.run_experiment(cfg, tmp_path / "b")
        for name in ("aggregate.csv", "summary.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (
                tmp_path / "b" / name
            ).read_bytes()

    def test_worker_pool_matches_sequential(self, tmp_path, monkeypatch):
        cfg = small_config(seeds=[1, 2])
        runner.run_experiment(cfg, tmp_path / "seq")
        monkeypatch.setenv("OLASIM_WORKERS", "2")
        runner.run_experiment(cfg, tmp_path / "par")
        assert (tmp_path / "seq" / "aggregate.csv").read_bytes() == (
            tmp_path / "par" / "aggregate.csv"
        ).read_bytes()

    def test_worker_env_validation(self, monkeypatch):
        monkeypatch.setenv("OLASIM_WORKERS", "many")
        with pytest.raises(ConfigurationError):
            runner.run_experiment(small_config(seeds=[1]))


class TestSweep:
    def test_sweep_layout(self, tmp_path):
        cfg = small_config(seeds=[1, 2])
        results = runner.sweep(cfg, "ola.m", [8, 16], tmp_path / "sw")
        assert len(results) == 2
        assert (tmp_path / "sw" / "ola_m=8" / "aggregate.csv").is_file()
        assert (tmp_path / "sw" / "ola_m=16" / "aggregate.csv").is_file()
        lines = (tmp_path / "sw" / "sweep.csv").read_text().splitlines()
        assert lines[0].startswith("axis,value,t,learner")
        assert len(lines) == 1 + sum(len(r.aggregate) for r in results)

    def test_axis_validation(self, tmp_path):
        cfg = small_config()
        with pytest.raises(ConfigurationError):
            runner.sweep(cfg, "learner.kind", [1], tmp_path)
        with pytest.raises(ConfigurationError):
            runner.sweep(cfg, "threshold.beta_squared_radicals", [1], tmp_path)
        with pytest.raises(ConfigurationError):
            runner.sweep(cfg, "ola.m", [], tmp_path)


class TestPlotting:
    def run_dir(self, tmp_path):
        out = tmp_path / "run"
        runner.run_experiment(small_config(), out)
        return out

    def test_emit_and_determinism(self, tmp_path):
        out = self.run_dir(tmp_path)
        first = emit_plot(out)
        assert [p.name for p in first] == ["queries.svg", "regret.svg"]
        blobs = [p.read_bytes() for p in first]
        assert all(b.startswith(b"<?xml") for b in blobs)
        second = emit_plot(out, tmp_path / "again")
        for path, blob in zip(second, blobs):
            assert path.read_bytes() == blob

    def test_missing_csv(self, tmp_path):
        with pytest.raises(ConfigurationError):
            emit_plot(tmp_path)

    def test_missing_columns_named(self, tmp_path):
        bad = tmp_path / "aggregate.csv"
        bad.write_text("t,learner\n1,ola\n")
        with pytest.raises(ConfigurationError, match="mean_Q"):
            emit_plot(tmp_path)

    def test_empty_csv(self, tmp_path):
        bad = tmp_path / "aggregate.csv"
        bad.write_text(",".join(runner.AGGREGATE_COLUMNS) + "\n")
        with pytest.raises(ConfigurationError):
            emit_plot(tmp_path)


class TestCli:
    def write_cfg(self, tmp_path, extra=None):
        cfg = {
            "hypothesis": {"resolution": 21},
            "horizon": {"T": 100},
            "seeds": [1, 2],
            "learner": {"kind": "ola"},
            "analysis": {"phi_mc": 200, "n_mc": 2000},
            "grid_points": 10,
        }
        if extra:
            cfg.update(extra)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        return str(path)

    def test_run_writes_outputs(self, tmp_path, capsys):
        cfg = self.write_cfg(tmp_path)
        code = cli.main(
            ["run", "--preset", "fig1", "--config", cfg, "--out", str(tmp_path / "o")]
        )
        assert code == 0
        assert (tmp_path / "o" / "aggregate.csv").is_file()
        assert "fingerprint" in capsys.readouterr().out

    def test_run_requires_some_config(self, capsys):
        assert cli.main(["run", "--out", "/tmp/x"]) == 2
        assert "configuration error" in capsys.readouterr().err

    def test_unknown_preset_exit_code(self, tmp_path):
        assert cli.main(["run", "--preset", "fig9", "--out", str(tmp_path)]) == 2

    def test_sweep_cli(self, tmp_path):
        cfg = self.write_cfg(tmp_path)
        out = str(tmp_path / "sw")
        code = cli.main(
            ["sweep", "--config", cfg, "--axis", "ola.m", "--values", "8,16", "--out", out]
        )
        assert code == 0
        assert (tmp_path / "sw" / "sweep.csv").is_file()
        bad = cli.main(
            ["sweep", "--config", cfg, "--axis", "ola.m", "--values", "a,b", "--out", out]
        )
        assert bad == 2

    def test_theta_cli(self, tmp_path, capsys):
        cfg = self.write_cfg(tmp_path)
        code = cli.main(["theta", "--preset", "fig1", "--config", cfg])
        assert code == 0
        out = capsys.readouterr().out
        assert "theta_hat=" in out
        assert "query_bound=" in out and "in_regime=" in out

    def test_plot_cli(self, tmp_path):
        cfg = self.write_cfg(tmp_path)
        out = str(tmp_path / "o")
        assert cli.main(["run", "--config", cfg, "--out", out]) == 0
        assert cli.main(["plot", "--in", out]) == 0
        assert (tmp_path / "o" / "queries.svg").is_file()
        assert cli.main(["plot", "--in", str(tmp_path / "nowhere")]) == 2
