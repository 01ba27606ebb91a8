"""End-to-end runs of the ``ptsim`` subcommands."""

import csv
import json
import math

import numpy as np
import pytest

from PTSim.__main__ import build_parser, main
from PTSim.commands import get_command, is_command_registered, list_commands
from PTSim.logger import configure_logger
from PTSim.pt import bender_model
from PTSim.schemas import MatrixFile
from PTSim.serialization import matrix_to_model, model_to_matrix, save_matrix

SQRT2 = math.sqrt(2.0)
QUARTER_PI = math.pi / 4.0


@pytest.fixture(autouse=True)
def restore_logger():
    yield
    configure_logger()


def run(capsys, *argv: str) -> tuple[int, dict, str]:
    """Run the CLI and return (exit code, parsed stdout or {}, stderr)."""
    code = main(list(argv))
    captured = capsys.readouterr()
    payload = json.loads(captured.out) if captured.out.strip() else {}
    return code, payload, captured.err


def matrix_json(a) -> dict:
    return matrix_to_model(np.asarray(a, dtype=np.complex128)).model_dump()


@pytest.fixture
def identity_system_file(write_json_file):
    eye = matrix_json(np.eye(2))
    return write_json_file("identity.json", {"H": eye, "P": eye, "T": eye})


@pytest.fixture
def unbroken_system_file(gunther_samsonov, write_json_file):
    system = gunther_samsonov.system
    return write_json_file(
        "unbroken.json",
        {"H": matrix_json(system.H), "P": matrix_json(system.P), "T": matrix_json(system.T_conj)},
    )


@pytest.fixture
def bundle_file(capsys, bender_system_file, tmp_path):
    path = tmp_path / "bundle.json"
    code, _, _ = run(capsys, "dilate", str(bender_system_file), "--out", str(path))
    assert code == 0
    return path


class TestRegistry:
    def test_builtin_commands(self):
        for name in ("check", "canon", "dilate", "weak-value", "pointer", "zgrid", "zconv", "embed-unbroken", "selftest", "config"):
            assert is_command_registered(name)
        assert len(list_commands()) == 10

    def test_unknown_command(self):
        with pytest.raises(ValueError, match="Unknown command"):
            get_command("frobnicate")

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "ptsim" in capsys.readouterr().out


class TestCheck:
    def test_broken_system(self, capsys, bender_system_file):
        code, payload, _ = run(capsys, "check", str(bender_system_file))
        assert code == 0
        assert payload["pt_symmetric"] is True
        assert payload["class"] == "broken"
        assert len(payload["relations"]) == 4

    def test_identity_is_unbroken(self, capsys, identity_system_file):
        code, payload, _ = run(capsys, "check", str(identity_system_file))
        assert code == 0
        assert payload["class"] == "unbroken"

    def test_relations_fail(self, capsys, write_json_file):
        swap = matrix_json([[0.0, 1.0], [1.0, 0.0]])
        path = write_json_file(
            "bad.json", {"H": matrix_json([[1.0, 2.0], [3.0, 4.0]]), "P": swap, "T": matrix_json(np.eye(2))}
        )
        code, payload, _ = run(capsys, "check", str(path))
        assert code == 1
        assert payload["pt_symmetric"] is False

    def test_missing_key_is_a_format_error(self, capsys, write_json_file):
        eye = matrix_json(np.eye(2))
        path = write_json_file("partial.json", {"H": eye, "P": eye})
        code, _, err = run(capsys, "check", str(path))
        assert code == 2
        assert "'T'" in err

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        code, _, err = run(capsys, "check", str(path))
        assert code == 2
        assert "malformed JSON" in err


class TestCanon:
    def test_broken_system(self, capsys, bender_system_file):
        code, payload, _ = run(capsys, "canon", str(bender_system_file))
        assert code == 0
        first = payload["eigenvalues"][0]
        assert first["re"] == pytest.approx(1.0)
        assert first["im"] == pytest.approx(0.994987, abs=1e-6)
        assert payload["perm"] == [2, 1]
        assert payload["unbroken"] is False

    def test_out_file(self, capsys, bender_system_file, tmp_path):
        out = tmp_path / "canon.json"
        code, payload, _ = run(capsys, "canon", str(bender_system_file), "--out", str(out))
        assert code == 0
        assert payload["out"] == str(out)
        saved = json.loads(out.read_text(encoding="utf-8"))
        assert set(saved) >= {"Psi_prime", "J", "S", "eta", "blocks"}


class TestDilate:
    def test_bundle_on_stdout(self, capsys, bender_system_file):
        code, payload, _ = run(capsys, "dilate", str(bender_system_file))
        assert code == 0
        assert payload["format"] == 1
        assert payload["H_tilde"]["rows"] == 4
        assert payload["perm"] == [1, 0]
        assert all(value <= 1e-9 for value in payload["residuals"].values())

    def test_closed_form_frame_without_rescale(self, capsys, bender_frame_file):
        code, payload, _ = run(capsys, "dilate", str(bender_frame_file), "--no-rescale")
        assert code == 0
        h_tilde = model_to_matrix(MatrixFile.model_validate(payload["H_tilde"]))
        expected = bender_model(SQRT2, QUARTER_PI, 0.1).closed_form_H_tilde()
        assert np.max(np.abs(h_tilde - expected)) < 1e-10
        assert payload["c"] == 1.0

    def test_xi_from_file(self, capsys, bender_system_file, tmp_path):
        xi = save_matrix([[1.0, 0.5j], [0.2, 2.0]], tmp_path / "xi.json")
        code, payload, _ = run(capsys, "dilate", str(bender_system_file), "--xi", str(xi))
        assert code == 0
        assert payload["residuals"]["spectral"] <= 1e-9

    def test_embed_broken_system(self, capsys, bender_system_file):
        code, _, err = run(capsys, "dilate", str(bender_system_file), "--mode", "embed")
        assert code == 1
        assert "BrokenSymmetry" in err

    def test_embed_unbroken_system(self, capsys, unbroken_system_file):
        code, payload, _ = run(capsys, "dilate", str(unbroken_system_file), "--mode", "embed")
        assert code == 0
        assert payload["mode"] == "embed"
        assert payload["residuals"]["isometry"] < 1e-10

    def test_summary_with_out(self, capsys, bundle_file):
        saved = json.loads(bundle_file.read_text(encoding="utf-8"))
        assert saved["format"] == 1
        assert saved["c"] > 0


class TestWeakValue:
    def test_complex_eigenvalue(self, capsys, bundle_file):
        code, payload, _ = run(capsys, "weak-value", str(bundle_file), "--pre", "1", "--post", "mu:1")
        assert code == 0
        assert round(payload["re"], 6) == 1.0
        assert round(payload["im"], 6) == 0.994987

    def test_orthogonal_states(self, capsys, bundle_file):
        code, _, err = run(capsys, "weak-value", str(bundle_file), "--pre", "psi:1", "--post", "mu:2")
        assert code == 1
        assert "VanishingOverlap" in err

    def test_index_out_of_range(self, capsys, bundle_file):
        code, _, err = run(capsys, "weak-value", str(bundle_file), "--pre", "5", "--post", "mu:1")
        assert code == 1
        assert "IndexOutOfRange" in err

    def test_tampered_bundle(self, capsys, bundle_file):
        payload = json.loads(bundle_file.read_text(encoding="utf-8"))
        payload["H_tilde"]["data"][0][0][0] += 1.0
        bundle_file.write_text(json.dumps(payload), encoding="utf-8")
        code, _, err = run(capsys, "weak-value", str(bundle_file), "--pre", "1", "--post", "mu:1")
        assert code == 2
        assert "BundleFormatError" in err


class TestPointer:
    def test_weak_regime(self, capsys, bender_frame_file, tmp_path, write_json_file):
        bundle = tmp_path / "closed.json"
        assert run(capsys, "dilate", str(bender_frame_file), "--no-rescale", "--out", str(bundle))[0] == 0
        setup = write_json_file(
            "setup.json",
            {"bundle": bundle.name, "observable": "bundle", "pre": "psi:1", "post": "mu:1", "g": 0.01, "width": 1.0},
        )
        code, payload, _ = run(capsys, "pointer", str(setup), "--grid", "512")
        assert code == 0
        assert payload["l2_distance"] < 1e-3
        assert payload["weak_value"]["im"] == pytest.approx(0.994987, abs=1e-6)
        assert payload["mean_shift_weak"] == pytest.approx(0.01 * payload["weak_value"]["re"])
        assert payload["grid"]["points"] == 512

    def test_grid_too_small(self, capsys, write_json_file):
        setup = write_json_file(
            "setup.json",
            {"observable": matrix_json(np.eye(2)), "pre": [[1.0, 0.0], [0.0, 0.0]], "post": [[1.0, 0.0], [0.0, 0.0]], "g": 0.1},
        )
        code, _, err = run(capsys, "pointer", str(setup), "--grid", "1")
        assert code == 2
        assert "--grid" in err


class TestRepro:
    def test_zgrid(self, capsys, tmp_path):
        out = tmp_path / "z.csv"
        code, payload, _ = run(capsys, "zgrid", "--steps", "3", "--out", str(out))
        assert code == 0
        assert set(payload) == {"max_z11", "max_z22", "max_z12", "max_z21"}
        assert payload["max_z11"] < 2e-2
        with out.open(encoding="utf-8", newline="") as f:
            assert len(list(csv.DictReader(f))) == 9

    def test_zgrid_is_deterministic(self, capsys, tmp_path):
        first, second = tmp_path / "first.csv", tmp_path / "second.csv"
        assert run(capsys, "zgrid", "--steps", "5", "--out", str(first))[0] == 0
        assert run(capsys, "--threads", "3", "zgrid", "--steps", "5", "--out", str(second))[0] == 0
        assert first.read_bytes() == second.read_bytes()

    def test_zgrid_output_dir(self, capsys, tmp_path):
        code, _, _ = run(capsys, "--output-dir", str(tmp_path), "zgrid", "--steps", "2")
        assert code == 0
        assert (tmp_path / "zgrid.csv").exists()

    def test_zconv(self, capsys):
        code, payload, _ = run(capsys, "zconv", "--t", "0.1", "0.05")
        assert code == 0
        assert [p["t"] for p in payload["points"]] == [0.1, 0.05]
        assert payload["points"][1]["z12"] < payload["points"][0]["z12"]

    def test_zconv_times_long_option(self, capsys):
        code, payload, _ = run(capsys, "zconv", "--times", "0.2", "0.1")
        assert code == 0
        assert [p["t"] for p in payload["points"]] == [0.2, 0.1]

    def test_times_option_is_not_read_as_global_abbreviation(self):
        args = build_parser().parse_args(["embed-unbroken", "--t", "0.1"])
        assert args.t == [0.1]
        assert args.tol is None

    def test_zconv_regime_violation(self, capsys):
        code, _, err = run(capsys, "zconv", "--s", "1.5")
        assert code == 1
        assert "RegimeViolation" in err

    def test_embed_unbroken(self, capsys):
        code, payload, _ = run(capsys, "embed-unbroken")
        assert code == 0
        assert payload["passed"] is True

    def test_embed_unbroken_explicit_times(self, capsys):
        code, payload, _ = run(capsys, "embed-unbroken", "--t", "0.1", "0.5")
        assert code == 0
        assert payload["passed"] is True
        evolution = sorted(name for name in payload["residuals"] if name.startswith("evolution_t="))
        assert evolution == ["evolution_t=0.1", "evolution_t=0.5"]

    def test_selftest_seed_from_environment(self, capsys, monkeypatch, tmp_path):
        scenario = tmp_path / "weak.yaml"
        scenario.write_text(
            "name: weak-only\nseed: 1\nchecks:\n  - kind: bender_weak_value\n    name: weak\n",
            encoding="utf-8",
        )
        monkeypatch.setenv("PTSIM_SEED", "5")
        code, payload, _ = run(capsys, "selftest", "--scenario", str(scenario))
        assert code == 0
        assert payload["seed"] == 5
        assert payload["checks"][0]["passed"] is True

    def test_selftest_scenario_seed(self, capsys, tmp_path):
        scenario = tmp_path / "weak.yaml"
        scenario.write_text("name: weak-only\nseed: 1\nchecks:\n  - kind: bender_weak_value\n", encoding="utf-8")
        code, payload, _ = run(capsys, "selftest", "--scenario", str(scenario))
        assert code == 0
        assert payload["seed"] == 1

    def test_bundled_selftest(self, capsys):
        code, payload, _ = run(capsys, "selftest")
        assert code == 0
        assert payload["passed"] is True

    def test_invalid_scenario(self, capsys, tmp_path):
        scenario = tmp_path / "bad.yaml"
        scenario.write_text("name: x\nchecks:\n  - kind: nope\n", encoding="utf-8")
        code, _, err = run(capsys, "selftest", "--scenario", str(scenario))
        assert code == 2
        assert "ScenarioFormatError" in err


class TestGlobalOptions:
    def test_metrics_file(self, capsys, bender_system_file, tmp_path):
        metrics = tmp_path / "ptsim.prom"
        code, _, _ = run(capsys, "--metrics-file", str(metrics), "dilate", str(bender_system_file))
        assert code == 0
        assert 'ptsim_residual{check="dilation",name="spectral"}' in metrics.read_text(encoding="utf-8")

    def test_log_file(self, capsys, bender_system_file, tmp_path):
        log_file = tmp_path / "logs" / "ptsim_test.log"
        code, _, _ = run(capsys, "--log-file", str(log_file), "check", str(bender_system_file))
        assert code == 0
        assert log_file.exists()


class TestConfigCommand:
    def test_set_then_show(self, capsys):
        code, payload, _ = run(capsys, "config", "--set", "steps=81", "--set", "seed=4")
        assert code == 0
        assert payload["saved"] == {"steps": 81, "seed": 4}

        code, payload, _ = run(capsys, "config")
        assert code == 0
        assert payload["values"]["steps"] == 81
        assert payload["sources"]["steps"] == "FILE"
        assert payload["sources"]["residual_tol"] == "DEFAULT"

    def test_saved_steps_reach_zgrid(self, capsys, tmp_path):
        assert run(capsys, "config", "--set", "steps=2")[0] == 0
        out = tmp_path / "z.csv"
        assert run(capsys, "zgrid", "--out", str(out))[0] == 0
        with out.open(encoding="utf-8", newline="") as f:
            assert len(list(csv.DictReader(f))) == 4

    def test_replace_drops_other_keys(self, capsys):
        assert run(capsys, "config", "--set", "seed=4")[0] == 0
        assert run(capsys, "config", "--replace", "--set", "steps=11")[0] == 0
        _, payload, _ = run(capsys, "config")
        assert payload["sources"]["seed"] == "DEFAULT"
        assert payload["values"]["steps"] == 11

    def test_invalid_value_is_not_written(self, capsys, tmp_path):
        code, _, err = run(capsys, "config", "--set", "threads=0")
        assert code == 2
        assert "threads" in err
        assert not (tmp_path / "config.json").exists()

    def test_unknown_key(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["config", "--set", "colour=blue"])
        assert exc.value.code == 2
        assert "unknown key" in capsys.readouterr().err
