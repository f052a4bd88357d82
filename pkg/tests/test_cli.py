import json

import pytest

from slitlab.cli import main


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestRun:
    def test_afshar_run_writes_artifacts(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"kind": "afshar"})
        out = tmp_path / "out"
        assert main(["run", cfg, "--output", str(out)]) == 0
        assert (out / "report.json").exists()
        assert (out / "intensity_pre_lens.csv").exists()
        assert (out / "intensity_image_plane.csv").exists()
        stdout = capsys.readouterr().out
        assert "p_da_total=" in stdout

    def test_spin_toy_run(self, tmp_path):
        cfg = write_config(tmp_path, {"kind": "spin_toy"})
        out = tmp_path / "spin"
        assert main(["run", cfg, "--output", str(out)]) == 0
        payload = json.loads((out / "report.json").read_text())
        assert payload["spin"]["which_initial_state_info_with_projection"] == 0.0

    def test_invalid_json_exits_2(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["run", str(path)]) == 2

    def test_unknown_kind_exits_2(self, tmp_path):
        cfg = write_config(tmp_path, {"kind": "triple_slit"})
        assert main(["run", cfg]) == 2

    def test_unknown_field_exits_2(self, tmp_path):
        cfg = write_config(tmp_path, {"kind": "afshar", "frequency": 3.0})
        assert main(["run", cfg]) == 2

    def test_pipeline_failure_exits_3(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {"kind": "afshar", "grid": {"n_points": 1024, "y_min": -6.0, "y_max": 6.0}},
        )
        assert main(["run", cfg]) == 3

    def test_output_root_env_honored(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SLITLAB_OUTPUT_ROOT", str(tmp_path / "root"))
        cfg = write_config(
            tmp_path, {"kind": "theorem_check", "trials": 20, "output_dir": "thm"}
        )
        assert main(["run", cfg]) == 0
        assert (tmp_path / "root" / "thm" / "report.json").exists()


class TestCheckTheorem:
    def test_passes_and_prints_report(self, capsys):
        assert main(["check-theorem", "--trials", "50", "--dim", "3", "--seed", "1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["passed"] is True
        assert payload["trials"] == 50

    def test_dimension_eight(self, capsys):
        assert main(["check-theorem", "--trials", "50", "--dim", "8"]) == 0
        assert json.loads(capsys.readouterr().out)["dim"] == 8


class TestFringeMap:
    def test_prints_minima(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"kind": "afshar"})
        assert main(["fringe-map", cfg]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["minima_positions"]) == 10
        assert payload["fringe_spacing"] == pytest.approx(62.83, rel=1e-3)

    def test_optional_file_output(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"kind": "afshar"})
        out = tmp_path / "fm"
        assert main(["fringe-map", cfg, "--output", str(out)]) == 0
        capsys.readouterr()
        assert (out / "fringes.json").exists()

    def test_spin_has_no_fringes(self, tmp_path):
        cfg = write_config(tmp_path, {"kind": "spin_toy"})
        assert main(["fringe-map", cfg]) == 2


class TestSweep:
    def test_sweep_writes_combined_csv(self, tmp_path):
        cfg = write_config(tmp_path, {"kind": "afshar"})
        out = tmp_path / "sweep"
        code = main(
            [
                "sweep", cfg,
                "--param", "wire_count",
                "--values", "4,10",
                "--output", str(out),
            ]
        )
        assert code == 0
        text = (out / "sweep_wire_count.csv").read_text()
        assert text.splitlines()[0] == "value,blocked_flux,D,V,I"
        assert len(text.strip().splitlines()) == 3

    def test_unknown_param_rejected_by_parser(self, tmp_path):
        cfg = write_config(tmp_path, {"kind": "afshar"})
        with pytest.raises(SystemExit) as excinfo:
            main(["sweep", cfg, "--param", "nonsense", "--values", "1"])
        assert excinfo.value.code == 2

    def test_all_values_failing_exits_3(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"kind": "afshar"})
        out = tmp_path / "sweep"
        code = main(
            [
                "sweep", cfg,
                "--param", "wire_width_fraction",
                "--values", "0.9",
                "--output", str(out),
            ]
        )
        assert code == 3
