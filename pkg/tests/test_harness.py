"""Experiment harness: configs, runners, deterministic output, CLI."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from magchain.cli import main
from magchain.errors import InvalidParameterError, IOFailureError
from magchain.geometry import build_circular_ring
from magchain.harness import (EXPERIMENT_KINDS, SWEEP_GRID, ExperimentConfig,
                              ResultRecord, max_tangent_angle,
                              records_from_payload, records_to_csv,
                              records_to_json, run_experiment, write_records)


class TestExperimentConfig:
    def test_unknown_kind_rejected(self):
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(kind="benchmark")

    def test_seed_count_validated(self):
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(kind="align", seeds=0)

    def test_default_grids(self):
        assert ExperimentConfig(kind="sweep").resolved_n_values() == SWEEP_GRID
        assert ExperimentConfig(kind="ring-energy").resolved_n_values() == (10,)
        assert ExperimentConfig(kind="sweep",
                                n_values=(8, 12)).resolved_n_values() == (8, 12)

    def test_all_kinds_registered(self):
        for kind in EXPERIMENT_KINDS:
            ExperimentConfig(kind=kind)


class TestRunners:
    def test_ring_energy_record(self):
        records = run_experiment(ExperimentConfig(kind="ring-energy"))
        assert len(records) == 1
        rec = records[0]
        assert rec.passed
        assert rec.values["discrete_energy"] == pytest.approx(
            -22.722368745507559, rel=1e-13)
        assert rec.values["closed_form"] == pytest.approx(
            -22.690262046328684, rel=1e-13)
        assert rec.values["relative_gap"] < 2e-3

    def test_sweep_slope_row(self):
        records = run_experiment(ExperimentConfig(kind="sweep",
                                                  n_values=(8, 16, 32)))
        slope_rows = [r for r in records if r.params["n"] == 0]
        assert len(slope_rows) == 1
        assert abs(slope_rows[0].values["slope"] + 4.0) < 0.3

    def test_records_sorted_by_params(self):
        records = run_experiment(ExperimentConfig(kind="sweep",
                                                  n_values=(32, 8, 16)))
        ns = [r.params["n"] for r in records]
        assert ns == sorted(ns)

    def test_align_angles_small(self):
        records = run_experiment(ExperimentConfig(kind="align",
                                                  n_values=(12,), seeds=2))
        assert all(r.passed for r in records)
        assert all(r.values["max_angle"] < 1e-6 for r in records)

    def test_tilted_ring_seeded_determinism(self):
        a = run_experiment(ExperimentConfig(kind="align", n_values=(10,),
                                            seeds=1))
        b = run_experiment(ExperimentConfig(kind="align", n_values=(10,),
                                            seeds=1))
        assert a[0].values["max_angle"] == b[0].values["max_angle"]

    def test_max_tangent_angle_zero_on_exact_ring(self):
        assert max_tangent_angle(build_circular_ring(20)) < 1e-12


class TestSerialization:
    @pytest.fixture
    def records(self):
        return run_experiment(ExperimentConfig(kind="ring-energy"))

    def test_csv_header(self, records):
        lines = records_to_csv(records).splitlines()
        assert lines[0] == ("experiment,n,ground,local,nonlocal,"
                            "continuum_total,discrete_energy,closed_form,"
                            "relative_gap,passed")
        assert lines[1].startswith("ring-energy,10,")

    def test_csv_none_cell_empty(self):
        rec = ResultRecord("sweep", {"n": 0}, {"slope": None}, True)
        assert records_to_csv([rec]).splitlines()[1] == "sweep,0,,True"

    def test_json_round_trip(self, records):
        payload = json.loads(records_to_json(records))
        back = records_from_payload(payload)
        assert back == records

    def test_write_records_deterministic(self, records, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_records(records, p1)
        write_records(records, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_write_records_bad_format(self, records, tmp_path):
        with pytest.raises(InvalidParameterError):
            write_records(records, tmp_path / "x.bin", format="parquet")

    def test_write_records_bad_path(self, records, tmp_path):
        with pytest.raises(IOFailureError):
            write_records(records, tmp_path / "missing" / "x.csv")


class TestCli:
    def test_ring_energy_stdout(self):
        result = CliRunner().invoke(main, ["ring-energy"])
        assert result.exit_code == 0
        lines = result.output.splitlines()
        assert lines[0].startswith("experiment,n,ground")
        assert lines[1].startswith("ring-energy,10,")

    def test_json_format(self):
        result = CliRunner().invoke(main, ["ring-energy", "--format", "json"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["records"][0]["experiment"] == "ring-energy"

    def test_sweep_selected_sizes(self):
        result = CliRunner().invoke(main, ["sweep", "--n", "8", "--n", "12"])
        assert result.exit_code == 0
        ns = {line.split(",")[1] for line in result.output.splitlines()[1:]}
        assert ns == {"0", "8", "12"}

    def test_grid_window(self):
        result = CliRunner().invoke(main, ["sweep", "--n-min", "10",
                                           "--n-max", "20"])
        assert result.exit_code == 0
        ns = {line.split(",")[1] for line in result.output.splitlines()[1:]}
        assert ns == {"0", "12", "16"}

    def test_empty_grid_window_usage_error(self):
        result = CliRunner().invoke(main, ["sweep", "--n-min", "100"])
        assert result.exit_code == 2

    def test_unknown_command(self):
        result = CliRunner().invoke(main, ["benchmark"])
        assert result.exit_code == 2

    def test_out_file(self, tmp_path):
        out = tmp_path / "r.csv"
        result = CliRunner().invoke(main, ["ring-energy", "--out", str(out)])
        assert result.exit_code == 0
        assert out.read_text().startswith("experiment,n,ground")

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n_values": [8], "seeds": 1}))
        result = CliRunner().invoke(main, ["align", "--config", str(cfg)])
        assert result.exit_code == 0
        rows = result.output.splitlines()[1:]
        assert len(rows) == 1
        assert rows[0].startswith("align,8,0,")

    def test_config_must_be_object(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("[1, 2, 3]")
        result = CliRunner().invoke(main, ["sweep", "--config", str(cfg)])
        assert result.exit_code == 2

    def test_server_delegation(self, monkeypatch):
        # route the CLI's HTTP call through the in-process ASGI app
        import httpx
        from fastapi.testclient import TestClient

        from magchain.service import app

        client = TestClient(app)

        def fake_post(url, json=None, timeout=None):
            path = url.split("http://server", 1)[1]
            return client.post(path, json=json)

        monkeypatch.setattr(httpx, "post", fake_post)
        result = CliRunner().invoke(main, ["ring-energy", "--server",
                                           "http://server"])
        assert result.exit_code == 0
        assert result.output.splitlines()[1].startswith("ring-energy,10,")
