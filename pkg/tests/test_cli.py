import csv
import json

import pytest

from fgqa.cli import EXIT_CONFIG, EXIT_OK, EXIT_PHYSICS, emit_config, main, parse_config


def write_config(tmp_path, name, cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def read_rows(path):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(ln for ln in fh if not ln.startswith("#"))]
    return rows[0], rows[1:]


DERIVE_CFG = {
    "schema_version": 1,
    "lengths_nm": [5.0, 10.0, 15.0],
    "tunnel_oxide_nm": 2.5,
    "fg_height_nm": 10.0,
    "coupling_ratio": 0.3,
}


class TestConfigHandling:
    def test_round_trip(self):
        cfg = {"schema_version": 1, "nested": {"a": [1, 2.5, "x"]}, "b": True}
        assert parse_config(emit_config(cfg)) == cfg

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = dict(DERIVE_CFG, coupling_ration=0.3)
        code = main(["derive", "--config", write_config(tmp_path, "c.json", cfg)])
        assert code == EXIT_CONFIG
        assert "coupling_ration" in capsys.readouterr().err

    def test_wrong_schema_version(self, tmp_path):
        cfg = dict(DERIVE_CFG, schema_version=99)
        code = main(["derive", "--config", write_config(tmp_path, "c.json", cfg)])
        assert code == EXIT_CONFIG

    def test_missing_config_file(self, capsys):
        assert main(["derive", "--config", "/nonexistent/cfg.json"]) == EXIT_CONFIG

    def test_invalid_field_type(self, tmp_path):
        cfg = dict(DERIVE_CFG, tunnel_oxide_nm="thin")
        assert main(["derive", "--config",
                     write_config(tmp_path, "c.json", cfg)]) == EXIT_CONFIG


class TestDerive:
    def test_reference_gate_windows(self, tmp_path):
        out = tmp_path / "table.csv"
        code = main(["derive", "--config", write_config(tmp_path, "c.json", DERIVE_CFG),
                     "--out", str(out)])
        assert code == EXIT_OK
        header, rows = read_rows(out)
        assert header[:5] == ["L_nm", "J_K", "U_h_K", "U_w_eV", "tunnel_Hz"]
        by_length = {float(r[0]): r for r in rows}
        assert float(by_length[10.0][3]) == pytest.approx(0.27, rel=0.03)
        assert float(by_length[5.0][3]) == pytest.approx(1.08, rel=0.03)

    def test_second_design_family(self, tmp_path):
        cfg = dict(DERIVE_CFG, tunnel_oxide_nm=3.5, fg_height_nm=100.0,
                   lengths_nm=[5.0])
        out = tmp_path / "t2.csv"
        assert main(["derive", "--config", write_config(tmp_path, "c.json", cfg),
                     "--out", str(out)]) == EXIT_OK
        _, rows = read_rows(out)
        assert float(rows[0][3]) == pytest.approx(1.52, rel=0.03)

    def test_empty_length_list_gives_header_only(self, tmp_path, capsys):
        cfg = dict(DERIVE_CFG, lengths_nm=[])
        assert main(["derive", "--config",
                     write_config(tmp_path, "c.json", cfg)]) == EXIT_OK
        lines = [ln for ln in capsys.readouterr().out.splitlines()
                 if ln and not ln.startswith("#")]
        assert len(lines) == 1  # column header only


SWEEP_GEOMETRY = {
    "length_nm": 10.0,
    "height_nm": 100.0,
    "tunnel_oxide_nm": 3.5,
    "coupling_ratio": 0.3,
}


class TestSweep:
    def test_coupling_decreases_with_size(self, tmp_path):
        cfg = {"schema_version": 1, "parameter": "L",
               "range": {"min": 5.0, "max": 15.0, "points": 6},
               "geometry": SWEEP_GEOMETRY}
        out = tmp_path / "L.csv"
        assert main(["sweep", "--config", write_config(tmp_path, "c.json", cfg),
                     "--out", str(out)]) == EXIT_OK
        _, rows = read_rows(out)
        j_col = [float(r[1]) for r in rows]
        assert all(a > b for a, b in zip(j_col, j_col[1:]))

    def test_gate_modulation_range(self, tmp_path):
        cfg = {"schema_version": 1, "parameter": "V_CG",
               "range": {"min": -1.0, "max": 1.0, "points": 9},
               "geometry": dict(SWEEP_GEOMETRY, length_nm=15.0)}
        out = tmp_path / "v.csv"
        assert main(["sweep", "--config", write_config(tmp_path, "c.json", cfg),
                     "--out", str(out)]) == EXIT_OK
        _, rows = read_rows(out)
        amps = [float(r[1]) for r in rows]
        assert max(amps) / min(amps) >= 1e3

    def test_two_point_sweep_emits_two_rows(self, tmp_path):
        cfg = {"schema_version": 1, "parameter": "Z_FG",
               "range": {"min": 10.0, "max": 100.0, "points": 2},
               "geometry": SWEEP_GEOMETRY}
        out = tmp_path / "z.csv"
        assert main(["sweep", "--config", write_config(tmp_path, "c.json", cfg),
                     "--out", str(out)]) == EXIT_OK
        _, rows = read_rows(out)
        assert len(rows) == 2

    def test_parabola_sweep_columns(self, tmp_path):
        cfg = {"schema_version": 1, "parameter": "V_CG1-parabola",
               "range": {"min": -0.5, "max": 0.5, "points": 11},
               "geometry": SWEEP_GEOMETRY, "n_values": [0, 1]}
        out = tmp_path / "p.csv"
        assert main(["sweep", "--config", write_config(tmp_path, "c.json", cfg),
                     "--out", str(out)]) == EXIT_OK
        header, rows = read_rows(out)
        assert header == ["V_CG1_V", "n", "U_eV"]
        assert len(rows) == 22

    def test_threads_do_not_change_output(self, tmp_path):
        cfg = {"schema_version": 1, "parameter": "L",
               "range": {"min": 5.0, "max": 15.0, "points": 8},
               "geometry": SWEEP_GEOMETRY}
        path = write_config(tmp_path, "c.json", cfg)
        out1, out4 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["sweep", "--config", path, "--out", str(out1)]) == EXIT_OK
        assert main(["sweep", "--config", path, "--out", str(out4),
                     "--threads", "4"]) == EXIT_OK
        assert out1.read_bytes() == out4.read_bytes()

    def test_unwritable_output_path(self, tmp_path):
        cfg = {"schema_version": 1, "parameter": "Z_FG",
               "range": {"min": 10.0, "max": 100.0, "points": 2},
               "geometry": SWEEP_GEOMETRY}
        code = main(["sweep", "--config", write_config(tmp_path, "c.json", cfg),
                     "--out", str(tmp_path / "no" / "such" / "dir.csv")])
        assert code == EXIT_CONFIG

    def test_degenerate_range_rejected(self, tmp_path):
        cfg = {"schema_version": 1, "parameter": "L",
               "range": {"min": 5.0, "max": 5.0, "points": 2},
               "geometry": SWEEP_GEOMETRY}
        assert main(["sweep", "--config",
                     write_config(tmp_path, "c.json", cfg)]) == EXIT_CONFIG

    def test_collapsed_barrier_is_physics_error(self, tmp_path):
        cfg = {"schema_version": 1, "parameter": "V_CG",
               "range": {"min": -4.0, "max": -3.0, "points": 3},
               "geometry": SWEEP_GEOMETRY}
        assert main(["sweep", "--config",
                     write_config(tmp_path, "c.json", cfg)]) == EXIT_PHYSICS


ANNEAL_CFG = {
    "schema_version": 1,
    "problem": {"kind": "maxcut",
                "edges": [[0, 1, 1.0], [1, 2, 1.0], [2, 3, 1.0], [0, 3, 1.0]]},
    "schedule": {"delta0_ev": 5.0, "t_total": 60.0, "steps": 1200,
                 "profile": "exponential"},
    "shots": 2048,
}


class TestAnneal:
    def test_four_cycle_reports_full_cut(self, tmp_path, capsys):
        code = main(["anneal", "--config", write_config(tmp_path, "c.json", ANNEAL_CFG),
                     "--seed", "7"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "cut value of most frequent state: 4.0" in out
        assert "ground-state shot frequency" in out

    def test_histogram_and_trace_written(self, tmp_path, capsys):
        prefix = tmp_path / "run"
        code = main(["anneal", "--config", write_config(tmp_path, "c.json", ANNEAL_CFG),
                     "--seed", "7", "--out", str(prefix)])
        assert code == EXIT_OK
        header, rows = read_rows(tmp_path / "run_histogram.csv")
        assert header == ["state", "count", "frequency", "energy_eV"]
        assert sum(int(r[1]) for r in rows) == 2048
        theader, trows = read_rows(tmp_path / "run_trace.csv")
        assert theader == ["t", "delta_eV", "energy_eV"]
        assert len(trows) >= 2

    def test_fixed_seed_is_byte_identical(self, tmp_path, capsys):
        path = write_config(tmp_path, "c.json", ANNEAL_CFG)
        for prefix in ("one", "two"):
            assert main(["anneal", "--config", path, "--seed", "11",
                         "--out", str(tmp_path / prefix)]) == EXIT_OK
        for suffix in ("_histogram.csv", "_trace.csv"):
            assert (tmp_path / f"one{suffix}").read_bytes() == \
                (tmp_path / f"two{suffix}").read_bytes()

    def test_missing_delta0_rejected_for_plain_problems(self, tmp_path):
        cfg = dict(ANNEAL_CFG, schedule={"t_total": 10.0, "steps": 100})
        assert main(["anneal", "--config",
                     write_config(tmp_path, "c.json", cfg)]) == EXIT_CONFIG

    def test_fg_grid_problem_runs(self, tmp_path, capsys):
        cfg = {
            "schema_version": 1,
            "problem": {"kind": "fg_grid", "rows": 1, "cols": 3,
                        "geometry": SWEEP_GEOMETRY, "v_cg": -1.7},
            "schedule": {"t_total": 60000.0, "steps": 16000, "profile": "exponential"},
            "shots": 512,
        }
        code = main(["anneal", "--config", write_config(tmp_path, "c.json", cfg),
                     "--seed", "3"])
        assert code == EXIT_OK
        assert "topology: grid(1x3)" in capsys.readouterr().out


class TestDecohere:
    CFG = {"schema_version": 1, "delta_kelvin": [10.0, 100.0], "time_points": 50}

    def test_report_contains_suppression_exponent(self, tmp_path, capsys):
        code = main(["decohere", "--config", write_config(tmp_path, "c.json", self.CFG)])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "renormalization exponent: 1323.39" in out
        assert "t_coh" in out

    def test_signal_csv(self, tmp_path, capsys):
        out = tmp_path / "pt.csv"
        assert main(["decohere", "--config", write_config(tmp_path, "c.json", self.CFG),
                     "--out", str(out)]) == EXIT_OK
        header, rows = read_rows(out)
        assert header == ["delta_K", "t_s", "p_coh", "p_inc", "p_total"]
        assert len(rows) == 100
        first = rows[0]
        assert float(first[2]) == 1.0 and float(first[3]) == 0.0
