from pathlib import Path

import numpy as np
import pytest

from riscoupling import MethodId
from riscoupling.cli import main
from riscoupling.experiments import (
    CSV_HEADER,
    ConfigError,
    SweepRecord,
    SweepSpec,
    parse_config,
    run_sweep,
    write_csv,
)

DATA = Path(__file__).parent / "data"

MINIMAL = """
N = 4
spacing = 0.25
angles = end-fire
methods = Decoupled
"""


class TestParseConfig:
    def test_minimal(self):
        spec = parse_config(MINIMAL)
        assert spec.n_list == (4,)
        assert spec.spacing_list == (0.25,)
        assert spec.angle_pairs == ((0.0, np.pi),)
        assert spec.methods == (MethodId.DECOUPLED,)
        assert spec.R == 50.0
        assert spec.tol == 1e-10
        assert spec.max_sweeps == 500

    def test_cartesian_product_count(self):
        spec = parse_config("""
N = 2, 4, 8
spacing = 0.5, 0.25, 0.1, 0.05
angles = front-fire
methods = Decoupled
""")
        assert len(spec.scenarios()) == 12

    def test_named_and_numeric_angles(self):
        spec = parse_config(MINIMAL.replace("end-fire", "front-fire; 0.7:2.1"))
        assert spec.angle_pairs == ((np.pi / 2, np.pi / 2), (0.7, 2.1))

    def test_empty_methods_rejected(self):
        with pytest.raises(ConfigError):
            parse_config(MINIMAL.replace("methods = Decoupled", "methods ="))

    def test_unknown_key_reports_line(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config("N = 4\nbogus = 1\nspacing = 0.25\nangles = end-fire\nmethods = Decoupled")

    def test_missing_required_key(self):
        with pytest.raises(ConfigError, match="spacing"):
            parse_config("N = 4\nangles = end-fire\nmethods = Decoupled")

    def test_non_numeric_value(self):
        with pytest.raises(ConfigError, match="non-numeric"):
            parse_config(MINIMAL + "tol = often")

    def test_unknown_method(self):
        with pytest.raises(ConfigError, match="Z-OPT"):
            parse_config(MINIMAL.replace("Decoupled", "Z-OPT"))

    def test_comments_and_blank_lines_ignored(self):
        spec = parse_config("# header\n\n" + MINIMAL + "\n# trailing\n")
        assert spec.n_list == (4,)


class TestRunSweep:
    def test_closed_form_methods_single_record(self):
        spec = parse_config(MINIMAL.replace("Decoupled", "Decoupled, NoCoupling, IgnoreMC"))
        records = run_sweep(spec)
        assert len(records) == 3
        assert all(r.sweep_index == -1 for r in records)
        assert all(r.array_gain >= 0 for r in records)

    def test_iterative_method_per_sweep_records(self):
        spec = parse_config(MINIMAL.replace("Decoupled", "ElementWise"))
        records = run_sweep(spec)
        assert len(records) > 1
        assert [r.sweep_index for r in records] == list(range(len(records)))
        gains = [r.array_gain for r in records]
        assert all(b >= a - 1e-12 for a, b in zip(gains, gains[1:]))

    def test_trace_elements_gives_per_update_records(self):
        spec = parse_config(MINIMAL.replace("Decoupled", "ElementWise"))
        per_sweep = run_sweep(spec)
        per_update = run_sweep(spec, trace_elements=True)
        assert len(per_update) > len(per_sweep)

    def test_numerical_failure_captured_in_flags(self):
        spec = parse_config(MINIMAL.replace("0.25", "0.01"))
        records = run_sweep(spec)
        assert len(records) == 1
        assert records[0].array_gain == 0.0
        assert any(f.startswith("error:") for f in records[0].flags)

    def test_thread_pool_output_matches_serial(self):
        spec = parse_config("""
scenario_id = pool
N = 2, 3
spacing = 0.25, 0.1
angles = end-fire; front-fire
methods = Decoupled, NoCoupling
""")
        serial = run_sweep(spec, threads=1)
        pooled = run_sweep(spec, threads=4)
        assert [r.sort_key() for r in serial] == [r.sort_key() for r in pooled]
        assert [r.array_gain for r in serial] == [r.array_gain for r in pooled]

    def test_db_column_consistency(self):
        spec = parse_config(MINIMAL)
        r = run_sweep(spec)[0]
        assert r.array_gain_db == pytest.approx(10 * np.log10(r.array_gain))


def strip_wall_time(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        parts = line.split(",")
        del parts[10]
        out.append(",".join(parts))
    return out


class TestWriteCsv:
    def test_empty_records_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_csv([], path)
        assert path.read_text() == CSV_HEADER + "\n"

    def test_single_record_two_lines(self, tmp_path):
        rec = SweepRecord("s", "Decoupled", 4, 0.25, 0.0, np.pi, 0.0, -1, 16.0, 0.1)
        path = tmp_path / "one.csv"
        write_csv([rec], path)
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        assert lines[0] == CSV_HEADER
        fields = lines[1].split(",")
        assert fields[1] == "Decoupled"
        assert float(fields[8]) == 16.0

    def test_shortest_round_trip_floats(self, tmp_path):
        gain = 163.08229291828144
        rec = SweepRecord("s", "Decoupled", 4, 0.25, 0.0, np.pi, 0.0, -1, gain, 0.0)
        path = tmp_path / "rt.csv"
        write_csv([rec], path)
        assert float(path.read_text().splitlines()[1].split(",")[8]) == gain

    def test_golden_file(self, tmp_path):
        spec = parse_config((DATA / "golden_sweep.cfg").read_text())
        records = run_sweep(spec)
        path = tmp_path / "golden.csv"
        write_csv(records, path)
        got = strip_wall_time(path.read_text())
        expected = strip_wall_time((DATA / "golden_sweep.csv").read_text())
        assert got == expected


class TestCli:
    def test_run_roundtrip(self, tmp_path):
        cfg = tmp_path / "spec.cfg"
        cfg.write_text("scenario_id = clitest\n" + MINIMAL)
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path)]) == 0
        out = (tmp_path / "clitest.csv").read_text()
        assert out.splitlines()[0] == CSV_HEADER

    def test_config_error_exit_code(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("nonsense\n")
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path)]) == 1

    def test_missing_config_file(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "nope.cfg"),
                     "--out", str(tmp_path)]) == 1

    def test_strict_numerical_failure_exit_code(self, tmp_path):
        cfg = tmp_path / "tiny.cfg"
        cfg.write_text(MINIMAL.replace("0.25", "0.005"))
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path), "--strict"]) == 2
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path)]) == 0

    def test_list_figures(self, capsys):
        assert main(["list-figures"]) == 0
        out = capsys.readouterr().out
        for name in ("fig3.cfg", "fig4.cfg", "fig5.cfg", "fig6.cfg", "fig7.cfg", "fig8.cfg"):
            assert name in out

    def test_selftest(self, capsys):
        assert main(["selftest"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 3


class TestShippedConfigs:
    @pytest.mark.parametrize("name", ["fig3", "fig4", "fig5", "fig6", "fig7", "fig8"])
    def test_all_parse(self, name):
        path = Path(__file__).parent.parent / "configs" / f"{name}.cfg"
        spec = parse_config(path.read_text())
        assert spec.scenarios()
        assert spec.methods

    def test_spec_validation(self):
        with pytest.raises(ConfigError):
            SweepSpec(scenario_id="x", n_list=(), spacing_list=(0.5,),
                      angle_pairs=((0.0, np.pi),), methods=(MethodId.DECOUPLED,))
