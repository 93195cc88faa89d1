import csv
import json
from pathlib import Path

import pytest

from squidmech import cli

REFERENCE_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "reference_device.json"


def run(args, tmp_path, name="out"):
    out = tmp_path / name
    code = cli.main(args + ["--out", str(out)])
    return code, out


class TestParseConfig:
    def test_empty_config_applies_all_defaults(self):
        config = cli.parse_config("{}")
        assert config.device.squid.critical_current == 100e-9
        # every leaf default is echoed
        assert any("device.bias.temperature" in line
                   for line in config.defaults_applied)
        assert any("calibrated" in line for line in config.defaults_applied)

    def test_hz_conversion_at_boundary(self):
        config = cli.parse_config(
            '{"device": {"mechanical": {"frequency": 5e6}}}')
        assert config.device.mechanical.frequency == pytest.approx(
            2.0 * 3.141592653589793 * 5e6)

    def test_unknown_key_rejected_with_path(self):
        with pytest.raises(cli.ConfigError, match="device.squid"):
            cli.parse_config('{"device": {"squid": {"critical_currant": 1e-7}}}')

    def test_unknown_top_level_rejected(self):
        with pytest.raises(cli.ConfigError, match="devcie"):
            cli.parse_config('{"devcie": {}}')

    def test_flux_bound_named(self):
        with pytest.raises(cli.ConfigError, match="dc_flux_fraction"):
            cli.parse_config('{"device": {"bias": {"dc_flux_fraction": 0.6}}}')

    def test_malformed_json_position(self):
        with pytest.raises(cli.ConfigError, match="line 1"):
            cli.parse_config("{nope}")

    def test_reference_config_is_the_table_device(self):
        config = cli.parse_config(REFERENCE_CONFIG.read_text())
        from squidmech import figures_of_merit
        fom = figures_of_merit(config.device)
        assert fom.g0 / fom.kappa == pytest.approx(12.606, rel=1e-3)


class TestDispatch:
    def test_fom_summary_and_exit(self, tmp_path, capsys):
        code, out = run(["fom", "--config", str(REFERENCE_CONFIG)], tmp_path)
        assert code == 0
        captured = capsys.readouterr().out
        assert "g0/kappa" in captured
        assert "12.61" in captured
        assert (out / "report.json").exists()
        assert (out / "data.csv").exists()
        assert (out / "config.resolved.json").exists()

    def test_validate_ok(self, tmp_path):
        code, _ = run(["validate", "--config", str(REFERENCE_CONFIG)], tmp_path)
        assert code == 0

    def test_validate_strict_violation(self, tmp_path):
        # near the half-integer point, holding the operating current at the
        # reference-point scale (~10 nA) blows up the current ratio
        bad = tmp_path / "bad.json"
        bad.write_text('{"device": {"bias": {"dc_flux_fraction": 0.49}},'
                       ' "scenario": {"cavity_current_estimate": 1e-8}}')
        code, _ = run(["validate", "--strict", "--config", str(bad)], tmp_path)
        assert code == 3
        # without --strict the same run reports and exits clean
        code, _ = run(["validate", "--config", str(bad)], tmp_path, name="out2")
        assert code == 0

    def test_validate_strict_violation_near_pole_by_default(self, tmp_path):
        # very close to the pole even the self-suppressed default current
        # estimate cannot keep the loop-inductance ratio small
        bad = tmp_path / "pole.json"
        bad.write_text('{"device": {"bias": {"dc_flux_fraction": 0.4993}}}')
        code, _ = run(["validate", "--strict", "--config", str(bad)], tmp_path)
        assert code == 3

    def test_wavenumber(self, tmp_path):
        code, out = run(["wavenumber"], tmp_path)
        assert code == 0
        rows = list(csv.DictReader((out / "data.csv").open()))
        assert len(rows) == 3
        assert abs(float(rows[1]["residual"])) < 1e-12

    def test_harmonics(self, tmp_path):
        code, out = run(["harmonics"], tmp_path)
        assert code == 0
        payload = json.loads((out / "report.json").read_text())
        assert payload["report"]["provenance"]["qualifying_count_above_kappa"] == 3

    def test_dce_above_threshold_exits_4(self, tmp_path):
        bad = tmp_path / "dce.json"
        bad.write_text('{"scenario": {"alpha_over_kappa": 0.6}}')
        code, _ = run(["dce", "--config", str(bad)], tmp_path)
        assert code == 4

    def test_unknown_scenario_key_exits_2(self, tmp_path):
        bad = tmp_path / "scen.json"
        bad.write_text('{"scenario": {"alpha_over_kppa": 0.2}}')
        code, _ = run(["dce", "--config", str(bad)], tmp_path)
        assert code == 2

    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["frobnicate"])
        assert excinfo.value.code == 2

    def test_bad_dims_flag(self, tmp_path):
        code = cli.main(["steady", "--dims", "ten,8", "--out", str(tmp_path / "x")])
        assert code == 2

    def test_dims_flag_applies(self, tmp_path):
        code, out = run(["steady", "--dims", "6,4"], tmp_path)
        assert code == 0
        payload = json.loads((out / "report.json").read_text())
        assert payload["report"]["provenance"]["inputs"]["dims"] == [6, 4]

    def test_missing_config_file(self, tmp_path):
        code = cli.main(["fom", "--config", str(tmp_path / "absent.json"),
                         "--out", str(tmp_path / "o")])
        assert code == 2


class TestArtifacts:
    def test_byte_identical_reruns(self, tmp_path):
        _, first = run(["fom", "--config", str(REFERENCE_CONFIG)], tmp_path, "a")
        _, second = run(["fom", "--config", str(REFERENCE_CONFIG)], tmp_path, "b")
        assert (first / "report.json").read_bytes() == (second / "report.json").read_bytes()
        assert (first / "data.csv").read_bytes() == (second / "data.csv").read_bytes()

    def test_json_round_trip(self, tmp_path):
        _, out = run(["fom"], tmp_path)
        text = (out / "report.json").read_text()
        payload = json.loads(text)
        again = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=True) + "\n"
        assert again == text

    def test_csv_is_projection_of_json(self, tmp_path):
        _, out = run(["sweep"], tmp_path)
        payload = json.loads((out / "report.json").read_text())
        json_rows = payload["report"]["rows"]
        csv_rows = list(csv.DictReader((out / "data.csv").open()))
        assert len(csv_rows) == len(json_rows)
        for jrow, crow in zip(json_rows, csv_rows):
            for key in ("value", "g0", "kappa"):
                assert float(crow[key]) == jrow[key]
            assert crow["verdict_field"] == jrow["verdict_field"]

    def test_resolved_config_written(self, tmp_path):
        _, out = run(["fom"], tmp_path)
        resolved = json.loads((out / "config.resolved.json").read_text())
        cavity = resolved["config"]["device"]["cavity"]
        assert cavity["capacitance_per_length"] is not None
        assert resolved["defaults_applied"]

    def test_csv_line_endings(self, tmp_path):
        _, out = run(["fom"], tmp_path)
        raw = (out / "data.csv").read_bytes()
        assert b"\r\n" not in raw
        assert raw.endswith(b"\n")
