"""Tests for the suite runner: configuration handling, report formats,
determinism, and exit codes."""

import csv
import io
import json

import pytest

from gsp4verify import cli


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


# -- configuration --------------------------------------------------------------

def test_unknown_suite_is_config_error(capsys):
    assert cli.main(["--suite", "nonsense"]) == 2


def test_bad_prime_is_config_error(capsys):
    assert cli.main(["--suite", "hecke", "--ell", "11"]) == 2
    assert cli.main(["--suite", "hecke", "--ell", "4"]) == 2


def test_bad_flag_is_usage_error(capsys):
    assert cli.main(["--no-such-flag"]) == 2


def test_bad_jobs_is_config_error(capsys):
    assert cli.main(["--suite", "bessel", "--jobs", "0"]) == 2


def test_bad_order_is_config_error(capsys):
    assert cli.main(["--suite", "bessel", "--order", "1"]) == 2


def test_missing_config_file_is_config_error(capsys):
    assert cli.main(["--config", "/no/such/file"]) == 2


def test_config_file_parsing(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nsuite = hecke, bessel\nell = 2\n"
                   "order = 7\njobs = 2\nformat = json\n")
    raw = cli.read_config_file(str(cfg))
    assert raw == {"suite": "hecke, bessel", "ell": "2", "order": "7",
                   "jobs": "2", "format": "json"}


def test_config_file_bad_line(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("just a bare word\n")
    with pytest.raises(cli.ConfigError):
        cli.read_config_file(str(cfg))


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("frobnicate = yes\n")
    assert cli.main(["--config", str(cfg)]) == 2


def test_flags_override_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("suite = hecke\nell = 5\nformat = human\n")
    code, out = run_cli(["--config", str(cfg), "--ell", "2",
                         "--format", "json"], capsys)
    assert code == 0
    records = json.loads(out)
    assert [r["case"] for r in records] == ["polynomial-l2"]


def test_env_var_sets_parallelism(monkeypatch):
    monkeypatch.setenv(cli.JOBS_ENV, "3")
    parser = cli.make_parser()
    config = cli.build_config(parser.parse_args(["--suite", "bessel"]))
    assert config.parallelism == 3
    monkeypatch.setenv(cli.JOBS_ENV, "zero")
    with pytest.raises(cli.ConfigError):
        cli.build_config(parser.parse_args(["--suite", "bessel"]))


# -- execution and reports -------------------------------------------------------

def test_empty_suite_list_exits_zero(capsys):
    parser = cli.make_parser()
    config = cli.build_config(parser.parse_args([]))
    config.suites = ()
    assert cli.run(config) == []
    assert cli.emit([], "json") == "[]\n"


def test_json_schema_and_exit_code(capsys):
    code, out = run_cli(["--suite", "bessel", "--format", "json"], capsys)
    assert code == 0
    records = json.loads(out)
    assert records
    for r in records:
        assert set(r) == {"suite", "case", "params", "status", "lhs",
                          "rhs", "ms"}
        assert r["status"] == "pass"
        assert r["lhs"] is None and r["rhs"] is None
        assert isinstance(r["ms"], (int, float))


def test_report_sorted_and_deterministic(capsys):
    code1, out1 = run_cli(["--suite", "bessel,parahoric", "--ell", "2",
                           "--format", "json"], capsys)
    code2, out2 = run_cli(["--suite", "parahoric,bessel", "--ell", "2",
                           "--format", "json", "--jobs", "4"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2  # byte-identical, independent of order/parallelism
    records = json.loads(out1)
    keys = [(r["suite"], r["case"]) for r in records]
    assert keys == sorted(keys)


def test_tsv_round_trips(capsys):
    code, out = run_cli(["--suite", "parahoric", "--ell", "2",
                         "--format", "tsv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out), dialect="excel-tab"))
    assert rows
    for row in rows:
        assert row["status"] == "pass"
        assert json.loads(row["params"]) == {"ell": 2}


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out = run_cli(["--suite", "bessel", "--format", "json",
                         "--out", str(target)], capsys)
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())


def test_failing_case_reports_sides_and_exit_one(capsys, monkeypatch):
    def bad_builder(config):
        yield ("always-bad", {}, lambda: (False, "1", "2"))
        yield ("boom", {}, lambda: 1 / 0)
        yield ("fine", {}, lambda: True)
    monkeypatch.setitem(cli._BUILDERS, "bessel", bad_builder)
    code, out = run_cli(["--suite", "bessel", "--format", "json"], capsys)
    assert code == 1
    records = {r["case"]: r for r in json.loads(out)}
    assert records["always-bad"]["status"] == "fail"
    assert records["always-bad"]["lhs"] == "1"
    assert records["always-bad"]["rhs"] == "2"
    assert records["boom"]["status"] == "error"
    assert "ZeroDivisionError" in records["boom"]["lhs"]
    assert records["fine"]["status"] == "pass"


def test_human_format_summary_line(capsys):
    code, out = run_cli(["--suite", "bessel", "--format", "human"], capsys)
    assert code == 0
    assert out.strip().splitlines()[-1].endswith("passed, 0 failed, 0 errors")


def test_case_ids_unique_across_default_config():
    parser = cli.make_parser()
    config = cli.build_config(parser.parse_args([]))
    cases = cli.build_cases(config)
    ids = [(s, c) for s, c, _, _ in cases]
    assert len(ids) == len(set(ids))
