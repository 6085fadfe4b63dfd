import json

import pytest

from cli import build_parser, run_command
from main import main
from utils.errors import EXIT_CONFIG_ERROR, EXIT_OK, SYSTEM_LOGS


def run(argv):
    return run_command(build_parser().parse_args(argv))


def test_temporal_sweep_to_stdout(capsys):
    assert run(["temporal-sweep", "--w1", "0.1", "--range", "0.5:1:3", "--parallel", "1"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "w_hat,psi_lf,psi_tp"
    assert len(lines) == 4


def test_fd_sweep_writes_json(tmp_path):
    out = tmp_path / "fd.json"
    argv = ["fd-sweep", "--scheme", "lf", "--M", "2", "--w1", "0.1", "--nu", "0.6",
            "--range", "0.2:0.6:3", "--format", "json", "--out", str(out), "--parallel", "1"]
    assert run(argv) == EXIT_OK
    payload = json.loads(out.read_text())
    assert len(payload["rows"]) == 3


def test_cfl_table(capsys):
    assert run(["cfl-table", "--parallel", "1"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("kind,")


def test_bad_range_is_a_config_error(capsys):
    assert run(["temporal-sweep", "--range", "0:1"]) == EXIT_CONFIG_ERROR
    assert "a:b:n" in capsys.readouterr().err
    assert SYSTEM_LOGS[-1].details["error_type"] == "ConfigError"


def test_leapfrog_above_cfl_limit_is_refused():
    argv = ["fd-sweep", "--scheme", "lf", "--M", "1", "--w1", "0.1", "--nu", "1.5", "--range", "0.5:1:2"]
    assert run(argv) == EXIT_CONFIG_ERROR


def test_allow_unstable_overrides_the_limit(capsys):
    argv = ["fd-sweep", "--scheme", "lf", "--M", "1", "--w1", "0.1", "--nu", "1.5",
            "--range", "0.5:1:2", "--allow-unstable", "--parallel", "1"]
    assert run(argv) == EXIT_OK
    assert capsys.readouterr().out.startswith("w_hat,k_phys_re,k_phys_im,psi")


def test_config_file_is_merged(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"medium": {"gamma_hat": 0.0}, "range": "0.5:1:2"}))
    assert run(["temporal-sweep", "--config", str(config), "--parallel", "1"]) == EXIT_OK
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_unknown_flag_exits_with_config_code():
    with pytest.raises(SystemExit) as exc:
        main(["cfl-table", "--bogus"])
    assert exc.value.code == EXIT_CONFIG_ERROR


def test_main_exits_with_command_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["temporal-sweep", "--range", "0.5:1:2", "--parallel", "1"])
    assert exc.value.code == EXIT_OK
