import json

import numpy as np
import pytest

from gatesynth.cli import CliError, main, parse_config
from gatesynth.linalg import identity
from gatesynth.targets import save_matrix_file


def test_defaults_mirror_published_parameters():
    cfg = parse_config(["--target", "toffoli"])
    p = cfg.params
    assert p.num_groups == 15 and p.group_size == 25
    assert (p.r1, p.r2, p.r3) == (0.8, 0.1, 0.1)
    assert p.max_iterations == 500 and p.seed == 0
    assert cfg.weights.alpha == 0.9 and cfg.weights.beta == 0.1
    assert cfg.max_gates == 8
    assert cfg.qubits == 3
    assert cfg.report_every == 50
    assert len(cfg.gate_set) == 17
    assert cfg.grid.count == 17


def test_toffoli_row_flags():
    cfg = parse_config(
        ["--target", "toffoli", "--max-gates", "8", "--iterations", "500", "--seed", "1"]
    )
    assert cfg.target_name == "toffoli" and cfg.qubits == 3
    assert cfg.params.max_iterations == 500 and cfg.params.seed == 1


def test_no_arguments_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        parse_config([])
    assert exc.value.code == 2


def test_unknown_flag_is_rejected():
    with pytest.raises(SystemExit):
        parse_config(["--target", "toffoli", "--warp-speed", "9"])


def test_rates_must_sum_to_one():
    with pytest.raises(CliError, match="sum to 1"):
        parse_config(["--target", "toffoli", "--r1", "0.5", "--r2", "0.5", "--r3", "0.5"])


def test_inconsistent_qubits_for_fixed_target():
    with pytest.raises(CliError, match="inconsistent qubit count"):
        parse_config(["--target", "toffoli", "--qubits", "2"])


def test_unknown_target_name():
    with pytest.raises(CliError, match="unknown target"):
        parse_config(["--target", "hadamard_tower"])


def test_angle_presets():
    assert parse_config(["--target", "qft"]).grid.count == 17
    assert parse_config(["--target", "qft", "--angle-preset", "h2"]).grid.count == 1257
    custom = parse_config(["--target", "qft", "--angle-step", "0.5"])
    assert np.isclose(custom.grid.step, 0.5)


def test_gate_set_flag():
    cfg = parse_config(["--target", "qft", "--gate-set", "control:V,control:Vdg,control:Y"])
    assert len(cfg.gate_set) == 3


def test_config_file_and_flag_precedence(tmp_path):
    cfg_file = tmp_path / "run.json"
    cfg_file.write_text(json.dumps({"target": "toffoli", "seed": 9, "max_gates": 6}))
    # file values beat defaults
    cfg = parse_config(["--config", str(cfg_file)])
    assert cfg.target_name == "toffoli" and cfg.params.seed == 9 and cfg.max_gates == 6
    # flags beat file values
    cfg = parse_config(["--config", str(cfg_file), "--seed", "2", "--max-gates", "8"])
    assert cfg.params.seed == 2 and cfg.max_gates == 8
    # untouched keys still come from defaults
    assert cfg.params.num_groups == 15


def test_config_file_unknown_key(tmp_path):
    cfg_file = tmp_path / "run.json"
    cfg_file.write_text(json.dumps({"target": "toffoli", "groops": 2}))
    with pytest.raises(CliError, match="unknown config file key"):
        parse_config(["--config", str(cfg_file)])


def _identity_file(tmp_path, n=1):
    path = tmp_path / "eye.mat"
    save_matrix_file(str(path), identity(2 ** n))
    return str(path)


def _run_record(tmp_path, capsys, extra=(), n=1):
    out = tmp_path / "record.txt"
    argv = [
        "--matrix-file", _identity_file(tmp_path, n),
        "--iterations", "1",
        "--max-gates", "2",
        "--groups", "2",
        "--group-size", "3",
        "--seed", "5",
        "--out", str(out),
        *extra,
    ]
    assert main(argv) == 0
    capsys.readouterr()
    return out.read_text()


def test_execute_writes_complete_record(tmp_path, capsys):
    record = _run_record(tmp_path, capsys)
    keys = [line.split(":")[0] for line in record.splitlines() if ":" in line]
    assert keys[:12] == [
        "target", "n", "max_gates", "seed", "params", "iterations_run",
        "best_y", "best_c", "best_cost", "wall_time_s", "genotype", "table",
    ]
    best_c = float(record.split("best_c: ")[1].splitlines()[0])
    assert 0.0 <= best_c <= 1.0
    assert "G, T, C, Q" in record


def test_execute_is_deterministic_apart_from_wall_time(tmp_path, capsys):
    a = _run_record(tmp_path, capsys)
    b = _run_record(tmp_path, capsys)
    strip = lambda text: "\n".join(
        line for line in text.splitlines() if not line.startswith("wall_time_s:")
    )
    assert strip(a) == strip(b)


def test_execute_streams_progress_lines(tmp_path, capsys):
    path = _identity_file(tmp_path)
    assert main([
        "--matrix-file", path, "--iterations", "3", "--max-gates", "2",
        "--groups", "2", "--group-size", "2", "--report-every", "1",
    ]) == 0
    outerr = capsys.readouterr()
    progress = outerr.out.split("target:")[0]
    lines = [l for l in progress.splitlines() if l and l[0].isdigit()]
    assert len(lines) == 4  # iterations 0..3
    for line in lines:
        parts = [p.strip() for p in line.split(",")]
        assert len(parts) == 4
        int(parts[0]); float(parts[1]); float(parts[2]); int(parts[3])


def test_threaded_execution_matches_sequential(tmp_path, capsys):
    a = _run_record(tmp_path, capsys, extra=("--threads", "1"))
    b = _run_record(tmp_path, capsys, extra=("--threads", "2"))
    strip = lambda text: "\n".join(
        line for line in text.splitlines() if not line.startswith("wall_time_s:")
    )
    assert strip(a) == strip(b)


def test_matrix_file_qubit_mismatch(tmp_path, capsys):
    path = _identity_file(tmp_path, n=1)
    assert main(["--matrix-file", path, "--qubits", "3"]) == 1
    assert "inconsistent qubit count" in capsys.readouterr().err


def test_reevaluate_published_grover_table(tmp_path, capsys):
    table = tmp_path / "grover.table"
    table.write_text(
        "G, T, C, Q\n"
        "Control X, 2, 1, 0\n"
        "0, 0, 0, 0\n"
        "Single V, 2, 0, 0\n"
        "0, 0, 0, 0\n"
        "Single V, 1, 0, 0\n"
        "Control X, 2, 1, 0\n"
        "Single V, 1, 0, 0\n"
        "0, 0, 0, 0\n"
    )
    assert main(["--target", "grover_diffusion", "--qubits", "2",
                 "--reevaluate", str(table)]) == 0
    out = capsys.readouterr().out
    record = dict(line.split(": ") for line in out.splitlines() if ": " in line)
    assert np.isclose(float(record["c"]), 1.0, atol=1e-12)
    assert record["cost"] == "7"
    assert np.isclose(float(record["y"]), abs(1 - (0.9 + 0.1 / 7)), atol=1e-12)


def test_reevaluate_all_zero_table_vs_identity(tmp_path, capsys):
    table = tmp_path / "empty.table"
    table.write_text("0 0 0 0\n" * 8)
    path = _identity_file(tmp_path, n=2)
    assert main(["--matrix-file", path, "--reevaluate", str(table)]) == 0
    record = dict(
        line.split(": ") for line in capsys.readouterr().out.splitlines() if ": " in line
    )
    assert float(record["c"]) == 1.0
    assert record["cost"] == "0"


def test_reevaluate_out_of_range_qubit(tmp_path, capsys):
    table = tmp_path / "bad.table"
    table.write_text("Control X, 5, 1, 0\n")
    assert main(["--target", "grover_diffusion", "--qubits", "2",
                 "--reevaluate", str(table)]) == 1
    err = capsys.readouterr().err
    assert "line 1" in err


def test_record_round_trips_through_reevaluate(tmp_path, capsys):
    record = _run_record(tmp_path, capsys, n=1)
    y = record.split("best_y: ")[1].splitlines()[0]
    c = record.split("best_c: ")[1].splitlines()[0]
    cost = record.split("best_cost: ")[1].splitlines()[0]
    table = record.split("table:\n")[1]
    table_file = tmp_path / "roundtrip.table"
    table_file.write_text(table)
    assert main([
        "--matrix-file", _identity_file(tmp_path, 1), "--max-gates", "2",
        "--reevaluate", str(table_file),
    ]) == 0
    out = dict(
        line.split(": ") for line in capsys.readouterr().out.splitlines() if ": " in line
    )
    # exact reproduction, bit for bit
    assert out["y"] == y and out["c"] == c and out["cost"] == cost
