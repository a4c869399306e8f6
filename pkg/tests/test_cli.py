import json

import numpy as np
import pytest

from lpsolve.cli import main, parse_config
from lpsolve.errors import UsageError
from lpsolve.irls import irls_over
from lpsolve.models import CommandName, IrlsMode, IrlsOptions, OutputFormat


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def csv_values(text):
    return np.array([[complex(v.replace("i", "j")).real for v in line.split(",")] for line in text.splitlines()])


def test_parse_config_defaults():
    config = parse_config(["irls", "A.csv", "b.csv", "--p", "4"])
    assert config.command == CommandName.IRLS
    assert config.inputs == ["A.csv", "b.csv"]
    assert config.p == 4.0
    assert config.mode == IrlsMode.OVER
    assert config.format == OutputFormat.CSV


def test_parse_config_usage_errors():
    with pytest.raises(UsageError):
        parse_config([])
    with pytest.raises(UsageError):
        parse_config(["pinv"])
    with pytest.raises(UsageError):
        parse_config(["irls", "A.csv", "b.csv", "--p", "-1"])
    with pytest.raises(UsageError):
        parse_config(["no-such-command"])


def test_pinv(capsys, write_csv):
    code, out, _ = run_cli(capsys, "pinv", write_csv([[3.0], [4.0]]))
    assert code == 0
    np.testing.assert_allclose(csv_values(out), [[0.12, 0.16]], atol=1e-15)


def test_pinv_limit_json(capsys, write_csv):
    code, out, _ = run_cli(capsys, "pinv", write_csv(np.eye(2)), "--delta", "1e-6", "--format", "json")
    assert code == 0
    body = json.loads(out)
    np.testing.assert_allclose(body["result"], np.eye(2), atol=1e-6)
    assert body["meta"]["method"] == "limit"
    assert {"case", "iterations", "converged"} <= set(body["meta"])


def test_classify(capsys, write_csv):
    code, out, _ = run_cli(capsys, "classify", write_csv(np.eye(2)), write_csv([1.0, 2.0]))
    assert code == 0
    assert out == "1a\n"


def test_solve_reports_case(capsys, write_csv):
    code, out, _ = run_cli(capsys, "solve", write_csv([[1.0], [1.0]]), write_csv([0.0, 2.0]), "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert body["result"] == pytest.approx([1.0])
    assert body["meta"]["case"] == "2b"
    assert body["meta"]["residual_norm"] == pytest.approx(np.sqrt(2))


def test_weighted_solve(capsys, write_csv):
    code, out, _ = run_cli(
        capsys, "solve", write_csv([[1.0, 1.0]]), write_csv([2.0]), "--weights", write_csv([1.0, 2.0]), "--mode", "under"
    )
    assert code == 0
    np.testing.assert_allclose(csv_values(out).ravel(), [1.6, 0.4])

    code, out, _ = run_cli(
        capsys,
        "solve",
        write_csv([[1.0, 1.0]]),
        write_csv([2.0]),
        "--weights",
        write_csv([1.0, 2.0]),
        "--mode",
        "under",
        "--format",
        "json",
    )
    body = json.loads(out)
    assert body["meta"]["case"] == "3a"
    assert body["meta"]["weighted"] is True


def test_irls_under_sparse_vertex(capsys, write_csv, tmp_path):
    trace = tmp_path / "trace.csv"
    code, out, _ = run_cli(
        capsys,
        "irls",
        write_csv([[1.0, 2.0]]),
        write_csv([2.0]),
        "--mode",
        "under",
        "--p",
        "1.1",
        "--iters",
        "100",
        "--trace",
        str(trace),
    )
    assert code == 0
    np.testing.assert_allclose(csv_values(out).ravel(), [0.0, 1.0], atol=1e-3)
    lines = trace.read_text().splitlines()
    assert lines[0] == "iter,pk,q,error_norm,step"
    assert len(lines) == 101


def test_irls_wide_system_over_mode_fails(capsys, write_csv):
    code, out, err = run_cli(capsys, "irls", write_csv([[1.0, 2.0]]), write_csv([2.0]))
    assert code == 1
    assert out == ""
    assert "irls_over" in err


def test_minimax(capsys, write_csv):
    code, out, _ = run_cli(capsys, "minimax", write_csv(np.ones((3, 1))), write_csv([0.0, 1.0, 4.0]), "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert body["result"][0] == pytest.approx(2.0, rel=1e-6)
    assert body["meta"]["characterization"] is True
    assert body["meta"]["refined"] is True
    assert body["meta"]["max_error"] == pytest.approx(2.0, rel=1e-6)


def test_sparse(capsys, write_csv):
    code, out, _ = run_cli(capsys, "sparse", write_csv(np.eye(2)), write_csv([0.0, 5.0]), "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert body["result"] == pytest.approx([0.0, 5.0], abs=1e-12)
    assert body["meta"]["nonzeros"] == 1


def test_frame(capsys, write_csv):
    S = [[1.0, -0.5, -0.5], [0.0, 0.866, -0.866]]
    code, out, _ = run_cli(capsys, "frame", write_csv(S), write_csv([1.0, 0.0]), "--tol", "1e-3", "--format", "json")
    assert code == 0
    body = json.loads(out)
    assert body["result"] == pytest.approx([1.5, 1.5], abs=1e-3)
    assert body["meta"]["tight"] is True
    assert body["meta"]["parseval_constant"] == pytest.approx(1.5)


def test_frame_not_spanning(capsys, write_csv):
    code, _, err = run_cli(capsys, "frame", write_csv([[1.0, 2.0], [2.0, 4.0]]))
    assert code == 1
    assert "span" in err


def test_partition(capsys, write_csv, write_json):
    request = write_json({"n": 2, "known_x_idx": [0], "known_y_idx": [1], "x_known": [1.0], "y_known": [0.0]})
    code, out, _ = run_cli(capsys, "partition", write_csv([[1.0, 1.0], [1.0, -1.0]]), request)
    assert code == 0
    assert out == "1,2\n1,0\n"


def test_partition_singular_block(capsys, write_csv, write_json):
    request = write_json({"n": 2, "known_x_idx": [0], "known_y_idx": [1], "x_known": [1.0], "y_known": [1.0]})
    code, _, err = run_cli(capsys, "partition", write_csv([[1.0, 2.0], [3.0, 0.0]]), request)
    assert code == 1
    assert "D block" in err


def test_sparse_dft(capsys, write_json):
    request = write_json({"n": 4, "sample_idx": [2], "support_idx": [0], "samples": [3.0]})
    code, out, _ = run_cli(capsys, "sparse-dft", request, "--format", "json")
    assert code == 0
    body = json.loads(out)
    np.testing.assert_allclose(body["result"], [[12, 0], [0, 0], [0, 0], [0, 0]], atol=1e-12)
    assert body["meta"]["reduced_shape"] == [1, 1]


def test_sample_recover(capsys, write_json):
    request = write_json({"n": 4, "sample_idx": [2], "band_idx": [0], "samples": [5.0]})
    code, out, _ = run_cli(capsys, "sample-recover", request)
    assert code == 0
    np.testing.assert_allclose(csv_values(out).ravel(), [5, 5, 5, 5], atol=1e-12)


def test_fit_op_and_regress(capsys, write_csv, rng):
    A = rng.standard_normal((2, 3))
    X = rng.standard_normal((3, 6))
    code, out, _ = run_cli(capsys, "fit-op", write_csv(X), write_csv(A @ X))
    assert code == 0
    np.testing.assert_allclose(csv_values(out), A, atol=1e-10)

    w = np.array([1.0, -1.0, 2.0])
    code, out, _ = run_cli(capsys, "regress", write_csv(X), write_csv(w @ X))
    assert code == 0
    np.testing.assert_allclose(csv_values(out).ravel(), w, atol=1e-10)


def test_penrose_check_failure_is_not_an_error(capsys, write_csv):
    A = write_csv([[1.0, 1.0], [0.0, 1.0]])
    code, out, _ = run_cli(capsys, "penrose-check", A, write_csv([[1.0, 0.0], [1.0, 1.0]]), "--format", "json")
    assert code == 0
    assert json.loads(out)["meta"]["passed"] is False

    code, out, _ = run_cli(capsys, "penrose-check", A, write_csv([[1.0, -1.0], [0.0, 1.0]]), "--format", "json")
    assert code == 0
    assert json.loads(out)["meta"]["passed"] is True


def test_parse_errors_exit_2(capsys, tmp_path, write_csv):
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1,2\n3\n")
    code, out, err = run_cli(capsys, "pinv", ragged)
    assert code == 2
    assert out == ""
    assert "line 2" in err

    code, _, _ = run_cli(capsys, "pinv", tmp_path / "missing.csv")
    assert code == 2

    code, _, _ = run_cli(capsys, "classify", write_csv(np.eye(2)))
    assert code == 2


def test_undecodable_input_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_bytes(b"1,2\n\xff\xfe,3\n")
    code, out, err = run_cli(capsys, "pinv", bad)
    assert code == 2
    assert out == ""
    assert "UTF-8" in err


def test_out_file(capsys, write_csv, tmp_path):
    target = tmp_path / "result.csv"
    code, out, _ = run_cli(capsys, "pinv", write_csv(np.eye(2)), "--out", target)
    assert code == 0
    assert out == ""
    np.testing.assert_allclose(csv_values(target.read_text()), np.eye(2))


def test_output_is_deterministic(capsys, write_csv, rng):
    A = write_csv(rng.standard_normal((8, 3)))
    b = write_csv(rng.standard_normal(8))
    _, first, _ = run_cli(capsys, "irls", A, b, "--p", "6", "--format", "json")
    _, second, _ = run_cli(capsys, "irls", A, b, "--p", "6", "--format", "json")
    assert first == second


def test_cli_matches_library_call(capsys, files, write_csv, rng):
    A = rng.standard_normal((9, 3))
    b = rng.standard_normal(9)
    _, out, _ = run_cli(capsys, "irls", write_csv(A), write_csv(b), "--p", "4", "--iters", "12")
    direct = irls_over(A, b, IrlsOptions(p=4, max_iters=12, weight_floor=1e-5))
    assert out == files.format_matrix(direct.x)
