import json
import subprocess
import sys

import numpy as np
import pytest

from schurmult.cli import run
from schurmult.io import (MatrixFormatError, dumps_matrix, loads_matrix, matrix_from_csv,
                          matrix_to_csv, read_matrix, write_matrix)


def test_json_roundtrip_bit_exact(tmp_path):
    a = np.random.default_rng(0).standard_normal((5, 7))
    path = tmp_path / "a.json"
    write_matrix(path, a)
    b = read_matrix(path)
    assert b.tobytes() == a.tobytes()


def test_csv_roundtrip():
    a = np.random.default_rng(1).standard_normal((3, 4)) * 1e-3
    np.testing.assert_allclose(matrix_from_csv(matrix_to_csv(a)), a, rtol=0, atol=1e-15)


def test_length_mismatch():
    with pytest.raises(MatrixFormatError, match="rows\\*cols"):
        loads_matrix('{"rows": 2, "cols": 2, "data": [1, 2, 3]}')


def test_parse_error_position():
    with pytest.raises(MatrixFormatError, match="line 2 column"):
        loads_matrix('{"rows": 1,\n "cols": 1 "data": [1]}')
    with pytest.raises(MatrixFormatError, match="line 2 field 2"):
        matrix_from_csv("1,2\n3,x\n")


def test_dumps_shape():
    obj = json.loads(dumps_matrix([[1.0, 2.0]]))
    assert obj == {"rows": 1, "cols": 2, "data": [1.0, 2.0]}


def test_cli_opnorm(tmp_path, capsys):
    path = tmp_path / "a.json"
    write_matrix(path, [[1.0, 2.0], [0.0, 1.0]])
    assert run(["opnorm", str(path), "--p", "1", "--q", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["lower"] == pytest.approx(5 ** 0.5)


def test_cli_discretize_csv(tmp_path):
    out = tmp_path / "m.csv"
    run(["discretize", "--kernel", "signstep", "--pa", "uniform:-1:1:2", "--format", "csv",
         "--out", str(out)])
    np.testing.assert_allclose(read_matrix(out), [[0, 0.5], [0.5, 1]])


def test_cli_grid_kernel(tmp_path, capsys):
    g = tmp_path / "g.json"
    write_matrix(g, [[1.0, 2.0], [3.0, 4.0]])
    run(["discretize", "--kernel", f"grid:{g}", "--pa", "uniform:-1:1:2"])
    m = loads_matrix(capsys.readouterr().out)
    np.testing.assert_allclose(m, [[1, 2], [3, 4]])


def test_cli_schur_commands(tmp_path, capsys):
    path = tmp_path / "m.json"
    write_matrix(path, np.eye(2))
    for cmd in ("schurnorm", "factorize", "dominated", "duality"):
        assert run([cmd, str(path), "--restarts", "4"]) == 0
        json.loads(capsys.readouterr().out)


def test_cli_error_exit(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rows": 2, "cols": 3, "data": [1]}')
    proc = subprocess.run([sys.executable, "-m", "schurmult", "opnorm", str(bad)],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert "rows*cols" in proc.stderr


def test_cli_regime_error():
    with pytest.raises(SystemExit) as exc:
        from schurmult.cli import main
        main(["triangle", "--sizes", "4", "--p", "1", "--q", "1"])
    assert exc.value.code == 2
