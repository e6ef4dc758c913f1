"""Matrix and report files.

Matrices are stored as ``{"rows": R, "cols": C, "data": [...]}`` with the
data in row-major order. JSON floats are written with ``repr`` and therefore
round-trip exactly; CSV uses 17 significant digits, which is also exact for
IEEE doubles but is documented as the lossy export.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .core import as_matrix


class MatrixFormatError(ValueError):
    """Malformed matrix file; the message carries the offending position."""


def matrix_to_dict(a) -> dict:
    a = as_matrix(a)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]),
            "data": [float(x) for x in a.ravel()]}


def matrix_from_dict(obj, where: str = "<input>") -> np.ndarray:
    if not isinstance(obj, dict):
        raise MatrixFormatError(f"{where}: top level must be an object")
    for key in ("rows", "cols", "data"):
        if key not in obj:
            raise MatrixFormatError(f"{where}: missing field {key!r}")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    for key, v in (("rows", rows), ("cols", cols)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise MatrixFormatError(f"{where}: field {key!r} must be a positive integer, got {v!r}")
    if not isinstance(data, list):
        raise MatrixFormatError(f"{where}: field 'data' must be a list")
    if len(data) != rows * cols:
        raise MatrixFormatError(f"{where}: field 'data' has {len(data)} entries, "
                                f"expected rows*cols = {rows * cols}")
    for k, x in enumerate(data):
        if not isinstance(x, (int, float)) or isinstance(x, bool) or not math.isfinite(x):
            raise MatrixFormatError(f"{where}: field 'data' entry {k} is not a finite number: {x!r}")
    return np.array(data, dtype=float).reshape(rows, cols)


def dumps_matrix(a) -> str:
    return json.dumps(matrix_to_dict(a))


def loads_matrix(text: str, where: str = "<input>") -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{where}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return matrix_from_dict(obj, where)


def matrix_to_csv(a) -> str:
    a = as_matrix(a)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in a:
        w.writerow([f"{x:.17g}" for x in row])
    return buf.getvalue()


def matrix_from_csv(text: str, where: str = "<input>") -> np.ndarray:
    rows = []
    for lineno, rec in enumerate(csv.reader(_io.StringIO(text)), start=1):
        if not rec or all(not f.strip() for f in rec):
            continue
        vals = []
        for col, f in enumerate(rec, start=1):
            try:
                x = float(f)
            except ValueError:
                raise MatrixFormatError(f"{where}: line {lineno} field {col}: "
                                        f"cannot parse {f!r}") from None
            if not math.isfinite(x):
                raise MatrixFormatError(f"{where}: line {lineno} field {col}: non-finite value")
            vals.append(x)
        if rows and len(vals) != len(rows[0]):
            raise MatrixFormatError(f"{where}: line {lineno}: {len(vals)} fields, "
                                    f"expected {len(rows[0])}")
        rows.append(vals)
    if not rows:
        raise MatrixFormatError(f"{where}: no data")
    return np.array(rows, dtype=float)


def read_matrix(path) -> np.ndarray:
    """Read a matrix from ``.json`` or ``.csv`` (decided by extension)."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return matrix_from_csv(text, str(path))
    return loads_matrix(text, str(path))


def write_matrix(path, a, fmt: str = "json"):
    path = Path(path)
    if fmt == "json":
        path.write_text(dumps_matrix(a) + "\n")
    elif fmt == "csv":
        path.write_text(matrix_to_csv(a))
    else:
        raise ValueError(f"unknown format {fmt!r}")


def report_to_json(report, timing: bool = False) -> str:
    """Serialize an :class:`ExperimentReport`; without timing the text is reproducible."""
    return json.dumps(report.as_dict(timing=timing), indent=2, sort_keys=False)


def report_to_csv(report, timing: bool = False) -> str:
    rows = report.as_dict(timing=timing)["rows"]
    keys = []
    for r in rows:
        keys.extend(k for k in r if k not in keys)
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (f"{v:.17g}" if isinstance(v, float) else
                        ";".join(v) if isinstance(v, list) else v)
                    for k, v in r.items()})
    return buf.getvalue()


def write_report(path, report, fmt: str = "json", timing: bool = False):
    text = report_to_json(report, timing) + "\n" if fmt == "json" else report_to_csv(report, timing)
    Path(path).write_text(text)
