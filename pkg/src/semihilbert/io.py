"""JSON problem files.

A problem is ``{"A": M, "T": M, "S": M}`` where a matrix ``M`` is
``{"rows": n, "cols": n, "data": [[[re, im], ...], ...]}`` in row-major order.
Python's ``repr`` of a float is the shortest round-trip form, so writing and
reading a matrix is exact.
"""

import json

import numpy as np

from .errors import InputFormatError
from .generate import ProblemInstance

FIELDS = ("A", "T", "S")


def matrix_to_json(M):
    M = np.asarray(M, dtype=complex)
    rows, cols = M.shape
    data = [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return {"rows": rows, "cols": cols, "data": data}


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputFormatError(f"{where}: expected a number, got {value!r}")
    return float(value)


def matrix_from_json(obj, name="matrix"):
    if not isinstance(obj, dict):
        raise InputFormatError(f"{name}: expected an object with rows, cols, data")
    for key in ("rows", "cols", "data"):
        if key not in obj:
            raise InputFormatError(f"{name}: missing field {key!r}")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 0 or cols < 0:
        raise InputFormatError(f"{name}: rows and cols must be non-negative integers")
    if not isinstance(data, list) or len(data) != rows:
        got = len(data) if isinstance(data, list) else type(data).__name__
        raise InputFormatError(f"{name}.data: expected {rows} rows, got {got}")
    M = np.empty((rows, cols), dtype=complex)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise InputFormatError(f"{name}.data row {i}: expected {cols} entries, got {got}")
        for j, z in enumerate(row):
            where = f"{name}.data row {i} col {j}"
            if not isinstance(z, list) or len(z) != 2:
                raise InputFormatError(f"{where}: expected [re, im], got {z!r}")
            M[i, j] = complex(_number(z[0], where), _number(z[1], where))
    return M


def problem_to_json(instance):
    doc = {f: matrix_to_json(getattr(instance, f)) for f in FIELDS}
    if instance.seed is not None:
        doc["seed"] = instance.seed
    if instance.meta:
        doc["meta"] = instance.meta
    return doc


def problem_from_json(doc):
    if not isinstance(doc, dict):
        raise InputFormatError("problem: expected a JSON object with fields A, T, S")
    missing = [f for f in FIELDS if f not in doc]
    if missing:
        raise InputFormatError(f"problem: missing field(s) {', '.join(missing)}")
    mats = [matrix_from_json(doc[f], f) for f in FIELDS]
    return ProblemInstance(*mats, seed=doc.get("seed"), meta=doc.get("meta", {}))


def load_problem(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    return problem_from_json(doc)


def save_problem(instance, path):
    with open(path, "w") as fh:
        json.dump(problem_to_json(instance), fh)
        fh.write("\n")
