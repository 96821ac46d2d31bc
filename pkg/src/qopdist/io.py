"""Reading and writing operations in the ``qop-v1`` JSON format.

A file looks like::

    {
      "version": "qop-v1",
      "input_dim": 2,
      "output_dim": 2,
      "kraus": [ [[[1, 0], [0, 0]], [[0, 0], [1, 0]]] ]
    }

``kraus`` is a list of matrices; each matrix is a row-major list of rows and
each entry a ``[re, im]`` pair.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import QopdistError
from .operations import QuantumOperation

VERSION = "qop-v1"


class OperationFileError(QopdistError, ValueError):
    """A ``qop-v1`` document is malformed; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _dim(doc: dict, key: str) -> int:
    val = doc.get(key)
    if isinstance(val, bool) or not isinstance(val, int) or val < 1:
        raise OperationFileError(key, f"expected a positive integer, got {val!r}")
    return val


def operation_from_dict(doc) -> QuantumOperation:
    if not isinstance(doc, dict):
        raise OperationFileError("<root>", "expected a JSON object")
    if doc.get("version") != VERSION:
        raise OperationFileError("version", f"expected {VERSION!r}, got {doc.get('version')!r}")
    n = _dim(doc, "input_dim")
    m = _dim(doc, "output_dim")
    kraus = doc.get("kraus")
    if not isinstance(kraus, list) or not kraus:
        raise OperationFileError("kraus", "expected a non-empty list of matrices")
    mats = []
    for i, mat in enumerate(kraus):
        where = f"kraus[{i}]"
        if not isinstance(mat, list) or len(mat) != m:
            raise OperationFileError(where, f"expected {m} rows")
        arr = np.empty((m, n), dtype=np.complex128)
        for r, row in enumerate(mat):
            if not isinstance(row, list) or len(row) != n:
                raise OperationFileError(f"{where}[{r}]", f"expected {n} entries")
            for c, entry in enumerate(row):
                ok = (isinstance(entry, list) and len(entry) == 2
                      and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry))
                if not ok:
                    raise OperationFileError(f"{where}[{r}][{c}]", f"expected [re, im], got {entry!r}")
                arr[r, c] = complex(entry[0], entry[1])
        if not np.all(np.isfinite(arr)):
            raise OperationFileError(where, "non-finite entry")
        mats.append(arr)
    return QuantumOperation(mats)


def operation_to_dict(op: QuantumOperation) -> dict:
    return {
        "version": VERSION,
        "input_dim": op.input_dim,
        "output_dim": op.output_dim,
        "kraus": [[[[float(z.real), float(z.imag)] for z in row] for row in a] for a in op.kraus],
    }


def load_operation(path) -> QuantumOperation:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OperationFileError("<json>", str(exc)) from exc
    return operation_from_dict(doc)


def dumps_operation(op: QuantumOperation) -> str:
    """Serialize with one matrix row per line; floats use the shortest round-trip repr."""
    doc = operation_to_dict(op)
    mats = ",\n".join(
        "    [\n" + ",\n".join("      " + json.dumps(row) for row in mat) + "\n    ]"
        for mat in doc["kraus"])
    return (f'{{\n  "version": {json.dumps(doc["version"])},\n'
            f'  "input_dim": {doc["input_dim"]},\n  "output_dim": {doc["output_dim"]},\n'
            f'  "kraus": [\n{mats}\n  ]\n}}\n')


def save_operation(op: QuantumOperation, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps_operation(op))
