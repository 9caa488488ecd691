"""Reading and writing complex matrices as JSON files.

The on-disk schema keeps real and imaginary parts as separate nested
arrays, so files stay human-writable and there is no complex-literal
ambiguity:

    {"n": 2, "re": [[0.5, 0.25], [0.25, 0.5]], "im": [[0, 0], [0, 0]]}

Floats are serialized through repr, which round-trips every finite double
exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .states import ComplexMatrix, as_complex_matrix


@dataclass(frozen=True)
class MatrixFile:
    n: int
    re: tuple[tuple[float, ...], ...]
    im: tuple[tuple[float, ...], ...]

    def to_matrix(self) -> ComplexMatrix:
        # assembled componentwise: re + 1j*im would turn -0.0 into +0.0
        out = np.empty((self.n, self.n), dtype=np.complex128)
        out.real = np.asarray(self.re, dtype=np.float64)
        out.imag = np.asarray(self.im, dtype=np.float64)
        return out


def _check_grid(name: str, grid, n: int) -> tuple[tuple[float, ...], ...]:
    if not isinstance(grid, list) or len(grid) != n:
        raise ParseError(f"field '{name}' must be a list of {n} rows")
    rows = []
    for i, row in enumerate(grid):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(
                f"field '{name}', row {i}: expected {n} entries, "
                f"got {len(row) if isinstance(row, list) else type(row).__name__}"
            )
        for j, entry in enumerate(row):
            if isinstance(entry, bool) or not isinstance(entry, (int, float)):
                raise ParseError(
                    f"field '{name}', row {i}, column {j}: not a number: {entry!r}"
                )
            if not math.isfinite(entry):
                raise ParseError(
                    f"field '{name}', row {i}, column {j}: non-finite value"
                )
        rows.append(tuple(float(x) for x in row))
    return tuple(rows)


def parse_matrix_file(text: str) -> MatrixFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object with keys n, re, im")
    missing = [key for key in ("n", "re", "im") if key not in doc]
    if missing:
        raise ParseError(f"missing required field(s): {', '.join(missing)}")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError(f"field 'n' must be a positive integer, got {n!r}")
    return MatrixFile(
        n=n, re=_check_grid("re", doc["re"], n), im=_check_grid("im", doc["im"], n)
    )


def load_matrix(path: str) -> ComplexMatrix:
    """Read a matrix file; every parse problem raises ParseError."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_matrix_file(text).to_matrix()


def save_matrix(path: str, matrix) -> None:
    """Write a matrix file that load_matrix reads back bit-exactly."""
    m = as_complex_matrix(matrix)
    doc = {
        "n": m.shape[0],
        "re": [[float(x) for x in row] for row in m.real],
        "im": [[float(x) for x in row] for row in m.imag],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle)
        handle.write("\n")
