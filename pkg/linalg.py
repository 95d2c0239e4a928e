#!/usr/bin/env python3
"""
linalg.py

Dense exact matrices over Q or Q(sqrt 2): products, Bareiss rank and
determinant, exact solves, stochasticity checks and column normalization.

Indices are 0-based in the API; reports render them 1-based.

Matrix text format (see matrix_file_format.md):

    # optional comment lines
    rows cols
    e11 e12 ... e1c
    ...

Usage:
    from linalg import read_matrix, rank
    M = read_matrix("data/M.mat")
    rank(M)    # 4
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from exactnum import QuadExt, as_field, format_entry, parse_entry, sign

Entry = Union[Fraction, QuadExt]


class DimensionError(ValueError):
    pass


class NegativeEntryError(ValueError):
    pass


class InconsistentSystemError(ValueError):
    pass


class MatrixFormatError(ValueError):
    pass


def _promote(values: List[Entry]) -> List[Entry]:
    quad = next((v for v in values if isinstance(v, QuadExt)), None)
    if quad is None:
        return values
    return [v if isinstance(v, QuadExt) else QuadExt(v, 0, quad.d) for v in values]


class ExactMatrix:
    """Immutable row-major matrix; mixed Q / Q(sqrt d) input promotes to QuadExt."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[Any]) -> None:
        values = [as_field(v) for v in entries]
        if rows <= 0 or cols <= 0:
            raise DimensionError(f"matrix dimensions must be positive, got {rows}x{cols}")
        if len(values) != rows * cols:
            raise DimensionError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(values)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(_promote(values)))

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]]) -> ExactMatrix:
        if not rows:
            raise DimensionError("matrix needs at least one row")
        width = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != width:
                raise DimensionError(f"row {i + 1} has {len(r)} entries, expected {width}")
        return cls(len(rows), width, [v for r in rows for v in r])

    @classmethod
    def column_vector(cls, values: Sequence[Any]) -> ExactMatrix:
        return cls(len(values), 1, values)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_quadratic(self) -> bool:
        return isinstance(self.entries[0], QuadExt)

    @property
    def field(self) -> str:
        return f"Q(sqrt{self.entries[0].d})" if self.is_quadratic else "Q"

    def __getitem__(self, idx: Tuple[int, int]) -> Entry:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index ({i}, {j}) out of range for {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Entry, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Tuple[Entry, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[Entry]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(self.cols, self.rows,
                           [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def select_columns(self, idx: Sequence[int]) -> ExactMatrix:
        return ExactMatrix(self.rows, len(idx), [self[i, j] for i in range(self.rows) for j in idx])

    def with_entry(self, i: int, j: int, value: Any) -> ExactMatrix:
        values = list(self.entries)
        values[i * self.cols + j] = value
        return ExactMatrix(self.rows, self.cols, values)

    def _check_same_shape(self, other: ExactMatrix) -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_same_shape(other)
        return ExactMatrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_same_shape(other)
        return ExactMatrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        return matmul(self, other)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols} over {self.field})"


# ────────────────────────── constructors

def identity(n: int) -> ExactMatrix:
    return ExactMatrix(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])


def zeros(rows: int, cols: int) -> ExactMatrix:
    return ExactMatrix(rows, cols, [Fraction(0)] * (rows * cols))


def hstack(*blocks: ExactMatrix) -> ExactMatrix:
    rows = blocks[0].rows
    for b in blocks:
        if b.rows != rows:
            raise DimensionError(f"cannot concatenate {rows}-row and {b.rows}-row matrices")
    return ExactMatrix.from_rows([[v for b in blocks for v in b.row(i)] for i in range(rows)])


# ────────────────────────── arithmetic

def matmul(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    if A.cols != B.rows:
        raise DimensionError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    cols_b = [B.column(j) for j in range(B.cols)]
    out = []
    for i in range(A.rows):
        row = A.row(i)
        for col in cols_b:
            acc: Entry = Fraction(0)
            for a, b in zip(row, col):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
    return ExactMatrix(A.rows, B.cols, out)


def _bareiss(A: ExactMatrix, square: bool) -> Tuple[int, Entry, int]:
    """Fraction-free elimination; returns (rank, last pivot, row-swap parity)."""
    m = A.to_rows()
    prev: Entry = Fraction(1)
    r = 0
    swaps = 0
    for c in range(A.cols):
        p = next((i for i in range(r, A.rows) if sign(m[i][c]) != 0), None)
        if p is None:
            if square:
                return r, Fraction(0), swaps
            continue
        if p != r:
            m[p], m[r] = m[r], m[p]
            swaps += 1
        piv = m[r][c]
        for i in range(r + 1, A.rows):
            for j in range(c + 1, A.cols):
                m[i][j] = (piv * m[i][j] - m[i][c] * m[r][j]) / prev
            m[i][c] = Fraction(0)
        prev = piv
        r += 1
        if r == A.rows:
            break
    return r, prev, swaps


def rank(A: ExactMatrix) -> int:
    return _bareiss(A, square=False)[0]


def det(A: ExactMatrix) -> Entry:
    if A.rows != A.cols:
        raise DimensionError(f"determinant needs a square matrix, got {A.rows}x{A.cols}")
    r, last, swaps = _bareiss(A, square=True)
    if r < A.rows:
        return Fraction(0)
    return -last if swaps % 2 else last


def solve(A: ExactMatrix, b: Sequence[Any]) -> List[Entry]:
    """Unique solution of A x = b by Gauss-Jordan elimination."""
    if len(b) != A.rows:
        raise DimensionError(f"right-hand side has {len(b)} entries, matrix has {A.rows} rows")
    aug = [list(A.row(i)) + [as_field(b[i])] for i in range(A.rows)]
    pivots: List[int] = []
    r = 0
    for c in range(A.cols):
        p = next((i for i in range(r, A.rows) if sign(aug[i][c]) != 0), None)
        if p is None:
            continue
        aug[p], aug[r] = aug[r], aug[p]
        piv = aug[r][c]
        aug[r] = [v / piv for v in aug[r]]
        for i in range(A.rows):
            if i != r and sign(aug[i][c]) != 0:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, A.rows):
        if sign(aug[i][-1]) != 0:
            raise InconsistentSystemError(f"system is inconsistent (row {i + 1} reduces to 0 = {format_entry(aug[i][-1])})")
    if r < A.cols:
        raise DimensionError(f"solution is not unique: rank {r} < {A.cols} unknowns")
    x: List[Entry] = [Fraction(0)] * A.cols
    for i, c in enumerate(pivots):
        x[c] = aug[i][-1]
    return x


# ────────────────────────── stochasticity

@dataclass(frozen=True)
class StochasticCheck:
    stochastic: bool
    column: Optional[int] = None
    row: Optional[int] = None
    defect: Optional[Entry] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.stochastic


def is_stochastic(A: ExactMatrix) -> StochasticCheck:
    for j in range(A.cols):
        col = A.column(j)
        for i, v in enumerate(col):
            if sign(v) < 0:
                return StochasticCheck(False, column=j, row=i, defect=v,
                                       reason=f"negative entry at ({i + 1},{j + 1})")
        total = sum(col, Fraction(0))
        if total != 1:
            return StochasticCheck(False, column=j, defect=total - 1,
                                   reason=f"column {j + 1} sums to {format_entry(total)}")
    return StochasticCheck(True)


def normalize_columns(A: ExactMatrix) -> Tuple[ExactMatrix, Tuple[Entry, ...], Tuple[int, ...]]:
    """Drop zero columns and scale the rest to sum 1.

    Returns (stochastic matrix, column sums, kept column indices); column k of
    the result times scales[k] is column kept[k] of A.
    """
    for i in range(A.rows):
        for j in range(A.cols):
            if sign(A[i, j]) < 0:
                raise NegativeEntryError(f"negative entry {format_entry(A[i, j])} at ({i + 1},{j + 1})")
    kept, scales = [], []
    for j in range(A.cols):
        total = sum(A.column(j), Fraction(0))
        if total != 0:
            kept.append(j)
            scales.append(total)
    if not kept:
        raise ValueError("cannot normalize the zero matrix")
    values = [A[i, j] / s for i in range(A.rows) for j, s in zip(kept, scales)]
    return ExactMatrix(A.rows, len(kept), values), tuple(scales), tuple(kept)


# ────────────────────────── text format

def parse_matrix(text: str) -> ExactMatrix:
    lines = [(n, ln.strip()) for n, ln in enumerate(text.splitlines(), 1)]
    lines = [(n, ln) for n, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MatrixFormatError("empty matrix text")
    n0, header = lines[0]
    try:
        rows, cols = (int(t) for t in header.split())
    except ValueError:
        raise MatrixFormatError(f"line {n0}: expected 'rows cols', got {header!r}") from None
    body = lines[1:]
    if len(body) != rows:
        raise MatrixFormatError(f"expected {rows} rows, found {len(body)}")
    values: List[Entry] = []
    for n, ln in body:
        tokens = ln.split()
        if len(tokens) != cols:
            raise MatrixFormatError(f"line {n}: expected {cols} entries, found {len(tokens)}")
        try:
            values.extend(parse_entry(t) for t in tokens)
        except ValueError as exc:
            raise MatrixFormatError(f"line {n}: {exc}") from None
    return ExactMatrix(rows, cols, values)


def format_matrix(A: ExactMatrix) -> str:
    out = [f"{A.rows} {A.cols}"]
    out += [" ".join(format_entry(v) for v in A.row(i)) for i in range(A.rows)]
    return "\n".join(out) + "\n"


def read_matrix(path: Union[str, Path]) -> ExactMatrix:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))


def write_matrix(A: ExactMatrix, path: Union[str, Path]) -> None:
    Path(path).write_text(format_matrix(A), encoding="utf-8")


def to_float(A: ExactMatrix) -> np.ndarray:
    return np.array([[float(v) for v in A.row(i)] for i in range(A.rows)], dtype=np.float64)
