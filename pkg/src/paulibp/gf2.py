"""Sparse GF(2) matrices, Tanner graphs, and Gaussian elimination.

``BitMatrix`` keeps two always-consistent views of a binary matrix: per-row
sorted column-index lists (for Tanner iteration) and packed dense rows
(byte-granular, for word-parallel XOR in elimination and fast syndrome
products). Elimination visits columns strictly in the order the caller
supplies, which is what makes OSD's reliability ranking and the determinism
guarantees work.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def _pack_vec(v: np.ndarray, cols: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.uint8).reshape(1, cols)
    return np.packbits(v, axis=1)[0]


class BitMatrix:
    """Immutable binary matrix with packed rows and sparse column lists."""

    __slots__ = ("m", "cols", "rows", "packed")

    def __init__(self, dense: np.ndarray):
        dense = np.asarray(dense)
        if dense.ndim != 2:
            raise ValueError("expected a 2-D array")
        dense = (dense != 0).astype(np.uint8)
        self.m, self.cols = dense.shape
        self.rows = tuple(np.flatnonzero(r).astype(np.int64) for r in dense)
        self.packed = np.packbits(dense, axis=1) if self.cols else np.zeros((self.m, 0), np.uint8)

    @classmethod
    def from_rows(cls, row_cols: Iterable[Sequence[int]], cols: int) -> "BitMatrix":
        rows = list(row_cols)
        dense = np.zeros((len(rows), cols), dtype=np.uint8)
        for i, cs in enumerate(rows):
            dense[i, list(cs)] = 1
        return cls(dense)

    def to_dense(self) -> np.ndarray:
        if self.cols == 0:
            return np.zeros((self.m, 0), dtype=np.uint8)
        return np.unpackbits(self.packed, axis=1, count=self.cols)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """(self @ v) mod 2 for a length-`cols` 0/1 vector."""
        v = np.asarray(v, dtype=np.uint8)
        if v.shape != (self.cols,):
            raise ValueError(f"dimension mismatch: expected length {self.cols}, got {v.shape}")
        if self.cols == 0:
            return np.zeros(self.m, dtype=np.uint8)
        pv = _pack_vec(v, self.cols)
        return (np.bitwise_count(self.packed & pv).sum(axis=1) & 1).astype(np.uint8)

    def rank(self) -> int:
        return len(row_reduce(self, range(self.cols))[0])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.m == other.m
            and self.cols == other.cols
            and np.array_equal(self.packed, other.packed)
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.m}x{self.cols})"


@dataclass(frozen=True)
class TannerGraph:
    """Bipartite check/variable adjacency of a BitMatrix.

    Edges are listed row-major (by check, then by ascending variable), and
    that order is the stable edge id.
    """

    check_nbrs: tuple  # check_nbrs[j] = variable indices of check j
    var_nbrs: tuple  # var_nbrs[i] = check indices of variable i
    edge_check: np.ndarray  # edge id -> check index
    edge_var: np.ndarray  # edge id -> variable index

    @property
    def num_edges(self) -> int:
        return len(self.edge_check)


def build_tanner(H: BitMatrix) -> TannerGraph:
    """Adjacency structure of H: edge (j, i) present iff H(j, i) = 1."""
    var_nbrs = [[] for _ in range(H.cols)]
    edge_check, edge_var = [], []
    for j, cols in enumerate(H.rows):
        for i in cols:
            var_nbrs[int(i)].append(j)
            edge_check.append(j)
            edge_var.append(int(i))
    return TannerGraph(
        check_nbrs=H.rows,
        var_nbrs=tuple(np.asarray(v, dtype=np.int64) for v in var_nbrs),
        edge_check=np.asarray(edge_check, dtype=np.int64),
        edge_var=np.asarray(edge_var, dtype=np.int64),
    )


@dataclass(frozen=True)
class EliminationRecord:
    """Everything needed to back-solve a system restricted to pivot columns.

    ``transform`` is the packed row-operation matrix T with T @ H fully
    reduced (identity on the pivot columns, zero rows below the rank).
    """

    transform: np.ndarray  # packed (m, ceil(m/8)) uint8
    pivot_cols: np.ndarray  # int64, length rank
    m: int
    cols: int


def row_reduce(H: BitMatrix, column_order: Iterable[int]) -> tuple[list[int], EliminationRecord]:
    """Gauss-Jordan elimination scanning columns in the caller's order.

    Returns the first ``rank`` linearly independent columns encountered (the
    pivots) plus a record sufficient to solve H restricted to those columns.
    No pivoting heuristics beyond the supplied order — determinism is part of
    the contract.
    """
    m, cols = H.m, H.cols
    R = H.packed.copy()
    T = np.packbits(np.eye(m, dtype=np.uint8), axis=1) if m else np.zeros((0, 0), np.uint8)
    pivot_cols: list[int] = []
    r = 0
    for col in column_order:
        if r >= m:
            break
        col = int(col)
        byte, bit = col >> 3, 7 - (col & 7)
        colbits = (R[:, byte] >> bit) & 1
        hot = np.flatnonzero(colbits[r:])
        if hot.size == 0:
            continue  # dependent on the pivots found so far
        pr = r + int(hot[0])
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
            T[[r, pr]] = T[[pr, r]]
            colbits[[r, pr]] = colbits[[pr, r]]
        clear = colbits.astype(bool)
        clear[r] = False
        if clear.any():
            R[clear] ^= R[r]
            T[clear] ^= T[r]
        pivot_cols.append(col)
        r += 1
    record = EliminationRecord(
        transform=T,
        pivot_cols=np.asarray(pivot_cols, dtype=np.int64),
        m=m,
        cols=cols,
    )
    return pivot_cols, record


def solve_on_pivots(record: EliminationRecord, s: np.ndarray) -> np.ndarray:
    """Solve H . x = s with x supported on the record's pivot columns.

    Valid for any consistent system; raises ValueError when the transformed
    syndrome has support outside the pivot rows (an inconsistent system,
    which is only possible when rank < m).
    """
    s = np.asarray(s, dtype=np.uint8)
    if s.shape != (record.m,):
        raise ValueError(f"dimension mismatch: expected syndrome length {record.m}, got {s.shape}")
    rank = len(record.pivot_cols)
    if record.m:
        ps = _pack_vec(s, record.m)
        t = (np.bitwise_count(record.transform & ps).sum(axis=1) & 1).astype(np.uint8)
    else:
        t = np.zeros(0, dtype=np.uint8)
    if t[rank:].any():
        raise ValueError("inconsistent system: syndrome outside the column space")
    x = np.zeros(record.cols, dtype=np.uint8)
    x[record.pivot_cols] = t[:rank]
    return x


def load_alist(path: str | Path) -> BitMatrix:
    """Read a BitMatrix from the plain-text format written by save_alist.

    First line: "m c". Then one line per row with the 1-based column indices
    of that row's nonzeros (blank line for an empty row).
    """
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    m, c = (int(t) for t in lines[0].split())
    if len(lines) < m + 1:
        raise ValueError(f"{path}: expected {m} rows, found {len(lines) - 1}")
    rows = []
    for line in lines[1 : m + 1]:
        idx = [int(t) - 1 for t in line.split()]
        if any(i < 0 or i >= c for i in idx):
            raise ValueError(f"{path}: column index out of range in row {len(rows) + 1}")
        rows.append(idx)
    return BitMatrix.from_rows(rows, c)


def save_alist(H: BitMatrix, path: str | Path) -> None:
    lines = [f"{H.m} {H.cols}"]
    lines += [" ".join(str(int(i) + 1) for i in cols) for cols in H.rows]
    Path(path).write_text("\n".join(lines) + "\n")
