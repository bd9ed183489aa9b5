"""Bit-packed linear algebra over GF(2).

Rows are stored as Python ints, bit j of a row is column j. Addition is xor,
so row operations cost one machine word operation per word of packed bits.
All operations are pure functions on immutable matrices.
"""
from __future__ import annotations

from typing import Hashable, Iterable, Sequence

KERNEL_POWER_CAP = 16


class BitMatrix:
    """Dense GF(2) matrix. Immutable after construction."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Iterable[int]):
        if rows < 1 or cols < 1:
            raise ValueError("matrix must have at least one row and one column")
        packed = tuple(r & ((1 << cols) - 1) for r in data)
        if len(packed) != rows:
            raise ValueError(f"expected {rows} rows, got {len(packed)}")
        self.rows = rows
        self.cols = cols
        self._data = packed

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, [0] * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        if not rows:
            raise ValueError("matrix must have at least one row and one column")
        cols = len(rows[0])
        data = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            data.append(sum((1 << j) for j, v in enumerate(row) if v & 1))
        return cls(len(rows), cols, data)

    def row(self, i: int) -> int:
        """Packed row i (0-based)."""
        return self._data[i]

    def column(self, j: int) -> int:
        """Column j (0-based) packed over rows, bit i = row i."""
        out = 0
        for i, r in enumerate(self._data):
            if (r >> j) & 1:
                out |= 1 << i
        return out

    def get(self, i: int, j: int) -> int:
        return (self._data[i] >> j) & 1

    def to_rows(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self._data]

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.cols, self.rows, [self.column(j) for j in range(self.cols)])

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "BitMatrix":
        """Submatrix with the given 0-based row and column indices, in order."""
        data = []
        for i in row_idx:
            src = self._data[i]
            data.append(sum((1 << b) for b, j in enumerate(col_idx) if (src >> j) & 1))
        return BitMatrix(len(row_idx), len(col_idx), data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._data) == (other.rows, other.cols, other._data)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def kernel_power(m: int) -> BitMatrix:
    """m-fold Kronecker power of the 2x2 lower-triangular binary kernel.

    Row r of the next power is [r, 0] on top and [r, r] below, so the matrix
    doubles in both dimensions per level. Capped to keep memory bounded.
    """
    if m < 0:
        raise ValueError("level count must be non-negative")
    if m > KERNEL_POWER_CAP:
        raise ValueError(f"level count capped at {KERNEL_POWER_CAP}")
    rows = [1]
    for _ in range(m):
        half = len(rows)
        rows = rows + [r | (r << half) for r in rows]
    return BitMatrix(len(rows), len(rows), rows)


def kernel_entry(row: int, col: int) -> int:
    """Entry (row, col), 0-based, of any kernel power large enough to hold it.

    The Kronecker structure makes the entry 1 exactly when the column's bit
    pattern is a subset of the row's.
    """
    return 1 if (col & ~row) == 0 else 0


def multiply(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Matrix product over GF(2)."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.cols} vs {b.rows}")
    brows = [b.row(i) for i in range(b.rows)]
    out = []
    for i in range(a.rows):
        r = a.row(i)
        acc = 0
        while r:
            low = r & -r
            acc ^= brows[low.bit_length() - 1]
            r ^= low
        out.append(acc)
    return BitMatrix(a.rows, b.cols, out)


def row_vector_times(vec: Sequence[int], b: BitMatrix) -> list[int]:
    """Row vector times matrix over GF(2); vec is a 0/1 sequence."""
    if len(vec) != b.rows:
        raise ValueError("dimension mismatch")
    acc = 0
    for i, v in enumerate(vec):
        if v & 1:
            acc ^= b.row(i)
    return [(acc >> j) & 1 for j in range(b.cols)]


def reduce_echelon(rows: Iterable[int]) -> list[int]:
    """Canonical reduced echelon basis of the row space, sorted by pivot bit.

    Pivot of a row is its lowest set bit; every basis row is the only one with
    its pivot set. The result depends only on the row span, not on row order.
    """
    basis: dict[int, int] = {}
    for r in rows:
        for p, q in basis.items():
            if r & p:
                r ^= q
        if not r:
            continue
        p = r & -r
        for pk in list(basis):
            if basis[pk] & p:
                basis[pk] ^= r
        basis[p] = r
    return [basis[p] for p in sorted(basis)]


def reduce_augmented(rows: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Same elimination as reduce_echelon, carrying a right-hand side through.

    Each row is (coefficient bits, rhs) and both halves are xored together, so
    a resulting unit row pins its unknown to the accumulated rhs.
    """
    basis: dict[int, tuple[int, int]] = {}
    for r, rhs in rows:
        for p, (q, qrhs) in basis.items():
            if r & p:
                r ^= q
                rhs ^= qrhs
        if not r:
            continue
        p = r & -r
        for pk in list(basis):
            qk, qkrhs = basis[pk]
            if qk & p:
                basis[pk] = (qk ^ r, qkrhs ^ rhs)
        basis[p] = (r, rhs)
    return [basis[p] for p in sorted(basis)]


def rank(a: BitMatrix) -> int:
    return len(reduce_echelon(a.row(i) for i in range(a.rows)))


def invert(a: BitMatrix) -> BitMatrix | None:
    """Inverse over GF(2), or None when the matrix is singular."""
    if a.rows != a.cols:
        raise ValueError("only square matrices can be inverted")
    n = a.rows
    # augmented rows [A | I]; Jordan elimination on the low n bits
    aug = [a.row(i) | (1 << (n + i)) for i in range(n)]
    done = 0
    for col in range(n):
        pivot = None
        for i in range(done, n):
            if (aug[i] >> col) & 1:
                pivot = i
                break
        if pivot is None:
            return None
        aug[done], aug[pivot] = aug[pivot], aug[done]
        for i in range(n):
            if i != done and (aug[i] >> col) & 1:
                aug[i] ^= aug[done]
        done += 1
    return BitMatrix(n, n, [r >> n for r in aug])


def solve_partial(equations: BitMatrix, unknown_indices: Sequence[Hashable]) -> set:
    """Unknowns uniquely determined by a consistent xor equation system.

    Column c of `equations` is the coefficient of unknown_indices[c]. An
    unknown is determined exactly when its unit vector lies in the row space,
    which after full reduction shows up as a weight-1 basis row.
    """
    if len(unknown_indices) != equations.cols:
        raise ValueError("one label per column required")
    determined = set()
    for row in reduce_echelon(equations.row(i) for i in range(equations.rows)):
        if row.bit_count() == 1:
            determined.add(unknown_indices[row.bit_length() - 1])
    return determined
