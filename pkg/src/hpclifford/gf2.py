"""Dense linear algebra over GF(2) with rows packed into Python ints.

Bit ``j`` of a row (or of a vector) is column ``j``.  Elimination always picks
the lowest-index available pivot so preimages and kernel bases are
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def _lowbit_index(v: int) -> int:
    return (v & -v).bit_length() - 1


def dot(u: int, v: int) -> int:
    return (u & v).bit_count() & 1


@dataclass(frozen=True)
class Gf2Matrix:
    """``rows x cols`` matrix over GF(2); ``bits[i]`` is row ``i``."""

    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != self.rows:
            raise ValueError("row count does not match bits")
        limit = 1 << self.cols
        for r in self.bits:
            if r < 0 or r >= limit:
                raise ValueError("row wider than cols")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, size: int) -> "Gf2Matrix":
        return cls(size, size, tuple(1 << i for i in range(size)))

    @classmethod
    def from_array(cls, a) -> "Gf2Matrix":
        a = np.asarray(a, dtype=np.int64) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        rows = tuple(sum(int(b) << j for j, b in enumerate(r)) for r in a)
        return cls(a.shape[0], a.shape[1], rows)

    @classmethod
    def from_columns(cls, columns: Sequence[int], rows: int) -> "Gf2Matrix":
        """Build from column vectors given as ints of ``rows`` bits."""
        out = [0] * rows
        for j, c in enumerate(columns):
            if c >> rows:
                raise ValueError("column longer than row count")
            while c:
                i = _lowbit_index(c)
                out[i] |= 1 << j
                c &= c - 1
        return cls(rows, len(columns), tuple(out))

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, r in enumerate(self.bits):
            for j in range(self.cols):
                out[i, j] = (r >> j) & 1
        return out

    def column(self, j: int) -> int:
        return sum(((r >> j) & 1) << i for i, r in enumerate(self.bits))

    def columns(self) -> list[int]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix(self.cols, self.rows, tuple(self.columns()))

    def matvec(self, v: int) -> int:
        if v >> self.cols:
            raise ValueError(f"vector longer than {self.cols} bits")
        out = 0
        for i, r in enumerate(self.bits):
            out |= dot(r, v) << i
        return out

    def matmul(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions differ")
        rows = []
        for r in self.bits:
            acc = 0
            while r:
                k = _lowbit_index(r)
                acc ^= other.bits[k]
                r &= r - 1
            rows.append(acc)
        return Gf2Matrix(self.rows, other.cols, tuple(rows))

    def take_rows(self, idx: Iterable[int]) -> "Gf2Matrix":
        picked = tuple(self.bits[i] for i in idx)
        return Gf2Matrix(len(picked), self.cols, picked)

    def to_hex_rows(self) -> list[str]:
        width = max(1, (self.cols + 3) // 4)
        return [format(r, f"0{width}x") for r in self.bits]

    @classmethod
    def from_hex_rows(cls, rows: Sequence[str], cols: int) -> "Gf2Matrix":
        return cls(len(rows), cols, tuple(int(r, 16) for r in rows))

    def __matmul__(self, other):
        if isinstance(other, Gf2Matrix):
            return self.matmul(other)
        return self.matvec(other)


@dataclass(frozen=True)
class Gf2Solver:
    """Row-reduction record of a matrix, reusable for many right-hand sides.

    ``transform`` (as rows) maps the original matrix to reduced row echelon
    form: ``transform @ m == reduced``.
    """

    matrix: Gf2Matrix
    reduced: tuple[int, ...]
    transform: tuple[int, ...]
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, b: int) -> int | None:
        """Particular solution of ``m v = b`` with free variables zero, or None."""
        m = self.matrix
        if b >> m.rows:
            raise ValueError(f"right-hand side longer than {m.rows} bits")
        bp = 0
        for i, t in enumerate(self.transform):
            bp |= dot(t, b) << i
        if bp >> self.rank:
            return None
        v = 0
        for i, c in enumerate(self.pivots):
            if (bp >> i) & 1:
                v |= 1 << c
        return v

    def kernel_basis(self) -> list[int]:
        cols = self.matrix.cols
        pivot_set = set(self.pivots)
        basis = []
        for f in range(cols):
            if f in pivot_set:
                continue
            v = 1 << f
            for i, c in enumerate(self.pivots):
                if (self.reduced[i] >> f) & 1:
                    v |= 1 << c
            basis.append(v)
        return basis


def row_reduce(m: Gf2Matrix) -> Gf2Solver:
    rows = list(m.bits)
    transform = [1 << i for i in range(m.rows)]
    pivots = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        bit = 1 << c
        p = next((i for i in range(r, m.rows) if rows[i] & bit), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        transform[r], transform[p] = transform[p], transform[r]
        for i in range(m.rows):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
                transform[i] ^= transform[r]
        pivots.append(c)
        r += 1
    return Gf2Solver(m, tuple(rows), tuple(transform), tuple(pivots))


def rank(m: Gf2Matrix) -> int:
    return rank_of_rows(m.bits)


def rank_of_rows(rows: Iterable[int]) -> int:
    """Rank of a set of bit vectors (lowest-set-bit basis insertion)."""
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            low = _lowbit_index(v)
            if low not in basis:
                basis[low] = v
                break
            v ^= basis[low]
    return len(basis)


def kernel_basis(m: Gf2Matrix) -> list[int]:
    return row_reduce(m).kernel_basis()


def solve(m: Gf2Matrix, b: int) -> int | None:
    return row_reduce(m).solve(b)


def image_contains(m: Gf2Matrix, b: int) -> bool:
    return solve(m, b) is not None


class RowSpan:
    """Incremental basis of a span of bit vectors that tracks combinations.

    ``decompose(v)`` returns a bitmask ``c`` over the inserted vectors with
    ``xor(vectors[i] for i in c) == v``, or None if ``v`` is outside the span.
    """

    def __init__(self, vectors: Iterable[int] = ()):
        self._basis: dict[int, tuple[int, int]] = {}
        self.count = 0
        for v in vectors:
            self.add(v)

    def add(self, v: int) -> bool:
        tag = 1 << self.count
        self.count += 1
        while v:
            low = _lowbit_index(v)
            if low not in self._basis:
                self._basis[low] = (v, tag)
                return True
            bv, bt = self._basis[low]
            v ^= bv
            tag ^= bt
        return False

    @property
    def rank(self) -> int:
        return len(self._basis)

    def decompose(self, v: int) -> int | None:
        tag = 0
        while v:
            low = _lowbit_index(v)
            if low not in self._basis:
                return None
            bv, bt = self._basis[low]
            v ^= bv
            tag ^= bt
        return tag

    def __contains__(self, v: int) -> bool:
        return self.decompose(v) is not None


def span_elements(basis: Sequence[int], limit: int | None = None) -> list[int]:
    """All ``2**len(basis)`` combinations, in Gray-code order starting from 0."""
    k = len(basis)
    if limit is not None and (1 << k) > limit:
        raise ValueError(f"span has 2**{k} elements, above limit {limit}")
    out = [0]
    cur = 0
    for i in range(1, 1 << k):
        cur ^= basis[_lowbit_index(i)]
        out.append(cur)
    return out
