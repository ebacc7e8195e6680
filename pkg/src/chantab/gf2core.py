"""Bit-packed linear algebra over GF(2).

Rows are stored as Python integers: bit ``j`` of a row is column ``j``.
CPython ints are arrays of machine words, so XOR of two rows is a word-wise
loop in C and costs O(n_cols / w).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple


@dataclass(frozen=True)
class BitVector:
    """Fixed-length bit string; ``bits`` packs position ``j`` into bit ``j``."""

    bits: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits {self.bits:#x} do not fit in length {self.length}")

    @classmethod
    def from_str(cls, s: str) -> "BitVector":
        s = s.strip()
        if any(ch not in "01" for ch in s):
            raise ValueError(f"not a bit string: {s!r}")
        return cls(_int_from_str(s), len(s))

    @classmethod
    def from_list(cls, bits: Iterable[int]) -> "BitVector":
        bits = list(bits)
        return cls(sum((b & 1) << j for j, b in enumerate(bits)), len(bits))

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(0, length)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(f"bit index {j} out of range for length {self.length}")
        return (self.bits >> j) & 1

    def __iter__(self):
        return (self[j] for j in range(self.length))

    def __xor__(self, other: "BitVector") -> "BitVector":
        _check_len(self.length, other.length)
        return BitVector(self.bits ^ other.bits, self.length)

    def dot(self, other: "BitVector") -> int:
        _check_len(self.length, other.length)
        return (self.bits & other.bits).bit_count() & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def __str__(self) -> str:
        return _int_to_str(self.bits, self.length)


class BitMatrix:
    """Boolean matrix with bit-packed rows.

    Treated as a value: the public operations return new matrices.
    """

    __slots__ = ("rows", "n_cols")

    def __init__(self, rows: Iterable[int], n_cols: int):
        self.rows: List[int] = list(rows)
        self.n_cols = n_cols
        limit = 1 << n_cols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row {r:#x} does not fit in {n_cols} columns")

    @classmethod
    def from_strs(cls, rows: Sequence[str], n_cols: Optional[int] = None) -> "BitMatrix":
        """Build from strings such as ``["110", "011"]`` (character j is column j)."""
        rows = [r.strip() for r in rows]
        if n_cols is None:
            if not rows:
                raise ValueError("n_cols required for an empty matrix")
            n_cols = len(rows[0])
        for r in rows:
            if len(r) != n_cols:
                raise ValueError(f"row {r!r} has length {len(r)}, expected {n_cols}")
        return cls([_int_from_str(r) for r in rows], n_cols)

    @classmethod
    def from_vectors(cls, vectors: Sequence[BitVector], n_cols: Optional[int] = None) -> "BitMatrix":
        if n_cols is None:
            n_cols = vectors[0].length if vectors else 0
        for v in vectors:
            _check_len(v.length, n_cols)
        return cls([v.bits for v in vectors], n_cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "BitMatrix":
        return cls([0] * n_rows, n_cols)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.rows), self.n_cols)

    def row(self, i: int) -> BitVector:
        self._check_row(i)
        return BitVector(self.rows[i], self.n_cols)

    def get(self, i: int, j: int) -> int:
        self._check_row(i)
        if not 0 <= j < self.n_cols:
            raise IndexError(f"column {j} out of range")
        return (self.rows[i] >> j) & 1

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.n_cols)

    def to_strs(self) -> List[str]:
        return [_int_to_str(r, self.n_cols) for r in self.rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.n_cols == other.n_cols and self.rows == other.rows

    def __hash__(self):
        return hash((tuple(self.rows), self.n_cols))

    def __repr__(self) -> str:
        return f"BitMatrix([{'; '.join(self.to_strs())}], n_cols={self.n_cols})"

    def _check_row(self, i: int) -> None:
        if not 0 <= i < len(self.rows):
            raise IndexError(f"row {i} out of range for {len(self.rows)} rows")

    def transpose(self) -> "BitMatrix":
        cols = [0] * self.n_cols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMatrix(cols, len(self.rows))

    def vecmul(self, alpha: BitVector) -> BitVector:
        """Row combination ``alpha . m``."""
        _check_len(alpha.length, self.n_rows)
        return BitVector(combine_rows(self.rows, alpha.bits), self.n_cols)

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        _check_len(self.n_cols, other.n_rows)
        return BitMatrix([combine_rows(other.rows, r) for r in self.rows], other.n_cols)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        _check_len(self.n_rows, other.n_rows)
        return BitMatrix(
            [a | (b << self.n_cols) for a, b in zip(self.rows, other.rows)],
            self.n_cols + other.n_cols,
        )

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        _check_len(self.n_cols, other.n_cols)
        return BitMatrix(self.rows + other.rows, self.n_cols)

    def select_columns(self, cols: Sequence[int]) -> "BitMatrix":
        return BitMatrix([gather_bits(r, cols) for r in self.rows], len(cols))

    def rank(self) -> int:
        return rank_rows(self.rows, range(self.n_cols))


def _check_len(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"length mismatch: {a} != {b}")


def _int_from_str(s: str) -> int:
    return int(s[::-1], 2) if s else 0


def _int_to_str(bits: int, length: int) -> str:
    return format(bits, f"0{length}b")[::-1] if length else ""


def combine_rows(rows: Sequence[int], alpha: int) -> int:
    """XOR of the rows selected by the bits of ``alpha``."""
    acc = 0
    i = 0
    while alpha:
        if alpha & 1:
            acc ^= rows[i]
        alpha >>= 1
        i += 1
    return acc


def gather_bits(row: int, cols: Sequence[int]) -> int:
    out = 0
    for k, c in enumerate(cols):
        out |= ((row >> c) & 1) << k
    return out


def xor_rows(a: int, b: int) -> int:
    return a ^ b


def rref_inplace(
    rows: List[int],
    cols: Iterable[int],
    add: Callable[[int, int], int] = xor_rows,
) -> List[Tuple[int, int]]:
    """Gauss-Jordan elimination restricted to ``cols``, in place.

    ``add(dst, src)`` returns the new value of a destination row; the default
    is plain XOR, callers override it to carry extra state (tableau signs).
    Pivot rows end up first, ordered like ``cols``.
    """
    pivots = []
    r = 0
    n = len(rows)
    for c in cols:
        if r == n:
            break
        bit = 1 << c
        p = r
        while p < n and not rows[p] & bit:
            p += 1
        if p == n:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
        src = rows[r]
        for i in range(n):
            if i != r and rows[i] & bit:
                rows[i] = add(rows[i], src)
        pivots.append((r, c))
        r += 1
    return pivots


def rank_rows(rows: Sequence[int], cols: Iterable[int]) -> int:
    return len(rref_inplace(list(rows), cols))


def row_xor(m: BitMatrix, dst: int, src: int) -> BitMatrix:
    """Replace row ``dst`` by ``dst XOR src``."""
    m._check_row(dst)
    m._check_row(src)
    if dst == src:
        raise ValueError("dst and src must differ")
    out = m.copy()
    out.rows[dst] ^= out.rows[src]
    return out


def rref(m: BitMatrix, cols: Optional[Sequence[int]] = None) -> Tuple[BitMatrix, List[Tuple[int, int]], int]:
    """Reduced row echelon form over the column window ``cols`` (default: all).

    Returns ``(matrix, pivots, rank)``; pivot rows come first in the order of
    ``cols``, followed by the rows that vanish on the window.
    """
    if cols is None:
        cols = range(m.n_cols)
    for c in cols:
        if not 0 <= c < m.n_cols:
            raise IndexError(f"column {c} out of range")
    rows = list(m.rows)
    pivots = rref_inplace(rows, cols)
    return BitMatrix(rows, m.n_cols), pivots, len(pivots)


def left_kernel_rows(rows: Sequence[int], n_cols: int) -> List[int]:
    """Basis of ``{alpha : alpha . rows = 0}`` as packed coefficient vectors."""
    tagged = [r | (1 << (n_cols + i)) for i, r in enumerate(rows)]
    pivots = rref_inplace(tagged, range(n_cols))
    return [t >> n_cols for t in tagged[len(pivots):]]


def left_kernel(m: BitMatrix) -> BitMatrix:
    """Rows of the result span the left null space of ``m``."""
    return BitMatrix(left_kernel_rows(m.rows, m.n_cols), m.n_rows)


def solve_rows(rows: Sequence[int], n_cols: int, v: int) -> Optional[int]:
    """Coefficient vector ``alpha`` with ``alpha . rows = v``, or None."""
    tagged = [r | (1 << (n_cols + i)) for i, r in enumerate(rows)]
    pivots = rref_inplace(tagged, range(n_cols))
    mask = (1 << n_cols) - 1
    for r, c in pivots:
        if (v >> c) & 1:
            v ^= tagged[r]
    if v & mask:
        return None
    return v >> n_cols


def solve_membership(m: BitMatrix, v: BitVector) -> Optional[BitVector]:
    """Some ``alpha`` with ``alpha . m = v``; None when ``v`` is outside the row space."""
    _check_len(v.length, m.n_cols)
    alpha = solve_rows(m.rows, m.n_cols, v.bits)
    if alpha is None:
        return None
    return BitVector(alpha, m.n_rows)
