"""Signed Pauli observables as bit strings ``(u|c)``.

A phase point ``u`` of an n-qubit system is a 2n-bit string interleaved as
``(z1, x1, ..., zn, xn)``; packed into an int, qubit ``q`` owns bits ``2q``
(z) and ``2q + 1`` (x). ``P(u) = i^(-<z,x>) Z^z1 X^x1 ... Z^zn X^xn`` is
Hermitian and ``P(u|c) = (-1)^c P(u)``.

The integer helpers (``zx``, ``beta_bits``, ...) work on any packed region
that starts at an even bit offset, which is how tableau rows use them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

from .gf2core import BitMatrix, BitVector

Phase4 = int  # power of i, always reduced mod 4

_CHAR_TO_BITS = {"_": 0, "I": 0, "Z": 1, "X": 2, "Y": 3}
_BITS_TO_CHAR = "_ZXY"


@lru_cache(maxsize=None)
def even_mask(n_bits: int) -> int:
    """Mask selecting the z positions (even bits) of an ``n_bits``-wide string."""
    return int("01" * ((n_bits + 1) // 2), 2)


def _even(u: int) -> int:
    return even_mask(u.bit_length() + 1)


def zx(u: int) -> int:
    """``<z, x>`` as an integer (number of Y factors)."""
    return (u & (u >> 1) & _even(u)).bit_count()


def beta_bits(u: int, v: int) -> Phase4:
    """The cocycle: ``P(u) P(v) = i^beta P(u ^ v)``."""
    ev = _even(u | v)
    z_v = v & ev
    x_u = (u >> 1) & ev
    return (zx(u ^ v) - zx(u) - zx(v) - 2 * (z_v & x_u).bit_count()) & 3


def symplectic_bits(u: int, v: int) -> int:
    ev = _even(u | v)
    return ((u & (v >> 1) & ev).bit_count() + (v & (u >> 1) & ev).bit_count()) & 1


def inner4(z: BitVector, x: BitVector) -> Phase4:
    if z.length != x.length:
        raise ValueError(f"length mismatch: {z.length} != {x.length}")
    return (z.bits & x.bits).bit_count() & 3


@dataclass(frozen=True)
class PhasePoint:
    """Sign-free Pauli label on ``n`` qubits."""

    bits: int
    n: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> (2 * self.n):
            raise ValueError(f"phase point {self.bits:#x} does not fit {self.n} qubits")

    @classmethod
    def from_vector(cls, v: BitVector) -> "PhasePoint":
        if v.length % 2:
            raise ValueError("phase point needs an even number of bits")
        return cls(v.bits, v.length // 2)

    @classmethod
    def from_str(cls, s: str) -> "PhasePoint":
        p = PauliObservable.from_str(s)
        if p.c:
            raise ValueError("phase point cannot carry a sign")
        return p.point

    @property
    def z(self) -> BitVector:
        return BitVector(sum(((self.bits >> (2 * q)) & 1) << q for q in range(self.n)), self.n)

    @property
    def x(self) -> BitVector:
        return BitVector(sum(((self.bits >> (2 * q + 1)) & 1) << q for q in range(self.n)), self.n)

    def as_vector(self) -> BitVector:
        return BitVector(self.bits, 2 * self.n)

    def qubit(self, q: int) -> int:
        """Two-bit label of qubit ``q``: 0=I, 1=Z, 2=X, 3=Y."""
        return (self.bits >> (2 * q)) & 3

    def __xor__(self, other: "PhasePoint") -> "PhasePoint":
        _same_n(self, other)
        return PhasePoint(self.bits ^ other.bits, self.n)

    def __str__(self) -> str:
        return "".join(_BITS_TO_CHAR[self.qubit(q)] for q in range(self.n))


@dataclass(frozen=True)
class PauliObservable:
    point: PhasePoint
    c: int = 0

    def __post_init__(self):
        if self.c not in (0, 1):
            raise ValueError("sign bit must be 0 or 1")

    @property
    def n(self) -> int:
        return self.point.n

    @property
    def u(self) -> int:
        return self.point.bits

    @classmethod
    def from_bits(cls, u: int, n: int, c: int = 0) -> "PauliObservable":
        return cls(PhasePoint(u, n), c)

    @classmethod
    def identity(cls, n: int) -> "PauliObservable":
        return cls(PhasePoint(0, n), 0)

    @classmethod
    def from_str(cls, s: str) -> "PauliObservable":
        """Parse ``[+|-]`` followed by one of ``_XYZ`` per qubit."""
        s = s.strip()
        c = 0
        if s[:1] in ("+", "-", "−"):
            c = 0 if s[0] == "+" else 1
            s = s[1:]
        u = 0
        for q, ch in enumerate(s):
            if ch not in _CHAR_TO_BITS:
                raise ValueError(f"bad Pauli character {ch!r}")
            u |= _CHAR_TO_BITS[ch] << (2 * q)
        return cls(PhasePoint(u, len(s)), c)

    def __str__(self) -> str:
        return ("-" if self.c else "+") + str(self.point)


def _same_n(p, q) -> None:
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} != {q.n}")


def beta(u: PhasePoint, v: PhasePoint) -> Phase4:
    _same_n(u, v)
    return beta_bits(u.bits, v.bits)


def symplectic_form(u: PhasePoint, v: PhasePoint) -> int:
    _same_n(u, v)
    return symplectic_bits(u.bits, v.bits)


def mul(p: PauliObservable, q: PauliObservable) -> Tuple[PauliObservable, Phase4]:
    """``P(u|c) P(u'|c') = i^beta P(u^u'|c^c')``; returns the observable and beta."""
    _same_n(p, q)
    b = beta_bits(p.u, q.u)
    return PauliObservable(p.point ^ q.point, p.c ^ q.c), b


def commuting_mul(p: PauliObservable, q: PauliObservable) -> PauliObservable:
    prod, b = mul(p, q)
    if b & 1:
        raise ValueError(f"{p} and {q} anticommute")
    return PauliObservable(prod.point, prod.c ^ (b >> 1))


def transpose(p: PauliObservable) -> PauliObservable:
    return PauliObservable(p.point, p.c ^ (zx(p.u) & 1))


def symplectic_gram(n: int) -> BitMatrix:
    """``J``: swaps z and x inside every qubit block."""
    return BitMatrix([1 << (i ^ 1) for i in range(2 * n)], 2 * n)


def is_symplectic(s: BitMatrix) -> bool:
    """``S J S^T == J`` for a square 2n x 2n matrix (row i is the image of e_i)."""
    if s.n_rows != s.n_cols or s.n_cols % 2:
        return False
    rows = s.rows
    for i in range(len(rows)):
        for j in range(len(rows)):
            if symplectic_bits(rows[i], rows[j]) != (1 if j == i ^ 1 else 0):
                return False
    return True


def symplectic_inverse(s: BitMatrix) -> BitMatrix:
    """``J S^T J``, the inverse of a symplectic matrix in the row convention."""
    j = symplectic_gram(s.n_cols // 2)
    return j.matmul(s.transpose()).matmul(j)
