"""Tableaux of elementary stabilizer operations."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .gf2core import BitMatrix, BitVector
from .pauli import PhasePoint, is_symplectic, symplectic_bits
from .tableau import ChannelTableau, TableauError, identity


class Kind(enum.Enum):
    PREP_CHAOTIC = "CHAOTIC"
    PREP0 = "PREP0"
    PREP1 = "PREP1"
    PREP_PLUS = "PREP+"
    PREP_MINUS = "PREP-"
    DISCARD = "DISCARD"
    IDENTITY = "I"
    DEPHASE_Z = "DEPHASE_Z"
    DEPHASE_X = "DEPHASE_X"
    GATE_Z = "Z"
    GATE_X = "X"
    GATE_Y = "Y"
    GATE_H = "H"
    GATE_S = "S"
    GATE_CNOT = "CNOT"
    GATE_CZ = "CZ"


@dataclass(frozen=True)
class PauliUnitary:
    point: PhasePoint


@dataclass(frozen=True)
class CliffordUnitary:
    """Row ``i`` of ``S`` is the image of basis point ``e_i``; ``c`` its sign."""

    S: BitMatrix
    c: BitVector

    def __post_init__(self):
        if self.S.n_cols != self.S.n_rows or self.c.length != self.S.n_rows:
            raise ValueError("S must be square and c must match its size")


@dataclass(frozen=True)
class MeasureObservable:
    """Measure ``P(point|c)``.

    ``keep=False``: the measured qubits are consumed and a single record
    wire (a dephased qubit) comes out. ``keep=True``: the qubits pass through,
    dephased along the observable, followed by the record wire.
    """

    point: PhasePoint
    c: int = 0
    keep: bool = False


@dataclass(frozen=True)
class Postselect:
    """Trace-decreasing ``rho -> Tr[rho (I + P(point|c)) / 2]``."""

    point: PhasePoint
    c: int = 0


Element = Union[Kind, PauliUnitary, CliffordUnitary, MeasureObservable, Postselect]

# Elementary operations, column bits read left to right. CZ sends X2 to Z1 X2;
# an image of Y2 there would break the symplectic condition.
ELEMENTARY = {
    Kind.PREP_CHAOTIC: (0, 1, []),
    Kind.PREP0: (0, 1, ["|10|0"]),
    Kind.PREP1: (0, 1, ["|10|1"]),
    Kind.PREP_PLUS: (0, 1, ["|01|0"]),
    Kind.PREP_MINUS: (0, 1, ["|01|1"]),
    Kind.DISCARD: (1, 0, []),
    Kind.IDENTITY: (1, 1, ["10|10|0", "01|01|0"]),
    Kind.DEPHASE_Z: (1, 1, ["10|10|0"]),
    Kind.DEPHASE_X: (1, 1, ["01|01|0"]),
    Kind.GATE_Z: (1, 1, ["10|10|0", "01|01|1"]),
    Kind.GATE_X: (1, 1, ["10|10|1", "01|01|0"]),
    Kind.GATE_H: (1, 1, ["10|01|0", "01|10|0"]),
    Kind.GATE_S: (1, 1, ["10|10|0", "01|11|0"]),
    Kind.GATE_CNOT: (
        2,
        2,
        ["1000|1000|0", "0100|0101|0", "0010|1010|0", "0001|0001|0"],
    ),
    Kind.GATE_CZ: (
        2,
        2,
        ["1000|1000|0", "0100|0110|0", "0010|0010|0", "0001|1001|0"],
    ),
}


def arity(kind: Element) -> tuple:
    """``(n_in, n_out)`` of an element."""
    if isinstance(kind, Kind):
        if kind is Kind.GATE_Y:
            return (1, 1)
        n_in, n_out, _ = ELEMENTARY[kind]
        return (n_in, n_out)
    if isinstance(kind, PauliUnitary):
        return (kind.point.n, kind.point.n)
    if isinstance(kind, CliffordUnitary):
        n = kind.S.n_rows // 2
        return (n, n)
    if isinstance(kind, MeasureObservable):
        n = kind.point.n
        return (n, n + 1) if kind.keep else (n, 1)
    if isinstance(kind, Postselect):
        return (kind.point.n, 0)
    raise TypeError(f"unknown element {kind!r}")


def element_tableau(kind: Element) -> ChannelTableau:
    if isinstance(kind, Kind):
        if kind is Kind.GATE_Y:
            return pauli_unitary_tableau(PhasePoint(0b11, 1))
        n_in, n_out, rows = ELEMENTARY[kind]
        return ChannelTableau.from_strs(rows, n_in, n_out)
    if isinstance(kind, PauliUnitary):
        return pauli_unitary_tableau(kind.point)
    if isinstance(kind, CliffordUnitary):
        return clifford_unitary_tableau(kind.S, kind.c)
    if isinstance(kind, MeasureObservable):
        if kind.keep:
            return measure_keep_tableau(kind.point, kind.c)
        return measurement_tableau(kind.point, kind.c)
    if isinstance(kind, Postselect):
        return postselect_tableau(kind.point, kind.c)
    raise TypeError(f"unknown element {kind!r}")


def pauli_unitary_tableau(u: PhasePoint) -> ChannelTableau:
    """``[I | I | J u^T]``: basis point ``e_i`` flips sign iff it anticommutes with ``u``."""
    n = u.n
    base = identity(n)
    rows = []
    for r in base.rows:
        e = r & base.in_mask
        rows.append(r | (symplectic_bits(e, u.bits) << base.width))
    return base.with_rows(rows)


def clifford_unitary_tableau(S: BitMatrix, c: BitVector) -> ChannelTableau:
    """``[I | S | c]``."""
    if not is_symplectic(S):
        raise TableauError("S is not symplectic")
    if c.length != S.n_rows:
        raise ValueError("sign vector length must equal the size of S")
    n = S.n_rows // 2
    w = 4 * n
    rows = [(1 << i) | (S.rows[i] << 2 * n) | (c[i] << w) for i in range(2 * n)]
    return ChannelTableau(n, n, tuple(rows))


def measurement_tableau(u: PhasePoint, c: int = 0) -> ChannelTableau:
    """``[u | 1 0 | c]``: consume ``n`` qubits, emit the outcome as a dephased qubit."""
    n = u.n
    return ChannelTableau(n, 1, (u.bits | (1 << 2 * n) | (c << 2 * n + 2),))


def measure_keep_tableau(u: PhasePoint, c: int = 0) -> ChannelTableau:
    """Non-destructive measurement: ``n`` qubits in, the same qubits plus a record out.

    Generators: ``[v | v 0 | 0]`` for a basis of the commutant of ``u``
    (the qubits are dephased along ``P(u)``), and ``[u | 0 Z | c]``.
    """
    n = u.n
    if u.bits == 0:
        raise ValueError("cannot measure the identity observable")
    commutant = _commutant_basis(u.bits, n)
    w = 2 * (2 * n + 1)
    rows = [v | (v << 2 * n) for v in commutant]
    rows.append(u.bits | (1 << 4 * n) | (c << w))
    return ChannelTableau(n, n + 1, tuple(rows))


def _commutant_basis(u: int, n: int) -> list:
    """Basis of ``{v : [u, v] = 0}`` (dimension ``2n - 1`` for ``u != 0``)."""
    basis = [1 << i for i in range(2 * n)]
    anti = [b for b in basis if symplectic_bits(b, u)]
    pivot = anti[0]
    out = []
    for b in basis:
        if b == pivot:
            continue
        out.append(b ^ pivot if symplectic_bits(b, u) else b)
    return out


def postselect_tableau(u: PhasePoint, c: int = 0) -> ChannelTableau:
    """``[u | . | c]``, not trace preserving."""
    n = u.n
    return ChannelTableau(n, 0, (u.bits | (c << 2 * n),), trace_preserving=False)
