"""Column-packed state tableaux for fast local Clifford updates.

A state tableau with ``k`` rows on ``n`` qubits is stored by column: ``z[q]``
and ``x[q]`` are ints whose bit ``i`` is the entry of row ``i``, and
``sign`` holds the sign column. Conjugating by a Clifford gate on ``m``
qubits touches only ``2m`` columns plus the sign, so one gate costs
``O(k / w)`` word operations (``w`` the machine word size) instead of a full
``O(k n)`` composition.

The gate acts on a local pattern ``p`` as ``p -> L p`` with sign flip
``f(p)``. ``L`` is linear, so new columns are XORs of old ones. ``f`` is not
linear, so it is kept as a truth table over the ``4^m`` local patterns; the
sign column is XORed with the indicator of every pattern where ``f = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .gf2core import solve_rows
from .tableau import ChannelTableau, TableauError, group_element


@dataclass(frozen=True)
class LocalGate:
    """A compiled ``m``-qubit Clifford unitary.

    ``images[i]`` is ``L e_i`` over the ``2m`` local bits and ``flips`` lists
    the local patterns whose sign flips under conjugation.
    """

    m: int
    images: Tuple[int, ...]
    flips: Tuple[int, ...]

    @classmethod
    def from_tableau(cls, t: ChannelTableau) -> "LocalGate":
        if t.n_in != t.n_out:
            raise TableauError("local gates must be unitary (same input and output count)")
        m = t.n_in
        w = 2 * m
        a_rows = [t.in_part(r) for r in t.rows]
        alphas = []
        for p in range(1 << w):
            alpha = solve_rows(a_rows, w, p)
            if alpha is None:
                raise TableauError("input block has deficient rank: not a unitary")
            alphas.append(alpha)
        images = []
        for i in range(w):
            images.append(t.out_part(group_element(t, alphas[1 << i])))
        flips = []
        seen = set()
        for p in range(1 << w):
            g = group_element(t, alphas[p])
            out = t.out_part(g)
            if out in seen:
                raise TableauError("output block is singular: not a unitary")
            seen.add(out)
            lin = 0
            for i in range(w):
                if (p >> i) & 1:
                    lin ^= images[i]
            if lin != out:
                raise TableauError("tableau does not describe a linear symplectic map")
            if t.sign(g):
                flips.append(p)
        return cls(m, tuple(images), tuple(flips))


class ColumnTableau:
    """Mutable state tableau (``0 -> n``) stored column by column."""

    def __init__(self, n: int, z: List[int], x: List[int], sign: int, n_rows: int):
        self.n = n
        self.z = z
        self.x = x
        self.sign = sign
        self.n_rows = n_rows
        self.full = (1 << n_rows) - 1

    @classmethod
    def from_tableau(cls, t: ChannelTableau) -> "ColumnTableau":
        if t.n_in:
            raise TableauError("column form is implemented for state tableaux")
        n = t.n_out
        z = [0] * n
        x = [0] * n
        sign = 0
        for i, r in enumerate(t.rows):
            bit = 1 << i
            u = t.out_part(r)
            q = 0
            while u:
                if u & 1:
                    z[q] |= bit
                if u & 2:
                    x[q] |= bit
                u >>= 2
                q += 1
            if t.sign(r):
                sign |= bit
        return cls(n, z, x, sign, t.n_rows)

    @classmethod
    def zero_state(cls, n: int) -> "ColumnTableau":
        """``|0...0>``: row ``q`` is ``Z_q``."""
        return cls(n, [1 << q for q in range(n)], [0] * n, 0, n)

    def to_tableau(self) -> ChannelTableau:
        rows = []
        w = 2 * self.n
        for i in range(self.n_rows):
            r = 0
            for q in range(self.n):
                r |= ((self.z[q] >> i) & 1) << (2 * q)
                r |= ((self.x[q] >> i) & 1) << (2 * q + 1)
            r |= ((self.sign >> i) & 1) << w
            rows.append(r)
        return ChannelTableau(0, self.n, tuple(rows))

    def apply(self, gate: LocalGate, targets: Sequence[int]) -> None:
        """Conjugate by ``gate`` acting on ``targets`` (in local order)."""
        m = gate.m
        if len(targets) != m or len(set(targets)) != m:
            raise ValueError(f"gate acts on {m} distinct qubits, got {targets!r}")
        z, x, full = self.z, self.x, self.full
        cols = []
        for q in targets:
            cols.append(z[q])
            cols.append(x[q])
        if gate.flips:
            # one-hot masks per target: I, Z, X, Y
            onehot = []
            for j in range(m):
                zc, xc = cols[2 * j], cols[2 * j + 1]
                nz, nx = full ^ zc, full ^ xc
                onehot.append((nz & nx, zc & nx, nz & xc, zc & xc))
            flip = 0
            for p in gate.flips:
                mask = onehot[0][p & 3]
                for j in range(1, m):
                    mask &= onehot[j][(p >> 2 * j) & 3]
                flip ^= mask
            self.sign ^= flip
        new = [0] * (2 * m)
        for i, img in enumerate(gate.images):
            c = cols[i]
            if not c:
                continue
            j = 0
            while img:
                if img & 1:
                    new[j] ^= c
                img >>= 1
                j += 1
        for j, q in enumerate(targets):
            z[q] = new[2 * j]
            x[q] = new[2 * j + 1]
