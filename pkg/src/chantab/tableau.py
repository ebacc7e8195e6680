"""Stabilizer tableaux of Clifford channels.

A channel ``A -> B`` is stored as rows ``[u_A | u_B | c]`` packed into ints:
bits ``[0, 2|A|)`` hold the input phase point, bits ``[2|A|, 2|A| + 2|B|)``
the output phase point and the next bit is the sign. Row ``[u_A|u_B|c]``
stands for the superoperator ``rho -> (-1)^c 2^|A| Tr[rho P(u_A)] P(u_B)``;
the channel is the normalized sum over the group the rows generate.

Qubit ``q`` of the joint system ``A + B`` (inputs first) owns bits
``2q, 2q + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from .gf2core import BitMatrix, combine_rows, left_kernel_rows, rank_rows, rref_inplace, solve_rows
from .pauli import PauliObservable, PhasePoint, beta_bits, symplectic_bits, zx


class TableauError(ValueError):
    """A tableau violates a structural invariant."""


class InfeasibleError(ValueError):
    """The rows generate ``[0|0|1]``: the map is zero."""


@dataclass(frozen=True)
class ChannelTableau:
    n_in: int
    n_out: int
    rows: Tuple[int, ...]
    trace_preserving: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        limit = 1 << (self.width + 1)
        for r in self.rows:
            if r < 0 or r >= limit:
                raise TableauError(f"row {r:#x} does not fit a {self.n_in}->{self.n_out} tableau")

    # layout -----------------------------------------------------------------

    @property
    def width(self) -> int:
        """Number of sign-free columns, ``2|A| + 2|B|``."""
        return 2 * (self.n_in + self.n_out)

    @property
    def n_cols(self) -> int:
        return self.width + 1

    @property
    def in_mask(self) -> int:
        return (1 << (2 * self.n_in)) - 1

    @property
    def out_mask(self) -> int:
        return ((1 << self.width) - 1) ^ self.in_mask

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def matrix(self) -> BitMatrix:
        return BitMatrix(self.rows, self.n_cols)

    def in_part(self, row: int) -> int:
        return row & self.in_mask

    def out_part(self, row: int) -> int:
        """Output phase point shifted down to bit 0."""
        return (row & self.out_mask) >> (2 * self.n_in)

    def sign(self, row: int) -> int:
        return (row >> self.width) & 1

    def with_rows(self, rows: Sequence[int]) -> "ChannelTableau":
        return ChannelTableau(self.n_in, self.n_out, tuple(rows), self.trace_preserving)

    # construction -------------------------------------------------------------

    @classmethod
    def from_strs(
        cls, rows: Sequence[str], n_in: int, n_out: int, trace_preserving: bool = True
    ) -> "ChannelTableau":
        """Rows written as ``"zx..|zx..|c"``; an empty block may be ``.`` or blank."""
        return cls(n_in, n_out, tuple(_parse_row(r, n_in, n_out) for r in rows), trace_preserving)

    @classmethod
    def empty(cls, n_in: int = 0, n_out: int = 0, trace_preserving: bool = True) -> "ChannelTableau":
        return cls(n_in, n_out, (), trace_preserving)

    def to_strs(self) -> List[str]:
        return [_format_row(r, self.n_in, self.n_out) for r in self.rows]

    def __str__(self) -> str:
        return format_tableau(self)


def identity(n: int) -> ChannelTableau:
    rows = []
    for q in range(n):
        for b in (1, 2):
            rows.append((b << 2 * q) | (b << 2 * (n + q)))
    return ChannelTableau(n, n, tuple(rows))


def state(stabilizers: Sequence[PauliObservable]) -> ChannelTableau:
    """0-input tableau whose rows are the given observables."""
    if not stabilizers:
        raise ValueError("use ChannelTableau.empty(0, n) for the maximally mixed state")
    n = stabilizers[0].n
    rows = []
    for p in stabilizers:
        if p.n != n:
            raise ValueError("mixed qubit counts")
        rows.append(p.u | (p.c << 2 * n))
    return ChannelTableau(0, n, tuple(rows))


# row calculus -----------------------------------------------------------------


def row_adder(n_in: int, n_out: int) -> Callable[[int, int], int]:
    """Return ``add(dst, src)`` implementing the split-system row sum.

    The sign picks up ``(beta_B - beta_A) / 2``; an odd difference means the
    rows anticommute on ``A + B`` and is reported as :class:`TableauError`.
    """
    a_mask = (1 << (2 * n_in)) - 1
    b_mask = ((1 << (2 * (n_in + n_out))) - 1) ^ a_mask
    sign_shift = 2 * (n_in + n_out)

    def add(dst: int, src: int) -> int:
        d = (beta_bits(src & b_mask, dst & b_mask) - beta_bits(src & a_mask, dst & a_mask)) & 3
        if d & 1:
            raise TableauError("rows anticommute on the joint system")
        return dst ^ src ^ ((d >> 1) << sign_shift)

    return add


def add_row(t: ChannelTableau, dst: int, src: int) -> ChannelTableau:
    """Multiply generator ``dst`` by generator ``src``."""
    if dst == src:
        raise ValueError("cannot add a row to itself")
    for i in (dst, src):
        if not 0 <= i < t.n_rows:
            raise IndexError(f"row {i} out of range")
    rows = list(t.rows)
    rows[dst] = row_adder(t.n_in, t.n_out)(rows[dst], rows[src])
    return t.with_rows(rows)


def group_element(t: ChannelTableau, alpha: int, add: Optional[Callable[[int, int], int]] = None) -> int:
    """Product of the generators selected by the bits of ``alpha``."""
    if add is None:
        add = row_adder(t.n_in, t.n_out)
    acc = 0
    i = 0
    rows = t.rows
    while alpha:
        if alpha & 1:
            acc = add(acc, rows[i]) if acc else rows[i]
        alpha >>= 1
        i += 1
    return acc


def canonical_columns(t: ChannelTableau) -> List[int]:
    """Pivot order: every output column, then every input column."""
    return list(range(2 * t.n_in, t.width)) + list(range(2 * t.n_in))


def canonicalize(t: ChannelTableau) -> ChannelTableau:
    """Unique representative: RREF over outputs-then-inputs, zero rows removed.

    Raises :class:`InfeasibleError` if the group contains ``[0|0|1]``.
    """
    rows = list(t.rows)
    pivots = rref_inplace(rows, canonical_columns(t), row_adder(t.n_in, t.n_out))
    for r in rows[len(pivots):]:
        if r:
            raise InfeasibleError("rows generate [0|0|1]")
    return t.with_rows(rows[: len(pivots)])


def is_feasible(t: ChannelTableau) -> bool:
    try:
        canonicalize(t)
    except InfeasibleError:
        return False
    return True


def is_symplectic(t: ChannelTableau) -> bool:
    w = (1 << t.width) - 1
    rows = [r & w for r in t.rows]
    return all(symplectic_bits(rows[i], rows[j]) == 0 for i in range(len(rows)) for j in range(i))


def satisfies_tp_condition(t: ChannelTableau) -> bool:
    """Columns of ``U_A`` lie in the column space of ``U_B``."""
    out_cols = range(2 * t.n_in, t.width)
    return rank_rows(t.rows, out_cols) == rank_rows(t.rows, range(t.width))


def validate(t: ChannelTableau) -> None:
    """Raise unless ``t`` is symplectic, feasible and (if flagged) trace preserving."""
    if not is_symplectic(t):
        raise TableauError("sign-free part is not symplectic")
    canonicalize(t)
    if t.trace_preserving and not satisfies_tp_condition(t):
        raise TableauError("tableau flagged trace preserving but U_A is not spanned by U_B")


def group_elements(t: ChannelTableau) -> Iterator[int]:
    """All ``2^rank`` distinct group elements (Gray-code walk over the canonical basis)."""
    c = canonicalize(t)
    add = row_adder(c.n_in, c.n_out)
    acc = 0
    yield acc
    for k in range(1, 1 << c.n_rows):
        bit = (k & -k).bit_length() - 1
        acc = add(acc, c.rows[bit]) if acc else c.rows[bit]
        yield acc


# structural operations --------------------------------------------------------


def _gather_qubits(row: int, positions: Sequence[int]) -> int:
    """Pack the 2-bit blocks of ``positions`` (in order) starting at bit 0."""
    out = 0
    k = 0
    i = 0
    n = len(positions)
    while i < n:
        start = positions[i]
        j = i + 1
        while j < n and positions[j] == positions[j - 1] + 1:
            j += 1
        run = j - i
        out |= ((row >> (2 * start)) & ((1 << (2 * run)) - 1)) << (2 * k)
        k += run
        i = j
    return out


def reorder(t: ChannelTableau, inputs: Sequence[int], outputs: Sequence[int]) -> ChannelTableau:
    """New input ``i`` is old input ``inputs[i]``; likewise for outputs."""
    if sorted(inputs) != list(range(t.n_in)) or sorted(outputs) != list(range(t.n_out)):
        raise ValueError("reorder needs permutations of the input and output wires")
    positions = list(inputs) + [t.n_in + o for o in outputs]
    w = t.width
    rows = [_gather_qubits(r, positions) | (r >> w << w) for r in t.rows]
    return t.with_rows(rows)


def tensor(t1: ChannelTableau, t2: ChannelTableau) -> ChannelTableau:
    """Direct sum; inputs ``A1 A2``, outputs ``B1 B2`` (``t1`` wires first)."""
    a1, b1, a2, b2 = t1.n_in, t1.n_out, t2.n_in, t2.n_out
    n_in, n_out = a1 + a2, b1 + b2
    w = 2 * (n_in + n_out)
    rows = []
    for r in t1.rows:
        rows.append(t1.in_part(r) | (t1.out_part(r) << 2 * n_in) | (t1.sign(r) << w))
    for r in t2.rows:
        rows.append(
            (t2.in_part(r) << 2 * a1) | (t2.out_part(r) << 2 * (n_in + b1)) | (t2.sign(r) << w)
        )
    return ChannelTableau(n_in, n_out, tuple(rows), t1.trace_preserving and t2.trace_preserving)


def contract(
    first: ChannelTableau,
    second: ChannelTableau,
    pairs: Sequence[Tuple[int, int]],
    canonical: bool = True,
) -> ChannelTableau:
    """Feed outputs of ``first`` into inputs of ``second`` along ``pairs``.

    ``pairs`` lists ``(first_output, second_input)``. Unpaired wires pass
    through; the result has inputs ``[first inputs, unpaired second inputs]``
    and outputs ``[unpaired first outputs, second outputs]``, each in
    ascending original order.

    Matched group elements are found from the left kernel of the stacked
    shared columns; each side's sign is accumulated with its own A/B split
    and the two signs are XORed.
    """
    s_out = [p[0] for p in pairs]
    s_in = [p[1] for p in pairs]
    if len(set(s_out)) != len(s_out) or len(set(s_in)) != len(s_in):
        raise ValueError("a wire appears twice in the contraction")
    for o in s_out:
        if not 0 <= o < first.n_out:
            raise ValueError(f"first has no output {o}")
    for i in s_in:
        if not 0 <= i < second.n_in:
            raise ValueError(f"second has no input {i}")
    rest_out = [o for o in range(first.n_out) if o not in set(s_out)]
    rest_in = [i for i in range(second.n_in) if i not in set(s_in)]

    k1 = first.n_rows
    shared = [_gather_qubits(r, [first.n_in + o for o in s_out]) for r in first.rows]
    shared += [_gather_qubits(r, s_in) for r in second.rows]
    kernel = left_kernel_rows(shared, 2 * len(pairs))

    n_in = first.n_in + len(rest_in)
    n_out = len(rest_out) + second.n_out
    w = 2 * (n_in + n_out)
    add1 = row_adder(first.n_in, first.n_out)
    add2 = row_adder(second.n_in, second.n_out)
    low_mask = (1 << k1) - 1
    rest_out_pos = [first.n_in + o for o in rest_out]
    out2_pos = list(range(second.n_in, second.n_in + second.n_out))
    rows = []
    for vec in kernel:
        g = group_element(first, vec & low_mask, add1)
        h = group_element(second, vec >> k1, add2)
        row = first.in_part(g)
        row |= _gather_qubits(h, rest_in) << 2 * first.n_in
        row |= _gather_qubits(g, rest_out_pos) << 2 * n_in
        row |= _gather_qubits(h, out2_pos) << 2 * (n_in + len(rest_out))
        row |= (first.sign(g) ^ second.sign(h)) << w
        rows.append(row)
    out = ChannelTableau(n_in, n_out, tuple(rows), first.trace_preserving and second.trace_preserving)
    return canonicalize(out) if canonical else out


def compose(second: ChannelTableau, first: ChannelTableau) -> ChannelTableau:
    """Canonical tableau of ``second o first``."""
    if first.n_out != second.n_in:
        raise ValueError(f"cannot compose: {first.n_out} outputs into {second.n_in} inputs")
    return contract(first, second, [(i, i) for i in range(first.n_out)])


def discard_qubit(t: ChannelTableau, out_qubit: int) -> ChannelTableau:
    """Trace out one output wire by eliminating its two columns."""
    if not 0 <= out_qubit < t.n_out:
        raise IndexError(f"output {out_qubit} out of range")
    q = t.n_in + out_qubit
    rows = list(t.rows)
    pivots = rref_inplace(rows, (2 * q, 2 * q + 1), row_adder(t.n_in, t.n_out))
    low = (1 << (2 * q)) - 1
    kept = []
    for r in rows[len(pivots):]:
        kept.append((r & low) | ((r >> (2 * q + 2)) << (2 * q)))
    return ChannelTableau(t.n_in, t.n_out - 1, tuple(kept), t.trace_preserving)


def to_choi_state(t: ChannelTableau) -> ChannelTableau:
    """Choi state on ``A + B``: each sign flipped by ``<z_A, x_A>``."""
    if not t.trace_preserving:
        raise TableauError("Choi state requested for a non trace-preserving tableau")
    w = t.width
    rows = [r ^ ((zx(t.in_part(r)) & 1) << w) for r in t.rows]
    return ChannelTableau(0, t.n_in + t.n_out, tuple(rows))


def inverse_unitary(t: ChannelTableau) -> ChannelTableau:
    """Tableau of ``U^dagger`` from that of ``U``: swap the input and output blocks."""
    if t.n_in != t.n_out:
        raise TableauError("only square tableaux have a unitary inverse")
    n = t.n_in
    mask = (1 << 2 * n) - 1
    rows = [((r >> 2 * n) & mask) | ((r & mask) << 2 * n) | (t.sign(r) << t.width) for r in t.rows]
    return t.with_rows(rows)


def embed(t: ChannelTableau, targets: Sequence[int], ambient: int) -> ChannelTableau:
    """Pad ``t`` with identity wires so it acts on ``targets`` of ``ambient`` qubits.

    Gate-like tableaux (``n_in == n_out``) act in place. A preparation
    (``n_in == 0``) inserts its outputs at ``targets`` of an ``ambient``-qubit
    output register; a discard (``n_out == 0``) removes ``targets`` from an
    ``ambient``-qubit input register. Untouched wires keep their relative order.
    """
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise ValueError("embed targets overlap")
    if any(not 0 <= q < ambient for q in targets):
        raise ValueError(f"embed target out of range for {ambient} qubits")
    arity = len(targets)
    if t.n_in == t.n_out == arity:
        others = [q for q in range(ambient) if q not in set(targets)]
        full = tensor(t, identity(len(others)))
        order = targets + others
        inv = [order.index(q) for q in range(ambient)]
        return reorder(full, inv, inv)
    if t.n_in == 0 and t.n_out == arity:
        others = [q for q in range(ambient) if q not in set(targets)]
        full = tensor(t, identity(len(others)))
        order = targets + others
        return reorder(full, list(range(len(others))), [order.index(q) for q in range(ambient)])
    if t.n_out == 0 and t.n_in == arity:
        others = [q for q in range(ambient) if q not in set(targets)]
        full = tensor(t, identity(len(others)))
        order = targets + others
        return reorder(full, [order.index(q) for q in range(ambient)], list(range(len(others))))
    raise ValueError(f"cannot embed a {t.n_in}->{t.n_out} tableau on {arity} targets")


# state queries ---------------------------------------------------------------


def stabilizer_sign(t: ChannelTableau, u: int) -> Optional[int]:
    """Sign ``s`` with ``(-1)^s P(u)`` in the group of a state tableau, or None."""
    if t.n_in:
        raise TableauError("stabilizer_sign expects a state tableau")
    alpha = solve_rows([r & ((1 << t.width) - 1) for r in t.rows], t.width, u)
    if alpha is None:
        return None
    return t.sign(group_element(t, alpha))


# text formats -------------------------------------------------------------------


def _format_row(r: int, n_in: int, n_out: int) -> str:
    bits = format(r, f"0{2 * (n_in + n_out) + 1}b")[::-1]
    a = bits[: 2 * n_in]
    b = bits[2 * n_in : 2 * (n_in + n_out)]
    return f"{a}|{b}|{bits[-1]}"


def _parse_row(s: str, n_in: int, n_out: int) -> int:
    parts = [p.strip().replace(" ", "") for p in s.split("|")]
    if len(parts) != 3:
        raise ValueError(f"row {s!r} must have three '|'-separated blocks")
    a, b, c = [("" if p in (".", "·") else p) for p in parts]
    if len(a) != 2 * n_in or len(b) != 2 * n_out or c not in ("0", "1"):
        raise ValueError(f"row {s!r} does not match a {n_in}->{n_out} tableau")
    bits = a + b + c
    if any(ch not in "01" for ch in bits):
        raise ValueError(f"row {s!r} is not binary")
    return int(bits[::-1], 2)


def format_tableau(t: ChannelTableau, human: bool = False) -> str:
    """Header line then one row per line.

    Bit form rows read ``zx..|zx..|c``; human form rows read ``PauliA -> +PauliB``
    with ``.`` for an empty system.
    """
    lines = [f"tableau in={t.n_in} out={t.n_out} tp={int(t.trace_preserving)}"]
    for r in t.rows:
        if human:
            a = str(PhasePoint(t.in_part(r), t.n_in)) or "."
            b = str(PhasePoint(t.out_part(r), t.n_out)) or "."
            lines.append(f"{a} -> {'-' if t.sign(r) else '+'}{b}")
        else:
            lines.append(_format_row(r, t.n_in, t.n_out))
    return "\n".join(lines) + "\n"


def parse_tableau(text: str) -> ChannelTableau:
    """Inverse of :func:`format_tableau` (either row style)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("tableau"):
        raise ValueError("missing 'tableau in=.. out=.. tp=..' header")
    fields = dict(item.split("=", 1) for item in lines[0].split()[1:])
    n_in, n_out = int(fields["in"]), int(fields["out"])
    tp = fields.get("tp", "1") == "1"
    rows = []
    for ln in lines[1:]:
        if "->" in ln:
            a, b = (s.strip() for s in ln.split("->"))
            pa = PauliObservable.from_str("" if a == "." else a)
            sign = 1 if b.startswith("-") else 0
            b = b.lstrip("+-")
            pb = PauliObservable.from_str("" if b == "." else b)
            if pa.n != n_in or pb.n != n_out:
                raise ValueError(f"row {ln!r} does not match a {n_in}->{n_out} tableau")
            rows.append(pa.u | (pb.u << 2 * n_in) | (sign << 2 * (n_in + n_out)))
        else:
            rows.append(_parse_row(ln, n_in, n_out))
    return ChannelTableau(n_in, n_out, tuple(rows), tp)


def from_matrix(m: BitMatrix, n_in: int, n_out: int, trace_preserving: bool = True) -> ChannelTableau:
    if m.n_cols != 2 * (n_in + n_out) + 1:
        raise ValueError("matrix width does not match the qubit counts")
    return ChannelTableau(n_in, n_out, tuple(m.rows), trace_preserving)


__all__ = [
    "ChannelTableau",
    "InfeasibleError",
    "TableauError",
    "add_row",
    "canonicalize",
    "combine_rows",
    "compose",
    "contract",
    "discard_qubit",
    "embed",
    "format_tableau",
    "from_matrix",
    "group_element",
    "group_elements",
    "identity",
    "inverse_unitary",
    "is_feasible",
    "parse_tableau",
    "reorder",
    "stabilizer_sign",
    "state",
    "tensor",
    "to_choi_state",
    "validate",
]
