"""Strong and weak simulation of circuits whose outputs are all classical."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, List, Tuple, Union

from .circuit import Circuit
from .diagram import Sequential, Strategy, circuit_channel
from .elements import postselect_tableau
from .gf2core import BitMatrix, BitVector, rank_rows
from .pauli import PhasePoint
from .tableau import ChannelTableau, TableauError, contract, discard_qubit, stabilizer_sign

MASK64 = (1 << 64) - 1


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class DyadicProb:
    """Exact probability ``numerator / 2^exponent`` in lowest terms."""

    numerator: int
    exponent: int

    def __post_init__(self):
        if self.numerator < 0 or self.exponent < 0:
            raise ValueError("numerator and exponent must be nonnegative")
        if self.numerator == 0 and self.exponent:
            object.__setattr__(self, "exponent", 0)
        while self.numerator and self.numerator % 2 == 0 and self.exponent:
            object.__setattr__(self, "numerator", self.numerator // 2)
            object.__setattr__(self, "exponent", self.exponent - 1)
        if self.numerator > (1 << self.exponent):
            raise ValueError("probability exceeds 1")

    @classmethod
    def from_fraction(cls, f: Fraction) -> "DyadicProb":
        d = f.denominator
        if d & (d - 1):
            raise ValueError(f"{f} is not dyadic")
        return cls(f.numerator, d.bit_length() - 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __float__(self) -> float:
        return self.numerator / 2.0**self.exponent

    def __mul__(self, other: "DyadicProb") -> "DyadicProb":
        return DyadicProb(self.numerator * other.numerator, self.exponent + other.exponent)

    def __add__(self, other: "DyadicProb") -> "DyadicProb":
        return DyadicProb.from_fraction(self.as_fraction() + other.as_fraction())

    def decimal(self) -> str:
        """Exact decimal expansion (always finite for a dyadic rational)."""
        with localcontext() as ctx:
            ctx.prec = self.exponent + len(str(self.numerator)) + 2
            value = Decimal(self.numerator) / (Decimal(2) ** self.exponent)
        text = format(value, "f")
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return text

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"


ZERO = DyadicProb(0, 0)
ONE = DyadicProb(1, 0)
HALF = DyadicProb(1, 1)


@dataclass(frozen=True)
class ClassicalTableau:
    """Constraints ``M x = c`` on ``n`` outcome bits; ``M`` has full row rank ``r``."""

    M: BitMatrix
    c: BitVector
    rank: int
    n: int


def classical_from_tableau(t: ChannelTableau) -> ClassicalTableau:
    if t.n_in:
        raise SimulationError("circuit has open quantum inputs")
    n = t.n_out
    rows, signs = [], []
    for r in t.rows:
        u = t.out_part(r)
        m = 0
        for q in range(n):
            z, x = (u >> 2 * q) & 1, (u >> (2 * q + 1)) & 1
            if x:
                raise SimulationError(f"output {q} is not dephased (nonzero X column)")
            m |= z << q
        rows.append(m)
        signs.append(t.sign(r))
    M = BitMatrix(rows, n)
    return ClassicalTableau(M, BitVector.from_list(signs), rank_rows(rows, range(n)), n)


def final_tableau(circ: Circuit, strategy: Strategy = Sequential()) -> ChannelTableau:
    """Contracted state of the surviving records (live qubits are traced out)."""
    if circ.open_qubits():
        raise SimulationError(f"open quantum inputs on qubits {circ.open_qubits()}")
    return circuit_channel(circ, strategy, trace_out_live=True)


def final_classical_tableau(circ: Circuit, strategy: Strategy = Sequential()) -> ClassicalTableau:
    return classical_from_tableau(final_tableau(circ, strategy))


def strong_prob(ct: ClassicalTableau, x: BitVector) -> DyadicProb:
    """``2^(r - n)`` when ``M x = c``, else 0."""
    if x.length != ct.n:
        raise ValueError(f"outcome has {x.length} bits, circuit has {ct.n}")
    for i, row in enumerate(ct.M.rows):
        if (row & x.bits).bit_count() & 1 != ct.c[i]:
            return ZERO
    return DyadicProb(1, ct.n - ct.rank)


def distribution(ct: ClassicalTableau) -> Dict[str, DyadicProb]:
    """Every outcome string with nonzero probability (exponential in ``n``)."""
    out = {}
    for bits in range(1 << ct.n):
        x = BitVector(bits, ct.n)
        p = strong_prob(ct, x)
        if p.numerator:
            out[str(x)] = p
    return out


@dataclass(frozen=True)
class Deterministic:
    bit: int


@dataclass(frozen=True)
class UniformRandom:
    pass


OutcomeKind = Union[Deterministic, UniformRandom]


def measure_outcome_kind(t: ChannelTableau, u: PhasePoint, c: int = 0) -> OutcomeKind:
    """Outcome of measuring ``P(u|c)`` on a state tableau."""
    if t.n_in:
        raise TableauError("measure_outcome_kind expects a state tableau")
    if u.n != t.n_out:
        raise ValueError(f"observable on {u.n} qubits, state on {t.n_out}")
    s = stabilizer_sign(t, u.bits)
    if s is None:
        return UniformRandom()
    return Deterministic(s ^ c)


# weak simulation -------------------------------------------------------------


def _mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood 2014): add a Weyl constant, then shift/multiply mix."""

    GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, state: int):
        self.state = state & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + self.GAMMA) & MASK64
        return _mix64(self.state)

    def next_bit(self) -> int:
        return self.next_u64() >> 63


def shot_stream(seed: int, shot: int) -> SplitMix64:
    """Independent stream for one shot: state = mix64(seed) XOR mix64(shot + GAMMA)."""
    return SplitMix64(_mix64(seed & MASK64) ^ _mix64((shot + SplitMix64.GAMMA) & MASK64))


_Z = PhasePoint(0b01, 1)


class _Sampler:
    """Bit-by-bit sampler over a record-state tableau, memoized on the drawn prefix."""

    def __init__(self, t: ChannelTableau):
        self.n = t.n_out
        self.nodes: Dict[Tuple[int, ...], Tuple[ChannelTableau, OutcomeKind]] = {}
        self._root = t

    def node(self, prefix: Tuple[int, ...]) -> Tuple[ChannelTableau, OutcomeKind]:
        hit = self.nodes.get(prefix)
        if hit is not None:
            return hit
        if prefix:
            parent, _ = self.node(prefix[:-1])
            t = contract(parent, postselect_tableau(_Z, prefix[-1]), [(0, 0)])
        else:
            t = self._root
        if t.n_out:
            marginal = t
            for q in range(t.n_out - 1, 0, -1):
                marginal = discard_qubit(marginal, q)
            kind = measure_outcome_kind(marginal, _Z, 0)
        else:
            kind = UniformRandom()
        self.nodes[prefix] = (t, kind)
        return t, kind

    def step_probs(self, x: BitVector) -> List[DyadicProb]:
        """Conditional probability of each bit of ``x`` given the bits before it."""
        probs = []
        prefix: Tuple[int, ...] = ()
        for j in range(self.n):
            _, kind = self.node(prefix)
            if isinstance(kind, Deterministic):
                p = ONE if kind.bit == x[j] else ZERO
            else:
                p = HALF
            probs.append(p)
            if not p.numerator:
                break
            prefix += (x[j],)
        return probs

    def sample(self, rng: SplitMix64) -> BitVector:
        prefix: Tuple[int, ...] = ()
        for _ in range(self.n):
            _, kind = self.node(prefix)
            bit = kind.bit if isinstance(kind, Deterministic) else rng.next_bit()
            prefix += (bit,)
        return BitVector.from_list(prefix)


def sequential_prob(t: ChannelTableau, x: BitVector) -> DyadicProb:
    """Product of the bit-by-bit conditional probabilities of ``x``."""
    p = ONE
    for step in _Sampler(t).step_probs(x):
        p = p * step
    return p


def weak_sample(
    circ: Circuit, shots: int, seed: int, strategy: Strategy = Sequential()
) -> List[BitVector]:
    """``shots`` outcome strings, a pure function of ``(circ, shots, seed)``.

    The circuit is contracted once down to the joint state of its records.
    Each record is then handled in statement order: the later records are
    traced out, the outcome is classified as deterministic or uniform, a fair
    bit is drawn if needed, and the record is post-selected on the result.
    """
    if shots < 0:
        raise ValueError("shots must be nonnegative")
    sampler = _Sampler(final_tableau(circ, strategy))
    return [sampler.sample(shot_stream(seed, s)) for s in range(shots)]
