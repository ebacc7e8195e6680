from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chantab.circuit import load, parse
from chantab.elements import Kind, element_tableau
from chantab.gf2core import BitVector
from chantab.oracle import circuit_distribution
from chantab.pauli import PhasePoint
from chantab.randomcircuit import RandomCircuitConfig
from chantab.simulate import (
    HALF,
    ONE,
    ZERO,
    Deterministic,
    DyadicProb,
    SimulationError,
    SplitMix64,
    UniformRandom,
    distribution,
    final_classical_tableau,
    final_tableau,
    measure_outcome_kind,
    sequential_prob,
    shot_stream,
    strong_prob,
    weak_sample,
)
from chantab.tableau import InfeasibleError
from tests.strategies import circuits

BELL = "qubits 2\nPREP0 0\nPREP0 1\nH 0\nCNOT 0 1\nMZ 0 -> a\nMZ 1 -> b\n"
GHZ3 = "qubits 3\nPREP0 0\nPREP0 1\nPREP0 2\nH 0\nCNOT 0 1\nCNOT 1 2\nMZ 0 -> a\nMZ 1 -> b\nMZ 2 -> c\n"
CLOSED = RandomCircuitConfig(closed=True, allow_postselect=True)


def prob(text: str, bits: str) -> DyadicProb:
    return strong_prob(final_classical_tableau(parse(text)), BitVector.from_str(bits))


def test_dyadic_basics():
    p = DyadicProb(4, 3)
    assert (p.numerator, p.exponent) == (1, 1) and p == HALF
    assert str(HALF) == "1/2^1" and HALF.decimal() == "0.5"
    assert str(ZERO) == "0/2^0" and ZERO.decimal() == "0"
    assert ONE.decimal() == "1"
    assert DyadicProb(3, 10).decimal() == "0.0029296875"
    assert DyadicProb(1, 70).decimal().startswith("0.000000000000000000000847")
    assert HALF * HALF == DyadicProb(1, 2)
    assert HALF + HALF == ONE
    with pytest.raises(ValueError):
        DyadicProb(3, 1)
    with pytest.raises(ValueError):
        DyadicProb.from_fraction(Fraction(1, 3))


def test_classical_tableau_examples():
    bell = final_classical_tableau(parse(BELL))
    assert (bell.M.to_strs(), str(bell.c), bell.rank, bell.n) == (["11"], "0", 1, 2)
    one = final_classical_tableau(parse("qubits 1\nPREP1 0\nMZ 0 -> m\n"))
    assert (one.M.to_strs(), str(one.c), one.rank) == (["1"], "1", 1)
    chaos = final_classical_tableau(parse("qubits 1\nCHAOTIC 0\nMZ 0 -> m\n"))
    assert (chaos.M.n_rows, chaos.rank) == (0, 0)


def test_strong_prob_examples():
    dense = circuit_distribution(parse(BELL))
    for bits in ("00", "01", "10", "11"):
        assert float(prob(BELL, bits)) == pytest.approx(dense[bits], abs=1e-12)
    assert prob(BELL, "00") == prob(BELL, "11") == HALF
    assert prob(BELL, "01") == prob(BELL, "10") == ZERO
    det = "qubits 1\nPREP1 0\nMZ 0 -> m\n"
    assert prob(det, "1") == ONE and prob(det, "0") == ZERO
    dense = circuit_distribution(parse(GHZ3))
    for bits, p in dense.items():
        assert float(prob(GHZ3, bits)) == pytest.approx(p, abs=1e-12)
    assert prob(GHZ3, "000") == prob(GHZ3, "111") == HALF


def test_strong_prob_rejects_wrong_length():
    with pytest.raises(ValueError):
        prob(BELL, "0")


def test_open_inputs_rejected():
    with pytest.raises(SimulationError):
        final_classical_tableau(parse("qubits 1\nMZ 0 -> m\n"))


def test_measure_outcome_kind_examples():
    zero = element_tableau(Kind.PREP0)
    assert measure_outcome_kind(zero, PhasePoint.from_str("Z")) == Deterministic(0)
    assert measure_outcome_kind(zero, PhasePoint.from_str("Z"), 1) == Deterministic(1)
    assert measure_outcome_kind(zero, PhasePoint.from_str("X")) == UniformRandom()


def test_contradictory_postselection():
    text = "qubits 1\nPREP0 0\nMEASURE +X 0 -> a\nMEASURE +X 0 -> b\nPOSTSELECT a = 0\nPOSTSELECT b = 1\n"
    with pytest.raises(InfeasibleError):
        final_classical_tableau(parse(text))
    with pytest.raises(ValueError):
        circuit_distribution(parse(text))


def test_splitmix_reference_stream():
    g = SplitMix64(1234567)
    got = [g.next_u64() for _ in range(5)]
    assert got == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]


def test_shot_streams_differ():
    a = [shot_stream(7, s).next_u64() for s in range(100)]
    assert len(set(a)) == 100


def test_bell_samples():
    c = parse(BELL)
    shots = weak_sample(c, 4, 7)
    assert all(str(x) in {"00", "11"} for x in shots)
    assert [str(x) for x in weak_sample(c, 50, 7)] == [str(x) for x in weak_sample(c, 50, 7)]
    assert [str(x) for x in weak_sample(c, 50, 7)] != [str(x) for x in weak_sample(c, 50, 8)]


def test_deterministic_samples():
    shots = weak_sample(parse("qubits 2\nPREP1 0\nPREP0 1\nCNOT 0 1\nMZ 0 -> a\nMZ 1 -> b\n"), 20, 3)
    assert {str(x) for x in shots} == {"11"}


def test_bell_frequency():
    shots = weak_sample(parse(BELL), 10_000, 2024)
    f = sum(str(x) == "00" for x in shots) / len(shots)
    assert abs(f - 0.5) <= 3 * 0.5 / 100


def test_sampling_teleport_fixture(fixture_path):
    c = load(fixture_path("teleport.scf"))
    ct = final_classical_tableau(c)
    for x in weak_sample(c, 200, 11):
        assert strong_prob(ct, x).numerator
        assert x[2] == 0


@given(circuits(CLOSED))
def test_strong_prob_matches_density_matrix(c):
    try:
        ct = final_classical_tableau(c)
    except InfeasibleError:
        with pytest.raises(ValueError):
            circuit_distribution(c)
        return
    dense = circuit_distribution(c)
    total = Fraction(0)
    for bits, p in dense.items():
        mine = strong_prob(ct, BitVector.from_str(bits))
        assert float(mine) == pytest.approx(p, abs=1e-9)
        total += mine.as_fraction()
    assert total == 1
    assert sum(v.as_fraction() for v in distribution(ct).values()) == 1


@given(circuits(CLOSED), st.integers(0, 2**32))
def test_sequential_rule_and_samples(c, seed):
    try:
        t = final_tableau(c)
    except InfeasibleError:
        return
    ct = final_classical_tableau(c)
    for bits, p in distribution(ct).items():
        assert sequential_prob(t, BitVector.from_str(bits)) == p
    for x in weak_sample(c, 8, seed):
        assert strong_prob(ct, x).numerator > 0
