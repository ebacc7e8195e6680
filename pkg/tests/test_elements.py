from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chantab.columns import LocalGate
from chantab.elements import (
    CliffordUnitary,
    Kind,
    MeasureObservable,
    PauliUnitary,
    Postselect,
    arity,
    element_tableau,
    measurement_tableau,
    pauli_unitary_tableau,
    postselect_tableau,
)
from chantab.gf2core import BitMatrix, BitVector
from chantab.oracle import dense_pauli, ptm_of_dense, ptm_of_tableau
from chantab.pauli import PauliObservable, PhasePoint, symplectic_inverse
from chantab.randomcircuit import random_clifford_tableau
from chantab.simulate import Deterministic, UniformRandom, measure_outcome_kind
from chantab.tableau import (
    ChannelTableau,
    InfeasibleError,
    TableauError,
    canonicalize,
    compose,
    discard_qubit,
    identity,
    inverse_unitary,
    is_feasible,
    satisfies_tp_condition,
    state,
    validate,
)
from tests.strategies import phase_points

PP = PhasePoint.from_str

# Rows as printed in the reference table of elementary operations (z1 x1 z2 x2 order).
PRINTED = {
    Kind.PREP_CHAOTIC: [],
    Kind.PREP0: ["|10|0"],
    Kind.PREP1: ["|10|1"],
    Kind.PREP_PLUS: ["|01|0"],
    Kind.PREP_MINUS: ["|01|1"],
    Kind.DISCARD: [],
    Kind.IDENTITY: ["10|10|0", "01|01|0"],
    Kind.DEPHASE_Z: ["10|10|0"],
    Kind.DEPHASE_X: ["01|01|0"],
    Kind.GATE_Z: ["10|10|0", "01|01|1"],
    Kind.GATE_X: ["10|10|1", "01|01|0"],
    Kind.GATE_H: ["10|01|0", "01|10|0"],
    Kind.GATE_S: ["10|10|0", "01|11|0"],
    Kind.GATE_CNOT: ["1000|1000|0", "0100|0101|0", "0010|1010|0", "0001|0001|0"],
    Kind.GATE_CZ: ["1000|1000|0", "0100|0110|0", "0010|0010|0", "0001|0011|0"],
}
# The printed CZ image of X2 is Y2; conjugation by CZ gives Z1 X2.
ERRATA = {(Kind.GATE_CZ, 3): "0001|1001|0"}


def printed_rows(kind):
    rows = list(PRINTED[kind])
    for (k, i), fixed in ERRATA.items():
        if k is kind:
            rows[i] = fixed
    return rows


@pytest.mark.parametrize("kind", list(PRINTED))
def test_elementary_rows_verbatim(kind):
    assert element_tableau(kind).to_strs() == printed_rows(kind)


def test_printed_cz_row_is_not_a_channel():
    bad = ChannelTableau.from_strs(PRINTED[Kind.GATE_CZ], 2, 2)
    with pytest.raises(TableauError):
        validate(bad)
    d = np.diag([1, 1, 1, -1])
    x2 = dense_pauli(PauliObservable.from_str("_X"))
    assert np.allclose(d @ x2 @ d, dense_pauli(PauliObservable.from_str("ZX")))


@pytest.mark.parametrize("kind", list(Kind))
def test_elements_valid_tp_and_match_dense(kind):
    t = element_tableau(kind)
    validate(t)
    assert t.trace_preserving and satisfies_tp_condition(t)
    assert (t.n_in, t.n_out) == arity(kind)
    assert np.allclose(ptm_of_tableau(t), ptm_of_dense(kind), rtol=0, atol=1e-12)


def test_named_element_examples():
    assert element_tableau(Kind.GATE_H).to_strs() == ["10|01|0", "01|10|0"]
    chaotic = element_tableau(Kind.PREP_CHAOTIC)
    assert (chaotic.n_in, chaotic.n_out, chaotic.n_rows) == (0, 1, 0)
    ptm = ptm_of_tableau(chaotic)
    assert np.array_equal(ptm, np.array([[0.5], [0], [0], [0]]))
    assert np.allclose(ptm_of_dense(Kind.PREP_CHAOTIC), ptm)


def test_pauli_unitary_examples():
    assert pauli_unitary_tableau(PP("Z")).to_strs() == ["10|10|0", "01|01|1"]
    assert pauli_unitary_tableau(PP("X")).to_strs() == ["10|10|1", "01|01|0"]
    assert pauli_unitary_tableau(PhasePoint(0, 2)) == identity(2)


@given(st.integers(1, 3).flatmap(phase_points))
def test_pauli_unitary_matches_dense(u):
    el = PauliUnitary(u)
    assert np.allclose(ptm_of_tableau(element_tableau(el)), ptm_of_dense(el))


def test_clifford_unitary_hadamard():
    el = CliffordUnitary(BitMatrix.from_strs(["01", "10"]), BitVector.zeros(2))
    assert element_tableau(el) == element_tableau(Kind.GATE_H)
    assert canonicalize(inverse_unitary(element_tableau(el))) == canonicalize(element_tableau(Kind.GATE_H))
    with pytest.raises(TableauError):
        element_tableau(CliffordUnitary(BitMatrix.from_strs(["10", "10"]), BitVector.zeros(2)))


@pytest.mark.parametrize("seed", range(10))
def test_random_clifford_inverse(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 3)
    g = LocalGate.from_tableau(random_clifford_tableau(rng, m))
    s = BitMatrix(list(g.images), 2 * m)
    c = BitVector.from_list([int((1 << i) in g.flips) for i in range(2 * m)])
    t = element_tableau(CliffordUnitary(s, c))
    assert compose(inverse_unitary(t), t) == canonicalize(identity(m))
    # the sign-free part of the inverse is J S^T J
    inv = LocalGate.from_tableau(inverse_unitary(t))
    assert BitMatrix(list(inv.images), 2 * m) == symplectic_inverse(s)


def test_measurement_rows():
    assert measurement_tableau(PP("Z")).to_strs() == ["10|10|0"]
    assert measurement_tableau(PP("Z"), 1).to_strs() == ["10|10|1"]
    assert element_tableau(MeasureObservable(PP("Z"))) == element_tableau(Kind.DEPHASE_Z)


@given(st.integers(1, 2).flatmap(phase_points).filter(lambda u: u.bits), st.integers(0, 1), st.booleans())
def test_measurements_match_dense(u, c, keep):
    el = MeasureObservable(u, c, keep)
    t = element_tableau(el)
    validate(t)
    assert np.allclose(ptm_of_tableau(t), ptm_of_dense(el))


def test_measure_zz_on_bell_is_deterministic():
    bell = state([PauliObservable.from_str("XX"), PauliObservable.from_str("ZZ")])
    out = compose(element_tableau(MeasureObservable(PP("ZZ"), keep=True)), bell)
    record = discard_qubit(discard_qubit(out, 0), 0)
    assert measure_outcome_kind(record, PP("Z")) == Deterministic(0)


def test_postselect_examples():
    prep0 = element_tableau(Kind.PREP0)
    ok = compose(postselect_tableau(PP("Z"), 0), prep0)
    assert (ok.n_in, ok.n_out) == (0, 0) and is_feasible(ok)
    with pytest.raises(InfeasibleError):
        compose(postselect_tableau(PP("Z"), 1), prep0)
    half = compose(postselect_tableau(PP("X"), 0), prep0)
    assert half.n_rows == 0
    assert measure_outcome_kind(prep0, PP("X")) == UniformRandom()


@given(st.integers(1, 2).flatmap(phase_points).filter(lambda u: u.bits), st.integers(0, 1))
def test_postselect_matches_dense_up_to_scale(u, c):
    el = Postselect(u, c)
    t = element_tableau(el)
    assert not t.trace_preserving
    mine, dense = ptm_of_tableau(t), ptm_of_dense(el)
    assert np.allclose(mine * dense[0, 0] / mine[0, 0], dense)
