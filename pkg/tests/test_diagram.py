from __future__ import annotations


import numpy as np
import pytest
from hypothesis import given, strategies as st

from chantab.circuit import Circuit, Instruction, parse
from chantab.diagram import (
    ChannelAccumulate,
    DiagramError,
    Explicit,
    GreedyMinWidth,
    Sequential,
    circuit_channel,
    contract_all,
    contract_edge,
    from_circuit,
    merge_parallel,
)
from chantab.elements import Kind, element_tableau
from chantab.oracle import ptm_of_circuit, ptm_of_tableau, state_from_stabilizers
from chantab.pauli import PauliObservable
from chantab.randomcircuit import RandomCircuitConfig
from chantab.simulate import final_classical_tableau
from chantab.tableau import canonicalize, compose, identity, state, tensor
from tests.strategies import circuits

E = element_tableau
BELL_BODY = "qubits 2\nPREP0 0\nPREP0 1\nH 0\nCNOT 0 1\n"


def test_from_circuit_shapes():
    d = from_circuit(parse("qubits 1\nPREP0 0\nH 0\nMZ 0 -> m\n"))
    assert (len(d.vertices), len(d.edges), len(d.outputs), len(d.inputs)) == (3, 2, 1, 0)
    d.check()
    bell = from_circuit(parse(BELL_BODY + "MZ 0 -> a\nMZ 1 -> b\n"))
    assert len(bell.vertices) == 6
    assert bell.output_labels == ["a", "b"]
    empty = from_circuit(parse("qubits 0\n"))
    assert not empty.vertices and not empty.edges
    assert contract_all(empty).n_rows == 0


def test_contract_prep_into_h():
    d = from_circuit(parse("qubits 1\nPREP0 0\nH 0\n"))
    out = contract_edge(d, 0)
    (t,) = out.vertices.values()
    assert t.to_strs() == ["|01|0"]
    assert t == E(Kind.PREP_PLUS)


def test_contract_double_edge():
    d = from_circuit(parse("qubits 2\nCNOT 0 1\nCZ 0 1\n"))
    out = contract_edge(d, 0)
    assert not out.edges
    (t,) = out.vertices.values()
    assert t == compose(E(Kind.GATE_CZ), E(Kind.GATE_CNOT))
    assert np.allclose(ptm_of_tableau(t), ptm_of_tableau(E(Kind.GATE_CZ)) @ ptm_of_tableau(E(Kind.GATE_CNOT)))


def test_contract_missing_edge_rejected():
    d = from_circuit(parse("qubits 1\nH 0\n"))
    with pytest.raises(DiagramError):
        contract_edge(d, 0)


def test_merge_examples():
    d = from_circuit(parse("qubits 2\nPREP0 0\nPREP0 1\n"))
    (t,) = merge_parallel(d, 0, 1).vertices.values()
    assert (t.n_in, t.n_out) == (0, 2)
    assert t == tensor(E(Kind.PREP0), E(Kind.PREP0))

    d = from_circuit(parse("qubits 2\nH 0\nS 1\n"))
    (t,) = merge_parallel(d, 0, 1).vertices.values()
    assert np.allclose(ptm_of_tableau(t), np.kron(ptm_of_tableau(E(Kind.GATE_S)), ptm_of_tableau(E(Kind.GATE_H))))

    d = from_circuit(parse("qubits 2\nCNOT 0 1\nH 0\n"))
    with pytest.raises(DiagramError):
        merge_parallel(d, 0, 1)


def test_contract_edge_refuses_cycles():
    # a -> b -> c and a -> c: contracting a-c first would leave a loop through b
    d = from_circuit(parse("qubits 2\nCNOT 0 1\nH 0\nCNOT 0 1\n"))
    direct = [k for k, e in d.edges.items() if e.src == 0 and e.dst == 2]
    with pytest.raises(DiagramError):
        contract_edge(d, direct[0])


def test_bell_state_before_and_after_measurement():
    t = circuit_channel(parse(BELL_BODY))
    assert t == canonicalize(state([PauliObservable.from_str("XX"), PauliObservable.from_str("ZZ")]))
    m = circuit_channel(parse(BELL_BODY + "MZ 0 -> a\nMZ 1 -> b\n"))
    assert m.to_strs() == ["|1010|0"]
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(state_from_stabilizers(t), np.outer(bell, bell))


def test_identity_chain():
    ins = [Instruction(Kind.IDENTITY, (0,)) for _ in range(10)]
    assert circuit_channel(Circuit(1, ins)) == canonicalize(identity(1))


def test_ghz3_classical_constraints():
    c = parse("qubits 3\nPREP0 0\nPREP0 1\nPREP0 2\nH 0\nCNOT 0 1\nCNOT 1 2\nMZ 0 -> a\nMZ 1 -> b\nMZ 2 -> c\n")
    ct = final_classical_tableau(c)
    span = {0}
    for r in ct.M.rows:
        span |= {s ^ r for s in span}
    assert span == {0, 0b011, 0b110, 0b101}
    assert ct.c.bits == 0


STRATS = [Sequential(), ChannelAccumulate(), GreedyMinWidth()]


@given(circuits())
def test_strategies_agree(c):
    ts = [circuit_channel(c, s) for s in STRATS]
    assert ts[0] == ts[1] == ts[2]


@given(circuits(RandomCircuitConfig(max_qubits=3, max_instructions=10)), st.randoms(use_true_random=False))
def test_random_contraction_orders_agree(c, rnd):
    d = from_circuit(c)
    reference = contract_all(d)
    while d.edges:
        legal = [k for k, e in d.edges.items() if not d.has_path(e.src, e.dst, skip_direct=True)]
        d = contract_edge(d, rnd.choice(legal))
    assert contract_all(d) == reference


@given(circuits(RandomCircuitConfig(max_qubits=3, max_instructions=10)), st.randoms(use_true_random=False))
def test_explicit_prefix_then_topological(c, rnd):
    d = from_circuit(c)
    ids = sorted(d.edges)
    picked = [k for k in ids if not d.has_path(d.edges[k].src, d.edges[k].dst, skip_direct=True)]
    order = tuple(rnd.sample(picked, min(1, len(picked))))
    assert contract_all(d, Explicit(order)) == contract_all(d)


@given(circuits())
def test_channel_matches_dense_ptm(c):
    assert np.allclose(ptm_of_tableau(circuit_channel(c)), ptm_of_circuit(c), atol=1e-9)


@given(circuits())
def test_trace_out_live_matches_dense(c):
    t = circuit_channel(c, trace_out_live=True)
    assert t.n_out == len(c.output_records())
    assert np.allclose(ptm_of_tableau(t), ptm_of_circuit(c, trace_out_live=True), atol=1e-9)
