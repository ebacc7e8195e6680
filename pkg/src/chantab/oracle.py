"""Dense ground truth, exponential in the number of qubits.

PTM convention: ``PTM[v, u] = 2^-|B| Tr[P(v) Phi(P(u))]`` with ``u`` and
``v`` the packed phase points (qubit 0 in the two lowest bits). Dense
operators use ``kron`` order, qubit 0 being the most significant factor.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Sequence

import numpy as np

from .circuit import Circuit
from .elements import (
    CliffordUnitary,
    Element,
    Kind,
    MeasureObservable,
    PauliUnitary,
    Postselect,
    arity,
)
from .pauli import PauliObservable, PhasePoint
from .tableau import ChannelTableau, TableauError, group_elements

MAX_QUBITS = 8
MAX_PTM_WIRES = 10

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j]).astype(complex)
_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)
_KET0 = np.array([[1], [0]], dtype=complex)
_KET1 = np.array([[0], [1]], dtype=complex)
_KETP = (_KET0 + _KET1) / np.sqrt(2)
_KETM = (_KET0 - _KET1) / np.sqrt(2)


class OracleSizeError(ValueError):
    pass


def _check_size(n: int, limit: int = MAX_QUBITS) -> None:
    if n > limit:
        raise OracleSizeError(f"{n} qubits exceeds the dense oracle limit of {limit}")


def _kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


@lru_cache(maxsize=4096)
def _dense_pauli_cached(u: int, n: int) -> np.ndarray:
    factors = []
    y = 0
    for q in range(n):
        z, x = (u >> 2 * q) & 1, (u >> (2 * q + 1)) & 1
        y += z & x
        f = _I2
        if z:
            f = f @ _Z
        if x:
            f = f @ _X
        factors.append(f)
    m = _kron_all(factors) * (1j) ** (-y)
    m.setflags(write=False)
    return m


def dense_pauli(p: PauliObservable) -> np.ndarray:
    """``(-1)^c i^(-<z,x>) Z^z1 X^x1 (x) ... (x) Z^zn X^xn``."""
    _check_size(p.n)
    m = _dense_pauli_cached(p.u, p.n)
    return -m if p.c else m.copy()


def _pauli(u: int, n: int) -> np.ndarray:
    return _dense_pauli_cached(u, n)


# dense element channels -------------------------------------------------------


def _projector(point: PhasePoint, c: int, outcome: int) -> np.ndarray:
    dim = 1 << point.n
    sign = -1 if (c ^ outcome) else 1
    return (np.eye(dim) + sign * _pauli(point.bits, point.n)) / 2


def dense_kraus(kind: Element) -> List[np.ndarray]:
    """Kraus operators (shape ``2^out x 2^in``) of the textbook channel."""
    if isinstance(kind, Kind):
        table = {
            Kind.PREP0: [_KET0],
            Kind.PREP1: [_KET1],
            Kind.PREP_PLUS: [_KETP],
            Kind.PREP_MINUS: [_KETM],
            Kind.PREP_CHAOTIC: [_KET0 / np.sqrt(2), _KET1 / np.sqrt(2)],
            Kind.DISCARD: [_KET0.T, _KET1.T],
            Kind.IDENTITY: [_I2],
            Kind.DEPHASE_Z: [_KET0 @ _KET0.T, _KET1 @ _KET1.T],
            Kind.DEPHASE_X: [_KETP @ _KETP.T, _KETM @ _KETM.T],
            Kind.GATE_Z: [_Z],
            Kind.GATE_X: [_X],
            Kind.GATE_Y: [_Y],
            Kind.GATE_H: [_H],
            Kind.GATE_S: [_S],
            Kind.GATE_CNOT: [_CNOT],
            Kind.GATE_CZ: [_CZ],
        }
        return table[kind]
    if isinstance(kind, PauliUnitary):
        return [_pauli(kind.point.bits, kind.point.n)]
    if isinstance(kind, MeasureObservable):
        n = kind.point.n
        kets = (_KET0, _KET1)
        if kind.keep:
            return [np.kron(_projector(kind.point, kind.c, m), kets[m]) for m in (0, 1)]
        basis = np.eye(1 << n)
        return [
            kets[m] @ basis[j : j + 1] @ _projector(kind.point, kind.c, m)
            for m in (0, 1)
            for j in range(1 << n)
        ]
    if isinstance(kind, Postselect):
        n = kind.point.n
        basis = np.eye(1 << n)
        proj = _projector(kind.point, kind.c, 0)
        return [basis[j : j + 1] @ proj for j in range(1 << n)]
    if isinstance(kind, CliffordUnitary):
        raise NotImplementedError("no dense synthesis for arbitrary Clifford unitaries")
    raise TypeError(f"unknown element {kind!r}")


def apply_kraus(kraus: Sequence[np.ndarray], rho: np.ndarray) -> np.ndarray:
    return sum(k @ rho @ k.conj().T for k in kraus)


def ptm_of_dense(kind: Element) -> np.ndarray:
    n_in, n_out = arity(kind)
    _check_size(n_in + n_out)
    kraus = dense_kraus(kind)
    out = np.zeros((4**n_out, 4**n_in))
    for u in range(4**n_in):
        image = apply_kraus(kraus, _pauli(u, n_in))
        for v in range(4**n_out):
            val = np.trace(_pauli(v, n_out) @ image) / 2**n_out
            if abs(val.imag) > 1e-12:
                raise AssertionError("PTM entry is not real")
            out[v, u] = val.real
    return out


# tableau-side views ---------------------------------------------------------------


def ptm_of_tableau(t: ChannelTableau) -> np.ndarray:
    """PTM assembled from the ``2^rank`` group elements; entries are exact dyadics."""
    _check_size(t.n_in + t.n_out, MAX_PTM_WIRES)
    out = np.zeros((4**t.n_out, 4**t.n_in))
    scale = 2.0 ** (t.n_in - t.n_out)
    for g in group_elements(t):
        out[t.out_part(g), t.in_part(g)] += -scale if t.sign(g) else scale
    return out


def apply_ptm(ptm: np.ndarray, rho: np.ndarray, n_in: int, n_out: int) -> np.ndarray:
    """Dense ``Phi(rho)`` reconstructed from a PTM."""
    coeffs = np.array([np.trace(_pauli(u, n_in) @ rho) / 2**n_in for u in range(4**n_in)])
    image_coeffs = ptm @ coeffs
    out = np.zeros((1 << n_out, 1 << n_out), dtype=complex)
    for v in np.nonzero(np.abs(image_coeffs) > 1e-15)[0]:
        out += image_coeffs[v] * _pauli(int(v), n_out)
    return out


def choi_of_tableau(t: ChannelTableau) -> np.ndarray:
    """``(Id (x) Phi)[Omega]`` with ``Omega`` the maximally entangled state on ``A A``."""
    if not t.trace_preserving:
        raise TableauError("Choi state requested for a non trace-preserving tableau")
    _check_size(t.n_in + t.n_out)
    ptm = ptm_of_tableau(t)
    da = 1 << t.n_in
    sigma = np.zeros((da << t.n_out, da << t.n_out), dtype=complex)
    for i in range(da):
        for j in range(da):
            eij = np.zeros((da, da), dtype=complex)
            eij[i, j] = 1
            sigma += np.kron(eij, apply_ptm(ptm, eij, t.n_in, t.n_out)) / da
    return sigma


def state_from_stabilizers(t: ChannelTableau) -> np.ndarray:
    """``2^-n sum_{P in S} P`` for a state tableau."""
    if t.n_in:
        raise TableauError("expected a state tableau")
    n = t.n_out
    _check_size(n)
    rho = np.zeros((1 << n, 1 << n), dtype=complex)
    for g in group_elements(t):
        rho += (-1 if t.sign(g) else 1) * _pauli(t.out_part(g), n)
    return rho / 2**n


# whole circuits --------------------------------------------------------------------


def _port_tensor(ptm: np.ndarray, n_out: int, n_in: int) -> np.ndarray:
    """Reshape a PTM so axis ``k`` is output port ``k`` then input port ``k``."""
    t = ptm.reshape((4,) * (n_out + n_in))
    axes = list(range(n_out - 1, -1, -1)) + list(range(n_out + n_in - 1, n_out - 1, -1))
    return t.transpose(axes)


def _walk(circ: Circuit):
    """Yield ``(instruction, in_labels, out_labels)`` following the circuit's wiring."""
    for ins in circ.instructions:
        n_in, n_out = arity(ins.element)
        if ins.source is not None:
            yield ins, [("r", ins.source)], []
            continue
        qs = [("q", q) for q in ins.qubits]
        if ins.is_prep:
            yield ins, [], qs
        elif ins.element is Kind.DISCARD:
            yield ins, qs, []
        elif ins.record is not None:
            rec = [("r", ins.record)]
            yield ins, qs, (qs + rec if n_out > 1 else rec)
        else:
            yield ins, qs, qs


def _output_labels(circ: Circuit) -> list:
    return [("r", r) for r in circ.output_records()] + [("q", q) for q in circ.live_qubits()]


def ptm_of_circuit(circ: Circuit, trace_out_live: bool = False) -> np.ndarray:
    """Product of dense element PTMs, wired like the circuit.

    Inputs are the open qubits (ascending); outputs the surviving records in
    statement order, then the live qubits.
    """
    inputs = [("q", q) for q in circ.open_qubits()]
    n_in = len(inputs)
    _check_size(n_in)
    labels = list(inputs)
    m = np.eye(4**n_in).reshape((4,) * n_in + (4**n_in,))
    # batch axis is the flattened input index; wire axes must be little-endian
    if n_in:
        m = m.transpose(list(range(n_in - 1, -1, -1)) + [n_in])
    for ins, in_l, out_l in _walk(circ):
        el = ins.element
        ptm = ptm_of_dense(el)
        k_out, k_in = len(out_l), len(in_l)
        t = _port_tensor(ptm, k_out, k_in)
        pos = [labels.index(l) for l in in_l]
        m = np.tensordot(t, m, axes=(list(range(k_out, k_out + k_in)), pos))
        labels = out_l + [l for l in labels if l not in in_l]
        _check_size(len(labels))
    final = _output_labels(circ)
    if trace_out_live:
        for l in [l for l in final if l[0] == "q"]:
            ax = labels.index(l)
            m = 2 * np.take(m, 0, axis=ax)  # discard: Tr[I] = 2, Tr[X] = Tr[Y] = Tr[Z] = 0

            labels.remove(l)
        final = [l for l in final if l[0] == "r"]
    order = [labels.index(l) for l in reversed(final)] + [len(labels)]
    m = m.transpose(order)
    return m.reshape(4 ** len(final), 4**n_in)


def circuit_distribution(circ: Circuit) -> Dict[str, float]:
    """Outcome probabilities by dense density-matrix simulation.

    Live qubits are traced out at the end; with POSTSELECT the result is
    conditioned on the post-selected values.
    """
    if circ.open_qubits():
        raise ValueError("dense distribution needs a circuit without open inputs")
    labels: list = []
    rho = np.ones((), dtype=complex)
    for ins, in_l, out_l in _walk(circ):
        rho = _apply_on_wires(rho, labels, dense_kraus(ins.element), in_l, out_l)
        labels = out_l + [l for l in labels if l not in in_l]
        _check_size(len(labels))
    for l in [l for l in labels if l[0] == "q"]:
        rho = _apply_on_wires(rho, labels, [_KET0.T, _KET1.T], [l], [])
        labels.remove(l)
    records = circ.output_records()
    n = len(records)
    order = [labels.index(("r", r)) for r in records]
    rho = rho.transpose(order + [n + k for k in order]).reshape(1 << n, 1 << n)
    diag = np.real(np.diag(rho))
    total = diag.sum()
    if total <= 1e-12:
        raise ValueError("post-selection has probability zero")
    out = {}
    for idx in range(1 << n):
        # kron order: record 0 is the most significant bit
        bits = format(idx, f"0{n}b") if n else ""
        out[bits] = float(diag[idx] / total)
    return out


def _apply_on_wires(rho, labels, kraus, in_l, out_l):
    L = len(labels)
    k_in, k_out = len(in_l), len(out_l)
    pos = [labels.index(l) for l in in_l]
    rest = L - k_in
    new = None
    for k in kraus:
        kt = k.reshape((2,) * (k_out + k_in))
        t = np.tensordot(kt, rho, axes=(list(range(k_out, k_out + k_in)), pos))
        # axes: out kets, remaining kets, all bras
        bpos = [k_out + rest + p for p in pos]
        t = np.tensordot(t, kt.conj(), axes=(bpos, list(range(k_out, k_out + k_in))))
        # axes: out kets, remaining kets, remaining bras, out bras
        new = t if new is None else new + t
    perm = (
        list(range(k_out + rest))
        + list(range(k_out + 2 * rest, 2 * k_out + 2 * rest))
        + list(range(k_out + rest, k_out + 2 * rest))
    )
    return new.transpose(perm)
