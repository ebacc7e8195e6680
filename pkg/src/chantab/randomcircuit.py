"""Random circuits over the elementary operations and measurements, for property tests."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List

from .circuit import Circuit, make_circuit

_GATES1 = ["H", "S", "X", "Y", "Z", "DEPHASE_Z", "DEPHASE_X"]
_GATES2 = ["CNOT", "CZ"]
_PREPS = ["PREP0", "PREP1", "PREP+", "PREP-", "CHAOTIC"]
_PAULI = "XYZ"


@dataclass(frozen=True)
class RandomCircuitConfig:
    max_qubits: int = 4
    max_instructions: int = 12
    max_keep_measurements: int = 2
    allow_open_inputs: bool = True
    allow_postselect: bool = False
    closed: bool = False  # every qubit prepared first, ends with MZ on all live qubits
    max_records: int = 4
    max_boundary: int = 8  # open inputs plus outputs, keeps dense oracles affordable


def random_circuit(rng: random.Random, cfg: RandomCircuitConfig = RandomCircuitConfig()) -> Circuit:
    while True:
        c = _draw(rng, cfg)
        if len(c.open_qubits()) + len(c.output_records()) + len(c.live_qubits()) <= cfg.max_boundary:
            return c


def _draw(rng: random.Random, cfg: RandomCircuitConfig) -> Circuit:
    n = rng.randint(1, cfg.max_qubits)
    ops: List[tuple] = []
    state = {}  # q -> 'live' | 'dead'
    if cfg.closed or not cfg.allow_open_inputs:
        for q in range(n):
            ops.append((rng.choice(_PREPS), q))
            state[q] = "live"
    n_keep = 0
    records: List[str] = []
    budget = cfg.max_instructions - len(ops)
    if cfg.closed:
        budget -= n
    for _ in range(max(budget, 0)):
        usable = [q for q in range(n) if state.get(q) != "dead"]
        fresh = [q for q in range(n) if q not in state]
        r = rng.random()
        if fresh and r < 0.15:
            q = rng.choice(fresh)
            ops.append((rng.choice(_PREPS), q))
            state[q] = "live"
            continue
        if not usable:
            break
        if cfg.allow_postselect and records and r < 0.22:
            ops.append(("POSTSELECT", records.pop(rng.randrange(len(records))), rng.randint(0, 1)))
            continue
        if r < 0.55:
            q = rng.choice(usable)
            ops.append((rng.choice(_GATES1), q))
            state[q] = "live"
        elif r < 0.75 and len(usable) >= 2:
            a, b = rng.sample(usable, 2)
            ops.append((rng.choice(_GATES2), a, b))
            state[a] = state[b] = "live"
        elif r < 0.85 and n_keep < cfg.max_keep_measurements and len(records) < cfg.max_records:
            k = rng.randint(1, min(2, len(usable)))
            qs = rng.sample(usable, k)
            sign = rng.choice("+-")
            name = f"m{len(ops)}"
            ops.append(("MEASURE", sign + "".join(rng.choice(_PAULI) for _ in qs), *qs, name))
            records.append(name)
            n_keep += 1
            for q in qs:
                state[q] = "live"
        elif r < 0.92 and not cfg.closed:
            q = rng.choice(usable)
            ops.append(("DISCARD", q))
            state[q] = "dead"
        elif len(records) < cfg.max_records:
            q = rng.choice(usable)
            name = f"m{len(ops)}"
            ops.append(("MZ", q, name))
            records.append(name)
            state[q] = "dead"
    if cfg.closed:
        for q in range(n):
            if state.get(q) == "live":
                ops.append(("MZ", q, f"f{q}"))
                state[q] = "dead"
    return make_circuit(n, ops)


def random_circuits(count: int, seed: int, cfg: RandomCircuitConfig = RandomCircuitConfig()) -> List[Circuit]:
    rng = random.Random(seed)
    return [random_circuit(rng, cfg) for _ in range(count)]


def random_clifford_tableau(rng: random.Random, m: int, depth: int = 12):
    """Tableau of a random ``m``-qubit Clifford unitary (a random word in H, S, X, Z, CNOT)."""
    from .elements import Kind, element_tableau
    from .tableau import canonicalize, compose, embed, identity

    t = identity(m)
    words = [Kind.GATE_H, Kind.GATE_S, Kind.GATE_X, Kind.GATE_Z]
    for _ in range(depth):
        if m > 1 and rng.random() < 0.4:
            g, targets = Kind.GATE_CNOT, rng.sample(range(m), 2)
        else:
            g, targets = rng.choice(words), [rng.randrange(m)]
        t = compose(embed(element_tableau(g), targets, m), t)
    return canonicalize(t)
