"""Text circuit format (``.scf``).

::

    # comment
    qubits 2
    PREP0 0
    PREP0 1
    H 0
    CNOT 0 1
    MZ 0 -> a
    MZ 1 -> b

``MZ`` consumes its qubit (the wire becomes the classical record);
``MEASURE`` keeps the measured qubits and adds a record. ``POSTSELECT``
consumes a record. A qubit used before any preparation is an open input of
the circuit. Outcome strings list the surviving records in statement order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .elements import Element, Kind, MeasureObservable, Postselect
from .pauli import PauliObservable, PhasePoint

Z1 = PhasePoint(0b01, 1)

_SINGLE = {
    "PREP0": Kind.PREP0,
    "PREP1": Kind.PREP1,
    "PREP+": Kind.PREP_PLUS,
    "PREP-": Kind.PREP_MINUS,
    "CHAOTIC": Kind.PREP_CHAOTIC,
    "DISCARD": Kind.DISCARD,
    "H": Kind.GATE_H,
    "S": Kind.GATE_S,
    "X": Kind.GATE_X,
    "Y": Kind.GATE_Y,
    "Z": Kind.GATE_Z,
    "DEPHASE_Z": Kind.DEPHASE_Z,
    "DEPHASE_X": Kind.DEPHASE_X,
}
_DOUBLE = {"CNOT": Kind.GATE_CNOT, "CZ": Kind.GATE_CZ}
_MNEMONIC = {v: k for k, v in {**_SINGLE, **_DOUBLE}.items()}
_PREPS = {Kind.PREP0, Kind.PREP1, Kind.PREP_PLUS, Kind.PREP_MINUS, Kind.PREP_CHAOTIC}
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


class CircuitError(ValueError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class Instruction:
    element: Element
    qubits: Tuple[int, ...] = ()
    record: Optional[str] = None  # record produced by a measurement
    source: Optional[str] = None  # record consumed by POSTSELECT
    line: int = field(default=0, compare=False)

    @property
    def is_prep(self) -> bool:
        return self.element in _PREPS


@dataclass
class Circuit:
    n_qubits: int
    instructions: List[Instruction] = field(default_factory=list)

    def __post_init__(self):
        check_circuit(self)

    def records(self) -> List[str]:
        return [ins.record for ins in self.instructions if ins.record is not None]

    def output_records(self) -> List[str]:
        """Records not consumed by POSTSELECT, in statement order."""
        used = {ins.source for ins in self.instructions if ins.source is not None}
        return [r for r in self.records() if r not in used]

    def open_qubits(self) -> List[int]:
        """Qubits whose first use is not a preparation (the circuit's inputs)."""
        seen = set()
        opened = []
        for ins in self.instructions:
            for q in ins.qubits:
                if q not in seen:
                    seen.add(q)
                    if not ins.is_prep:
                        opened.append(q)
        return sorted(opened)

    def live_qubits(self) -> List[int]:
        """Qubits still holding a quantum wire after the last instruction."""
        live = set()
        for ins in self.instructions:
            for q in ins.qubits:
                live.add(q)
            if ins.element is Kind.DISCARD or (
                isinstance(ins.element, MeasureObservable) and not ins.element.keep
            ):
                live.difference_update(ins.qubits)
        return sorted(live)

    def has_postselection(self) -> bool:
        return any(ins.source is not None for ins in self.instructions)

    def __str__(self) -> str:
        return format_circuit(self)


def check_circuit(c: Circuit) -> None:
    """Enforce qubit ranges, lifecycle and record naming; errors carry line numbers."""
    if c.n_qubits < 0:
        raise CircuitError("negative qubit count")
    state: Dict[int, str] = {}  # 'live' or 'dead'
    records: Dict[str, str] = {}  # name -> 'open' | 'used'
    for ins in c.instructions:
        ln = ins.line
        for q in ins.qubits:
            if not 0 <= q < c.n_qubits:
                raise CircuitError(f"qubit {q} out of range (qubits {c.n_qubits})", ln)
        if len(set(ins.qubits)) != len(ins.qubits):
            raise CircuitError("duplicate target qubit", ln)
        if ins.source is not None:
            if records.get(ins.source) is None:
                raise CircuitError(f"unknown record {ins.source!r}", ln)
            if records[ins.source] == "used":
                raise CircuitError(f"record {ins.source!r} already post-selected", ln)
            records[ins.source] = "used"
            continue
        for q in ins.qubits:
            if state.get(q) == "dead":
                raise CircuitError(f"qubit {q} used after it was discarded or measured out", ln)
            if ins.is_prep and state.get(q) == "live":
                raise CircuitError(f"qubit {q} is already prepared", ln)
            state[q] = "live"
        if ins.element is Kind.DISCARD or (
            isinstance(ins.element, MeasureObservable) and not ins.element.keep
        ):
            for q in ins.qubits:
                state[q] = "dead"
        if ins.record is not None:
            if not _NAME.match(ins.record):
                raise CircuitError(f"bad record name {ins.record!r}", ln)
            if ins.record in records:
                raise CircuitError(f"duplicate record name {ins.record!r}", ln)
            records[ins.record] = "open"


def _int(tok: str, ln: int) -> int:
    if not re.fullmatch(r"\d+", tok):
        raise CircuitError(f"expected a qubit index, got {tok!r}", ln)
    return int(tok)


def parse(text: str) -> Circuit:
    n_qubits = None
    instructions: List[Instruction] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, tail = line.partition("->")
        toks = head.split()
        record = tail.strip() if _ else None
        if _ and not record:
            raise CircuitError("missing record name after '->'", ln)
        op = toks[0]
        args = toks[1:]
        if op == "qubits":
            if n_qubits is not None:
                raise CircuitError("repeated 'qubits' header", ln)
            if len(args) != 1 or record is not None:
                raise CircuitError("usage: qubits N", ln)
            n_qubits = _int(args[0], ln)
            continue
        if n_qubits is None:
            raise CircuitError("the first statement must be 'qubits N'", ln)
        if op in _SINGLE or op in _DOUBLE:
            want = 1 if op in _SINGLE else 2
            if len(args) != want:
                raise CircuitError(f"{op} takes {want} qubit(s), got {len(args)}", ln)
            if record is not None:
                raise CircuitError(f"{op} does not produce a record", ln)
            kind = _SINGLE.get(op) or _DOUBLE[op]
            ins = Instruction(kind, tuple(_int(a, ln) for a in args), line=ln)
        elif op == "MZ":
            if len(args) != 1 or record is None:
                raise CircuitError("usage: MZ q -> name", ln)
            ins = Instruction(MeasureObservable(Z1, 0, keep=False), (_int(args[0], ln),), record, line=ln)
        elif op == "MEASURE":
            if len(args) < 2 or record is None:
                raise CircuitError("usage: MEASURE ±PAULI q1 q2 ... -> name", ln)
            try:
                p = PauliObservable.from_str(args[0])
            except ValueError as exc:
                raise CircuitError(str(exc), ln) from None
            if args[0][:1] not in "+-":
                raise CircuitError("MEASURE observable needs an explicit sign", ln)
            qubits = tuple(_int(a, ln) for a in args[1:])
            if p.n != len(qubits):
                raise CircuitError(
                    f"observable {args[0]} has {p.n} factor(s) but {len(qubits)} qubit(s) given", ln
                )
            if p.u == 0:
                raise CircuitError("cannot measure the identity observable", ln)
            ins = Instruction(MeasureObservable(p.point, p.c, keep=True), qubits, record, line=ln)
        elif op == "POSTSELECT":
            m = re.fullmatch(r"POSTSELECT\s+(\S+)\s*=\s*(\S+)", line)
            if not m or record is not None:
                raise CircuitError("usage: POSTSELECT name = 0|1", ln)
            if m.group(2) not in ("0", "1"):
                raise CircuitError(f"post-selected value must be 0 or 1, got {m.group(2)!r}", ln)
            ins = Instruction(Postselect(Z1, int(m.group(2))), (), source=m.group(1), line=ln)
        else:
            raise CircuitError(f"unknown mnemonic {op!r}", ln)
        instructions.append(ins)
    if n_qubits is None:
        raise CircuitError("missing 'qubits N' header")
    return Circuit(n_qubits, instructions)


def format_instruction(ins: Instruction) -> str:
    el = ins.element
    qs = " ".join(str(q) for q in ins.qubits)
    if isinstance(el, Kind):
        return f"{_MNEMONIC.get(el, el.value)} {qs}"
    if isinstance(el, MeasureObservable):
        if not el.keep and el.point == Z1 and el.c == 0:
            return f"MZ {qs} -> {ins.record}"
        if el.keep:
            return f"MEASURE {PauliObservable(el.point, el.c)} {qs} -> {ins.record}"
    if isinstance(el, Postselect) and ins.source is not None:
        return f"POSTSELECT {ins.source} = {el.c}"
    raise ValueError(f"instruction {ins!r} has no text form")


def format_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n_qubits}"] + [format_instruction(i) for i in c.instructions]
    return "\n".join(lines) + "\n"


def load(path) -> Circuit:
    with open(path) as f:
        return parse(f.read())


def make_circuit(n_qubits: int, ops: Sequence[tuple]) -> Circuit:
    """Build from tuples such as ``("H", 0)``, ``("MZ", 0, "m")`` or ``("MEASURE", "+ZZ", 0, 1, "m")``."""
    lines = [f"qubits {n_qubits}"]
    for op in ops:
        name, *rest = op
        if name in ("MZ", "MEASURE"):
            *args, rec = rest
            lines.append(f"{name} {' '.join(map(str, args))} -> {rec}")
        elif name == "POSTSELECT":
            lines.append(f"POSTSELECT {rest[0]} = {rest[1]}")
        else:
            lines.append(f"{name} {' '.join(map(str, rest))}")
    return parse("\n".join(lines))
