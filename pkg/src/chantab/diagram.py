"""Circuits as diagrams of tableaux and their contraction.

A vertex is a tableau with numbered input and output ports. An edge carries
one qubit from an output port to an input port; wires that leave the
diagram are listed in ``inputs`` / ``outputs`` as ``(vertex, port)``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .circuit import Circuit, format_instruction
from .elements import Kind, element_tableau
from .tableau import ChannelTableau, canonicalize, contract, reorder, tensor

Port = Tuple[int, int]


@dataclass(frozen=True)
class Edge:
    src: int
    src_port: int
    dst: int
    dst_port: int


@dataclass(frozen=True)
class Sequential:
    """Absorb vertices one by one in topological order into a growing frontier."""


@dataclass(frozen=True)
class ChannelAccumulate:
    """Contract every non-preparation vertex into one channel, then feed it the preparations."""


@dataclass(frozen=True)
class GreedyMinWidth:
    """Contract the edge giving the narrowest merged vertex; ties go to the lowest edge id."""


@dataclass(frozen=True)
class Explicit:
    """Contract the listed edge ids in order, then absorb what is left in topological order."""

    order: Tuple[int, ...]


Strategy = Union[Sequential, ChannelAccumulate, GreedyMinWidth, Explicit]

STRATEGIES = {"seq": Sequential(), "chan": ChannelAccumulate(), "greedy": GreedyMinWidth()}


class DiagramError(ValueError):
    pass


@dataclass
class Diagram:
    vertices: Dict[int, ChannelTableau] = field(default_factory=dict)
    edges: Dict[int, Edge] = field(default_factory=dict)
    inputs: List[Port] = field(default_factory=list)
    outputs: List[Port] = field(default_factory=list)
    labels: Dict[int, str] = field(default_factory=dict)
    input_labels: List[str] = field(default_factory=list)
    output_labels: List[str] = field(default_factory=list)
    next_vertex: int = 0
    next_edge: int = 0

    def copy(self) -> "Diagram":
        return Diagram(
            dict(self.vertices),
            dict(self.edges),
            list(self.inputs),
            list(self.outputs),
            dict(self.labels),
            list(self.input_labels),
            list(self.output_labels),
            self.next_vertex,
            self.next_edge,
        )

    def add_vertex(self, t: ChannelTableau, label: str = "") -> int:
        v = self.next_vertex
        self.next_vertex += 1
        self.vertices[v] = t
        self.labels[v] = label
        return v

    def add_edge(self, src: int, src_port: int, dst: int, dst_port: int) -> int:
        e = self.next_edge
        self.next_edge += 1
        self.edges[e] = Edge(src, src_port, dst, dst_port)
        return e

    def successors(self, v: int) -> set:
        return {e.dst for e in self.edges.values() if e.src == v}

    def has_path(self, a: int, b: int, skip_direct: bool = False) -> bool:
        """Directed path ``a -> ... -> b``; with ``skip_direct``, ignore one-edge paths."""
        succ: Dict[int, set] = {}
        for e in self.edges.values():
            succ.setdefault(e.src, set()).add(e.dst)
        start = [s for s in succ.get(a, ()) if not (skip_direct and s == b)]
        seen = set(start)
        stack = list(start)
        while stack:
            x = stack.pop()
            if x == b:
                return True
            for y in succ.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return False

    def topological_order(self) -> List[int]:
        indeg = {v: 0 for v in self.vertices}
        succ: Dict[int, List[int]] = {v: [] for v in self.vertices}
        for e in self.edges.values():
            indeg[e.dst] += 1
            succ[e.src].append(e.dst)
        heap = [v for v, d in indeg.items() if d == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for w in succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        if len(order) != len(self.vertices):
            raise DiagramError("diagram has a cycle")
        return order

    def check(self) -> None:
        """Every port is used exactly once and the graph is acyclic."""
        used_in: Dict[Port, int] = {}
        used_out: Dict[Port, int] = {}
        for e in self.edges.values():
            for v in (e.src, e.dst):
                if v not in self.vertices:
                    raise DiagramError(f"edge refers to missing vertex {v}")
            used_out[(e.src, e.src_port)] = used_out.get((e.src, e.src_port), 0) + 1
            used_in[(e.dst, e.dst_port)] = used_in.get((e.dst, e.dst_port), 0) + 1
        for p in self.inputs:
            used_in[p] = used_in.get(p, 0) + 1
        for p in self.outputs:
            used_out[p] = used_out.get(p, 0) + 1
        for v, t in self.vertices.items():
            for i in range(t.n_in):
                if used_in.pop((v, i), 0) != 1:
                    raise DiagramError(f"input {i} of vertex {v} is not used exactly once")
            for o in range(t.n_out):
                if used_out.pop((v, o), 0) != 1:
                    raise DiagramError(f"output {o} of vertex {v} is not used exactly once")
        if used_in or used_out:
            raise DiagramError("dangling ports")
        self.topological_order()

    def dump(self) -> str:
        """Line-oriented listing, for debugging only."""
        lines = []
        for v in sorted(self.vertices):
            t = self.vertices[v]
            lines.append(f"vertex {v} [{self.labels.get(v, '')}] in={t.n_in} out={t.n_out} rows={t.n_rows}")
        for eid in sorted(self.edges):
            e = self.edges[eid]
            lines.append(f"edge {eid} {e.src}:{e.src_port} -> {e.dst}:{e.dst_port}")
        for k, (v, p) in enumerate(self.inputs):
            lines.append(f"input {k} {self.input_labels[k]} -> {v}:{p}")
        for k, (v, p) in enumerate(self.outputs):
            lines.append(f"output {k} {self.output_labels[k]} <- {v}:{p}")
        return "\n".join(lines) + "\n"


def from_circuit(c: Circuit, trace_out_live: bool = False) -> Diagram:
    """One vertex per instruction; wires follow the qubit timelines.

    Boundary inputs are the open qubits (ascending). Boundary outputs are the
    unconsumed records in statement order followed by the live qubits in
    ascending order; ``trace_out_live`` appends a discard to each live qubit
    instead.
    """
    d = Diagram()
    wire: Dict[int, Port] = {}
    record: Dict[str, Port] = {}
    open_inputs: Dict[int, Port] = {}
    for ins in c.instructions:
        t = element_tableau(ins.element)
        label = format_instruction(ins)
        v = d.add_vertex(t, label)
        if ins.source is not None:
            src = record.pop(ins.source)
            d.add_edge(src[0], src[1], v, 0)
            continue
        for port, q in enumerate(ins.qubits[: t.n_in]):
            if q in wire:
                src = wire.pop(q)
                d.add_edge(src[0], src[1], v, port)
            else:
                open_inputs[q] = (v, port)
        if ins.record is not None:
            # destructive measurements turn the wire into the record;
            # keeping ones put the record after the pass-through qubits
            if t.n_out == 1:
                record[ins.record] = (v, 0)
            else:
                for port, q in enumerate(ins.qubits):
                    wire[q] = (v, port)
                record[ins.record] = (v, t.n_out - 1)
        else:
            for port, q in enumerate(ins.qubits[: t.n_out]):
                wire[q] = (v, port)
    for q in sorted(open_inputs):
        d.inputs.append(open_inputs[q])
        d.input_labels.append(f"q{q}")
    for name in c.records():
        if name in record:
            d.outputs.append(record[name])
            d.output_labels.append(name)
    for q in sorted(wire):
        if trace_out_live:
            v = d.add_vertex(element_tableau(Kind.DISCARD), Kind.DISCARD.value)
            d.add_edge(wire[q][0], wire[q][1], v, 0)
        else:
            d.outputs.append(wire[q])
            d.output_labels.append(f"q{q}")
    return d


# rewriting ---------------------------------------------------------------------


def _relink(d: Diagram, old: int, port_map: Dict[int, int], new: int, side: str) -> None:
    """Point edges/boundary entries at ``old`` (on ``side``) to ``new`` via ``port_map``."""
    for eid, e in list(d.edges.items()):
        if side == "in" and e.dst == old:
            d.edges[eid] = Edge(e.src, e.src_port, new, port_map[e.dst_port])
        elif side == "out" and e.src == old:
            d.edges[eid] = Edge(new, port_map[e.src_port], e.dst, e.dst_port)
    ports = d.inputs if side == "in" else d.outputs
    for k, (v, p) in enumerate(ports):
        if v == old:
            ports[k] = (new, port_map[p])


def _contract_inplace(d: Diagram, eid: int) -> int:
    if eid not in d.edges:
        raise DiagramError(f"no edge {eid}")
    e = d.edges[eid]
    u, v = e.src, e.dst
    if d.has_path(u, v, skip_direct=True):
        raise DiagramError(f"contracting edge {eid} would create a cycle")
    shared = sorted((k for k, x in d.edges.items() if x.src == u and x.dst == v))
    pairs = [(d.edges[k].src_port, d.edges[k].dst_port) for k in shared]
    tu, tv = d.vertices[u], d.vertices[v]
    t = contract(tu, tv, pairs)
    for k in shared:
        del d.edges[k]
    paired_out = {p for p, _ in pairs}
    paired_in = {p for _, p in pairs}
    rest_out = [o for o in range(tu.n_out) if o not in paired_out]
    rest_in = [i for i in range(tv.n_in) if i not in paired_in]
    w = d.add_vertex(t, f"({d.labels.get(u, '')}*{d.labels.get(v, '')})")
    _relink(d, u, {i: i for i in range(tu.n_in)}, w, "in")
    _relink(d, v, {i: tu.n_in + k for k, i in enumerate(rest_in)}, w, "in")
    _relink(d, u, {o: k for k, o in enumerate(rest_out)}, w, "out")
    _relink(d, v, {o: len(rest_out) + o for o in range(tv.n_out)}, w, "out")
    for x in (u, v):
        del d.vertices[x]
        d.labels.pop(x, None)
    return w


def _merge_inplace(d: Diagram, v1: int, v2: int) -> int:
    if v1 == v2 or v1 not in d.vertices or v2 not in d.vertices:
        raise DiagramError("merge needs two distinct live vertices")
    if d.has_path(v1, v2) or d.has_path(v2, v1):
        raise DiagramError(f"vertices {v1} and {v2} are connected by a path")
    t1, t2 = d.vertices[v1], d.vertices[v2]
    w = d.add_vertex(tensor(t1, t2), f"({d.labels.get(v1, '')}+{d.labels.get(v2, '')})")
    _relink(d, v1, {i: i for i in range(t1.n_in)}, w, "in")
    _relink(d, v2, {i: t1.n_in + i for i in range(t2.n_in)}, w, "in")
    _relink(d, v1, {o: o for o in range(t1.n_out)}, w, "out")
    _relink(d, v2, {o: t1.n_out + o for o in range(t2.n_out)}, w, "out")
    for x in (v1, v2):
        del d.vertices[x]
        d.labels.pop(x, None)
    return w


def contract_edge(d: Diagram, eid: int) -> Diagram:
    """Compose the two endpoints of ``eid`` over every edge they share."""
    out = d.copy()
    _contract_inplace(out, eid)
    return out


def merge_parallel(d: Diagram, v1: int, v2: int) -> Diagram:
    """Replace two unconnected vertices by their tensor product."""
    out = d.copy()
    _merge_inplace(out, v1, v2)
    return out


def _edge_between(d: Diagram, u: int, v: int) -> Optional[int]:
    ids = [k for k, e in d.edges.items() if e.src == u and e.dst == v]
    return min(ids) if ids else None


def _absorb_in_order(d: Diagram, order: Sequence[int]) -> Optional[int]:
    front = None
    for v in order:
        if front is None:
            front = v
            continue
        eid = _edge_between(d, front, v)
        front = _contract_inplace(d, eid) if eid is not None else _merge_inplace(d, front, v)
    return front


def _greedy(d: Diagram) -> None:
    while len(d.vertices) > 1:
        best = None
        seen_pairs = set()
        for eid in sorted(d.edges):
            e = d.edges[eid]
            if (e.src, e.dst) in seen_pairs:
                continue
            seen_pairs.add((e.src, e.dst))
            if d.has_path(e.src, e.dst, skip_direct=True):
                continue
            s = sum(1 for x in d.edges.values() if x.src == e.src and x.dst == e.dst)
            tu, tv = d.vertices[e.src], d.vertices[e.dst]
            cost = tu.n_in + tv.n_in + tu.n_out + tv.n_out - 2 * s
            if best is None or (cost, eid) < best:
                best = (cost, eid)
        if best is not None:
            _contract_inplace(d, best[1])
            continue
        vs = sorted(d.vertices)
        pair = min(
            ((a, b) for i, a in enumerate(vs) for b in vs[i + 1 :]),
            key=lambda ab: (
                d.vertices[ab[0]].n_in + d.vertices[ab[0]].n_out + d.vertices[ab[1]].n_in + d.vertices[ab[1]].n_out,
                ab,
            ),
        )
        _merge_inplace(d, *pair)


def contract_all(d: Diagram, strategy: Strategy = Sequential()) -> ChannelTableau:
    """Canonical tableau of the whole diagram, wires in boundary order.

    Raises :class:`~chantab.tableau.InfeasibleError` on contradictory post-selection.
    """
    work = d.copy()
    if isinstance(strategy, Sequential):
        _absorb_in_order(work, work.topological_order())
    elif isinstance(strategy, ChannelAccumulate):
        order = work.topological_order()
        preps = [v for v in order if work.vertices[v].n_in == 0]
        body = _absorb_in_order(work, [v for v in order if v not in set(preps)])
        init = _absorb_in_order(work, preps)
        if body is not None and init is not None:
            eid = _edge_between(work, init, body)
            if eid is not None:
                _contract_inplace(work, eid)
            else:
                _merge_inplace(work, init, body)
    elif isinstance(strategy, GreedyMinWidth):
        _greedy(work)
    elif isinstance(strategy, Explicit):
        for eid in strategy.order:
            _contract_inplace(work, eid)
        _absorb_in_order(work, work.topological_order())
    else:
        raise TypeError(f"unknown strategy {strategy!r}")
    if not work.vertices:
        return ChannelTableau.empty()
    (t,) = work.vertices.values()
    t = reorder(t, [p for _, p in work.inputs], [p for _, p in work.outputs])
    return canonicalize(t)


def circuit_channel(c: Circuit, strategy: Strategy = Sequential(), trace_out_live: bool = False) -> ChannelTableau:
    return contract_all(from_circuit(c, trace_out_live), strategy)
