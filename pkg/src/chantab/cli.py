"""Command line front end.

Exit codes: 0 ok, 1 usage, 2 parse error, 3 infeasible post-selection,
4 verification mismatch.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

import numpy as np

from .circuit import Circuit, CircuitError, load
from .diagram import ChannelAccumulate, GreedyMinWidth, Sequential, from_circuit
from .gf2core import BitVector
from .simulate import SimulationError, distribution, final_classical_tableau, strong_prob, weak_sample
from .tableau import InfeasibleError, format_tableau

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_MISMATCH = 0, 1, 2, 3, 4

STRATEGY_NAMES = {"seq": Sequential, "chan": ChannelAccumulate, "greedy": GreedyMinWidth}

EPILOG = """\
Outcome bit strings list the surviving measurement records in statement
order (not qubit order); records consumed by POSTSELECT are left out.
Qubits still alive at the end are traced out by prob and sample.
Exit codes: 0 ok, 1 usage, 2 parse error, 3 infeasible or zero-probability
post-selection, 4 verification mismatch.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="chantab",
        description="Stabilizer-tableau simulation of Clifford circuits.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def strategy(sp):
        sp.add_argument("--strategy", choices=sorted(STRATEGY_NAMES), default="seq")

    sp = sub.add_parser("prob", help="exact probability of one outcome string", epilog=EPILOG,
                        formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("file")
    sp.add_argument("--outcome", required=True, help="bits, one per surviving record in statement order")
    strategy(sp)

    sp = sub.add_parser("sample", help="draw outcome strings", epilog=EPILOG,
                        formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("file")
    sp.add_argument("--shots", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    strategy(sp)

    sp = sub.add_parser("channel", help="canonical tableau of the whole circuit")
    sp.add_argument("file")
    strategy(sp)
    sp.add_argument("--human", action="store_true", help="print rows as Pauli strings")
    sp.add_argument("--dump-diagram", action="store_true", help="print the diagram before contracting")

    sp = sub.add_parser("verify", help="compare against the dense oracle")
    sp.add_argument("file")
    sp.add_argument("--max-qubits", type=int, default=8)
    return p


def _bits(text: str) -> BitVector:
    if any(ch not in "01" for ch in text):
        raise UsageError(f"outcome {text!r} is not a bit string")
    return BitVector.from_str(text)


def _cmd_prob(args, circ: Circuit) -> int:
    x = _bits(args.outcome)
    n = len(circ.output_records())
    if x.length != n:
        raise UsageError(f"outcome has {x.length} bits but the circuit has {n} output records")
    p = strong_prob(final_classical_tableau(circ, STRATEGY_NAMES[args.strategy]()), x)
    print(f"p = {p} (= {p.decimal()})")
    return EXIT_OK


def _cmd_sample(args, circ: Circuit) -> int:
    if args.shots < 0:
        raise UsageError("--shots must be nonnegative")
    for x in weak_sample(circ, args.shots, args.seed, STRATEGY_NAMES[args.strategy]()):
        print(x)
    return EXIT_OK


def _cmd_channel(args, circ: Circuit) -> int:
    from .diagram import contract_all

    d = from_circuit(circ)
    if args.dump_diagram:
        print(d.dump(), end="")
    t = contract_all(d, STRATEGY_NAMES[args.strategy]())
    print(format_tableau(t, human=args.human), end="")
    return EXIT_OK


def _cmd_verify(args, circ: Circuit) -> int:
    from .diagram import circuit_channel
    from .oracle import OracleSizeError, circuit_distribution, ptm_of_circuit, ptm_of_tableau

    wires = len(circ.open_qubits()) + len(circ.output_records()) + len(circ.live_qubits())
    if wires > args.max_qubits:
        raise UsageError(f"circuit has {wires} boundary wires, above --max-qubits {args.max_qubits}")
    try:
        t = circuit_channel(circ)
        dense = ptm_of_circuit(circ)
        mine = ptm_of_tableau(t)
    except OracleSizeError as exc:
        raise UsageError(str(exc)) from None
    ok, note = _same_ptm(mine, dense, scaled=circ.has_postselection())
    print(f"ptm: {'match' if ok else 'MISMATCH'}{note}")
    if ok and not circ.open_qubits():
        probs = distribution(final_classical_tableau(circ))
        oracle = circuit_distribution(circ)
        worst = max(abs(float(probs.get(k, 0)) - v) for k, v in oracle.items())
        ok = worst < 1e-9
        print(f"distribution: {'match' if ok else 'MISMATCH'} (max |dp| = {worst:.3g})")
    return EXIT_OK if ok else EXIT_MISMATCH


def _same_ptm(mine: np.ndarray, dense: np.ndarray, scaled: bool):
    if mine.shape != dense.shape:
        return False, f" (shapes {mine.shape} vs {dense.shape})"
    if not scaled:
        return bool(np.allclose(mine, dense, atol=1e-9)), ""
    # post-selection: tableaux carry no overall scalar, compare up to a positive factor
    idx = np.unravel_index(np.argmax(np.abs(dense)), dense.shape)
    if abs(dense[idx]) < 1e-12 or abs(mine[idx]) < 1e-12:
        return False, " (zero map)"
    k = dense[idx] / mine[idx]
    return bool(k > 0 and np.allclose(k * mine, dense, atol=1e-9)), f" (up to factor {k:g})"


COMMANDS = {"prob": _cmd_prob, "sample": _cmd_sample, "channel": _cmd_channel, "verify": _cmd_verify}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"chantab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        circ = load(args.file)
    except OSError as exc:
        print(f"chantab: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    except CircuitError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return COMMANDS[args.command](args, circ)
    except UsageError as exc:
        print(f"chantab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleError as exc:
        print(f"chantab: infeasible: {exc} (post-selection has probability zero)", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SimulationError as exc:
        print(f"chantab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
