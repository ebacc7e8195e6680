"""Per-gate cost of local Clifford updates versus full tableau composition.

    python scripts/cost_model.py --qubits 250 500 1000 --gates 100000
"""

from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass, field
from typing import List

from chantab.columns import ColumnTableau, LocalGate
from chantab.randomcircuit import random_clifford_tableau
from chantab.tableau import compose, embed, identity


@dataclass
class CostConfig:
    qubits: List[int] = field(default_factory=lambda: [250, 500, 1000])
    gates: int = 100_000
    two_qubit_fraction: float = 0.5
    compose_qubits: List[int] = field(default_factory=lambda: [8, 16, 32])
    compose_gates: int = 50
    seed: int = 7


def gate_pool(rng: random.Random):
    ones = [LocalGate.from_tableau(random_clifford_tableau(rng, 1)) for _ in range(24)]
    twos = [(random_clifford_tableau(rng, 2)) for _ in range(200)]
    return ones, [LocalGate.from_tableau(t) for t in twos], twos


def time_fast(cfg: CostConfig, n: int, ones, twos) -> float:
    rng = random.Random(cfg.seed + n)
    ops = []
    for _ in range(cfg.gates):
        g = rng.choice(twos) if rng.random() < cfg.two_qubit_fraction else rng.choice(ones)
        ops.append((g, rng.sample(range(n), g.m)))
    ct = ColumnTableau.zero_state(n)
    t0 = time.perf_counter()
    for g, targets in ops:
        ct.apply(g, targets)
    return (time.perf_counter() - t0) / cfg.gates


def time_compose(cfg: CostConfig, n: int, tableaux) -> float:
    rng = random.Random(cfg.seed)
    state = identity(n)
    t0 = time.perf_counter()
    for _ in range(cfg.compose_gates):
        g = rng.choice(tableaux)
        state = compose(embed(g, rng.sample(range(n), 2), n), state)
    return (time.perf_counter() - t0) / cfg.compose_gates


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--qubits", type=int, nargs="+", default=CostConfig().qubits)
    ap.add_argument("--gates", type=int, default=CostConfig.gates)
    ap.add_argument("--seed", type=int, default=CostConfig.seed)
    args = ap.parse_args()
    cfg = CostConfig(qubits=args.qubits, gates=args.gates, seed=args.seed)
    ones, twos, raw = gate_pool(random.Random(cfg.seed))

    print("local update (column-packed state tableau)")
    print(f"{'qubits':>8} {'us/gate':>10} {'ratio':>7}")
    prev = None
    for n in cfg.qubits:
        t = time_fast(cfg, n, ones, twos)
        ratio = f"{t / prev:.2f}" if prev else "-"
        print(f"{n:>8} {1e6 * t:>10.2f} {ratio:>7}")
        prev = t

    print("\nfull composition with an embedded gate (channel tableau on n -> n)")
    print(f"{'qubits':>8} {'ms/gate':>10}")
    for n in cfg.compose_qubits:
        print(f"{n:>8} {1e3 * time_compose(cfg, n, raw):>10.2f}")


if __name__ == "__main__":
    main()
