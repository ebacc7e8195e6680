"""Contract random circuits under every strategy and compare with the dense oracle.

    python scripts/strategy_agreement.py --circuits 500 --seed 1
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

import numpy as np

from chantab.diagram import ChannelAccumulate, GreedyMinWidth, Sequential, circuit_channel
from chantab.oracle import ptm_of_circuit, ptm_of_tableau
from chantab.randomcircuit import RandomCircuitConfig, random_circuits


@dataclass
class AgreementConfig:
    circuits: int = 200
    seed: int = 1
    max_qubits: int = 4
    max_instructions: int = 12
    check_oracle: bool = True


STRATEGIES = {"seq": Sequential(), "chan": ChannelAccumulate(), "greedy": GreedyMinWidth()}


def run(cfg: AgreementConfig) -> dict:
    rc = RandomCircuitConfig(max_qubits=cfg.max_qubits, max_instructions=cfg.max_instructions)
    stats = {"circuits": 0, "agree": 0, "oracle_ok": 0}
    timing = {name: 0.0 for name in STRATEGIES}
    for c in random_circuits(cfg.circuits, cfg.seed, rc):
        results = []
        for name, s in STRATEGIES.items():
            t0 = time.perf_counter()
            results.append(circuit_channel(c, s))
            timing[name] += time.perf_counter() - t0
        stats["circuits"] += 1
        stats["agree"] += all(r == results[0] for r in results)
        if cfg.check_oracle:
            stats["oracle_ok"] += bool(np.allclose(ptm_of_tableau(results[0]), ptm_of_circuit(c), atol=1e-9))
    stats["timing"] = timing
    return stats


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--circuits", type=int, default=AgreementConfig.circuits)
    ap.add_argument("--seed", type=int, default=AgreementConfig.seed)
    ap.add_argument("--no-oracle", action="store_true")
    args = ap.parse_args()
    cfg = AgreementConfig(circuits=args.circuits, seed=args.seed, check_oracle=not args.no_oracle)
    stats = run(cfg)
    print(f"circuits: {stats['circuits']}")
    print(f"identical canonical tableaux across strategies: {stats['agree']}")
    if cfg.check_oracle:
        print(f"matching the dense PTM oracle: {stats['oracle_ok']}")
    for name, t in stats["timing"].items():
        print(f"  {name:>6}: {1e3 * t / max(stats['circuits'], 1):.2f} ms per circuit")


if __name__ == "__main__":
    main()
