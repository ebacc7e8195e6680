"""Empirical outcome frequencies from weak simulation against exact probabilities.

    python scripts/bell_sampling.py tests/fixtures/bell.scf --shots 10000 --seed 7
"""

from __future__ import annotations

import argparse
import math
from collections import Counter
from dataclasses import dataclass

from chantab.circuit import load
from chantab.simulate import distribution, final_classical_tableau, weak_sample


@dataclass
class SamplingConfig:
    path: str = "tests/fixtures/bell.scf"
    shots: int = 10_000
    seed: int = 7


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("path", nargs="?", default=SamplingConfig.path)
    ap.add_argument("--shots", type=int, default=SamplingConfig.shots)
    ap.add_argument("--seed", type=int, default=SamplingConfig.seed)
    args = ap.parse_args()
    cfg = SamplingConfig(args.path, args.shots, args.seed)

    circ = load(cfg.path)
    exact = distribution(final_classical_tableau(circ))
    counts = Counter(str(x) for x in weak_sample(circ, cfg.shots, cfg.seed))
    print(f"{'outcome':>10} {'exact':>10} {'observed':>10} {'z':>7}")
    for bits in sorted(set(exact) | set(counts)):
        p = float(exact[bits]) if bits in exact else 0.0
        f = counts[bits] / cfg.shots
        sigma = math.sqrt(p * (1 - p) / cfg.shots) if 0 < p < 1 else 0.0
        z = (f - p) / sigma if sigma else 0.0
        print(f"{bits:>10} {p:>10.4f} {f:>10.4f} {z:>7.2f}")


if __name__ == "__main__":
    main()
