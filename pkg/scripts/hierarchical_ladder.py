#!/usr/bin/env python3
"""Warm-started optimization up the basis ladder.

Each rung embeds the previous best parameters (the new qubit starts at zero
rotation, reproducing the smaller register's state exactly), so rung minima
never increase and the final rung inherits all earlier progress.
"""

import argparse
import math

from rotorvqe import ChainSpec, DihedralSpec, VqeConfig, run_hierarchical
from rotorvqe.potential import BISTABLE, MONOSTABLE

LADDER = ((4, 2), (4, 4), (8, 4))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--restarts", type=int, default=60)
    parser.add_argument("--iterations", type=int, default=600)
    parser.add_argument("--seed", type=int, default=2021)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    chain = ChainSpec(
        dihedrals=(DihedralSpec(BISTABLE, 0.5), DihedralSpec(MONOSTABLE, 1.0)),
        diffusion=(1.0, 1.0, 1.0),
    )
    config = VqeConfig(
        chain=chain,
        kept_counts=LADDER[0],
        iterations=args.iterations,
        restarts=args.restarts,
        seed=args.seed,
        workers=args.workers,
    )
    print(f"{'kept':>6}  {'qubits':>6}  {'start':>9}  {'best':>9}  {'ref':>9}  {'eps%':>7}")
    for rung in run_hierarchical(LADDER, config):
        kept_text = "/".join(str(c) for c in rung.kept_counts)
        start = "-" if math.isnan(rung.start_value) else f"{rung.start_value:9.5f}"
        eps = 100.0 * (rung.best_value - rung.reference) / rung.reference
        print(
            f"{kept_text:>6}  {rung.qubits:>6}  {start:>9}  {rung.best_value:9.5f}"
            f"  {rung.reference:9.5f}  {eps:7.4f}"
        )


if __name__ == "__main__":
    main()
