#!/usr/bin/env python3
"""Ensemble accuracy along the nested basis ladder (2, 3, 4 qubits).

Shows how a fixed-depth circuit loses ground as the register grows: the
ensemble mean error increases with qubit count even though the classical
reference barely moves.
"""

import argparse

from rotorvqe import ChainSpec, DihedralSpec, VqeConfig, run_qubit_scan
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
    print(f"{'kept':>6}  {'ref':>9}  {'min':>9}  {'avg':>9}  {'eps_min%':>8}  {'eps_avg%':>8}")
    for kept, stats in run_qubit_scan(config, LADDER):
        kept_text = "/".join(str(c) for c in kept)
        print(
            f"{kept_text:>6}  {stats.reference:9.5f}  {stats.minimum:9.5f}"
            f"  {stats.mean:9.5f}  {stats.eps_min:8.4f}  {stats.eps_avg:8.4f}"
        )


if __name__ == "__main__":
    main()
