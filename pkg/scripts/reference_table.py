#!/usr/bin/env python3
"""Print the classical reference eigenvalues and interconversion rates.

Covers the composite bases used throughout: the 2-qubit register at low and
high reactive barriers and the nested 3- and 4-qubit registers.
"""

import argparse

from rotorvqe import (
    BISTABLE,
    MONOSTABLE,
    ChainSpec,
    DihedralSpec,
    build_chain_matrix,
    build_composite_basis,
    rate_constant,
    reference_spectrum,
)

LADDER = ((4, 2), (4, 4), (8, 4))

CASES = (
    (0.5, (4, 2), None),
    (0.5, (4, 4), LADDER[:2]),
    (0.5, (8, 4), LADDER),
    (3.0, (4, 2), None),
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--harmonics", type=int, default=16, help="dihedral basis size")
    args = parser.parse_args()

    print(f"{'barrier':>7}  {'kept':>6}  {'size':>4}  {'qubits':>6}  {'lambda1':>10}  {'rate':>10}")
    for barrier, kept, ladder in CASES:
        chain = ChainSpec(
            dihedrals=(DihedralSpec(BISTABLE, barrier), DihedralSpec(MONOSTABLE, 1.0)),
            diffusion=(1.0, 1.0, 1.0),
        )
        basis = build_composite_basis(chain, kept, harmonics=args.harmonics, ladder=ladder)
        value = float(reference_spectrum(build_chain_matrix(basis))[0][0])
        kept_text = "/".join(str(c) for c in kept)
        print(
            f"{barrier:7.2f}  {kept_text:>6}  {len(basis.states):>4}  {basis.qubits:>6}"
            f"  {value:10.5f}  {rate_constant(value):10.5f}"
        )


if __name__ == "__main__":
    main()
