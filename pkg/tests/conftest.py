"""Shared fixtures: full-protocol restart ensembles are computed once per session.

The ensemble fixtures run the production protocol (600 SPSA iterations,
60 restarts, calibrated gains, master seed 2021) so the statistical
guarantees they check are the ones a user of the default configuration
actually gets.  They are session-scoped because several test modules
interrogate the same ensembles.
"""

import pytest

from rotorvqe.driver import VqeConfig, build_problem, run_ensemble
from rotorvqe.potential import BISTABLE, MONOSTABLE, ChainSpec, DihedralSpec

MASTER_SEED = 2021
LADDER = ((4, 2), (4, 4), (8, 4))


def make_chain(barrier: float = 0.5, flat_barrier: float = 1.0) -> ChainSpec:
    """Three-rotor chain: one bistable (reactive) and one monostable dihedral."""
    return ChainSpec(
        dihedrals=(
            DihedralSpec(BISTABLE, barrier),
            DihedralSpec(MONOSTABLE, flat_barrier),
        ),
        diffusion=(1.0, 1.0, 1.0),
    )


def production_config(barrier: float = 0.5, kept=(4, 2), ladder=None) -> VqeConfig:
    return VqeConfig(
        chain=make_chain(barrier),
        kept_counts=kept,
        ladder=ladder,
        iterations=600,
        restarts=60,
        seed=MASTER_SEED,
    )


@pytest.fixture(scope="session")
def q2_problem():
    return build_problem(make_chain(), (4, 2))


@pytest.fixture(scope="session")
def q2_stats(q2_problem):
    return run_ensemble(production_config(), q2_problem)


@pytest.fixture(scope="session")
def q2_high_barrier_stats():
    return run_ensemble(production_config(barrier=3.0))


@pytest.fixture(scope="session")
def q3_stats():
    return run_ensemble(production_config(kept=(4, 4), ladder=LADDER[:2]))


@pytest.fixture(scope="session")
def q4_stats():
    return run_ensemble(production_config(kept=(8, 4), ladder=LADDER))
