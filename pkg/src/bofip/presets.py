"""Ready-made experiment configurations.

Desk-scale presets finish in a few minutes per replication and are what the
test suite exercises. Full-scale presets keep the long wall-clock limits
(0.5 h to 24 h per replication) and 100 replications; they are expensive and
meant for overnight benchmark machines, not CI.

Single-draw complements (``n_complements=1``) keep the search from freezing:
averaged complements plus a growing warm start can spend the whole budget
re-scoring old winners, leaving no room for improvement steps.
"""

from __future__ import annotations

from .driver import BofipConfig
from .harness import ExperimentConfig
from .surrogate import GpConfig

_FAST_GP = GpConfig(restarts=2, maxiter=20)


def desk_repeated_branin(outdir="results/desk_branin", base_seed=0) -> ExperimentConfig:
    return ExperimentConfig(
        problem="repeated_branin",
        d=20,
        bofip=BofipConfig(
            p=10,
            n_g=64,
            sweeps=40,
            bo_budget=32,
            n_complements=1,
            gp=_FAST_GP,
        ),
        replications=5,
        wall_clock_limit=600.0,
        outdir=outdir,
        base_seed=base_seed,
    )


def desk_shifted_ackley(outdir="results/desk_ackley", base_seed=0) -> ExperimentConfig:
    return ExperimentConfig(
        problem="shifted_ackley",
        d=20,
        bofip=BofipConfig(
            p=10,
            n_g=64,
            sweeps=40,
            bo_budget=32,
            n_complements=1,
            gp=_FAST_GP,
        ),
        replications=5,
        wall_clock_limit=600.0,
        outdir=outdir,
        base_seed=base_seed,
    )


def desk_repeated_hartmann(
    outdir="results/desk_hartmann", base_seed=0
) -> ExperimentConfig:
    return ExperimentConfig(
        problem="repeated_hartmann",
        d=18,
        bofip=BofipConfig(
            p=6,
            n_g=64,
            sweeps=30,
            bo_budget=32,
            n_complements=1,
            gp=_FAST_GP,
        ),
        replications=5,
        wall_clock_limit=600.0,
        outdir=outdir,
        base_seed=base_seed,
    )


def desk_nn_502(dataset, outdir="results/desk_nn502", base_seed=0) -> ExperimentConfig:
    return ExperimentConfig(
        problem="nn_502",
        d=502,
        bofip=BofipConfig(
            p=50,
            n_g=32,
            sweeps=3,
            bo_budget=32,
            n_complements=1,
            gp=_FAST_GP,
        ),
        replications=3,
        wall_clock_limit=1800.0,
        outdir=outdir,
        base_seed=base_seed,
        dataset=str(dataset),
    )


def full_repeated_branin(d=20, outdir="results/full_branin", base_seed=0):
    limits = {20: 1800.0, 50: 3600.0, 100: 9000.0, 1000: 86400.0}
    return ExperimentConfig(
        problem="repeated_branin",
        d=d,
        bofip=BofipConfig(
            p=d // 2,
            n_g=64,
            sweeps=100_000,  # wall clock is the binding stop
            bo_budget=32,
            n_complements=1,
            gp=_FAST_GP,
        ),
        replications=100,
        wall_clock_limit=limits.get(d, 1800.0),
        outdir=outdir,
        base_seed=base_seed,
    )


DESK_SUITE = {
    "repeated_branin": desk_repeated_branin,
    "shifted_ackley": desk_shifted_ackley,
    "repeated_hartmann": desk_repeated_hartmann,
}
