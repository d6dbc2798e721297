"""Memory-kernel learning for open qubit dynamics."""

from ._core import (
    Dataset,
    FitOutcome,
    LearnedModel,
    MemkernError,
    OptimOptions,
    Problem1Config,
    Problem2Config,
    Problem3Config,
    ProblemStructure,
    QuadratureConfig,
    RegConfig,
    SpectralDensityParams,
    TimeGrid,
    bench_solver,
    default_reg,
    dephasing_correlation,
    empirical_risk,
    fit,
    gamma,
    gen_problem1,
    gen_problem2,
    gen_problem3,
    hurwitz_zeta,
    read_dataset,
    run_cli,
    selftest,
    set_threads,
    structure_for_problem1,
    structure_for_problem2,
    structure_for_problem3,
    write_dataset,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
