"""Sub-space Bayesian optimization for high-dimensional black boxes.

The dimensions of the search box are partitioned into disjoint sub-spaces,
each carrying a finite grid and a belief distribution over its rows. Every
sweep, each sub-space freezes the other dimensions at draws from the joint
belief, minimizes the resulting low-dimensional objective with grid-restricted
Bayesian optimization (Gaussian-process surrogate, expected improvement), and
folds its winning row back into its belief. The evaluated composite points
drive the reported optimum.
"""

from .acquisition import AcquisitionResult, argmax_ei_on_grid, expected_improvement
from .belief import (
    BeliefVector,
    ComplementSampleSet,
    init_uniform,
    joint_density,
    sample_complement,
    update,
)
from .domain import (
    CompositePoint,
    SubspaceGrid,
    SubspacePartition,
    build_grid,
    compose_point,
    decompose_point,
    partition_dimensions,
)
from .driver import BofipConfig, RunRecord, record_best, run_bofip
from .engine import BoOutcome, SubProblem, evaluate_subproblem, run_bo
from .errors import (
    BofipError,
    BoundsIndexError,
    ConfigurationError,
    EvaluationError,
    GridExhaustedError,
    IllConditionedModelError,
    InputError,
    InvalidParameterError,
    ParseError,
    SchemaError,
)
from .harness import (
    ExperimentConfig,
    MetricsSummary,
    emit_trace,
    read_trace,
    run_experiment,
)
from .neural import (
    Dataset,
    NnArchitecture,
    load_dataset,
    make_architecture,
    make_nn_problem,
    nn_mse_objective,
)
from .objectives import (
    BenchmarkProblem,
    make_problem,
    problem_names,
    repeated_branin,
    repeated_hartmann,
    shifted_ackley,
)
from .surrogate import GpConfig, GpModel, Prediction, correlation, fit, predict

__version__ = "0.1.0"

__all__ = [
    "AcquisitionResult",
    "BeliefVector",
    "BenchmarkProblem",
    "BoOutcome",
    "BofipConfig",
    "BofipError",
    "BoundsIndexError",
    "CompositePoint",
    "ComplementSampleSet",
    "ConfigurationError",
    "Dataset",
    "EvaluationError",
    "ExperimentConfig",
    "GpConfig",
    "GpModel",
    "GridExhaustedError",
    "IllConditionedModelError",
    "InputError",
    "InvalidParameterError",
    "MetricsSummary",
    "NnArchitecture",
    "ParseError",
    "Prediction",
    "RunRecord",
    "SchemaError",
    "SubProblem",
    "SubspaceGrid",
    "SubspacePartition",
    "argmax_ei_on_grid",
    "build_grid",
    "compose_point",
    "correlation",
    "decompose_point",
    "emit_trace",
    "evaluate_subproblem",
    "expected_improvement",
    "fit",
    "init_uniform",
    "joint_density",
    "load_dataset",
    "make_architecture",
    "make_nn_problem",
    "make_problem",
    "nn_mse_objective",
    "partition_dimensions",
    "predict",
    "problem_names",
    "read_trace",
    "record_best",
    "repeated_branin",
    "repeated_hartmann",
    "run_bo",
    "run_bofip",
    "run_experiment",
    "sample_complement",
    "shifted_ackley",
    "update",
]
