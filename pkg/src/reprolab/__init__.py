"""reprolab: how reproducible is first-order convex optimization?

A measurement laboratory for the deviation between two runs of a
first-order method when its gradient or initialization oracle carries
bounded errors.  The package bundles the adversarial cost instances
that force worst-case deviation, the step/averaging schedules that
achieve the matching guarantees, a paired-run Monte-Carlo harness with
log-log slope fits against the expected exponents, and exact
structural-identity checks on the adversarial constructions.
"""

from .core import (
    ConfigError,
    ContractViolationError,
    DimensionMismatchError,
    InsufficientDataError,
    InvalidInputError,
    MissingParameterError,
    ReproLabError,
    ResourceBudgetError,
    RngState,
    ScheduleExhaustedError,
    UnknownScenarioError,
    UnsupportedError,
    derive_rng,
    norm,
    project_ball,
)
from .costs import (
    CostFunction,
    FiniteSum,
    RegularityMeta,
    ThetaFamily,
    eval_helper_F,
    eval_helper_G,
    finite_sum_eval,
    theta_cost,
)
from .oracles import (
    NoiseSchedule,
    OracleSpec,
    SampledFunction,
    component_gradient,
    global_sample,
    inexact_init,
    nonstochastic_gradient,
    stochastic_gradient,
)
from .scenarios import SCENARIOS, Instance, build_instance, catalog
from .solvers import (
    AveragingScheme,
    CoefficientMatrix,
    RunResult,
    SolverConfig,
    StepSchedule,
    average_iterates,
    eta_at,
    gd_step,
    run_foi,
    run_general_foi,
)
from .lab import (
    EXPECTED_SLOPES,
    DeviationEstimate,
    InvariantReport,
    ScalingFit,
    SweepTable,
    fit_scaling,
    measure_accuracy,
    measure_deviation,
    sweep,
    verify_invariant,
)

__version__ = "0.1.0"
