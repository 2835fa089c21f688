"""Instance catalog: cost + matched error oracle + recommended solver.

Each scenario builds the exact cost of one adversarial construction or
benchmark family, the error oracle that goes with it, and the
first-order configuration whose deviation/accuracy trade-off the
harness is meant to verify.  Block layout conventions (0-indexed):

  smooth coordinate-noise instances   (err block, driving coordinate y)
  nonsmooth max instances             (err | y | z | w [| dummy])
  spread-init instances               (err | y | w | dummy)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np

from .core import (
    MissingParameterError,
    ResourceBudgetError,
    RngState,
    UnknownScenarioError,
)
from .costs import (
    CostFunction,
    FiniteSum,
    RegularityMeta,
    ThetaFamily,
    eval_helper_G,
    helper_f_derivative,
    helper_f_value,
    theta_cost,
)
from .oracles import NoiseSchedule, OracleSpec
from .solvers import AveragingScheme, SolverConfig, StepSchedule

__all__ = [
    "Instance",
    "ScenarioInfo",
    "SCENARIOS",
    "build_instance",
    "catalog",
    "DEFAULT_DIMENSION_BUDGET",
]

DEFAULT_DIMENSION_BUDGET = 32768


@dataclass(frozen=True)
class Instance:
    """A runnable experiment unit: cost, oracle, solver, start point."""

    cost: Any  # CostFunction | FiniteSum
    oracle: OracleSpec
    solver: SolverConfig
    init: np.ndarray
    scenario_id: str
    params: Mapping[str, Any]
    table_cell: str | None = None


@dataclass(frozen=True)
class ScenarioInfo:
    scenario_id: str
    required: tuple[str, ...]
    defaults: Mapping[str, Any]
    dim_formula: str
    table_cell: str | None
    citation: str
    builder: Callable[[dict], Instance] = field(repr=False, default=None)

    def describe(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "required_params": list(self.required),
            "optional_params": dict(self.defaults),
            "dim_formula": self.dim_formula,
            "table_cell": self.table_cell,
            "citation": self.citation,
        }


def _require(params: dict, names: tuple[str, ...], scenario: str) -> None:
    for n in names:
        if n not in params:
            raise MissingParameterError(f"scenario {scenario!r} needs parameter {n!r}")


def _check_budget(dim: int, params: dict) -> None:
    budget = int(params.get("max_dimension_budget", DEFAULT_DIMENSION_BUDGET))
    if dim > budget:
        raise ResourceBudgetError(
            f"instance dimension {dim} exceeds the budget {budget}"
        )


def _dim_guard(dim: int):
    from .core import DimensionMismatchError

    def guard(v: np.ndarray):
        if v.shape[0] != dim:
            raise DimensionMismatchError(f"expected dimension {dim}, got {v.shape[0]}")
    return guard


# ---------------------------------------------------------------------------
# smooth instances
# ---------------------------------------------------------------------------

def _ramp_cost(dim: int, eps: float, scenario_id: str,
               radius: float | None) -> CostFunction:
    """f(v) = 4*eps*ramp(y + 1) with y the last coordinate; dummy err block."""
    guard = _dim_guard(dim)
    a = 4.0 * eps

    def value(v):
        guard(v)
        return a * float(helper_f_value(v[-1] + 1.0))

    def subgrad(v):
        guard(v)
        g = np.zeros(dim)
        g[-1] = a * float(helper_f_derivative(v[-1] + 1.0))
        return g

    opt = np.zeros(dim)
    opt[-1] = -1.0
    return CostFunction(
        dim=dim, value=value, subgrad=subgrad,
        meta=RegularityMeta(smoothness_L=8.0 * eps, lipschitz_G=8.0 * eps,
                            strong_convexity_mu=0.0, domain_radius_D=radius),
        optimum=(opt, 0.0), scenario_id=scenario_id,
    )


def _build_smooth_sto_lb(params: dict) -> Instance:
    _require(params, ("epsilon", "T"), "smooth_sto_lb")
    eps, T = float(params["epsilon"]), int(params["T"])
    delta = float(params.get("delta", 0.0))
    dim = T + 1
    _check_budget(dim, params)
    cost = _ramp_cost(dim, eps, "smooth_sto_lb", radius=None)
    oracle = OracleSpec("stochastic_inexact",
                        NoiseSchedule("rademacher_coordinate", delta))
    solver = SolverConfig(
        schedule=StepSchedule("slowed", {"epsilon": eps, "T": T}),
        averaging=AveragingScheme("uniform"),
        iterations=T,
    )
    return Instance(cost, oracle, solver, np.zeros(dim), "smooth_sto_lb", params,
                    table_cell="smooth/stochastic")


def _build_smooth_det_lb(params: dict) -> Instance:
    _require(params, ("epsilon",), "smooth_det_lb")
    eps = float(params["epsilon"])
    delta = float(params.get("delta", 0.0))
    radius = float(params.get("D", 2.0))
    T = int(params.get("T", max(1, math.ceil(2.0 / eps))))
    cost = _ramp_cost(2, eps, "smooth_det_lb", radius=radius)
    # perturbation rides on the first coordinate, proportional to the
    # driving component of the gradient (bounded by 8*eps <= 1)
    oracle = OracleSpec("nonstochastic_inexact",
                        NoiseSchedule("gradient_proportional", delta,
                                      {"source": 1, "target": 0, "scale": 1.0}))
    solver = SolverConfig(
        schedule=StepSchedule("inverse_L", {"L": 8.0 * eps}),
        averaging=AveragingScheme("uniform"),
        iterations=T,
        projection_radius=radius,
    )
    return Instance(cost, oracle, solver, np.zeros(2), "smooth_det_lb", params,
                    table_cell="smooth/nonstochastic")


def _build_smooth_init_lb(params: dict) -> Instance:
    delta = float(params.get("delta", 0.0))
    T = int(params.get("T", 50))
    guard = _dim_guard(2)

    def value(v):
        guard(v)
        return float((v[1] - 1.0) ** 2)

    def subgrad(v):
        guard(v)
        return np.array([0.0, 2.0 * (v[1] - 1.0)])

    cost = CostFunction(
        dim=2, value=value, subgrad=subgrad,
        meta=RegularityMeta(smoothness_L=2.0),
        optimum=(np.array([0.0, 1.0]), 0.0), scenario_id="smooth_init_lb",
    )
    oracle = OracleSpec("inexact_init", NoiseSchedule("fixed_coordinate", delta))
    solver = SolverConfig(
        schedule=StepSchedule("inverse_L", {"L": 2.0}),
        averaging=AveragingScheme("last"),
        iterations=T,
    )
    return Instance(cost, oracle, solver, np.zeros(2), "smooth_init_lb", params,
                    table_cell="smooth/init")


def _linear_plus_square_cost(dim: int, mu: float, scenario_id: str) -> CostFunction:
    """f(v) = y + mu/2*y^2 + mu/2*||err||^2 with y the last coordinate."""
    guard = _dim_guard(dim)

    def value(v):
        guard(v)
        y = v[-1]
        return float(y + 0.5 * mu * y * y + 0.5 * mu * np.sum(v[:-1] * v[:-1]))

    def subgrad(v):
        guard(v)
        g = mu * v
        g = np.asarray(g, dtype=np.float64).copy()
        g[-1] += 1.0
        return g

    opt = np.zeros(dim)
    opt[-1] = -1.0 / mu
    return CostFunction(
        dim=dim, value=value, subgrad=subgrad,
        meta=RegularityMeta(smoothness_L=mu, strong_convexity_mu=mu),
        optimum=(opt, -0.5 / mu), scenario_id=scenario_id,
    )


def _build_smooth_str_lb(params: dict) -> Instance:
    _require(params, ("mu", "T"), "smooth_str_lb")
    mu, T = float(params["mu"]), int(params["T"])
    delta = float(params.get("delta", 0.0))
    dim = T + 1
    _check_budget(dim, params)
    cost = _linear_plus_square_cost(dim, mu, "smooth_str_lb")
    oracle = OracleSpec("stochastic_inexact",
                        NoiseSchedule("rademacher_coordinate", delta))
    solver = SolverConfig(
        schedule=StepSchedule("smooth_sc", {"L": mu, "mu": mu}),
        averaging=AveragingScheme("shifted_linear",
                                  {"k": math.ceil(4.0 * mu / mu)}),
        iterations=T,
    )
    return Instance(cost, oracle, solver, np.zeros(dim), "smooth_str_lb", params,
                    table_cell="smooth_sc/stochastic")


def _build_smooth_det_str_lb(params: dict) -> Instance:
    _require(params, ("mu",), "smooth_det_str_lb")
    mu = float(params["mu"])
    delta = float(params.get("delta", 0.0))
    T = int(params.get("T", 64))
    cost = _linear_plus_square_cost(2, mu, "smooth_det_str_lb")
    radius = float(params.get("D", 2.0 * max(1.0, 1.0 / mu)))
    oracle = OracleSpec("nonstochastic_inexact",
                        NoiseSchedule("fixed_direction", delta, {"coordinate": 0}))
    solver = SolverConfig(
        schedule=StepSchedule("inverse_L", {"L": mu}),
        averaging=AveragingScheme("uniform"),
        iterations=T,
        projection_radius=radius,
    )
    return Instance(cost, oracle, solver, np.zeros(2), "smooth_det_str_lb", params,
                    table_cell="smooth_sc/nonstochastic")


def _build_nesterov_chain(params: dict) -> Instance:
    _require(params, ("kappa", "mu"), "nesterov_chain")
    kappa, mu = float(params["kappa"]), float(params["mu"])
    if kappa <= 1.0:
        raise MissingParameterError("nesterov_chain needs kappa > 1")
    T = int(params.get("T", 50))
    n = int(params.get("truncation_dim", 4 * T))
    delta = float(params.get("delta", 0.0))
    dim = 2 * n
    _check_budget(dim, params)

    q = (math.sqrt(kappa) - 1.0) / (math.sqrt(kappa) + 1.0)
    c = mu * (kappa - 1.0) / 4.0
    # chain coupling matrix: 2 on the diagonal, -1 off-diagonal
    main = np.full(n, 2.0)
    off = np.full(n - 1, -1.0)

    def chain_apply(w):
        out = main * w
        out[:-1] += off * w[1:]
        out[1:] += off * w[:-1]
        return out

    # exact optimum of the truncated block: (c*A + mu*I) w = c*e_1
    A = np.diag(main) + np.diag(off, 1) + np.diag(off, -1)
    block_opt = np.linalg.solve(c * A + mu * np.eye(n), c * np.eye(n)[:, 0])

    guard = _dim_guard(dim)

    def block_value(w):
        return float(0.5 * c * np.sum(w * chain_apply(w)) - c * w[0]
                     + 0.5 * mu * np.sum(w * w))

    def value(v):
        guard(v)
        return block_value(v[:n]) + block_value(v[n:])

    def subgrad(v):
        guard(v)
        g = np.empty(dim)
        g[:n] = c * chain_apply(v[:n]) + mu * v[:n]
        g[0] -= c
        g[n:] = c * chain_apply(v[n:]) + mu * v[n:]
        g[n] -= c
        return g

    opt = np.concatenate([block_opt, block_opt])
    fmin = block_value(block_opt) * 2.0
    cost = CostFunction(
        dim=dim, value=value, subgrad=subgrad,
        meta=RegularityMeta(smoothness_L=mu * kappa, strong_convexity_mu=mu),
        optimum=(opt, fmin), scenario_id="nesterov_chain",
    )

    # reference start: first block at zero, second block on the geometric
    # profile; the inexact start zeroes the tail of the second block
    init = np.zeros(dim)
    init[n:] = q ** np.arange(1, n + 1)
    oracle = OracleSpec("inexact_init",
                        NoiseSchedule("geometric_tail", delta,
                                      {"q": q, "block_start": n, "block_length": n}))
    solver = SolverConfig(
        schedule=StepSchedule("inverse_L", {"L": mu * kappa}),
        averaging=AveragingScheme("last"),
        iterations=T,
    )
    return Instance(cost, oracle, solver, init, "nesterov_chain", params,
                    table_cell="smooth_sc/init")


# ---------------------------------------------------------------------------
# nonsmooth instances
# ---------------------------------------------------------------------------

def _max_structure_cost(T: int, eps: float, dummy: bool, scenario_id: str,
                        radius: float | None, exact_ties: bool = False) -> CostFunction:
    """f = maxstruct(err, y, z) + 2*eps*hinge(w + 1), optional dummy coord."""
    dim = 3 * T + 1 + (1 if dummy else 0)
    guard = _dim_guard(dim)
    w_idx = 3 * T

    def split(v):
        return v[0:T], v[T:2 * T], v[2 * T:3 * T], v[w_idx]

    def value(v):
        guard(v)
        xe, y, z, w = split(v)
        gval, _ = eval_helper_G(xe, y, z, validate=False, exact_ties=exact_ties)
        return gval + 2.0 * eps * max(w + 1.0, 0.0)

    def subgrad(v):
        guard(v)
        xe, y, z, w = split(v)
        _, (gx, gy, gz) = eval_helper_G(xe, y, z, validate=False,
                                        exact_ties=exact_ties)
        g = np.zeros(dim)
        g[0:T] = gx
        g[T:2 * T] = gy
        g[2 * T:3 * T] = gz
        g[w_idx] = 2.0 * eps if w + 1.0 >= 0.0 else 0.0
        return g

    opt = np.zeros(dim)
    opt[w_idx] = -1.0
    g_bound = math.sqrt(1.0 + 4.0 / 3.0 + 4.0 * eps * eps)
    return CostFunction(
        dim=dim, value=value, subgrad=subgrad,
        meta=RegularityMeta(lipschitz_G=g_bound, domain_radius_D=radius),
        optimum=(opt, 0.0), scenario_id=scenario_id,
    )


def _build_nonsmooth_sto_lb(params: dict) -> Instance:
    _require(params, ("epsilon", "T"), "nonsmooth_sto_lb")
    eps, T = float(params["epsilon"]), int(params["T"])
    delta = float(params.get("delta", 0.0))
    _check_budget(3 * T + 1, params)
    cost = _max_structure_cost(T, eps, dummy=False, scenario_id="nonsmooth_sto_lb",
                               radius=None,
                               exact_ties=bool(params.get("exact_ties", False)))
    oracle = OracleSpec("stochastic_inexact",
                        NoiseSchedule("rademacher_coordinate", delta))
    solver = SolverConfig(
        schedule=StepSchedule("slowed", {"epsilon": eps, "T": T}),
        averaging=AveragingScheme("uniform"),
        iterations=T,
    )
    return Instance(cost, oracle, solver, np.zeros(cost.dim), "nonsmooth_sto_lb",
                    params, table_cell="nonsmooth/stochastic")


def _build_nonsmooth_det_lb(params: dict) -> Instance:
    _require(params, ("epsilon", "T"), "nonsmooth_det_lb")
    eps, T = float(params["epsilon"]), int(params["T"])
    delta = float(params.get("delta", 0.0))
    radius = float(params.get("D", 2.0))
    _check_budget(3 * T + 2, params)
    cost = _max_structure_cost(T, eps, dummy=True, scenario_id="nonsmooth_det_lb",
                               radius=radius,
                               exact_ties=bool(params.get("exact_ties", False)))
    oracle = OracleSpec("nonstochastic_inexact", NoiseSchedule("split_dummy", delta))
    solver = SolverConfig(
        schedule=StepSchedule("slowed", {"epsilon": eps, "T": T}),
        averaging=AveragingScheme("uniform"),
        iterations=T,
        projection_radius=radius,
    )
    return Instance(cost, oracle, solver, np.zeros(cost.dim), "nonsmooth_det_lb",
                    params, table_cell="nonsmooth/nonstochastic")


def _pairwise_max_cost(T: int, eps: float, mu: float, extra_dummy: bool,
                       scenario_id: str) -> CostFunction:
    """f = max{0, err_i + y_i} + hinge head; strongly convex variant if mu > 0.

    mu == 0: f = max-part + 2*eps*hinge(w+1), blocks (err | y | w | dummy).
    mu > 0:  f = max-part + w + mu/2*||(err, y, w)||^2, blocks (err | y | w).
    """
    dim = 2 * T + 1 + (1 if extra_dummy else 0)
    guard = _dim_guard(dim)
    w_idx = 2 * T

    def value(v):
        guard(v)
        pair = v[0:T] + v[T:2 * T]
        best = float(np.max(pair))
        out = max(best, 0.0)
        if mu == 0.0:
            out += 2.0 * eps * max(v[w_idx] + 1.0, 0.0)
        else:
            out += float(v[w_idx]) + 0.5 * mu * float(np.sum(v[:2 * T + 1] * v[:2 * T + 1]))
        return out

    def subgrad(v):
        guard(v)
        pair = v[0:T] + v[T:2 * T]
        i = int(np.argmax(pair))
        g = np.zeros(dim)
        if pair[i] > 0.0:  # the constant 0 is enumerated first and wins ties
            g[i] = 1.0
            g[T + i] = 1.0
        if mu == 0.0:
            g[w_idx] = 2.0 * eps if v[w_idx] + 1.0 >= 0.0 else 0.0
        else:
            g[:2 * T + 1] += mu * v[:2 * T + 1]
            g[w_idx] += 1.0
        return g

    opt = np.zeros(dim)
    if mu == 0.0:
        opt[w_idx] = -1.0
        fmin = 0.0
        meta = RegularityMeta(lipschitz_G=math.sqrt(2.0 + 4.0 * eps * eps))
    else:
        opt[w_idx] = -1.0 / mu
        fmin = -0.5 / mu
        meta = RegularityMeta(strong_convexity_mu=mu)
    return CostFunction(dim=dim, value=value, subgrad=subgrad, meta=meta,
                        optimum=(opt, fmin), scenario_id=scenario_id)


def _build_nonsmooth_init_lb(params: dict) -> Instance:
    _require(params, ("epsilon", "T"), "nonsmooth_init_lb")
    eps, T = float(params["epsilon"]), int(params["T"])
    delta = float(params.get("delta", 0.0))
    _check_budget(2 * T + 2, params)
    cost = _pairwise_max_cost(T, eps, mu=0.0, extra_dummy=True,
                              scenario_id="nonsmooth_init_lb")
    oracle = OracleSpec("inexact_init", NoiseSchedule("spread", delta, {"T": T}))
    solver = SolverConfig(
        schedule=StepSchedule("slowed", {"epsilon": eps, "T": T}),
        averaging=AveragingScheme("uniform"),
        iterations=T,
    )
    return Instance(cost, oracle, solver, np.zeros(cost.dim), "nonsmooth_init_lb",
                    params, table_cell="nonsmooth/init")


def _shifted_max_structure_cost(T: int, mu: float, shift: float, extra_dummy: bool,
                                scenario_id: str, radius: float | None,
                                exact_ties: bool = False) -> CostFunction:
    """f = maxstruct(err + shift*e_1, y, z) + mu/2*||(err,y,z)||^2 + w + mu/2*w^2.

    The deterministic variant appends a dummy coordinate with its own
    mu/2*u^2 term so the whole cost stays mu-strongly convex.
    """
    dim = 3 * T + 1 + (1 if extra_dummy else 0)
    guard = _dim_guard(dim)
    w_idx = 3 * T

    def split(v):
        return v[0:T], v[T:2 * T], v[2 * T:3 * T], v[w_idx]

    def value(v):
        guard(v)
        xe, y, z, w = split(v)
        xs = xe.copy()
        xs[0] += shift
        gval, _ = eval_helper_G(xs, y, z, validate=False, exact_ties=exact_ties)
        out = gval + 0.5 * mu * float(np.sum(v[:3 * T] * v[:3 * T]))
        out += float(w) + 0.5 * mu * float(w) ** 2
        if extra_dummy:
            out += 0.5 * mu * float(v[-1]) ** 2
        return out

    def subgrad(v):
        guard(v)
        xe, y, z, w = split(v)
        xs = xe.copy()
        xs[0] += shift
        _, (gx, gy, gz) = eval_helper_G(xs, y, z, validate=False,
                                        exact_ties=exact_ties)
        g = np.zeros(dim)
        g[0:T] = gx
        g[T:2 * T] = gy
        g[2 * T:3 * T] = gz
        g[:3 * T] += mu * v[:3 * T]
        g[w_idx] = 1.0 + mu * w
        if extra_dummy:
            g[-1] = mu * v[-1]
        return g

    opt = np.zeros(dim)
    opt[0] = -shift
    opt[w_idx] = -1.0 / mu
    fmin = 0.5 * mu * shift * shift - 0.5 / mu
    return CostFunction(
        dim=dim, value=value, subgrad=subgrad,
        meta=RegularityMeta(strong_convexity_mu=mu, domain_radius_D=radius),
        optimum=(opt, fmin), scenario_id=scenario_id,
    )


def _build_nonsmooth_str_lb(params: dict) -> Instance:
    _require(params, ("mu", "delta", "T"), "nonsmooth_str_lb")
    mu, T = float(params["mu"]), int(params["T"])
    delta = float(params["delta"])
    _check_budget(3 * T + 1, params)
    cost = _shifted_max_structure_cost(T, mu, shift=delta, extra_dummy=False,
                                       scenario_id="nonsmooth_str_lb", radius=None,
                                       exact_ties=bool(params.get("exact_ties", False)))
    oracle = OracleSpec("stochastic_inexact",
                        NoiseSchedule("rademacher_coordinate", delta))
    solver = SolverConfig(
        schedule=StepSchedule("sc_classic", {"mu": mu}),
        averaging=AveragingScheme("sc_linear"),
        iterations=T,
    )
    return Instance(cost, oracle, solver, np.zeros(cost.dim), "nonsmooth_str_lb",
                    params, table_cell="nonsmooth_sc/stochastic")


def _build_nonsmooth_det_str_lb(params: dict) -> Instance:
    _require(params, ("mu", "delta", "T"), "nonsmooth_det_str_lb")
    mu, T = float(params["mu"]), int(params["T"])
    delta = float(params["delta"])
    _check_budget(3 * T + 2, params)
    radius = float(params.get("D", 2.0 * (1.0 / mu + delta)))
    cost = _shifted_max_structure_cost(T, mu, shift=delta, extra_dummy=True,
                                       scenario_id="nonsmooth_det_str_lb",
                                       radius=radius,
                                       exact_ties=bool(params.get("exact_ties", False)))
    oracle = OracleSpec("nonstochastic_inexact", NoiseSchedule("split_dummy", delta))
    solver = SolverConfig(
        schedule=StepSchedule("sc_det", {"mu": mu}),
        averaging=AveragingScheme("sc_linear_det"),
        iterations=T,
        projection_radius=radius,
    )
    return Instance(cost, oracle, solver, np.zeros(cost.dim), "nonsmooth_det_str_lb",
                    params, table_cell="nonsmooth_sc/nonstochastic")


def _build_nonsmooth_init_str_lb(params: dict) -> Instance:
    _require(params, ("mu", "T"), "nonsmooth_init_str_lb")
    mu, T = float(params["mu"]), int(params["T"])
    delta = float(params.get("delta", 0.0))
    _check_budget(2 * T + 1, params)
    cost = _pairwise_max_cost(T, eps=0.0, mu=mu, extra_dummy=False,
                              scenario_id="nonsmooth_init_str_lb")
    oracle = OracleSpec("inexact_init",
                        NoiseSchedule("spread_uniform", delta, {"T": T}))
    solver = SolverConfig(
        schedule=StepSchedule("sc_classic", {"mu": mu}),
        averaging=AveragingScheme("sc_linear"),
        iterations=T,
    )
    return Instance(cost, oracle, solver, np.zeros(cost.dim), "nonsmooth_init_str_lb",
                    params, table_cell="nonsmooth_sc/init")


# ---------------------------------------------------------------------------
# parametric families, finite sums, utility instances
# ---------------------------------------------------------------------------

def _build_theta_quadratic(params: dict) -> Instance:
    _require(params, ("theta", "epsilon"), "theta_quadratic")
    eps = float(params["epsilon"])
    delta = float(params.get("delta", 0.0))
    T = int(params.get("T", max(1, math.ceil(1.0 / (eps * eps)))))
    family = ThetaFamily(theta=float(params["theta"]), epsilon=eps,
                         variant="interval-quadratic")
    cost = theta_cost(family, "theta_quadratic")
    oracle = OracleSpec("stochastic_inexact",
                        NoiseSchedule("bernoulli_spike", delta, {"epsilon": eps}))
    solver = SolverConfig(
        schedule=StepSchedule("slowed", {"epsilon": eps, "T": T}),
        averaging=AveragingScheme("uniform"),
        iterations=T,
    )
    return Instance(cost, oracle, solver, np.zeros(1), "theta_quadratic", params,
                    table_cell="smooth/stochastic")


def _build_theta_sco(params: dict) -> Instance:
    _require(params, ("theta", "epsilon"), "theta_sco")
    eps = float(params["epsilon"])
    delta = float(params.get("delta", 0.0))
    T = int(params.get("T", max(1, math.ceil(1.0 / (eps * eps)))))
    family = ThetaFamily(theta=float(params["theta"]), epsilon=eps, variant="sco")
    cost = theta_cost(family, "theta_sco")
    oracle = OracleSpec("global",
                        NoiseSchedule("bernoulli_spike", delta,
                                      {"epsilon": eps, "family": family}))
    solver = SolverConfig(
        schedule=StepSchedule("slowed", {"epsilon": eps, "T": T}),
        averaging=AveragingScheme("uniform"),
        iterations=T,
    )
    init = np.array([1.0])
    return Instance(cost, oracle, solver, init, "theta_sco", params,
                    table_cell="smooth/stochastic")


def _abs_component(center: float, dim_guard) -> CostFunction:
    def value(v):
        dim_guard(v)
        return float(abs(v[0] - center))

    def subgrad(v):
        dim_guard(v)
        d = v[0] - center
        return np.array([1.0 if d >= 0.0 else -1.0])  # sign(0) = +1

    return CostFunction(dim=1, value=value, subgrad=subgrad,
                        meta=RegularityMeta(lipschitz_G=1.0),
                        optimum=(np.array([center]), 0.0))


def _build_finite_sum_nonsmooth(params: dict) -> Instance:
    _require(params, ("epsilon", "T"), "finite_sum_nonsmooth")
    eps, T = float(params["epsilon"]), int(params["T"])
    delta = float(params.get("delta", 0.0))
    m = int(params.get("m", 5))
    radius = float(params.get("D", 1.0))
    if m < 1 or m % 2 == 0:
        raise MissingParameterError("finite_sum_nonsmooth needs an odd m >= 1")
    guard = _dim_guard(1)
    centers = np.linspace(-radius, radius, m) if m > 1 else np.array([0.0])
    comps = tuple(_abs_component(float(c), guard) for c in centers)
    fmin = float(np.mean(np.abs(centers)))  # median of symmetric centers is 0
    fs = FiniteSum(
        components=comps,
        meta=RegularityMeta(lipschitz_G=1.0, domain_radius_D=radius),
        optimum=(np.array([0.0]), fmin),
        scenario_id="finite_sum_nonsmooth",
    )
    oracle = OracleSpec("component",
                        NoiseSchedule("fixed_direction", delta, {"coordinate": 0}))
    solver = SolverConfig(
        schedule=StepSchedule("slowed", {"epsilon": eps, "T": T}),
        averaging=AveragingScheme("uniform"),
        iterations=T,
        projection_radius=radius,
    )
    return Instance(fs, oracle, solver, np.zeros(1), "finite_sum_nonsmooth", params,
                    table_cell="nonsmooth/nonstochastic")


def _build_pure_noise(params: dict) -> Instance:
    _require(params, ("T",), "pure_noise")
    T = int(params["T"])
    delta = float(params.get("delta", 0.0))
    eta = float(params.get("eta", 0.5))
    dim = T + 1
    _check_budget(dim, params)
    guard = _dim_guard(dim)

    def value(v):
        guard(v)
        return 0.0

    def subgrad(v):
        guard(v)
        return np.zeros(dim)

    cost = CostFunction(dim=dim, value=value, subgrad=subgrad,
                        meta=RegularityMeta(smoothness_L=0.0, lipschitz_G=0.0),
                        optimum=(np.zeros(dim), 0.0), scenario_id="pure_noise")
    oracle = OracleSpec("stochastic_inexact",
                        NoiseSchedule("rademacher_coordinate", delta))
    solver = SolverConfig(
        schedule=StepSchedule("constant", {"eta": eta}),
        averaging=AveragingScheme("last"),
        iterations=T,
    )
    return Instance(cost, oracle, solver, np.zeros(dim), "pure_noise", params,
                    table_cell=None)


def _build_random_quadratic(params: dict) -> Instance:
    _require(params, ("mu", "L", "dim", "seed"), "random_quadratic")
    mu, L = float(params["mu"]), float(params["L"])
    dim, seed = int(params["dim"]), int(params["seed"])
    delta = float(params.get("delta", 0.0))
    T = int(params.get("T", 50))
    if not (0.0 < mu <= L):
        raise MissingParameterError("random_quadratic needs 0 < mu <= L")
    _check_budget(dim, params)

    gen = RngState(seed).child("instance").generator()
    basis, _ = np.linalg.qr(gen.standard_normal((dim, dim)))
    eigs = gen.uniform(mu, L, size=dim)
    if dim >= 2:
        eigs[0], eigs[-1] = mu, L
    H = (basis * eigs) @ basis.T
    H = 0.5 * (H + H.T)
    center = gen.standard_normal(dim)
    guard = _dim_guard(dim)

    def value(v):
        guard(v)
        d = v - center
        return 0.5 * float(d @ (H @ d))

    def subgrad(v):
        guard(v)
        return H @ (v - center)

    cost = CostFunction(dim=dim, value=value, subgrad=subgrad,
                        meta=RegularityMeta(smoothness_L=L, strong_convexity_mu=mu),
                        optimum=(center, 0.0), scenario_id="random_quadratic")
    oracle = OracleSpec("inexact_init", NoiseSchedule("sphere_uniform", delta))
    solver = SolverConfig(
        schedule=StepSchedule("inverse_L", {"L": L}),
        averaging=AveragingScheme("last"),
        iterations=T,
    )
    return Instance(cost, oracle, solver, np.zeros(dim), "random_quadratic", params,
                    table_cell=None)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

SCENARIOS: dict[str, ScenarioInfo] = {}


def _register(info: ScenarioInfo):
    SCENARIOS[info.scenario_id] = info


_register(ScenarioInfo(
    "smooth_sto_lb", ("epsilon", "T"), {"delta": 0.0}, "T+1",
    "smooth/stochastic",
    "smooth ramp cost with per-iteration coordinate noise; slowed SGD with "
    "uniform averaging is the matching method",
    _build_smooth_sto_lb))
_register(ScenarioInfo(
    "smooth_det_lb", ("epsilon",), {"delta": 0.0, "D": 2.0, "T": "ceil(2/eps)"}, "2",
    "smooth/nonstochastic",
    "smooth ramp cost with gradient-proportional drift on a spare coordinate; "
    "projected gradient descent with step 1/L is the matching method",
    _build_smooth_det_lb))
_register(ScenarioInfo(
    "smooth_init_lb", (), {"delta": 0.0, "T": 50}, "2",
    "smooth/init",
    "flat-direction quadratic: a start offset on the unused coordinate is "
    "never corrected by any first-order method",
    _build_smooth_init_lb))
_register(ScenarioInfo(
    "smooth_str_lb", ("mu", "T"), {"delta": 0.0}, "T+1",
    "smooth_sc/stochastic",
    "strongly convex cost whose driving coordinate couples to the error block; "
    "decaying-step SGD with shifted linear averaging is the matching method",
    _build_smooth_str_lb))
_register(ScenarioInfo(
    "smooth_det_str_lb", ("mu",), {"delta": 0.0, "D": "2*max(1,1/mu)", "T": 64}, "2",
    "smooth_sc/nonstochastic",
    "two-coordinate strongly convex cost with a constant-direction drift",
    _build_smooth_det_str_lb))
_register(ScenarioInfo(
    "nesterov_chain", ("kappa", "mu"),
    {"delta": 0.0, "T": 50, "truncation_dim": "4*T"}, "2*truncation_dim",
    "smooth_sc/init",
    "finite truncation of the chain quadratic (condition number kappa); the "
    "optimum profile is q^i with q=(sqrt(kappa)-1)/(sqrt(kappa)+1), truncation "
    "error q^dim/(1-q)",
    _build_nesterov_chain))
_register(ScenarioInfo(
    "nonsmooth_sto_lb", ("epsilon", "T"), {"delta": 0.0}, "3T+1",
    "nonsmooth/stochastic",
    "max-structure cost over error/choice blocks plus a hinge head, with "
    "per-iteration coordinate noise",
    _build_nonsmooth_sto_lb))
_register(ScenarioInfo(
    "nonsmooth_det_lb", ("epsilon", "T"), {"delta": 0.0, "D": 2.0}, "3T+2",
    "nonsmooth/nonstochastic",
    "max-structure cost with split drift: half on a fresh coordinate, half on "
    "a dummy coordinate",
    _build_nonsmooth_det_lb))
_register(ScenarioInfo(
    "nonsmooth_init_lb", ("epsilon", "T"), {"delta": 0.0}, "2T+2",
    "nonsmooth/init",
    "pairwise max cost whose spread start perturbation steers every later "
    "subgradient",
    _build_nonsmooth_init_lb))
_register(ScenarioInfo(
    "nonsmooth_str_lb", ("mu", "delta", "T"), {}, "3T+1",
    "nonsmooth_sc/stochastic",
    "strongly convex max-structure cost with the error block shifted by delta "
    "on its first coordinate",
    _build_nonsmooth_str_lb))
_register(ScenarioInfo(
    "nonsmooth_det_str_lb", ("mu", "delta", "T"), {"D": "2*(1/mu+delta)"}, "3T+2",
    "nonsmooth_sc/nonstochastic",
    "deterministic variant of the strongly convex max-structure cost with a "
    "dummy coordinate carrying half the drift",
    _build_nonsmooth_det_str_lb))
_register(ScenarioInfo(
    "nonsmooth_init_str_lb", ("mu", "T"), {"delta": 0.0}, "2T+1",
    "nonsmooth_sc/init",
    "strongly convex pairwise max cost with a uniform spread start perturbation",
    _build_nonsmooth_init_str_lb))
_register(ScenarioInfo(
    "theta_quadratic", ("theta", "epsilon"), {"delta": 0.0, "T": "ceil(1/eps^2)"}, "1",
    "smooth/stochastic",
    "location family of interval quadratics (theta in [-1,1]) with the "
    "Bernoulli-spike gradient oracle",
    _build_theta_quadratic))
_register(ScenarioInfo(
    "theta_sco", ("theta", "epsilon"), {"delta": 0.0, "T": "ceil(1/eps^2)"}, "1",
    "smooth/stochastic",
    "location family on [1,2] queried through the sampling oracle that returns "
    "whole functions",
    _build_theta_sco))
_register(ScenarioInfo(
    "finite_sum_nonsmooth", ("epsilon", "T"), {"delta": 0.0, "m": 5, "D": 1.0}, "1",
    "nonsmooth/nonstochastic",
    "average of absolute-value components with symmetric centers; uniform "
    "component sampling with per-component drift",
    _build_finite_sum_nonsmooth))
_register(ScenarioInfo(
    "pure_noise", ("T",), {"delta": 0.0, "eta": 0.5}, "T+1",
    None,
    "identically zero cost: iterates accumulate injected noise only "
    "(analytically solvable deviation)",
    _build_pure_noise))
_register(ScenarioInfo(
    "random_quadratic", ("mu", "L", "dim", "seed"), {"delta": 0.0, "T": 50}, "dim",
    None,
    "random strongly convex quadratic with spectrum in [mu, L] and known "
    "optimum",
    _build_random_quadratic))


def build_instance(scenario: str, params: Mapping[str, Any]) -> Instance:
    """Build the named instance; raises UnknownScenarioError / MissingParameterError."""
    try:
        info = SCENARIOS[scenario]
    except KeyError:
        known = ", ".join(sorted(SCENARIOS))
        raise UnknownScenarioError(
            f"unknown scenario {scenario!r}; known: {known}"
        ) from None
    return info.builder(dict(params))


def catalog() -> list[dict]:
    """Machine-readable scenario catalog (for the CLI ``list`` subcommand)."""
    return [SCENARIOS[k].describe() for k in sorted(SCENARIOS)]
