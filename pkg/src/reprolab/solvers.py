"""First-order iterative solvers.

``run_foi`` is (projected, averaged) (sub)gradient descent with one of
the named step schedules; ``run_general_foi`` runs an arbitrary
lower-triangular coefficient matrix, i.e. any method whose iterate is
the start point minus an adaptive linear combination of past oracle
gradients.  Both make exactly one oracle call per iteration (times the
batch size) and are bitwise deterministic given (config, rng).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

import numpy as np

from .core import (
    InvalidInputError,
    MissingParameterError,
    RngState,
    UnsupportedError,
    as_vector,
    check_finite,
    project_ball,
)
from .costs import FiniteSum
from .oracles import (
    OracleSpec,
    component_gradient,
    global_sample,
    inexact_init,
    nonstochastic_gradient,
    stochastic_gradient,
)

__all__ = [
    "StepSchedule",
    "AveragingScheme",
    "CoefficientMatrix",
    "SolverConfig",
    "RunResult",
    "eta_at",
    "averaging_weights",
    "average_iterates",
    "gd_step",
    "run_foi",
    "run_general_foi",
]

STEP_KINDS = ("constant", "slowed", "smooth_sc", "sc_classic", "sc_det", "inverse_L")
AVERAGING_KINDS = ("last", "uniform", "shifted_linear", "sc_linear", "sc_linear_det")


@dataclass(frozen=True)
class StepSchedule:
    """Closed-form step-size rule.

    kinds and required params:
      constant   eta
      slowed     epsilon, T          (eta = 1/(epsilon*T))
      smooth_sc  L, mu [, k]         (eta_t = 1/(L + 1/lambda_t),
                                      lambda_t = 2/((t+k)*mu - 2L),
                                      k defaults to ceil(4L/mu))
      sc_classic mu                  (eta_t = 2/(mu*(t+1)))
      sc_det     mu                  (eta_t = 1/(mu*(t+1)))
      inverse_L  L                   (eta = 1/L)
    """

    kind: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in STEP_KINDS:
            raise InvalidInputError(f"unknown step schedule kind {self.kind!r}")

    def param(self, name: str) -> float:
        try:
            return float(self.params[name])
        except KeyError:
            raise MissingParameterError(
                f"step schedule {self.kind!r} needs parameter {name!r}"
            ) from None


def eta_at(schedule: StepSchedule, t: int) -> float:
    """Step size at iteration t (0-indexed)."""
    if t < 0:
        raise InvalidInputError("iteration index must be nonnegative")
    k = schedule.kind
    if k == "constant":
        eta = schedule.param("eta")
    elif k == "slowed":
        eta = 1.0 / (schedule.param("epsilon") * schedule.param("T"))
    elif k == "smooth_sc":
        L = schedule.param("L")
        mu = schedule.param("mu")
        kk = float(schedule.params.get("k", math.ceil(4.0 * L / mu)))
        lam = 2.0 / ((t + kk) * mu - 2.0 * L)
        if lam <= 0.0:
            raise InvalidInputError("smooth_sc needs k >= 4L/mu so lambda_t > 0")
        eta = 1.0 / (L + 1.0 / lam)
    elif k == "sc_classic":
        eta = 2.0 / (schedule.param("mu") * (t + 1))
    elif k == "sc_det":
        eta = 1.0 / (schedule.param("mu") * (t + 1))
    elif k == "inverse_L":
        eta = 1.0 / schedule.param("L")
    else:  # pragma: no cover
        raise InvalidInputError(f"unknown step schedule kind {k!r}")
    if not (eta > 0.0) or not np.isfinite(eta):
        raise InvalidInputError(f"step size at t={t} is not positive: {eta}")
    return eta


@dataclass(frozen=True)
class AveragingScheme:
    """How the run output is formed from the iterates x_1..x_T.

    kinds: last; uniform; shifted_linear (weight t+k-1 on x_{t+1});
    sc_linear (weight proportional to t on x_t); sc_linear_det (weight
    proportional to t+1 on x_t).  All weights are normalized to sum to 1.
    """

    kind: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in AVERAGING_KINDS:
            raise InvalidInputError(f"unknown averaging kind {self.kind!r}")


def averaging_weights(avg: AveragingScheme, T: int) -> np.ndarray:
    """Normalized weights over the iterates x_1..x_T."""
    if T < 1:
        raise InvalidInputError("averaging needs at least one iterate")
    if avg.kind == "last":
        w = np.zeros(T)
        w[-1] = 1.0
        return w
    if avg.kind == "uniform":
        return np.full(T, 1.0 / T)
    if avg.kind == "shifted_linear":
        k = float(avg.params.get("k", 1.0))
        raw = np.arange(T, dtype=np.float64) + (k - 1.0)  # weight t+k-1 on x_{t+1}
    elif avg.kind == "sc_linear":
        raw = np.arange(1, T + 1, dtype=np.float64)       # weight 2t/(T(T+1)) on x_t
    elif avg.kind == "sc_linear_det":
        raw = np.arange(2, T + 2, dtype=np.float64)       # weight prop. to t+1 on x_t
    else:  # pragma: no cover
        raise InvalidInputError(avg.kind)
    if np.any(raw < 0.0):
        raise InvalidInputError("averaging weights must be nonnegative")
    w = raw / np.sum(raw)
    assert abs(float(np.sum(w)) - 1.0) <= 1e-12
    return w


def average_iterates(traj, avg: AveragingScheme, params: Mapping[str, Any] | None = None) -> np.ndarray:
    """Weighted average of a trajectory, read as the iterates x_1..x_T."""
    traj = [as_vector(v) for v in traj]
    if not traj:
        raise InvalidInputError("cannot average an empty trajectory")
    if avg.kind == "last":
        return traj[-1]
    w = averaging_weights(avg, len(traj))
    out = np.zeros_like(traj[0])
    for wt, xt in zip(w, traj):
        out += wt * xt
    return out


@dataclass(frozen=True)
class CoefficientMatrix:
    """Lower-triangular coefficients lam[r][i] of g(x_i) in x_{r+1}.

    Row r builds iterate x_{r+1} from gradients g(x_0)..g(x_r), so the
    matrix is lower-triangular including the diagonal, and the diagonal
    entry is the coefficient of the latest gradient.  A zero diagonal
    entry triggers a warning (the nonsmooth structural identities
    assume the latest coefficient is nonzero) and sets a flag.
    """

    lam: np.ndarray
    latest_nonzero: bool = field(init=False, default=True)

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=np.float64)
        if lam.ndim != 2 or lam.shape[0] != lam.shape[1]:
            raise InvalidInputError(f"coefficient matrix must be square, got {lam.shape}")
        if not np.all(np.isfinite(lam)):
            raise InvalidInputError("coefficient matrix contains NaN or Inf")
        if np.any(np.triu(lam, k=1) != 0.0):
            raise InvalidInputError("coefficients above the diagonal must be zero "
                                    "(x_t may only use g(x_0)..g(x_{t-1}))")
        object.__setattr__(self, "lam", lam)
        diag = np.diag(lam)
        if np.any(diag == 0.0):
            warnings.warn("coefficient of the latest gradient is zero in some row; "
                          "nonsmooth structural identities may not hold", stacklevel=2)
            object.__setattr__(self, "latest_nonzero", False)

    @property
    def T(self) -> int:
        return self.lam.shape[0]

    def leading_ratio(self) -> float:
        """|lam_0^{(T)}| / |sum_{t>=1} lam_t^{(T)}| from the last row (recorded only)."""
        last = self.lam[-1]
        tail = float(abs(np.sum(last[1:])))
        if tail == 0.0:
            return math.inf if last[0] != 0.0 else 0.0
        return float(abs(last[0])) / tail


@dataclass(frozen=True)
class SolverConfig:
    """Recommended first-order configuration for an instance."""

    schedule: StepSchedule
    averaging: AveragingScheme
    iterations: int
    projection_radius: Optional[float] = None
    batch_size: int = 1


@dataclass(frozen=True)
class RunResult:
    """Output of one solver run."""

    output: np.ndarray
    oracle_calls: int
    suboptimality: Optional[float] = None
    trajectory: Optional[np.ndarray] = None
    seed_path: tuple = ()


# ---------------------------------------------------------------------------
# oracle driver: one per run, owns the call counter and the rng stream
# ---------------------------------------------------------------------------

class _OracleDriver:
    def __init__(self, spec: OracleSpec, cost, rng: RngState | None):
        self.spec = spec.fresh()
        self.cost = cost
        self.rng = rng
        self.gen = rng.generator() if rng is not None else None
        self.history: list[np.ndarray] | None = (
            [] if spec.schedule.kind == "custom_adversary" else None
        )
        if spec.kind == "component" and not isinstance(cost, FiniteSum):
            raise UnsupportedError("component oracle requires a FiniteSum cost")

    @property
    def calls(self) -> int:
        return self.spec.call_counter

    def initial_point(self, x_ref: np.ndarray) -> np.ndarray:
        if self.spec.kind == "inexact_init":
            return inexact_init(x_ref, self.spec.schedule, self.gen)
        return x_ref

    def gradient(self, x: np.ndarray, t: int) -> np.ndarray:
        spec = self.spec
        spec.call_counter += 1
        kind = spec.kind
        if kind in ("exact", "inexact_init"):
            g = self.cost.subgrad(x)
        elif kind == "stochastic_inexact":
            g = stochastic_gradient(self.cost, x, t, self.gen, spec.schedule,
                                    validate=False)
        elif kind == "nonstochastic_inexact":
            g = nonstochastic_gradient(self.cost, x, t, spec.schedule, self.history,
                                       validate=False)
            if self.history is not None:
                self.history.append(x)
        elif kind == "component":
            i = int(self.gen.integers(1, self.cost.m + 1))
            g = component_gradient(self.cost, i, x, spec.schedule)
        elif kind == "global":
            family = spec.schedule.param("family")
            sample = global_sample(family, self.gen, delta=spec.schedule.delta)
            g = np.array([sample.gradient(float(x[0]))])
        else:  # pragma: no cover
            raise UnsupportedError(f"oracle kind {kind!r}")
        return g


def _suboptimality(cost, output: np.ndarray) -> Optional[float]:
    if getattr(cost, "optimum", None) is None:
        return None
    _, fmin = cost.optimum
    sub = float(cost.value(output) - fmin)
    if sub < -1e-9:
        raise InvalidInputError(
            f"negative suboptimality {sub:.3e}: declared optimum is not a minimum"
        )
    return sub


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------

def gd_step(x: np.ndarray, g: np.ndarray, eta: float,
            radius: Optional[float] = None) -> np.ndarray:
    """One descent step x - eta*g, projected onto the radius ball if given."""
    x = as_vector(x)
    g = as_vector(g, x.shape[0])
    if not (eta > 0.0):
        raise InvalidInputError("step size must be positive")
    out = x - eta * g
    if radius is not None:
        out = project_ball(out, radius)
    return out


def run_foi(cost, oracle: OracleSpec, init, schedule: StepSchedule,
            avg: AveragingScheme, T: int, *, radius: Optional[float] = None,
            rng: RngState | None = None, batch_size: int = 1,
            keep_trajectory: bool = False) -> RunResult:
    """Projected (sub)gradient descent with a step schedule and averaging.

    Runs x_{t+1} = Pi[x_t - eta_t * g(x_t)] for t = 0..T-1 and returns
    the averaged output.  Exactly ``batch_size * T`` oracle calls are
    made (batched draws are averaged before the step).
    """
    if T < 1:
        raise InvalidInputError("T must be >= 1")
    if batch_size < 1:
        raise InvalidInputError("batch_size must be >= 1")
    init = as_vector(init, cost.dim)
    driver = _OracleDriver(oracle, cost, rng)
    x = driver.initial_point(init)

    weights = None if avg.kind == "last" else averaging_weights(avg, T)
    acc = None if weights is None else np.zeros(cost.dim)
    traj = [x.copy()] if keep_trajectory else None
    etas = [eta_at(schedule, t) for t in range(T)]

    for t in range(T):
        g = driver.gradient(x, t)
        if batch_size > 1:
            for _ in range(batch_size - 1):
                g += driver.gradient(x, t)
            g /= batch_size
        # gradients are freshly allocated per call: reuse as the next iterate
        g *= -etas[t]
        g += x
        x = g
        if radius is not None:
            x = project_ball(x, radius)
        if acc is not None:
            acc += weights[t] * x
        if traj is not None:
            traj.append(x.copy())

    output = x if acc is None else acc
    check_finite(output, "solver output")
    return RunResult(
        output=output,
        oracle_calls=driver.calls,
        suboptimality=_suboptimality(cost, output),
        trajectory=np.asarray(traj) if traj is not None else None,
        seed_path=rng.stream_path if rng is not None else (),
    )


def run_general_foi(cost, oracle: OracleSpec, init, coeffs: CoefficientMatrix,
                    rng: RngState | None = None) -> RunResult:
    """Run an arbitrary-coefficient first-order method, keeping the trajectory.

    Iterate r+1 is ``x_0 - sum_i lam[r][i] * g(x_i)``; each gradient is
    queried once, at the iterate it belongs to, and reused afterwards.
    """
    init = as_vector(init, cost.dim)
    driver = _OracleDriver(oracle, cost, rng)
    x0 = driver.initial_point(init)
    T = coeffs.T

    grads = np.empty((T, cost.dim))
    traj = np.empty((T + 1, cost.dim))
    traj[0] = x0
    x = x0
    for t in range(T):
        grads[t] = driver.gradient(x, t)
        # left-to-right accumulation keeps runs bit-reproducible
        nxt = x0.copy()
        row = coeffs.lam[t]
        for i in range(t + 1):
            if row[i] != 0.0:
                nxt -= row[i] * grads[i]
        x = nxt
        traj[t + 1] = x

    check_finite(x, "solver output")
    return RunResult(
        output=x,
        oracle_calls=driver.calls,
        suboptimality=_suboptimality(cost, x),
        trajectory=traj,
        seed_path=rng.stream_path if rng is not None else (),
    )
