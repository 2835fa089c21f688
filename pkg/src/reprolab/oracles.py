"""Bounded-error oracles wrapped around exact cost oracles.

Two error regimes:

* stochastic kinds return the exact (sub)gradient plus zero-mean noise
  with mean squared norm at most delta^2;
* non-stochastic kinds add a deterministic (possibly history-dependent)
  perturbation of norm at most delta, asserted on every call.

Initialization oracles perturb a reference start point by at most
delta in norm.  The sampling oracle returns a fully specified random
function whose expectation is the population cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Mapping

import numpy as np

from .core import (
    ContractViolationError,
    InvalidInputError,
    MissingParameterError,
    RngState,
    ScheduleExhaustedError,
    as_vector,
    norm,
)
from .costs import FiniteSum, ThetaFamily

__all__ = [
    "NoiseSchedule",
    "OracleSpec",
    "SampledFunction",
    "STOCHASTIC_KINDS",
    "NONSTOCHASTIC_KINDS",
    "INIT_KINDS",
    "stochastic_gradient",
    "nonstochastic_gradient",
    "inexact_init",
    "component_gradient",
    "global_sample",
    "random_direction_adversary",
]

STOCHASTIC_KINDS = frozenset({"none", "gaussian_iid", "rademacher_coordinate", "bernoulli_spike"})
NONSTOCHASTIC_KINDS = frozenset({"none", "gradient_proportional", "split_dummy",
                                 "fixed_direction", "custom_adversary"})
INIT_KINDS = frozenset({"none", "sphere_uniform", "fixed_coordinate", "spread",
                        "spread_uniform", "geometric_tail"})

ORACLE_KINDS = ("exact", "stochastic_inexact", "nonstochastic_inexact",
                "inexact_init", "component", "global")

_BOUND_SLACK = 1.0 + 1e-12


@dataclass(frozen=True)
class NoiseSchedule:
    """Named error model: kind, bound delta, and kind-specific params."""

    kind: str
    delta: float = 0.0
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in STOCHASTIC_KINDS | NONSTOCHASTIC_KINDS | INIT_KINDS:
            raise InvalidInputError(f"unknown noise schedule kind {self.kind!r}")
        if self.delta < 0.0 or not np.isfinite(self.delta):
            raise InvalidInputError("delta must be a nonnegative real")

    def param(self, name: str, default=None):
        if name in self.params:
            return self.params[name]
        if default is not None:
            return default
        raise MissingParameterError(f"noise schedule {self.kind!r} needs parameter {name!r}")


@dataclass
class OracleSpec:
    """Which oracle a run talks to, and its error schedule.

    ``call_counter`` is per-run local state: use :meth:`fresh` to get a
    zeroed copy before starting a run.
    """

    kind: str
    schedule: NoiseSchedule
    call_counter: int = 0

    def __post_init__(self):
        if self.kind not in ORACLE_KINDS:
            raise InvalidInputError(f"unknown oracle kind {self.kind!r}")

    def fresh(self) -> "OracleSpec":
        return replace(self, call_counter=0)


# ---------------------------------------------------------------------------
# gradient oracles
# ---------------------------------------------------------------------------

def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngState):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise InvalidInputError("rng must be an RngState or numpy Generator")


def _exact_grad(cost, x: np.ndarray) -> np.ndarray:
    return cost.subgrad(x)


def stochastic_gradient(cost, x: np.ndarray, t: int, rng, schedule: NoiseSchedule,
                        validate: bool = True) -> np.ndarray:
    """Exact subgradient plus zero-mean noise with E||noise||^2 <= delta^2.

    * ``gaussian_iid``: per-coordinate std delta/sqrt(dim), so the bound
      is met with equality;
    * ``rademacher_coordinate``: +/-delta on coordinate ``t`` (0-indexed),
      a fresh coordinate per iteration;
    * ``bernoulli_spike``: with probability 200*eps returns the rescaled
      gradient ``grad/(200*eps) + z`` with z ~ N(0, delta^2/(2*200*eps)),
      otherwise the zero vector.

    The returned array is freshly allocated and safe to mutate (every
    catalog cost hands out a fresh subgradient array per call).
    """
    if schedule.kind not in STOCHASTIC_KINDS:
        raise InvalidInputError(f"{schedule.kind!r} is not a stochastic schedule")
    if validate:
        x = as_vector(x, cost.dim)
    g = _exact_grad(cost, x)
    delta = schedule.delta
    # delta = 0 collapses the additive kinds to the exact oracle; the spike
    # kind keeps its Bernoulli masking, which is part of its structure.
    if schedule.kind == "none":
        return g
    if delta == 0.0 and schedule.kind != "bernoulli_spike":
        return g
    gen = _as_generator(rng)

    if schedule.kind == "gaussian_iid":
        noise = gen.standard_normal(cost.dim)
        noise *= delta / math.sqrt(cost.dim)
        noise += g
        return noise

    if schedule.kind == "rademacher_coordinate":
        if t >= cost.dim - 1:
            raise ScheduleExhaustedError(
                f"iteration {t} has no fresh noise coordinate in dimension {cost.dim}"
            )
        sign = 1.0 if gen.integers(0, 2) == 1 else -1.0
        g[t] += delta * sign
        return g

    if schedule.kind == "bernoulli_spike":
        eps = float(schedule.param("epsilon"))
        if not (0.0 < eps < 1.0 / 200.0):
            raise InvalidInputError("bernoulli_spike requires 0 < epsilon < 1/200")
        p = 200.0 * eps
        spike = gen.random() < p
        if not spike:
            return np.zeros(cost.dim)
        # on [-1, 1] with the interval-quadratic family this equals (x - theta + z)
        z = gen.normal(0.0, delta / math.sqrt(2.0 * p))
        return g / p + z

    raise InvalidInputError(f"unhandled stochastic kind {schedule.kind!r}")


def nonstochastic_gradient(cost, x_t: np.ndarray, t: int, schedule: NoiseSchedule,
                           history=None, validate: bool = True) -> np.ndarray:
    """Exact subgradient plus a deterministic perturbation with norm <= delta.

    * ``gradient_proportional``: delta * scale * grad[source] on
      coordinate ``target`` (the perturbation tracks the driving
      component of the gradient);
    * ``split_dummy``: delta/sqrt(2) on coordinate ``t`` plus
      delta/sqrt(2) on the last (dummy) coordinate;
    * ``fixed_direction``: delta on a fixed coordinate;
    * ``custom_adversary``: a callback ``fn(x_t, t, history)`` whose
      output is checked against the bound at runtime.
    """
    if schedule.kind not in NONSTOCHASTIC_KINDS:
        raise InvalidInputError(f"{schedule.kind!r} is not a non-stochastic schedule")
    if validate:
        x_t = as_vector(x_t, cost.dim)
    g = _exact_grad(cost, x_t)
    delta = schedule.delta
    if schedule.kind == "none" or delta == 0.0:
        return g

    if schedule.kind == "gradient_proportional":
        source = int(schedule.params.get("source", cost.dim - 1))
        target = int(schedule.params.get("target", 0))
        scale = float(schedule.params.get("scale", 1.0))
        bound_factor = float(schedule.params.get("bound_factor", 1.0))
        step = delta * scale * g[source]
        _check_bound(abs(step), delta * bound_factor)
        g[target] += step
        return g

    if schedule.kind == "split_dummy":
        if t >= cost.dim - 2:
            raise ScheduleExhaustedError(
                f"iteration {t} has no fresh noise coordinate in dimension {cost.dim}"
            )
        half = delta / math.sqrt(2.0)
        _check_bound(math.hypot(half, half), delta)
        g[t] += half
        g[cost.dim - 1] += half
        return g

    if schedule.kind == "fixed_direction":
        coord = int(schedule.params.get("coordinate", 0))
        _check_bound(abs(delta), delta)
        g[coord] += delta
        return g

    if schedule.kind == "custom_adversary":
        fn: Callable = schedule.param("fn")
        noise = as_vector(fn(x_t, t, history), cost.dim)
        _check_bound(norm(noise), delta)
        return g + noise

    raise InvalidInputError(f"unhandled non-stochastic kind {schedule.kind!r}")


def _check_bound(noise_norm: float, delta: float):
    if noise_norm > delta * _BOUND_SLACK:
        raise ContractViolationError(
            f"non-stochastic noise norm {noise_norm:.17g} exceeds bound {delta:.17g}"
        )


# ---------------------------------------------------------------------------
# initialization oracle
# ---------------------------------------------------------------------------

def inexact_init(x_ref: np.ndarray, schedule: NoiseSchedule, rng=None) -> np.ndarray:
    """Start point within distance delta of the reference point.

    Kinds:

    * ``sphere_uniform``: random direction, radius exactly delta;
    * ``fixed_coordinate``: +delta on the first coordinate;
    * ``spread``: delta/sqrt(2T) on the first T coordinates and
      delta/sqrt(2) on the last one;
    * ``spread_uniform``: delta/sqrt(T) on the first T coordinates;
    * ``geometric_tail``: zero the tail of a geometric-profile block,
      keeping the first L terms where L is the smallest integer with
      q^(L+1)/(1-q) <= delta.
    """
    if schedule.kind not in INIT_KINDS:
        raise InvalidInputError(f"{schedule.kind!r} is not an initialization schedule")
    x_ref = as_vector(x_ref)
    delta = schedule.delta
    if schedule.kind == "none" or delta == 0.0:
        return x_ref
    mode = schedule.kind
    dim = x_ref.shape[0]

    if mode == "sphere_uniform":
        gen = _as_generator(rng)
        direction = gen.standard_normal(dim)
        n = norm(direction)
        while n == 0.0:  # pragma: no cover - probability zero
            direction = gen.standard_normal(dim)
            n = norm(direction)
        return x_ref + direction * (delta / n)

    if mode == "fixed_coordinate":
        out = x_ref.copy()
        out[0] += delta
        return out

    if mode == "spread":
        T = int(schedule.param("T"))
        if dim < T + 1:
            raise InvalidInputError(f"spread mode needs dimension >= T+1, got {dim}")
        out = x_ref.copy()
        out[:T] += delta / math.sqrt(2.0 * T)
        out[-1] += delta / math.sqrt(2.0)
        return out

    if mode == "spread_uniform":
        T = int(schedule.param("T"))
        if dim < T:
            raise InvalidInputError(f"spread_uniform mode needs dimension >= T, got {dim}")
        out = x_ref.copy()
        out[:T] += delta / math.sqrt(T)
        return out

    if mode == "geometric_tail":
        q = float(schedule.param("q"))
        start = int(schedule.param("block_start"))
        length = int(schedule.param("block_length"))
        if not (0.0 < q < 1.0):
            raise InvalidInputError("geometric_tail needs 0 < q < 1")
        keep = 0
        while q ** (keep + 1) / (1.0 - q) > delta:
            keep += 1
            if keep > length:
                break
        out = x_ref.copy()
        out[start + min(keep, length): start + length] = 0.0
        return out

    raise InvalidInputError(f"unknown init mode {mode!r}")


# ---------------------------------------------------------------------------
# finite-sum component oracle
# ---------------------------------------------------------------------------

def component_gradient(fs: FiniteSum, i: int, x: np.ndarray,
                       schedule: NoiseSchedule) -> np.ndarray:
    """Subgradient of component i (1-indexed) plus a norm-delta perturbation."""
    if not (1 <= i <= fs.m):
        raise InvalidInputError(f"component index {i} out of range 1..{fs.m}")
    if schedule.kind not in NONSTOCHASTIC_KINDS:
        raise InvalidInputError("component oracle takes a non-stochastic schedule")
    comp = fs.components[i - 1]
    return nonstochastic_gradient(comp, x, 0, schedule)


# ---------------------------------------------------------------------------
# sampling (global) oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampledFunction:
    """One fully specified draw from the sampling oracle.

    Zero branch: the zero function.  Spike branch: the rescaled family
    quadratic plus a linear noise term, so a single nonzero gradient
    query reveals ``theta - z`` and with it the whole function.
    """

    family: ThetaFamily
    spike: bool
    z: float

    @property
    def revealed_parameter(self) -> float:
        """theta - z; what one nonzero gradient query reconstructs."""
        return self.family.theta - self.z

    def value(self, x: float) -> float:
        if not self.spike:
            return 0.0
        p = 200.0 * self.family.epsilon
        a, b = self.family.interval()
        return self.family.value(float(x)) / p + self.z * min(max(float(x), a), b)

    def gradient(self, x: float) -> float:
        if not self.spike:
            return 0.0
        p = 200.0 * self.family.epsilon
        a, b = self.family.interval()
        g = self.family.gradient(float(x)) / p
        if a <= float(x) <= b:
            g += self.z
        return g

    def reconstruct_from_gradient(self, x: float) -> float:
        """Recover theta - z from one in-interval spike-branch gradient query."""
        if not self.spike:
            raise InvalidInputError("zero-branch sample reveals nothing")
        a, b = self.family.interval()
        x = float(x)
        if not (a <= x <= b):
            raise InvalidInputError("reconstruction needs a query inside the interval")
        return x - self.gradient(x)


def global_sample(family: ThetaFamily, rng, delta: float = 0.0) -> SampledFunction:
    """Draw one sample function whose expectation is the family cost.

    With probability 200*eps the spike branch is returned, carrying
    gaussian slope noise z ~ N(0, delta^2/(2*200*eps)); otherwise the
    zero function.  For every x, E[f(x, xi)] equals the family value.
    """
    eps = family.epsilon
    if not (0.0 < eps < 1.0 / 200.0):
        raise InvalidInputError("sampling oracle requires 0 < epsilon < 1/200")
    if delta < 0.0:
        raise InvalidInputError("delta must be nonnegative")
    gen = _as_generator(rng)
    p = 200.0 * eps
    spike = bool(gen.random() < p)
    z = float(gen.normal(0.0, delta / math.sqrt(2.0 * p))) if spike else 0.0
    return SampledFunction(family=family, spike=spike, z=z)


# ---------------------------------------------------------------------------
# adversary search helpers
# ---------------------------------------------------------------------------

def random_direction_adversary(delta: float, rng: RngState) -> NoiseSchedule:
    """Non-stochastic schedule adding delta times a random unit direction.

    The direction sequence is a pure function of ``rng`` and the
    iteration index, so the schedule can be replayed exactly.
    """

    def fn(x_t, t, history):
        gen = rng.child("direction", t).generator()
        d = gen.standard_normal(x_t.shape[0])
        n = norm(d)
        return d * (delta / n)

    return NoiseSchedule(kind="custom_adversary", delta=delta, params={"fn": fn})
