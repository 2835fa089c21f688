"""Cost functions with a uniform value/subgradient interface.

Everything the measurement harness optimizes lives here: the
one-dimensional smooth ramp used by the smooth adversarial instances,
the piecewise-linear max structure used by the nonsmooth ones, the
parametric quadratic families for the sampling oracles, and finite
sums of components.

Subgradient conventions are frozen for bit-reproducibility:

* every ``max`` picks the subgradient of the *first* argument (in a
  fixed enumeration order) that achieves the maximum;
* the hinge ``max(v, 0)`` has derivative 1 at v = 0;
* ``sign(0) = +1`` inside absolute-value terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .core import (
    DimensionMismatchError,
    InvalidInputError,
    as_vector,
)

__all__ = [
    "RegularityMeta",
    "CostFunction",
    "FiniteSum",
    "ThetaFamily",
    "eval_helper_F",
    "helper_f_value",
    "helper_f_derivative",
    "hinge",
    "hinge_derivative",
    "eval_helper_G",
    "finite_sum_eval",
    "finite_sum_subgrad",
    "theta_cost",
]


# ---------------------------------------------------------------------------
# regularity metadata and the cost interface
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularityMeta:
    """Concrete regularity constants of one instance.

    ``None`` means the constant does not exist for the instance
    (e.g. no global Lipschitz bound for a strongly convex cost) or the
    domain is unbounded.
    """

    smoothness_L: Optional[float] = None
    lipschitz_G: Optional[float] = None
    strong_convexity_mu: float = 0.0
    domain_radius_D: Optional[float] = None


@dataclass(frozen=True)
class CostFunction:
    """A convex cost: value and subgradient oracles plus metadata.

    ``value`` and ``subgrad`` must be pure; ``optimum`` is the known
    minimizer/minimum when the construction provides one.
    """

    dim: int
    value: Callable[[np.ndarray], float]
    subgrad: Callable[[np.ndarray], np.ndarray]
    meta: RegularityMeta = field(default_factory=RegularityMeta)
    optimum: Optional[tuple[np.ndarray, float]] = None
    scenario_id: str = ""

    def __call__(self, x: np.ndarray) -> float:
        return self.value(x)


@dataclass(frozen=True)
class FiniteSum:
    """Average of ``m`` component costs sharing one dimension."""

    components: tuple[CostFunction, ...]
    meta: RegularityMeta = field(default_factory=RegularityMeta)
    optimum: Optional[tuple[np.ndarray, float]] = None
    scenario_id: str = ""

    def __post_init__(self):
        if not self.components:
            raise InvalidInputError("a finite sum needs at least one component")
        dims = {c.dim for c in self.components}
        if len(dims) != 1:
            raise DimensionMismatchError(f"components disagree on dimension: {sorted(dims)}")

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def dim(self) -> int:
        return self.components[0].dim

    def value(self, x: np.ndarray) -> float:
        return finite_sum_eval(self, x)

    def subgrad(self, x: np.ndarray) -> np.ndarray:
        return finite_sum_subgrad(self, x)

    def __call__(self, x: np.ndarray) -> float:
        return finite_sum_eval(self, x)


def finite_sum_eval(fs: FiniteSum, x: np.ndarray) -> float:
    """(1/m) * sum of component values, accumulated left to right."""
    x = as_vector(x, fs.dim)
    total = 0.0
    for c in fs.components:
        total += c.value(x)
    return total / fs.m


def finite_sum_subgrad(fs: FiniteSum, x: np.ndarray) -> np.ndarray:
    x = as_vector(x, fs.dim)
    total = np.zeros(fs.dim)
    for c in fs.components:
        total += c.subgrad(x)
    return total / fs.m


# ---------------------------------------------------------------------------
# smooth one-dimensional ramp
# ---------------------------------------------------------------------------

def eval_helper_F(x: float) -> tuple[float, float]:
    """Smooth ramp: 0 on (-inf, 0], x^2 on [0, 1], 2x - 1 on [1, inf).

    Returns ``(value, derivative)``.  Branch boundaries use the
    left-closed convention: 0 belongs to the quadratic piece and 1 to
    the linear piece (all pieces agree there, so the function is C^1).
    """
    x = float(x)
    if not np.isfinite(x):
        raise InvalidInputError("helper ramp input must be finite")
    if x >= 1.0:
        return 2.0 * x - 1.0, 2.0
    if x >= 0.0:
        return x * x, 2.0 * x
    return 0.0, 0.0


def helper_f_value(x):
    """Vectorized value of the smooth ramp."""
    x = np.asarray(x, dtype=np.float64)
    return np.where(x >= 1.0, 2.0 * x - 1.0, np.where(x >= 0.0, x * x, 0.0))


def helper_f_derivative(x):
    """Vectorized derivative of the smooth ramp (0, 2x, or 2)."""
    x = np.asarray(x, dtype=np.float64)
    return np.where(x >= 1.0, 2.0, np.where(x >= 0.0, 2.0 * x, 0.0))


# ---------------------------------------------------------------------------
# nonsmooth building blocks
# ---------------------------------------------------------------------------

def hinge(v: float) -> float:
    """max(v, 0)."""
    return v if v > 0.0 else 0.0


def hinge_derivative(v: float) -> float:
    """Subgradient of max(v, 0); +1 at the kink."""
    return 1.0 if v >= 0.0 else 0.0


_WEIGHT_CACHE: dict[int, np.ndarray] = {}


def _branch_weights(T: int) -> np.ndarray:
    """Cached geometric weights 2^(-i), i = 0..T-1 (treat as read-only)."""
    w = _WEIGHT_CACHE.get(T)
    if w is None:
        w = 2.0 ** (-np.arange(T, dtype=np.float64))
        w.setflags(write=False)
        _WEIGHT_CACHE[T] = w
    return w


def eval_helper_G(x: np.ndarray, y: np.ndarray, z: np.ndarray, validate: bool = True,
                  exact_ties: bool = False):
    """Max-structure used by the nonsmooth instances.

    With ``T = len(x)`` and weights w_i = 2^{-(i-1)} (1-indexed), the
    value is ``max(0, max_i {hinge(y_i) + p_i + w_i x_i,
    hinge(z_i) + p_i - w_i x_i})`` where ``p_i = sum_{j<i} w_j |x_j|``.

    Returns ``(value, (gx, gy, gz))``.  The subgradient comes from the
    first branch achieving the maximum, enumerating the constant 0
    first and then, for ascending i, the y branch before the z branch.

    ``validate=False`` skips input checks (hot path inside solvers).

    ``exact_ties=True`` resolves the argmax in exact dyadic-rational
    arithmetic.  The geometric weights make the fresh branch's margin
    shrink like 2^(-i) relative to the accumulated prefix, so beyond
    i ~ 52 branch values collide in float64 and the first-maximizer
    rule would select a spurious early branch; exact selection is what
    the structural-identity checker uses.  Branch *values* and all
    subgradient entries are exact in float64 either way.
    """
    if validate:
        x = as_vector(x)
        y = as_vector(y)
        z = as_vector(z)
        if y.shape[0] != x.shape[0] or z.shape[0] != x.shape[0]:
            raise DimensionMismatchError(
                f"block lengths differ: {x.shape[0]}, {y.shape[0]}, {z.shape[0]}"
            )
        if x.shape[0] < 1:
            raise InvalidInputError("blocks must have length >= 1")
    T = x.shape[0]

    w = _branch_weights(T)
    if exact_ties:
        k, best = _exact_branch_argmax(x, y, z)
    else:
        wx = w * x
        prefix = np.abs(wx)
        np.cumsum(prefix, out=prefix)
        prefix[1:] = prefix[:-1]
        prefix[0] = 0.0
        vy = np.maximum(y, 0.0)
        vy += prefix
        vy += wx
        vz = np.maximum(z, 0.0)
        vz += prefix
        vz -= wx
        iy = int(np.argmax(vy))
        iz = int(np.argmax(vz))
        # first maximizer in the order (y_1, z_1, y_2, z_2, ...)
        if vy[iy] >= vz[iz] and (vy[iy] > vz[iz] or iy <= iz):
            k, best = 2 * iy, float(vy[iy])
        else:
            k, best = 2 * iz + 1, float(vz[iz])

    gx = np.zeros(T)
    gy = np.zeros(T)
    gz = np.zeros(T)
    if best <= 0.0:
        # the outer constant 0 is enumerated first and wins ties
        return 0.0, (gx, gy, gz)

    i = k // 2
    if i > 0:
        gx[:i] = np.where(x[:i] >= 0.0, 1.0, -1.0) * w[:i]  # sign(0) = +1
    if k % 2 == 0:
        gx[i] += w[i]
        gy[i] = hinge_derivative(y[i])
    else:
        gx[i] -= w[i]
        gz[i] = hinge_derivative(z[i])
    return best, (gx, gy, gz)


def _exact_branch_argmax(x, y, z) -> tuple[int, float]:
    """First maximizer of the 2T branch values in exact arithmetic.

    Every input float is a dyadic rational, so Fractions compare the
    branch values without rounding.  Returns (flat branch index, value
    rounded to float).
    """
    T = x.shape[0]
    best = Fraction(0)
    best_k = -1
    prefix = Fraction(0)
    for i in range(T):
        wi = Fraction(1, 2 ** i)
        xi = Fraction(float(x[i]))
        fy = Fraction(max(float(y[i]), 0.0)) + prefix + wi * xi
        fz = Fraction(max(float(z[i]), 0.0)) + prefix - wi * xi
        if fy > best:
            best, best_k = fy, 2 * i
        if fz > best:
            best, best_k = fz, 2 * i + 1
        prefix += wi * abs(xi)
    if best_k < 0:
        return 0, 0.0  # all branches <= 0: the outer constant wins
    return best_k, float(best)


# ---------------------------------------------------------------------------
# parametric quadratic families
# ---------------------------------------------------------------------------

_FAMILY_VARIANTS = ("interval-quadratic", "sco")


@dataclass(frozen=True)
class ThetaFamily:
    """Family of one-dimensional quadratics with an unknown location.

    ``interval-quadratic``: 100*eps*(x - theta)^2 on [-1, 1] with linear
    extensions outside, theta in [-1, 1]; minimum 0 at x = theta.

    ``sco``: 200*eps*(x^2/2 - theta*x) on [1, 2] with linear extensions
    outside, theta in [1, 2]; minimum -100*eps*theta^2 at x = theta.
    Both are (200*eps)-smooth.
    """

    theta: float
    epsilon: float
    variant: str = "interval-quadratic"

    def __post_init__(self):
        if self.variant not in _FAMILY_VARIANTS:
            raise InvalidInputError(f"unknown family variant {self.variant!r}")
        if not (self.epsilon > 0.0):
            raise InvalidInputError("epsilon must be positive")
        lo, hi = self.theta_range()
        if not (lo <= self.theta <= hi):
            raise InvalidInputError(
                f"theta={self.theta} outside the family range [{lo}, {hi}]"
            )

    def theta_range(self) -> tuple[float, float]:
        return (-1.0, 1.0) if self.variant == "interval-quadratic" else (1.0, 2.0)

    def interval(self) -> tuple[float, float]:
        return (-1.0, 1.0) if self.variant == "interval-quadratic" else (1.0, 2.0)

    @property
    def curvature(self) -> float:
        """Second derivative on the interior interval: 200*eps."""
        return 200.0 * self.epsilon

    def value(self, x: float) -> float:
        a, b = self.interval()
        s = self.curvature
        th = self.theta
        if self.variant == "interval-quadratic":
            def inner(u):
                return 0.5 * s * (u - th) ** 2
            def slope(u):
                return s * (u - th)
        else:
            def inner(u):
                return s * (0.5 * u * u - th * u)
            def slope(u):
                return s * (u - th)
        x = float(x)
        if x > b:
            return inner(b) + slope(b) * (x - b)
        if x < a:
            return inner(a) + slope(a) * (x - a)
        return inner(x)

    def gradient(self, x: float) -> float:
        a, b = self.interval()
        return self.curvature * (min(max(float(x), a), b) - self.theta)

    def minimum(self) -> tuple[float, float]:
        return self.theta, self.value(self.theta)


def theta_cost(family: ThetaFamily, scenario_id: str = "") -> CostFunction:
    """Wrap a theta family as a 1-D CostFunction."""
    eps = family.epsilon
    s = family.curvature
    a, b = family.interval()
    # |gradient| is maximized at the interval ends
    g_bound = s * max(abs(a - family.theta), abs(b - family.theta))
    point, fmin = family.minimum()

    def value(v: np.ndarray) -> float:
        v = as_vector(v, 1)
        return family.value(v[0])

    def subgrad(v: np.ndarray) -> np.ndarray:
        v = as_vector(v, 1)
        return np.array([family.gradient(v[0])])

    return CostFunction(
        dim=1,
        value=value,
        subgrad=subgrad,
        meta=RegularityMeta(smoothness_L=s, lipschitz_G=g_bound,
                            strong_convexity_mu=0.0, domain_radius_D=None),
        optimum=(np.array([point]), fmin),
        scenario_id=scenario_id,
    )
