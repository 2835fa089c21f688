"""Deterministic numeric primitives shared by every other module.

Vectors are plain 1-D float64 numpy arrays, treated as immutable once
handed to or returned from an operation.  Randomness is organized as a
tree of named streams over a counter-based generator (numpy's Philox),
so that any sub-computation (a trial, a sweep row, an oracle) can be
given its own stream that is independent of execution order and of how
many worker threads are running.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ReproLabError",
    "InvalidInputError",
    "DimensionMismatchError",
    "ScheduleExhaustedError",
    "ContractViolationError",
    "ResourceBudgetError",
    "UnknownScenarioError",
    "MissingParameterError",
    "UnsupportedError",
    "InsufficientDataError",
    "ConfigError",
    "RngState",
    "derive_rng",
    "as_vector",
    "check_finite",
    "norm",
    "project_ball",
]


class ReproLabError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(ReproLabError, ValueError):
    """A numeric argument is malformed (wrong shape, NaN/Inf, bad range)."""


class DimensionMismatchError(InvalidInputError):
    """Two vectors that must share a dimension do not."""


class ScheduleExhaustedError(ReproLabError):
    """A noise schedule ran out of fresh coordinates for the iteration index."""


class ContractViolationError(ReproLabError):
    """A runtime check on a declared bound failed (e.g. adversary noise > delta)."""


class ResourceBudgetError(ReproLabError):
    """An instance or sweep would exceed the configured size budget."""


class UnknownScenarioError(ReproLabError, KeyError):
    """Scenario id not present in the catalog."""


class MissingParameterError(ReproLabError, KeyError):
    """A scenario, schedule, or config was not given a required parameter."""


class UnsupportedError(ReproLabError):
    """The requested operation is not defined for this instance (e.g. unknown optimum)."""


class InsufficientDataError(ReproLabError):
    """Not enough usable rows/points to perform a fit."""


class ConfigError(ReproLabError, ValueError):
    """An experiment configuration failed validation."""


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------

def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a 1-D float64 array and validate it.

    Raises InvalidInputError on non-finite entries and
    DimensionMismatchError when ``dim`` is given and does not match.
    """
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise InvalidInputError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("vector contains NaN or Inf entries")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {v.shape[0]}")
    return v


def check_finite(v: np.ndarray, what: str = "vector") -> np.ndarray:
    if not np.all(np.isfinite(v)):
        raise InvalidInputError(f"{what} contains NaN or Inf entries")
    return v


def norm(x: np.ndarray) -> float:
    """Euclidean norm with a fixed, thread-count-independent reduction."""
    x = np.asarray(x, dtype=np.float64)
    return float(np.sqrt(np.sum(x * x)))


def project_ball(x: np.ndarray, radius: float) -> np.ndarray:
    """Project ``x`` onto the Euclidean ball of the given radius (a rescaling).

    Returns ``x`` itself when it is already inside the ball; callers must
    treat vectors as immutable.
    """
    if not (radius > 0.0) or not np.isfinite(radius):
        raise InvalidInputError(f"ball radius must be a positive real, got {radius}")
    x = np.asarray(x, dtype=np.float64)
    check_finite(x, "projection input")
    n = norm(x)
    if n <= radius:
        return x
    return x * (radius / n)


# ---------------------------------------------------------------------------
# splittable counter-based randomness
# ---------------------------------------------------------------------------

_ALGORITHM_ID = "philox4x64"


def _label_key(label: str) -> int:
    # Stable 64-bit key for a stream label; independent of PYTHONHASHSEED.
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class RngState:
    """Immutable handle for one named random stream.

    The stream is fully determined by ``(algorithm_id, master_seed,
    stream_path)``.  Children derived with distinct ``(label, index)``
    pairs are statistically independent: the path is folded into a
    ``numpy.random.SeedSequence`` spawn key feeding a Philox generator,
    which is counter-based, so the draws of one stream never depend on
    how many draws any other stream has made.
    """

    master_seed: int
    stream_path: tuple[tuple[str, int], ...] = field(default=())
    algorithm_id: str = _ALGORITHM_ID

    def __post_init__(self):
        if not (0 <= int(self.master_seed) < 2 ** 64):
            raise InvalidInputError("master_seed must fit in 64 unsigned bits")
        if self.algorithm_id != _ALGORITHM_ID:
            raise UnsupportedError(f"unknown generator algorithm {self.algorithm_id!r}")
        for label, index in self.stream_path:
            if not label:
                raise InvalidInputError("stream labels must be nonempty")
            if int(index) < 0:
                raise InvalidInputError("stream indices must be nonnegative")

    def child(self, label: str, index: int = 0) -> "RngState":
        return derive_rng(self, label, index)

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        key: list[int] = []
        for label, index in self.stream_path:
            key.append(_label_key(label))
            key.append(int(index))
        seq = np.random.SeedSequence(entropy=int(self.master_seed), spawn_key=tuple(key))
        return np.random.Generator(np.random.Philox(seq))


def derive_rng(parent: RngState, label: str, index: int = 0) -> RngState:
    """Child stream of ``parent`` named by ``(label, index)``; parent unchanged."""
    if not label:
        raise InvalidInputError("stream labels must be nonempty")
    if int(index) < 0:
        raise InvalidInputError("stream indices must be nonnegative")
    return RngState(
        master_seed=parent.master_seed,
        stream_path=parent.stream_path + ((label, int(index)),),
        algorithm_id=parent.algorithm_id,
    )
