"""Objective-function catalog, every function written for maximization.

Six n-dimensional functions (ackley, cosine_mixture, exponential,
griewank, rastrigin, schwefel) plus four fixed-arity extras (colville,
goldstein_price, sgo, parrott_f4).  Functions evaluate row-wise on an
``(n, dims)`` array; :func:`evaluate` is the single-vector convenience.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "ALIASES",
    "BenchmarkSpec",
    "CATALOG",
    "SUITE",
    "default_spec",
    "evaluate",
    "evaluate_batch",
    "objective_for",
]

PI = math.pi
E = math.e


def _ackley(x):
    n = x.shape[1]
    s1 = np.sum(x * x, axis=1)
    s2 = np.sum(np.cos(2.0 * PI * x), axis=1)
    return 20.0 * np.exp(-0.2 * np.sqrt(s1 / n)) + np.exp(s2 / n) - 20.0 - E


def _cosine_mixture(x):
    return -np.sum(x * x, axis=1) + 0.1 * np.sum(np.cos(5.0 * PI * x), axis=1)


def _exponential(x):
    return np.exp(-0.5 * np.sum(x * x, axis=1))


def _griewank(x):
    i = np.arange(1, x.shape[1] + 1, dtype=np.float64)
    return -(np.sum(x * x, axis=1) / 4000.0 - np.prod(np.cos(x / np.sqrt(i)), axis=1) + 1.0)


def _rastrigin(x):
    return -np.sum(x * x - 10.0 * np.cos(2.0 * PI * x) + 10.0, axis=1)


def _schwefel(x):
    return -418.9829 * x.shape[1] + np.sum(x * np.sin(np.sqrt(np.abs(x))), axis=1)


def _colville(x):
    x1, x2, x3, x4 = x[:, 0], x[:, 1], x[:, 2], x[:, 3]
    z = (
        100.0 * (x2 - x1**2) ** 2
        + (1.0 - x1) ** 2
        + 90.0 * (x4 - x3**2) ** 2
        + (1.0 - x3) ** 2
        + 10.1 * ((x2 - 1.0) ** 2 + (x4 - 1.0) ** 2)
        + 19.8 * (x2 - 1.0) * (x4 - 1.0)
    )
    return -z


def _goldstein_price(x):
    x1, x2 = x[:, 0], x[:, 1]
    t1 = 1.0 + (x1 + x2 + 1.0) ** 2 * (19.0 - 14.0 * x1 + 3.0 * x1**2 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2**2)
    t2 = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1**2 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2**2
    )
    return -(t1 * t2)


def _sgo(x):
    t = x**4 - 16.0 * x**2 + 0.5 * x
    return -(t[:, 0] + t[:, 1])


def _parrott_f4(x):
    v = x[:, 0]
    # natural log; fractional power needs v >= 0
    env = np.exp(-2.0 * math.log(2.0) * ((v - 0.08) / 0.854) ** 2)
    return env * np.sin(5.0 * PI * (np.abs(v) ** 0.75 - 0.05)) ** 6


@dataclass(frozen=True)
class _Entry:
    func: Callable[[np.ndarray], np.ndarray]
    bound: tuple[float, float]
    arity: int | None
    optimum: Callable[[int], tuple[tuple[float, ...], float]]


_SGO_X = -2.8362075
_PARROTT_X = 0.15 ** (4.0 / 3.0)

CATALOG: dict[str, _Entry] = {
    "ackley": _Entry(_ackley, (-30.0, 30.0), None, lambda n: ((0.0,) * n, 0.0)),
    "cosine_mixture": _Entry(_cosine_mixture, (-1.0, 1.0), None, lambda n: ((0.0,) * n, 0.1 * n)),
    "exponential": _Entry(_exponential, (-1.0, 1.0), None, lambda n: ((0.0,) * n, 1.0)),
    "griewank": _Entry(_griewank, (-600.0, 600.0), None, lambda n: ((0.0,) * n, 0.0)),
    "rastrigin": _Entry(_rastrigin, (-5.12, 5.12), None, lambda n: ((0.0,) * n, 0.0)),
    "schwefel": _Entry(_schwefel, (-500.0, 500.0), None, lambda n: ((420.9687,) * n, 0.0)),
    "colville": _Entry(_colville, (-10.0, 10.0), 4, lambda n: ((1.0,) * 4, 0.0)),
    "goldstein_price": _Entry(_goldstein_price, (-100.0, 100.0), 2, lambda n: ((0.0, -1.0), -3.0)),
    "sgo": _Entry(_sgo, (-50.0, 50.0), 2, lambda n: ((_SGO_X, _SGO_X), 130.8323226)),
    "parrott_f4": _Entry(_parrott_f4, (0.0, 1.0), 1, lambda n: ((_PARROTT_X,), 1.0)),
}

ALIASES = {
    "expon": "exponential",
    "cosmix": "cosine_mixture",
    "cosinemix": "cosine_mixture",
    "gp": "goldstein_price",
    "parrottf4": "parrott_f4",
}

# the six scalable functions, in the usual f1..f6 order
SUITE = ("ackley", "cosine_mixture", "exponential", "griewank", "rastrigin", "schwefel")


def _canonical(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    key = ALIASES.get(key.replace("_", ""), key)
    if key not in CATALOG:
        raise ValueError(f"unknown benchmark {name!r}; known: {', '.join(CATALOG)}")
    return key


@dataclass(frozen=True)
class BenchmarkSpec:
    id: str
    dims: int
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    optimum_location: tuple[float, ...]
    optimum_value: float
    offset: tuple[float, ...]

    def __post_init__(self):
        if self.id not in CATALOG:
            raise ValueError(f"unknown benchmark {self.id!r}")
        n = self.dims
        if not (len(self.lower) == len(self.upper) == len(self.offset) == len(self.optimum_location) == n):
            raise ValueError("bounds, offset and optimum must all have length dims")
        if any(lo >= hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("lower < upper must hold per coordinate")

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.lower, dtype=np.float64), np.asarray(self.upper, dtype=np.float64)


def default_spec(
    name: str,
    dims: int | None = None,
    *,
    wide_rastrigin: bool = False,
    offset: float | tuple[float, ...] | None = None,
) -> BenchmarkSpec:
    """Spec with the standard decision space for ``name``.

    ``wide_rastrigin`` widens rastrigin to [-10, 10].  ``offset`` shifts
    the function (the coordinate fed in is ``x - offset``) and moves the
    recorded optimum with it; ``offset=100`` gives the shifted griewank.
    """
    key = _canonical(name)
    entry = CATALOG[key]
    if entry.arity is not None:
        if dims is not None and dims != entry.arity:
            raise ValueError(f"{key} is {entry.arity}-dimensional, got dims={dims}")
        dims = entry.arity
    if dims is None or dims < 1:
        raise ValueError("dims must be >= 1")
    lo, hi = entry.bound
    if key == "rastrigin" and wide_rastrigin:
        lo, hi = -10.0, 10.0
    if offset is None:
        shift = (0.0,) * dims
    elif isinstance(offset, (int, float)):
        shift = (float(offset),) * dims
    else:
        shift = tuple(float(v) for v in offset)
    loc, value = entry.optimum(dims)
    loc = tuple(a + b for a, b in zip(loc, shift))
    return BenchmarkSpec(key, dims, (lo,) * dims, (hi,) * dims, loc, value, shift)


def evaluate_batch(spec: BenchmarkSpec, x: np.ndarray) -> np.ndarray:
    """Fitness of every row of ``x`` (shape ``(n, dims)``)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != spec.dims:
        raise ValueError(f"expected shape (n, {spec.dims}), got {x.shape}")
    if any(spec.offset):
        x = x - np.asarray(spec.offset)
    return CATALOG[spec.id].func(x)


def evaluate(spec: BenchmarkSpec, x) -> float:
    """Fitness of a single point; out-of-bounds points are evaluated but warned about."""
    row = np.asarray(x, dtype=np.float64).reshape(1, -1)
    lo, hi = spec.bounds
    if row.shape[1] == spec.dims and (np.any(row < lo) or np.any(row > hi)):
        warnings.warn(f"point outside the {spec.id} decision space", stacklevel=2)
    return float(evaluate_batch(spec, row)[0])


def objective_for(spec: BenchmarkSpec) -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: evaluate_batch(spec, x)
