"""Core value types: uniform grids, sampled profiles, initial conditions,
time-indexed solution fields and free-boundary paths.

All types are immutable after construction (backing arrays are frozen), so
they can be shared freely between threads.  A :class:`Profile` represents a
function on the whole line: piecewise-linear between the grid nodes, constant
(``left_tail`` / ``right_tail``) outside the window.  That convention lets the
Gaussian convolution in :mod:`fkpplab.heat` treat the complement of the window
exactly instead of truncating it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Grid1D",
    "Profile",
    "InitialCondition",
    "SolutionField",
    "BoundaryPath",
    "sample_ic",
    "check_monotone",
]

# Ingestion clamp: values may stray outside [0,1] by at most this much
# (accumulated rounding); anything larger is treated as corrupt input.
BOUNDS_SLACK = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.asarray(a, dtype=float)
    out = out.copy() if out.base is not None or out.flags.writeable else out
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of ``m`` points on [x_min, x_max], spacing dx = (x_max-x_min)/(m-1).

    Node i sits exactly at ``x_min + i*dx``.
    """

    x_min: float
    x_max: float
    m: int

    def __post_init__(self) -> None:
        if not self.x_min < self.x_max:
            raise ValueError(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.m < 2:
            raise ValueError(f"need m >= 2 grid points, got {self.m}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.m - 1)

    def x(self) -> np.ndarray:
        """Node coordinates x_min + i*dx, i = 0..m-1."""
        return self.x_min + np.arange(self.m) * self.dx

    def index_of(self, x: float) -> int:
        """Index of the nearest node to ``x`` (must lie inside the window)."""
        if not (self.x_min - 0.5 * self.dx <= x <= self.x_max + 0.5 * self.dx):
            raise ValueError(f"x={x} outside grid window [{self.x_min}, {self.x_max}]")
        return int(round((x - self.x_min) / self.dx))

    def translated(self, shift: float) -> "Grid1D":
        return Grid1D(self.x_min + shift, self.x_max + shift, self.m)


def _clamp_unit(values: np.ndarray, what: str) -> np.ndarray:
    lo, hi = float(np.min(values)), float(np.max(values))
    if lo < -BOUNDS_SLACK or hi > 1.0 + BOUNDS_SLACK:
        raise ValueError(
            f"{what} outside [0,1] by more than {BOUNDS_SLACK:g} "
            f"(min={lo!r}, max={hi!r}); refusing to clamp bad data"
        )
    return np.clip(values, 0.0, 1.0)


@dataclass(frozen=True)
class Profile:
    """A sampled function u(x) in [0,1] on a grid, constant outside the window."""

    grid: Grid1D
    values: np.ndarray
    left_tail: float
    right_tail: float

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.m,):
            raise ValueError(f"values shape {v.shape} != grid size ({self.grid.m},)")
        v = _clamp_unit(v, "profile values")
        lt = float(_clamp_unit(np.asarray([self.left_tail]), "left_tail")[0])
        rt = float(_clamp_unit(np.asarray([self.right_tail]), "right_tail")[0])
        object.__setattr__(self, "values", _frozen(v))
        object.__setattr__(self, "left_tail", lt)
        object.__setattr__(self, "right_tail", rt)

    def __call__(self, x: np.ndarray | float) -> np.ndarray | float:
        """Evaluate by linear interpolation, tails outside the window."""
        return np.interp(
            x, self.grid.x(), self.values, left=self.left_tail, right=self.right_tail
        )

    def with_values(self, values: np.ndarray) -> "Profile":
        return Profile(self.grid, values, self.left_tail, self.right_tail)


def check_monotone(p: Profile) -> bool:
    """True iff the sampled values are non-increasing (exact comparison)."""
    v = p.values
    return bool(np.all(v[1:] <= v[:-1]))


@dataclass(frozen=True)
class InitialCondition:
    """Initial datum v: R -> [0,1] with the metadata the identity checks need.

    kind is one of:

    * ``"step"``      -- v(x) = 1 for x <= x0, 0 after
    * ``"exp"``       -- v(x) = min(1, exp(-rate*x)); plateau ends at 0
    * ``"uniform"``   -- tail CDF of the uniform density on [a, b]
    * ``"sigmoid"``   -- v(x) = 1/(1+exp(rate*x)); never reaches 1 (mu0 = -inf)
    * ``"tabulated"`` -- values taken from a Profile

    ``mu0`` is inf{x : v(x) < 1} (may be -inf); ``gamma`` is the abscissa
    sup{r : integral of v(x)exp(rx) over x > mu0 is finite}, or None when
    unknown (tabulated data).  ``monotone_flag`` asserts v is non-increasing
    with limits 1 at -inf and 0 at +inf.
    """

    kind: str
    mu0: float
    gamma: float | None
    monotone_flag: bool
    x0: float = 0.0
    rate: float = 1.0
    a: float = 0.0
    b: float = 1.0
    table: Profile | None = None

    # -- constructors -------------------------------------------------------

    @staticmethod
    def step(x0: float = 0.0) -> "InitialCondition":
        return InitialCondition("step", mu0=x0, gamma=math.inf, monotone_flag=True, x0=x0)

    @staticmethod
    def exponential(rate: float) -> "InitialCondition":
        if rate <= 0:
            raise ValueError("exponential tail rate must be positive")
        return InitialCondition("exp", mu0=0.0, gamma=rate, monotone_flag=True, rate=rate)

    @staticmethod
    def uniform_tail(a: float = 0.0, b: float = 1.0) -> "InitialCondition":
        """v(x) = measure of [x, inf) under the uniform density on [a, b]."""
        if not a < b:
            raise ValueError("need a < b for a uniform density")
        return InitialCondition("uniform", mu0=a, gamma=math.inf, monotone_flag=True, a=a, b=b)

    @staticmethod
    def sigmoid(rate: float = 1.0) -> "InitialCondition":
        if rate <= 0:
            raise ValueError("sigmoid rate must be positive")
        return InitialCondition("sigmoid", mu0=-math.inf, gamma=rate, monotone_flag=True, rate=rate)

    @staticmethod
    def tabulated(table: Profile, gamma: float | None = None) -> "InitialCondition":
        """Wrap a sampled profile.  mu0 is derived from exact 1.0 plateau values."""
        monotone = check_monotone(table)
        ones = np.nonzero(table.values >= 1.0)[0]
        if table.left_tail >= 1.0 and ones.size:
            mu0 = float(table.grid.x()[ones[-1]])
        elif table.left_tail >= 1.0 and not ones.size:
            mu0 = table.grid.x_min  # plateau ends at or before the window
        else:
            mu0 = -math.inf
        return InitialCondition(
            "tabulated", mu0=mu0, gamma=gamma, monotone_flag=monotone, table=table
        )

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x: np.ndarray | float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "step":
            return np.where(x <= self.x0, 1.0, 0.0)
        if self.kind == "exp":
            with np.errstate(over="ignore"):
                return np.minimum(1.0, np.exp(-self.rate * x))
        if self.kind == "uniform":
            return np.clip((self.b - x) / (self.b - self.a), 0.0, 1.0)
        if self.kind == "sigmoid":
            with np.errstate(over="ignore"):
                return 1.0 / (1.0 + np.exp(np.minimum(self.rate * x, 700.0)))
        if self.kind == "tabulated":
            assert self.table is not None
            return np.asarray(self.table(x))
        raise ValueError(f"unknown initial-condition kind {self.kind!r}")

    @property
    def limit_left(self) -> float:
        if self.kind == "tabulated":
            assert self.table is not None
            return self.table.left_tail
        return 1.0

    @property
    def limit_right(self) -> float:
        if self.kind == "tabulated":
            assert self.table is not None
            return self.table.right_tail
        return 0.0


def sample_ic(ic: InitialCondition, grid: Grid1D) -> Profile:
    """Sample an initial condition on a grid, with the analytic limits as tails.

    Tabulated data is copied (bit-exact on the same grid) and never
    extrapolated: the table must cover the requested window.
    """
    if ic.kind == "tabulated":
        assert ic.table is not None
        tg = ic.table.grid
        if grid.x_min < tg.x_min - 1e-12 or grid.x_max > tg.x_max + 1e-12:
            raise ValueError(
                f"tabulated data on [{tg.x_min}, {tg.x_max}] does not cover "
                f"requested window [{grid.x_min}, {grid.x_max}]"
            )
    values = ic(grid.x())
    return Profile(grid, values, ic.limit_left, ic.limit_right)


@dataclass(frozen=True)
class SolutionField:
    """Profiles of u(., t) at strictly increasing times t > 0."""

    times: np.ndarray
    profiles: tuple[Profile, ...]

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size != len(self.profiles):
            raise ValueError("times and profiles length mismatch")
        if t.size and (np.any(np.diff(t) <= 0) or t[0] <= 0):
            raise ValueError("times must be strictly increasing and positive")
        object.__setattr__(self, "times", _frozen(t))
        object.__setattr__(self, "profiles", tuple(self.profiles))

    def at(self, t: float, tol: float = 1e-9) -> Profile:
        k = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[k] - t) > tol:
            raise KeyError(f"no stored profile at t={t} (nearest {self.times[k]})")
        return self.profiles[k]


@dataclass(frozen=True)
class BoundaryPath:
    """Sampled free-boundary estimates mu(t) with per-sample brackets.

    ``lo <= mu <= hi`` with bracket width at most 2*dx of the generating grid.
    """

    times: np.ndarray
    mu: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    grid_dx: float

    def __post_init__(self) -> None:
        t = np.asarray(self.times, float)
        mu = np.asarray(self.mu, float)
        lo = np.asarray(self.lo, float)
        hi = np.asarray(self.hi, float)
        if not (t.shape == mu.shape == lo.shape == hi.shape):
            raise ValueError("times/mu/lo/hi shape mismatch")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(mu)):
            raise ValueError("boundary estimates must be finite")
        if np.any(lo > mu) or np.any(mu > hi):
            raise ValueError("need lo <= mu <= hi")
        if np.any(hi - lo > 2.0 * self.grid_dx + 1e-12):
            raise ValueError("bracket width exceeds 2*dx")
        for name, arr in (("times", t), ("mu", mu), ("lo", lo), ("hi", hi)):
            object.__setattr__(self, name, _frozen(arr))

    def mu_at(self, t: np.ndarray | float) -> np.ndarray | float:
        """Piecewise-linear interpolation of mu; clamped at the ends."""
        return np.interp(t, self.times, self.mu)

    def covers(self, t0: float, t1: float, tol: float = 1e-9) -> bool:
        return self.times[0] <= t0 + tol and self.times[-1] >= t1 - tol

    @property
    def t_max(self) -> float:
        return float(self.times[-1])


def subsample(seq: Sequence[float], k: int) -> list[float]:
    """k roughly evenly spaced elements of seq (helper for probe sets)."""
    if k >= len(seq):
        return list(seq)
    idx = np.linspace(0, len(seq) - 1, k).round().astype(int)
    return [seq[i] for i in idx]
