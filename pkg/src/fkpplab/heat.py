"""Discrete Gaussian semigroup G_t and cut operator C_m.

The kernel is p_t(x) = exp(-x^2/(4t)) / sqrt(4*pi*t) (variance 2t, matching a
Brownian motion of diffusivity sqrt(2), whose generator is the plain second
derivative).  ``apply_G`` realizes f -> p_t * f for a :class:`Profile`:

* inside the window the profile is read as its piecewise-linear interpolant
  and integrated against the kernel in closed form (hat-function moments via
  erf), giving exact nonnegative quadrature weights that depend only on the
  node offset;
* outside the window the constant tails are integrated exactly as Gaussian
  tail masses (erfc);
* every output row is renormalized so weights plus tail masses sum to one,
  which makes the discrete operator exactly stochastic.

Exact nonnegativity and row-stochasticity are what make pointwise ordering
survive floating point: f <= g implies G f <= G g with no tolerance, and
G(const) = const to machine precision.  The certified two-sided scheme in
:mod:`fkpplab.sandwich` depends on both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import erf, erfc

from .grids import Profile

__all__ = ["KernelSpec", "heat_kernel", "apply_G", "apply_cut"]


@dataclass(frozen=True)
class KernelSpec:
    """Kernel scale t and the banding radius, in units of the std dev sqrt(2t).

    Weights beyond ``truncation_radius`` standard deviations are dropped from
    the band; the analytic erfc tail masses are exact at any distance, so only
    in-window mass (< 1e-9 of a row at radius 6) is affected, and row
    renormalization redistributes it.
    """

    t: float
    truncation_radius: float = 6.0

    def __post_init__(self) -> None:
        if self.t <= 0:
            raise ValueError(f"kernel scale t must be positive, got {self.t}")
        if self.truncation_radius < 6:
            raise ValueError("truncation_radius below 6 would corrupt the band mass")


def heat_kernel(t: float, x: np.ndarray | float) -> np.ndarray | float:
    """Gaussian density exp(-x^2/(4t)) / sqrt(4 pi t)."""
    if t <= 0:
        raise ValueError(f"heat kernel needs t > 0, got t={t}")
    x = np.asarray(x, dtype=float)
    out = np.exp(-(x * x) / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)
    return out if out.ndim else float(out)


def _gauss_mass(t: float, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """integral of p_t over [a, b]."""
    s = math.sqrt(4.0 * t)
    return 0.5 * (erf(b / s) - erf(a / s))


def _gauss_first_moment(t: float, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """integral of z*p_t(z) over [a, b]  (= 2t*(p_t(a) - p_t(b)))."""
    return 2.0 * t * (heat_kernel(t, a) - heat_kernel(t, b))


def _hat_halves(t: float, d: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Kernel mass against the two halves of a unit hat of width h.

    For a hat centred at node x_j and an output point x_i with offset
    d = x_i - x_j, returns (right_half, left_half) where ``right_half`` is the
    integral over y in [x_j, x_j+h] and ``left_half`` over y in [x_j-h, x_j].
    Both are nonnegative.
    """
    d = np.asarray(d, dtype=float)
    right = (1.0 - d / h) * _gauss_mass(t, d - h, d) + _gauss_first_moment(t, d - h, d) / h
    left = (1.0 + d / h) * _gauss_mass(t, d, d + h) - _gauss_first_moment(t, d, d + h) / h
    return np.maximum(right, 0.0), np.maximum(left, 0.0)


@dataclass(frozen=True)
class _Operator:
    """Precomputed row data of the discrete G_t on a fixed (m, dx) grid."""

    band: np.ndarray        # full-hat weights, offsets -K..K
    edge_left: np.ndarray   # per-row surplus of the j=0 hat (half outside window)
    edge_right: np.ndarray  # per-row surplus of the j=m-1 hat
    tail_left: np.ndarray   # per-row mass of (-inf, x_min]
    tail_right: np.ndarray  # per-row mass of [x_max, inf)
    row_sum: np.ndarray

    def apply(self, values: np.ndarray, left_tail: float, right_tail: float) -> np.ndarray:
        acc = np.convolve(values, self.band, mode="same")
        acc -= values[0] * self.edge_left
        acc -= values[-1] * self.edge_right
        acc += left_tail * self.tail_left
        acc += right_tail * self.tail_right
        return acc / self.row_sum


@lru_cache(maxsize=256)
def _build_operator(m: int, dx: float, t: float, radius: float) -> _Operator:
    half_width = int(math.ceil(radius * math.sqrt(2.0 * t) / dx))
    offsets = np.arange(-half_width, half_width + 1) * dx
    right, left = _hat_halves(t, offsets, dx)
    band = right + left

    i = np.arange(m)
    # Node j=0 carries only the right half of its hat (the left half lies
    # outside the window); j=m-1 only the left half.  The banded convolution
    # used full hats, so the other halves are subtracted per row.
    d0 = i * dx                 # x_i - x_min
    d1 = (i - (m - 1)) * dx     # x_i - x_max
    _, edge_left = _hat_halves(t, d0, dx)
    edge_right, _ = _hat_halves(t, d1, dx)

    tail_left = 0.5 * erfc(d0 / math.sqrt(4.0 * t))
    tail_right = 0.5 * erfc(-d1 / math.sqrt(4.0 * t))

    row_sum = (
        np.convolve(np.ones(m), band, mode="same")
        - edge_left
        - edge_right
        + tail_left
        + tail_right
    )
    return _Operator(band, edge_left, edge_right, tail_left, tail_right, row_sum)


def apply_G(p: Profile, t: float, truncation_radius: float = 6.0) -> Profile:
    """Gaussian semigroup step: p_t convolved with the profile.

    The result keeps the input tails (the tails are fixed points of the
    convolution at any finite distance scale used here).
    """
    spec = KernelSpec(t, truncation_radius)  # validates t and radius
    op = _build_operator(p.grid.m, p.grid.dx, spec.t, spec.truncation_radius)
    out = op.apply(p.values, p.left_tail, p.right_tail)
    return Profile(p.grid, out, p.left_tail, p.right_tail)


def apply_cut(p: Profile, m: float) -> Profile:
    """Cut operator: pointwise min(., m) on values and tails."""
    if m <= 0:
        raise ValueError(f"cut level must be positive, got {m}")
    return Profile(
        p.grid,
        np.minimum(p.values, m),
        min(p.left_tail, m),
        min(p.right_tail, m),
    )
