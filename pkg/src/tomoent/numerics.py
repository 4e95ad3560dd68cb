"""Sampled distributions and Shannon-entropy kernels.

All continuous entropies use the rectangle rule on uniformly spaced nodes:
every node carries a weight equal to the axis step. With that choice the
marginal of a sampled joint density is an exact row/column sum, so the
mutual information of a grid equals the discrete mutual information of its
cell-probability table and can never be negative beyond roundoff.

Reductions go through ``numpy.sum`` (pairwise summation), which is
single-threaded and deterministic for a fixed array shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Densities below this value count as exact zeros (0 log 0 = 0).
TINY = 1e-300

#: Tolerance on mutual-information nonnegativity.
EPS_NUM = 1e-9


class NumericalInvariantError(ArithmeticError):
    """A computed quantity violated a hard numerical invariant."""


@dataclass(frozen=True)
class Axis1D:
    """Uniformly spaced sample nodes ``lo, lo + step, ..., hi``."""

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"axis needs n >= 2 points, got {self.n}")
        if not self.hi > self.lo:
            raise ValueError(f"axis needs hi > lo, got [{self.lo}, {self.hi}]")
        object.__setattr__(self, "n", int(self.n))

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


def _frozen(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("distribution contains non-finite values")
    if np.any(arr < 0):
        raise ValueError("distribution contains negative values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Marginal1D:
    axis: Axis1D
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values, 1)
        if values.shape != (self.axis.n,):
            raise ValueError("values do not match the axis length")
        object.__setattr__(self, "values", values)

    def mass(self) -> float:
        return float(np.sum(self.values) * self.axis.step)


@dataclass(frozen=True, eq=False)
class JointGrid:
    """Nonnegative density sampled on ``axis_a x axis_b`` (row index = a)."""

    axis_a: Axis1D
    axis_b: Axis1D
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values, 2)
        if values.shape != (self.axis_a.n, self.axis_b.n):
            raise ValueError(
                f"values shape {values.shape} does not match axes "
                f"({self.axis_a.n}, {self.axis_b.n})"
            )
        object.__setattr__(self, "values", values)

    @property
    def cell(self) -> float:
        return self.axis_a.step * self.axis_b.step

    def mass(self) -> float:
        return float(np.sum(self.values) * self.cell)


@dataclass(frozen=True, eq=False)
class DiscreteJoint:
    """Joint probability table of two discrete outcomes."""

    p: np.ndarray

    def __post_init__(self):
        p = _frozen(self.p, 2)
        total = float(np.sum(p))
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "p", p)


def normalize(grid: JointGrid) -> JointGrid:
    """Rescale ``grid`` so that its Riemann sum is one.

    Raises
    ------
    ValueError
        If the grid has no positive cell ("degenerate distribution").
    """
    total = np.sum(grid.values)
    if not total > 0:
        raise ValueError("degenerate distribution: grid has no positive mass")
    return JointGrid(grid.axis_a, grid.axis_b, grid.values / (total * grid.cell))


def _check_normalized(mass: float, what: str) -> None:
    if abs(mass - 1.0) > 1e-9:
        raise ValueError(f"{what} is not normalized (mass {mass!r}); call normalize() first")


def marginals(grid: JointGrid) -> tuple[Marginal1D, Marginal1D]:
    """Marginal densities over axis a (summing out b) and over axis b."""
    _check_normalized(grid.mass(), "grid")
    w_a = np.sum(grid.values, axis=1) * grid.axis_b.step
    w_b = np.sum(grid.values, axis=0) * grid.axis_a.step
    return Marginal1D(grid.axis_a, w_a), Marginal1D(grid.axis_b, w_b)


def _plogp_sum(values: np.ndarray) -> float:
    """Sum of ``w log2 w`` over entries, with 0 log 0 = 0."""
    w = values[values > TINY]
    return float(np.sum(w * np.log2(w)))


def entropy_continuous(dist: Marginal1D | JointGrid) -> float:
    """Differential Shannon entropy in bits, ``-sum w log2 w * cell``."""
    if isinstance(dist, JointGrid):
        measure = dist.cell
    elif isinstance(dist, Marginal1D):
        measure = dist.axis.step
    else:
        raise TypeError(f"cannot take the entropy of {type(dist).__name__}")
    return -_plogp_sum(dist.values) * measure


def _checked_mi(mi: float) -> float:
    if mi < -EPS_NUM:
        raise NumericalInvariantError(
            f"mutual information {mi:.3e} < -{EPS_NUM:g}: quadrature is broken "
            "(grid too coarse or distribution not resolved)"
        )
    return max(mi, 0.0)


def mutual_information(grid: JointGrid) -> float:
    """``S_A + S_B - S_AB`` in bits for a normalized joint density."""
    m_a, m_b = marginals(grid)
    mi = entropy_continuous(m_a) + entropy_continuous(m_b) - entropy_continuous(grid)
    return _checked_mi(mi)


def discrete_entropy(p) -> float:
    """Shannon entropy in bits of a probability vector or table."""
    return -_plogp_sum(np.asarray(p, dtype=float))


def discrete_mutual_information(p: DiscreteJoint | np.ndarray) -> float:
    """Shannon mutual information in bits of a joint probability table."""
    table = p.p if isinstance(p, DiscreteJoint) else np.asarray(p, dtype=float)
    mi = (
        discrete_entropy(np.sum(table, axis=1))
        + discrete_entropy(np.sum(table, axis=0))
        - discrete_entropy(table)
    )
    return _checked_mi(mi)


# --- distributions that depend only on the lag b - a -----------------------


def lag_expand(profile: np.ndarray, axis: Axis1D) -> JointGrid:
    """Square grid with ``values[i, j] = profile[j - i + n - 1]``.

    ``profile`` holds ``2n - 1`` samples at lags ``-(n-1)..(n-1)`` steps.
    The result is not normalized.
    """
    n = axis.n
    profile = np.asarray(profile, dtype=float)
    if profile.shape != (2 * n - 1,):
        raise ValueError(f"lag profile needs {2 * n - 1} samples, got {profile.shape}")
    idx = np.arange(n)[None, :] - np.arange(n)[:, None] + (n - 1)
    return JointGrid(axis, axis, profile[idx])


def lagged_mutual_information(profile: np.ndarray, axis: Axis1D) -> float:
    """Mutual information of ``lag_expand(profile, axis)`` without building it.

    Diagonal ``k`` of the square grid holds ``n - |k|`` equal cells, so the
    joint entropy is a weighted 1-D sum and each marginal is a length-``n``
    box sum of the profile. Agrees with the full-grid route to roundoff.
    """
    n = axis.n
    h = axis.step
    f = np.asarray(profile, dtype=float)
    if f.shape != (2 * n - 1,):
        raise ValueError(f"lag profile needs {2 * n - 1} samples, got {f.shape}")
    if np.any(f < 0) or not np.all(np.isfinite(f)):
        raise ValueError("lag profile must be finite and nonnegative")
    counts = n - np.abs(np.arange(-(n - 1), n))
    total = np.sum(counts * f) * h * h
    if not total > 0:
        raise ValueError("degenerate distribution: lag profile has no positive mass")
    f = f / total

    # row i sums lags -i..n-1-i; column j sums lags j-(n-1)..j
    box = np.convolve(f, np.ones(n), mode="valid") * h
    w_b = box
    w_a = box[::-1]

    pos = f > TINY
    s_ab = -float(np.sum(counts[pos] * f[pos] * np.log2(f[pos]))) * h * h
    s_a = -_plogp_sum(w_a) * h
    s_b = -_plogp_sum(w_b) * h
    return _checked_mi(s_a + s_b - s_ab)
