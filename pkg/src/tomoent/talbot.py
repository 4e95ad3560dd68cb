"""Entangled Talbot carpets: coefficients, slit-comb basis, and indicators.

The two-photon state is ``sum_{d1,d2} C[d1,d2] |d1>_A |d2>_B`` with a
Gaussian coefficient matrix set by the SPDC spatial correlation ``R``.
Each ``|d>`` is a comb of narrow Gaussian slit images ``T_d(x)`` behind a
grating. Three indicators are provided:

* ``tei_position``: mutual information of the position-position density
  ``|Psi(x_A, x_B)|^2``;
* ``svne``: entropy of the Schmidt weights of ``C``;
* ``cglmp_id``: the Bell-type expression built from four D-outcome
  Fourier-basis measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .numerics import (
    Axis1D,
    DiscreteJoint,
    JointGrid,
    NumericalInvariantError,
    discrete_entropy,
    discrete_mutual_information,
    mutual_information,
    normalize,
)

#: Relative size of the last retained grating order.
M_TAIL = 1e-12

#: Largest basis overlap for which patch factorization is treated as exact.
PATCH_OVERLAP_BOUND = 1e-20

#: Tolerated probability mass outside an evaluation window.
WINDOW_MASS_LOSS = 1e-9

#: Correlations used for the indicator-vs-D sweep.
FIGURE_R_VALUES = (0.9998, 0.99998, 1.0)
#: A weakly entangled, near-threshold correlation.
TEXT_R_VALUE = 0.998


@dataclass(frozen=True)
class TalbotParams:
    """Geometry and source parameters of the entangled Talbot setup.

    Lengths are in units of the grating period unless ``ell`` is changed.
    ``s``, ``delta``, ``sigma`` and ``kappa_plus`` default to ``1/D``,
    ``0.025 s``, ``0.05 ell`` and ``9 ell``.
    """

    D: int
    R: float
    ell: float = 1.0
    s: float | None = None
    delta: float | None = None
    sigma: float | None = None
    kappa_plus: float | None = None

    def __post_init__(self):
        if int(self.D) != self.D or self.D < 2:
            raise ValueError(f"slit count D must be an integer >= 2, got {self.D}")
        object.__setattr__(self, "D", int(self.D))
        if not 0.0 <= self.R <= 1.0:
            raise ValueError(f"spatial correlation R must lie in [0, 1], got {self.R}")
        object.__setattr__(self, "R", float(self.R))
        if self.s is None:
            object.__setattr__(self, "s", 1.0 / self.D)
        if self.delta is None:
            object.__setattr__(self, "delta", 0.025 * self.s)
        if self.sigma is None:
            object.__setattr__(self, "sigma", 0.05 * self.ell)
        if self.kappa_plus is None:
            object.__setattr__(self, "kappa_plus", 9.0 * self.ell)
        for name in ("ell", "s", "delta", "sigma", "kappa_plus"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def kappa_minus(self) -> float:
        # from R = (k+^2 - k-^2) / (k+^2 + k-^2)
        return self.kappa_plus * math.sqrt((1.0 - self.R) / (1.0 + self.R))

    @property
    def inv_delta_plus_sq(self) -> float:
        """``1/Delta_+^2 = 1/kappa_+^2 + 1/kappa_-^2`` (inf at R = 1)."""
        if self.R == 1.0:
            return math.inf
        return 1.0 / self.kappa_plus**2 + 1.0 / self.kappa_minus**2

    @property
    def delta_plus_sq(self) -> float:
        return 1.0 / self.inv_delta_plus_sq

    @property
    def delta_minus_sq(self) -> float:
        """``Delta_-^2``; negative for R > 0, infinite at R = 0."""
        inv = 1.0 / self.kappa_plus**2 - (
            math.inf if self.R == 1.0 else 1.0 / self.kappa_minus**2
        )
        if inv == 0.0:
            return math.inf
        return 1.0 / inv

    def as_dict(self) -> dict:
        return {
            "D": self.D,
            "R": self.R,
            "ell": self.ell,
            "s": self.s,
            "delta": self.delta,
            "sigma": self.sigma,
            "kappa_plus": self.kappa_plus,
        }


@dataclass(frozen=True, eq=False)
class CoeffMatrix:
    c: np.ndarray
    params: TalbotParams | None = None

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("coefficient matrix must be square")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def D(self) -> int:
        return self.c.shape[0]


def _as_array(c) -> np.ndarray:
    return c.c if isinstance(c, CoeffMatrix) else np.asarray(c, dtype=float)


def coeff_matrix(params: TalbotParams) -> CoeffMatrix:
    """Frobenius-normalized coefficients ``C[d1, d2]``.

    At ``R = 1`` the Gaussian collapses to a Kronecker delta and the
    result is ``I / sqrt(D)`` exactly.
    """
    D = params.D
    if params.R == 1.0:
        return CoeffMatrix(np.eye(D) / math.sqrt(D), params)
    d = np.arange(D, dtype=float)
    a = params.s**2 * params.inv_delta_plus_sq / 4.0
    quad = d[:, None] ** 2 - 2.0 * params.R * np.outer(d, d) + d[None, :] ** 2
    # shift by the minimum exponent so the largest entry is 1 before scaling
    expo = -a * quad
    c = np.exp(expo - expo.max())
    return CoeffMatrix(c / np.sqrt(np.sum(c * c)), params)


def schmidt_weights(c) -> np.ndarray:
    lam = np.linalg.svd(_as_array(c), compute_uv=False)
    lam = np.where(lam < 1e-14, 0.0, lam)
    return lam**2


def svne(c) -> float:
    """Subsystem von Neumann entropy in bits from the singular values of ``c``."""
    # a product state can come out at -1e-16 from rounding of the weights
    return max(0.0, discrete_entropy(schmidt_weights(c)))


def subsystem_density(c) -> np.ndarray:
    """Reduced density matrix ``rho_A = C C^T`` of arm A."""
    arr = _as_array(c)
    return arr @ arr.T


# --- slit-comb basis --------------------------------------------------------


def default_m_max(params: TalbotParams, tail: float = M_TAIL) -> int:
    """Smallest M with ``exp(-(2 pi M sigma)^2 / (2 ell^2)) < tail``."""
    # (2 pi M sigma / ell)^2 / 2 > -ln(tail)
    bound = math.sqrt(-2.0 * math.log(tail)) * params.ell / (2.0 * math.pi * params.sigma)
    return int(math.floor(bound)) + 1


@dataclass(frozen=True, eq=False)
class TalbotBasis:
    """Truncated slit-comb basis ``T_d(x)`` for ``|m| <= M``."""

    params: TalbotParams
    M: int
    amplitude: float
    u: np.ndarray = field(repr=False)

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    @property
    def order_weights(self) -> np.ndarray:
        """Normalized intensity weight ``v_m`` of each grating order."""
        u2 = self.u**2
        return u2 / np.sum(u2)

    def centers(self, d: int) -> np.ndarray:
        p = self.params
        return d * p.s + self.orders * p.ell


def talbot_basis(params: TalbotParams, M: int | None = None) -> TalbotBasis:
    """Basis with analytic normalization ``A_d`` (independent of ``d``)."""
    if M is None:
        M = default_m_max(params)
    if M < 0:
        raise ValueError("order truncation M must be >= 0")
    m = np.arange(-M, M + 1, dtype=float)
    u = np.exp(-((2.0 * math.pi * m * params.sigma) ** 2) / (2.0 * params.ell**2))
    dm = m[:, None] - m[None, :]
    # int exp(-(x-a)^2/4d^2 - (x-b)^2/4d^2) dx = sqrt(2 pi) d exp(-(a-b)^2 / 8d^2)
    overlap = np.exp(-((dm * params.ell) ** 2) / (8.0 * params.delta**2))
    norm_sq = math.sqrt(2.0 * math.pi) * params.delta * float(u @ overlap @ u)
    u.setflags(write=False)
    return TalbotBasis(params, int(M), 1.0 / math.sqrt(norm_sq), u)


def basis_function(d: int, x, basis: TalbotBasis) -> np.ndarray:
    """Evaluate ``T_d(x)``."""
    p = basis.params
    if not 0 <= d < p.D:
        raise ValueError(f"slit index {d} outside 0..{p.D - 1}")
    x = np.asarray(x, dtype=float)
    diff = x[..., None] - basis.centers(d)
    return basis.amplitude * np.sum(basis.u * np.exp(-diff**2 / (4.0 * p.delta**2)), axis=-1)


def gram_matrix(basis: TalbotBasis) -> np.ndarray:
    """Analytic overlaps ``<T_d | T_d'>``."""
    p = basis.params
    d = np.arange(p.D)
    m = basis.orders
    sep = (d[:, None, None, None] - d[None, :, None, None]) * p.s + (
        m[None, None, :, None] - m[None, None, None, :]
    ) * p.ell
    kern = np.exp(-(sep**2) / (8.0 * p.delta**2))
    uu = np.outer(basis.u, basis.u)
    g = np.einsum("abmn,mn->ab", kern, uu)
    return basis.amplitude**2 * math.sqrt(2.0 * math.pi) * p.delta * g


def max_patch_overlap(basis: TalbotBasis) -> float:
    """Largest overlap factor between two distinct Gaussian patches."""
    p = basis.params
    k = np.arange(-2 * basis.M, 2 * basis.M + 1)
    dd = np.arange(-(p.D - 1), p.D)
    sep = np.abs(dd[:, None] * p.s + k[None, :] * p.ell).ravel()
    sep = sep[sep > 1e-12 * p.ell]
    return float(np.exp(-sep.min() ** 2 / (8.0 * p.delta**2)))


def default_window(basis: TalbotBasis) -> tuple[float, float]:
    ell = basis.params.ell
    return -(basis.M + 1) * ell, (basis.M + 2) * ell


def _window_fraction(basis: TalbotBasis, lo: float, hi: float) -> np.ndarray:
    """Fraction of ``|T_d|^2`` inside ``[lo, hi]`` for each d."""
    p = basis.params
    v = basis.order_weights
    out = np.empty(p.D)
    for d in range(p.D):
        c = basis.centers(d)
        out[d] = np.sum(v * (ndtr((hi - c) / p.delta) - ndtr((lo - c) / p.delta)))
    return out


def position_tomogram(
    c,
    basis: TalbotBasis,
    axes: tuple[Axis1D, Axis1D] | None = None,
    cells_per_delta: float = 1.0,
) -> JointGrid:
    """Normalized position-position density ``|Psi(x_A, x_B)|^2``.

    Without ``axes`` both arms use :func:`default_window` sampled at
    ``delta / cells_per_delta``. Intended for small ``M``; the full default
    truncation makes the grid impractically large.
    """
    arr = _as_array(c)
    p = basis.params
    if arr.shape != (p.D, p.D):
        raise ValueError("coefficient matrix does not match the basis slit count")
    if axes is None:
        lo, hi = default_window(basis)
        n = int(math.ceil((hi - lo) * cells_per_delta / p.delta)) + 1
        axes = (Axis1D(lo, hi, n), Axis1D(lo, hi, n))
    ax_a, ax_b = axes

    f_a = _window_fraction(basis, ax_a.lo, ax_a.hi)
    f_b = _window_fraction(basis, ax_b.lo, ax_b.hi)
    lost = 1.0 - float(np.sum(arr**2 * np.outer(f_a, f_b)))
    if lost > WINDOW_MASS_LOSS:
        raise NumericalInvariantError(
            f"window too small: {lost:.3e} of the probability mass lies outside"
        )

    t_a = np.stack([basis_function(d, ax_a.points, basis) for d in range(p.D)])
    t_b = np.stack([basis_function(d, ax_b.points, basis) for d in range(p.D)])
    psi = t_a.T @ arr @ t_b
    return normalize(JointGrid(ax_a, ax_b, psi * psi))


def patch_table(c, basis: TalbotBasis) -> np.ndarray:
    """Probability of each Gaussian patch, indexed ``[(d1, m1), (d2, m2)]``."""
    arr = _as_array(c)
    v = basis.order_weights
    p = basis.params
    k = v.size
    table = (arr**2)[:, None, :, None] * v[None, :, None, None] * v[None, None, None, :]
    table = table.reshape(p.D * k, p.D * k)
    return table / np.sum(table)


def tei_position(
    params: TalbotParams,
    method: str = "patch",
    M: int | None = None,
    cells_per_delta: float = 1.0,
) -> float:
    """Tomographic entanglement indicator of the position slice, in bits.

    ``method="patch"`` uses the disjoint-patch factorization: every patch is
    the same 2-D Gaussian, so shape entropies cancel and the indicator is
    the discrete mutual information of the patch-probability table. It
    requires the patch overlap to be below :data:`PATCH_OVERLAP_BOUND`.

    ``method="grid"`` integrates the sampled density directly. It defaults
    to ``M = 2`` to keep the grid tractable.
    """
    c = coeff_matrix(params)
    if method == "patch":
        basis = talbot_basis(params, M)
        overlap = max_patch_overlap(basis)
        if overlap > PATCH_OVERLAP_BOUND:
            raise NumericalInvariantError(
                f"patch overlap {overlap:.3e} too large for factorization; use method='grid'"
            )
        return discrete_mutual_information(patch_table(c, basis))
    if method == "grid":
        basis = talbot_basis(params, 2 if M is None else M)
        return mutual_information(position_tomogram(c, basis, cells_per_delta=cells_per_delta))
    raise ValueError(f"unknown method {method!r}")


# --- Fourier-basis measurements and the CGLMP expression --------------------


@dataclass(frozen=True)
class MeasurementSetting:
    side: str
    shift: float

    def __post_init__(self):
        if self.side not in ("A", "B"):
            raise ValueError(f"side must be 'A' or 'B', got {self.side!r}")
        if not -0.5 < self.shift <= 0.5:
            raise ValueError(f"phase shift must lie in (-0.5, 0.5], got {self.shift}")


A1 = MeasurementSetting("A", 0.0)
A2 = MeasurementSetting("A", 0.5)
B1 = MeasurementSetting("B", 0.25)
B2 = MeasurementSetting("B", -0.25)


def _setting_matrix(setting: MeasurementSetting, D: int) -> np.ndarray:
    """Rows are the D outcome states of ``setting`` in the slit basis."""
    d = np.arange(D)
    k = np.arange(D)[:, None]
    sign = 1.0 if setting.side == "A" else -1.0
    return np.exp(2j * np.pi * d * (sign * k + setting.shift) / D) / math.sqrt(D)


def measurement_state(setting: MeasurementSetting, outcome: int, D: int) -> np.ndarray:
    if not 0 <= outcome < D:
        raise ValueError(f"outcome {outcome} outside 0..{D - 1}")
    return _setting_matrix(setting, D)[outcome]


def joint_outcome_distribution(
    c, setting_a: MeasurementSetting, setting_b: MeasurementSetting
) -> DiscreteJoint:
    """``p[f, g] = |(<f_a| x <g_b|) Psi>|^2`` for outcomes f on A and g on B."""
    if setting_a.side != "A" or setting_b.side != "B":
        raise ValueError("expected an A-side setting followed by a B-side setting")
    arr = _as_array(c)
    D = arr.shape[0]
    amp = _setting_matrix(setting_a, D).conj() @ arr @ _setting_matrix(setting_b, D).conj().T
    p = np.abs(amp) ** 2
    return DiscreteJoint(p / np.sum(p))


def _p_a_eq_b_plus(p: np.ndarray, k: int) -> float:
    """``P(A = B + k mod D)`` from a table indexed ``[a, b]``."""
    D = p.shape[0]
    q = np.arange(D)
    return float(np.sum(p[(q + k) % D, q]))


def _p_b_eq_a_plus(p: np.ndarray, k: int) -> float:
    """``P(B = A + k mod D)`` from a table indexed ``[a, b]``."""
    D = p.shape[0]
    q = np.arange(D)
    return float(np.sum(p[q, (q + k) % D]))


def cglmp_id(c) -> float:
    """CGLMP value ``I_D`` for the canonical settings; exceeds 2 only if entangled."""
    arr = _as_array(c)
    D = arr.shape[0]
    p11 = joint_outcome_distribution(arr, A1, B1).p
    p12 = joint_outcome_distribution(arr, A1, B2).p
    p21 = joint_outcome_distribution(arr, A2, B1).p
    p22 = joint_outcome_distribution(arr, A2, B2).p
    total = 0.0
    for k in range(D // 2):
        j_k = (
            _p_a_eq_b_plus(p11, k)
            - _p_a_eq_b_plus(p11, -k - 1)
            + _p_b_eq_a_plus(p12, k)
            - _p_b_eq_a_plus(p12, -k - 1)
            + _p_b_eq_a_plus(p21, k + 1)
            - _p_b_eq_a_plus(p21, -k)
            + _p_a_eq_b_plus(p22, k)
            - _p_a_eq_b_plus(p22, -k - 1)
        )
        total += (1.0 - 2.0 * k / (D - 1)) * j_k
    return total


def tei_discrete_basis(c, phase_shifts: bool = False) -> float:
    """Indicator from the A1-B1 outcome table, in bits.

    The tomographic reading uses the A1 and B1 Fourier bases without the
    phase shifters (``alpha = beta = 0``). ``phase_shifts=True`` keeps the
    CGLMP shifts ``alpha_1 = 0``, ``beta_1 = 0.25`` instead.
    """
    if phase_shifts:
        sa, sb = A1, B1
    else:
        sa, sb = MeasurementSetting("A", 0.0), MeasurementSetting("B", 0.0)
    return discrete_mutual_information(joint_outcome_distribution(c, sa, sb))
