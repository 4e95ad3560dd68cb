"""Biphoton frequency combs and their time-time tomogram slices.

Two states are compared. In ``alpha`` signal and idler both carry the
in-phase Gaussian comb ``f_cav``; in ``beta`` the signal carries the
alternating comb ``g_cav``. After the pump constraint and the Fourier
transform each time-time slice depends only on the lag
``tau = t_I - t_S``:

    w_alpha(tau) ~ exp(-b tau^2 / 2) |F(tau)|^4
    w_beta(tau)  ~ exp(-b tau^2 / 2) |G(tau) F(tau)|^2

with ``b = dw^2 dW^2 / (dw^2 + dW^2)``, ``F`` the in-phase tooth sum and
``G`` the alternating one. All angular frequencies are in rad/s and times
in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np

from .numerics import (
    Axis1D,
    JointGrid,
    NumericalInvariantError,
    lag_expand,
    lagged_mutual_information,
    mutual_information,
    normalize,
)

TWO_PI = 2.0 * math.pi

ALPHA = "alpha"
BETA = "beta"
STATES = (ALPHA, BETA)


@dataclass(frozen=True)
class BiphotonParams:
    """Comb parameters; defaults are the experimental values (rad/s).

    ``n_teeth`` bounds the tooth sums to ``|n| <= n_teeth`` around the comb
    centre. ``None`` selects :meth:`default_n_teeth`, which spans the
    difference-frequency envelope.
    """

    omega_p: float = TWO_PI * 391.8856e12
    omega_bar: float = TWO_PI * 19.2e9
    delta_omega: float = TWO_PI * 1.92e9
    Omega_0: float = TWO_PI * 10.9e12
    delta_Omega: float = TWO_PI * 6e12
    n_teeth: int | None = None

    def __post_init__(self):
        for name in ("omega_p", "omega_bar", "delta_omega", "Omega_0", "delta_Omega"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.delta_omega < self.omega_bar:
            raise ValueError("tooth width must be smaller than the tooth spacing")
        if self.n_teeth is None:
            object.__setattr__(self, "n_teeth", self.default_n_teeth())
        if int(self.n_teeth) != self.n_teeth or self.n_teeth < 0:
            raise ValueError(f"n_teeth must be a nonnegative integer, got {self.n_teeth}")
        object.__setattr__(self, "n_teeth", int(self.n_teeth))

    def default_n_teeth(self) -> int:
        return math.ceil((self.Omega_0 / 2 + 2.0 * self.delta_Omega) / self.omega_bar)

    @property
    def envelope_rate(self) -> float:
        """``b``: the lag envelope of the slice is ``exp(-b tau^2 / 2)``."""
        dw2, dW2 = self.delta_omega**2, self.delta_Omega**2
        return dw2 * dW2 / (dw2 + dW2)

    @property
    def comb_rate(self) -> float:
        """Phase advance per tooth per unit lag in ``F`` and ``G``."""
        dw2, dW2 = self.delta_omega**2, self.delta_Omega**2
        return self.omega_bar * dW2 / (2.0 * (dw2 + dW2))

    @property
    def comb_period(self) -> float:
        """Lag after which every tooth phase has advanced by 2 pi."""
        return TWO_PI / self.comb_rate

    def as_dict(self) -> dict:
        return {
            "omega_p": self.omega_p,
            "omega_bar": self.omega_bar,
            "delta_omega": self.delta_omega,
            "Omega_0": self.Omega_0,
            "delta_Omega": self.delta_Omega,
            "n_teeth": self.n_teeth,
        }


@dataclass(frozen=True)
class TimeWindow:
    """Square ``[-T, T]^2`` window sampled with ``n_grid`` points per axis."""

    half_width: float
    n_grid: int

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("window half-width must be positive")
        if int(self.n_grid) != self.n_grid or self.n_grid < 2:
            raise ValueError("n_grid must be an integer >= 2")
        object.__setattr__(self, "n_grid", int(self.n_grid))

    @property
    def axis(self) -> Axis1D:
        return Axis1D(-self.half_width, self.half_width, self.n_grid)

    @property
    def step(self) -> float:
        return self.axis.step

    def lags(self) -> np.ndarray:
        """Lags ``k * step`` for ``k = -(n-1)..(n-1)``."""
        return np.arange(-(self.n_grid - 1), self.n_grid) * self.step

    @classmethod
    def default(cls, params: BiphotonParams) -> "TimeWindow":
        return cls(10.0 / params.delta_omega, 4096)


def check_window(window: TimeWindow, params: BiphotonParams) -> None:
    """Reject windows that miss the lag envelope or undersample the comb."""
    min_half = 5.0 / params.delta_omega
    if window.half_width < min_half * (1 - 1e-12):
        raise ValueError(
            f"window smaller than envelope support: T = {window.half_width:.4e} s "
            f"< 5/delta_omega = {min_half:.4e} s"
        )
    if window.step > params.comb_period / 16:
        raise ValueError(
            f"grid step {window.step:.4e} s exceeds comb period / 16 "
            f"({params.comb_period / 16:.4e} s); increase n_grid"
        )


def load_calibrated() -> tuple[BiphotonParams, TimeWindow]:
    """Parameters and window shipped for the reported indicator values."""
    text = resources.files("tomoent.data").joinpath("biphoton_calibrated.cfg").read_text()
    cfg = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            key, _, value = line.partition("=")
            cfg[key.strip()] = value.strip()
    params = BiphotonParams(n_teeth=int(cfg["n_teeth"]))
    window = TimeWindow(float(cfg["window_T_units"]) / params.delta_omega, int(cfg["n_grid"]))
    return params, window


# --- comb factors -----------------------------------------------------------


def _dirichlet(theta, n: int) -> np.ndarray:
    """``sum_{|k| <= n} exp(i k theta)``, which is real."""
    theta = np.asarray(theta, dtype=float)
    # 2 pi periodic; reduce to [-pi, pi] before dividing
    th = theta - TWO_PI * np.round(theta / TWO_PI)
    half = np.sin(th / 2.0)
    small = np.abs(half) < 1e-8
    safe = np.where(small, 1.0, half)
    out = np.sin((2 * n + 1) * th / 2.0) / safe
    limit = (2 * n + 1) * (1.0 - n * (n + 1) * th**2 / 6.0)
    return np.where(small, limit, out)


def comb_factor_F(tau, params: BiphotonParams) -> np.ndarray:
    """In-phase tooth sum ``F(tau)``."""
    theta = np.asarray(tau, dtype=float) * params.comb_rate
    return _dirichlet(theta, params.n_teeth).astype(complex)


def comb_factor_G(tau, params: BiphotonParams) -> np.ndarray:
    """Alternating tooth sum ``G(tau)``; ``(-1)^n = exp(i pi n)`` shifts F by pi."""
    theta = np.asarray(tau, dtype=float) * params.comb_rate
    return _dirichlet(theta + math.pi, params.n_teeth).astype(complex)


def _check_state(state: str) -> None:
    if state not in STATES:
        raise ValueError(f"state must be one of {STATES}, got {state!r}")


def lag_profile(state: str, tau, params: BiphotonParams) -> np.ndarray:
    """Unnormalized closed-form slice as a function of the lag ``tau``."""
    _check_state(state)
    tau = np.asarray(tau, dtype=float)
    env = np.exp(-params.envelope_rate * tau**2 / 2.0)
    f2 = np.abs(comb_factor_F(tau, params)) ** 2
    if state == ALPHA:
        return env * f2 * f2
    return env * f2 * np.abs(comb_factor_G(tau, params)) ** 2


def closed_form_slice(state: str, window: TimeWindow, params: BiphotonParams) -> JointGrid:
    """Normalized ``w(t_S; t_I)`` on the window; row index is ``t_S``."""
    check_window(window, params)
    profile = lag_profile(state, window.lags(), params)
    return normalize(lag_expand(profile, window.axis))


def tei_time_slice(
    state: str, window: TimeWindow, params: BiphotonParams, method: str = "lag"
) -> float:
    """Mutual information of the time-time slice in bits.

    ``method="lag"`` evaluates the same Riemann sums as the full grid but in
    O(n) memory by exploiting the lag structure; ``method="grid"`` builds
    the grid.
    """
    if method == "grid":
        return mutual_information(closed_form_slice(state, window, params))
    if method != "lag":
        raise ValueError(f"unknown method {method!r}")
    check_window(window, params)
    return lagged_mutual_information(lag_profile(state, window.lags(), params), window.axis)


def slice_difference(
    window: TimeWindow,
    params: BiphotonParams,
    w_alpha: JointGrid | None = None,
    w_beta: JointGrid | None = None,
) -> JointGrid:
    """Pointwise ``|w_alpha - w_beta|`` of the two normalized slices."""
    if w_alpha is None:
        w_alpha = closed_form_slice(ALPHA, window, params)
    if w_beta is None:
        w_beta = closed_form_slice(BETA, window, params)
    if w_alpha.axis_a != w_beta.axis_a or w_alpha.axis_b != w_beta.axis_b:
        raise ValueError("grid mismatch: slices are sampled on different axes")
    return JointGrid(w_alpha.axis_a, w_alpha.axis_b, np.abs(w_alpha.values - w_beta.values))


# --- Fourier-transform oracle ----------------------------------------------


def _tooth_comb(nu, params: BiphotonParams, alternating: bool, center: float, flatten: bool):
    """One photon's spectral amplitude about the comb centre.

    Tooth ``k`` is the Gaussian ``exp(-(nu - k wbar)^2 / 2 dw^2)`` under the
    broad envelope ``exp(-(nu - center)^2 / 2 dW^2)``. ``flatten`` divides
    each tooth by its envelope weight so every tooth has unit peak.
    """
    p = params
    env = np.exp(-((nu - center) ** 2) / (2.0 * p.delta_Omega**2))
    out = np.zeros_like(nu)
    for k in range(-p.n_teeth, p.n_teeth + 1):
        tooth = np.exp(-((nu - k * p.omega_bar) ** 2) / (2.0 * p.delta_omega**2)) * env
        if flatten:
            tooth /= math.exp(
                -((k * p.omega_bar - center) ** 2)
                / (2.0 * (p.delta_omega**2 + p.delta_Omega**2))
            )
        out += -tooth if (alternating and k % 2) else tooth
    return out


def envelope_centers(params: BiphotonParams) -> tuple[float, float]:
    """Offsets of the signal and idler envelope centres from the nearest tooth."""
    out = []
    for nu in ((params.omega_p + params.Omega_0) / 2, (params.omega_p - params.Omega_0) / 2):
        out.append(nu - round(nu / params.omega_bar) * params.omega_bar)
    return out[0], out[1]


def fourier_oracle_profile(
    state: str,
    window: TimeWindow,
    params: BiphotonParams,
    flatten: bool = True,
    center: bool = True,
) -> np.ndarray:
    """Lag profile of the slice from a numerical Fourier transform.

    Each photon's spectral amplitude is sampled on a frequency grid and
    transformed with the FFT to times ``t = tau / 2`` at the window lags;
    the two transforms are multiplied and squared. No comb sums or Gaussian
    shift formulas are used. ``center`` puts both envelope centres on a
    tooth; otherwise they sit where ``omega_p`` and ``Omega_0`` place them.
    """
    _check_state(state)
    p = params
    n = window.n_grid
    h = window.step
    # FFT time step h / (2 q) needs a frequency span of 4 pi q / h; pick the
    # smallest integer q that keeps every tooth below Nyquist/2
    reach = p.n_teeth * p.omega_bar + 8.0 * p.delta_omega
    q = max(1, math.ceil(4.0 * reach * h / (4.0 * math.pi)))
    span = 4.0 * math.pi * q / h
    m = 1 << int(math.ceil(math.log2(max(2 * n * q, span / (p.delta_omega / 8.0)))))
    dnu = span / m
    if dnu > p.delta_omega / 8.0:
        raise NumericalInvariantError("frequency grid too coarse to resolve a tooth")
    nu = (np.arange(m) - m // 2) * dnu

    c_s, c_i = (0.0, 0.0) if center else envelope_centers(p)
    spec_s = _tooth_comb(nu, p, alternating=(state == BETA), center=c_s, flatten=flatten)
    spec_i = _tooth_comb(nu, p, alternating=False, center=c_i, flatten=flatten)

    for spec in (spec_s, spec_i):
        energy = spec**2
        outer = np.abs(nu) > span / 4
        if np.sum(energy[outer]) > 1e-6 * np.sum(energy):
            raise NumericalInvariantError("aliasing: spectral energy above Nyquist/2")

    k = np.arange(-(n - 1), n) * q
    amp_s = np.fft.ifft(np.fft.ifftshift(spec_s))[k % m]
    amp_i = np.fft.ifft(np.fft.ifftshift(spec_i))[k % m]
    return np.abs(amp_s * amp_i) ** 2


def fourier_oracle_slice(
    state: str,
    window: TimeWindow,
    params: BiphotonParams,
    flatten: bool = True,
    center: bool = True,
) -> JointGrid:
    """Normalized slice built from :func:`fourier_oracle_profile`."""
    check_window(window, params)
    profile = fourier_oracle_profile(state, window, params, flatten, center)
    return normalize(lag_expand(profile, window.axis))


def relative_linf(a: JointGrid, b: JointGrid) -> float:
    """``max |a - b| / max a`` for grids on identical axes."""
    if a.axis_a != b.axis_a or a.axis_b != b.axis_b:
        raise ValueError("grid mismatch")
    return float(np.max(np.abs(a.values - b.values)) / np.max(a.values))


def oracle_discrepancy(
    state: str,
    window: TimeWindow,
    params: BiphotonParams,
    flatten: bool = True,
    center: bool = True,
) -> float:
    """:func:`relative_linf` between closed-form and oracle slices.

    Works on the lag profiles, which hold every distinct grid value, so the
    full grids are never built.
    """
    check_window(window, params)
    tau = window.lags()
    n = window.n_grid
    counts = n - np.abs(np.arange(-(n - 1), n))
    closed = lag_profile(state, tau, params)
    oracle = fourier_oracle_profile(state, window, params, flatten, center)
    closed = closed / np.sum(counts * closed)
    oracle = oracle / np.sum(counts * oracle)
    return float(np.max(np.abs(closed - oracle)) / np.max(closed))


# --- peaks and normalization diagnostics ------------------------------------


def find_peaks(y: np.ndarray, x: np.ndarray, rel_height: float = 0.1) -> np.ndarray:
    """Positions of local maxima above ``rel_height * max(y)``.

    Each maximum is refined by a parabola through its three samples.
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    h = x[1] - x[0]
    mid = y[1:-1]
    is_peak = (mid > y[:-2]) & (mid >= y[2:]) & (mid > rel_height * y.max())
    i = np.nonzero(is_peak)[0] + 1
    left, centre, right = y[i - 1], y[i], y[i + 1]
    denom = left - 2.0 * centre + right
    shift = np.where(denom != 0, 0.5 * (left - right) / np.where(denom != 0, denom, 1.0), 0.0)
    return x[i] + shift * h


def peak_spacing(state: str, window: TimeWindow, params: BiphotonParams,
                 rel_height: float = 0.1) -> float:
    """Median lag spacing between adjacent peaks of the closed-form slice."""
    tau = window.lags()
    peaks = find_peaks(lag_profile(state, tau, params), tau, rel_height)
    if peaks.size < 2:
        raise ValueError("fewer than two peaks inside the window")
    return float(np.median(np.diff(peaks)))


def normalization_constant(state: str, params: BiphotonParams) -> float:
    """Quadruple tooth sum ``M_alpha`` (or ``M_beta``), excluding ``tau_P``."""
    _check_state(state)
    p = params
    dw2, dW2 = p.delta_omega**2, p.delta_Omega**2
    mu0 = math.sqrt(math.pi * dW2 * dw2 / (2.0 * (dW2 + dw2)))
    n = np.arange(-p.n_teeth, p.n_teeth + 1)
    ones = np.ones(n.size)
    sign = (-1.0) ** np.abs(n) if state == BETA else ones
    # the summand depends on n - n' + m' - m only; count each value
    pair_nn = np.convolve(sign, sign[::-1])
    pair_mm = np.convolve(ones, ones)
    counts = np.convolve(pair_nn, pair_mm)
    j = np.arange(counts.size) - (counts.size - 1) // 2
    rate = p.omega_bar**2 * dW2 / (2.0 * dw2 * (dw2 + dW2))
    return math.pi / mu0 * float(np.sum(counts * np.exp(-rate * j**2)))


def lag_integral(state: str, params: BiphotonParams, window: TimeWindow | None = None) -> float:
    """Numerical integral over the lag of the unnormalized closed form."""
    if window is None:
        window = replace(TimeWindow.default(params), n_grid=1 << 15)
    tau = window.lags()
    return float(np.sum(lag_profile(state, tau, params)) * window.step)
