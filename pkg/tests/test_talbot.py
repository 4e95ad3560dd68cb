import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import CGLMP_MAX_ENTANGLED, brute_force_cglmp, riemann_mi, wavefunction
from tomoent import talbot as tb
from tomoent.numerics import Axis1D, NumericalInvariantError


def C(D, R):
    return tb.coeff_matrix(tb.TalbotParams(D, R))


# --- parameters and coefficients ----------------------------------------------


def test_param_defaults():
    p = tb.TalbotParams(10, 0.9998)
    assert p.s == pytest.approx(0.1)
    assert p.delta == pytest.approx(0.0025)
    assert p.sigma == pytest.approx(0.05)
    assert p.kappa_plus == pytest.approx(9.0)
    # R recovered from the two widths
    kp, km = p.kappa_plus, p.kappa_minus
    assert (kp**2 - km**2) / (kp**2 + km**2) == pytest.approx(0.9998)


@pytest.mark.parametrize("kwargs", [dict(D=1, R=0.5), dict(D=3, R=1.5), dict(D=3, R=-0.1),
                                    dict(D=2.5, R=0.5), dict(D=3, R=0.5, delta=-1.0)])
def test_param_validation(kwargs):
    with pytest.raises(ValueError):
        tb.TalbotParams(**kwargs)


def test_delta_signs():
    p = tb.TalbotParams(4, 0.5)
    assert p.delta_plus_sq > 0
    assert p.delta_minus_sq < 0
    assert tb.TalbotParams(4, 0.0).delta_minus_sq == math.inf
    assert tb.TalbotParams(4, 1.0).delta_plus_sq == 0.0


def test_coefficients_at_perfect_correlation():
    c = C(6, 1.0).c
    assert np.array_equal(c, np.eye(6) / math.sqrt(6))


@pytest.mark.parametrize("D,R", [(2, 0.0), (5, 0.9998), (10, 0.998), (7, 0.3)])
def test_coefficients_normalized_symmetric(D, R):
    c = C(D, R).c
    assert np.sum(c * c) == pytest.approx(1.0, abs=1e-14)
    assert np.allclose(c, c.T)


def test_coefficients_match_gaussian_form():
    p = tb.TalbotParams(4, 0.99)
    a = p.s**2 * (1 / p.kappa_plus**2 + 1 / p.kappa_minus**2) / 4
    raw = np.array([[math.exp(-a * (i * i - 2 * p.R * i * j + j * j)) for j in range(4)]
                    for i in range(4)])
    assert np.allclose(C(4, 0.99).c, raw / np.linalg.norm(raw), rtol=1e-13, atol=0)


# --- Schmidt entropy -------------------------------------------------------------


@pytest.mark.parametrize("D", range(2, 11))
def test_svne_limits(D):
    assert tb.svne(C(D, 1.0)) == pytest.approx(math.log2(D), abs=1e-12)
    assert tb.svne(C(D, 0.0)) == pytest.approx(0.0, abs=1e-12)


def test_subsystem_density():
    rho = tb.subsystem_density(C(10, 0.998))
    assert np.trace(rho) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(np.diag(tb.subsystem_density(C(5, 1.0))), 0.2)
    # von Neumann entropy of rho_A equals the Schmidt entropy
    ev = np.clip(np.linalg.eigvalsh(rho), 0, None)
    ev = ev[ev > 0]
    assert -np.sum(ev * np.log2(ev)) == pytest.approx(tb.svne(C(10, 0.998)), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_indicators_monotone_in_r(D, r1, r2):
    lo, hi = sorted((r1, r2))
    for fn in (lambda r: tb.svne(C(D, r)),
               lambda r: tb.tei_position(tb.TalbotParams(D, r)),
               lambda r: tb.tei_discrete_basis(C(D, r))):
        assert fn(lo) <= fn(hi) + 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.floats(0.0, 1.0))
def test_indicators_bounded_by_log_d(D, R):
    c = C(D, R)
    bound = math.log2(D) + 1e-9
    assert 0.0 <= tb.svne(c) <= bound
    assert 0.0 <= tb.tei_position(tb.TalbotParams(D, R)) <= bound
    assert 0.0 <= tb.tei_discrete_basis(c) <= bound


# --- slit-comb basis ----------------------------------------------------------


def test_default_truncation():
    p = tb.TalbotParams(10, 1.0)
    M = tb.default_m_max(p)
    assert M == 24
    u = lambda m: math.exp(-((2 * math.pi * m * p.sigma) ** 2) / 2)  # noqa: E731
    assert u(M) < tb.M_TAIL <= u(M - 1)


def test_basis_translation_and_peaks():
    p = tb.TalbotParams(5, 1.0)
    basis = tb.talbot_basis(p, M=3)
    x = np.linspace(-1.0, 2.0, 3001)
    t0 = tb.basis_function(0, x, basis)
    t2 = tb.basis_function(2, x + 2 * p.s, basis)
    assert np.allclose(t0, t2, rtol=0, atol=1e-12 * t0.max())
    # global maximum at the slit centre, order zero
    assert tb.basis_function(3, 3 * p.s, basis) == pytest.approx(
        tb.basis_function(3, np.linspace(0, 1, 20001), basis).max(), rel=1e-6)
    with pytest.raises(ValueError):
        tb.basis_function(5, x, basis)


def test_gram_matrix_matches_quadrature():
    p = tb.TalbotParams(3, 1.0)
    basis = tb.talbot_basis(p, M=2)
    x = np.linspace(-3.0, 4.0, 280001)
    h = x[1] - x[0]
    t = np.stack([tb.basis_function(d, x, basis) for d in range(3)])
    numeric = t @ t.T * h
    assert np.allclose(numeric, tb.gram_matrix(basis), atol=1e-10)
    assert np.allclose(np.diag(numeric), 1.0, atol=1e-10)


def test_gram_orthonormal_at_default_geometry():
    g = tb.gram_matrix(tb.talbot_basis(tb.TalbotParams(10, 1.0)))
    assert np.allclose(np.diag(g), 1.0, atol=1e-14)
    assert np.max(np.abs(g - np.diag(np.diag(g)))) < 1e-20
    assert tb.max_patch_overlap(tb.talbot_basis(tb.TalbotParams(10, 1.0))) < 1e-20


# --- position indicator -------------------------------------------------------


@pytest.mark.parametrize("D,R", [(2, 1.0), (3, 0.9998), (4, 0.998), (3, 0.5)])
def test_patch_path_matches_direct_wavefunction_oracle(D, R):
    p = tb.TalbotParams(D, R)
    M = 1
    x = np.arange(-(M + 1), M + 2 + 1e-12, p.delta / 2)
    psi = wavefunction(p, C(D, R).c, x, x, M)
    h = x[1] - x[0]
    oracle = riemann_mi(psi**2, h, h)
    assert tb.tei_position(p, "patch", M=M) == pytest.approx(oracle, abs=1e-6)


def test_grid_and_patch_paths_agree():
    p = tb.TalbotParams(4, 0.9998)
    assert tb.tei_position(p, "grid") == pytest.approx(tb.tei_position(p, "patch", M=2), abs=1e-3)


def test_truncation_does_not_change_patch_indicator():
    # order weights enter as an independent factor on each arm and cancel
    p = tb.TalbotParams(6, 0.9998)
    assert tb.tei_position(p, M=2) == pytest.approx(tb.tei_position(p), abs=1e-12)


def test_small_window_is_rejected():
    p = tb.TalbotParams(3, 1.0)
    basis = tb.talbot_basis(p, M=2)
    ax = Axis1D(0.0, 1.0, 801)
    with pytest.raises(NumericalInvariantError, match="window"):
        tb.position_tomogram(C(3, 1.0), basis, axes=(ax, ax))


def test_overlapping_patches_refuse_factorization():
    p = tb.TalbotParams(3, 1.0, delta=0.05)
    with pytest.raises(NumericalInvariantError):
        tb.tei_position(p, "patch")
    with pytest.raises(ValueError):
        tb.tei_position(tb.TalbotParams(3, 1.0), "bogus")


# --- measurements and CGLMP ---------------------------------------------------


@pytest.mark.parametrize("setting", [tb.A1, tb.A2, tb.B1, tb.B2])
@pytest.mark.parametrize("D", [2, 3, 7])
def test_measurement_bases_orthonormal(setting, D):
    u = np.stack([tb.measurement_state(setting, k, D) for k in range(D)])
    assert np.allclose(u @ u.conj().T, np.eye(D), atol=1e-13)


def test_measurement_setting_validation():
    with pytest.raises(ValueError):
        tb.MeasurementSetting("C", 0.0)
    with pytest.raises(ValueError):
        tb.MeasurementSetting("A", 0.7)
    with pytest.raises(ValueError):
        tb.joint_outcome_distribution(C(3, 1.0), tb.B1, tb.A1)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 10), st.floats(0.0, 1.0))
def test_outcome_tables_sum_to_one(D, R):
    for sa in (tb.A1, tb.A2):
        for sb in (tb.B1, tb.B2):
            p = tb.joint_outcome_distribution(C(D, R), sa, sb).p
            assert np.sum(p) == pytest.approx(1.0, abs=1e-12)
            assert np.all(p >= 0)


@pytest.mark.parametrize("D", [2, 3])
def test_cglmp_frozen_oracle_values(D):
    assert tb.cglmp_id(C(D, 1.0)) == pytest.approx(CGLMP_MAX_ENTANGLED[D], abs=1e-12)


@pytest.mark.parametrize("D,R", [(2, 0.7), (3, 0.9998), (4, 1.0), (5, 0.998), (6, 0.0)])
def test_cglmp_matches_brute_force(D, R):
    c = C(D, R)
    assert tb.cglmp_id(c) == pytest.approx(brute_force_cglmp(c.c), abs=1e-12)


@pytest.mark.parametrize("D", range(2, 11))
def test_cglmp_product_state_obeys_local_bound(D):
    assert tb.cglmp_id(C(D, 0.0)) <= 2.0 + 1e-9


@pytest.mark.parametrize("D", range(2, 11))
def test_cglmp_violated_at_perfect_correlation(D):
    assert tb.cglmp_id(C(D, 1.0)) > 2.0


def test_discrete_indicator_limits():
    assert tb.tei_discrete_basis(C(10, 1.0)) == pytest.approx(math.log2(10), abs=1e-12)
    assert tb.tei_discrete_basis(C(10, 0.0)) == pytest.approx(0.0, abs=1e-12)
    # with the CGLMP phase shifters the outcomes are less than perfectly correlated
    assert tb.tei_discrete_basis(C(10, 1.0), phase_shifts=True) < math.log2(10)
