"""Independent reference implementations used only by the tests.

These deliberately avoid the package's vectorized code paths: loops over
explicit outcomes, arbitrary-precision sums, and direct evaluation of the
wavefunction from its definition.
"""

import cmath
import math

import mpmath
import numpy as np

# Frozen outputs of the oracles below; the tests recompute and compare them.
CGLMP_MAX_ENTANGLED = {2: 2.8284271247461894, 3: 2.8729340511723365}
GAUSSIAN_ENTROPY_BITS = 0.5 * math.log2(2 * math.pi * math.e)  # 2.047095585180641

# CGLMP phase settings in units of 2 pi / D
ALPHAS = (0.0, 0.5)
BETAS = (0.25, -0.25)


def _outcome_vector(D, outcome, shift, side):
    sign = 1 if side == "A" else -1
    return [cmath.exp(2j * math.pi * j * (sign * outcome + shift) / D) / math.sqrt(D)
            for j in range(D)]


def joint_probability(c, a_shift, b_shift, k, l):
    """``|<k_A| <l_B| psi>|^2`` by explicit double summation."""
    D = len(c)
    va = _outcome_vector(D, k, a_shift, "A")
    vb = _outcome_vector(D, l, b_shift, "B")
    amp = 0j
    for j1 in range(D):
        for j2 in range(D):
            amp += va[j1].conjugate() * vb[j2].conjugate() * c[j1][j2]
    return abs(amp) ** 2


def brute_force_cglmp(c):
    """CGLMP value by enumerating every joint outcome of every setting pair."""
    c = [[float(x) for x in row] for row in np.asarray(c)]
    D = len(c)
    norm = sum(x * x for row in c for x in row)
    prob = {}
    for a in range(2):
        for b in range(2):
            for k in range(D):
                for l in range(D):
                    prob[a, b, k, l] = joint_probability(c, ALPHAS[a], BETAS[b], k, l) / norm

    def p_a_minus_b(a, b, shift):
        # P(A_a = B_b + shift mod D)
        return sum(prob[a, b, k, l] for k in range(D) for l in range(D)
                   if (k - l - shift) % D == 0)

    def p_b_minus_a(a, b, shift):
        # P(B_b = A_a + shift mod D)
        return sum(prob[a, b, k, l] for k in range(D) for l in range(D)
                   if (l - k - shift) % D == 0)

    total = 0.0
    for k in range(D // 2):
        plus = (p_a_minus_b(0, 0, k) + p_b_minus_a(1, 0, k + 1)
                + p_a_minus_b(1, 1, k) + p_b_minus_a(0, 1, k))
        minus = (p_a_minus_b(0, 0, -k - 1) + p_b_minus_a(1, 0, -k)
                 + p_a_minus_b(1, 1, -k - 1) + p_b_minus_a(0, 1, -k - 1))
        total += (1 - 2 * k / (D - 1)) * (plus - minus)
    return total


def comb_sum(tau, rate, n_teeth, alternating=False, dps=40):
    """``sum_{|n| <= N} (+-1)^n exp(i n rate tau)`` in arbitrary precision."""
    with mpmath.workdps(dps):
        theta = mpmath.mpf(tau) * mpmath.mpf(rate)
        total = mpmath.mpc(0)
        for n in range(-n_teeth, n_teeth + 1):
            sign = -1 if (alternating and n % 2) else 1
            total += sign * mpmath.expj(n * theta)
        return complex(total)


def wavefunction(params, c, x_a, x_b, M):
    """``Psi(x_a, x_b) = sum C[d1, d2] T_d1(x_a) T_d2(x_b)``, unnormalized basis."""
    D = params.D

    def comb(d, x):
        out = np.zeros_like(x)
        for m in range(-M, M + 1):
            u = math.exp(-((2 * math.pi * m * params.sigma) ** 2) / (2 * params.ell**2))
            out += u * np.exp(-((x - d * params.s - m * params.ell) ** 2) / (4 * params.delta**2))
        return out

    ta = [comb(d, x_a) for d in range(D)]
    tb = [comb(d, x_b) for d in range(D)]
    psi = np.zeros((x_a.size, x_b.size))
    for d1 in range(D):
        for d2 in range(D):
            psi += c[d1, d2] * np.outer(ta[d1], tb[d2])
    return psi


def riemann_mi(density, cell_a, cell_b):
    """Mutual information in bits of a sampled density, written out longhand."""
    density = density / (density.sum() * cell_a * cell_b)
    pa = density.sum(axis=1) * cell_b
    pb = density.sum(axis=0) * cell_a

    def h(w, cell):
        w = w[w > 0]
        return -float((w * np.log2(w)).sum()) * cell

    return h(pa, cell_a) + h(pb, cell_b) - h(density, cell_a * cell_b)
