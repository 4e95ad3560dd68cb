"""
CGLMP test for slit qudits
==========================

The CGLMP expression combines four D-outcome measurements, two per photon,
each a Fourier basis with a phase offset. Local hidden-variable models keep
it at or below 2.
"""

import math

from tomoent import talbot as tb

# The four settings (phase offsets in units of 2 pi / D)
for s in (tb.A1, tb.A2, tb.B1, tb.B2):
    print(s)

# Maximally entangled pairs violate the bound; D = 2 reproduces the
# Tsirelson value 2 sqrt(2).
print()
for D in range(2, 11):
    i_max = tb.cglmp_id(tb.coeff_matrix(tb.TalbotParams(D, 1.0)))
    i_prod = tb.cglmp_id(tb.coeff_matrix(tb.TalbotParams(D, 0.0)))
    print(f"D = {D:2d}:  I_D(R=1) = {i_max:.6f}   I_D(R=0) = {i_prod:.6f}")
print("2 sqrt(2) =", 2 * math.sqrt(2))

# How much correlation is needed to break the local bound?
print()
D = 5
for R in (0.99, 0.998, 0.9998, 0.99998):
    print(f"D = {D}, R = {R}:  I_D = {tb.cglmp_id(tb.coeff_matrix(tb.TalbotParams(D, R))):.4f}")
