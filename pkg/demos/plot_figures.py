"""
Plots of the indicator sweep and the time-time slices
=====================================================

Requires matplotlib (``pip install .[plot]``). Writes PNG files to the
current directory.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from tomoent import biphoton as bp  # noqa: E402
from tomoent import talbot as tb  # noqa: E402

# Indicators against the slit count for the three correlations
Ds = np.arange(2, 11)
fig, axes = plt.subplots(2, 2, figsize=(9, 7), sharex=True)
panels = [
    ("position MI", lambda p, c: tb.tei_position(p)),
    ("Schmidt entropy", lambda p, c: tb.svne(c)),
    ("Fourier-outcome MI", lambda p, c: tb.tei_discrete_basis(c)),
    ("CGLMP I_D", lambda p, c: tb.cglmp_id(c)),
]
for ax, (title, fn) in zip(axes.ravel(), panels):
    for R, colour in zip(tb.FIGURE_R_VALUES, ("tab:red", "tab:blue", "k")):
        values = []
        for D in Ds:
            p = tb.TalbotParams(int(D), R)
            values.append(fn(p, tb.coeff_matrix(p)))
        ax.plot(Ds, values, "o-", color=colour, label=f"R = {R}")
    ax.set_title(title)
    ax.set_xlabel("D")
axes[0, 0].legend()
fig.tight_layout()
fig.savefig("talbot_sweep.png", dpi=120)

# Time-time slices of the two comb states and their difference
params, window = bp.load_calibrated()
w = bp.TimeWindow(window.half_width, 512)
grids = [bp.closed_form_slice(s, w, params) for s in bp.STATES]
grids.append(bp.slice_difference(w, params, *grids))
fig, axes = plt.subplots(1, 3, figsize=(13, 4))
extent = [w.axis.lo, w.axis.hi, w.axis.lo, w.axis.hi]
for ax, g, title in zip(axes, grids, ("alpha", "beta", "|alpha - beta|")):
    ax.imshow(g.values.T, origin="lower", extent=extent, cmap="viridis")
    ax.set_title(title)
    ax.set_xlabel("t_S [s]")
    ax.set_ylabel("t_I [s]")
fig.tight_layout()
fig.savefig("biphoton_slices.png", dpi=120)
print("wrote talbot_sweep.png and biphoton_slices.png")
