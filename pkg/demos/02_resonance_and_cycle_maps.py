"""Resonance map and transfer-matrix map over the (F_S, F_RF) plane.

Two complementary views of where population transfer happens:

* the sideband picture: interaction strength sum_n Omega_n^2 L(detuning),
  which lights up along the multiphoton resonance arcs n w = W_carrier;
* the semiclassical transfer-matrix picture: the population transferred
  after N RF cycles, built from Landau-Zener passages at the level
  crossings and the phase accumulated between them.

The second map only exists inside the classically allowed region, whose
straight boundary lines (field extremum just reaching a crossing field)
are overlaid.

Run:  python3 demos/02_resonance_and_cycle_maps.py
Output: demos/output/maps.png
"""

import numpy as np
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from rfstark.core import CoupledSystem, mhz_to_rad, preset
from rfstark.floquet import GridSpec, classical_boundaries, resonance_map
from rfstark.lzs import lzs_map

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

system = CoupledSystem(preset("left-resonance"), mhz_to_rad(0.1))
omega = mhz_to_rad(8.0)
grid = GridSpec(0.0, 0.8, 300, 0.0, 0.8, 300)

print("computing resonance map (300 x 300)...")
res = resonance_map(system, omega, grid, workers=4)
print("computing 3-cycle transfer-matrix map (300 x 300)...")
pb, flag = lzs_map(system, omega, grid, 3, workers=4)
print(f"allowed region covers {100 * flag.mean():.1f}% of the grid")

extent = (grid.f_s_min, grid.f_s_max, grid.f_rf_min, grid.f_rf_max)
fig, axes = plt.subplots(1, 2, figsize=(11, 5), sharey=True)
axes[0].imshow(res, origin="lower", extent=extent, aspect="auto")
axes[0].set_title("sideband interaction strength")
axes[1].imshow(pb, origin="lower", extent=extent, aspect="auto", vmax=1.0)
axes[1].set_title("P(transfer) after 3 cycles")
f_s = np.linspace(0.0, 0.8, 100)
for ax in axes:
    for line in classical_boundaries(system):
        f_rf = np.array([line.f_rf_at(v) for v in f_s])
        ok = (f_rf >= 0) & (f_rf <= 0.8)
        ax.plot(f_s[ok], f_rf[ok], "w--", lw=1)
    ax.set_xlabel("F_S (V/cm)")
axes[0].set_ylabel("F_RF (V/cm)")
fig.tight_layout()
fig.savefig(OUT / "maps.png", dpi=150)
print(f"wrote {OUT / 'maps.png'}")
