"""Low-frequency limit: sideband envelope -> classical field-value density.

As the drive frequency drops, the discrete sideband ladder becomes dense
and its envelope approaches omega times the probability density of the
instantaneous level energy -- the arcsine distribution of the field pushed
through the Stark law, with integrable divergences at the turning points
(and at W0 when the field range crosses zero).

Run:  python3 demos/03_classical_limit.py
Output: demos/output/classical_limit.png
"""

import numpy as np
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from rfstark.classical import sideband_vs_classical
from rfstark.core import FieldDrive, mhz_to_rad, preset, rad_to_mhz

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

model = preset("left-resonance")
template = FieldDrive(0.1, 0.4, 1.0)
freqs = (8.0, 2.0, 0.5, 0.25)
comps = sideband_vs_classical(
    model, template, [mhz_to_rad(f) for f in freqs], window=9
)

fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
for ax, f_mhz, comp in zip(axes.flat, freqs, comps):
    e_mhz = np.array([rad_to_mhz(e) for e in comp.energies])
    ax.plot(e_mhz, comp.populations, ".", ms=3, label="sidebands")
    ax.plot(e_mhz, comp.classical_scaled, "-", lw=1, label="omega x density")
    ax.plot(e_mhz, comp.moving_avg, "-", lw=1, label="moving average")
    for a in comp.asymptotes:
        ax.axvline(rad_to_mhz(a), color="gray", ls=":", lw=0.8)
    ax.set_ylim(0, 0.1)
    ax.set_xlim(-30, 30)
    ax.set_title(f"drive frequency {f_mhz} MHz")
    sel = np.isfinite(comp.classical_scaled) & (comp.classical_scaled > 1e-12)
    err = np.mean(
        np.abs(comp.moving_avg[sel] - comp.classical_scaled[sel])
        / comp.classical_scaled[sel]
    )
    print(f"{f_mhz:5.2f} MHz: mean relative deviation {err:.3f}")
axes[0, 0].legend(fontsize=8)
for ax in axes[1]:
    ax.set_xlabel("energy (MHz)")
fig.tight_layout()
fig.savefig(OUT / "classical_limit.png", dpi=150)
print(f"wrote {OUT / 'classical_limit.png'}")
