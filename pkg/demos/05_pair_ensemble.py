"""Monte-Carlo ensemble of dipole-coupled atom pairs on a resonance arc.

One probe atom faces a partner drawn from an elongated Gaussian cloud a
distance d away; each pair couples as V_dd = mu_product / r^3.  Scanning
the drive mixing angle theta (static vs RF character at fixed effective
field, i.e. staying on the n-photon resonance) traces out the squared
generalized Bessel weight.  Averaging sin^2(V_dd |J_n| t) over the
distance spread saturates the peaks and broadens the curve, while the
interference zeros of J_n survive as sharp dips.

Run:  python3 demos/05_pair_ensemble.py
Output: demos/output/pair_ensemble.png
"""

import math

import numpy as np
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from rfstark.core import mhz_to_rad, preset
from rfstark.ensemble import PairGeometry, mixing_angle_scan

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

model = preset("left-resonance")
omega = mhz_to_rad(8.0)
geo = PairGeometry()
weak = PairGeometry(mu_product=geo.mu_product / 100.0)
theta = np.linspace(0.0, math.pi / 2, 200)
SEED = 13

fig, axes = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
for ax, n in zip(axes.flat, (0, -1, -2, -3)):
    scan = mixing_angle_scan(geo, model, omega, n, theta, 20.0, 10_000, SEED)
    wscan = mixing_angle_scan(weak, model, omega, n, theta, 20.0, 10_000, SEED)
    ax.plot(theta, scan.pp, "-", lw=1, label="ensemble mean")
    ax.plot(
        theta,
        scan.single_pair * scan.pp.max() / scan.single_pair.max(),
        "--",
        lw=1,
        label="single-pair weight (scaled)",
    )
    ax.set_title(f"n = {n} (f_eff = {scan.f_eff:.3f} V/cm)")
    r = np.corrcoef(wscan.pp, wscan.single_pair)[0, 1]
    print(
        f"n = {n:+d}: ensemble peak {scan.pp.max():.3f}; at 100x weaker "
        f"coupling the curve shape matches the squared weight (r = {r:.4f})"
    )
axes[0, 0].legend(fontsize=8)
for ax in axes[1]:
    ax.set_xlabel("mixing angle theta (rad)")
for ax in axes[:, 0]:
    ax.set_ylabel("doubly-excited fraction")
fig.tight_layout()
fig.savefig(OUT / "pair_ensemble.png", dpi=150)
print(f"wrote {OUT / 'pair_ensemble.png'}")
