"""Sideband ladder of a quadratically shifting level under an RF drive.

A level whose Stark shift is -alpha F^2 / 2, driven by
F(t) = F_S + F_RF cos(wt), splits into sidebands spaced by the drive
frequency.  The weight of sideband n is the squared generalized Bessel
function J_n(x, y)^2 with x = alpha F_RF F_S / w and y = alpha F_RF^2 / 8w.
This script shows how the ladder widens with RF amplitude and how the
carrier shifts by the AC Stark term -alpha F_RF^2 / 4.

Run:  python3 demos/01_sideband_spectra.py
Output: demos/output/sideband_spectra.png
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from rfstark.core import FieldDrive, mhz_to_rad, preset, rad_to_mhz
from rfstark.floquet import spectrum

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

model = preset("left-resonance")
omega = mhz_to_rad(8.0)
f_s = 0.2

fig, axes = plt.subplots(3, 1, figsize=(7, 8), sharex=True)
for ax, f_rf in zip(axes, (0.1, 0.3, 0.5)):
    sp = spectrum(model, FieldDrive(f_s, f_rf, omega))
    energies = [rad_to_mhz(e) for e in sp.energies()]
    pops = sp.populations()
    ax.stem(energies, pops, basefmt=" ", markerfmt=".")
    ax.set_xlim(-40, 40)
    ax.set_ylabel("population")
    ax.set_title(f"F_RF = {f_rf} V/cm")
    total = float(pops.sum())
    print(
        f"F_RF = {f_rf:4.1f} V/cm: {len(pops)} sidebands retained, "
        f"total population {total:.12f} (sum rule = 1)"
    )
axes[-1].set_xlabel("sideband energy (MHz)")
fig.tight_layout()
fig.savefig(OUT / "sideband_spectra.png", dpi=150)
print(f"wrote {OUT / 'sideband_spectra.png'}")

print()
print("Selection rule at F_S = 0: x = 0, so odd-n weights vanish exactly.")
sp0 = spectrum(model, FieldDrive(0.0, 0.4, omega))
for s in sp0.sidebands:
    if -3 <= s.n <= 3:
        print(f"  n = {s.n:+d}: amplitude = {s.amplitude:+.6f}")
