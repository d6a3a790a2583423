"""Classical-limit densities of occurring fields and energies.

In the low-frequency limit the sideband population approaches the density
of values taken by the instantaneous field (an arcsine law between the two
turning points F_S +- F_RF) pushed through the Stark shift.  For a quadratic
shift with f_rf > |f_static| the field crosses zero during the cycle and the
energy density acquires a third asymptote at w0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import FieldDrive, StarkKind, StarkModel
from .floquet import spectrum


def field_density(drive: FieldDrive, f) -> np.ndarray:
    """Probability density of the instantaneous field value.

    1 / (pi sqrt(f_rf^2 - (f - f_static)^2)) inside the open interval
    (f_static - f_rf, f_static + f_rf), zero outside, +inf at the turning
    points.
    """
    if drive.f_rf <= 0:
        raise ValueError("field density degenerates to a delta for f_rf = 0")
    f_arr = np.atleast_1d(np.asarray(f, dtype=float))
    u = f_arr - drive.f_static
    inside = np.abs(u) < drive.f_rf
    edge = np.abs(u) == drive.f_rf
    out = np.zeros_like(f_arr)
    out[inside] = 1.0 / (np.pi * np.sqrt(drive.f_rf**2 - u[inside] ** 2))
    out[edge] = np.inf
    return out if np.ndim(f) else float(out[0])


def field_density_integral(drive: FieldDrive, f_lo: float, f_hi: float) -> float:
    """Exact integral of field_density over [f_lo, f_hi] via the arcsine
    antiderivative; the turning-point singularities are integrable."""
    if drive.f_rf <= 0:
        raise ValueError("field density degenerates to a delta for f_rf = 0")

    def anti(f):
        u = np.clip((f - drive.f_static) / drive.f_rf, -1.0, 1.0)
        return math.asin(u) / math.pi

    return anti(f_hi) - anti(f_lo)


def _field_branches(model: StarkModel, w):
    """Solutions F of energy2(F) = w with |dW/dF| at each, as (F, slope) pairs.

    Linear: one branch.  Quadratic: two branches +-sqrt(2(w0 - w)/alpha)
    for w < w0; the slope vanishes at w = w0 (the F = 0 turning point).
    """
    if model.kind is StarkKind.LINEAR:
        return [((model.w0 - w) / model.k, abs(model.k))]
    arg = 2.0 * (model.w0 - w) / model.alpha
    if arg < 0:
        return []
    f = math.sqrt(arg)
    slope = model.alpha * f
    return [(f, slope), (-f, slope)]


def energy_asymptotes(model: StarkModel, drive: FieldDrive) -> list[float]:
    """Energies where the density diverges: the Stark shift at the two field
    turning points, plus w0 when the field range includes zero (quadratic)."""
    lo = drive.f_static - drive.f_rf
    hi = drive.f_static + drive.f_rf
    asym = [float(model.energy2(hi)), float(model.energy2(lo))]
    if model.kind is StarkKind.QUADRATIC and lo < 0.0 < hi:
        asym.append(model.w0)
    return sorted(set(asym))


def energy_density(model: StarkModel, drive: FieldDrive, w) -> np.ndarray:
    """Pushforward of field_density through W2(F), evaluated at energy w.

    Sums over all field branches that land inside the field support.
    Returns +inf exactly at an asymptote.
    """
    w_arr = np.atleast_1d(np.asarray(w, dtype=float))
    out = np.zeros_like(w_arr)
    for i, wi in enumerate(w_arr):
        total = 0.0
        for f_br, slope in _field_branches(model, wi):
            dens = float(field_density(drive, f_br))
            if dens == 0.0:
                continue
            if slope == 0.0 or not math.isfinite(dens):
                total = math.inf
                break
            total += dens / slope
        out[i] = total
    return out if np.ndim(w) else float(out[0])


def energy_density_integral(model: StarkModel, drive: FieldDrive) -> float:
    """Integral of energy_density over its full support.

    Computed per branch with the arcsine antiderivative (change of variables
    back to the field), so the integrable divergences are handled exactly.
    Equals 1 by conservation of probability.
    """
    lo = drive.f_static - drive.f_rf
    hi = drive.f_static + drive.f_rf
    if model.kind is StarkKind.LINEAR:
        return field_density_integral(drive, lo, hi)
    total = field_density_integral(drive, max(lo, 0.0), hi) if hi > 0 else 0.0
    if lo < 0:
        total += field_density_integral(drive, lo, min(hi, 0.0))
    return total


@dataclass(frozen=True)
class ClassicalComparison:
    """Sideband populations vs the frequency-scaled classical density."""

    omega: float
    n: np.ndarray
    energies: np.ndarray  # rad/us
    populations: np.ndarray
    classical_scaled: np.ndarray  # omega * energy_density at each energy
    moving_avg: np.ndarray
    asymptotes: list[float] = field(default_factory=list)


def moving_average(values: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average; the window shrinks symmetrically at the ends."""
    if window < 1 or window % 2 == 0:
        raise ValueError("window must be a positive odd integer")
    half = window // 2
    out = np.empty_like(values, dtype=float)
    for i in range(len(values)):
        k = min(half, i, len(values) - 1 - i)
        out[i] = values[i - k : i + k + 1].mean()
    return out


def sideband_vs_classical(
    model: StarkModel,
    drive_template: FieldDrive,
    omega_list,
    window: int = 5,
) -> list[ClassicalComparison]:
    """For each omega: sideband populations at the sideband energies, the
    classical density scaled by omega (so spacing x density matches the
    population level), and a centered moving average of the populations."""
    results = []
    for omega in omega_list:
        drive = FieldDrive(drive_template.f_static, drive_template.f_rf, omega)
        sp = spectrum(model, drive)
        energies = sp.energies()
        pops = sp.populations()
        dens = omega * np.asarray(energy_density(model, drive, energies))
        results.append(
            ClassicalComparison(
                omega=omega,
                n=np.arange(sp.n_min, sp.n_max + 1),
                energies=energies,
                populations=pops,
                classical_scaled=dens,
                moving_avg=moving_average(pops, window),
                asymptotes=energy_asymptotes(model, drive),
            )
        )
    return results
