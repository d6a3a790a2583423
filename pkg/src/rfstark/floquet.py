"""Sideband spectra, resonance conditions and coupling strengths.

A periodically driven level decomposes into a ladder of sidebands spaced by
the drive quantum omega.  For a linear Stark shift the amplitude of sideband
n is J_n(k f_rf / omega); for a quadratic shift it is the generalized Bessel
J_n(alpha f_rf f_static / omega, alpha f_rf^2 / (8 omega)).  The bare
coupling omega0 is distributed over the sidebands with these amplitudes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .besselx import GenBesselArgs, gen_bessel_spectrum, gen_bessel_spectrum_rows
from .core import (
    CoupledSystem,
    FieldDrive,
    StarkKind,
    StarkModel,
    crossing_fields,
    effective_field,
)


@dataclass(frozen=True)
class Sideband:
    n: int
    energy: float  # rad/us
    amplitude: float  # signed

    @property
    def population(self) -> float:
        return self.amplitude**2


@dataclass(frozen=True)
class SidebandSpectrum:
    drive: FieldDrive
    model: StarkModel
    sidebands: tuple[Sideband, ...]  # n ascending

    @property
    def n_min(self) -> int:
        return self.sidebands[0].n

    @property
    def n_max(self) -> int:
        return self.sidebands[-1].n

    def populations(self) -> np.ndarray:
        return np.array([s.population for s in self.sidebands])

    def energies(self) -> np.ndarray:
        return np.array([s.energy for s in self.sidebands])


def bessel_arguments(model: StarkModel, drive: FieldDrive) -> GenBesselArgs:
    """The (x, y) pair entering the sideband amplitudes (n is left at 0).

    Linear: (k f_rf / omega, 0).  Quadratic:
    (alpha f_rf f_static / omega, alpha f_rf^2 / (8 omega)).
    """
    if model.kind is StarkKind.LINEAR:
        return GenBesselArgs(0, model.k * drive.f_rf / drive.omega, 0.0)
    return GenBesselArgs(
        0,
        model.alpha * drive.f_rf * drive.f_static / drive.omega,
        model.alpha * drive.f_rf**2 / (8.0 * drive.omega),
    )


def carrier_energy(model: StarkModel, drive: FieldDrive) -> float:
    """Energy of the n = 0 sideband (rad/us).

    Linear: w0 - k f_static.  Quadratic: w0 - alpha f_eff^2 / 2, which
    includes the AC Stark shift -alpha f_rf^2 / 4.
    """
    if model.kind is StarkKind.LINEAR:
        return model.w0 - model.k * drive.f_static
    return model.w0 - 0.5 * model.alpha * effective_field(drive) ** 2


def sideband_range(model: StarkModel, drive: FieldDrive) -> int:
    """Half-width N of the retained sideband ladder, ceil(|x| + 2|y|) + 40."""
    args = bessel_arguments(model, drive)
    return int(math.ceil(abs(args.x) + 2.0 * abs(args.y))) + 40


def amplitudes(model: StarkModel, drive: FieldDrive, nmax: int) -> np.ndarray:
    """Signed sideband amplitudes for n in [-nmax, nmax] (index n + nmax)."""
    args = bessel_arguments(model, drive)
    return gen_bessel_spectrum(args.x, args.y, nmax)


def spectrum(model: StarkModel, drive: FieldDrive) -> SidebandSpectrum:
    """Full sideband spectrum of state |2> under the drive."""
    nmax = sideband_range(model, drive)
    amp = amplitudes(model, drive, nmax)
    e0 = carrier_energy(model, drive)
    bands = tuple(
        Sideband(n=n, energy=e0 - n * drive.omega, amplitude=amp[n + nmax])
        for n in range(-nmax, nmax + 1)
    )
    return SidebandSpectrum(drive=drive, model=model, sidebands=bands)


def resonance_detuning(system: CoupledSystem, drive: FieldDrive, n: int) -> float:
    """Detuning of the n-photon resonance, carrier_energy - n*omega (rad/us).

    Zero exactly when n omega = w0 - k f_static (linear) or
    n omega = w0 - alpha (f_static^2 + f_rf^2/2)/2 (quadratic).
    """
    return carrier_energy(system.stark, drive) - n * drive.omega


def coupling_amplitude(system: CoupledSystem, drive: FieldDrive, n: int) -> float:
    """Signed n-photon coupling, omega0 * J_n(...); sign carries interference."""
    nmax = max(abs(n), 0)
    amp = amplitudes(system.stark, drive, nmax)
    return system.omega0 * amp[n + nmax]


def coupling_strength(system: CoupledSystem, drive: FieldDrive, n: int) -> float:
    """Omega_n = omega0 * |J_n(...)|, the n-photon avoided-crossing width."""
    return abs(coupling_amplitude(system, drive, n))


@dataclass(frozen=True)
class GridSpec:
    """Rectangular (f_static, f_rf) grid, inclusive of both endpoints."""

    f_s_min: float = 0.0
    f_s_max: float = 0.8
    f_s_steps: int = 400
    f_rf_min: float = 0.0
    f_rf_max: float = 0.8
    f_rf_steps: int = 400

    def __post_init__(self):
        if self.f_s_steps < 1 or self.f_rf_steps < 1:
            raise ValueError("grid steps must be positive")

    def f_s_values(self) -> np.ndarray:
        return np.linspace(self.f_s_min, self.f_s_max, self.f_s_steps)

    def f_rf_values(self) -> np.ndarray:
        return np.linspace(self.f_rf_min, self.f_rf_max, self.f_rf_steps)


DEFAULT_LINEWIDTH = 2.0 * math.pi * 0.2  # rad/us; mimics the plotted line width


def _map_row(system, omega, f_s_vals, f_rf, linewidth):
    """Interaction-strength row at fixed f_rf: sum_n Omega_n^2 L(detuning).

    Along a row y is constant (quadratic) or both arguments are constant
    (linear), so the Bessel evaluation is batched over all f_s at once.
    """
    model = system.stark
    if model.kind is StarkKind.LINEAR:
        x = np.full_like(f_s_vals, model.k * f_rf / omega)
        y = 0.0
        e0 = model.w0 - model.k * f_s_vals
    else:
        x = model.alpha * f_rf * f_s_vals / omega
        y = model.alpha * f_rf**2 / (8.0 * omega)
        e0 = model.w0 - 0.5 * model.alpha * (f_s_vals**2 + 0.5 * f_rf**2)
    nmax = int(math.ceil(float(np.max(np.abs(x))) + 2.0 * abs(y))) + 40
    amp = gen_bessel_spectrum_rows(x, y, nmax)
    n = np.arange(-nmax, nmax + 1)
    det = e0[:, None] - n[None, :] * omega
    lorentz = linewidth**2 / (det**2 + linewidth**2)
    return np.sum((system.omega0 * amp) ** 2 * lorentz, axis=1)


def resonance_map(
    system: CoupledSystem,
    omega: float,
    grid: GridSpec = GridSpec(),
    linewidth: float = DEFAULT_LINEWIDTH,
    workers: int = 1,
) -> np.ndarray:
    """Interaction strength on the (f_static, f_rf) grid.

    Entry [i, j] is sum_n Omega_n^2 * L(detuning_n) at
    (f_s_values[j], f_rf_values[i]) with a Lorentzian mask L of the given
    linewidth.  Output is bit-identical for any worker count: rows are
    independent and written back by index.
    """
    f_s_vals = grid.f_s_values()
    f_rf_vals = grid.f_rf_values()
    out = np.zeros((len(f_rf_vals), len(f_s_vals)))

    def compute(i):
        out[i] = _map_row(system, omega, f_s_vals, f_rf_vals[i], linewidth)

    if workers <= 1:
        for i in range(len(f_rf_vals)):
            compute(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(compute, range(len(f_rf_vals))))
    return out


@dataclass(frozen=True)
class BoundaryLine:
    """A line f_static + slope_sign * f_rf = intercept in the drive plane.

    Marks drives whose field extremum just reaches a crossing field.
    """

    slope_sign: int  # +1 or -1 multiplying f_rf
    intercept: float  # V/cm

    def f_rf_at(self, f_s: float) -> float:
        return (self.intercept - f_s) / self.slope_sign


def classical_boundaries(system: CoupledSystem) -> list[BoundaryLine]:
    """Boundary lines of the classically allowed region.

    Linear: f_s + f_rf = F_lin and f_s - f_rf = F_lin.  Quadratic adds the
    third line f_s - f_rf = -F_quad above which both crossings are reached.
    """
    fields = crossing_fields(system.stark)
    if system.stark.kind is StarkKind.LINEAR:
        f_lin = fields[0]
        return [BoundaryLine(+1, f_lin), BoundaryLine(-1, f_lin)]
    f_quad = fields[1]
    return [
        BoundaryLine(+1, f_quad),
        BoundaryLine(-1, f_quad),
        BoundaryLine(-1, -f_quad),
    ]
