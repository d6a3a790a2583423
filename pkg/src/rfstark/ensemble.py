"""Seeded Monte-Carlo simulation of many atom pairs.

One probe particle sits at a fixed point; its partner is drawn from a 3D
Gaussian ellipsoid (the second laser-excited cylinder) a distance d away.
Each pair couples with V_dd = mu_product / r^3; on an n-photon resonance
the doubly-excited-state fraction of a pair is sin^2(Omega_n t / 2) with
Omega_n = 2 V_dd |J_n(x, y)|.  Ensemble averaging over the distance spread
saturates and broadens the single-pair interference pattern.

Positions are drawn from numpy's default PCG64 generator seeded explicitly;
identical (seed, geometry, count) inputs regenerate bit-identical samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants

from .core import FieldDrive, StarkModel, drive_from_mixing_angle
from .floquet import bessel_arguments
from .besselx import GenBesselArgs, gen_bessel_sum

# V_dd [rad/us] = DIPOLE_COUPLING_UM3_PER_US * mu_product [a0^2 e^2] / r^3 [um^3]
# with e^2 a0^2 / (4 pi eps0 hbar) converted to um^3/us; value 6.12616e-3.
_A0 = constants.physical_constants["Bohr radius"][0]
DIPOLE_COUPLING_UM3_PER_US = (
    constants.e**2 * _A0**2 / (4.0 * math.pi * constants.epsilon_0 * constants.hbar)
) * 1e12


@dataclass(frozen=True)
class PairGeometry:
    """Two-cylinder sampling geometry; lengths in um, dipoles in a0^2 e^2."""

    d: float = 25.0  # inter-volume distance
    sigma_long: float = 200.0  # 1/sqrt(e) half-length along the cylinder axis
    sigma_trans: float = 8.0  # 1/sqrt(e) radius, both transverse directions
    mu_product: float = 800.0**2

    def __post_init__(self):
        if min(self.d, self.sigma_long, self.sigma_trans) <= 0:
            raise ValueError("all geometry lengths must be > 0")


@dataclass(frozen=True)
class PairEnsemble:
    seed: int
    geometry: PairGeometry
    positions: np.ndarray  # (count, 3) offsets (x, y, z) in um
    couplings: np.ndarray  # (count,) V_dd in rad/us

    @property
    def count(self) -> int:
        return len(self.couplings)

    def distances(self) -> np.ndarray:
        x, y, z = self.positions.T
        return np.sqrt(x**2 + (y + self.geometry.d) ** 2 + z**2)


def coupling_from_distance(mu_product: float, r_um: float):
    """V_dd = mu_product / r^3, converted to rad/us."""
    return DIPOLE_COUPLING_UM3_PER_US * mu_product / r_um**3


def sample_ensemble(
    geometry: PairGeometry, count: int, seed: int
) -> PairEnsemble:
    """Draw partner positions and their dipole-dipole couplings.

    The long axis (x) uses sigma_long, both transverse axes (y, z) use
    sigma_trans; the probe sits a distance d away along y.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    positions = rng.standard_normal((count, 3)) * np.array(
        [geometry.sigma_long, geometry.sigma_trans, geometry.sigma_trans]
    )
    x, y, z = positions.T
    r = np.sqrt(x**2 + (y + geometry.d) ** 2 + z**2)
    couplings = coupling_from_distance(geometry.mu_product, r)
    return PairEnsemble(
        seed=seed, geometry=geometry, positions=positions, couplings=couplings
    )


def pp_fraction(
    ensemble: PairEnsemble,
    model: StarkModel,
    drive: FieldDrive,
    n: int,
    t: float,
) -> float:
    """Ensemble-mean doubly-excited fraction after interaction time t.

    Per pair: sin^2(Omega_n t / 2) with Omega_n = 2 V_dd |J_n(x, y)|, the
    pair's bare coupling distributed onto sideband n.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    args = bessel_arguments(model, drive)
    amp = abs(gen_bessel_sum(GenBesselArgs(n, args.x, args.y)))
    return float(np.mean(np.sin(ensemble.couplings * amp * t) ** 2))


@dataclass(frozen=True)
class MixingAngleScan:
    n: int
    omega: float
    f_eff: float
    theta: np.ndarray
    pp: np.ndarray  # ensemble-mean pp fraction
    single_pair: np.ndarray  # squared Bessel amplitude (weak-coupling shape)


def resonant_effective_field(model: StarkModel, omega: float, n: int) -> float:
    """f_eff of the n-photon resonance arc, sqrt(2 (w0 - n omega) / alpha)."""
    arg = 2.0 * (model.w0 - n * omega) / model.alpha
    if arg < 0:
        raise ValueError(
            f"no real {n}-photon resonance: w0 - n*omega < 0 for this model"
        )
    return math.sqrt(arg)


def mixing_angle_scan(
    geometry: PairGeometry,
    model: StarkModel,
    omega: float,
    n: int,
    theta: np.ndarray,
    t: float,
    count: int,
    seed: int,
) -> MixingAngleScan:
    """Scan the mixing angle along the n-photon resonance arc.

    Every theta keeps f_eff fixed on resonance: f_static = f_eff cos(theta),
    f_rf = sqrt(2) f_eff sin(theta).  Returns the ensemble curve and the
    squared-Bessel single-pair shape.
    """
    f_eff = resonant_effective_field(model, omega, n)
    ens = sample_ensemble(geometry, count, seed)
    theta = np.asarray(theta, dtype=float)
    pp = np.empty_like(theta)
    single = np.empty_like(theta)
    for i, th in enumerate(theta):
        drive = drive_from_mixing_angle(f_eff, th, omega)
        args = bessel_arguments(model, drive)
        amp = gen_bessel_sum(GenBesselArgs(n, args.x, args.y))
        single[i] = amp * amp
        pp[i] = float(np.mean(np.sin(ens.couplings * abs(amp) * t) ** 2))
    return MixingAngleScan(
        n=n, omega=omega, f_eff=f_eff, theta=theta, pp=pp, single_pair=single
    )
