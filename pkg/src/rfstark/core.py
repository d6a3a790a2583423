"""Domain types, unit conventions and elementary field/energy evaluations.

Everything downstream (sideband spectra, semiclassical propagation, the
classical-limit densities, the time-domain integrator) is built on the three
types defined here: a drive ``F(t) = F_S + F_RF cos(wt)``, a Stark model for
the shifting state, and the coupled system formed by a Stark model plus a
bare coupling strength.

Unit convention: all energies and frequencies are stored internally as
angular frequencies in rad/us.  User-facing I/O (CLI, CSV, config files)
uses ordinary MHz and V/cm; the factor of 2*pi lives only in the two
conversion helpers below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

TWO_PI = 2.0 * math.pi


def mhz_to_rad(f_mhz: float) -> float:
    """Ordinary frequency in MHz -> angular frequency in rad/us."""
    return TWO_PI * f_mhz


def rad_to_mhz(w_rad: float) -> float:
    """Angular frequency in rad/us -> ordinary frequency in MHz."""
    return w_rad / TWO_PI


class StarkKind(Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class FieldDrive:
    """Static plus sinusoidal electric field, F(t) = f_static + f_rf cos(omega t).

    f_static : V/cm (may be negative; scans can cross zero)
    f_rf     : V/cm, >= 0
    omega    : rad/us, > 0
    """

    f_static: float
    f_rf: float
    omega: float

    def __post_init__(self):
        if self.f_rf < 0:
            raise ValueError(f"f_rf must be >= 0, got {self.f_rf}")
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")

    @property
    def period(self) -> float:
        return TWO_PI / self.omega


@dataclass(frozen=True)
class StarkModel:
    """Level-shift model for state |2>; state |1> sits at zero energy.

    Linear:    energy2(F) = w0 - k * F
    Quadratic: energy2(F) = w0 - alpha * F**2 / 2

    w0 in rad/us, k in rad/us per (V/cm), alpha in rad/us per (V/cm)^2.
    """

    kind: StarkKind
    w0: float
    k: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind is StarkKind.LINEAR and self.alpha != 0.0:
            raise ValueError("linear model must not set alpha")
        if self.kind is StarkKind.QUADRATIC and self.k != 0.0:
            raise ValueError("quadratic model must not set k")

    @staticmethod
    def linear(w0: float, k: float) -> "StarkModel":
        return StarkModel(StarkKind.LINEAR, w0, k=k)

    @staticmethod
    def quadratic(w0: float, alpha: float) -> "StarkModel":
        return StarkModel(StarkKind.QUADRATIC, w0, alpha=alpha)

    def energy1(self, f):
        return 0.0 * f

    def energy2(self, f):
        if self.kind is StarkKind.LINEAR:
            return self.w0 - self.k * f
        return self.w0 - 0.5 * self.alpha * f * f


@dataclass(frozen=True)
class CoupledSystem:
    """A Stark model plus the bare coupling strength omega0 (rad/us).

    omega0 is the full avoided-crossing width, i.e. twice the off-diagonal
    coupling matrix element V = omega0 / 2.
    """

    stark: StarkModel
    omega0: float

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be > 0, got {self.omega0}")


def field_at(drive: FieldDrive, t):
    """Instantaneous field F(t) = f_static + f_rf cos(omega t), V/cm."""
    import numpy as np

    return drive.f_static + drive.f_rf * np.cos(drive.omega * t)


def crossing_fields(model: StarkModel) -> list[float]:
    """Fields at which energy2 crosses zero (the energy of state |1>).

    Linear: [w0/k].  Quadratic: [-F_q, +F_q] with F_q = sqrt(2 w0/alpha).
    """
    if model.kind is StarkKind.LINEAR:
        if model.k == 0:
            raise ValueError("linear model with k = 0 has no crossing")
        return [model.w0 / model.k]
    if model.alpha <= 0 or model.w0 <= 0:
        raise ValueError(
            "quadratic model needs w0 > 0 and alpha > 0 for a real crossing "
            f"(w0={model.w0}, alpha={model.alpha})"
        )
    f_q = math.sqrt(2.0 * model.w0 / model.alpha)
    return [-f_q, f_q]


def energy2_at_time(model: StarkModel, drive: FieldDrive, t):
    """W2(t): the static Stark law evaluated at the instantaneous field."""
    return model.energy2(field_at(drive, t))


def effective_field(drive: FieldDrive) -> float:
    """sqrt(f_static^2 + f_rf^2 / 2): the static field whose quadratic shift
    equals the cycle-averaged shift of the combined drive."""
    return math.sqrt(drive.f_static**2 + 0.5 * drive.f_rf**2)


def mixing_angle(drive: FieldDrive) -> float:
    """arctan(f_rf / (sqrt(2) f_static)), in [0, pi/2].

    0 for a pure static field, pi/2 for a pure RF field.
    """
    if drive.f_static == 0 and drive.f_rf == 0:
        raise ValueError("mixing angle undefined for zero drive")
    return math.atan2(drive.f_rf, math.sqrt(2.0) * abs(drive.f_static))


def drive_from_mixing_angle(f_eff: float, theta_f: float, omega: float) -> FieldDrive:
    """Invert (effective field, mixing angle) to (f_static, f_rf).

    f_static = f_eff cos(theta), f_rf = sqrt(2) f_eff sin(theta) is the
    unique nonnegative solution of
        f_eff^2 = f_static^2 + f_rf^2 / 2,
        tan(theta) = f_rf / (sqrt(2) f_static).
    """
    if not 0.0 <= theta_f <= math.pi / 2:
        raise ValueError(f"theta_f must lie in [0, pi/2], got {theta_f}")
    return FieldDrive(
        f_static=f_eff * math.cos(theta_f),
        f_rf=math.sqrt(2.0) * f_eff * math.sin(theta_f),
        omega=omega,
    )


# Named parameter sets: the experimental left/right resonances and the
# illustrative linear case used in the demos and tests.
PRESETS: dict[str, StarkModel] = {
    "left-resonance": StarkModel.quadratic(mhz_to_rad(25.15), mhz_to_rad(347.04)),
    "right-resonance": StarkModel.quadratic(mhz_to_rad(25.15), mhz_to_rad(297.40)),
    "linear-demo": StarkModel.linear(mhz_to_rad(25.0), mhz_to_rad(60.0)),
}


def preset(name: str) -> StarkModel:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; available: {sorted(PRESETS)}"
        ) from None
