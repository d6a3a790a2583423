"""Direct integration of the coupled two-level amplitude equations.

    i dT1/dt = W1(t) T1 + (omega0/2) T2
    i dT2/dt = W2(t) T2 + (omega0/2) T1

with W1 = 0 and W2(t) the Stark shift at the instantaneous field.  This is
the independent check on the sideband and transfer-matrix pictures: the
same physics with none of their approximations.  Fixed-step RK4 keeps runs
deterministic and bit-reproducible; the drive is smooth and periodic, so
adaptivity buys nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import CoupledSystem, FieldDrive, StarkKind

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(**kwargs):  # same algorithm, interpreted
        return lambda f: f


NORM_TOL = 1e-8


class InitialState(Enum):
    STATE1 = 1
    STATE2 = 2


class StepSizeError(ArithmeticError):
    """Norm drift exceeded tolerance; halve dt and rerun."""


@dataclass(frozen=True)
class EvolutionResult:
    times: np.ndarray  # us
    pop1: np.ndarray
    pop2: np.ndarray
    norm_drift: float  # max |pop1 + pop2 - 1| over the sampled run


@njit(cache=True)
def _rk4_loop(
    n_steps,
    dt,
    omega,
    f_s,
    f_rf,
    rf_phase,
    w0,
    coef,
    is_linear,
    half_coupling,
    c1_0,
    c2_0,
    stride,
    pop1,
    pop2,
):
    c1 = c1_0
    c2 = c2_0
    drift = 0.0
    j = 0
    for step in range(n_steps + 1):
        if step % stride == 0:
            p1 = (c1 * c1.conjugate()).real
            p2 = (c2 * c2.conjugate()).real
            pop1[j] = p1
            pop2[j] = p2
            j += 1
            d = abs(p1 + p2 - 1.0)
            if d > drift:
                drift = d
        if step == n_steps:
            break
        t = step * dt
        # Three field samples per step: t, t + dt/2, t + dt.
        f0 = f_s + f_rf * math.cos(omega * t + rf_phase)
        fh = f_s + f_rf * math.cos(omega * (t + 0.5 * dt) + rf_phase)
        f1 = f_s + f_rf * math.cos(omega * (t + dt) + rf_phase)
        if is_linear:
            w2_0 = w0 - coef * f0
            w2_h = w0 - coef * fh
            w2_1 = w0 - coef * f1
        else:
            w2_0 = w0 - 0.5 * coef * f0 * f0
            w2_h = w0 - 0.5 * coef * fh * fh
            w2_1 = w0 - 0.5 * coef * f1 * f1

        k1_1 = -1j * half_coupling * c2
        k1_2 = -1j * (w2_0 * c2 + half_coupling * c1)

        a1 = c1 + 0.5 * dt * k1_1
        a2 = c2 + 0.5 * dt * k1_2
        k2_1 = -1j * half_coupling * a2
        k2_2 = -1j * (w2_h * a2 + half_coupling * a1)

        b1 = c1 + 0.5 * dt * k2_1
        b2 = c2 + 0.5 * dt * k2_2
        k3_1 = -1j * half_coupling * b2
        k3_2 = -1j * (w2_h * b2 + half_coupling * b1)

        d1 = c1 + dt * k3_1
        d2 = c2 + dt * k3_2
        k4_1 = -1j * half_coupling * d2
        k4_2 = -1j * (w2_1 * d2 + half_coupling * d1)

        c1 = c1 + dt / 6.0 * (k1_1 + 2.0 * k2_1 + 2.0 * k3_1 + k4_1)
        c2 = c2 + dt / 6.0 * (k1_2 + 2.0 * k2_2 + 2.0 * k3_2 + k4_2)
    return drift


def default_dt(drive: FieldDrive) -> float:
    return drive.period / 4096.0


def evolve(
    system: CoupledSystem,
    drive: FieldDrive,
    t_end: float,
    dt: float | None = None,
    initial: InitialState = InitialState.STATE1,
    rf_phase: float = 0.0,
    sample_stride: int | None = None,
    check_norm: bool = True,
) -> EvolutionResult:
    """Propagate the amplitudes from t = 0 to t_end with fixed-step RK4.

    rf_phase shifts the drive to F(t) = f_static + f_rf cos(omega t + phase);
    the default 0 starts at the field maximum.  sample_stride controls how
    many integration steps separate stored samples (default: about 4000
    stored points).
    """
    if t_end <= 0:
        raise ValueError("t_end must be > 0")
    if dt is None:
        dt = default_dt(drive)
    if dt <= 0 or dt > drive.period / 1000.0:
        raise ValueError(
            f"dt must satisfy 0 < dt <= period/1000 = {drive.period / 1000.0:g}"
        )
    n_steps = int(math.ceil(t_end / dt))
    if sample_stride is None:
        sample_stride = max(1, n_steps // 4000)
    n_samples = n_steps // sample_stride + 1
    pop1 = np.empty(n_samples)
    pop2 = np.empty(n_samples)
    model = system.stark
    is_linear = model.kind is StarkKind.LINEAR
    c1_0, c2_0 = (1 + 0j, 0j) if initial is InitialState.STATE1 else (0j, 1 + 0j)
    drift = _rk4_loop(
        n_steps,
        dt,
        drive.omega,
        drive.f_static,
        drive.f_rf,
        rf_phase,
        model.w0,
        model.k if is_linear else model.alpha,
        is_linear,
        0.5 * system.omega0,
        c1_0,
        c2_0,
        sample_stride,
        pop1,
        pop2,
    )
    if check_norm and drift > NORM_TOL:
        raise StepSizeError(
            f"norm drift {drift:.3e} exceeds {NORM_TOL:.0e}; halve dt "
            f"(currently {dt:g} us) and rerun"
        )
    times = np.arange(n_samples) * (sample_stride * dt)
    return EvolutionResult(times=times, pop1=pop1, pop2=pop2, norm_drift=drift)


def convergence_check(
    system: CoupledSystem,
    drive: FieldDrive,
    t_end: float,
    dt: float,
    initial: InitialState = InitialState.STATE1,
) -> float:
    """Max pointwise population difference between runs at dt and dt/2.

    Scales as dt^4; halving dt should shrink it by about 16x.
    """
    coarse = evolve(
        system, drive, t_end, dt, initial, sample_stride=1, check_norm=False
    )
    fine = evolve(
        system, drive, t_end, dt / 2.0, initial, sample_stride=2, check_norm=False
    )
    n = min(len(coarse.pop2), len(fine.pop2))
    return float(
        max(
            np.max(np.abs(coarse.pop1[:n] - fine.pop1[:n])),
            np.max(np.abs(coarse.pop2[:n] - fine.pop2[:n])),
        )
    )
