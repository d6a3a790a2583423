"""Semiclassical transfer-matrix propagation over RF cycles.

Within one RF period the two levels cross at 2 (one crossing field) or 4
(two crossing fields) instants.  Each passage contributes a Landau-Zener
transfer matrix M (or its transpose, depending on the traversal direction);
between passages the states accumulate relative phase in a diagonal matrix
G.  The one-cycle matrix S is the time-ordered product; N cycles reduce to
Chebyshev polynomials of the half-trace because S is unimodular.

Energy convention inside this module: W_b = -W_a = W_2 / 2, so the phase
integral between crossings is int (W_2 / 2) dt.  The conversion to the
convention of the sideband modules happens at the module boundary.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor
from enum import Enum, IntEnum

import numpy as np
from scipy.special import loggamma

from .core import (
    CoupledSystem,
    FieldDrive,
    StarkKind,
    crossing_fields,
    field_at,
)

TANGENT_TOL = 1e-8  # |sin(omega t_c)| below this is a grazing crossing


class DegenerateCrossingError(ValueError):
    """The drive reaches a crossing field only tangentially."""


class Branch(Enum):
    PLUS = "+"
    MINUS = "-"


class StartSegment(IntEnum):
    """Where within the cycle the evolution starts: in the gap before the
    (k+1)-th chronological crossing.  Segments 2 and 3 exist only in the
    four-crossing case."""

    BEFORE_FIRST = 0
    AFTER_FIRST = 1
    AFTER_SECOND = 2
    AFTER_THIRD = 3


@dataclass(frozen=True)
class CrossingEvent:
    t: float  # us, within [0, period)
    field: float  # V/cm, one of the crossing fields
    slope: float  # rad/us^2, |d(W_b - W_a)/dt| at the crossing
    branch: Branch


@dataclass(frozen=True)
class LzsParams:
    """Per-crossing adiabaticity parameters."""

    delta: float
    epsilon: float  # 1 - exp(-2 pi delta)
    phi: float  # Stokes phase, rad

    @staticmethod
    def from_delta(delta: float) -> "LzsParams":
        return LzsParams(
            delta=delta,
            epsilon=-math.expm1(-2.0 * math.pi * delta),
            phi=stokes_phase(delta),
        )


def stokes_phase(delta) -> float:
    """pi/4 + arg Gamma(1 - i delta) + delta (ln delta - 1).

    Approaches pi/4 in the diabatic limit (delta -> 0) and 0 in the
    adiabatic limit (delta -> inf).
    """
    scalar = np.ndim(delta) == 0
    d = np.atleast_1d(np.asarray(delta, dtype=float))
    if np.any(d <= 0):
        raise ValueError("stokes_phase requires delta > 0")
    out = (
        0.25 * math.pi
        + np.imag(loggamma(1.0 - 1j * d))
        + d * (np.log(d) - 1.0)
    )
    return float(out[0]) if scalar else out


def crossings_per_cycle(system: CoupledSystem, drive: FieldDrive) -> list[CrossingEvent]:
    """Time-ordered crossing events within one RF period.

    Solves field_at(t) = F_cross for every crossing field of the model;
    yields 0, 2 or 4 events.  Raises DegenerateCrossingError when the field
    extremum only grazes a crossing.
    """
    model = system.stark
    events: list[CrossingEvent] = []
    if drive.f_rf == 0:
        return events
    omega = drive.omega
    for f_cross in crossing_fields(model):
        u = (f_cross - drive.f_static) / drive.f_rf
        if abs(u) > 1.0 + TANGENT_TOL:
            continue
        if abs(abs(u) - 1.0) <= TANGENT_TOL or math.sqrt(max(0.0, 1.0 - u * u)) < TANGENT_TOL:
            sign = "+" if u > 0 else "-"
            raise DegenerateCrossingError(
                f"drive grazes the crossing field {f_cross:g} V/cm tangentially "
                f"(boundary line f_static {sign} f_rf = {f_cross:g})"
            )
        tc = math.acos(u) / omega
        sin_wt = math.sin(omega * tc)
        if model.kind is StarkKind.LINEAR:
            slope = model.k * drive.f_rf * omega * sin_wt
        else:
            slope = model.alpha * abs(f_cross) * drive.f_rf * omega * sin_wt
        branch = Branch.MINUS if f_cross < 0 else Branch.PLUS
        events.append(CrossingEvent(tc, f_cross, slope, branch))
        events.append(CrossingEvent(drive.period - tc, f_cross, slope, branch))
    events.sort(key=lambda e: e.t)
    return events


def phase_integral(system: CoupledSystem, drive: FieldDrive, t_i: float, t_j: float) -> float:
    """Theta_ij = int_{t_i}^{t_j} W_2(t)/2 dt, by the closed-form
    antiderivative (small-coupling approximation of the adiabatic phase)."""
    if t_j < t_i:
        raise ValueError("phase_integral requires t_i <= t_j")
    return _phase_antiderivative(system, drive, t_j) - _phase_antiderivative(
        system, drive, t_i
    )


def _phase_antiderivative(system: CoupledSystem, drive: FieldDrive, t):
    model = system.stark
    omega = drive.omega
    f_s, f_rf = drive.f_static, drive.f_rf
    sin_wt = np.sin(omega * t)
    if model.kind is StarkKind.LINEAR:
        return 0.5 * (model.w0 * t - model.k * (f_s * t + f_rf * sin_wt / omega))
    sin_2wt = np.sin(2.0 * omega * t)
    return 0.5 * (
        model.w0 * t
        - 0.5
        * model.alpha
        * (
            f_s * f_s * t
            + 2.0 * f_s * f_rf * sin_wt / omega
            + f_rf * f_rf * (0.5 * t + sin_2wt / (4.0 * omega))
        )
    )


def transfer_matrix(params: LzsParams) -> np.ndarray:
    """The 2x2 crossing matrix M; use M.T for the opposite traversal sense."""
    root_e = math.sqrt(params.epsilon)
    root_1e = math.sqrt(1.0 - params.epsilon)
    ph = cmath.exp(1j * params.phi)
    return np.array(
        [[root_1e, root_e / ph], [-root_e * ph, root_1e]], dtype=complex
    )


def phase_matrix(theta: float) -> np.ndarray:
    """Free-evolution matrix G = diag(e^{i theta}, e^{-i theta})."""
    ph = cmath.exp(1j * theta)
    return np.array([[ph, 0.0], [0.0, ph.conjugate()]], dtype=complex)


def _cycle_factors(system: CoupledSystem, drive: FieldDrive):
    """Chronological (crossing matrix, gap phase) pairs over one period.

    Odd chronological crossings (1st, 3rd) are traversed in the transposed
    sense.  Gap j runs from crossing j to the next, wrapping to t_1 + T.
    """
    events = crossings_per_cycle(system, drive)
    if not events:
        raise DegenerateCrossingError(
            "no crossings within one cycle: drive lies outside the "
            "classically allowed region"
        )
    k = len(events)
    v = system.omega0 / 2.0
    mats = []
    thetas = []
    for i, ev in enumerate(events):
        params = LzsParams.from_delta(v * v / ev.slope)
        m = transfer_matrix(params)
        mats.append(m.T if i % 2 == 0 else m)
        t_next = events[(i + 1) % k].t + (drive.period if i == k - 1 else 0.0)
        thetas.append(phase_integral(system, drive, ev.t, t_next))
    return mats, thetas


def one_cycle_matrix(
    system: CoupledSystem,
    drive: FieldDrive,
    start_segment: StartSegment = StartSegment.BEFORE_FIRST,
) -> np.ndarray:
    """The unimodular one-cycle propagator S for the chosen start segment.

    Segment s is the cyclic rotation that starts the cycle in the gap just
    before the (s+1)-th chronological crossing.
    """
    mats, thetas = _cycle_factors(system, drive)
    k = len(mats)
    s = int(start_segment)
    if s >= k:
        raise ValueError(f"start segment {s} invalid for {k} crossings per cycle")
    out = np.eye(2, dtype=complex)
    for i in range(k):
        j = (s + i) % k
        out = mats[j] @ out
        out = phase_matrix(thetas[j]) @ out
    return out


def chebyshev_u(n: int, xi):
    """Chebyshev polynomial of the second kind U_n, stable in all regimes.

    Trigonometric form for |xi| < 1, hyperbolic for |xi| > 1, and the
    polynomial limit U_n(+-1) = (+-1)^n (n+1) in between.
    """
    scalar = np.ndim(xi) == 0
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    out = np.empty_like(x)
    inner = np.abs(x) < 1.0 - 1e-9
    outer = np.abs(x) > 1.0 + 1e-12
    edge = ~(inner | outer)
    if np.any(inner):
        th = np.arccos(x[inner])
        out[inner] = np.sin((n + 1) * th) / np.sin(th)
    if np.any(outer):
        ax = np.abs(x[outer])
        eta = np.arccosh(ax)
        sign = np.where(x[outer] < 0, (-1.0) ** n, 1.0)
        out[outer] = sign * np.sinh((n + 1) * eta) / np.sinh(eta)
    if np.any(edge):
        out[edge] = np.sign(x[edge]) ** n * (n + 1)
    return float(out[0]) if scalar else out


def population_b(
    system: CoupledSystem,
    drive: FieldDrive,
    n_cycles: int,
    start_segment: StartSegment = StartSegment.BEFORE_FIRST,
    mode: str = "exact",
) -> float:
    """Population of state |b> after n_cycles RF periods, starting in |a>.

    mode="exact" uses S^N = S U_{N-1}(xi) - I U_{N-2}(xi) with
    xi = Tr(S)/2, so P_b = |S_{ba}|^2 U_{N-1}(xi)^2.  mode="near_diabatic"
    evaluates the small-epsilon closed forms instead.
    """
    if n_cycles < 1:
        raise ValueError("n_cycles must be >= 1")
    if mode == "exact":
        s_mat = one_cycle_matrix(system, drive, start_segment)
        xi = 0.5 * float(s_mat.trace().real)
        u = chebyshev_u(n_cycles - 1, xi)
        return float(abs(s_mat[1, 0]) ** 2 * u * u)
    if mode == "near_diabatic":
        return _population_b_near_diabatic(system, drive, n_cycles, start_segment)
    raise ValueError(f"unknown mode {mode!r}")


def _segment_phases(system, drive, start_segment):
    """(params per crossing, thetas, full-period phase) for the segment."""
    mats_unused, thetas = _cycle_factors(system, drive)
    events = crossings_per_cycle(system, drive)
    v = system.omega0 / 2.0
    params = [LzsParams.from_delta(v * v / ev.slope) for ev in events]
    total = sum(thetas)
    return params, thetas, total


def _population_b_near_diabatic(system, drive, n_cycles, start_segment):
    factor = interference_factor(system, drive, start_segment)
    _, _, total = _segment_phases(system, drive, start_segment)
    s = math.sin(total)
    if abs(s) < 1e-12:
        comb = float(n_cycles) ** 2
    else:
        comb = math.sin(n_cycles * total) ** 2 / (s * s)
    return factor * comb


def interference_factor(
    system: CoupledSystem,
    drive: FieldDrive,
    start_segment: StartSegment = StartSegment.BEFORE_FIRST,
) -> float:
    """The N-independent interference prefactor of the near-diabatic P_b.

    One crossing field: I = 4 eps sin^2(Theta_first + phi), where
    Theta_first is the phase gap between the first two crossings seen from
    the start segment.  Two crossing fields: the two-passage expression
    with Theta_23 (segments 0, 1) or Theta_45 (segments 2, 3) as the
    trailing phase.
    """
    params, thetas, _ = _segment_phases(system, drive, start_segment)
    k = len(params)
    s = int(start_segment)
    if s >= k:
        raise ValueError(f"start segment {s} invalid for {k} crossings per cycle")
    if k == 2:
        p = params[0]
        theta_first = thetas[s]
        return 4.0 * p.epsilon * math.sin(theta_first + p.phi) ** 2
    # Four crossings: +,-,-,+ chronological; theta gaps 12, 23, 34(=12), 45.
    pp, pm = params[0], params[1]
    theta_12 = thetas[0]
    theta_trail = thetas[1] if s in (0, 1) else thetas[3]
    amp = math.sqrt(pp.epsilon) * math.sin(
        2.0 * theta_12 + theta_trail + pp.phi
    ) - math.sqrt(pm.epsilon) * math.sin(theta_trail - pm.phi)
    return 4.0 * amp * amp


# ---------------------------------------------------------------------------
# Vectorized grid map
# ---------------------------------------------------------------------------


def _mm(a, b):
    """Batched 2x2 complex matrix product, shapes (..., 2, 2)."""
    return np.einsum("...ij,...jk->...ik", a, b)


def _batch_transfer(eps, phi, transpose):
    root_e = np.sqrt(eps)
    root_1e = np.sqrt(1.0 - eps)
    ph = np.exp(1j * phi)
    m = np.empty(eps.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = root_1e
    m[..., 0, 1] = root_e / ph
    m[..., 1, 0] = -root_e * ph
    m[..., 1, 1] = root_1e
    if transpose:
        m = np.swapaxes(m, -1, -2)
    return m


def _batch_phase(theta):
    g = np.zeros(theta.shape + (2, 2), dtype=complex)
    ph = np.exp(1j * theta)
    g[..., 0, 0] = ph
    g[..., 1, 1] = np.conj(ph)
    return g


def _pb_one_crossing(system, omega, f_s, f_rf, f_cross, n_cycles):
    """Vectorized P_b for points with a single crossing field (2 passages)."""
    model = system.stark
    u = (f_cross - f_s) / f_rf
    t1 = np.arccos(u) / omega
    period = 2.0 * math.pi / omega
    t2 = period - t1
    sin_wt = np.sin(omega * t1)
    if model.kind is StarkKind.LINEAR:
        slope = model.k * f_rf * omega * sin_wt
    else:
        slope = model.alpha * abs(f_cross) * f_rf * omega * sin_wt
    v = system.omega0 / 2.0
    delta = v * v / slope
    eps = -np.expm1(-2.0 * math.pi * delta)
    phi = stokes_phase(delta)

    drives = _BatchDrive(f_s, f_rf, omega)
    theta_12 = _phase_antiderivative(system, drives, t2) - _phase_antiderivative(
        system, drives, t1
    )
    theta_23 = _phase_antiderivative(system, drives, t1 + period) - _phase_antiderivative(
        system, drives, t2
    )
    s_mat = _mm(
        _batch_phase(theta_23),
        _mm(
            _batch_transfer(eps, phi, transpose=False),
            _mm(_batch_phase(theta_12), _batch_transfer(eps, phi, transpose=True)),
        ),
    )
    return _pb_from_cycle_matrix(s_mat, n_cycles)


def _pb_two_crossing(system, omega, f_s, f_rf, f_plus, f_minus, n_cycles):
    """Vectorized P_b for points crossing both fields (4 passages)."""
    model = system.stark
    period = 2.0 * math.pi / omega
    t1 = np.arccos((f_plus - f_s) / f_rf) / omega
    t2 = np.arccos((f_minus - f_s) / f_rf) / omega
    t3 = period - t2
    t4 = period - t1
    v = system.omega0 / 2.0

    def params_at(tc, f_cross):
        slope = model.alpha * abs(f_cross) * f_rf * omega * np.sin(omega * tc)
        delta = v * v / slope
        return -np.expm1(-2.0 * math.pi * delta), stokes_phase(delta)

    eps_p, phi_p = params_at(t1, f_plus)
    eps_m, phi_m = params_at(t2, f_minus)

    drives = _BatchDrive(f_s, f_rf, omega)

    def theta(ta, tb):
        return _phase_antiderivative(system, drives, tb) - _phase_antiderivative(
            system, drives, ta
        )

    th_12, th_23, th_34, th_45 = (
        theta(t1, t2),
        theta(t2, t3),
        theta(t3, t4),
        theta(t4, t1 + period),
    )
    s_mat = _batch_transfer(eps_p, phi_p, transpose=True)
    for g_theta, m in (
        (th_12, _batch_transfer(eps_m, phi_m, transpose=False)),
        (th_23, _batch_transfer(eps_m, phi_m, transpose=True)),
        (th_34, _batch_transfer(eps_p, phi_p, transpose=False)),
    ):
        s_mat = _mm(m, _mm(_batch_phase(g_theta), s_mat))
    s_mat = _mm(_batch_phase(th_45), s_mat)
    return _pb_from_cycle_matrix(s_mat, n_cycles)


def _pb_from_cycle_matrix(s_mat, n_cycles):
    xi = 0.5 * np.real(s_mat[..., 0, 0] + s_mat[..., 1, 1])
    u = chebyshev_u(n_cycles - 1, xi)
    return np.abs(s_mat[..., 1, 0]) ** 2 * u * u


class _BatchDrive:
    """Duck-typed FieldDrive whose fields are arrays (for the grid kernel)."""

    def __init__(self, f_static, f_rf, omega):
        self.f_static = f_static
        self.f_rf = f_rf
        self.omega = omega


def _lzs_row(system, omega, f_s_vals, f_rf, n_cycles):
    """One map row at fixed f_rf: (p_b, allowed_flag) arrays."""
    pb = np.zeros_like(f_s_vals)
    flag = np.zeros_like(f_s_vals)
    if f_rf <= 0:
        return pb, flag
    fields = crossing_fields(system.stark)
    margin = 1.0 - TANGENT_TOL
    if len(fields) == 1:
        u = (fields[0] - f_s_vals) / f_rf
        ok = np.abs(u) < margin
        if np.any(ok):
            pb[ok] = _pb_one_crossing(
                system, omega, f_s_vals[ok], f_rf, fields[0], n_cycles
            )
            flag[ok] = 1.0
        return pb, flag
    f_minus, f_plus = fields
    u_p = (f_plus - f_s_vals) / f_rf
    u_m = (f_minus - f_s_vals) / f_rf
    in_p = np.abs(u_p) < margin
    in_m = np.abs(u_m) < margin
    both = in_p & in_m
    only_p = in_p & ~in_m
    only_m = in_m & ~in_p
    if np.any(only_p):
        pb[only_p] = _pb_one_crossing(
            system, omega, f_s_vals[only_p], f_rf, f_plus, n_cycles
        )
    if np.any(only_m):
        pb[only_m] = _pb_one_crossing(
            system, omega, f_s_vals[only_m], f_rf, f_minus, n_cycles
        )
    if np.any(both):
        pb[both] = _pb_two_crossing(
            system, omega, f_s_vals[both], f_rf, f_plus, f_minus, n_cycles
        )
    flag[in_p | in_m] = 1.0
    return pb, flag


def lzs_map(
    system: CoupledSystem,
    omega: float,
    grid,
    n_cycles: int,
    workers: int = 1,
):
    """P_b(N) over the (f_static, f_rf) grid plus an allowed-region flag.

    Points outside the classically allowed region (and grazing boundary
    points) report 0 with flag 0.  Bit-identical for any worker count.
    """
    if n_cycles < 1:
        raise ValueError("n_cycles must be >= 1")
    f_s_vals = grid.f_s_values()
    f_rf_vals = grid.f_rf_values()
    pb = np.zeros((len(f_rf_vals), len(f_s_vals)))
    flag = np.zeros_like(pb)

    def compute(i):
        pb[i], flag[i] = _lzs_row(system, omega, f_s_vals, f_rf_vals[i], n_cycles)

    if workers <= 1:
        for i in range(len(f_rf_vals)):
            compute(i)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(compute, range(len(f_rf_vals))))
    return pb, flag
