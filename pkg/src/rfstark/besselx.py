"""Regular and generalized Bessel functions of integer order.

Two independent evaluation routes are kept for both functions:

* ``bessel_j`` uses Miller-style downward recurrence with a final
  normalization (J0 + 2*sum J_{2k} = 1); its oracle is the integral
  representation (1/pi) int_0^pi cos(n t - x sin t) dt.
* ``gen_bessel_sum`` evaluates the truncated double-Bessel sum
  J_n(x, y) = sum_m J_{n-2m}(x) J_m(y); its oracle is
  ``gen_bessel_integral``, the Fourier-coefficient form
  (1/pi) int_0^pi cos(n t - x sin t - y sin 2t) dt.

The truncation of the m-sum uses the larger of the two bounds
|m| <= y + 3 y^(1/3) + 3 and |m| <= (|n| + x + 3 x^(1/3) + 3) / 2,
plus a safety margin of 5 terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class GenBesselArgs:
    """Arguments of the generalized Bessel function J_n(x, y)."""

    n: int
    x: float
    y: float


def bessel_j_sequence(nmax: int, x: float) -> np.ndarray:
    """J_0(x) .. J_nmax(x) for x >= 0, by downward recurrence.

    Starts the two-term recurrence well above max(nmax, x) with an arbitrary
    seed, recurs down, and fixes the overall scale with the sum rule
    J0 + 2 J2 + 2 J4 + ... = 1.  Rescales on the way down to avoid overflow.
    """
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    if x < 0:
        raise ValueError("bessel_j_sequence requires x >= 0")
    if x == 0.0:
        out = np.zeros(nmax + 1)
        out[0] = 1.0
        return out

    top = max(nmax, int(math.ceil(x)))
    # Start high enough that the seeded values have fully converged by
    # order nmax; the sqrt term covers the transition region around m ~ x.
    m_start = top + int(math.ceil(12.0 + 2.0 * math.sqrt(40.0 * (top + 1))))
    if m_start % 2:
        m_start += 1

    out = np.zeros(nmax + 1)
    jp = 0.0  # J_{m+1}
    jc = 1e-30  # J_m (arbitrary seed)
    norm = 0.0
    for m in range(m_start, 0, -1):
        jm = (2.0 * m / x) * jc - jp
        jp = jc
        jc = jm
        if m - 1 <= nmax:
            out[m - 1] = jc
        if (m - 1) % 2 == 0:
            norm += 2.0 * jc
        if abs(jc) > 1e250:
            jc *= 1e-250
            jp *= 1e-250
            norm *= 1e-250
            out *= 1e-250
    norm -= jc  # the m=0 term enters the sum rule once, not twice
    out /= norm
    return out


def bessel_j(n: int, x: float) -> float:
    """Integer-order Bessel function of the first kind, J_n(x).

    Uses J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x) to reduce
    to nonnegative order and argument.
    """
    sign = 1.0
    if n < 0:
        n = -n
        sign *= -1.0 if n % 2 else 1.0
    if x < 0:
        x = -x
        sign *= -1.0 if n % 2 else 1.0
    return sign * bessel_j_sequence(n, x)[n]


def _signed_sequence(kmax: int, x: float) -> np.ndarray:
    """J_{-kmax}(x) .. J_{kmax}(x) as one array (index k + kmax)."""
    pos = bessel_j_sequence(kmax, abs(x))
    if x < 0:
        pos = pos * np.where(np.arange(kmax + 1) % 2, -1.0, 1.0)
    full = np.empty(2 * kmax + 1)
    full[kmax:] = pos
    neg_parity = np.where(np.arange(1, kmax + 1) % 2, -1.0, 1.0)
    full[kmax - 1 :: -1] = pos[1:] * neg_parity
    return full


def m_truncation(n: int, x: float, y: float) -> int:
    """Half-width of the m-sum: max of the two truncation bounds plus margin."""
    ax, ay = abs(x), abs(y)
    b1 = ay + 3.0 * ay ** (1.0 / 3.0) + 3.0
    b2 = 0.5 * (abs(n) + ax + 3.0 * ax ** (1.0 / 3.0) + 3.0)
    return int(math.ceil(max(b1, b2))) + 5


def gen_bessel_sum(args: GenBesselArgs) -> float:
    """Generalized Bessel J_n(x, y) by the truncated double-Bessel sum."""
    n, x, y = args.n, args.x, args.y
    mt = m_truncation(n, x, y)
    kx = abs(n) + 2 * mt
    jx = _signed_sequence(kx, x)
    jy = _signed_sequence(mt, y)
    m = np.arange(-mt, mt + 1)
    return float(np.dot(jx[(n - 2 * m) + kx], jy))


def gen_bessel_spectrum(x: float, y: float, nmax: int) -> np.ndarray:
    """J_n(x, y) for all n in [-nmax, nmax] at once (index n + nmax).

    Shares the two Bessel sequences across all orders; cost is
    O(nmax * m_truncation) instead of one sum per order.
    """
    mt = m_truncation(nmax, x, y)
    kx = nmax + 2 * mt
    jx = _signed_sequence(kx, x)
    jy = _signed_sequence(mt, y)
    n = np.arange(-nmax, nmax + 1)
    out = np.zeros(2 * nmax + 1)
    for i, m in enumerate(range(-mt, mt + 1)):
        out += jy[i] * jx[(n - 2 * m) + kx]
    return out


def bessel_j_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """J_0..J_nmax for every entry of x >= 0 at once, shape (len(x), nmax+1).

    Same downward recurrence as ``bessel_j_sequence``, run elementwise over
    the whole x array so grid scans pay one Python loop, not one per point.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("bessel_j_table requires x >= 0")
    xmax = float(np.max(x)) if x.size else 0.0
    top = max(nmax, int(math.ceil(xmax)))
    m_start = top + int(math.ceil(12.0 + 2.0 * math.sqrt(40.0 * (top + 1))))
    if m_start % 2:
        m_start += 1

    safe_x = np.where(x > 0, x, 1.0)  # x = 0 columns fixed up afterwards
    out = np.zeros((x.size, nmax + 1))
    jp = np.zeros(x.size)
    jc = np.full(x.size, 1e-30)
    norm = np.zeros(x.size)
    for m in range(m_start, 0, -1):
        jm = (2.0 * m / safe_x) * jc - jp
        jp = jc
        jc = jm
        if m - 1 <= nmax:
            out[:, m - 1] = jc
        if (m - 1) % 2 == 0:
            norm += 2.0 * jc
        big = np.abs(jc) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            jc = jc * scale
            jp = jp * scale
            norm = norm * scale
            out = out * scale[:, None]
    norm -= jc
    out /= norm[:, None]
    zero = x == 0.0
    if np.any(zero):
        out[zero] = 0.0
        out[zero, 0] = 1.0
    return out


def gen_bessel_spectrum_rows(x: np.ndarray, y: float, nmax: int) -> np.ndarray:
    """J_n(x_p, y) for all n in [-nmax, nmax] and every x_p at once.

    Returns shape (len(x), 2*nmax + 1) with column index n + nmax.  Used by
    the grid maps, where y is constant along a row of constant f_rf.
    """
    x = np.asarray(x, dtype=float)
    mt = m_truncation(nmax, float(np.max(np.abs(x), initial=0.0)), y)
    kx = nmax + 2 * mt
    table = bessel_j_table(kx, np.abs(x))
    # Signed full order range -kx..kx with J_{-k} = (-1)^k J_k and the x<0
    # parity folded in.
    parity = np.where(np.arange(1, kx + 1) % 2, -1.0, 1.0)
    full = np.empty((x.size, 2 * kx + 1))
    full[:, kx:] = table
    full[:, kx - 1 :: -1] = table[:, 1:] * parity
    neg = x < 0
    if np.any(neg):
        col_parity = np.where(np.abs(np.arange(-kx, kx + 1)) % 2, -1.0, 1.0)
        full[neg] *= col_parity

    jy = _signed_sequence(mt, y)
    out = np.zeros((x.size, 2 * nmax + 1))
    for i, m in enumerate(range(-mt, mt + 1)):
        lo = -nmax - 2 * m + kx
        out += jy[i] * full[:, lo : lo + 2 * nmax + 1]
    return out


def gen_bessel_integral(args: GenBesselArgs, atol: float = 1e-12) -> float:
    """J_n(x, y) as the Fourier coefficient
    (1/pi) int_0^pi cos(n t - x sin t - y sin 2t) dt, by adaptive quadrature.
    """
    n, x, y = args.n, args.x, args.y

    def integrand(theta):
        return math.cos(n * theta - x * math.sin(theta) - y * math.sin(2.0 * theta))

    # Split into panels of a few oscillations each so the adaptive rule
    # converges; the total phase excursion is bounded by |n| pi + 2|x| + 2|y|.
    npanels = int(math.ceil((abs(n) + abs(x) + 2.0 * abs(y)) / 6.0)) + 1
    edges = np.linspace(0.0, math.pi, npanels + 1)
    val = 0.0
    err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = quad(
            integrand, a, b, epsabs=atol * math.pi / npanels, epsrel=1e-13, limit=200
        )
        val += v
        err += e
    if err > 100.0 * atol * math.pi:
        raise QuadratureError(
            f"gen_bessel_integral(n={n}, x={x}, y={y}) reached only "
            f"abs error {err / math.pi:.3e} (requested {atol:.1e})"
        )
    return val / math.pi
