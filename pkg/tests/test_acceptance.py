"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line (bypassing capture) and enforces both
the numerical tolerance and the runtime budget of its check.  Expected
values marked as frozen literals were produced by independent closed-form
oracles and must not drift.
"""

import contextlib
import io
import math
import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest
from scipy.optimize import brentq

from rfstark.besselx import GenBesselArgs, gen_bessel_integral, gen_bessel_spectrum, gen_bessel_sum
from rfstark.classical import energy_asymptotes, sideband_vs_classical
from rfstark.cli import main as cli_main
from rfstark.core import (
    CoupledSystem,
    FieldDrive,
    crossing_fields,
    drive_from_mixing_angle,
    mhz_to_rad,
    preset,
)
from rfstark.ensemble import PairGeometry, mixing_angle_scan, resonant_effective_field
from rfstark.floquet import (
    DEFAULT_LINEWIDTH,
    GridSpec,
    coupling_amplitude,
    coupling_strength,
    spectrum,
)
from rfstark.lzs import (
    crossings_per_cycle,
    interference_factor,
    lzs_map,
    phase_integral,
    population_b,
)
from rfstark.timedomain import evolve


def _report(num, label, status):
    line = f"[criterion {num}] {status}: {label}"
    print(line, file=sys.__stdout__, flush=True)
    try:
        import conftest

        conftest.ACCEPTANCE_RESULTS.append(line)
    except ImportError:  # running outside the test directory layout
        pass


@contextmanager
def criterion(num, label):
    try:
        yield
    except BaseException:
        _report(num, label, "FAIL")
        raise
    _report(num, label, "PASS")


def local_minima(values):
    """Indices of strict interior local minima."""
    v = np.asarray(values)
    return [
        i
        for i in range(1, len(v) - 1)
        if v[i] < v[i - 1] and v[i] <= v[i + 1]
    ]


def local_maxima(values):
    v = np.asarray(values)
    return [
        i
        for i in range(1, len(v) - 1)
        if v[i] > v[i - 1] and v[i] >= v[i + 1]
    ]


def parabolic_peak(xs, ys, i):
    """Vertex abscissa of the parabola through points i-1, i, i+1."""
    y0, y1, y2 = ys[i - 1], ys[i], ys[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0:
        return xs[i]
    return xs[i] + 0.5 * (y0 - y2) / denom * (xs[i + 1] - xs[i])


def half_max_width(values, dx):
    """Width of the region at or above half of the curve maximum."""
    v = np.asarray(values)
    return dx * int(np.count_nonzero(v >= 0.5 * v.max()))


OMEGA8 = mhz_to_rad(8.0)
OMEGA0 = mhz_to_rad(0.1)


class TestCriterion1:
    def test_crossing_fields(self):
        with criterion(1, "zero-detuning crossing fields of both presets"):
            t0 = time.perf_counter()
            left = crossing_fields(preset("left-resonance"))[1]
            right = crossing_fields(preset("right-resonance"))[1]
            elapsed = time.perf_counter() - t0
            # frozen oracle values: sqrt(2 w0 / alpha) for each preset
            assert left == pytest.approx(0.3807099480521538, abs=1e-12)
            assert right == pytest.approx(0.4112571962973885, abs=1e-12)
            assert abs(left - 0.3807) <= 0.0015
            assert abs(right - 0.4113) <= 0.0016
            assert elapsed < 1e-3


class TestCriterion2:
    def test_dual_route_bessel(self):
        with criterion(2, "generalized Bessel: dual-route grid, sum rule, parity"):
            t0 = time.perf_counter()
            xs = np.linspace(0.0, 20.0, 20)
            ys = np.linspace(0.0, 10.0, 20)
            worst = 0.0
            for x in xs:
                for y in ys:
                    for n in range(-5, 6):
                        a = gen_bessel_sum(GenBesselArgs(n, x, y))
                        b = gen_bessel_integral(GenBesselArgs(n, x, y))
                        worst = max(worst, abs(a - b))
            assert worst < 1e-10

            for x, y in ((0.3, 0.1), (5.0, 2.0), (20.0, 10.0), (60.0, 30.0)):
                nmax = int(math.ceil(x + 2.0 * y)) + 40
                s = gen_bessel_spectrum(x, y, nmax)
                assert abs(float(s @ s) - 1.0) < 1e-10

            for n in (-5, -3, -1, 1, 3, 5):
                for y in (0.0, 0.7, 3.0, 10.0):
                    assert abs(gen_bessel_sum(GenBesselArgs(n, 0.0, y))) < 1e-14
                    assert abs(gen_bessel_integral(GenBesselArgs(n, 0.0, y))) < 1e-14
            assert time.perf_counter() - t0 < 30.0


class TestCriterion3:
    def test_pure_rf_selection_rule(self):
        with criterion(3, "pure-RF scan: even peaks at predicted fields, odd absent"):
            t0 = time.perf_counter()
            model = preset("left-resonance")
            sys_ = CoupledSystem(model, OMEGA0)
            lw = DEFAULT_LINEWIDTH

            # odd sidebands carry exactly zero coupling at f_static = 0
            for n in (-3, -1, 1, 3):
                assert coupling_amplitude(sys_, FieldDrive(0.0, 0.3, OMEGA8), n) == 0.0

            f_grid = np.linspace(0.05, 0.85, 1601)
            sig = np.empty_like(f_grid)
            for i, f_rf in enumerate(f_grid):
                sp = spectrum(model, FieldDrive(0.0, f_rf, OMEGA8))
                e = sp.energies()
                sig[i] = float(
                    np.sum(sp.populations() * lw**2 / (e**2 + lw**2))
                )
            peaks = [
                parabolic_peak(f_grid, sig, i)
                for i in local_maxima(sig)
                if sig[i] > 0.01 * sig.max()
            ]

            # resonance condition at f_static = 0: alpha f_rf^2 / 4 = w0 - n w
            expected = sorted(
                math.sqrt(4.0 * (model.w0 - n * OMEGA8) / model.alpha)
                for n in (2, 0, -2, -4)
            )
            # frozen oracle values for the four even resonances
            frozen = [
                0.3247512081033602,
                0.5384051718657125,
                0.6886921743557877,
                0.8116117870916231,
            ]
            assert np.allclose(expected, frozen, atol=1e-12)
            assert len(peaks) == 4
            for got, want in zip(sorted(peaks), expected):
                assert abs(got - want) < 1e-4  # 4 significant figures

            # the odd n = 1 resonance field must not host a peak
            odd_field = math.sqrt(4.0 * (model.w0 - OMEGA8) / model.alpha)
            assert odd_field == pytest.approx(0.44460289936995423, abs=1e-12)
            assert all(abs(p - odd_field) > 0.01 for p in peaks)
            assert time.perf_counter() - t0 < 10.0


class TestCriterion4:
    def test_rk4_rabi_envelope_on_resonance_arcs(self):
        with criterion(4, "RK4 population envelope matches sideband Rabi rate"):
            model = preset("left-resonance")
            sys_ = CoupledSystem(model, OMEGA0)
            # warm-up outside the timed budget (JIT compilation)
            warm = FieldDrive(0.2, 0.1, OMEGA8)
            evolve(sys_, warm, 2.0 * warm.period, dt=warm.period / 1024)
            t0 = time.perf_counter()
            for n, theta in ((0, 0.4), (-1, 0.6), (-2, 0.8)):
                f_eff = resonant_effective_field(model, OMEGA8, n)
                drive = drive_from_mixing_angle(f_eff, theta, OMEGA8)
                rate = coupling_strength(sys_, drive, n)
                res = evolve(
                    sys_, drive, 20.0, dt=drive.period / 8192, sample_stride=8192
                )
                envelope = np.sin(0.5 * rate * res.times) ** 2
                assert np.max(np.abs(res.pop2 - envelope)) <= 0.05
            assert time.perf_counter() - t0 < 120.0


class TestCriterion5:
    OMEGA = mhz_to_rad(2.0)

    def arc_data(self, n):
        model = preset("left-resonance")
        sys_ = CoupledSystem(model, OMEGA0)
        f_eff = resonant_effective_field(model, self.OMEGA, n)
        thetas = np.linspace(0.01, math.pi / 2 - 0.01, 100)
        amp = np.full_like(thetas, np.nan)
        inter = np.full_like(thetas, np.nan)
        pb = np.full_like(thetas, np.nan)
        valid = np.zeros(len(thetas), dtype=bool)
        for i, th in enumerate(thetas):
            drive = drive_from_mixing_angle(f_eff, th, self.OMEGA)
            amp[i] = coupling_amplitude(sys_, drive, n)
            try:
                events = crossings_per_cycle(sys_, drive)
            except ValueError:
                continue
            if not events:
                continue
            inter[i] = interference_factor(sys_, drive)
            pb[i] = population_b(sys_, drive, 3)
            # stationary-phase validity: crossings well inside the cycle
            # and well-separated phase gaps between passages
            u = np.array(
                [(fc - drive.f_static) / drive.f_rf for fc in crossing_fields(model)]
            )
            ud = float(np.min(np.abs(np.abs(u) - 1.0)))
            gaps = [
                phase_integral(sys_, drive, events[j].t, events[j + 1].t)
                for j in range(len(events) - 1)
            ]
            gaps.append(
                phase_integral(
                    sys_, drive, events[-1].t, events[0].t + drive.period
                )
            )
            valid[i] = ud > 0.15 and min(abs(g) for g in gaps) > 3.0
        return thetas, amp, inter, pb, valid

    def test_interference_nodes_and_shape(self):
        with criterion(
            5, "transfer-matrix interference nodes and weight tracking"
        ):
            t0 = time.perf_counter()
            for n in (0, -2):
                thetas, amp, inter, pb, valid = self.arc_data(n)
                # every amplitude sign change between valid samples sits
                # within one step of an interference-factor minimum
                minima = local_minima(np.nan_to_num(inter, nan=np.inf))
                for i in range(len(thetas) - 1):
                    if not (valid[i] and valid[i + 1]):
                        continue
                    if amp[i] * amp[i + 1] < 0:
                        assert any(abs(m - i) <= 1 for m in minima)
                # interference-averaged transfer tracks the squared weight
                pbv = pb[valid]
                w2 = amp[valid] ** 2
                r = np.corrcoef(pbv / pbv.max(), w2)[0, 1]
                assert r > 0.95
            assert time.perf_counter() - t0 < 60.0


class TestCriterion6:
    def test_classical_limit_convergence(self):
        with criterion(6, "sideband envelope converges to classical density"):
            t0 = time.perf_counter()
            model = preset("linear-demo")
            template = FieldDrive(0.2, 0.3, 1.0)
            omegas = [mhz_to_rad(f) for f in (8.0, 2.0, 0.5, 0.25)]
            comps = sideband_vs_classical(model, template, omegas, window=9)
            errs = []
            for comp in comps:
                asym = np.asarray(comp.asymptotes)
                dist = np.min(
                    np.abs(comp.energies[:, None] - asym[None, :]), axis=1
                )
                support = np.isfinite(comp.classical_scaled)
                support &= comp.classical_scaled > 1e-12
                sel = support & (dist >= 3.0 * comp.omega)
                if not np.any(sel):
                    # at high omega no in-support point clears 3 omega;
                    # fall back to the most-central points available
                    sel = support & (dist >= 0.9 * dist[support].max())
                errs.append(
                    float(
                        np.mean(
                            np.abs(
                                comp.moving_avg[sel] - comp.classical_scaled[sel]
                            )
                            / comp.classical_scaled[sel]
                        )
                    )
                )
            assert all(a > b for a, b in zip(errs, errs[1:]))
            assert errs[-1] < 0.10
            assert time.perf_counter() - t0 < 60.0


class TestCriterion7:
    GRID = GridSpec(0.0, 0.8, 400, 0.0, 0.8, 400)
    MARGIN = 0.05
    HALF_WINDOW = 15

    def median_row_offset(self, pb, centers_per_row, f_s):
        """Median offset (grid steps) of the per-row maximum from the
        predicted band center, over rows with a usable center."""
        offsets = []
        for i, c in enumerate(centers_per_row):
            if c is None:
                continue
            j = int(np.argmin(np.abs(f_s - c)))
            lo = max(0, j - self.HALF_WINDOW)
            hi = min(len(f_s), j + self.HALF_WINDOW + 1)
            row = pb[i, lo:hi]
            if row.max() <= 0:
                continue
            offsets.append(lo + int(np.argmax(row)) - j)
        assert len(offsets) > 10
        return float(np.median(offsets))

    def test_map_bands_track_resonances(self):
        with criterion(7, "cycle-map bands sit on resonances; width shrinks with N"):
            t0 = time.perf_counter()
            f_s = self.GRID.f_s_values()
            f_rf = self.GRID.f_rf_values()
            step = f_s[1] - f_s[0]

            lin = CoupledSystem(preset("linear-demo"), OMEGA0)
            quad = CoupledSystem(preset("left-resonance"), OMEGA0)
            pb_lin3, _ = lzs_map(lin, OMEGA8, self.GRID, 3)
            pb_lin6, _ = lzs_map(lin, OMEGA8, self.GRID, 6)
            pb_quad3, _ = lzs_map(quad, OMEGA8, self.GRID, 3)

            # linear bands: vertical lines f_s = (w0 - n w) / k
            m = lin.stark
            f_lin = crossing_fields(m)[0]
            for n in range(-2, 4):
                c = (m.w0 - n * OMEGA8) / m.k
                if not 0.03 < c < 0.77:
                    continue
                centers = [
                    c if abs(f_lin - c) < fr - self.MARGIN else None
                    for fr in f_rf
                ]
                assert abs(self.median_row_offset(pb_lin3, centers, f_s)) <= 1.0

            # quadratic arcs: f_s(f_rf) = sqrt(2 (w0 - n w)/alpha - f_rf^2/2)
            mq = quad.stark
            f1 = crossing_fields(mq)[1]
            for n in range(-3, 1):
                centers = []
                for fr in f_rf:
                    arg = 2.0 * (mq.w0 - n * OMEGA8) / mq.alpha - 0.5 * fr**2
                    c = math.sqrt(arg) if arg > 0 else None
                    if c is None or not abs(f1 - c) < fr - self.MARGIN:
                        centers.append(None)
                    else:
                        centers.append(c)
                assert abs(self.median_row_offset(pb_quad3, centers, f_s)) <= 1.0

            # doubling the cycle count narrows the carrier band
            j = int(np.argmin(np.abs(f_s - (m.w0 / m.k))))
            sl = slice(j - self.HALF_WINDOW, j + self.HALF_WINDOW + 1)
            w3 = half_max_width(pb_lin3.sum(axis=0)[sl], step)
            w6 = half_max_width(pb_lin6.sum(axis=0)[sl], step)
            assert w6 < w3
            assert time.perf_counter() - t0 < 300.0


class TestCriterion8:
    SEED = 13
    COUNT = 10_000
    T_US = 20.0
    STEPS = 200

    def test_pair_ensemble_scans(self):
        with criterion(8, "pair-ensemble angle scans: onsets, nodes, broadening"):
            t0 = time.perf_counter()
            model = preset("left-resonance")
            f1 = crossing_fields(model)[1]
            geo = PairGeometry()
            weak_geo = PairGeometry(mu_product=geo.mu_product / 100.0)
            thetas = np.linspace(0.0, math.pi / 2, self.STEPS)
            dtheta = thetas[1] - thetas[0]

            for n in range(-3, 3):
                f_eff = resonant_effective_field(model, OMEGA8, n)

                def reach(th, f_eff=f_eff):
                    fs = f_eff * math.cos(th)
                    frf = math.sqrt(2.0) * f_eff * math.sin(th)
                    return frf - min(abs(f1 - fs), abs(f1 + fs))

                scan = mixing_angle_scan(
                    geo, model, OMEGA8, n, thetas, self.T_US, self.COUNT, self.SEED
                )

                if reach(math.pi / 2) <= 0.0:
                    # grazing arc: it at most skims the allowed region and
                    # exits again, so there is no sustained onset to test
                    assert max(reach(th) for th in thetas) < 0.05
                else:
                    onset = (
                        0.0
                        if reach(0.0) >= 0.0
                        else brentq(reach, 0.0, math.pi / 2)
                    )
                    pre = thetas < onset - 0.08
                    if np.any(pre):
                        assert (
                            scan.single_pair[pre].max()
                            < 0.2 * scan.single_pair.max()
                        )
                    beyond = thetas > onset + 0.05

                    # nodes: deep minima of the ensemble curve line up with
                    # the zeros of the single-pair weight
                    pp_nodes = [
                        i
                        for i in local_minima(scan.pp)
                        if beyond[i] and scan.pp[i] < 0.02 * scan.pp.max()
                    ]
                    sp_nodes = [
                        i
                        for i in local_minima(scan.single_pair)
                        if beyond[i]
                        and scan.single_pair[i] < 0.01 * scan.single_pair.max()
                    ]
                    for i in sp_nodes:
                        assert any(abs(i - j) <= 1 for j in pp_nodes)
                    for j in pp_nodes:
                        assert any(abs(i - j) <= 1 for i in sp_nodes)

                # saturation broadens the ensemble curve
                assert half_max_width(scan.pp, dtheta) > half_max_width(
                    scan.single_pair, dtheta
                )

                # 100x weaker coupling: shape converges to the squared weight
                weak = mixing_angle_scan(
                    weak_geo,
                    model,
                    OMEGA8,
                    n,
                    thetas,
                    self.T_US,
                    self.COUNT,
                    self.SEED,
                )
                r = np.corrcoef(weak.pp, weak.single_pair)[0, 1]
                assert r > 0.99
            assert time.perf_counter() - t0 < 180.0


class TestCriterion9:
    def run_cli(self, args):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            rc = cli_main(args)
        assert rc == 0
        return buf.getvalue()

    def test_bit_identical_reruns(self, tmp_path):
        with criterion(9, "bit-identical outputs across reruns and worker counts"):
            cfgs = {
                "map.cfg": (
                    "preset = left-resonance\nomega0_mhz = 0.1\nomega_mhz = 8\n"
                    "f_s_steps = 24\nf_rf_steps = 24\nf_s_max = 0.6\nf_rf_max = 0.6\n"
                    "n_cycles = 3\n"
                ),
                "side.cfg": (
                    "preset = left-resonance\nf_s = 0.2\nf_rf = 0.3\nomega_mhz = 8\n"
                ),
                "cls.cfg": (
                    "preset = left-resonance\nf_s = 0.1\nf_rf = 0.4\n"
                    "omega_mhz_list = 8 0.5\n"
                ),
                "evo.cfg": (
                    "preset = left-resonance\nomega0_mhz = 0.5\nf_s = 0.2\n"
                    "f_rf = 0.3\nomega_mhz = 8\nt_end_us = 1.0\n"
                ),
                "ens.cfg": (
                    "preset = left-resonance\nomega_mhz = 8\nn_list = 0 -2\n"
                    "theta_steps = 16\ncount = 500\nt_us = 20\nseed = 13\n"
                ),
            }
            for name, text in cfgs.items():
                (tmp_path / name).write_text(text)

            def cfg(name):
                return str(tmp_path / name)

            runs = [
                (["--config", cfg("map.cfg"), "resonance-map"], ["resonance_map.csv"], ["--workers", "4"]),
                (["--config", cfg("map.cfg"), "lzs-map"], ["lzs_map.csv"], ["--workers", "4"]),
                (["--config", cfg("side.cfg"), "sidebands"], ["sidebands_frf0.3.csv"], []),
                (["--config", cfg("cls.cfg"), "classical"], ["classical_omega8.csv", "classical_omega0.5.csv"], []),
                (["--config", cfg("evo.cfg"), "evolve"], ["evolve.csv"], []),
                (["--config", cfg("ens.cfg"), "ensemble"], ["ensemble_n0.csv", "ensemble_n-2.csv", "ensemble_pairs.csv"], []),
            ]
            for args, files, extra in runs:
                out_a = tmp_path / (files[0] + "_a")
                out_b = tmp_path / (files[0] + "_b")
                self.run_cli(args[:2] + ["--out", str(out_a)] + args[2:])
                self.run_cli(args[:2] + ["--out", str(out_b)] + extra + args[2:])
                for f in files:
                    assert (out_a / f).read_bytes() == (out_b / f).read_bytes()

            a = self.run_cli(["genbessel", "3", "2.5", "1.25"])
            b = self.run_cli(["genbessel", "3", "2.5", "1.25"])
            assert a == b
