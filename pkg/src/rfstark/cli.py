"""Command-line front end: plottable scans emitted as CSV.

Every command reads a plain ``key = value`` config file, echoes the fully
resolved configuration as ``#``-prefixed header lines in its output (so a
run can be reproduced bit-identically from the file alone), and writes
plottable CSV.  All user-facing frequencies are MHz, fields V/cm, times us.

Exit codes: 0 success, 2 configuration error, 3 numeric/convergence error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .besselx import GenBesselArgs, QuadratureError, gen_bessel_integral, gen_bessel_sum
from .classical import energy_asymptotes, sideband_vs_classical
from .core import (
    CoupledSystem,
    FieldDrive,
    PRESETS,
    StarkModel,
    mhz_to_rad,
    preset,
    rad_to_mhz,
)
from .ensemble import PairGeometry, mixing_angle_scan, sample_ensemble
from .floquet import DEFAULT_LINEWIDTH, GridSpec, resonance_map, spectrum
from .lzs import DegenerateCrossingError, lzs_map
from .timedomain import InitialState, StepSizeError, evolve


class ConfigError(ValueError):
    pass


def parse_config(path: str) -> dict[str, str]:
    """Read a ``key = value`` file; '#' starts a comment, blank lines ignored."""
    cfg: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        cfg[key.strip()] = value.strip()
    return cfg


def _get(cfg, key, cast, default=None, required=False):
    if key not in cfg:
        if required:
            raise ConfigError(f"missing required config key {key!r}")
        return default
    try:
        return cast(cfg[key])
    except ValueError as exc:
        raise ConfigError(f"config key {key!r}: {exc}") from exc


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.replace(",", " ").split()]


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def build_model(cfg: dict[str, str]) -> StarkModel:
    name = cfg.get("preset")
    if name is not None:
        if name not in PRESETS:
            raise ConfigError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
        return preset(name)
    w0 = _get(cfg, "w0_mhz", float, required=True)
    k = _get(cfg, "k_mhz_per_vcm", float)
    alpha = _get(cfg, "alpha_mhz_per_vcm2", float)
    if (k is None) == (alpha is None):
        raise ConfigError("give exactly one of k_mhz_per_vcm or alpha_mhz_per_vcm2")
    if k is not None:
        return StarkModel.linear(mhz_to_rad(w0), mhz_to_rad(k))
    return StarkModel.quadratic(mhz_to_rad(w0), mhz_to_rad(alpha))


def build_system(cfg: dict[str, str]) -> CoupledSystem:
    omega0 = _get(cfg, "omega0_mhz", float, required=True)
    return CoupledSystem(build_model(cfg), mhz_to_rad(omega0))


def build_grid(cfg: dict[str, str]) -> GridSpec:
    return GridSpec(
        f_s_min=_get(cfg, "f_s_min", float, 0.0),
        f_s_max=_get(cfg, "f_s_max", float, 0.8),
        f_s_steps=_get(cfg, "f_s_steps", int, 400),
        f_rf_min=_get(cfg, "f_rf_min", float, 0.0),
        f_rf_max=_get(cfg, "f_rf_max", float, 0.8),
        f_rf_steps=_get(cfg, "f_rf_steps", int, 400),
    )


def _fmt(v) -> str:
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def write_csv(path: Path, cfg_echo: dict, columns: list[str], rows) -> None:
    """CSV with a '#' metadata block (config echo, version, units note)."""
    lines = [f"# rfstark {__version__}", "# units: MHz, V/cm, us"]
    for key in sorted(cfg_echo):
        lines.append(f"# {key} = {_fmt(cfg_echo[key])}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def cmd_sidebands(cfg, out_dir, args) -> None:
    model = build_model(cfg)
    f_s = _get(cfg, "f_s", float, required=True)
    omega_mhz = _get(cfg, "omega_mhz", float, required=True)
    f_rf_list = _get(cfg, "f_rf_list", _float_list)
    if f_rf_list is None:
        f_rf_list = [_get(cfg, "f_rf", float, required=True)]
    for f_rf in f_rf_list:
        drive = FieldDrive(f_s, f_rf, mhz_to_rad(omega_mhz))
        sp = spectrum(model, drive)
        echo = dict(cfg)
        echo.update(f_s=f_s, f_rf=f_rf, omega_mhz=omega_mhz)
        if f_rf > 0:
            echo["asymptotes_mhz"] = " ".join(
                "%.6f" % rad_to_mhz(a) for a in energy_asymptotes(model, drive)
            )
        rows = [
            (s.n, rad_to_mhz(s.energy), s.amplitude, s.population)
            for s in sp.sidebands
        ]
        write_csv(
            out_dir / f"sidebands_frf{f_rf:g}.csv",
            echo,
            ["n", "energy_mhz", "amplitude", "population"],
            rows,
        )


def cmd_resonance_map(cfg, out_dir, args) -> None:
    system = build_system(cfg)
    omega_mhz = _get(cfg, "omega_mhz", float, required=True)
    linewidth_mhz = _get(cfg, "linewidth_mhz", float, rad_to_mhz(DEFAULT_LINEWIDTH))
    grid = build_grid(cfg)
    values = resonance_map(
        system,
        mhz_to_rad(omega_mhz),
        grid,
        linewidth=mhz_to_rad(linewidth_mhz),
        workers=args.workers,
    )
    f_s_vals = grid.f_s_values()
    f_rf_vals = grid.f_rf_values()
    rows = (
        (f_s_vals[j], f_rf_vals[i], values[i, j])
        for i in range(len(f_rf_vals))
        for j in range(len(f_s_vals))
    )
    echo = dict(cfg)
    echo.update(omega_mhz=omega_mhz, linewidth_mhz=linewidth_mhz)
    write_csv(out_dir / "resonance_map.csv", echo, ["f_s", "f_rf", "value"], rows)


def cmd_lzs_map(cfg, out_dir, args) -> None:
    system = build_system(cfg)
    omega_mhz = _get(cfg, "omega_mhz", float, required=True)
    n_cycles = _get(cfg, "n_cycles", int, 3)
    grid = build_grid(cfg)
    pb, flag = lzs_map(
        system, mhz_to_rad(omega_mhz), grid, n_cycles, workers=args.workers
    )
    f_s_vals = grid.f_s_values()
    f_rf_vals = grid.f_rf_values()
    rows = (
        (f_s_vals[j], f_rf_vals[i], pb[i, j], int(flag[i, j]))
        for i in range(len(f_rf_vals))
        for j in range(len(f_s_vals))
    )
    echo = dict(cfg)
    echo.update(omega_mhz=omega_mhz, n_cycles=n_cycles)
    write_csv(
        out_dir / "lzs_map.csv", echo, ["f_s", "f_rf", "p_b", "allowed_flag"], rows
    )


def cmd_classical(cfg, out_dir, args) -> None:
    model = build_model(cfg)
    f_s = _get(cfg, "f_s", float, required=True)
    f_rf = _get(cfg, "f_rf", float, required=True)
    omega_list = _get(cfg, "omega_mhz_list", _float_list)
    if omega_list is None:
        omega_list = [_get(cfg, "omega_mhz", float, required=True)]
    window = _get(cfg, "window", int, 5)
    template = FieldDrive(f_s, f_rf, mhz_to_rad(omega_list[0]))
    comparisons = sideband_vs_classical(
        model, template, [mhz_to_rad(om) for om in omega_list], window=window
    )
    for comp in comparisons:
        om_mhz = rad_to_mhz(comp.omega)
        echo = dict(cfg)
        echo.update(omega_mhz=om_mhz, window=window)
        echo["asymptotes_mhz"] = " ".join(
            "%.6f" % rad_to_mhz(a) for a in comp.asymptotes
        )
        rows = zip(
            (rad_to_mhz(e) for e in comp.energies),
            comp.populations,
            comp.classical_scaled,
            comp.moving_avg,
        )
        write_csv(
            out_dir / f"classical_omega{om_mhz:g}.csv",
            echo,
            ["energy_mhz", "population", "classical_scaled", "moving_avg"],
            rows,
        )


def cmd_evolve(cfg, out_dir, args) -> None:
    system = build_system(cfg)
    f_s = _get(cfg, "f_s", float, required=True)
    f_rf = _get(cfg, "f_rf", float, required=True)
    omega_mhz = _get(cfg, "omega_mhz", float, required=True)
    t_end = _get(cfg, "t_end_us", float, required=True)
    dt = _get(cfg, "dt_us", float)
    rf_phase = _get(cfg, "rf_phase", float, 0.0)
    initial = _get(cfg, "initial", int, 1)
    if initial not in (1, 2):
        raise ConfigError("initial must be 1 or 2")
    drive = FieldDrive(f_s, f_rf, mhz_to_rad(omega_mhz))
    res = evolve(
        system,
        drive,
        t_end,
        dt=dt,
        initial=InitialState.STATE1 if initial == 1 else InitialState.STATE2,
        rf_phase=rf_phase,
    )
    echo = dict(cfg)
    echo.update(t_end_us=t_end, norm_drift=res.norm_drift)
    rows = zip(res.times, res.pop1, res.pop2)
    write_csv(out_dir / "evolve.csv", echo, ["t_us", "pop1", "pop2"], rows)


def cmd_ensemble(cfg, out_dir, args) -> None:
    model = build_model(cfg)
    omega_mhz = _get(cfg, "omega_mhz", float, required=True)
    n_list = _get(cfg, "n_list", _int_list, [0])
    theta_steps = _get(cfg, "theta_steps", int, 200)
    t = _get(cfg, "t_us", float, 20.0)
    count = _get(cfg, "count", int, 10000)
    geometry = PairGeometry(
        d=_get(cfg, "d_um", float, 25.0),
        sigma_long=_get(cfg, "sigma_long_um", float, 200.0),
        sigma_trans=_get(cfg, "sigma_trans_um", float, 8.0),
        mu_product=_get(cfg, "mu_product", float, 800.0**2),
    )
    seed = args.seed if args.seed is not None else _get(cfg, "seed", int, 0)
    theta = np.linspace(0.0, math.pi / 2.0, theta_steps)
    for n in n_list:
        scan = mixing_angle_scan(
            geometry, model, mhz_to_rad(omega_mhz), n, theta, t, count, seed
        )
        echo = dict(cfg)
        echo.update(n=n, seed=seed, count=count, t_us=t, f_eff=scan.f_eff)
        write_csv(
            out_dir / f"ensemble_n{n}.csv",
            echo,
            ["theta_f", "pp_fraction"],
            zip(scan.theta, scan.pp),
        )
    ens = sample_ensemble(geometry, count, seed)
    rows = zip(
        ens.positions[:, 0],
        ens.positions[:, 1],
        ens.positions[:, 2],
        ens.distances(),
        (rad_to_mhz(v) for v in ens.couplings),
    )
    write_csv(
        out_dir / "ensemble_pairs.csv",
        {"seed": seed, "count": count},
        ["x_um", "y_um", "z_um", "r_um", "vdd_mhz"],
        rows,
    )


def cmd_genbessel(args) -> None:
    gargs = GenBesselArgs(args.n, args.x, args.y)
    s = gen_bessel_sum(gargs)
    i = gen_bessel_integral(gargs)
    print(f"{_fmt(s)},{_fmt(i)},{_fmt(abs(s - i))}")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rfstark",
        description="Driven two-level system scans: sideband spectra, "
        "resonance and transfer-matrix maps, classical densities, "
        "time-domain evolution, atom-pair ensembles.",
    )
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed")
    parser.add_argument("--workers", type=int, default=1, help="worker count")
    parser.add_argument("--out", default=".", help="output directory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (
        "sidebands",
        "resonance-map",
        "lzs-map",
        "classical",
        "evolve",
        "ensemble",
    ):
        sub.add_parser(name)
    gb = sub.add_parser("genbessel")
    gb.add_argument("n", type=int)
    gb.add_argument("x", type=float)
    gb.add_argument("y", type=float)
    return parser


COMMANDS = {
    "sidebands": cmd_sidebands,
    "resonance-map": cmd_resonance_map,
    "lzs-map": cmd_lzs_map,
    "classical": cmd_classical,
    "evolve": cmd_evolve,
    "ensemble": cmd_ensemble,
}


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "genbessel":
            cmd_genbessel(args)
            return 0
        if args.config is None:
            raise ConfigError(f"command {args.command!r} requires --config")
        cfg = parse_config(args.config)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.command](cfg, out_dir, args)
        return 0
    except (QuadratureError, StepSizeError, DegenerateCrossingError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
