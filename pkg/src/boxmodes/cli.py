"""Command-line front end.

Subcommands: modes, fence, pin, leakage, fit.  Every subcommand accepts
--config (INI file with the sections below), --out, --seed, and --jobs;
command-line flags override config values, which override the built-in
defaults (the worked 72 mm box / leakage-sweep parameter set).

Config sections and keys (units are part of the key name):

    [cavity]   side_mm height_mm depth_mm epsilon_r mode_count
    [dynamics] horizon_ns n_time_points
    [sweep]    f_101_ghz f_q_ghz g0_mhz t1_us t2_us n_min n_max
               p_threshold frequency_source
    [fence]    d n side_mm wire_diameter_um
    [pinning]  side_mm resolution wire_diameter_um max_wires target_ghz
               theta min_separation_mm epsilon_r

Unknown sections or keys are rejected.  Exit codes: 0 success, 2 config or
input error, 3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import configparser
import copy
import os
import sys

import numpy as np

from . import analysis, bloch, fencing, helmholtz, physics, pinning

SCHEMA: dict[str, dict[str, object]] = {
    "cavity": {
        "side_mm": 72.0,
        "height_mm": 3.0,
        "depth_mm": 72.0,
        "epsilon_r": 1.0,
        "mode_count": 10,
    },
    "dynamics": {"horizon_ns": 250.0, "n_time_points": 2000},
    "sweep": {
        "f_101_ghz": 3.0,
        "f_q_ghz": 6.0,
        "g0_mhz": 4.0,
        "t1_us": 100.0,
        "t2_us": 50.0,
        "n_min": 0,
        "n_max": 25,
        "p_threshold": 0.0057,
        "frequency_source": "analytic",
    },
    "fence": {"d": 1, "n": 2, "side_mm": 72.0, "wire_diameter_um": 500.0},
    "pinning": {
        "side_mm": 72.0,
        "resolution": 257,
        "wire_diameter_um": 500.0,
        "max_wires": 89,
        "target_ghz": None,
        "theta": 0.9,
        "min_separation_mm": None,
        "epsilon_r": 1.0,
    },
}


class ConfigError(Exception):
    pass


def load_config(path: str | None) -> dict[str, dict[str, object]]:
    """Defaults overlaid with the INI file at path (when given)."""
    cfg = copy.deepcopy(SCHEMA)
    if path is None:
        return cfg
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as err:
        raise ConfigError(f"cannot parse config: {err}") from err
    for section in parser.sections():
        if section not in cfg:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in cfg[section]:
                raise ConfigError(f"unknown key '{key}' in section [{section}]")
            default = cfg[section][key]
            try:
                if isinstance(default, int) and not isinstance(default, bool):
                    cfg[section][key] = int(raw)
                elif isinstance(default, float) or default is None:
                    cfg[section][key] = float(raw)
                else:
                    cfg[section][key] = raw.strip()
            except ValueError as err:
                raise ConfigError(
                    f"bad value for {key} in [{section}]: {raw!r}"
                ) from err
    return cfg


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="INI config file")
    common.add_argument("--out", metavar="DIR", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=0, help="eigensolver seed")
    common.add_argument("--jobs", type=int, default=1, help="parallel sweep rows")

    parser = argparse.ArgumentParser(
        prog="boxmodes",
        description="Cavity-mode leakage estimates and wire-grid mitigation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("modes", parents=[common], help="closed-form box mode table")
    p.add_argument("--count", type=int, help="number of modes to list")

    p = sub.add_parser("fence", parents=[common], help="half-wave fence layout")
    p.add_argument("--d", type=int, help="fence iteration depth")
    p.add_argument("--n", type=int, help="division factor")
    p.add_argument("--wire-um", type=float, help="wire diameter (micrometres)")
    p.add_argument("--solve", action="store_true", help="also solve the layout numerically")
    p.add_argument("--resolution", type=int, help="grid resolution for --solve")

    p = sub.add_parser("pin", parents=[common], help="antinode pinning run")
    p.add_argument("--max-wires", type=int, help="wire budget")
    p.add_argument("--target-ghz", type=float, help="target frequency (GHz)")
    p.add_argument("--wire-um", type=float, help="wire diameter (micrometres)")
    p.add_argument("--resolution", type=int, help="grid resolution")
    p.add_argument("--theta", type=float, help="antinode threshold")
    p.add_argument("--min-sep-mm", type=float, help="minimum wire separation (mm)")
    p.add_argument("--fields", action="store_true", help="dump per-iteration fields")

    p = sub.add_parser("leakage", parents=[common], help="leakage error sweep")
    p.add_argument("--no-damping", action="store_true", help="undamped curve only")
    p.add_argument("--plot", action="store_true", help="also write an SVG plot")
    p.add_argument("--source", choices=["analytic", "numerical"], help="frequency law")

    p = sub.add_parser("fit", parents=[common], help="anticrossing fit")
    p.add_argument("data", metavar="CSV", help="columns f_r_hz,lower_hz,upper_hz[,sigma_hz]")

    return parser


def _outdir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def cmd_modes(args, cfg) -> int:
    cav = cfg["cavity"]
    geom = physics.CavityGeometry(
        length_a=cav["side_mm"] * 1e-3,
        height_b=cav["height_mm"] * 1e-3,
        depth_e=cav["depth_mm"] * 1e-3,
        relative_permittivity=cav["epsilon_r"],
    )
    count = args.count if args.count is not None else cav["mode_count"]
    if count < 1:
        raise ConfigError("mode count must be positive")
    table = []
    bound = 8
    for n in range(bound + 1):
        for m in range(bound + 1):
            for l in range(bound + 1):
                if sum(1 for i in (n, m, l) if i > 0) < 2:
                    continue
                idx = physics.CavityModeIndex(n, m, l)
                table.append((physics.mode_frequency(geom, idx), n, m, l))
    table.sort()
    table = table[:count]
    path = os.path.join(_outdir(args), "modes.csv")
    with open(path, "w", newline="") as fh:
        fh.write("n,m,l,f_hz\n")
        for f, n, m, l in table:
            fh.write(f"{n},{m},{l},{f!r}\n")
    for f, n, m, l in table:
        print(f"({n},{m},{l})  {f / 1e9:.6f} GHz")
    print(f"wrote {path}")
    return 0


def cmd_fence(args, cfg) -> int:
    fc = cfg["fence"]
    d = args.d if args.d is not None else fc["d"]
    n = args.n if args.n is not None else fc["n"]
    wire = (args.wire_um if args.wire_um is not None else fc["wire_diameter_um"]) * 1e-6
    plan = fencing.FencePlan(d=d, side=fc["side_mm"] * 1e-3, wire_diameter=wire, n=n)
    layout = fencing.generate_fence_layout(plan)
    path = os.path.join(_outdir(args), "fence_layout.csv")
    fencing.write_layout_csv(layout, path)
    print(f"iteration d={d} n={n}: {layout.count} wires, predicted f_c/f_101 = "
          f"{fencing.fence_scaled_frequency(d, n)!r}")
    print(f"wrote {path}")
    if args.solve:
        res = args.resolution if args.resolution is not None else cfg["pinning"]["resolution"]
        grid = helmholtz.Grid(side=plan.side, resolution=res)
        empty = helmholtz.dominant_eigenmode(grid, seed=args.seed)
        mask = helmholtz.rasterize_wires(grid, layout) if layout.count else None
        sol = helmholtz.dominant_eigenmode(grid, mask=mask, seed=args.seed)
        print(f"simulated f_c = {sol.frequency / 1e9:.6f} GHz "
              f"(f_c/f_101 = {sol.frequency / empty.frequency:.4f}, "
              f"residual {sol.residual:.2e})")
    return 0


def cmd_pin(args, cfg) -> int:
    pc = cfg["pinning"]
    res = args.resolution if args.resolution is not None else pc["resolution"]
    target_ghz = args.target_ghz if args.target_ghz is not None else pc["target_ghz"]
    max_wires = args.max_wires if args.max_wires is not None else pc["max_wires"]
    min_sep_mm = args.min_sep_mm if args.min_sep_mm is not None else pc["min_separation_mm"]
    p_cfg = pinning.PinningConfig(
        grid=helmholtz.Grid(side=pc["side_mm"] * 1e-3, resolution=res),
        wire_diameter=(args.wire_um if args.wire_um is not None else pc["wire_diameter_um"]) * 1e-6,
        target_frequency=None if target_ghz is None else target_ghz * 1e9,
        max_wires=max_wires,
        threshold=args.theta if args.theta is not None else pc["theta"],
        min_separation=None if min_sep_mm is None else min_sep_mm * 1e-3,
        relative_permittivity=pc["epsilon_r"],
        seed=args.seed,
    )
    out = _outdir(args)
    writer = None
    if args.fields:
        def writer(iteration: int, sol: helmholtz.EigenSolution) -> None:
            helmholtz.write_field_csv(sol.field, os.path.join(out, f"field_{iteration:02d}.csv"))
            helmholtz.write_field_pgm(sol.field, os.path.join(out, f"field_{iteration:02d}.pgm"))

    report = pinning.run_pinning(p_cfg, on_iteration=writer)
    pinning.write_report_csv(report, os.path.join(out, "pinning_report.csv"))
    fencing.write_layout_csv(report.layout, os.path.join(out, "pinned_layout.csv"))
    for it in report.iterations:
        print(f"iter {it.iteration:2d}: +{it.wires_added:3d} wires "
              f"(N = {it.n_total:3d})  f_c = {it.frequency / 1e9:.4f} GHz")
    print(f"status: {report.status} ({report.skipped_overlaps} overlap skips)")
    print(f"wrote {os.path.join(out, 'pinning_report.csv')}")
    return 0


def cmd_leakage(args, cfg) -> int:
    sw, dyn = cfg["sweep"], cfg["dynamics"]
    source = args.source if args.source is not None else sw["frequency_source"]
    t1, t2 = sw["t1_us"] * 1e-6, sw["t2_us"] * 1e-6
    if args.no_damping:
        t1 = t2 = 1e6  # effectively lossless over any realistic horizon
    pin_cfg = None
    if source == "numerical":
        pc = cfg["pinning"]
        pin_cfg = pinning.PinningConfig(
            grid=helmholtz.Grid(side=pc["side_mm"] * 1e-3, resolution=pc["resolution"]),
            wire_diameter=pc["wire_diameter_um"] * 1e-6,
            max_wires=max(sw["n_max"], 1),
            threshold=pc["theta"],
            min_separation=None
            if pc["min_separation_mm"] is None
            else pc["min_separation_mm"] * 1e-3,
            relative_permittivity=pc["epsilon_r"],
            seed=args.seed,
        )
    s_cfg = analysis.SweepConfig(
        f_101=sw["f_101_ghz"] * 1e9,
        f_q=sw["f_q_ghz"] * 1e9,
        g0=sw["g0_mhz"] * 1e6,
        horizon=dyn["horizon_ns"] * 1e-9,
        t1=t1,
        t2=t2,
        n_range=tuple(range(sw["n_min"], sw["n_max"] + 1)),
        p_threshold=sw["p_threshold"],
        frequency_source=source,
        n_time_points=dyn["n_time_points"],
        pinning=pin_cfg,
    )
    result = analysis.leakage_sweep(s_cfg, jobs=args.jobs)
    out = _outdir(args)
    path = os.path.join(out, "leakage_sweep.csv")
    if args.no_damping:
        with open(path, "w", newline="") as fh:
            fh.write("N,f_tilde_c,delta_Hz,g_Hz,p_undamped\n")
            for r in result.rows:
                fh.write(f"{r.n},{r.f_tilde!r},{r.delta!r},{r.g!r},{r.p_undamped!r}\n")
    else:
        analysis.write_sweep_csv(result, path)
    crossing = result.threshold_crossing_delta
    if crossing is None:
        print("undamped curve never crosses the threshold in this range")
    else:
        print(f"undamped p crosses p_th = {s_cfg.p_threshold} at |delta| = "
              f"{crossing / 1e6:.2f} MHz ({crossing / s_cfg.g0:.1f} g0)")
    print(f"wrote {path}")
    if args.plot:
        plot_path = os.path.join(out, "leakage.svg")
        _plot_sweep(result, plot_path, damped=not args.no_damping)
        print(f"wrote {plot_path}")
    return 0


def _plot_sweep(result, path: str, damped: bool) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    cfg = result.config
    dt = np.array([r.delta for r in result.rows]) / cfg.f_101
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.semilogy(dt, [max(r.p_undamped, 1e-12) for r in result.rows],
                "o-", ms=3, label="undamped")
    if damped:
        ax.semilogy(dt, [max(r.p_damped, 1e-12) for r in result.rows],
                    "s--", ms=3, label="damped")
    ax.axhline(cfg.p_threshold, color="k", lw=0.8, ls=":", label="threshold")
    if result.threshold_crossing_delta is not None:
        ax.axvline(result.threshold_crossing_delta / cfg.f_101, color="k", lw=0.8)
    ax.set_xlabel("detuning / f_101")
    ax.set_ylabel("depolarizing probability")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def cmd_fit(args, cfg) -> int:
    del cfg
    if not os.path.exists(args.data):
        raise ConfigError(f"data file not found: {args.data}")
    rows = np.genfromtxt(args.data, delimiter=",", names=True)
    names = rows.dtype.names or ()
    needed = ("f_r_hz", "lower_hz", "upper_hz")
    if not all(k in names for k in needed):
        raise ConfigError(f"fit input must have columns {','.join(needed)}[,sigma_hz]")
    fr = np.atleast_1d(rows["f_r_hz"])
    try:
        data = analysis.AnticrossingData(
            f_resonator=fr,
            lower=np.atleast_1d(rows["lower_hz"]),
            upper=np.atleast_1d(rows["upper_hz"]),
            sigma=np.atleast_1d(rows["sigma_hz"]) if "sigma_hz" in names else None,
        )
    except ValueError as err:
        raise ConfigError(f"insufficient data: {err}") from err
    result = analysis.fit_anticrossing(data)
    text = result.report()
    print(text, end="")
    path = os.path.join(_outdir(args), "fit_report.txt")
    with open(path, "w") as fh:
        fh.write(text)
    print(f"wrote {path}")
    return 0


COMMANDS = {
    "modes": cmd_modes,
    "fence": cmd_fence,
    "pin": cmd_pin,
    "leakage": cmd_leakage,
    "fit": cmd_fit,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except helmholtz.NonConvergenceError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
