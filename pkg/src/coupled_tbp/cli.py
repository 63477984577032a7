"""Command line entry point: ``coupled-tbp <subcommand> [options]``.

Every run writes CSV tables (and SVG figures with ``--plot``) into
``--out`` together with a ``manifest.json`` describing the run. Exit
status: 0 success, 1 input error, 2 numerical guard (decay/degeneracy).
"""

import argparse
from dataclasses import asdict
import json
import logging
from pathlib import Path
import sys
import time

import numpy as np

from . import __version__, _io
from .errors import GuardError, InputError, TBPError
from .ingest import bundled_config, load_channel, load_rom, synthesize_channels, table1_pipeline, write_table1
from .metrics import DissipationMetrics
from .model import PARAM_KEYS, ImpulseCase, SystemParams, load_params, modal_excitation, modes, receptance
from .response import envelope, integrate_ode, mechanical_energy, total_energy
from . import studies

METRICS_HEADER = ("gamma", "case", "bandwidth", "storage_time", "tbp", "central_frequency")
EXTREME_GAMMA = {1: 2.70, 2: 0.35}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message, module="cli")


def _common(p):
    p.add_argument("--config", help="key=value parameter file")
    p.add_argument("--case", type=int, choices=(1, 2), default=1,
                   help="impulse on oscillator 1 or 2 (default 1)")
    p.add_argument("--out", default="out", help="output directory (default ./out)")
    p.add_argument("--plot", action="store_true", help="also write SVG figures")
    for key in PARAM_KEYS:
        p.add_argument("--" + key.replace("_", "-"), dest=key, type=float, default=None)
    p.add_argument("--gamma", type=float, default=None,
                   help="set beta from gamma = 4 beta / (lambda2 - lambda1)")


def build_parser():
    parser = _Parser(prog="coupled-tbp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("simulate", help="RK4 trajectories and analytic envelopes/energy")
    _common(p)
    p.add_argument("--t-end", type=float, default=200.0)
    p.add_argument("--dt", type=float, default=0.01)

    p = sub.add_parser("metrics", help="bandwidth, storage time and TBP of one system")
    _common(p)
    p.add_argument("--dt", type=float, default=studies.ENVELOPE_DT)

    p = sub.add_parser("sweep-gamma", help="metrics along the default gamma grid")
    _common(p)
    p.add_argument("--points", type=int, default=None,
                   help="use a log grid of this many points instead of the default")

    p = sub.add_parser("grid-damping", help="metrics over (lambda1, beta)")
    _common(p)
    p.add_argument("--lambda1-points", type=int, default=6)
    p.add_argument("--beta-points", type=int, default=30)

    p = sub.add_parser("mpc-curve", help="modal phase collinearity along gamma")
    _common(p)

    for name, what in (("compare-bw", "same-bandwidth"), ("compare-est", "same-storage-time")):
        p = sub.add_parser(name, help=f"two-DOF system vs {what} single-DOF resonator")
        _common(p)

    p = sub.add_parser("extremes", help="transients at the extreme-TBP configurations")
    _common(p)
    p.add_argument("--t-end", type=float, default=600.0)

    p = sub.add_parser("receptance", help="frequency response (receptance) curves")
    _common(p)
    p.add_argument("--omega-max", type=float, default=None)
    p.add_argument("--points", type=int, default=2001)

    p = sub.add_parser("table1", help="ROM and record routes for a measured fixture")
    _common(p)
    p.add_argument("--channels", nargs=2, metavar=("CH1", "CH2"),
                   help="measured velocity records (CSV t,v) of oscillators 1 and 2")
    p.add_argument("--synthetic", action="store_true",
                   help="generate records from the ROM with the RK4 oracle")
    return parser


def _config_path(name):
    """A file on disk, or else a config of that name shipped with the package."""
    if name is None or Path(name).exists():
        return name
    bundled = bundled_config(Path(name).name)
    if bundled.is_file():
        return str(bundled)
    return name


def _is_rom_file(path):
    raw = _io.read_keyvalue(path, module="cli")
    return "k1" in raw


def resolve_params(args):
    overrides = {k: getattr(args, k) for k in PARAM_KEYS}
    if args.config:
        if _is_rom_file(args.config):
            p = load_rom(args.config).dimensional_params()
            p = SystemParams(**{**p.as_dict(), **{k: v for k, v in overrides.items() if v is not None}})
        else:
            p = load_params(args.config, **overrides)
    else:
        p = SystemParams(**{k: v for k, v in overrides.items() if v is not None})
    if args.gamma is not None:
        p = p.with_gamma(args.gamma)
    return p


def _gamma_of(p):
    dl = p.lambda2 - p.lambda1
    return 4 * p.beta / dl if dl != 0 else float("inf")


def _metrics_row(gamma, case, m: DissipationMetrics):
    return (gamma, case, m.bandwidth, m.storage_time, m.tbp, m.central_frequency)


def cmd_simulate(args, out, outputs):
    p = resolve_params(args)
    case = ImpulseCase.case(args.case)
    traj = integrate_ode(p, case, args.t_end, args.dt)
    for name in ("u1", "u2", "v1", "v2"):
        outputs.append(traj.series(name).to_csv(out / f"{name}.csv", name))
    outputs.append(mechanical_energy(p, traj).to_csv(out / "mechanical_energy.csv", "energy"))
    t = traj.t
    try:
        data = modal_excitation(modes(p), case, p)
    except GuardError as exc:
        logging.warning("analytic envelopes skipped: %s", exc)
        data = None
    if data is not None:
        env = envelope(data, t)
        outputs.append(_io.write_columns(out / "envelope1.csv", {"t": t, "envelope1": env[0]}))
        outputs.append(_io.write_columns(out / "envelope2.csv", {"t": t, "envelope2": env[1]}))
        outputs.append(_io.write_columns(out / "energy.csv", {"t": t, "energy": total_energy(data, p, t)}))
    if args.plot:
        from .plotting import plot_xy

        outputs.append(plot_xy(out / "simulate.svg", t, {"v1": traj.states[:, 2], "v2": traj.states[:, 3]},
                               "t", "velocity"))
    return {"params": p.as_dict(), "case": args.case}


def cmd_metrics(args, out, outputs):
    p = resolve_params(args)
    eff = studies.analyze(p, args.case, dt=args.dt)
    outputs.append(_io.write_table(out / "metrics.csv", METRICS_HEADER,
                                   [_metrics_row(_gamma_of(p), args.case, eff.metrics)]))
    outputs.append(eff.energy.to_csv(out / "energy.csv", "energy"))
    outputs.append(eff.envelope.to_csv(out / "effective_envelope.csv", "envelope"))
    if args.plot:
        from .plotting import plot_xy

        outputs.append(plot_xy(out / "energy.svg", eff.energy.t,
                               {"energy": eff.energy.values / eff.energy.values[0]},
                               "t", "E / E(0)", vlines=(eff.metrics.storage_time,)))
    return {"params": p.as_dict(), "case": args.case}


def cmd_sweep_gamma(args, out, outputs):
    p = resolve_params(args)
    grid = None
    if args.points:
        grid = np.logspace(np.log10(0.05), np.log10(50), args.points)
    path = out / f"sweep_gamma_case{args.case}.csv"
    rows = studies.sweep_gamma(studies.SweepSpec(base=p, case=ImpulseCase.case(args.case),
                                                 gamma_grid=grid, out=path))
    outputs.append(path)
    if args.plot:
        from .plotting import plot_sweeps

        outputs.append(plot_sweeps(out / f"sweep_gamma_case{args.case}.svg", {f"Case {args.case}": rows}))
    return {"params": p.as_dict(), "case": args.case, "points": len(rows)}


def cmd_grid_damping(args, out, outputs):
    p = resolve_params(args)
    lam1 = np.linspace(0.00125, p.lambda2, args.lambda1_points)
    beta = np.logspace(np.log10(3e-4), np.log10(0.6), args.beta_points)
    path = out / f"grid_damping_case{args.case}.csv"
    rows = studies.grid_damping(studies.SweepSpec(base=p, case=ImpulseCase.case(args.case),
                                                  lambda1_grid=lam1, beta_grid=beta, out=path))
    outputs.append(path)
    if args.plot:
        from .plotting import plot_xy

        ys = {}
        for l1 in lam1:
            sel = [r for r in rows if r.lambda1 == l1]
            ys[f"lambda1={l1:.4g}"] = [r.tbp for r in sel]
        outputs.append(plot_xy(out / f"grid_damping_case{args.case}.svg", beta, ys, "beta", "TBP",
                               logx=True))
    return {"params": p.as_dict(), "case": args.case}


def cmd_mpc_curve(args, out, outputs):
    p = resolve_params(args)
    path = out / "mpc_curve.csv"
    rows = studies.mpc_curve(p, out=path)
    outputs.append(path)
    if args.plot:
        from .plotting import plot_xy

        g = [r[0] for r in rows]
        outputs.append(plot_xy(out / "mpc_curve.svg", g, {"mode 1": [r[1] for r in rows],
                                                          "mode 2": [r[2] for r in rows]},
                               "gamma", "MPC", logx=True, vlines=(2.0,)))
    return {"params": p.as_dict()}


def _comparison(args, out, outputs, func, stem):
    p = resolve_params(args)
    gamma = args.gamma if args.gamma is not None else EXTREME_GAMMA[args.case]
    rep = func(gamma, args.case, base=p)
    outputs.append(rep.to_csv(out / f"{stem}.csv"))
    outputs.append(_io.write_table(
        out / f"{stem}_metrics.csv", ("system",) + METRICS_HEADER[2:] + ("marker",),
        [(lab, *m.row(), mk) for lab, m, mk in zip(rep.labels, rep.metrics, rep.markers)]))
    if args.plot:
        from .plotting import plot_xy

        outputs.append(plot_xy(out / f"{stem}.svg", rep.axis, dict(zip(rep.labels, rep.series)),
                               "t" if rep.kind == "energy" else "omega",
                               "E / E(0)" if rep.kind == "energy" else "|V|",
                               vlines=rep.markers))
    return {"params": p.as_dict(), "case": args.case, "gamma": gamma}


def cmd_compare_bw(args, out, outputs):
    return _comparison(args, out, outputs, studies.compare_same_bw, "compare_bw")


def cmd_compare_est(args, out, outputs):
    return _comparison(args, out, outputs, studies.compare_same_est, "compare_est")


def cmd_extremes(args, out, outputs):
    p = resolve_params(args)
    rep = studies.extreme_case_transients(p, t_end=args.t_end)
    outputs.append(rep.to_csv(out / "extremes.csv"))
    outputs.append(_io.write_table(
        out / "extremes_metrics.csv", ("series",) + METRICS_HEADER[2:],
        [(lab, *m.row()) for lab, m in zip(rep.labels, rep.metrics)]))
    if args.plot:
        from .plotting import plot_xy

        outputs.append(plot_xy(out / "extremes_energy.svg", rep.axis, dict(zip(rep.labels, rep.series)),
                               "t", "E / E(0)"))
    return {"params": p.as_dict()}


def cmd_receptance(args, out, outputs):
    p = resolve_params(args)
    w_top = max(np.sqrt(p.beta1 / p.m1), np.sqrt(p.beta2 / p.m2))
    w_max = args.omega_max if args.omega_max is not None else 2.0 * w_top
    w = np.linspace(0.0, w_max, args.points)
    H = receptance(p, w)
    cols = {"omega": w}
    for i in range(2):
        for j in range(2):
            cols[f"abs_h{i + 1}{j + 1}"] = np.abs(H[:, i, j])
            cols[f"arg_h{i + 1}{j + 1}"] = np.angle(H[:, i, j])
    outputs.append(_io.write_columns(out / "receptance.csv", cols))
    if args.plot:
        from .plotting import plot_xy

        outputs.append(plot_xy(out / "receptance.svg", w, {"|H11|": cols["abs_h11"],
                                                           "|H22|": cols["abs_h22"]},
                               "omega", "|H|", logy=True))
    return {"params": p.as_dict()}


def cmd_table1(args, out, outputs):
    if not args.config:
        raise InputError("table1 needs --config <rom file>", module="cli")
    rom = load_rom(args.config)
    channels = None
    if args.channels:
        channels = tuple(load_channel(path, i + 1, args.case) for i, path in enumerate(args.channels))
    elif args.synthetic:
        channels = synthesize_channels(rom, args.case)
    res = table1_pipeline(rom, args.case, channels=channels)
    outputs.append(write_table1(out / f"table1_case{args.case}.csv", [res]))
    return {"rom": asdict(rom), "case": args.case, "channels": args.channels,
            "synthetic": bool(args.synthetic)}


COMMANDS = {
    "simulate": cmd_simulate,
    "metrics": cmd_metrics,
    "sweep-gamma": cmd_sweep_gamma,
    "grid-damping": cmd_grid_damping,
    "mpc-curve": cmd_mpc_curve,
    "compare-bw": cmd_compare_bw,
    "compare-est": cmd_compare_est,
    "extremes": cmd_extremes,
    "receptance": cmd_receptance,
    "table1": cmd_table1,
}


def run(argv=None):
    """Run one subcommand; returns the process exit status."""
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        args.config = _config_path(args.config)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        outputs = []
        resolved = COMMANDS[args.command](args, out, outputs)
        manifest = {
            "subcommand": args.command,
            "parameters": resolved,
            "inputs": [s for s in (args.config, *(getattr(args, "channels", None) or ())) if s],
            "outputs": sorted(Path(o).name for o in outputs),
            "version": __version__,
            "duration_s": round(time.perf_counter() - start, 3),
        }
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2, default=str) + "\n")
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TBPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
