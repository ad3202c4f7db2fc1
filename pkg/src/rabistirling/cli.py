"""Command-line front end.

Exit codes: 0 ok, 2 domain error, 3 not an engine, 4 I/O error, 5 validation failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from . import fullmodel, sweep
from .cycle import EFFECTIVE, EXACT, StirlingSpec, run_cycle
from .errors import DomainError, RabiStirlingError
from .medium import MediumParams, effective_spectrum, lambda_for_g
from .plot import line_plot_svg, sweep_curves

EXIT_OK, EXIT_DOMAIN, EXIT_NOT_ENGINE, EXIT_IO, EXIT_VALIDATION = 0, 2, 3, 4, 5

# options scaled by pi under --pi-units
PI_SCALED = ("omega0", "gamma", "lam", "epsilon", "t_cold", "t_hot", "gammas")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def read_config(path) -> dict:
    """``key=value`` lines; ``#`` starts a comment; dashes in keys become underscores."""
    cfg = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"{path}:{lineno}: expected key=value", EXIT_DOMAIN)
            key, value = (s.strip() for s in line.split("=", 1))
            cfg[key.replace("-", "_")] = value
    return cfg


def _float_list(text):
    return [float(v) for v in text.replace(",", " ").split()]


def _fock(text):
    return None if text == "auto" else int(text)


def _medium_args(p, coupling=True):
    p.add_argument("--omega0", type=float, help="mode frequency (default 0.4*pi)")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--gamma", type=float, help="spin-spin coupling")
    grp.add_argument("--zeta", type=float, help="gamma/omega0")
    if coupling:
        grp2 = p.add_mutually_exclusive_group()
        grp2.add_argument("--lambda", dest="lam", type=float, help="spin-mode coupling")
        grp2.add_argument("--xi", type=float, help="lambda/omega0")
        grp2.add_argument("--g", type=float, help="effective coupling")
    p.add_argument("--epsilon", type=float, help="qubit frequency (default omega0)")


def _common(p):
    p.add_argument("--pi-units", dest="pi_units", action="store_true", default=None,
                   help="multiply frequencies and temperatures by pi")
    p.add_argument("--format", choices=("text", "json"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rabistirling", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file; command-line flags take precedence")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gap", help="effective spectrum at one parameter point")
    _medium_args(p)
    p.add_argument("--critical-tol", dest="critical_tol", type=float)
    _common(p)

    p = sub.add_parser("cycle", help="run one Stirling cycle")
    _medium_args(p, coupling=False)
    p.add_argument("--g1", type=float)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--g2", type=float)
    grp.add_argument("--xi2", type=float, help="lambda/omega0 on the g2 isochore")
    p.add_argument("--t-cold", dest="t_cold", type=float)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--t-hot", dest="t_hot", type=float)
    grp.add_argument("--alpha", type=float, help="T_H/T_C")
    p.add_argument("--medium", choices=(EFFECTIVE, EXACT))
    p.add_argument("--fock-max", dest="fock_max", type=_fock, help="'auto' or an integer cutoff")
    p.add_argument("--critical-tol", dest="critical_tol", type=float)
    _common(p)

    p = sub.add_parser("sweep", help="parameter scan to CSV (and optional SVG)")
    p.add_argument("--preset", choices=sweep.FIGURE_PRESETS + ("scaling",))
    p.add_argument("--axis", choices=("xi", "gamma", "g2"))
    p.add_argument("--axis-min", dest="axis_min", type=float)
    p.add_argument("--axis-max", dest="axis_max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--gammas", type=_float_list, help="comma-separated gamma values")
    p.add_argument("--xis", type=_float_list, help="comma-separated xi values")
    p.add_argument("--t-cold", dest="t_cold", type=_float_list, help="comma-separated T_C values")
    p.add_argument("--alphas", type=_float_list)
    p.add_argument("--g1", type=float)
    p.add_argument("--omega0", type=float)
    p.add_argument("--zeta", type=float, help="scaling preset: gamma/omega0")
    p.add_argument("--decades", type=int, help="scaling preset: decades of 1-g2 below 1e-2")
    p.add_argument("--medium", choices=(EFFECTIVE, EXACT))
    p.add_argument("--fock-max", dest="fock_max", type=_fock)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="CSV path, '-' for stdout")
    p.add_argument("--svg", help="SVG plot path")
    _common(p)

    p = sub.add_parser("validate", help="exact-diagonalization check of the effective gaps")
    p.add_argument("--zeta", type=_float_list, help="comma-separated zeta values (default 500)")
    p.add_argument("--grid", type=_float_list, help="comma-separated g values")
    p.add_argument("--omega0", type=float)
    _common(p)
    return parser


def merge_config(parser, args) -> argparse.Namespace:
    """Fill options not given on the command line from ``--config``."""
    if not args.config:
        return args
    try:
        cfg = read_config(args.config)
    except OSError as exc:
        raise CliError(f"cannot read config: {exc}", EXIT_IO) from exc
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in subparser._actions}
    for key, raw in cfg.items():
        if key not in actions:
            raise CliError(f"unknown config key {key!r} for command {args.command}", EXIT_DOMAIN)
        if getattr(args, key) is not None:
            continue
        action = actions[key]
        if action.type is None and action.const is True:
            value = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            value = action.type(raw)
        else:
            value = raw
        if action.choices is not None and value not in action.choices:
            raise CliError(f"config {key}={raw!r}: expected one of {list(action.choices)}", EXIT_DOMAIN)
        setattr(args, key, value)
    return args


def apply_units(args) -> argparse.Namespace:
    if not args.pi_units:
        return args
    for name in PI_SCALED:
        v = getattr(args, name, None)
        if v is None:
            continue
        setattr(args, name, [x * math.pi for x in v] if isinstance(v, list) else v * math.pi)
    if getattr(args, "axis", None) == "gamma":
        for name in ("axis_min", "axis_max"):
            if getattr(args, name) is not None:
                setattr(args, name, getattr(args, name) * math.pi)
    return args


def config_header(args) -> str:
    items = {k: v for k, v in sorted(vars(args).items()) if v is not None and k != "config"}
    return "# " + " ".join(f"{k}={v}" for k, v in items.items())


def _omega0(args):
    return args.omega0 if args.omega0 is not None else sweep.OMEGA0


def _gamma(args, omega0):
    if args.gamma is not None:
        return args.gamma
    if args.zeta is not None:
        return args.zeta * omega0
    raise CliError("one of --gamma / --zeta is required", EXIT_DOMAIN)


def _medium(args) -> MediumParams:
    omega0 = _omega0(args)
    gamma = _gamma(args, omega0)
    if args.lam is not None:
        lam = args.lam
    elif args.xi is not None:
        lam = args.xi * omega0
    elif args.g is not None:
        lam = lambda_for_g(args.g, omega0, gamma)
    else:
        raise CliError("one of --lambda / --xi / --g is required", EXIT_DOMAIN)
    return MediumParams(omega0, gamma, lam, args.epsilon)


def _emit(args, text, payload, out):
    if args.format == "json":
        payload = dict(payload, config={k: v for k, v in vars(args).items() if v is not None})
        out.write(json.dumps(payload, indent=2, default=str) + "\n")
    else:
        out.write(config_header(args) + "\n" + text + "\n")


def cmd_gap(args, out) -> int:
    params = _medium(args)
    tol = args.critical_tol if args.critical_tol is not None else 1e-9
    spec = effective_spectrum(params, tol)
    text = (f"phase={spec.phase.value} g={spec.g:.10g} gap={spec.gap:.10g} "
            f"E0={spec.ground_energy:.10g} degeneracy={spec.degeneracy}")
    payload = dict(phase=spec.phase.value, g=spec.g, gap=spec.gap, E0=spec.ground_energy,
                   degeneracy=spec.degeneracy, xi=params.xi, zeta=params.zeta)
    _emit(args, text, payload, out)
    return EXIT_OK


def cmd_cycle(args, out) -> int:
    omega0 = _omega0(args)
    gamma = _gamma(args, omega0)
    g1 = args.g1 if args.g1 is not None else sweep.G1
    if args.g2 is not None:
        g2 = args.g2
    elif args.xi2 is not None:
        g2 = math.sqrt(2.0) * args.xi2 / math.sqrt(gamma / omega0)
    else:
        raise CliError("one of --g2 / --xi2 is required", EXIT_DOMAIN)
    if args.t_cold is None:
        raise CliError("--t-cold is required", EXIT_DOMAIN)
    if args.t_hot is not None:
        t_hot = args.t_hot
    elif args.alpha is not None:
        t_hot = args.alpha * args.t_cold
    else:
        raise CliError("one of --t-hot / --alpha is required", EXIT_DOMAIN)
    kw = {}
    if args.critical_tol is not None:
        kw["critical_tol"] = args.critical_tol
    spec = StirlingSpec(g1, g2, args.t_cold, t_hot, args.medium or EFFECTIVE, args.fock_max, **kw)
    r = run_cycle(spec, MediumParams(omega0, gamma, 0.0, args.epsilon))
    fields = dataclasses.asdict(r)
    fields["warnings"] = list(r.warnings)
    fields["is_engine"] = r.is_engine
    lines = [f"{k}={v:.10g}" if isinstance(v, float) else f"{k}={v}" for k, v in fields.items()]
    _emit(args, "\n".join(lines), fields, out)
    return EXIT_OK if r.is_engine else EXIT_NOT_ENGINE


def _custom_sweep(args) -> sweep.SweepSpec:
    if args.axis is None or args.axis_min is None or args.axis_max is None:
        raise CliError("custom sweeps need --axis, --axis-min and --axis-max", EXIT_DOMAIN)
    axis = tuple(np.linspace(args.axis_min, args.axis_max, args.points or sweep.POINTS))
    if args.t_cold is None or args.alphas is None:
        raise CliError("custom sweeps need --t-cold and --alphas", EXIT_DOMAIN)
    kw = dict(figure="custom", axis=args.axis, axis_values=axis, T_Cs=tuple(args.t_cold),
              alphas=tuple(args.alphas), gammas=tuple(args.gammas or ()), xis=tuple(args.xis or ()),
              omega0=_omega0(args), g1=args.g1 if args.g1 is not None else sweep.G1,
              medium_mode=args.medium or EFFECTIVE, fock_max=args.fock_max)
    try:
        return sweep.SweepSpec(**kw)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_DOMAIN) from exc


def _write(path, text, out):
    if path in (None, "-"):
        out.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from exc


def cmd_sweep(args, out) -> int:
    workers = args.workers or 1
    if args.preset == "scaling":
        zeta = args.zeta if args.zeta is not None else 500.0
        omega0 = _omega0(args)
        t_cold = args.t_cold[0] if args.t_cold else 0.008 * math.pi
        alpha = args.alphas[0] if args.alphas else 1.5
        scan = sweep.scaling_scan(g1=args.g1 if args.g1 is not None else sweep.G1, zeta=zeta,
                                  T_C=t_cold, alpha=alpha, decades=args.decades or 4, omega0=omega0)
        rows = sweep.scaling_rows(scan, zeta, omega0)
        if args.out not in (None, "-"):
            _write(args.out, sweep.rows_to_csv(rows), out)
        out.write(config_header(args) + "\n")
        last = scan.points[-1]
        out.write(f"g2={last.g2:.10g} eta={last.eta:.10g} eta_c={last.eta_c:.10g}\n")
        out.write(f"plateau_spread={scan.spread:.6g} plateau_spread_scaling={scan.spread_scaling:.6g}\n")
        return EXIT_OK
    if args.preset:
        over = {}
        if args.medium:
            over["medium_mode"] = args.medium
        if args.fock_max is not None:
            over["fock_max"] = args.fock_max
        spec = sweep.preset(args.preset, args.points or sweep.POINTS, **over)
    else:
        spec = _custom_sweep(args)
    rows = sweep.run_sweep(spec, workers=workers)
    csv_text = sweep.rows_to_csv(rows)
    if args.out in (None, "-"):
        out.write(csv_text)
    else:
        _write(args.out, csv_text, out)
        n_engine = sum(r.is_engine for r in rows)
        out.write(config_header(args) + "\n")
        out.write(f"wrote {len(rows)} rows ({n_engine} engine points) to {args.out}\n")
    if args.svg:
        xlabel = {"xi": "xi", "gamma": "gamma / pi", "g2": "g2"}[spec.axis]
        _write(args.svg, line_plot_svg(sweep_curves(spec, rows), xlabel, "eta", spec.figure), out)
    return EXIT_OK


def cmd_validate(args, out) -> int:
    zetas = args.zeta or [500.0]
    grid = args.grid or [0.0, 0.1, 0.3, 0.5, 0.8, 0.9, 1.2, 1.5]
    rows = fullmodel.validate_effective(grid, zetas, omega0=args.omega0 or 1.0)
    if args.format == "json":
        payload = [dict(dataclasses.asdict(r), passed=r.passed) for r in rows]
        _emit(args, "", dict(rows=payload, passed=all(r.passed for r in rows)), out)
    else:
        lines = [f"{'zeta':>8} {'g':>6} {'gap_exact':>14} {'gap_eff':>14} {'rel_error':>11} "
                 f"{'tol':>5} {'fock':>5}  status"]
        for r in rows:
            lines.append(f"{r.zeta:8.4g} {r.g:6.3g} {r.gap_exact:14.10g} {r.gap_effective:14.10g} "
                         f"{r.rel_error:11.3e} {r.tolerance:5.2g} {r.fock_max_used:5d}  "
                         f"{'ok' if r.passed else 'FAIL'}")
        _emit(args, "\n".join(lines), {}, out)
    return EXIT_OK if all(r.passed for r in rows) else EXIT_VALIDATION


COMMANDS = {"gap": cmd_gap, "cycle": cmd_cycle, "sweep": cmd_sweep, "validate": cmd_validate}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = apply_units(merge_config(parser, args))
        return COMMANDS[args.command](args, out)
    except CliError as exc:
        err.write(f"error: {exc}\n")
        return exc.code
    except DomainError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN
    except RabiStirlingError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
