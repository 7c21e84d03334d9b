"""Command-line front end.

    eulerheat eval        --family b-travel --a 1 --b 1 --c1 1 --c2 1
    eulerheat verify      --suite all
    eulerheat simulate    --family a-cubic --c1 0.5 --lam 0.1 --x-min 0.5 --x-max 1.5
    eulerheat collapse    --family d-virial --times 1 2 4
    eulerheat constraints --eos vdw
    eulerheat erratum     --output erratum.json

Exit status: 0 success, 1 verification failure, 2 configuration error,
3 numerical failure.

A config file (``--config FILE``) holds ``key = value`` lines, optionally
grouped under ``[section]`` headers or written with dotted keys.  The last
dotted component names the flag (``family.c1 = 1`` sets ``--c1``), and
flags on the command line override file values.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import acceptance, analytic, eos, pdesolver, tables, verify
from .errors import ConfigError, EulerHeatError

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

FAMILY_PARAMS = ("a", "b", "A", "c1", "c2", "c3", "alpha", "lam", "gamma", "tc1", "tc2")
EOS_PARAMS = ("a", "b", "c", "n", "A", "B", "C")
EOS_KINDS = {
    "polytropic": eos.Polytropic,
    "quadratic": eos.Quadratic,
    "linear": eos.Linear,
    "virial": eos.Virial,
    "vdw": eos.VanDerWaals,
}
BCS = {"periodic": pdesolver.Periodic, "outflow": pdesolver.Outflow, "dirichlet": None}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def load_config(path: str) -> dict:
    """Parse a flat key = value file into {flag_dest: string}."""
    out = {}
    section = ""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        full = f"{section}.{key}" if section else key
        dest = full.split(".")[-1].replace("-", "_")
        if full.split(".")[0] == "family" and dest == "name":
            dest = "family"
        if full.split(".")[0] == "eos" and dest in ("name", "kind"):
            dest = "eos"
        out[dest] = val
    return out


def _add_family_params(p):
    g = p.add_argument_group("family parameters")
    for name in FAMILY_PARAMS:
        flags = [f"--{name}"]
        if name == "lam":
            flags.append("--lambda")
        g.add_argument(*flags, dest=name, type=float, default=None)


def _add_output(p, default_format="csv"):
    p.add_argument("--output", "-o", default="-", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eulerheat", description="Analytic solutions of the continuity/Euler/heat system")
    parser.add_argument("--config", default=None, help="key = value config file")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("eval", help="sample a family to x,t,rho,v,T columns")
    p.add_argument("--family", choices=sorted(analytic.FAMILIES))
    _add_family_params(p)
    p.add_argument("--x-min", dest="x_min", type=float, default=-5.0)
    p.add_argument("--x-max", dest="x_max", type=float, default=5.0)
    p.add_argument("--nx", type=int, default=201)
    p.add_argument("--times", type=float, nargs="+", default=[1.0])
    p.add_argument("--as-printed", dest="as_printed", action="store_true")
    _add_output(p)

    p = sub.add_parser("verify", help="run acceptance checks")
    p.add_argument("--suite", choices=sorted(acceptance.SUITES), default="all")
    p.add_argument("--output", "-o", default=None, help="optional JSON report path")

    p = sub.add_parser("simulate", help="forward-simulate from analytic initial data")
    p.add_argument("--family", choices=sorted(analytic.FAMILIES))
    _add_family_params(p)
    p.add_argument("--x-min", dest="x_min", type=float, default=0.5)
    p.add_argument("--x-max", dest="x_max", type=float, default=1.5)
    p.add_argument("--nx", type=int, default=200)
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--t-end", dest="t_end", type=float, default=1.2)
    p.add_argument("--outputs", type=float, nargs="*", default=None)
    p.add_argument("--cfl", type=float, default=0.4)
    p.add_argument("--bc", choices=sorted(BCS), default="dirichlet")
    p.add_argument("--wall-clock", dest="wall_clock", type=float, default=600.0)
    _add_output(p)

    p = sub.add_parser("collapse", help="self-similar collapse test")
    p.add_argument("--family", choices=sorted(analytic.FAMILIES))
    _add_family_params(p)
    p.add_argument("--times", type=float, nargs="+", default=[1.0, 2.0, 4.0])
    p.add_argument("--output", "-o", default="-")

    p = sub.add_parser("constraints", help="similarity-exponent feasibility for an EOS")
    p.add_argument("--eos", choices=sorted(EOS_KINDS))
    g = p.add_argument_group("EOS parameters")
    for name in EOS_PARAMS:
        g.add_argument(f"--{name}", dest=name, type=float, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("erratum", help="printed versus corrected residual report")
    p.add_argument("--output", "-o", default="-")
    return parser


def _sub_parser(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = load_config(args.config)
        command = args.command or cfg.pop("command", None)
        cfg.pop("command", None)
        if command is None:
            raise ConfigError("no command given on the command line or in the config file")
        sp = _sub_parser(parser, command)
        known = {a.dest: a for a in sp._actions}
        defaults = {}
        for k, v in cfg.items():
            if k not in known:
                raise ConfigError(f"config key '{k}' is not an option of '{command}'")
            defaults[k] = _coerce(known[k], v)
        sp.set_defaults(**defaults)
        argv = list(argv)
        if args.command is None:
            argv.append(command)
        args = parser.parse_args(argv)
    if args.command is None:
        raise ConfigError("missing command (eval, verify, simulate, collapse, constraints, erratum)")
    return args


def _coerce(action, text):
    if isinstance(action, argparse._StoreTrueAction):
        return text.lower() in ("1", "true", "yes", "on")
    conv = action.type or str
    if action.nargs in ("+", "*"):
        return [conv(t) for t in text.replace(",", " ").split()]
    val = conv(text)
    if action.choices is not None and val not in action.choices:
        raise ConfigError(f"invalid value '{text}' for {action.dest}")
    return val


def make_family(args):
    if not args.family:
        raise ConfigError("--family is required")
    cls = analytic.FAMILIES[args.family]
    allowed = {f.name for f in dataclasses.fields(cls)}
    kw = {}
    for name in FAMILY_PARAMS:
        val = getattr(args, name, None)
        if val is None:
            continue
        if name not in allowed:
            raise ConfigError(f"family {args.family} has no parameter '{name}'")
        kw[name] = val
    try:
        return cls(**kw)
    except EulerHeatError as exc:
        raise ConfigError(str(exc)) from exc


def make_eos(args):
    if not args.eos:
        raise ConfigError("--eos is required")
    cls = EOS_KINDS[args.eos]
    allowed = {f.name for f in dataclasses.fields(cls)}
    kw = {}
    for name in EOS_PARAMS:
        val = getattr(args, name, None)
        if val is None:
            continue
        if name not in allowed:
            raise ConfigError(f"EOS {args.eos} has no parameter '{name}'")
        kw[name] = val
    try:
        return cls(**kw)
    except EulerHeatError as exc:
        raise ConfigError(str(exc)) from exc


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit_table(args, table, meta):
    text = tables.to_csv(table) if args.format == "csv" else tables.to_json(table, meta) + "\n"
    _write(args.output, text)


def cmd_eval(args) -> int:
    fam = make_family(args)
    if args.nx < 2:
        raise ConfigError("--nx must be >= 2")
    mode = analytic.Mode.AS_PRINTED if args.as_printed else analytic.Mode.CORRECTED
    xs = np.linspace(args.x_min, args.x_max, args.nx)
    table = tables.tabulate(fam, xs, args.times, mode)
    _emit_table(args, table, {"family": analytic.family_name(fam), "params": dataclasses.asdict(fam), "mode": mode.value})
    return EXIT_OK


def cmd_verify(args) -> int:
    results = acceptance.run(acceptance.SUITES[args.suite], echo=print)
    if args.output:
        _write(args.output, verify.dumps([dataclasses.asdict(r) for r in results]) + "\n")
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_simulate(args) -> int:
    fam = make_family(args)
    lam = analytic.family_lambda(fam) or 0.0
    grid = pdesolver.Grid1D.from_interval(args.x_min, args.x_max, args.nx)
    ic = pdesolver.state_from_family(fam, grid, args.t0)
    bc_cls = BCS[args.bc]
    bc = pdesolver.DirichletFromFamily(fam) if bc_cls is None else bc_cls()
    cfg = pdesolver.SimConfig(cfl=args.cfl, wall_clock=args.wall_clock)
    traj = pdesolver.simulate(ic, analytic.family_eos(fam), lam, args.t_end, bc=bc, output_times=args.outputs, config=cfg)
    _emit_table(args, tables.states_table(traj), {"family": analytic.family_name(fam), "bc": args.bc})
    return EXIT_OK


def cmd_collapse(args) -> int:
    fam = make_family(args)
    if not isinstance(fam, analytic.SELF_SIMILAR):
        raise ConfigError(f"collapse needs a self-similar family, not {args.family}")
    rep = verify.collapse_test(fam, args.times)
    _write(args.output, verify.dumps(rep) + "\n")
    return EXIT_OK


def cmd_constraints(args) -> int:
    res = eos.exponent_constraints(make_eos(args))
    if args.format == "json":
        print(json.dumps(res.as_dict(), indent=2, sort_keys=True))
        return EXIT_OK
    print("feasible" if res.feasible else "infeasible")
    if res.exponents is not None:
        for k, v in res.exponents.as_dict().items():
            if k == "omega" and v is None:
                continue
            print(f"  {k} = {'free' if v is None else v}")
    print(f"  reason: {res.reason}")
    return EXIT_OK


def cmd_erratum(args) -> int:
    rep = verify.erratum_report()
    _write(args.output, verify.dumps(rep) + "\n")
    for e in rep.entries:
        tag = "ok " if e.verdict else "BAD"
        print(
            f"[{tag}] {e.name:38s} {e.equation:10s} printed={e.printed[-1]:.3e} corrected={e.corrected[-1]:.3e}",
            file=sys.stderr,
        )
    return EXIT_OK if rep.all_pass else EXIT_VERIFY


COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "collapse": cmd_collapse,
    "constraints": cmd_constraints,
    "erratum": cmd_erratum,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"eulerheat: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (EulerHeatError, ArithmeticError, ValueError) as exc:
        print(f"eulerheat: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
