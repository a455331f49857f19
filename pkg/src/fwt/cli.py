"""Command-line driver: ``fw transform|verify|simulate|render``.

Exit codes:

====  ==========================================================
0     success
1     usage or configuration error
2     parse error in a Hamiltonian source (or config file)
3     series divergence / non-convergence of the FW iteration (or no policy for a
      Hamiltonian that is not exactly transformable)
4     a numeric verification check failed
5     the integrator rejected a step (spin-norm drift)
====  ==========================================================

Options may also come from a plain-text config file (``--config``) with sections
``[fw]`` (all commands), ``[<command>]``, ``[fields]`` and ``[constants]``; keys are
the long flag names.  Flags given on the command line win.
"""
from __future__ import annotations

import argparse
import configparser
import json
import os
import re
import sys
import time
from typing import Optional

from .errors import FWError, NoConvergence, ParseError, SeriesDivergence, SeriesNotRequested, StepRejected

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_DIVERGENCE, EXIT_VERIFY, EXIT_STEP = 0, 1, 2, 3, 4, 5

CASES = ("free", "a", "b", "c", "d", "e", "em", "electroweak", "custom")
DEFAULT_POLICY = {"em": "nonrel:3", "electroweak": "field:1,deriv:1,weak:1"}
GOLDEN_POLICY = {"eq33": DEFAULT_POLICY["electroweak"], "eq39": "nonrel:3", "eq40": "nonrel:3"}
GOLDENS = ("eq33", "eq39", "eq40")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 2 is reserved for Hamiltonian parse errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- argument parsing

def _floats(n: Optional[int] = None):
    def conv(text: str):
        vals = tuple(float(v) for v in str(text).replace(";", ",").split(",") if v.strip())
        if n is not None and len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {len(vals)}")
        return vals
    conv.__name__ = f"{n or ''}floats"
    return conv


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _common(p: argparse.ArgumentParser, formats):
    p.add_argument("--config", help="key=value config file with sections")
    p.add_argument("--format", choices=formats, help=f"output format (default {formats[0]})")
    p.add_argument("--out", help="output file (default stdout)")


def _hamiltonian_args(p: argparse.ArgumentParser):
    p.add_argument("--case", choices=CASES, help="built-in Hamiltonian")
    p.add_argument("--input", help="Hamiltonian source (.fwh); '-' reads stdin")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fw", description="Foldy-Wouthuysen transformation engine")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("transform", help="transform a Hamiltonian to the FW representation")
    _common(t, ("text", "latex", "json"))
    _hamiltonian_args(t)
    t.add_argument("--policy", help="truncation policy 'field:F,deriv:D,weak:W' or 'nonrel:K'")
    t.add_argument("--method", choices=("two-stage", "classic"), help="transformation method (default two-stage)")
    t.add_argument("--weak-field", action="store_true", default=None,
                   help="expand functions of the Eq. (23) core in weak fields (Eq. 33)")
    t.add_argument("--report", help="also write the TransformReport JSON to this file")

    v = sub.add_parser("verify", help="numeric oracles (unitarity, block diagonality, identities, spectra)")
    _common(v, ("json", "text"))
    v.add_argument("--case", choices=("free", "a", "b", "c", "d", "e"), help="exact case to verify")
    v.add_argument("--grid", type=_positive_int, help="number of random points (default 50)")
    v.add_argument("--osc-N", type=_positive_int, help="oscillator truncation (default 40; Landau 200)")
    v.add_argument("--tol", type=_positive, help="tolerance (default 1e-10)")
    v.add_argument("--seed", type=int, help="random seed (default 0)")
    v.add_argument("--p", type=_floats(3), help="pin one plane-wave momentum 'px,py,pz'")
    v.add_argument("--identities", action="store_true", default=None, help="check Eqs. (24) and (25)")
    v.add_argument("--trials", type=_positive_int, help="random samples for the identities (default 1000)")
    v.add_argument("--landau", action="store_true", default=None, help="Landau-level oracle")
    v.add_argument("--B", type=_positive, help="magnetic field of the Landau oracle (default 0.01)")

    s = sub.add_parser("simulate", help="integrate the semiclassical equations (37)-(38)")
    _common(s, ("csv", "json"))
    for name in ("E", "B", "n-center", "xi-matter", "r0", "pi0", "xi0"):
        s.add_argument(f"--{name}", type=_floats(3), help="vector 'x,y,z'")
    for name in ("dE", "dB"):
        s.add_argument(f"--{name}", type=_floats(9), help="gradient d_j F_i, 9 numbers row-major")
    s.add_argument("--n-amp", type=float, help="Gaussian density amplitude")
    s.add_argument("--n-width", type=_positive, help="Gaussian density width")
    for name in ("m", "e", "mu1", "G", "C1", "C2"):
        s.add_argument(f"--{name}", type=float, help=f"constant {name}")
    s.add_argument("--dt", type=_positive, help="step size (default 0.01)")
    s.add_argument("--t-end", type=float, help="final time (default 10)")
    s.add_argument("--tol", type=_positive, help="allowed |xi| drift (default 1e-6)")
    s.add_argument("--kernel", choices=("cython", "python"), help="RK4 kernel (default: compiled if built)")
    s.add_argument("--every", type=_positive_int, help="write every k-th step to the CSV (default 1)")
    s.add_argument("--summary", help="write the summary JSON here (csv format; default stderr)")

    r = sub.add_parser("render", help="render a Hamiltonian source or golden expression")
    _common(r, ("text", "latex", "json"))
    _hamiltonian_args(r)
    r.add_argument("--golden", choices=GOLDENS, help="render a golden equation of the paper")
    r.add_argument("--lhs", help="left-hand side for LaTeX output (default H)")
    r.add_argument("--policy", help="truncation policy for --golden (default: the order the paper states)")
    return ap


def _dest(key: str) -> str:
    return key.strip().replace("-", "_")


def apply_config(args: argparse.Namespace, sub: argparse.ArgumentParser, path: str) -> None:
    """Fill options that were not given as flags from a config file."""
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except configparser.Error as exc:
        raise ParseError(f"config file {path}: {exc}") from None
    actions = {a.dest: a for a in sub._actions}
    known = ("fw", args.command, "fields", "constants")
    for section in cp.sections():
        if section not in ("fw", "transform", "verify", "simulate", "render", "fields", "constants"):
            raise ParseError(f"config file {path}: unknown section [{section}]")
    for section in known:
        if not cp.has_section(section):
            continue
        for key, raw in cp.items(section):
            dest = _dest(key)
            act = actions.get(dest)
            if act is None or dest in ("help", "config"):
                if section in ("fw", "fields", "constants"):
                    continue  # shared sections may hold keys for other commands
                raise UsageError(f"config file {path}: unknown key {key!r} in [{section}]")
            if getattr(args, dest) is not None:
                continue  # flags win
            if isinstance(act, argparse._StoreTrueAction):
                val = raw.strip().lower() in ("1", "true", "yes", "on")
            else:
                try:
                    val = act.type(raw.strip()) if act.type else raw.strip()
                except (ValueError, argparse.ArgumentTypeError) as exc:
                    raise UsageError(f"config file {path}: bad value for {key}: {exc}") from None
                if act.choices and val not in act.choices:
                    raise UsageError(f"config file {path}: {key} must be one of {', '.join(act.choices)}")
            setattr(args, dest, val)


# ---------------------------------------------------------------- output helpers

def _color_enabled(stream) -> bool:
    env = os.environ.get("FW_COLOR")
    if env is not None:
        return env.strip() == "1"
    return hasattr(stream, "isatty") and stream.isatty()


_TOKEN = re.compile(r"\b(beta|gamma5|alpha_\d|gamma_\d|Sigma_\d|Pi_\d|i)\b|\b(inv|sqrt)\(")


def colorize(text: str) -> str:
    """ANSI highlighting of Dirac matrices and operator functions."""
    def sub(mt):
        if mt.group(1):
            return f"\x1b[1;36m{mt.group(1)}\x1b[0m"
        return f"\x1b[33m{mt.group(2)}\x1b[0m("
    return _TOKEN.sub(sub, text)


def _emit(args, text: str, colorable: bool = False) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        if colorable and _color_enabled(sys.stdout):
            text = colorize(text)
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=float)


# ---------------------------------------------------------------- Hamiltonian sources

def load_hamiltonian(args):
    """Returns ``(H, case, stationary)`` for ``--case`` / ``--input``."""
    from . import builders as bl
    from .dsl import parse_hamiltonian, parse_source
    from .numkit import exact_case_hamiltonian
    case = args.case
    if args.input is not None:
        if case not in (None, "custom"):
            raise UsageError("--input and --case are exclusive (use --case custom or omit it)")
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        hs = parse_source(text)
        return parse_hamiltonian(hs), "custom", hs.options.get("stationary")
    if case in (None, "custom"):
        raise UsageError("give --case or --input")
    if case == "em":
        return bl.dirac_pauli(False), case, None
    if case == "electroweak":
        return bl.electroweak(), case, None
    return exact_case_hamiltonian(case), case, None


# ---------------------------------------------------------------- commands

def cmd_transform(args) -> int:
    from .commutators import expand_func_of_even
    from .dsl import latex_document, print_expr
    from .policy import TruncationPolicy, policy_scope
    from .transform import classic_fw, two_stage
    H, case, stationary = load_hamiltonian(args)
    spec = args.policy if args.policy is not None else DEFAULT_POLICY.get(case)
    try:
        pol = TruncationPolicy.parse(spec) if spec else None
    except ValueError as exc:
        raise UsageError(f"--policy: {exc}") from None
    if case == "free":  # no fields: p = pi and the momenta commute
        pol = (pol or TruncationPolicy()).with_zero("e")
    t0 = time.perf_counter()
    if (args.method or "two-stage") == "classic":
        if pol is None or pol.inv_mass_order is None:
            raise UsageError("--method classic needs a 'nonrel:K' policy")
        Hfw, rep = classic_fw(H, pol)
    else:
        Hfw, rep = two_stage(H, pol, stationary=stationary)
    if args.weak_field:
        with policy_scope(pol):
            Hfw = expand_func_of_even(Hfw, "weak-field")
    rep.seconds = time.perf_counter() - t0
    report = rep.to_dict()
    report.pop("seconds", None)  # keep outputs byte-identical across runs
    report["case"] = case
    report["method"] = args.method or "two-stage"
    report["weak_field"] = bool(args.weak_field)
    report["hamiltonian"] = print_expr(Hfw)
    report["terms"] = len(Hfw)
    fmt = args.format or "text"
    if fmt == "json":
        _emit(args, _dumps(report))
    elif fmt == "latex":
        _emit(args, latex_document(Hfw, "H_{FW}"))
    else:
        _emit(args, report["hamiltonian"], colorable=True)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(_dumps(report) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import numkit as nk
    tol = args.tol or 1e-10
    checks = []
    run_all = args.case is None and not args.identities and not args.landau
    if args.p is not None and args.case is None:
        args.case = "free"
    cases = [args.case] if args.case else (list(nk.CASES) if run_all else [])
    for c in cases:
        r = nk.verify_exact_case(c, n_points=args.grid or 50, seed=args.seed or 0, N=args.osc_N or 40,
                                 tol=tol, p=args.p)
        checks.append({"check": f"case:{c}", **r})
    if args.identities or run_all:
        trials = args.trials or 1000
        itol = args.tol or 1e-12
        for name, fn in (("identity24", nk.identity_24_deviation), ("identity25", nk.identity_25_deviation)):
            dev = fn(trials)
            checks.append({"check": name, "trials": trials, "max_deviation": dev, "tol": itol,
                           "passed": dev < itol})
    if args.landau or run_all:
        r = nk.landau_oracle(N=args.osc_N or 200, B=args.B or 0.01, tol=args.tol or 1e-8)
        checks.append({"check": "landau", **r})
    failed = [c["check"] for c in checks if not c["passed"]]
    report = {"checks": checks, "failed": failed, "passed": not failed}
    if (args.format or "json") == "json":
        _emit(args, nk.to_json(report))
    else:
        lines = []
        for c in checks:
            res = c.get("residuals") or {"max_deviation": c.get("max_deviation")}
            worst = max(res.values())
            lines.append(f"{c['check']:<12} {'PASS' if c['passed'] else 'FAIL'}  max residual {worst:.3e}")
        lines.append("all checks passed" if not failed else "FAILED: " + ", ".join(failed))
        _emit(args, "\n".join(lines))
    if failed:
        print("verification failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _field_config(args):
    from .dynamics.fields import FieldConfig
    kw = {}
    for dest, name in (("E", "E0"), ("B", "B0"), ("n_center", "n_center"), ("xi_matter", "xi_matter"),
                       ("n_amp", "n_amp"), ("n_width", "n_width"),
                       ("m", "m"), ("e", "e"), ("mu1", "mu1"), ("G", "G"), ("C1", "C1"), ("C2", "C2")):
        v = getattr(args, dest)
        if v is not None:
            kw[name] = v
    for dest in ("dE", "dB"):
        v = getattr(args, dest)
        if v is not None:
            kw[dest] = tuple(tuple(v[3 * i:3 * i + 3]) for i in range(3))
    cfg = FieldConfig(**kw)
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(f"invalid field configuration: {exc}") from None
    return cfg


def cmd_simulate(args) -> int:
    from .dynamics.fields import SimState
    from .dynamics.integrate import integrate, summary, trajectory_csv
    from .dynamics.fields import Trajectory
    cfg = _field_config(args)
    s0 = SimState(r=args.r0 or (0.0, 0.0, 0.0), pi=args.pi0 or (0.0, 0.0, 0.0), xi=args.xi0 or (0.0, 0.0, 1.0))
    traj = integrate(cfg, s0, args.t_end if args.t_end is not None else 10.0, args.dt or 0.01,
                     kernel=args.kernel, tol=args.tol or 1e-6)
    summ = summary(traj, cfg)
    summ.pop("kernel", None)  # both kernels give the same numbers; keep outputs kernel-independent
    if (args.format or "csv") == "json":
        _emit(args, _dumps(summ))
        return EXIT_OK
    k = args.every or 1
    thin = Trajectory(t=traj.t[::k], y=traj.y[::k], energy=traj.energy[::k], kernel=traj.kernel)
    _emit(args, trajectory_csv(thin))
    text = _dumps(summ) + "\n"
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stderr.write(text)
    return EXIT_OK


def cmd_render(args) -> int:
    from . import goldens as gd
    from .dsl import latex_document, print_expr
    from .expr import truncate
    from .policy import TruncationPolicy, policy_scope
    if args.golden:
        if args.case or args.input:
            raise UsageError("--golden excludes --case/--input")
        # goldens are printed at the order the paper states them (as `transform` would)
        try:
            pol = TruncationPolicy.parse(args.policy or GOLDEN_POLICY[args.golden])
        except ValueError as exc:
            raise UsageError(f"--policy: {exc}") from None
        with policy_scope(pol):
            x = truncate(getattr(gd, args.golden)(), pol)
    else:
        x, _, _ = load_hamiltonian(args)
    fmt = args.format or "text"
    if fmt == "latex":
        _emit(args, latex_document(x, args.lhs or "H"))
    elif fmt == "json":
        _emit(args, _dumps({"text": print_expr(x), "latex": print_expr(x, "latex"), "terms": len(x)}))
    else:
        _emit(args, print_expr(x), colorable=True)
    return EXIT_OK


COMMANDS = {"transform": cmd_transform, "verify": cmd_verify, "simulate": cmd_simulate, "render": cmd_render}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    sub = ap._subparsers._group_actions[0].choices[args.command]
    try:
        if args.config:
            apply_config(args, sub, args.config)
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"fw: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SeriesDivergence, SeriesNotRequested, NoConvergence) as exc:
        print(f"fw: series divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except StepRejected as exc:
        print(f"fw: step rejected: {exc}", file=sys.stderr)
        return EXIT_STEP
    except (UsageError, OSError) as exc:
        print(f"fw: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FWError as exc:
        print(f"fw: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
