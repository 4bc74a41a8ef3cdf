"""Command-line front end: character tables, Gauss data, point evaluation,
zero scans, dual sums, and the verify experiments, with reproducible CSV
and JSON emission.

Exit codes: 0 all checks passed, 2 ran but a mathematical check failed,
1 usage or computation error.  Floats are printed with 17 significant
digits so emitted files round-trip exactly; every output embeds the
canonical config and the tool version.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .characters import RationalXi, character, enumerate_characters, euler_phi
from .errors import LchiError
from .gauss import gauss_data
from .lfunc import T_CAP, l_value, log_derivative, x_factor_asymptotic, x_factor_exact
from .sums import DualSumPoint, default_bump, log_plus, sigma1_sharp, sigma2_sharp
from .sums import smooth_prime_sum, smooth_zero_sum
from .verify import DEFAULT_K, run_experiment
from .zeros import scan_zeros

USER_T_CAP = 500.0

VERIFY_EXPERIMENTS = ("thm31", "corB", "superbound", "lemma23", "lemma22", "cross", "chebyshev")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems must exit 1, not argparse's 2
        raise UsageError(message)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def parse_xi(text: str) -> RationalXi:
    try:
        if "/" in text:
            h, k = text.split("/", 1)
            return RationalXi(int(h), int(k))
        return RationalXi(int(text), 1)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed xi {text!r}: expected h/k with h, k > 0") from exc


def parse_bump(text: str) -> tuple[float, float]:
    try:
        a, b = (float(p) for p in text.split(","))
    except ValueError as exc:
        raise UsageError(f"malformed bump {text!r}: expected a,b") from exc
    if not 0 < a < b:
        raise UsageError(f"bump support needs 0 < a < b, got {text!r}")
    return a, b


def parse_grid(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise UsageError(f"malformed grid {text!r}: expected comma-separated numbers") from exc


@dataclass
class RunConfig:
    subcommand: str
    values: dict

    def canonical(self) -> str:
        parts = [f"subcommand={self.subcommand}"]
        for key in sorted(self.values):
            v = self.values[key]
            if v is None:
                continue
            if isinstance(v, float):
                parts.append(f"{key}={fmt(v)}")
            elif isinstance(v, (list, tuple)):
                parts.append(f"{key}={','.join(fmt(x) if isinstance(x, float) else str(x) for x in v)}")
            else:
                parts.append(f"{key}={v}")
        return "\n".join(parts)


def read_config_file(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"bad config line {line!r}: expected key=value")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def _build_parser() -> tuple[_Parser, dict]:
    parser = _Parser(prog="lchi", description=__doc__)
    parser.add_argument("--version", action="version", version=f"lchi {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file; CLI flags override it")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--k", type=float, default=None, help="tolerance multiplier for checks")

    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("chars", parents=[common], help="character value table as CSV")
    p.add_argument("--q", type=int)
    p.add_argument("--chi", type=int, default=None, help="label; omit for all characters")

    p = sub.add_parser("gauss", parents=[common], help="tau, epsilon, identity residuals as JSON")
    p.add_argument("--q", type=int)
    p.add_argument("--chi", type=int)

    p = sub.add_parser("eval", parents=[common], help="L, L'/L and both factor forms at one point")
    p.add_argument("--q", type=int)
    p.add_argument("--chi", type=int)
    p.add_argument("--sigma", type=float)
    p.add_argument("--t", type=float)

    p = sub.add_parser("zeros", parents=[common], help="critical-line zero scan as CSV")
    p.add_argument("--q", type=int)
    p.add_argument("--chi", type=int)
    p.add_argument("--T", type=float)
    p.add_argument("--step", type=float, default=None)

    p = sub.add_parser("sums", parents=[common], help="dual sums at one abscissa as CSV")
    p.add_argument("--q", type=int)
    p.add_argument("--chi", type=int)
    p.add_argument("--xi", help="rational cutoff h/k")
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--smooth", action="store_true")
    p.add_argument("--X", type=float, default=None)
    p.add_argument("--bump", default="1,2", help="smooth support a,b")

    p = sub.add_parser("verify", parents=[common], help="run a verification experiment")
    p.add_argument("experiment", choices=VERIFY_EXPERIMENTS)
    p.add_argument("--q", type=int, default=4)
    p.add_argument("--chi", type=int, default=1)
    p.add_argument("--xi", default="1/1")
    p.add_argument("--Tmin", type=float, default=32.0)
    p.add_argument("--Tmax", type=float, default=300.0)
    p.add_argument("--points", type=int, default=12)
    p.add_argument("--X-grid", dest="x_grid", default=None, help="comma-separated X values")
    p.add_argument("--bump", default="1,2")
    p.add_argument("--v", type=float, default=3.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--T", type=float, default=100.0)
    p.add_argument("--a", type=float, default=50.0)
    p.add_argument("--b", type=float, default=90.0)
    p.add_argument("--u", type=float, default=70.0)
    p.add_argument("--q2", type=int, default=3)
    p.add_argument("--psi", type=int, default=1)
    p.add_argument("--X", type=float, default=1000.0)
    p.add_argument("--samples", type=int, default=200)
    subparsers = {name: sp for name, sp in sub.choices.items()}
    return parser, subparsers


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    except OSError as exc:
        raise LchiError(f"cannot write {out!r}: {exc}") from exc


def emit_csv(header: list[str], rows: list[list], config: RunConfig, out: str | None) -> None:
    lines = [f"# lchi {__version__}"]
    lines += [f"# {line}" for line in config.canonical().splitlines()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row))
    _emit("\n".join(lines), out)


def emit_json(payload: dict, config: RunConfig, out: str | None) -> None:
    payload = dict(payload)
    payload.setdefault("version", __version__)
    payload["config"] = config.canonical()
    _emit(json.dumps(payload, indent=2, sort_keys=True), out)


def read_csv(path: str) -> tuple[list[str], list[list[str]]]:
    """Read back an emitted CSV, skipping the embedded comment lines."""
    header: list[str] | None = None
    rows: list[list[str]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    if header is None:
        raise LchiError(f"{path!r} contains no CSV header")
    return header, rows


def _check_user_T(T: float) -> None:
    if T > USER_T_CAP:
        raise UsageError(f"T = {T} exceeds the binary64 safety cap ({USER_T_CAP:g})")


def _cx(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _cmd_chars(args) -> int:
    _require(args, "q")
    q = args.q
    labels = [args.chi] if args.chi is not None else list(range(euler_phi(q)))
    config = RunConfig("chars", {"q": q, "chi": args.chi})
    lines = [f"# lchi {__version__}"]
    lines += [f"# {line}" for line in config.canonical().splitlines()]
    lines.append("a,re,im,exponent_num,exponent_den")
    for label in labels:
        chi = character(q, label)
        if len(labels) > 1:
            lines.append(f"# chi={label}")
        for a in range(q):
            r = chi.value_exponents[a]
            v = chi.value(a)
            if r is None:
                lines.append(f"{a},{fmt(0.0)},{fmt(0.0)},,")
            else:
                lines.append(f"{a},{fmt(v.real)},{fmt(v.imag)},{r.numerator},{r.denominator}")
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_gauss(args) -> int:
    _require(args, "q", "chi")
    chi = character(args.q, args.chi)
    data = gauss_data(chi)
    config = RunConfig("gauss", {"q": args.q, "chi": args.chi})
    payload = {
        "q": data.modulus,
        "chi": chi.label,
        "kappa": data.kappa,
        "primitive": chi.primitive,
        "conductor": chi.conductor,
        "tau": _cx(data.tau),
        "epsilon": _cx(data.epsilon) if data.epsilon is not None else None,
        "residuals": {
            "abs_tau_minus_sqrt_q": data.abs_tau_residual,
            "tau_pair_identity": data.pair_residual,
            "epsilon_modulus": data.epsilon_modulus_residual,
        },
    }
    emit_json(payload, config, args.out)
    return 0


def _cmd_eval(args) -> int:
    _require(args, "q", "chi", "sigma", "t")
    chi = character(args.q, args.chi)
    _check_user_T(abs(args.t))
    s = complex(args.sigma, args.t)
    config = RunConfig("eval", {"q": args.q, "chi": args.chi, "sigma": args.sigma, "t": args.t})
    lv = l_value(s, chi)
    payload: dict = {"s": {"sigma": args.sigma, "t": args.t}, "L": _cx(lv)}
    try:
        payload["log_derivative"] = _cx(log_derivative(s, chi))
    except LchiError as exc:
        payload["log_derivative"] = None
        payload["log_derivative_error"] = str(exc)
    if chi.primitive:
        xe = x_factor_exact(s, chi)
        payload["x_exact"] = _cx(xe.value)
        from .characters import conjugate_character

        fe = abs(lv - xe.value * l_value(1 - s, conjugate_character(chi)))
        payload["fe_residual"] = fe
        c = 1.0 - args.sigma
        if args.t >= 1.0:
            xa = x_factor_asymptotic(c, args.t, chi)
            payload["x_asymptotic"] = {
                **_cx(xa.value),
                "relative_error_estimate": xa.relative_error_estimate,
            }
        else:
            payload["x_asymptotic"] = None
    else:
        payload["x_exact"] = None
        payload["x_asymptotic"] = None
        payload["fe_residual"] = None
    emit_json(payload, config, args.out)
    return 0


def _cmd_zeros(args) -> int:
    _require(args, "q", "chi", "T")
    chi = character(args.q, args.chi)
    _check_user_T(args.T)
    threads = args.threads or 1
    zl = scan_zeros(chi, args.T, step=args.step, threads=threads)
    config = RunConfig(
        "zeros", {"q": args.q, "chi": args.chi, "T": args.T, "step": zl.step, "threads": threads}
    )
    rows: list[list] = [
        [g, h, zl_, zr, "ok"]
        for g, h, zl_, zr in zip(zl.ordinates, zl.halfwidths, zl.z_left, zl.z_right)
    ]
    for t, z in zl.flagged:
        rows.append([t, zl.step / 2.0, z, z, "tangential"])
    emit_csv(["gamma", "halfwidth", "z_left", "z_right", "flag"], rows, config, args.out)
    for w in zl.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def _cmd_sums(args) -> int:
    _require(args, "q", "chi", "xi")
    chi = character(args.q, args.chi)
    xi = parse_xi(args.xi)
    a, b = parse_bump(args.bump)
    threads = args.threads or 1
    if args.smooth:
        if args.X is None:
            raise UsageError("--smooth requires --X")
        bump = default_bump(a, b)
        need = 2.0 * math.pi * float(xi) * args.X * b
        zl = scan_zeros(chi, need + 1.0, threads=threads)
        zs = smooth_zero_sum(chi, xi, args.X, bump, zl)
        ps = smooth_prime_sum(chi, xi, args.X, bump)
        norm = math.sqrt(args.X) * log_plus(args.X) ** 2
        point = DualSumPoint.make(args.X, zs, ps, norm)
    else:
        if args.T is None:
            raise UsageError("sharp sums require --T (or pass --smooth with --X)")
        _check_user_T(args.T)
        zl = scan_zeros(chi, args.T, threads=threads)
        s1 = sigma1_sharp(chi, xi, args.T, zl)
        s2 = sigma2_sharp(chi, xi, args.T)
        norm = math.sqrt(args.q * args.T) * math.log(args.T) ** 2
        point = DualSumPoint.make(args.T, s1, s2, norm)
    config = RunConfig(
        "sums",
        {
            "q": args.q,
            "chi": args.chi,
            "xi": str(xi),
            "smooth": args.smooth,
            "T": args.T,
            "X": args.X,
            "bump": args.bump,
        },
    )
    rows = [
        [
            point.abscissa,
            point.sigma1.real,
            point.sigma1.imag,
            point.sigma2.real,
            point.sigma2.imag,
            point.combined.real,
            point.combined.imag,
            point.normalizer,
            point.ratio,
        ]
    ]
    emit_csv(
        ["abscissa", "re_s1", "im_s1", "re_s2", "im_s2", "re_comb", "im_comb", "normalizer", "ratio"],
        rows,
        config,
        args.out,
    )
    return 0


def _cmd_verify(args) -> int:
    name = args.experiment
    k = args.k if args.k is not None else DEFAULT_K
    params: dict = {"k": k}
    if name == "thm31":
        if args.points < 2:
            raise UsageError("--points must be >= 2")
        _check_user_T(args.Tmax)
        grid = list(np.exp(np.linspace(math.log(args.Tmin), math.log(args.Tmax), args.points)))
        params |= {"q": args.q, "chi": args.chi, "xi": args.xi, "t_grid": grid}
    elif name in ("corB", "superbound"):
        x_grid = parse_grid(args.x_grid) if args.x_grid else [10.0, 20.0, 40.0, 80.0, 160.0]
        params |= {
            "q": args.q,
            "chi": args.chi,
            "xi": args.xi,
            "x_grid": x_grid,
            "bump": list(parse_bump(args.bump)),
        }
    elif name == "lemma23":
        params |= {"q": args.q, "chi": args.chi, "v": args.v, "c": args.c, "T": args.T}
    elif name == "lemma22":
        params |= {"a": args.a, "b": args.b, "c": args.c, "u": args.u}
    elif name == "cross":
        params |= {
            "q": args.q,
            "chi": args.chi,
            "q2": args.q2,
            "psi": args.psi,
            "X": args.X,
            "bump": list(parse_bump(args.bump)),
            "samples": args.samples,
            "seed": args.seed if args.seed is not None else 20260809,
        }
    elif name == "chebyshev":
        x_grid = parse_grid(args.x_grid) if args.x_grid else [100.0, 1000.0, 10000.0, 100000.0]
        params |= {"x_grid": x_grid, "bump": list(parse_bump(args.bump))}
    if "xi" in params:
        parse_xi(str(params["xi"]))  # fail early with the usage message
    report = run_experiment(name, params, threads=args.threads or 1)
    config = RunConfig("verify", {"experiment": name, **params})
    emit_json(report.to_dict(), config, args.out)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(
            f"{status} {check.name}: value {fmt(check.value)} {check.op} {fmt(check.threshold)} "
            f"(k={fmt(report.k_multiplier)})",
            file=sys.stderr,
        )
    return 0 if report.passed else 2


def _scan_config_path(argv: list[str]) -> str | None:
    for i, token in enumerate(argv):
        if token == "--config":
            if i + 1 >= len(argv):
                raise UsageError("--config needs a path")
            return argv[i + 1]
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def _dest_types(parser: _Parser) -> dict:
    """dest -> type converter across the root parser and every subparser."""
    out: dict = {}

    def walk(p):
        for action in p._actions:
            if isinstance(action, argparse._SubParsersAction):
                for sp in action.choices.values():
                    walk(sp)
            elif action.dest != "help":
                out.setdefault(action.dest, (action.type, isinstance(action.const, bool)))
    walk(parser)
    return out


def _require(args, *names) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join(f"--{n}" for n in missing))


def parse_and_dispatch(argv: list[str]) -> int:
    parser, subparsers = _build_parser()
    try:
        config_path = _scan_config_path(argv)
        if config_path:
            overrides = read_config_file(config_path)
            types = _dest_types(parser)
            coerced = {}
            for key, raw in overrides.items():
                if key == "subcommand":
                    continue
                if key not in types:
                    raise UsageError(f"unknown config key {key!r}")
                conv, is_flag = types[key]
                if is_flag:
                    coerced[key] = raw.lower() in ("1", "true", "yes", "on")
                elif conv is not None:
                    coerced[key] = conv(raw)
                else:
                    coerced[key] = raw
            # subparsers parse into a fresh namespace, so defaults must be
            # pushed onto each of them, not just the root parser
            for sp in subparsers.values():
                known = {a.dest for a in sp._actions}
                sp.set_defaults(**{k: v for k, v in coerced.items() if k in known})
        args = parser.parse_args(argv)
        handler = {
            "chars": _cmd_chars,
            "gauss": _cmd_gauss,
            "eval": _cmd_eval,
            "zeros": _cmd_zeros,
            "sums": _cmd_sums,
            "verify": _cmd_verify,
        }[args.subcommand]
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (LchiError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
