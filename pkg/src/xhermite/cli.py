"""Command-line interface: ``xhermite <command> [options]``.

Exit codes: 0 success, 1 failed check or internal error, 2 bad input
(parse errors, non-Krein-Adler sequences, |lambda| too large), 3 singular time.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .connection import build_qtable
from .errors import InvalidSequence, LambdaTooLarge, NotKreinAdler, SingularTime, XHermiteError
from .exactalg import to_json_obj, to_text
from .propagator import PropagatorModel, green_function, green_function_exact, k_sigma, potential
from .report import reports_to_json
from .verify import LAMBDA_MAX, SUITES, VerifyConfig, all_passed, run_all, verify_xmehler
from .wronskian import LevelSequence

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_SINGULAR = 3

DEFAULT_VERIFY_SIGMAS = ("1,2", "2,3", "3,4", "1,2,3,4")


@dataclass
class CliConfig:
    sigma: list[LevelSequence]
    output: str | None = None
    format: str = "text"
    seed: int | None = None
    tolerances: dict = field(default_factory=dict)
    trunc: int | None = None
    grid: tuple[float, float, int] | None = None

    def verify_config(self) -> VerifyConfig:
        cfg = VerifyConfig()
        if self.seed is not None:
            cfg.seed = self.seed
        cfg.tolerances.update(self.tolerances)
        if self.trunc is not None:
            cfg.mehler_trunc = cfg.xmehler_trunc = cfg.spectral_trunc = cfg.green_trunc = self.trunc
        return cfg


# -- argument types ------------------------------------------------------------


def parse_sigma(text: str) -> LevelSequence:
    try:
        return LevelSequence.parse(text)
    except InvalidSequence as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_grid(text: str) -> tuple[float, float, int]:
    """"start:stop:count" with a dot decimal separator."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse grid {text!r}") from None
    if count < 1:
        raise argparse.ArgumentTypeError("grid count must be positive")
    return start, stop, count


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse number {text!r}") from None


def parse_tolerance(text: str) -> tuple[str | None, float]:
    """``name=value`` overrides one check; a bare value overrides every numeric check."""
    name, _, value = text.rpartition("=")
    try:
        return (name or None), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse tolerance {text!r}") from None


def _tolerances(items) -> dict:
    out = {}
    for name, value in items or ():
        if name is None:
            out.update({k: value for k in VerifyConfig().tolerances})
        else:
            if name not in VerifyConfig().tolerances:
                raise argparse.ArgumentTypeError(f"unknown check {name!r} in --tolerance")
            out[name] = value
    return out


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


# -- commands ------------------------------------------------------------------


def cmd_qpoly(cfg: CliConfig, args) -> tuple[int, str]:
    tables = [build_qtable(s) for s in cfg.sigma]
    if cfg.format == "json":
        objs = [t.to_json_obj() for t in tables]
        return EXIT_OK, json.dumps(objs[0] if len(objs) == 1 else objs, indent=2) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sigma", "k", "scale_exp", "dx", "dy", "num", "den"])
        for t in tables:
            for k, q in enumerate(t):
                for term in to_json_obj(q)["terms"]:
                    w.writerow([str(t.sigma), k, q.scale_exp, term["dx"], term["dy"],
                                term["num"], term["den"]])
        return EXIT_OK, buf.getvalue()
    lines = []
    for t in tables:
        lines.append(f"sigma = {t.sigma}")
        lines.extend("  " + s for s in t.render())
    return EXIT_OK, "\n".join(lines) + "\n"


def _grid_values(grid):
    start, stop, count = grid
    return np.linspace(start, stop, count)


def cmd_propagator(cfg: CliConfig, args) -> tuple[int, str]:
    sigma = cfg.sigma[0]
    model = PropagatorModel.from_sigma(sigma)
    t = args.t
    if cfg.grid is not None:
        g = _grid_values(cfg.grid)
        xs, ys = (a.ravel() for a in np.meshgrid(g, g, indexing="ij"))
    else:
        xs, ys = np.array([args.x]), np.array([args.y])
    k = np.atleast_1d(k_sigma(model, xs, ys, np.full(xs.shape, t)))
    if cfg.format == "json":
        rows = [{"x": float(a), "y": float(b), "t": [t.real, t.imag], "K": [v.real, v.imag]}
                for a, b, v in zip(xs, ys, k)]
        return EXIT_OK, json.dumps({"sigma": list(sigma.levels), "values": rows}, indent=2) + "\n"
    if cfg.format == "csv" or cfg.grid is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "t_re", "t_im", "K_re", "K_im"])
        for a, b, v in zip(xs, ys, k):
            w.writerow([_fmt(a), _fmt(b), _fmt(t.real), _fmt(t.imag), _fmt(v.real), _fmt(v.imag)])
        return EXIT_OK, buf.getvalue()
    v = complex(k[0])
    return EXIT_OK, f"{_fmt(v.real)} {_fmt(v.imag)}\n"


def cmd_potential(cfg: CliConfig, args) -> tuple[int, str]:
    sigma = cfg.sigma[0]
    model = potential(sigma)
    xs = _grid_values(cfg.grid) if cfg.grid is not None else None
    vs = model(xs) if xs is not None else None
    if cfg.format == "json":
        obj = {
            "sigma": list(sigma.levels),
            "text": model.text(),
            "numerator": to_json_obj(model.v_num),
            "denominator": to_json_obj(model.v_den),
        }
        if xs is not None:
            obj["table"] = [[float(a), float(b)] for a, b in zip(xs, vs)]
        return EXIT_OK, json.dumps(obj, indent=2) + "\n"
    if cfg.format == "csv":
        if xs is None:
            raise argparse.ArgumentTypeError("--format csv needs --grid")
        rows = ["x,V"] + [f"{_fmt(a)},{_fmt(b)}" for a, b in zip(xs, vs)]
        return EXIT_OK, "\n".join(rows) + "\n"
    lines = [f"# V{sigma}(x) = {model.text()}"]
    if xs is not None:
        # whitespace-separated table readable by gnuplot
        lines.append("# x V")
        lines.extend(f"{_fmt(a)} {_fmt(b)}" for a, b in zip(xs, vs))
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_green(cfg: CliConfig, args) -> tuple[int, str]:
    sigma = cfg.sigma[0]
    sigma.require_krein_adler()
    model = PropagatorModel.from_sigma(sigma)
    n_trunc = cfg.trunc if cfg.trunc is not None else 200
    res = green_function(model, args.x, args.y, args.E, n_trunc)
    out = {
        "sigma": list(sigma.levels),
        "x": args.x, "y": args.y, "E": [args.E.real, args.E.imag], "n_trunc": n_trunc,
        "relation": [res.relation.real, res.relation.imag],
        "direct": [res.direct.real, res.direct.imag],
        "difference": res.difference,
    }
    if args.exact:
        g = green_function_exact(model, args.x, args.y, args.E)
        out["exact"] = [g.real, g.imag]
    if cfg.format == "json":
        return EXIT_OK, json.dumps(out, indent=2) + "\n"
    keys = [k for k in ("relation", "direct", "exact") if k in out]
    if cfg.format == "csv":
        head = "E_re,E_im," + ",".join(f"{k}_re,{k}_im" for k in keys)
        vals = [_fmt(args.E.real), _fmt(args.E.imag)] + [_fmt(v) for k in keys for v in out[k]]
        return EXIT_OK, head + "\n" + ",".join(vals) + "\n"
    lines = [f"{k:9s} {_fmt(out[k][0])} {_fmt(out[k][1])}" for k in keys]
    lines.append(f"difference {res.difference:.3e}")
    return EXIT_OK, "\n".join(lines) + "\n"


def _check_lambdas(lams):
    for lam in lams:
        if abs(lam) > LAMBDA_MAX:
            raise LambdaTooLarge(f"|lambda| = {abs(lam)} exceeds {LAMBDA_MAX}")


def _render_reports(reports, fmt: str) -> str:
    if fmt == "json":
        return reports_to_json(reports) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "sigma", "status", "worst_residual", "tolerance"])
        for r in reports:
            w.writerow([r.check_name, ",".join(map(str, r.sigma)), r.status,
                        repr(r.worst_residual), repr(r.tolerance)])
        return buf.getvalue()
    lines = []
    for r in reports:
        line = r.summary()
        reason = next((d["reason"] for d in r.details if "reason" in d), None)
        if reason:
            line += f"  {reason}"
        lines.append(line)
    n_fail = sum(r.failed for r in reports)
    lines.append(f"{len(reports)} checks, {n_fail} failed")
    return "\n".join(lines) + "\n"


def cmd_verify(cfg: CliConfig, args) -> tuple[int, str]:
    vcfg = cfg.verify_config()
    if args.lam is not None:
        _check_lambdas([args.lam])
        vcfg.mehler_lambda = args.lam
        vcfg.xmehler_lambdas = (args.lam,)
    reports = run_all(cfg.sigma, vcfg, args.suite)
    code = EXIT_OK if all_passed(reports) else EXIT_FAIL
    return code, _render_reports(reports, cfg.format)


def cmd_xmehler(cfg: CliConfig, args) -> tuple[int, str]:
    vcfg = cfg.verify_config()
    lams = [args.lam] if args.lam is not None else list(vcfg.xmehler_lambdas)
    _check_lambdas(lams)
    grid = vcfg.grid()
    if cfg.grid is not None:
        g = _grid_values(cfg.grid)
        grid = [(float(a), float(b)) for a in g for b in g]
    reports = []
    for sigma in cfg.sigma:
        n_trunc = cfg.trunc if cfg.trunc is not None else max(vcfg.xmehler_trunc, sigma.last + 20)
        for lam in lams:
            reports.append(verify_xmehler(sigma, lam, grid, n_trunc, vcfg.tol("xmehler")))
    code = EXIT_OK if all_passed(reports) else EXIT_FAIL
    return code, _render_reports(reports, cfg.format)


COMMANDS = {
    "qpoly": cmd_qpoly,
    "propagator": cmd_propagator,
    "potential": cmd_potential,
    "green": cmd_green,
    "verify": cmd_verify,
    "xmehler": cmd_xmehler,
}


# -- parser --------------------------------------------------------------------


def _common(multi: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    if multi:
        p.add_argument("--sigma", type=parse_sigma, action="append",
                       help="comma-separated levels, e.g. 1,2 (repeatable)")
    else:
        p.add_argument("--sigma", type=parse_sigma, required=True,
                       help="comma-separated levels, e.g. 1,2")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--seed", type=int)
    p.add_argument("--tolerance", type=parse_tolerance, action="append",
                   help="NAME=VALUE for one check or VALUE for all")
    p.add_argument("--trunc", type=int, help="truncation order")
    p.add_argument("--grid", type=parse_grid, help="start:stop:count")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xhermite", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    single, multi = _common(False), _common(True)

    sub.add_parser("qpoly", parents=[multi], help="connection polynomials Q_k")

    p = sub.add_parser("propagator", parents=[single], help="K^sigma(x, y; t)")
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--y", type=float, default=0.0)
    p.add_argument("--t", type=parse_complex, required=True, help="time, may be complex (e.g. 1-0.5j)")

    sub.add_parser("potential", parents=[single], help="rational potential V^sigma")

    p = sub.add_parser("green", parents=[single], help="Green function at energy E")
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--y", type=float, default=0.0)
    p.add_argument("--E", type=parse_complex, required=True)
    p.add_argument("--exact", action="store_true", help="also evaluate the untruncated relation")

    p = sub.add_parser("verify", parents=[multi], help="run verification suites")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    p.add_argument("--lambda", dest="lam", type=parse_complex)

    p = sub.add_parser("xmehler", parents=[multi], help="x-Mehler residual")
    p.add_argument("--lambda", dest="lam", type=parse_complex)
    return parser


# flags whose values may start with "-" (negative numbers, grids like -2:2:41)
_VALUE_FLAGS = {"--grid", "--x", "--y", "--t", "--E", "--lambda"}


def _join_values(argv):
    out = []
    it = iter(argv)
    for a in it:
        if a in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_values(sys.argv[1:] if argv is None else list(argv)))
    sigma = args.sigma
    if isinstance(sigma, list) or sigma is None:
        if not sigma:
            if args.command == "qpoly":
                parser.error("qpoly: --sigma is required")
            sigma = [LevelSequence.parse(s) for s in DEFAULT_VERIFY_SIGMAS]
    else:
        sigma = [sigma]
    try:
        cfg = CliConfig(sigma, args.output, args.format, args.seed, _tolerances(args.tolerance),
                        args.trunc, args.grid)
        code, text = COMMANDS[args.command](cfg, args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except (NotKreinAdler, LambdaTooLarge, InvalidSequence) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SingularTime as exc:
        print(f"error: singular time: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (XHermiteError, ArithmeticError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
