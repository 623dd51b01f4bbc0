"""Command-line entry point: ``mrdlab {bounds,enumerate,simulate,verify,tables}``.

Exit codes: 0 all checks pass, 1 a bound or property failed (the
counterexample is printed), 2 usage or configuration error, 3 an
enumeration cap was exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Callable, Sequence

from . import __version__
from .checks import full_suite
from .dep import DEFAULT_VECTOR_CAP, dep_exact, dep_monte_carlo
from .errors import EnumerationTooLarge, RankLabError
from .gf import FieldContext
from .mrd import MrdCode, gabidulin
from .report import bounds_csv, bounds_dict, dep_csv, report_dict, to_json

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _format(s: str) -> str:
    if s not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {s!r}")
    return s


# Option name -> (type, default).  Defaults are applied after the config
# file, so "unset on the command line" can be told apart from a default.
OPTIONS: dict[str, tuple[Callable, object]] = {
    "q": (int, None),
    "m": (int, None),
    "n": (int, None),
    "k": (int, None),
    "t": (int, None),
    "u_min": (int, None),
    "u_max": (int, None),
    "trials": (int, 100_000),
    "seed": (int, 0),
    "cap": (int, None),
    "format": (_format, "csv"),
    "out": (str, None),
    "workers": (int, 1),
}


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes equal underscores."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e}") from e
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in OPTIONS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = OPTIONS[key][0](value)
        except ValueError as e:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {e}") from e
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("parameters")
    g.add_argument("--q", type=int, help="base field size (prime)")
    g.add_argument("--m", type=int, help="extension degree")
    g.add_argument("--n", type=int, help="code length (n <= m)")
    g.add_argument("--k", type=int, help="code dimension")
    g.add_argument("--t", type=int, help="decoding radius (default: (d_R - 1) // 2)")
    g.add_argument("--u-min", type=int, help="smallest error rank (default: d_R - t)")
    g.add_argument("--u-max", type=int, help="largest error rank (default: min(m, n))")
    g.add_argument("--trials", type=int, help="Monte Carlo trials per error rank (default 100000)")
    g.add_argument("--seed", type=int, help="master seed (default 0)")
    g.add_argument("--cap", type=int, help="enumeration cap on codewords and vectors")
    g.add_argument("--format", type=_format, help="csv or json (default csv)")
    g.add_argument("--out", help="output file (tables: output directory); default stdout")
    g.add_argument("--workers", type=int, help="worker processes for simulate (default 1)")
    g.add_argument("--config", help="flat key = value file; command-line flags override it")

    p = argparse.ArgumentParser(prog="mrdlab", description="Rank-metric MRD code decoder-error laboratory.")
    p.add_argument("--version", action="version", version=f"mrdlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("bounds", parents=[common], help="combinatorial quantities and bound values")
    sub.add_parser("enumerate", parents=[common], help="exact D_u and P_E by full census")
    sub.add_parser("simulate", parents=[common], help="Monte Carlo P_E with confidence intervals")
    sub.add_parser("verify", parents=[common], help="run the exhaustive invariant suite")
    sub.add_parser("tables", parents=[common], help="write bound and DEP tables to --out")
    return p


def resolve(ns: argparse.Namespace) -> dict:
    cfg = read_config(ns.config) if ns.config else {}
    opts = {}
    for key, (_, default) in OPTIONS.items():
        val = getattr(ns, key)
        if val is None:
            val = cfg.get(key, default)
        opts[key] = val
    for key in ("q", "m", "n", "k"):
        if opts[key] is None:
            raise UsageError(f"--{key} is required (on the command line or in --config)")
    if opts["trials"] < 1:
        raise UsageError("--trials must be >= 1")
    if opts["workers"] < 1:
        raise UsageError("--workers must be >= 1")
    return opts


def _code(o: dict) -> MrdCode:
    ctx = FieldContext(o["q"], o["m"])
    if o["cap"] is None:
        return gabidulin(ctx, o["n"], o["k"])
    return gabidulin(ctx, o["n"], o["k"], cap=o["cap"])


def _radius_and_range(o: dict, C: MrdCode) -> tuple[int, int, int]:
    t = C.t_max if o["t"] is None else o["t"]
    u_min = max(0, C.d_R - t) if o["u_min"] is None else o["u_min"]
    u_max = min(C.ctx.m, C.n) if o["u_max"] is None else o["u_max"]
    if not 0 <= u_min <= u_max <= min(C.ctx.m, C.n):
        raise UsageError(f"need 0 <= u-min <= u-max <= {min(C.ctx.m, C.n)}")
    return t, u_min, u_max


def _params(C: MrdCode, t: int) -> dict:
    return {"q": C.ctx.q, "m": C.ctx.m, "n": C.n, "k": C.k, "t": t, "d_R": C.d_R}


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _render(reports, C, t, mode, seed, fmt) -> str:
    if fmt == "json":
        return to_json(report_dict(reports, _params(C, t), mode, seed))
    return dep_csv(reports)


def _report_failures(reports) -> int:
    bad = [(r, b) for r in reports for b in r.bounds if not b.satisfied]
    for r, b in bad:
        print(
            f"counterexample: q={r.q} m={r.m} n={r.n} k={r.k} t={r.t} u={r.u}: "
            f"{b.formula_id} bound {b.bound.value} violated (D_u={r.D_u}, P_E={r.P_E}, ci={r.ci})",
            file=sys.stderr,
        )
    return EXIT_CHECK_FAILED if bad else EXIT_OK


def _exact_reports(o: dict):
    C = _code(o)
    t, u_min, u_max = _radius_and_range(o, C)
    cap = DEFAULT_VECTOR_CAP if o["cap"] is None else o["cap"]
    return C, t, [dep_exact(C, t, u, cap=cap) for u in range(u_min, u_max + 1)]


def _mc_reports(o: dict):
    C = _code(o)
    t, u_min, u_max = _radius_and_range(o, C)
    reps = [dep_monte_carlo(C, t, u, o["trials"], o["seed"], o["workers"]) for u in range(u_min, u_max + 1)]
    return C, t, reps


def cmd_bounds(o: dict) -> int:
    C = _code(o)
    t, u_min, u_max = _radius_and_range(o, C)
    data = bounds_dict(C.ctx.q, C.ctx.m, C.n, C.k, t, u_min, u_max)
    _emit(to_json(data) if o["format"] == "json" else bounds_csv(data), o["out"])
    return EXIT_OK


def cmd_enumerate(o: dict) -> int:
    C, t, reps = _exact_reports(o)
    _emit(_render(reps, C, t, "exact", None, o["format"]), o["out"])
    return _report_failures(reps)


def cmd_simulate(o: dict) -> int:
    C, t, reps = _mc_reports(o)
    _emit(_render(reps, C, t, "monte_carlo", o["seed"], o["format"]), o["out"])
    return _report_failures(reps)


def cmd_verify(o: dict) -> int:
    results = full_suite(o["q"], o["m"], o["n"], o["k"], o["t"])
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_tables(o: dict) -> int:
    """Bounds, exact DEP and Monte Carlo DEP tables into one directory.

    The exact table is skipped (with a note) when the census exceeds the cap.
    """
    out = o["out"] or "."
    os.makedirs(out, exist_ok=True)
    fmt = o["format"]
    C = _code(o)
    t, u_min, u_max = _radius_and_range(o, C)
    data = bounds_dict(C.ctx.q, C.ctx.m, C.n, C.k, t, u_min, u_max)
    _emit(to_json(data) if fmt == "json" else bounds_csv(data), os.path.join(out, f"bounds.{fmt}"))
    status = EXIT_OK
    try:
        _, _, exact = _exact_reports(o)
    except EnumerationTooLarge as e:
        print(f"exact table skipped: {e}", file=sys.stderr)
    else:
        _emit(_render(exact, C, t, "exact", None, fmt), os.path.join(out, f"dep_exact.{fmt}"))
        status = max(status, _report_failures(exact))
    _, _, mc = _mc_reports(o)
    _emit(_render(mc, C, t, "monte_carlo", o["seed"], fmt), os.path.join(out, f"dep_monte_carlo.{fmt}"))
    status = max(status, _report_failures(mc))
    print(f"tables written to {out}", file=sys.stderr)
    return status


COMMANDS = {
    "bounds": cmd_bounds,
    "enumerate": cmd_enumerate,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "tables": cmd_tables,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    try:
        opts = resolve(ns)
        return COMMANDS[ns.command](opts)
    except EnumerationTooLarge as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, RankLabError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
