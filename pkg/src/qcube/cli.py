"""Command line entry point: ``qcube verify | tabulate | demo | search``.

Exit status: 0 when everything passed, 1 when any law failed, 2 for
configuration or I/O errors. Output goes to ``--out``, else to
``$QCUBE_OUT_DIR``, else to ``./qcube-out``.
"""

from __future__ import annotations

import argparse
import itertools
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .constants import CONSTANT_NAMES, ConstantDomainError, constant_params, named_constant
from .demos import DEMOS, run_demo
from .laws import Grid
from .report import ReportIOError, atomic_write_text, dumps, load_json, write_report, write_rows
from .suite import PRESETS, ConfigError, SuiteConfig, run_suite, search_extremal

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
OUT_ENV = "QCUBE_OUT_DIR"
DEFAULT_OUT = "qcube-out"

# tabulation defaults for parameters outside the law grids
EXTRA_GRIDS = {"beta": (0.0, 0.25, 0.5, 1.0), "c": (1.0, 2.0, 5.0)}


def _floats(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> tuple:
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        try:
            if "-" in part[1:]:
                lo, hi = part.split("-", 1)
                out += range(int(lo), int(hi) + 1)
            else:
                out.append(int(part))
        except ValueError:
            raise ConfigError(f"expected integers or ranges like 1-4, got {part!r}") from None
    return tuple(out)


def _names(text: str) -> tuple:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def out_dir(args) -> Path:
    return Path(args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)


def _grid_flags(parser: argparse.ArgumentParser) -> None:
    for axis in ("p", "q", "alpha", "t", "k"):
        parser.add_argument(f"--grid-{axis}", metavar="LIST", help=f"comma-separated {axis} grid")


def _out_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcube", description="Verify functional inequalities on the quantum Boolean cube.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the law suite and write a report")
    v.add_argument("--suite", choices=sorted(PRESETS), help="named preset (default: default)")
    v.add_argument("--config", help="JSON config file; flags override its fields")
    v.add_argument("--laws", help="comma-separated law ids; empty string selects none")
    v.add_argument("--n", help="qubit counts, e.g. 1-4 or 2,3")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--gen", help="comma-separated generator kinds to rotate through")
    _grid_flags(v)
    v.add_argument("--tol-scalar", type=float)
    v.add_argument("--tol-psd", type=float)
    v.add_argument("--workers", type=int)
    v.add_argument("--quiet", action="store_true")
    _out_flag(v)

    t = sub.add_parser("tabulate", help="tabulate named constants over parameter grids")
    t.add_argument("--names", default=",".join(CONSTANT_NAMES), help="comma-separated constant names")
    for axis in ("p", "q", "alpha", "t", "k", "beta", "c"):
        t.add_argument(f"--grid-{axis}", metavar="LIST")
    _out_flag(t)

    d = sub.add_parser("demo", help="print a worked sharpness example")
    d.add_argument("name", help=f"one of: {', '.join(DEMOS)}")
    _out_flag(d)

    s = sub.add_parser("search", help="search for small margins of one law")
    s.add_argument("--law", required=True)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--restarts", type=int, default=3)
    s.add_argument("--iters", type=int, default=40)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--family", choices=("pauli", "constant"), default="pauli")
    s.add_argument("--top", type=int, default=5)
    _grid_flags(s)
    _out_flag(s)
    return parser


# -- verify --------------------------------------------------------------------


def config_from_args(args) -> SuiteConfig:
    if args.config:
        try:
            base = SuiteConfig.from_dict(load_json(args.config))
        except ValueError as exc:
            raise ConfigError(f"{args.config}: {exc}") from exc
        if args.suite:
            preset = SuiteConfig.preset(args.suite)
            base.laws, base.n_values, base.trials, base.suite = preset.laws, preset.n_values, preset.trials, preset.suite
    else:
        base = SuiteConfig.preset(args.suite or "default")

    if args.laws is not None:
        base.laws = _names(args.laws)
    if args.n is not None:
        base.n_values = _ints(args.n)
    if args.trials is not None:
        base.trials = args.trials
    if args.seed is not None:
        base.seed = args.seed
    if args.gen is not None:
        base.generators = _names(args.gen)
    if args.tol_scalar is not None:
        base.tol_scalar = args.tol_scalar
    if args.tol_psd is not None:
        base.tol_psd = args.tol_psd
    if args.workers is not None:
        base.workers = args.workers
    base.grid = _grid_override(base.grid, args)
    return base.validate()


def _grid_override(grid: Grid, args) -> Grid:
    axes = grid.to_dict()
    for axis in axes:
        raw = getattr(args, f"grid_{axis}", None)
        if raw is not None:
            axes[axis] = _ints(raw) if axis == "k" else _floats(raw)
    try:
        return Grid(**axes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_verify(args) -> int:
    config = config_from_args(args)
    start = time.perf_counter()
    report = run_suite(config)
    elapsed = time.perf_counter() - start
    path = write_report(report, out_dir(args), wall_time=elapsed)
    if not args.quiet:
        for law, s in report.laws.items():
            worst = "-" if s.worst is None else f"{s.worst.margin:+.3e}"
            flag = "FAIL" if s.failed else "ok"
            print(f"{law:5s} {flag:4s} trials={s.trials} records={s.records} failed={s.failed} "
                  f"skipped={s.skipped} worst_margin={worst}")
        print(f"{report.failures} failures in {elapsed:.1f}s; report at {path}")
    return EXIT_OK if report.all_passed else EXIT_FAIL


# -- tabulate ------------------------------------------------------------------


def tabulate(names, grids: dict) -> dict:
    """Evaluate each constant on the product of its parameter grids.

    Returns ``{name: (header, rows)}``; values are formatted to 12 significant
    digits, and points outside a constant's domain are left blank.
    """
    out = {}
    for name in names:
        params = constant_params(name)
        header = list(params) + ["value"]
        rows = []
        for combo in itertools.product(*(grids[p] for p in params)):
            kwargs = dict(zip(params, combo))
            if "k" in kwargs:
                kwargs["k"] = int(kwargs["k"])
            try:
                value = f"{named_constant(name, **kwargs):.12g}"
            except ConstantDomainError:
                value = ""
            rows.append([_num(v) for v in kwargs.values()] + [value])
        out[name] = (header, rows)
    return out


def _num(v) -> str:
    return str(v) if isinstance(v, int) else f"{v:.12g}"


def cmd_tabulate(args) -> int:
    names = _names(args.names)
    unknown = [n for n in names if n not in CONSTANT_NAMES]
    if unknown:
        raise ConfigError(f"unknown constants: {', '.join(unknown)}; known: {', '.join(CONSTANT_NAMES)}")
    default = Grid()
    grids = {axis: getattr(default, axis) for axis in ("p", "q", "alpha", "t", "k")}
    grids["t"] = (0.0,) + grids["t"]
    grids.update(EXTRA_GRIDS)
    for axis in grids:
        raw = getattr(args, f"grid_{axis}", None)
        if raw is not None:
            grids[axis] = _ints(raw) if axis == "k" else _floats(raw)
    root = out_dir(args) / "constants"
    for name, (header, rows) in tabulate(names, grids).items():
        write_rows(root / f"{name}.csv", header, rows)
        print(f"# {name}")
        print(",".join(header))
        for row in rows:
            print(",".join(row))
    return EXIT_OK


# -- demo / search -------------------------------------------------------------


def cmd_demo(args) -> int:
    if args.name not in DEMOS:
        raise ConfigError(f"unknown demo {args.name!r}; known: {', '.join(DEMOS)}")
    result = run_demo(args.name)
    sys.stdout.write(result.transcript())
    atomic_write_text(out_dir(args) / f"demo-{args.name}.json", dumps(result.to_dict()))
    return EXIT_OK if all(r.passed or r.skipped for r in result.records) else EXIT_FAIL


def cmd_search(args) -> int:
    grid = _grid_override(Grid(), args)
    try:
        found = search_extremal(args.law, n=args.n, params={"grid": grid}, restarts=args.restarts,
                                iters=args.iters, seed=args.seed, family=args.family, top=args.top)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from exc
    rows = []
    for rank, c in enumerate(found, 1):
        start = c.descriptor.get("start", c.descriptor.get("value"))
        margin = "degenerate" if math.isnan(c.margin) else f"{c.margin:+.3e}"
        print(f"{rank}. start={start} margin={margin} relative={c.relative_margin:+.3e} status={c.status}")
        rows.append({"rank": rank, "descriptor": c.descriptor, "margin": None if math.isnan(c.margin) else c.margin,
                     "relative_margin": None if math.isnan(c.relative_margin) else c.relative_margin,
                     "status": c.status, "record": c.record.to_dict() if c.record else None})
    atomic_write_text(out_dir(args) / f"search-{args.law}-n{args.n}.json",
                      dumps({"law_id": args.law, "n": args.n, "seed": args.seed, "family": args.family, "results": rows}))
    return EXIT_FAIL if any(c.status == "violation" for c in found) else EXIT_OK


COMMANDS = {"verify": cmd_verify, "tabulate": cmd_tabulate, "demo": cmd_demo, "search": cmd_search}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"qcube: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ReportIOError as exc:
        print(f"qcube: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
