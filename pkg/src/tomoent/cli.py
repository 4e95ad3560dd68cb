"""Command-line front end: indicator sweeps and slice grids written as CSV.

Subcommands::

    tomoent talbot sweep     indicators vs D and R (four CSVs)
    tomoent talbot density   rho_A and the A1-B1 outcome table for one (D, R)
    tomoent biphoton slice   time-time slices, their difference, indicators
    tomoent selftest         invariant checks; exit 2 on any failure

Settings come from built-in defaults, then ``--config`` (flat
``key = value`` lines), then ``TOMO_THREADS`` for the thread count, then
command-line flags. Exit codes: 0 success, 1 usage error, 2 numerical
invariant failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import biphoton as bp
from . import talbot as tb
from .numerics import NumericalInvariantError

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

DEFAULT_FLOAT_FORMAT = "%.12e"


class UsageError(Exception):
    pass


@dataclass
class EntanglementReport:
    indicator: str
    value: float
    params: dict
    timing: float

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise NumericalInvariantError(f"{self.indicator} is not finite: {self.value}")


@dataclass
class RunConfig:
    D: list[int] = field(default_factory=lambda: list(range(2, 11)))
    R: list[float] = field(default_factory=lambda: list(tb.FIGURE_R_VALUES))
    out: Path = Path("tomoent-out")
    threads: int = 1
    float_format: str = DEFAULT_FLOAT_FORMAT
    window_T: float | None = None
    n_grid: int | None = None
    n_teeth: int | None = None
    grid_out_n: int = 512
    oracle: bool = False


# --- configuration ------------------------------------------------------------


def _parse_int_list(text: str) -> list[int]:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ":" in part:
            lo, hi = part.split(":")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _parse_float_list(text: str) -> list[float]:
    return [float(x) for x in str(text).split(",") if x.strip()]


_CONVERTERS = {
    "D": _parse_int_list,
    "R": _parse_float_list,
    "out": Path,
    "threads": int,
    "float_format": str,
    "window_T": float,
    "n_grid": int,
    "n_teeth": int,
    "grid_out_n": int,
    "oracle": lambda v: str(v).strip().lower() in ("1", "true", "yes", "on"),
}


def read_config_file(path: str | Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _CONVERTERS:
            raise UsageError(f"{path}:{lineno}: unrecognized line {raw!r}")
        values[key] = value.strip()
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    raw = {}
    if args.config:
        raw.update(read_config_file(args.config))
    if os.environ.get("TOMO_THREADS"):
        raw["threads"] = os.environ["TOMO_THREADS"]
    for key in _CONVERTERS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            raw[key] = value
    try:
        for key, value in raw.items():
            setattr(cfg, key, _CONVERTERS[key](value))
    except ValueError as exc:
        raise UsageError(f"bad configuration value: {exc}") from exc
    if cfg.threads < 1:
        raise UsageError("thread count must be >= 1")
    try:
        cfg.float_format % 1.0
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad float format {cfg.float_format!r}") from exc
    return cfg


# --- CSV output ---------------------------------------------------------------


def _header(title: str, params: dict, extra: dict | None = None) -> list[str]:
    lines = [f"# {title}", f"# tomoent {__version__}"]
    for key, value in params.items():
        lines.append(f"# {key} = {value!r}")
    for key, value in (extra or {}).items():
        lines.append(f"# {key} = {value}")
    return lines


def write_csv(path: Path, comments: list[str], columns: list[str], rows, float_format: str):
    """Write '#' comments, a header row, then rows (ints kept exact)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = list(comments)
    lines.append(",".join(columns))
    for row in rows:
        cells = [str(v) if isinstance(v, (int, np.integer)) else float_format % v for v in row]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def write_grid_csv(path: Path, comments: list[str], grid, float_format: str,
                   names=("t_S", "t_I")):
    a = grid.axis_a.points
    b = grid.axis_b.points
    aa, bb = np.meshgrid(a, b, indexing="ij")
    table = np.column_stack([aa.ravel(), bb.ravel(), grid.values.ravel()])
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = comments + [
        f"# axis {names[0]}: lo={grid.axis_a.lo!r} hi={grid.axis_a.hi!r} n={grid.axis_a.n}",
        f"# axis {names[1]}: lo={grid.axis_b.lo!r} hi={grid.axis_b.hi!r} n={grid.axis_b.n}",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(meta) + "\n")
        np.savetxt(fh, table, fmt=float_format, delimiter=",",
                   header=",".join([*names, "value"]), comments="")


def write_reports(path: Path, reports: list[EntanglementReport]):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps([asdict(r) for r in reports], indent=2) + "\n")


# --- talbot -------------------------------------------------------------------

TALBOT_INDICATORS = ("tei_position", "svne", "tei_discrete", "i_d")


def _talbot_point(D: int, R: float) -> list[EntanglementReport]:
    params = tb.TalbotParams(D, R)
    reports = []
    t0 = time.perf_counter()
    c = tb.coeff_matrix(params)
    for name, fn in (
        ("tei_position", lambda: tb.tei_position(params)),
        ("svne", lambda: tb.svne(c)),
        ("tei_discrete", lambda: tb.tei_discrete_basis(c)),
        ("i_d", lambda: tb.cglmp_id(c)),
    ):
        value = fn()
        t1 = time.perf_counter()
        reports.append(EntanglementReport(name, float(value), params.as_dict(), t1 - t0))
        t0 = t1
    return reports


def cmd_talbot_sweep(cfg: RunConfig) -> int:
    if not cfg.D or any(not 2 <= d <= 12 for d in cfg.D):
        raise UsageError("D values must lie in [2, 12]")
    if not cfg.R or any(not 0.0 <= r <= 1.0 for r in cfg.R):
        raise UsageError("R values must lie in [0, 1]")
    points = [(d, r) for r in cfg.R for d in cfg.D]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        results = list(pool.map(lambda p: _talbot_point(*p), points))

    sweep_meta = {"D": cfg.D, "R": cfg.R, "geometry": "defaults (s=1/D, delta=0.025 s, "
                  "sigma=0.05 ell, ell=1, kappa_plus=9 ell)"}
    for i, name in enumerate(TALBOT_INDICATORS):
        rows = [(d, r, reps[i].value) for (d, r), reps in zip(points, results)]
        write_csv(cfg.out / f"{name}.csv", _header(f"talbot sweep: {name}", sweep_meta),
                  ["D", "R", "value"], rows, cfg.float_format)
    write_reports(cfg.out / "talbot_reports.json", [r for reps in results for r in reps])
    print(f"wrote {len(TALBOT_INDICATORS)} CSVs with {len(points)} rows to {cfg.out}")
    return EXIT_OK


def cmd_talbot_density(cfg: RunConfig) -> int:
    if len(cfg.D) != 1 or len(cfg.R) != 1:
        raise UsageError("talbot density needs a single --D and a single --R")
    params = tb.TalbotParams(cfg.D[0], cfg.R[0])
    c = tb.coeff_matrix(params)
    rho = tb.subsystem_density(c)
    p11 = tb.joint_outcome_distribution(c, tb.A1, tb.B1).p
    D = params.D
    meta = params.as_dict()
    write_csv(cfg.out / "rho_A.csv", _header("subsystem A density matrix", meta),
              ["row", "col", "value"],
              [(i, j, rho[i, j]) for i in range(D) for j in range(D)], cfg.float_format)
    write_csv(cfg.out / "p_A1_B1.csv",
              _header("joint outcome probabilities P(A1=p, B1=q)", meta,
                      {"alpha_1": tb.A1.shift, "beta_1": tb.B1.shift}),
              ["p", "q", "probability"],
              [(i, j, p11[i, j]) for i in range(D) for j in range(D)], cfg.float_format)
    print(f"trace(rho_A) = {np.trace(rho):.15f}; wrote rho_A.csv, p_A1_B1.csv to {cfg.out}")
    return EXIT_OK


# --- biphoton -----------------------------------------------------------------


def biphoton_setup(cfg: RunConfig) -> tuple[bp.BiphotonParams, bp.TimeWindow]:
    params, window = bp.load_calibrated()
    if cfg.n_teeth is not None:
        params = bp.BiphotonParams(n_teeth=cfg.n_teeth)
    window = bp.TimeWindow(
        cfg.window_T if cfg.window_T is not None else window.half_width,
        cfg.n_grid if cfg.n_grid is not None else window.n_grid,
    )
    return params, window


def cmd_biphoton(cfg: RunConfig) -> int:
    params, window = biphoton_setup(cfg)
    try:
        bp.check_window(window, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    meta = {**params.as_dict(), "window_T": window.half_width, "n_grid": window.n_grid}

    reports = []
    for state in bp.STATES:
        t0 = time.perf_counter()
        value = bp.tei_time_slice(state, window, params)
        reports.append(EntanglementReport(f"tei_time_{state}", value, meta,
                                          time.perf_counter() - t0))

    out_window = bp.TimeWindow(window.half_width, min(cfg.grid_out_n, window.n_grid))
    grids = {s: bp.closed_form_slice(s, out_window, params) for s in bp.STATES}
    grids["diff"] = bp.slice_difference(out_window, params, grids[bp.ALPHA], grids[bp.BETA])
    for key, grid in grids.items():
        write_grid_csv(cfg.out / f"w_{key}.csv",
                       _header(f"time-time slice {key}", meta), grid, cfg.float_format)

    if cfg.oracle:
        for state in bp.STATES:
            t0 = time.perf_counter()
            err = bp.oracle_discrepancy(state, window, params)
            reports.append(EntanglementReport(f"oracle_linf_{state}", err, meta,
                                              time.perf_counter() - t0))
            grid = bp.fourier_oracle_slice(state, out_window, params)
            write_grid_csv(cfg.out / f"oracle_{state}.csv",
                           _header(f"Fourier-oracle slice {state}", meta), grid,
                           cfg.float_format)
    write_reports(cfg.out / "biphoton_report.json", reports)
    for r in reports:
        print(f"{r.indicator} = {r.value:.6g}")
    return EXIT_OK


# --- selftest -----------------------------------------------------------------


def cmd_selftest(cfg: RunConfig) -> int:
    from .selftest import run_checks

    params, window = biphoton_setup(cfg)
    results = run_checks(params, window)
    for res in results:
        print(json.dumps(res, sort_keys=True))
    failed = [r["check"] for r in results if not r["passed"]]
    print(json.dumps({"summary": {"total": len(results), "failed": failed}}))
    return EXIT_NUMERIC if failed else EXIT_OK


# --- argument parsing ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--threads", type=int, help="worker threads (env TOMO_THREADS)")
    p.add_argument("--float-format", dest="float_format", help="printf float format")


def _biphoton_flags(p: argparse.ArgumentParser):
    p.add_argument("--window-T", dest="window_T", type=float, help="half-width T in seconds")
    p.add_argument("--n-grid", dest="n_grid", type=int, help="grid points per axis")
    p.add_argument("--n-teeth", dest="n_teeth", type=int, help="tooth truncation |n| <= N")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tomoent", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"tomoent {__version__}")
    sub = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    talbot = sub.add_parser("talbot", help="entangled Talbot carpets")
    tsub = talbot.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sweep = tsub.add_parser("sweep", help="indicators vs D and R")
    density = tsub.add_parser("density", help="rho_A and P(A1, B1) for one (D, R)")
    for p in (sweep, density):
        _common(p)
        p.add_argument("--D", help="slit counts, e.g. 10 or 2:10 or 2,4,8")
        p.add_argument("--R", help="spatial correlations, comma separated")
    sweep.set_defaults(func=cmd_talbot_sweep)
    density.set_defaults(func=cmd_talbot_density)

    bip = sub.add_parser("biphoton", help="biphoton frequency combs")
    bsub = bip.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sl = bsub.add_parser("slice", help="time-time slices and indicators")
    _common(sl)
    _biphoton_flags(sl)
    sl.add_argument("--grid-out-n", dest="grid_out_n", type=int,
                    help="points per axis of the emitted grids (default 512)")
    sl.add_argument("--oracle", action="store_true", help="also run the Fourier oracle")
    sl.set_defaults(func=cmd_biphoton)

    st = sub.add_parser("selftest", help="run the invariant checks")
    _common(st)
    _biphoton_flags(st)
    st.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return args.func(cfg)
    except UsageError as exc:
        print(f"tomoent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalInvariantError as exc:
        print(f"tomoent: numerical invariant failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"tomoent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"tomoent: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
