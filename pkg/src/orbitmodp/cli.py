"""Command-line entry point.

Commands: census, table1, table2, calibrate, dm, density, ssum, baseline.
Every command that writes delimited output via --out also renders a PNG
figure alongside it (same stem; disable with --no-figures).

Exit codes: 0 success, 1 input error, 2 reproduction-check failure.

Map grammar accepted by --map:

  z^2+1  3z^3 - 2z + 5            polynomial in z, integer coefficients
  map P1 affine c0 c1 ... cd       the same, as an explicit coefficient list
  map PN <N> <d> ; <F_0 terms> ; ... ; <F_N terms>
                                   general homogeneous tuple on P^N, each
                                   F_i a flat list of "coeff e0 ... eN"
                                   terms; lines or ';'-separated
  @path                            read any of the above from a file

Start points: an integer, a rational a/b, or [a:b:...] homogeneous
coordinates.

A config file (--config) holds "key = value" lines ('#' comments); keys
match long flag names and flags given on the command line win. The
ORBITMODP_JOBS environment variable sets the default worker count.
"""

import argparse
import math
import os
import sys
from pathlib import Path

from .analytic import (
    abel_identity_check,
    density_eps,
    density_gamma,
    log_grid,
    scaled_spartial_profile,
)
from .baseline import compare_census, sample_rho
from .dynamics import (
    AffinePolyMap,
    MapParseError,
    exact_orbit,
    normalize,
    parse_map_block,
)
from .experiments import (
    CALIBRATED_CONVENTION,
    CALIBRATED_START,
    REPRODUCTION_TOL,
    TABLE1_CHECKPOINTS,
    TABLE1_COLUMNS,
    TABLE1_TARGETS,
    TABLE2_CHECKPOINTS,
    TABLE2_TARGETS,
    ExperimentConfig,
    FiniteOrbitStartError,
    calibrate,
    max_deviation,
    run_quadratic_column,
)
from .heights import D_m, dm_equivalence_check, dm_growth
from .orbits import census_csv_lines, orbit_census, read_census_csv
from .primes import EmptyTableError


def column_label(c: int) -> str:
    return "z^2" if c == 0 else f"z^2{c:+d}"


# ---------------------------------------------------------------------------
# Input parsing.
# ---------------------------------------------------------------------------


def parse_poly_z(text: str) -> AffinePolyMap:
    """Polynomial in z with integer coefficients, e.g. 'z^2+1' or '3z^3-2z+5'."""
    s = text
    n = len(s)
    i = 0
    coeffs = {}
    first = True

    def skip_ws():
        nonlocal i
        while i < n and s[i].isspace():
            i += 1

    while True:
        skip_ws()
        if i >= n:
            if first:
                raise MapParseError("empty polynomial", 1, 1)
            break
        sign = 1
        if s[i] in "+-":
            sign = -1 if s[i] == "-" else 1
            i += 1
            skip_ws()
        elif not first:
            raise MapParseError(f"expected '+' or '-' before {s[i:]!r}", 1, i + 1)
        j = i
        while i < n and s[i].isdigit():
            i += 1
        coeff = int(s[j:i]) if i > j else None
        skip_ws()
        if i < n and s[i] == "*":
            i += 1
            skip_ws()
        power = 0
        if i < n and s[i] == "z":
            i += 1
            power = 1
            skip_ws()
            if i < n and s[i] == "^":
                i += 1
                skip_ws()
                j = i
                while i < n and s[i].isdigit():
                    i += 1
                if i == j:
                    raise MapParseError("missing exponent after '^'", 1, i + 1)
                power = int(s[j:i])
        elif coeff is None:
            found = repr(s[i]) if i < n else "end of input"
            raise MapParseError(f"expected a term, found {found}", 1, i + 1)
        coeffs[power] = coeffs.get(power, 0) + sign * (1 if coeff is None else coeff)
        first = False
    degree = max((k for k, v in coeffs.items() if v), default=0)
    if degree < 1:
        raise MapParseError("polynomial map needs degree >= 1", 1, 1)
    return AffinePolyMap(tuple(coeffs.get(k, 0) for k in range(degree + 1)))


def parse_map_arg(text: str):
    text = text.strip()
    if text.startswith("@"):
        text = Path(text[1:]).read_text().strip()
    if text.startswith("map"):
        return parse_map_block(text)
    return parse_poly_z(text)


def parse_start_arg(text: str):
    text = text.strip()
    if text.startswith("["):
        body = text.strip("[]")
        return normalize([int(tok) for tok in body.split(":")])
    if "/" in text:
        a, b = text.split("/", 1)
        return normalize([int(a), int(b)])
    return normalize([int(text), 1])


def load_config(path) -> dict:
    opts = {}
    with open(path) as fh:
        for line_no, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_no}: expected 'key = value'")
            key, value = line.split("=", 1)
            opts[key.strip()] = value.strip()
    return opts


def _resolve(args, cfg, key, conv=str, default=None, dest=None):
    """Flag value if given, else config value, else default."""
    value = getattr(args, dest or key)
    if value is not None:
        return value
    if key in cfg:
        return conv(cfg[key])
    return default


def _default_jobs() -> int:
    return int(os.environ.get("ORBITMODP_JOBS", "1"))


# ---------------------------------------------------------------------------
# Output rendering: CSV or markdown rows, plus the figure alongside --out.
# ---------------------------------------------------------------------------


def render_rows(header, rows, fmt: str) -> list:
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |"]
        lines.append("|" + "|".join("---" for _ in header) + "|")
        lines.extend("| " + " | ".join(str(c) for c in row) + " |" for row in rows)
        return lines
    lines = [",".join(header)]
    lines.extend(",".join(str(c) for c in row) for row in rows)
    return lines


def _figure_path(out: str) -> str:
    return str(Path(out).with_suffix(".png"))


def emit(args, lines, figure_fn=None) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        if figure_fn is not None and not args.no_figures:
            figure_fn(_figure_path(args.out))
    else:
        print("\n".join(lines))


# ---------------------------------------------------------------------------
# Commands.
# ---------------------------------------------------------------------------


def _load_or_compute_census(args, cfg, default_map="z^2+1", default_start="0"):
    if getattr(args, "census", None):
        limit = _resolve(args, cfg, "X", int, None)
        census = read_census_csv(args.census, limit=limit)
        return census
    map_text = _resolve(args, cfg, "map", str, default_map)
    start_text = _resolve(args, cfg, "start", str, default_start)
    X = _resolve(args, cfg, "X", int, None)
    if X is None:
        raise ValueError("--X is required (or provide --census)")
    phi = parse_map_arg(map_text)
    P = parse_start_arg(start_text)
    return orbit_census(phi, P, X, jobs=args.jobs, method=args.method)


def cmd_census(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    map_text = _resolve(args, cfg, "map", str, None)
    start_text = _resolve(args, cfg, "start", str, None)
    X = _resolve(args, cfg, "X", int, None)
    if map_text is None or start_text is None or X is None:
        raise ValueError("census needs --map, --start and --X")
    phi = parse_map_arg(map_text)
    P = parse_start_arg(start_text)
    census = orbit_census(phi, P, X, jobs=args.jobs, method=args.method)
    if census.exceptional:
        print(f"# exceptional primes: {list(census.exceptional)}", file=sys.stderr)

    def figure(path):
        from .plots import save_census_figure

        save_census_figure(census, path)

    emit(args, census_csv_lines(census), figure)
    return 0


def _run_table(args, checkpoints, columns, targets, title) -> int:
    cfg = load_config(args.config) if args.config else {}
    alpha_text = _resolve(args, cfg, "start", str, None)
    convention = _resolve(args, cfg, "convention", str, None)
    alpha = int(alpha_text) if alpha_text is not None else None
    calibrated = alpha_text is None and convention in (None, CALIBRATED_CONVENTION)
    check = args.check if args.check is not None else calibrated
    config = ExperimentConfig(
        map_desc=", ".join(column_label(c) for c in columns),
        start="calibrated" if alpha is None else str(alpha),
        checkpoints=checkpoints,
        convention=convention or CALIBRATED_CONVENTION,
        out_format=args.format,
    )

    values = {}
    for c in columns:
        a = CALIBRATED_START[c] if alpha is None else alpha
        values[c] = run_quadratic_column(
            c, a, config.checkpoints, convention=config.convention, jobs=args.jobs
        )

    header = ["X"] + [column_label(c) for c in columns]
    rows = []
    for i, X in enumerate(checkpoints):
        rows.append([X] + [f"{values[c][i]:.4f}" for c in columns])

    def figure(path):
        from .plots import save_table_figure

        save_table_figure(
            checkpoints, {column_label(c): values[c] for c in columns}, path, title=title
        )

    emit(args, render_rows(header, rows, args.format), figure)

    if check:
        worst = max(max_deviation(values[c], targets[c]) for c in columns)
        ok = worst <= REPRODUCTION_TOL
        status = "PASS" if ok else "FAIL"
        print(f"# reproduction check: max deviation {worst:.6f} "
              f"(tolerance {REPRODUCTION_TOL}) -> {status}", file=sys.stderr)
        if not ok:
            return 2
    return 0


def cmd_table1(args) -> int:
    return _run_table(args, TABLE1_CHECKPOINTS, TABLE1_COLUMNS, TABLE1_TARGETS,
                      "checkpoint statistic, five quadratic maps")


def cmd_table2(args) -> int:
    return _run_table(args, TABLE2_CHECKPOINTS, (1,), {1: TABLE2_TARGETS},
                      "checkpoint statistic, z^2+1 deep run")


def cmd_calibrate(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    columns = TABLE1_COLUMNS
    if args.columns:
        columns = tuple(int(tok) for tok in args.columns.split(","))
    lo = _resolve(args, cfg, "alpha-min", int, -10, dest="alpha_min")
    hi = _resolve(args, cfg, "alpha-max", int, 10, dest="alpha_max")
    results = calibrate(columns=columns, alpha_range=(lo, hi), jobs=args.jobs)

    header = ["column", "alpha", "convention", "max_dev", "reproduced"]
    rows = [
        [column_label(r.c), r.alpha, r.convention, f"{r.max_dev:.6f}",
         "REPRODUCED" if r.reproduced else "NOT-REPRODUCED"]
        for r in results
    ]

    def figure(path):
        from .plots import save_table_figure

        save_table_figure(
            TABLE1_CHECKPOINTS if len(results[0].values) == len(TABLE1_CHECKPOINTS)
            else TABLE2_CHECKPOINTS,
            {column_label(r.c): list(r.values) for r in results},
            path,
            title="best calibrated columns",
        )

    emit(args, render_rows(header, rows, args.format), figure)
    for r in results:
        print(f"# {column_label(r.c)}: best alpha={r.alpha} convention={r.convention} "
              f"max_dev={r.max_dev:.6f} over {r.candidates} candidates -> "
              f"{'REPRODUCED' if r.reproduced else 'NOT-REPRODUCED'}", file=sys.stderr)
    return 0


def cmd_dm(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    map_text = _resolve(args, cfg, "map", str, "z^2+1")
    start_text = _resolve(args, cfg, "start", str, "0")
    m_max = _resolve(args, cfg, "mmax", int, 10, dest="mmax")
    X = _resolve(args, cfg, "X", int, None)
    phi = parse_map_arg(map_text)
    P = parse_start_arg(start_text)
    orbit = exact_orbit(phi, P, m_max)

    records = [D_m(phi, P, m, orbit=orbit) for m in range(1, m_max + 1)]
    growth = dm_growth(phi, P, m_max, orbit=orbit)
    loglog = dict(growth.points)

    header = ["m", "num_factors", "bits_of_D", "loglogD"]
    rows = []
    for rec in records:
        ll = f"{loglog[rec.m]:.6f}" if rec.m in loglog else ""
        rows.append([rec.m, len(rec.factors), rec.D.bit_length(), ll])

    def figure(path):
        from .plots import save_dm_figure

        save_dm_figure(growth, path)

    emit(args, render_rows(header, rows, args.format), figure)

    if args.dump_d:
        with open(args.dump_d, "w") as fh:
            for rec in records:
                fh.write(f"{rec.m},{rec.D}\n")

    print(f"# log log D(m) least-squares slope: {growth.slope:.6f} "
          f"(skipped m: {list(growth.skipped)})", file=sys.stderr)

    if X is not None:
        census = orbit_census(phi, P, X, jobs=args.jobs, method=args.method)
        clean = True
        for rec in records:
            violations = dm_equivalence_check(census, rec)
            outside = [p for p in violations if p not in census.exceptional]
            if violations:
                clean = False
                print(f"# m={rec.m}: disagreements {violations} "
                      f"(outside exceptional set: {outside})", file=sys.stderr)
        if clean:
            print(f"# divisibility equivalence clean for m <= {m_max}, X = {X}",
                  file=sys.stderr)
    return 0


def cmd_density(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    census = _load_or_compute_census(args, cfg)
    gammas = [float(t) for t in args.gamma.split(",")] if args.gamma else []
    epss = [float(t) for t in args.eps.split(",")] if args.eps else []
    if not gammas and not epss:
        raise ValueError("density needs --gamma and/or --eps")
    rows = []
    for g in gammas:
        rows.append((f"gamma={g:g}", density_gamma(census, g).mass))
    for e in epss:
        rows.append((f"eps={e:g}", density_eps(census, e).mass))

    def figure(path):
        from .plots import save_density_figure

        save_density_figure(rows, path)

    emit(args, render_rows(["param", "mass"],
                           [(label, f"{mass:.6f}") for label, mass in rows],
                           args.format), figure)
    return 0


def cmd_ssum(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    census = _load_or_compute_census(args, cfg)
    lam = _resolve(args, cfg, "lambda", float, 1.0, dest="lam")
    if args.s:
        grid = [float(tok) for tok in args.s.split(",")]
    else:
        grid = log_grid(1e-3, 1.0, 20)
    profile = scaled_spartial_profile(census, lam, grid)
    rows = []
    for s, value, scaled in profile:
        residual = abel_identity_check(census, lam, s)
        rows.append([f"{s:.6g}", f"{value:.12g}", f"{scaled:.12g}", f"{residual:.3g}"])

    def figure(path):
        from .plots import save_ssum_figure

        save_ssum_figure(profile, lam, path)

    emit(args, render_rows(["s", "value", "scaled", "abel_residual"], rows, args.format),
         figure)
    scaled_vals = [r[2] for r in profile]
    print(f"# lambda={lam:g}: scaled sum ranges over "
          f"[{min(scaled_vals):.6f}, {max(scaled_vals):.6f}]", file=sys.stderr)
    return 0


def cmd_baseline(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    if args.compare:
        census = _load_or_compute_census(args, cfg)
        result = compare_census(census)
        rows = [
            [row.p, row.m, f"{row.sqrt_p:.6f}", f"{row.ratio:.6f}"] for row in result.rows
        ]

        def figure(path):
            from .plots import save_compare_figure

            save_compare_figure(result, path)

        emit(args, render_rows(["p", "m", "sqrt_p", "ratio"], rows, args.format), figure)
        qtext = ", ".join(f"q{int(q * 100)}={v:.4f}" for q, v in sorted(result.quantiles.items()))
        print(f"# weighted ratio quantiles: {qtext} (random-map constant "
              f"{result.reference:.4f})", file=sys.stderr)
        return 0

    n = _resolve(args, cfg, "n", int, None)
    trials = _resolve(args, cfg, "trials", int, None)
    seed = _resolve(args, cfg, "seed", int, 42)
    if n is None or trials is None:
        raise ValueError("baseline needs --n and --trials (or --compare)")
    keep = bool(args.out) and not args.no_figures
    sample = sample_rho(n, trials, seed, keep_trials=keep)
    rows = [[sample.n, sample.trials, sample.seed, f"{sample.mean_tail:.6f}",
             f"{sample.mean_cycle:.6f}", f"{sample.mean_rho:.6f}", sample.rng]]

    def figure(path):
        from .plots import save_baseline_figure

        save_baseline_figure(sample, path)

    emit(args, render_rows(["n", "trials", "seed", "mean_tail", "mean_cycle",
                            "mean_rho", "rng"], rows, args.format), figure)
    print(f"# mean_rho / sqrt(n) = {sample.mean_rho / math.sqrt(n):.4f} "
          f"(random-map constant {math.sqrt(math.pi / 2):.4f})", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# Parser assembly.
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(sub):
    sub.add_argument("--config", help="key = value defaults file")
    sub.add_argument("--out", help="write delimited output here (stdout otherwise)")
    sub.add_argument("--format", choices=("csv", "markdown"), default="csv")
    sub.add_argument("--jobs", type=int, default=_default_jobs(),
                     help="parallel workers (env ORBITMODP_JOBS)")
    sub.add_argument("--method", choices=("hash", "brent"), default="hash",
                     help="cycle detection strategy")
    sub.add_argument("--no-figures", action="store_true",
                     help="skip the PNG rendered alongside --out")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orbitmodp",
                     description="orbit statistics of integer self-maps mod p")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("census",
                        help="per-prime orbit records up to X")
    p.add_argument("--map")
    p.add_argument("--start")
    p.add_argument("--X", dest="X", type=int)
    _add_common(p)
    p.set_defaults(handler=cmd_census)

    for name, handler, hlp in (
        ("table1", cmd_table1, "five-map checkpoint statistic table"),
        ("table2", cmd_table2, "z^2+1 deep-run checkpoint statistic"),
    ):
        p = subs.add_parser(name, help=hlp)
        p.add_argument("--start", help="override the calibrated start")
        p.add_argument("--convention", choices=("orbit", "cycle"))
        check = p.add_mutually_exclusive_group()
        check.add_argument("--check", dest="check", action="store_true", default=None,
                           help="compare against the locked targets")
        check.add_argument("--no-check", dest="check", action="store_false")
        _add_common(p)
        p.set_defaults(handler=handler)

    p = subs.add_parser("calibrate",
                        help="search start/convention against the locked targets")
    p.add_argument("--alpha-min", type=int)
    p.add_argument("--alpha-max", type=int)
    p.add_argument("--columns", help="comma-separated c values (default all five)")
    _add_common(p)
    p.set_defaults(handler=cmd_calibrate)

    p = subs.add_parser("dm",
                        help="divisibility integers D(m) and the census equivalence")
    p.add_argument("--map")
    p.add_argument("--start")
    p.add_argument("--mmax", type=int)
    p.add_argument("--X", dest="X", type=int, help="census limit for the equivalence check")
    p.add_argument("--dump-d", help="write full decimal D(m) values to this file")
    _add_common(p)
    p.set_defaults(handler=cmd_dm)

    p = subs.add_parser("density",
                        help="weighted density of large-orbit primes")
    p.add_argument("--map")
    p.add_argument("--start")
    p.add_argument("--X", dest="X", type=int)
    p.add_argument("--census", help="load a census CSV instead of computing")
    p.add_argument("--gamma", help="comma-separated gamma thresholds")
    p.add_argument("--eps", help="comma-separated eps thresholds")
    _add_common(p)
    p.set_defaults(handler=cmd_density)

    p = subs.add_parser("ssum",
                        help="weighted exponential sums and the Abel residual")
    p.add_argument("--map")
    p.add_argument("--start")
    p.add_argument("--X", dest="X", type=int)
    p.add_argument("--census", help="load a census CSV instead of computing")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--s", help="comma-separated s values (default: log grid 1e-3..1)")
    _add_common(p)
    p.set_defaults(handler=cmd_ssum)

    p = subs.add_parser("baseline",
                        help="random-map rho statistics / census comparison")
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--compare", action="store_true",
                   help="emit the m_p vs sqrt(p) table for a census")
    p.add_argument("--map")
    p.add_argument("--start")
    p.add_argument("--X", dest="X", type=int)
    p.add_argument("--census", help="load a census CSV instead of computing")
    _add_common(p)
    p.set_defaults(handler=cmd_baseline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (MapParseError, FiniteOrbitStartError, EmptyTableError, ValueError,
            OSError) as exc:
        print(f"orbitmodp: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
