"""Command-line front end: every experiment becomes deterministic CSV output.

Each run writes its artifacts plus a ``manifest.txt`` holding the fully
resolved flag set; replaying the manifest (``argv_from_manifest``)
reproduces every CSV byte for byte. Numbers are serialized with 10
significant digits, missing values as the literal token "NA", lines end
with LF.

Exit codes: 0 success, 1 usage error, 2 data/domain error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from .diagnostics import (
    acf,
    kde_1d,
    kde_2d,
    rb_marginal_mu,
    rb_second_moment,
    running_mcse,
    running_mean,
    running_quantile_se,
    running_quantiles,
)
from .distributions import t_quantile
from .mcse import MIN_SAMPLES, ci_mean, ci_quantiles, mcse_bm, mcse_obm, quantiles_type1, subsample_quantile_se
from .rng import Rng
from .samplers import Ar1Params, Ar1Source, NormalPosteriorParams, ar1_run, nv_gibbs_run, tda_run
from .stopping import StoppingConfig, fixed_width_mean, fixed_width_quantiles

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

# confidence machinery in the running/interval columns uses the one-sided
# t level 0.9, i.e. two-sided 80% intervals
_RUNNING_LEVEL = 0.9

_TRANSFORMS = {"id": None, "square": np.square}

_KDE2D_LIMS = (-1.5, 3.5, 1.0, 15.0)
_RB_GRID = (-3.0, 4.0, 701)

_POOL_MIN_REPLICATIONS = 16


# serialization helpers ------------------------------------------------------


def format_value(v) -> str:
    if v is None:
        return "NA"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    f = float(v)
    if math.isnan(f):
        return "NA"
    return f"{f:.10g}"


def write_csv(path: str, header: Sequence[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")


def _manifest_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (tuple, list)):
        return ",".join(repr(float(p)) for p in v)
    return str(v)


def write_manifest(out_dir: str, command: str, options: dict) -> str:
    path = os.path.join(out_dir, "manifest.txt")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"command={command}\n")
        for key, value in options.items():
            fh.write(f"{key}={_manifest_value(value)}\n")
    return path


def read_manifest(path: str) -> tuple[str, dict]:
    command = None
    options: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            if key == "command":
                command = value
            else:
                options[key] = value
    if command is None:
        raise ValueError(f"manifest {path} has no command line")
    return command, options


def argv_from_manifest(path: str, out: Optional[str] = None) -> list[str]:
    """Rebuild the argv of a recorded run, optionally redirecting --out."""
    command, options = read_manifest(path)
    argv = [command]
    for key, value in options.items():
        flag = "--" + key.replace("_", "-")
        if key == "out":
            argv += [flag, out if out is not None else value]
        elif value == "true":
            argv.append(flag)
        elif value == "false":
            continue
        else:
            argv += [flag, value]
    return argv


def _ensure_out(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


# subcommands ----------------------------------------------------------------


def run_ar1(args) -> int:
    params = Ar1Params(args.rho, args.tau)
    probs = args.probabilities
    out = _ensure_out(args.out)
    write_manifest(
        out,
        "ar1",
        {
            "rho": args.rho,
            "tau": args.tau,
            "n": args.n,
            "seed": args.seed,
            "probabilities": probs,
            "out": args.out,
        },
    )
    chain = ar1_run(args.n, params, Rng(args.seed))
    x = chain.values
    n = x.size

    write_csv(
        os.path.join(out, "chain.csv"),
        ["iter", "value"],
        ((i + 1, x[i]) for i in range(n)),
    )

    means = running_mean(x)
    se_bm = running_mcse(x, "BM")
    se_obm = running_mcse(x, "OBM")
    qs = running_quantiles(x, probs)
    q_ses = running_quantile_se(x, probs)
    crit = np.full(n, np.nan)
    for k in range(MIN_SAMPLES, n + 1):
        crit[k - 1] = t_quantile(_RUNNING_LEVEL, k - math.isqrt(k) + 1)
    lcl = means - crit * se_obm
    ucl = means + crit * se_obm

    header = (
        ["iter", "mean", "se_bm", "se_obm"]
        + [f"q_{p:g}" for p in probs]
        + [f"se_q_{p:g}" for p in probs]
        + ["mean_lcl_obm", "mean_ucl_obm"]
    )
    write_csv(
        os.path.join(out, "running.csv"),
        header,
        (
            [i + 1, means[i], se_bm[i], se_obm[i]] + list(qs[i]) + list(q_ses[i]) + [lcl[i], ucl[i]]
            for i in range(n)
        ),
    )

    try:
        rs = acf(x)
        acf_rows = [(lag, r) for lag, r in enumerate(rs)]
    except ValueError:
        acf_rows = [(0, None)]
    write_csv(os.path.join(out, "acf.csv"), ["lag", "r"], acf_rows)
    return EXIT_OK


def run_tda(args) -> int:
    out = _ensure_out(args.out)
    write_manifest(out, "tda", {"n": args.n, "seed": args.seed, "out": args.out})
    chain = tda_run(args.n, Rng(args.seed))
    x = chain.values[:, 0]
    y = chain.values[:, 1]
    n = x.size

    write_csv(
        os.path.join(out, "chain.csv"),
        ["iter", "x", "y"],
        ((i + 1, x[i], y[i]) for i in range(n)),
    )

    x_mean = running_mean(x)
    x2_mean = running_mean(np.square(x))
    rb_mean = rb_second_moment(y)
    se_x = running_mcse(x, "OBM")
    se_x2 = running_mcse(x, "OBM", g=np.square)
    se_rb = running_mcse(1.0 / y, "OBM")
    write_csv(
        os.path.join(out, "moments.csv"),
        ["iter", "x_mean", "x2_mean", "rb_mean", "se_obm_x", "se_obm_x2", "se_obm_rb"],
        (
            (i + 1, x_mean[i], x2_mean[i], rb_mean[i], se_x[i], se_x2[i], se_rb[i])
            for i in range(n)
        ),
    )
    return EXIT_OK


def run_gibbs_normal(args) -> int:
    params = NormalPosteriorParams(args.m, args.y_bar, args.s2)
    out = _ensure_out(args.out)
    write_manifest(
        out,
        "gibbs-normal",
        {
            "m": args.m,
            "y_bar": args.y_bar,
            "s2": args.s2,
            "n": args.n,
            "seed": args.seed,
            "rb_variant": args.rb_variant,
            "out": args.out,
        },
    )
    chain = nv_gibbs_run(args.n, params, Rng(args.seed))
    mu = chain.values[:, 0]
    theta = chain.values[:, 1]
    n = mu.size

    write_csv(
        os.path.join(out, "chain.csv"),
        ["iter", "mu", "theta"],
        ((i + 1, mu[i], theta[i]) for i in range(n)),
    )

    for name, series in (("kde_mu.csv", mu), ("kde_theta.csv", theta)):
        est = kde_1d(series)
        write_csv(os.path.join(out, name), ["x", "density"], zip(est.x, est.density))

    k2 = kde_2d(mu, theta, n_grid=50, lims=_KDE2D_LIMS)
    write_csv(
        os.path.join(out, "kde2d.csv"),
        ["x", "y", "density"],
        (
            (k2.x[i], k2.y[j], k2.density[i, j])
            for i in range(k2.x.size)
            for j in range(k2.y.size)
        ),
    )

    grid = np.linspace(_RB_GRID[0], _RB_GRID[1], _RB_GRID[2])
    rb = rb_marginal_mu(theta, grid, params.m, params.y_bar, variant=args.rb_variant)
    write_csv(os.path.join(out, "rb_mu.csv"), ["x", "density"], zip(rb.x, rb.density))
    return EXIT_OK


def _read_single_column(path: str) -> np.ndarray:
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            token = raw.strip().split(",")[0]
            if token == "":
                continue
            try:
                values.append(float(token))
            except ValueError:
                if lineno == 1:  # header row
                    continue
                raise ValueError(f"{path}:{lineno}: cannot parse {token!r} as a number")
    return np.asarray(values, dtype=float)


def _parse_batch(text: str):
    if text in ("sqroot", "cuberoot"):
        return text
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"unknown batch policy {text!r}") from None


def run_mcse(args) -> int:
    values = _read_single_column(args.input)
    if values.size < MIN_SAMPLES:
        print(f"insufficient samples: need at least {MIN_SAMPLES}, got {values.size}", file=sys.stderr)
        return EXIT_DATA

    lines: list[str] = [f"n={values.size}"]
    if args.probabilities is not None:
        intervals = ci_quantiles(values, args.probabilities, level=_RUNNING_LEVEL)
        qset = subsample_quantile_se(values, args.probabilities)
        lines += [
            "method=subsampling",
            f"b={qset.b}",
            f"a={qset.a}",
            f"df={intervals[0].df}",
            f"level={format_value(_RUNNING_LEVEL)}",
        ]
        for iv in intervals:
            tag = f"{iv.probability:g}"
            lines += [
                f"q_{tag}={format_value(iv.center)}",
                f"se_q_{tag}={format_value(iv.se)}",
                f"lower_q_{tag}={format_value(iv.lower)}",
                f"upper_q_{tag}={format_value(iv.upper)}",
            ]
    else:
        policy = _parse_batch(args.batch)
        g = _TRANSFORMS[args.transform]
        interval = ci_mean(values, args.method, level=_RUNNING_LEVEL, policy=policy, g=g)
        est = mcse_bm(values, policy, g) if args.method.upper() == "BM" else mcse_obm(values, policy, g)
        lines += [
            f"method={est.method}",
            f"batch={args.batch}",
            f"transform={args.transform}",
            f"b={est.b}",
            f"a={est.a}",
            f"df={interval.df}",
            f"mean={format_value(interval.center)}",
            f"se={format_value(est.se)}",
            f"level={format_value(_RUNNING_LEVEL)}",
            f"half_width={format_value(interval.half_width)}",
            f"lower={format_value(interval.lower)}",
            f"upper={format_value(interval.upper)}",
        ]

    report = "\n".join(lines) + "\n"
    sys.stdout.write(report)
    if args.out is not None:
        out = _ensure_out(args.out)
        options = {
            "input": args.input,
            "method": args.method,
            "batch": args.batch,
            "transform": args.transform,
        }
        if args.probabilities is not None:
            options["probabilities"] = args.probabilities
        options["out"] = args.out
        write_manifest(out, "mcse", options)
        with open(os.path.join(out, "report.txt"), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report)
    return EXIT_OK


def _stop_replicate(payload: tuple):
    (index, seed, target, rho, tau, epsilon, level, step, pilot_n, max_n, bonferroni, probs) = payload
    source = Ar1Source(Ar1Params(rho, tau))
    config = StoppingConfig(epsilon=epsilon, level=level, step=step, pilot_n=pilot_n, max_n=max_n)
    rng = Rng(seed)
    if target == "mean":
        res = fixed_width_mean(source, config, rng)
        covered = bool(abs(res.estimates[0] - source.truth_mean()) <= res.half_widths[0])
        rows = [
            (index, res.terminal_n, res.half_width, float(res.estimates[0]), res.converged, covered)
        ]
        all_covered = covered
    else:
        res = fixed_width_quantiles(source, probs, config, rng, bonferroni)
        rows = []
        flags = []
        for p, est, h in zip(probs, res.estimates, res.half_widths):
            truth = source.truth_quantile(p)
            c = bool(abs(float(est) - truth) <= float(h))
            flags.append(c)
            rows.append((index, p, res.terminal_n, float(h), float(est), res.converged, c))
        all_covered = all(flags)
    return rows, res.terminal_n, res.converged, all_covered


def run_stop(args) -> int:
    step = args.step if args.step is not None else (1000 if args.target == "mean" else 2000)
    # validate up front so a bad config fails before any replicate runs
    StoppingConfig(epsilon=args.epsilon, level=args.level, step=step, pilot_n=args.pilot, max_n=args.max_n)
    Ar1Params(args.rho, args.tau)
    out = _ensure_out(args.out)
    write_manifest(
        out,
        "stop",
        {
            "target": args.target,
            "rho": args.rho,
            "tau": args.tau,
            "epsilon": args.epsilon,
            "level": args.level,
            "step": step,
            "pilot": args.pilot,
            "max_n": args.max_n,
            "bonferroni": args.bonferroni,
            "probabilities": args.probabilities,
            "replications": args.replications,
            "seed": args.seed,
            "out": args.out,
        },
    )

    reps = args.replications
    payloads = [
        (
            i,
            (args.seed + i) % 2**64,
            args.target,
            args.rho,
            args.tau,
            args.epsilon,
            args.level,
            step,
            args.pilot,
            args.max_n,
            args.bonferroni,
            args.probabilities,
        )
        for i in range(reps)
    ]

    results = None
    if reps >= _POOL_MIN_REPLICATIONS and (os.cpu_count() or 1) > 1:
        try:
            with concurrent.futures.ProcessPoolExecutor() as pool:
                results = list(pool.map(_stop_replicate, payloads, chunksize=4))
        except (OSError, concurrent.futures.process.BrokenProcessPool):
            results = None
    if results is None:
        results = [_stop_replicate(p) for p in payloads]

    if args.target == "mean":
        header = ["replicate", "terminal_n", "half", "estimate", "converged", "covered"]
    else:
        header = ["replicate", "probability", "terminal_n", "half", "estimate", "converged", "covered"]
    write_csv(
        os.path.join(out, "results.csv"),
        header,
        (row for rows, *_ in results for row in rows),
    )

    if reps > 1:
        terminal = np.array([t for _, t, _, _ in results], dtype=float)
        converged_count = sum(1 for _, _, c, _ in results if c)
        coverage = sum(1 for *_, cov in results if cov) / reps
        t_q = quantiles_type1(terminal, (0.25, 0.5, 0.75))
        write_csv(
            os.path.join(out, "summary.csv"),
            [
                "replications",
                "converged_count",
                "coverage",
                "terminal_n_min",
                "terminal_n_q25",
                "terminal_n_median",
                "terminal_n_q75",
                "terminal_n_max",
            ],
            [
                (
                    reps,
                    converged_count,
                    coverage,
                    int(terminal.min()),
                    int(t_q[0]),
                    int(t_q[1]),
                    int(t_q[2]),
                    int(terminal.max()),
                )
            ],
        )
    return EXIT_OK


# parser ---------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # usage problems exit with code 1 (argparse's default is 2)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _probabilities(text: str) -> tuple:
    try:
        probs = tuple(float(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse probabilities from {text!r}") from None
    if not probs:
        raise argparse.ArgumentTypeError("need at least one probability")
    return probs


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="mcmc-confidence",
        description="Monte Carlo error assessment: simulate, estimate, and stop with confidence.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="<command>", parser_class=_Parser)

    p = sub.add_parser("ar1", help="AR(1) chain with running estimates, errors, and ACF")
    p.add_argument("--rho", type=float, default=0.5, help="autoregression coefficient, |rho| < 1")
    p.add_argument("--tau", type=float, default=1.0, help="innovation standard deviation")
    p.add_argument("--n", type=int, default=2000, help="chain length")
    p.add_argument("--seed", type=int, default=1976)
    p.add_argument("--probabilities", type=_probabilities, default=(0.25, 0.75),
                   help="comma-separated quantile probabilities")
    p.add_argument("--out", default="out/ar1")
    p.set_defaults(func=run_ar1)

    p = sub.add_parser("tda",
                       help="data-augmentation chain for the 4-df t target with moment series")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=100)
    p.add_argument("--out", default="out/tda")
    p.set_defaults(func=run_tda)

    p = sub.add_parser("gibbs-normal",
                       help="normal mean/variance Gibbs sampler with marginal density estimates")
    p.add_argument("--m", type=int, default=11, help="observed sample size (>= 3)")
    p.add_argument("--y-bar", type=float, default=1.0, help="observed sample mean")
    p.add_argument("--s2", type=float, default=4.0, help="observed (biased) sample variance")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=100)
    p.add_argument("--rb-variant", choices=("plugin", "mixture"), default="plugin",
                   help="conditional-density estimate of the mu marginal")
    p.add_argument("--out", default="out/gibbs-normal")
    p.set_defaults(func=run_gibbs_normal)

    p = sub.add_parser("mcse",
                       help="standard errors and intervals for a chain stored as single-column CSV")
    p.add_argument("--input", required=True, help="path to a single-column CSV (header optional)")
    p.add_argument("--method", choices=("bm", "obm"), default="bm")
    p.add_argument("--batch", default="sqroot", help="sqroot, cuberoot, or an explicit batch size")
    p.add_argument("--transform", choices=sorted(_TRANSFORMS), default="id")
    p.add_argument("--probabilities", type=_probabilities, default=None,
                   help="report subsampling quantile errors instead of the mean")
    p.add_argument("--seed", type=int, default=0, help="recorded in the manifest; this command draws nothing")
    p.add_argument("--out", default=None, help="also write report.txt and manifest.txt here")
    p.set_defaults(func=run_mcse)

    p = sub.add_parser("stop", help="fixed-width sequential stopping study")
    p.add_argument("--target", choices=("mean", "quantiles"), default="mean")
    p.add_argument("--rho", type=float, default=0.95)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=0.1, help="target half-width")
    p.add_argument("--level", type=float, default=0.9, help="one-sided t level per interval")
    p.add_argument("--step", type=int, default=None,
                   help="iterations added per check (default 1000 for mean, 2000 for quantiles)")
    p.add_argument("--pilot", type=int, default=2000, help="pilot chain length")
    p.add_argument("--max-n", type=int, default=200_000, help="simulation budget")
    p.add_argument("--bonferroni", action="store_true",
                   help="inflate the level so the quantile intervals hold jointly")
    p.add_argument("--probabilities", type=_probabilities, default=(0.25, 0.75))
    p.add_argument("--replications", type=int, default=1)
    p.add_argument("--seed", type=int, default=1976)
    p.add_argument("--out", default="out/stop")
    p.set_defaults(func=run_stop)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def console() -> None:
    sys.exit(main())
