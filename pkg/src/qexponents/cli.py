"""Command-line front end.

    qexponents exponents --pair pair.json --r-grid 0:0.1:21
    qexponents finite-n  --pair pair.json --n-max 4 --epsilon 0.1
    qexponents channel   --channel channel.json --a-grid 0:0.5:11 --optimize
    qexponents verify    --trials 1000 --seed 42

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 bad input
or usage, 3 dimension guard exceeded.
"""

import argparse
import logging
import math
import sys

import numpy as np

from . import __version__
from .channel import (
    channel_exponent_opt,
    finite_blocklength_check,
    holevo_quantity,
    make_channel,
    optimize_input,
    uniform,
)
from .exceptions import DimensionGuardError, InputFormatError, ValidationError
from .exponents import (
    chernoff_bound,
    hoeffding_curve,
    legendre_residuals,
    oh_curve,
)
from .finite_n import (
    hoeffding_test,
    np_tradeoff,
    run_lemma_suite,
    stein_convergence,
    verify_exponential_bounds,
)
from .io import load_channel, load_pair
from .operators import check_dimension
from .report import Report, write_report
from .states import make_pair, relative_entropy

log = logging.getLogger("qexponents")

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3
LEMMA_DIMS = (2, 3, 4, 5, 6)


def parse_grid(text):
    """``lo:hi:steps`` -> ``steps`` evenly spaced points from ``lo`` to ``hi``."""
    try:
        lo, hi, steps = text.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like lo:hi:steps, got {text!r}") from None
    if steps < 1 or not (math.isfinite(lo) and math.isfinite(hi)):
        raise argparse.ArgumentTypeError(f"grid {text!r} needs finite bounds and steps >= 1")
    if steps > 1 and hi <= lo:
        raise argparse.ArgumentTypeError(f"grid {text!r} needs hi > lo")
    return [float(x) for x in np.linspace(lo, hi, steps)]


def _probability(text):
    x = float(text)
    if not 0.0 < x < 1.0:
        raise argparse.ArgumentTypeError(f"epsilon must lie in (0, 1), got {text}")
    return x


def _positive_int(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def _grid_text(grid):
    return " ".join(repr(x) for x in grid)


def _load_pair(path):
    rho, sigma = load_pair(path)
    try:
        return make_pair(rho, sigma)
    except ValidationError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc


def run_exponents(args):
    pair = _load_pair(args.pair)
    rep = Report("exponents", {
        "pair": str(args.pair), "r_grid": _grid_text(args.r_grid), "version": __version__,
    })
    d = relative_entropy(pair)
    chern, chern_s = chernoff_bound(pair)
    summary = rep.table(
        "summary",
        ["relative_entropy", "chernoff", "chernoff_s", "support_ok", "rho_full_rank", "commuting"],
        nat_columns={"relative_entropy", "chernoff"},
    )
    summary.add(d, chern, chern_s, pair.support_ok, pair.rho_full_rank, pair.commuting)
    rep.check("relative_entropy_nonnegative", d >= 0, repr(d))
    rep.check("chernoff_nonnegative", chern >= 0, repr(chern))

    hoeff = hoeffding_curve(args.r_grid, pair)
    oh = oh_curve(args.r_grid, pair)
    for curve, name in ((hoeff, "hoeffding"), (oh, "tilde")):
        t = rep.table(name, ["r", "bound", "s_star", "flag"], nat_columns={"r", "bound"})
        for row in curve.rows():
            t.add(row["r"], row["bound"], row["s_star"], row["flag"])
    vals = hoeff.values
    rep.check(
        "hoeffding_nonincreasing",
        all(b <= a + 1e-12 or (math.isinf(a) and math.isinf(b)) for a, b in zip(vals, vals[1:])),
    )
    worst = min((h - o for h, o in zip(hoeff.values, oh.values) if math.isfinite(h)), default=0.0)
    rep.check("hoeffding_dominates_tilde", worst >= -1e-9, f"min difference {worst!r}")
    if not pair.rho_full_rank:
        rep.params["phi_tilde_note"] = "rho singular: rho^(-s) taken on its support"

    leg = rep.table(
        "legendre", ["r", "s_r", "residual_rate", "residual_value", "applicable"],
        nat_columns={"r", "residual_rate", "residual_value"},
    )
    worst_res = 0.0
    for r in args.r_grid:
        chk = legendre_residuals(r, pair)
        leg.add(r, chk.s_r, chk.residual_rate, chk.residual_value, chk.applicable)
        if chk.applicable:
            worst_res = max(worst_res, chk.residual_rate, chk.residual_value)
    rep.check("legendre_residuals", worst_res <= 1e-6, f"max residual {worst_res!r}")
    return rep


def _lemma_tables(rep, trials, seed):
    for which in ("audenaert", "lemma1"):
        rows = run_lemma_suite(which, trials=trials, dims=LEMMA_DIMS, seed=seed)
        t = rep.table(
            f"lemma_{which}",
            ["seed", "trial", "dim", "rank_1", "rank_2", "param", "gap", "tolerance", "ok"],
        )
        for r in rows:
            t.add(r.seed, r.trial, r.dim, r.rank_1, r.rank_2, r.param, r.gap, r.tolerance, r.ok)
        failures = sum(not r.ok for r in rows)
        worst = float(min(r.gap / r.tolerance if r.tolerance > 0 else r.gap for r in rows))
        rep.check(f"{which}_suite", failures == 0,
                  f"{failures} failures of {len(rows)}; min gap/tolerance {worst!r}")


def run_finite_n(args):
    pair = _load_pair(args.pair)
    check_dimension(pair.dim, args.n_max)
    rep = Report("finite-n", {
        "pair": str(args.pair), "n_max": args.n_max, "epsilon": args.epsilon,
        "a_grid": _grid_text(args.a_grid), "s_grid": _grid_text(args.s_grid),
        "r_grid": _grid_text(args.r_grid), "seed": args.seed, "trials": args.trials,
        "version": __version__,
    })
    bounds = rep.table(
        "bounds",
        ["n", "a", "s", "s_param", "t_param", "alpha_s", "beta_s", "alpha_bound_s", "beta_bound_s",
         "alpha_t", "beta_t", "alpha_bound_t", "beta_bound_t", "min_slack", "ok"],
        nat_columns={"a"},
    )
    bad = 0
    for n in range(1, args.n_max + 1):
        for a in args.a_grid:
            for s in args.s_grid:
                c = verify_exponential_bounds(n, a, s, pair)
                bad += not c.ok
                bounds.add(n, a, s, c.s_param, c.t_param, c.errors_s.alpha, c.errors_s.beta,
                           c.alpha_bound_s, c.beta_bound_s, c.errors_t.alpha, c.errors_t.beta,
                           c.alpha_bound_t, c.beta_bound_t, min(c.slacks), c.ok)
    rep.check("exponential_bounds", bad == 0, f"{bad} failing cells of {len(bounds.rows)}")

    study = stein_convergence(args.epsilon, args.n_max, pair)
    trade = rep.table("tradeoff", ["n", "epsilon", "beta_star", "exponent", "relative_entropy"],
                      nat_columns={"exponent", "relative_entropy"})
    for n, b, e in zip(study.n_values, study.beta_star, study.exponents):
        trade.add(n, args.epsilon, b, e, study.relative_entropy)
    ach = rep.table("stein_achievability", ["n", "a", "s", "alpha", "beta", "beta_star_at_alpha"],
                    nat_columns={"a"})
    dominated = True
    for n, err in zip(study.n_values, study.achievability):
        b_star = np_tradeoff(n, err.alpha, pair) if 0 < err.alpha < 1 else None
        if b_star is not None and b_star > err.beta + 1e-12:
            dominated = False
        ach.add(n, study.a, study.s, err.alpha, err.beta, b_star)
    if study.s is not None:
        rep.check("stein_small_s_exponents", study.small_s_ok,
                  f"-sa+phi={study.alpha_exponent!r}, (1-s)a+phi={study.beta_exponent!r}")
    rep.check("tradeoff_below_achievability", dominated)

    hoeff = rep.table(
        "hoeffding_tests",
        ["n", "r", "s_r", "a", "exponent", "alpha", "beta", "alpha_limit", "beta_limit", "ok"],
        nat_columns={"r", "a", "exponent"},
    )
    h_bad = 0
    for r in args.r_grid:
        for n in range(1, args.n_max + 1):
            try:
                h = hoeffding_test(n, r, pair)
            except ValueError:
                log.info("r=%s: optimiser on the boundary, achievability test skipped", r)
                break
            h_bad += not h.ok
            hoeff.add(n, r, h.s_r, h.a, h.exponent, h.alpha, h.beta, h.alpha_limit, h.beta_limit, h.ok)
    rep.check("hoeffding_achievability", h_bad == 0, f"{h_bad} failing rows of {len(hoeff.rows)}")

    if args.trials > 0:
        _lemma_tables(rep, args.trials, args.seed)
    return rep


def run_verify(args):
    rep = Report("verify", {"seed": args.seed, "trials": args.trials, "version": __version__})
    _lemma_tables(rep, args.trials, args.seed)
    return rep


def run_channel(args):
    letters, p = load_channel(args.channel)
    try:
        channel = make_channel(letters)
        p = uniform(channel.k) if p is None else p
        chi = holevo_quantity(channel, p)
    except ValidationError as exc:
        raise InputFormatError(f"{args.channel}: {exc}") from exc
    check_dimension(channel.k * channel.dim, args.n_max)
    rep = Report("channel", {
        "channel": str(args.channel), "a_grid": _grid_text(args.a_grid),
        "s_grid": _grid_text(args.s_grid), "n_max": args.n_max, "optimize": args.optimize,
        "seed": args.seed, "version": __version__,
    })
    pcols = [f"p_{i}" for i in range(channel.k)]
    summary = rep.table("summary", ["k", "dim", "holevo"] + pcols, nat_columns={"holevo"})
    summary.add(channel.k, channel.dim, chi, *[float(x) for x in p])

    curve = rep.table("exponent", ["a", "E", "s_star"] + pcols, nat_columns={"a", "E"})
    values = []
    for a in args.a_grid:
        e = channel_exponent_opt(a, channel, p)
        values.append(e.value)
        curve.add(a, e.value, e.s_star, *[float(x) for x in p])
    rep.check("exponent_nonincreasing",
              all(b <= x + 1e-12 for x, b in zip(values, values[1:])))
    above = [v for a, v in zip(args.a_grid, values) if a >= chi + 1e-6]
    rep.check("exponent_vanishes_above_holevo", all(v <= 1e-9 for v in above),
              f"{len(above)} grid points above the Holevo quantity")

    if args.optimize:
        opt = rep.table("optimized", ["a", "E", "heuristic"] + [f"p_star_{i}" for i in range(channel.k)],
                        nat_columns={"a", "E"})
        for a in args.a_grid:
            res = optimize_input(a, channel, seed=args.seed)
            opt.add(a, res.exponent, res.heuristic, *[float(x) for x in res.p])

    block = rep.table(
        "blocklength",
        ["n", "a", "s", "miss", "false_accept", "bound", "term_first", "term_second",
         "total", "achieved_exponent", "E", "ok"],
        nat_columns={"a", "achieved_exponent", "E"},
    )
    bad = 0
    for n in range(1, args.n_max + 1):
        for a in args.a_grid:
            for s in args.s_grid:
                c = finite_blocklength_check(n, a, s, channel, p)
                bad += not c.ok
                block.add(n, a, s, c.miss, c.false_accept, c.bound, c.term_first, c.term_second,
                          c.total, c.achieved_exponent, c.exponent, c.ok)
    rep.check("blocklength_bounds", bad == 0, f"{bad} failing cells of {len(block.rows)}")
    rep.params["note"] = "exponent uses max_s(-s a - phi_p(s)); both error terms bounded by e^{n(sa+phi_p(s))}"
    return rep


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output directory (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--bits", action="store_true", help="report exponents in bits instead of nats")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="qexponents", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponents", parents=[common], help="Stein, Chernoff and Hoeffding-type exponents")
    p.add_argument("--pair", required=True)
    p.add_argument("--r-grid", type=parse_grid, default=parse_grid("0:0.1:21"))
    p.set_defaults(func=run_exponents)

    p = sub.add_parser("finite-n", parents=[common], help="finite-n tests, trade-off and lemma suites")
    p.add_argument("--pair", required=True)
    p.add_argument("--n-max", type=_positive_int, default=4)
    p.add_argument("--epsilon", type=_probability, default=0.1)
    p.add_argument("--a-grid", type=parse_grid, default=parse_grid("-0.2:0.2:3"))
    p.add_argument("--s-grid", type=parse_grid, default=parse_grid("0.1:0.9:9"))
    p.add_argument("--r-grid", type=parse_grid, default=parse_grid("0.01:0.05:3"))
    p.add_argument("--trials", type=int, default=1000, help="lemma-suite instances per dimension (0 skips)")
    p.set_defaults(func=run_finite_n)

    p = sub.add_parser("channel", parents=[common], help="classical-quantum channel exponent")
    p.add_argument("--channel", required=True)
    p.add_argument("--a-grid", type=parse_grid, default=parse_grid("0:0.5:11"))
    p.add_argument("--s-grid", type=parse_grid, default=parse_grid("0.1:0.9:9"))
    p.add_argument("--n-max", type=_positive_int, default=2)
    p.add_argument("--optimize", action="store_true", help="also maximise over input distributions")
    p.set_defaults(func=run_channel)

    p = sub.add_parser("verify", parents=[common], help="randomised trace-inequality suites only")
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.set_defaults(func=run_verify)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    for name in ("a_grid", "r_grid"):
        grid = getattr(args, name, None)
        if name == "r_grid" and grid is not None and min(grid) < 0:
            print("qexponents: error: --r-grid values must be >= 0", file=sys.stderr)
            return EXIT_INPUT
        if name == "a_grid" and grid is not None and args.command == "channel" and min(grid) < 0:
            print("qexponents: error: --a-grid rates must be >= 0", file=sys.stderr)
            return EXIT_INPUT
    try:
        rep = args.func(args)
    except InputFormatError as exc:
        print(f"qexponents: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DimensionGuardError as exc:
        print(f"qexponents: error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    written = write_report(rep, args.format, args.out, args.bits, stream=sys.stdout)
    for path in written:
        log.info("wrote %s", path)
    for c in rep.checks:
        if not c.passed:
            print(f"qexponents: check failed: {c.name} {c.detail}".rstrip(), file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_CHECK


if __name__ == "__main__":
    raise SystemExit(main())
