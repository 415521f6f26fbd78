"""Command-line surface.

Commands: walk, bounds, cutoff, simulate, spectrum, fourier, factorize,
ergodic.  Every command is deterministic given its flags and seed, and
emits CSV (15 significant digits) to --out or stdout; report commands
additionally render a matplotlib figure next to the delimited output
when --fig is given.

Exit codes: 0 ok, 1 usage, 2 non-ergodic walk, 3 unsupported request,
4 budget exceeded, 5 numeric failure.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import secrets
import sys

import numpy as np

from . import bounds as bounds_mod
from . import cutoff as cutoff_mod
from . import simulate as sim_mod
from .factorize import (check_factorization, circle_pq_operator, urban_factors,
                        urban_problem)
from .fourier import FourierError, character_table_csv, irrep_catalog
from .groups import GroupError, build_group, is_ergodic
from .measures import (MeasureError, entropy_gap, power_curve,
                       separation_distance, uniform, variation_distance)
from .spectral import (SpectralError, is_invertible, operator_from_measure,
                       operator_to_csv, spectrum, spectrum_to_csv)
from .walks import WalkError, WalkSpec, measure_for, parse_walk

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_ERGODIC = 2
EXIT_UNSUPPORTED = 3
EXIT_BUDGET = 4
EXIT_NUMERIC = 5

MIX_EPS = 1 / (2 * math.e)


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message, EXIT_USAGE)


def _fmt(x) -> str:
    return f"{x:.15g}"


@contextlib.contextmanager
def _out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        fh = open(path, "w")
        try:
            yield fh
        finally:
            fh.close()


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    seed = secrets.randbits(63)
    print(f"auto-seed: {seed}", file=sys.stderr)
    return seed


# -- walk ---------------------------------------------------------------------


def cmd_walk(args) -> int:
    spec = parse_walk(args.walk)
    g, nu = measure_for(spec)
    if g.order > cutoff_mod.EXACT_BUDGET:
        raise CliError(f"|G| = {g.order} exceeds the exact budget", EXIT_BUDGET)
    erg = is_ergodic(g, nu.support())
    if not erg.ergodic:
        print(erg.describe(g), file=sys.stderr)
        return EXIT_NOT_ERGODIC
    pi = uniform(g)
    rows = []
    for k, mu in power_curve(nu, args.kmax):
        rows.append((k, variation_distance(mu, pi), separation_distance(mu),
                     entropy_gap(mu)))
    with _out(args.out) as fh:
        fh.write("k,distance,separation,entropy_gap\n")
        for k, d, s, h in rows:
            fh.write(f"{k},{_fmt(d)},{_fmt(s)},{_fmt(h)}\n")
    if args.fig:
        from . import plotting
        ks = [r[0] for r in rows]
        plotting.save_walk_figure(args.fig, ks, [r[1] for r in rows],
                                  [r[2] for r in rows], [r[3] for r in rows],
                                  title=f"{spec} distance to random")
    return EXIT_OK


# -- bounds -------------------------------------------------------------------


def _bounds_circle(args, spec):
    n = spec.n
    curve = cutoff_mod.distance_curve(spec, args.kmax, check_oracle=False)
    ks = np.arange(args.kmax + 1)
    upper = bounds_mod.circle_upper(n, ks)
    lower = bounds_mod.circle_lower(n, ks)
    rows = []
    for k in ks:
        u = "" if math.isnan(upper[k]) else _fmt(upper[k])
        lo = "" if math.isnan(lower[k]) else _fmt(lower[k])
        rows.append((k, _fmt(curve.values[k]), u, lo))
    return rows, curve, upper, lower


def _bounds_cube(args, spec):
    cs = args.c or [0.5, 1.0, 2.0, 4.0]
    k_need = max(math.ceil(bounds_mod.cube_upper(spec.n, c)[0]) for c in cs)
    curve = cutoff_mod.distance_curve(spec, max(k_need, 1), check_oracle=False)
    rows = []
    for c in cs:
        k, b2 = bounds_mod.cube_upper(spec.n, c)
        kk = math.ceil(k)
        rows.append((kk, _fmt(curve.values[kk]), _fmt(math.sqrt(b2)), ""))
        k_lo, lo = bounds_mod.cube_lower_asymptotic(spec.n, c)
        # the lower regime lives at its own (earlier) hypothesis time and
        # is vacuous whenever its value is nonpositive
        if k_lo >= 0 and lo > 0:
            kk_lo = math.ceil(k_lo)
            rows.append((kk_lo, _fmt(curve.values[kk_lo]), "", _fmt(lo)))
    print("note: cube lower bounds are asymptotic-only and omitted when vacuous",
          file=sys.stderr)
    return rows, curve, None, None


def _bounds_heisenberg(args, spec):
    g, nu = measure_for(spec)
    if g.order > cutoff_mod.EXACT_BUDGET:
        raise CliError(f"|G| = {g.order} exceeds the exact budget", EXIT_BUDGET)
    profile = bounds_mod.growth_profile(g, nu.support(), nu)
    A, d = 48.0, 3.0
    if not bounds_mod.moderate_growth_certificate(profile, A, d):
        raise CliError(f"(48,3) moderate growth fails for {spec}", EXIT_NUMERIC)
    cs = args.c or [0.5, 1.0, 2.0, 4.0]
    rows = []
    k_needed = []
    entries = []
    for c in cs:
        uk, ub, lk, lb = bounds_mod.moderate_growth_bounds(
            A, d, profile.diameter, profile.L, c)
        entries.append((math.ceil(uk), ub, math.ceil(lk), lb))
        k_needed.extend([math.ceil(uk), math.ceil(lk)])
    kmax = max(k_needed + [1])
    curve = cutoff_mod.distance_curve(spec, kmax, check_oracle=False)
    for (uk, ub, lk, lb) in entries:
        rows.append((uk, _fmt(curve.values[uk]), _fmt(min(ub, 1.0)), ""))
        rows.append((lk, _fmt(curve.values[lk]), "", _fmt(lb)))
    return rows, curve, None, None


def cmd_bounds(args) -> int:
    spec = parse_walk(args.walk)
    handlers = {"simple-circle": _bounds_circle, "cube-nn": _bounds_cube,
                "heisenberg-gen": _bounds_heisenberg}
    if spec.name not in handlers:
        raise CliError(f"no analytic bounds catalogued for {spec.name}",
                       EXIT_UNSUPPORTED)
    rows, curve, upper, lower = handlers[spec.name](args, spec)
    with _out(args.out) as fh:
        fh.write("k,exact,upper,lower\n")
        for k, e, u, lo in rows:
            fh.write(f"{k},{e},{u},{lo}\n")
    if args.fig:
        from . import plotting
        if upper is not None:
            plotting.save_bounds_figure(args.fig, curve.ks, curve.values,
                                        upper, lower,
                                        title=f"{spec} bound sandwich")
        else:
            plotting.save_bounds_figure(args.fig, curve.ks, curve.values,
                                        title=f"{spec} exact curve")
    return EXIT_OK


# -- cutoff -------------------------------------------------------------------


_TN_RULES = {
    "nlogn/4": lambda n: n * math.log(n) / 4.0,
    "nlogn/2": lambda n: n * math.log(n) / 2.0,
    "nlogn": lambda n: n * math.log(n),
    "n^2": lambda n: float(n * n),
    "n^2/2": lambda n: n * n / 2.0,
}


def cmd_cutoff(args) -> int:
    if not args.n_list:
        raise CliError("empty n list", EXIT_USAGE)
    n_list = [int(x) for x in args.n_list.split(",") if x]
    if not n_list:
        raise CliError("empty n list", EXIT_USAGE)
    t_fn = _TN_RULES[args.tn]
    a, b = args.a, args.b
    eps_grid = [float(x) for x in args.eps.split(",") if x]
    verdict = cutoff_mod.cutoff_scan(args.family, n_list, t_fn, eps_grid)
    summary = []
    for i, n in enumerate(n_list):
        curve = verdict.curves[i]
        # extend the curve until it clears the finitary threshold b
        k = len(curve.values) - 1
        while curve.values[-1] >= b:
            k = max(2 * k, 16)
            if k > 100 * max(verdict.t_values[i], 4.0):
                raise CliError(f"curve for n={n} will not clear b={b}",
                               EXIT_BUDGET)
            curve = cutoff_mod.distance_curve(WalkSpec(args.family, n), k,
                                              check_oracle=False)
            verdict.curves[i] = curve
        fc = cutoff_mod.finitary_cutoff(curve, a, b)
        tau = cutoff_mod.mixing_time(curve).tau_default
        summary.append({"n": n, "tau": tau, "q": fc.q,
                        "A_size": fc.A_size, "B_size": fc.B_size})
    with _out(args.out) as fh:
        cutoff_mod.summary_to_csv(summary, fh)
    if args.curves:
        cutoff_mod.curve_to_csv(verdict.curves, args.curves)
    print(verdict.summary(), file=sys.stderr)
    if args.fig:
        from . import plotting
        plotting.save_family_figure(args.fig, verdict.curves,
                                    title=f"{args.family} family")
    return EXIT_OK


# -- simulate -----------------------------------------------------------------


def cmd_simulate(args) -> int:
    seed = _resolve_seed(args)
    threads = args.threads
    if args.what == "sut":
        sample = sim_mod.random_to_top_sut(args.n, args.trials, seed, threads)
        _emit_estimator(args, sample)
    elif args.what == "coupling":
        result = sim_mod.cube_coupling(args.n, args.trials, seed, threads)
        print(f"marginal chi-square p = {result.chi_square_p:.6g} "
              f"at k = {result.k_marginal}", file=sys.stderr)
        _emit_estimator(args, result.sample)
    elif args.what == "switzer":
        if args.walk is None:
            raise CliError("simulate switzer needs --walk", EXIT_USAGE)
        spec = parse_walk(args.walk)
        g, nu = measure_for(spec)
        from .measures import convolution_power
        mu = convolution_power(nu, args.k)
        res = sim_mod.switzer_game(mu, uniform(g), args.trials, seed, threads)
        with _out(args.out) as fh:
            fh.write("win_rate,expected,stderr,trials\n")
            fh.write(f"{_fmt(res.win_rate)},{_fmt(res.expected)},"
                     f"{_fmt(res.stderr)},{res.trials}\n")
    elif args.what == "visits":
        if args.walk is None:
            raise CliError("simulate visits needs --walk", EXIT_USAGE)
        spec = parse_walk(args.walk)
        g, nu = measure_for(spec)
        res = sim_mod.visits_before_return(nu, args.target, args.trials, seed,
                                           threads)
        ratio, se = res.ratio_with_stderr()
        with _out(args.out) as fh:
            fh.write("mean_visits,mean_return_time,ratio,ratio_stderr,"
                     "censored,trials\n")
            fh.write(f"{_fmt(res.mean_visits)},{_fmt(res.mean_return_time)},"
                     f"{_fmt(ratio)},{_fmt(se)},{res.censored},{res.trials}\n")
    else:  # pragma: no cover - argparse restricts choices
        raise CliError(f"unknown simulation {args.what!r}", EXIT_USAGE)
    return EXIT_OK


def _emit_estimator(args, sample) -> None:
    ks = np.arange(args.kmax + 1)
    p, se = sample.exceedance(ks)
    with _out(args.out) as fh:
        fh.write("k,p_exceed,stderr\n")
        for k, pk, sek in zip(ks, p, se):
            fh.write(f"{k},{_fmt(pk)},{_fmt(sek)}\n")
    if args.fig:
        from . import plotting
        plotting.save_estimator_figure(args.fig, ks, p, se)


# -- spectrum / fourier / factorize / ergodic ---------------------------------


def cmd_spectrum(args) -> int:
    spec = parse_walk(args.walk)
    g, nu = measure_for(spec)
    P = operator_from_measure(nu)
    sp = spectrum(P)
    with _out(args.out) as fh:
        spectrum_to_csv(sp, fh)
    if args.operator_out:
        operator_to_csv(P, args.operator_out, force=args.force)
    if args.fig:
        from . import plotting
        plotting.save_spectrum_figure(args.fig, sp.eigenvalues,
                                      title=f"{spec} spectrum")
    return EXIT_OK


def cmd_fourier(args) -> int:
    g = build_group(args.group)
    catalog = irrep_catalog(g)
    with _out(args.out) as fh:
        character_table_csv(catalog, fh)
    return EXIT_OK


def cmd_factorize(args) -> int:
    if args.urban is not None:
        n = args.urban
        problem = urban_problem(n)
        check = check_factorization(problem)
        with _out(args.out) as fh:
            fh.write(f"urban factorization on S{n}: "
                     f"{'exact' if check.is_exact else 'NOT exact'} "
                     f"(deviation {check.deviation:.3e})\n")
            for i, factor in enumerate(urban_factors(n), start=1):
                P = operator_from_measure(factor)
                verdict = is_invertible(P)
                fh.write(f"factor {i}: singular={not verdict.invertible} "
                         f"smin={verdict.smallest_singular_value:.3e}\n")
        return EXIT_OK
    if args.circle_pq is not None:
        n = args.circle_pq
        ps = [float(x) for x in args.p_grid.split(",") if x]
        with _out(args.out) as fh:
            fh.write("n,p,invertible,smin,borderline\n")
            for p in ps:
                res = circle_pq_operator(n, p)
                v = res.verdict
                fh.write(f"{n},{_fmt(p)},{int(v.invertible)},"
                         f"{_fmt(v.smallest_singular_value)},{int(v.borderline)}\n")
        return EXIT_OK
    raise CliError("factorize needs --urban N or --circle-pq N", EXIT_USAGE)


def cmd_ergodic(args) -> int:
    g = build_group(args.group)
    support = [int(x) for x in args.support.split(",") if x]
    result = is_ergodic(g, support)
    with _out(args.out) as fh:
        fh.write(result.describe(g) + "\n")
    return EXIT_OK if result.ergodic else EXIT_NOT_ERGODIC


# -- parser -------------------------------------------------------------------


def build_parser() -> Parser:
    parser = Parser(prog="groupwalk",
                    description="random walks on finite groups: exact curves, "
                                "bounds, cut-off statistics, simulation")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fig=True):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)
        if fig:
            p.add_argument("--fig", default=None,
                           help="render a figure to this file")

    p = sub.add_parser("walk", help="exact distance/separation/entropy curves")
    p.add_argument("--walk", required=True)
    p.add_argument("--kmax", type=int, default=100)
    common(p)
    p.set_defaults(fn=cmd_walk)

    p = sub.add_parser("bounds", help="analytic bound sandwich for a walk")
    p.add_argument("--walk", required=True)
    p.add_argument("--kmax", type=int, default=150)
    p.add_argument("--c", type=float, nargs="*", default=None)
    common(p)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("cutoff", help="family scan and finitary statistics")
    p.add_argument("--family", required=True)
    p.add_argument("--n-list", required=True)
    p.add_argument("--tn", choices=sorted(_TN_RULES), default="nlogn/4")
    p.add_argument("--eps", default="0.5")
    p.add_argument("--a", type=float, default=MIX_EPS)
    p.add_argument("--b", type=float, default=MIX_EPS)
    p.add_argument("--curves", default=None, help="long-format CSV path")
    common(p)
    p.set_defaults(fn=cmd_cutoff)

    p = sub.add_parser("simulate", help="Monte Carlo estimators")
    p.add_argument("what", choices=["sut", "coupling", "switzer", "visits"])
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--walk", default=None)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--kmax", type=int, default=60)
    p.add_argument("--target", type=int, default=1)
    p.add_argument("--trials", type=int, default=100000)
    common(p)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("spectrum", help="operator eigenvalues as CSV")
    p.add_argument("--walk", required=True)
    p.add_argument("--operator-out", default=None)
    p.add_argument("--force", action="store_true",
                   help="allow large dense operator dumps")
    common(p)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("fourier", help="character table of a catalogue group")
    p.add_argument("--group", required=True)
    common(p, fig=False)
    p.set_defaults(fn=cmd_fourier)

    p = sub.add_parser("factorize", help="pi-factorization reports")
    p.add_argument("--urban", type=int, default=None)
    p.add_argument("--circle-pq", type=int, default=None)
    p.add_argument("--p-grid", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    common(p, fig=False)
    p.set_defaults(fn=cmd_factorize)

    p = sub.add_parser("ergodic", help="ergodicity verdict with witness")
    p.add_argument("--group", required=True)
    p.add_argument("--support", required=True,
                   help="comma-separated element indices")
    common(p, fig=False)
    p.set_defaults(fn=cmd_ergodic)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except cutoff_mod.NotErgodicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_ERGODIC
    except cutoff_mod.BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (WalkError, GroupError, FourierError, MeasureError,
            bounds_mod.BoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except SpectralError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
