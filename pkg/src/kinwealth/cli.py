"""Command-line entry point for reproducible simulation and verification runs.

Law grammar is single-token: `uniform`, `beta:2`, `invbeta:1.5`,
`dirac-half`, `slanina:0.25,0.25`.  Exit codes: 0 success, 1 validation
error, 2 numeric non-convergence or residual above tolerance.
"""

import argparse
import json
import sys

import numpy as np

from .criterion import g_prime_at_one, g_value
from .equilibria import (DiracUnit, ExponentialUnit, GammaShape,
                         InverseGammaShape, SlaninaRescaled,
                         equilibrium_laplace)
from .fraction_laws import (DiracHalf, InverseBetaQuarter, SlaninaPQ,
                            SymmetricBeta, Uniform01)
from .kinetics import (INITIAL_TAGS, MeanConservative, PureGambling,
                       SlaninaMix, merged_wealth, run_replicas,
                       write_series_csv, write_wealth_csv)
from .stats import build_fit_report
from .transform import (grid_from_function, picard_solve, stationary_residual,
                        write_grid_csv)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERIC = 2


def parse_law(text):
    name, _, params = text.partition(":")
    name = name.strip().lower()
    try:
        if name == "uniform":
            return Uniform01()
        if name == "beta":
            return SymmetricBeta(float(params))
        if name == "invbeta":
            return InverseBetaQuarter(float(params))
        if name == "dirac-half":
            return DiracHalf()
        if name == "slanina":
            p, q = (float(x) for x in params.split(","))
            return SlaninaPQ(p, q)
    except ValueError as exc:
        raise ValueError("invalid law %r: %s" % (text, exc)) from exc
    raise ValueError("unknown law name %r" % text)


def parse_family(text):
    name, _, params = text.partition(":")
    name = name.strip().lower()
    try:
        if name in ("exp", "exponential"):
            return ExponentialUnit()
        if name == "gamma":
            return GammaShape(float(params))
        if name == "invgamma":
            return InverseGammaShape(float(params))
        if name == "dirac":
            return DiracUnit()
        if name in ("slanina-rescaled", "slanina"):
            return SlaninaRescaled()
    except ValueError as exc:
        raise ValueError("invalid family %r: %s" % (text, exc)) from exc
    raise ValueError("unknown family name %r" % text)


def _build_rule(rule_name, law, renormalize):
    if rule_name == "pure":
        rule_cls, default = PureGambling, False
    elif rule_name == "mean":
        rule_cls, default = MeanConservative, True
    elif rule_name == "slanina":
        rule_cls, default = SlaninaMix, True
    else:
        raise ValueError("unknown rule %r" % rule_name)
    flag = {"auto": default, "on": True, "off": False}[renormalize]
    return rule_cls(law, renormalize=flag)


VERIFY_CASES = {
    "exp": (Uniform01(), ExponentialUnit()),
    "gamma": None,  # needs a parameter
    "slanina": (InverseBetaQuarter(1.5), SlaninaRescaled()),
    "dirac": (DiracHalf(), DiracUnit()),
}

VERIFY_ALL = ["exp", "gamma:0.5", "gamma:2", "gamma:5", "slanina", "dirac"]


def parse_verify_case(text):
    name, _, params = text.partition(":")
    name = name.strip().lower()
    if name == "gamma":
        a = float(params)
        return text, SymmetricBeta(a), GammaShape(a)
    if name in VERIFY_CASES and VERIFY_CASES[name] is not None:
        law, fam = VERIFY_CASES[name]
        return name, law, fam
    raise ValueError("unknown verify case %r" % text)


def cmd_simulate(args):
    law = parse_law(args.law)
    rule = _build_rule(args.rule, law, args.renormalize)
    total_trades = args.trades_per_agent * args.agents
    series_start = min(args.burn_in, args.trades_per_agent) * args.agents
    results = run_replicas(
        rule, args.agents, total_trades, seed=args.seed,
        replicas=args.replicas, initial=args.initial,
        sample_stride=args.sample_stride, series_start=series_start)
    wealth = merged_wealth(results)
    if args.out:
        if args.format == "csv":
            write_wealth_csv(args.out, wealth)
        else:
            with open(args.out, "w") as fh:
                json.dump({"wealth": [float(x) for x in wealth]}, fh)
    if args.series:
        series = results[0].series
        if len(results) > 1:
            # replica-averaged series; all replicas share the schedule
            series = type(series)(
                series.tau,
                np.mean([r.series.mean for r in results], axis=0),
                np.mean([r.series.variance for r in results], axis=0))
        write_series_csv(args.series, series)
    report = None
    if args.fit:
        fam = parse_family(args.fit)
        report = build_fit_report(wealth, fam)
        if args.report:
            with open(args.report, "w") as fh:
                fh.write(report.to_json(indent=2) + "\n")
    drift = max(r.total_drift for r in results)
    line = ("simulate rule=%s law=%s agents=%d trades=%d replicas=%d "
            "mean=%.15g variance=%.6g drift=%.3g"
            % (args.rule, args.law, args.agents, total_trades, args.replicas,
               wealth.mean(), wealth.var(), drift))
    if report is not None:
        line += " ks=%.4g gini=%.4g" % (report.ks, report.gini)
    print(line)
    return EXIT_OK


def cmd_fixedpoint(args):
    law = parse_law(args.law)
    result = picard_solve(law, args.xi_max, nodes=args.nodes,
                          max_iters=args.max_iters, tol=args.tol)
    if args.out:
        write_grid_csv(args.out, result.grid)
    print("fixedpoint law=%s converged=%s iterations=%d change=%.3g "
          "deriv0=%.10g"
          % (args.law, result.converged, result.iterations,
             result.sup_change, result.grid.derivative_at_zero))
    return EXIT_OK if result.converged else EXIT_NUMERIC


def cmd_gfun(args):
    law = parse_law(args.law)
    if args.prime:
        print("%.12g" % g_prime_at_one(law))
        return EXIT_OK
    if args.s is None:
        raise ValueError("gfun requires --s (or --prime)")
    print("%.12g" % g_value(law, args.s))
    return EXIT_OK


def cmd_verify(args):
    if args.all:
        case_names = VERIFY_ALL
    elif args.case:
        case_names = [args.case]
    else:
        raise ValueError("verify requires --case or --all")
    failed = False
    for text in case_names:
        name, law, fam = parse_verify_case(text)
        grid = grid_from_function(lambda xi: equilibrium_laplace(fam, xi),
                                  args.xi_max, nodes=args.nodes)
        residual = stationary_residual(grid, law)
        ok = residual < args.tol
        failed = failed or not ok
        print("verify %s law=%r residual=%.3e tol=%.1e %s"
              % (name, law, residual, args.tol, "PASS" if ok else "FAIL"))
    return EXIT_NUMERIC if failed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kinwealth",
        description="Kinetic wealth-exchange simulator and verification suite")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the agent simulator")
    sim.add_argument("--rule", required=True, choices=["pure", "mean", "slanina"])
    sim.add_argument("--law", required=True)
    sim.add_argument("--agents", type=int, required=True)
    sim.add_argument("--trades-per-agent", type=int, required=True)
    sim.add_argument("--burn-in", type=int, default=1000,
                     help="trades per agent before the series is recorded")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--replicas", type=int, default=1)
    sim.add_argument("--initial", default="all-equal-1", choices=INITIAL_TAGS)
    sim.add_argument("--renormalize", default="auto",
                     choices=["auto", "on", "off"])
    sim.add_argument("--sample-stride", type=int, default=None)
    sim.add_argument("--out", help="wealth snapshot path")
    sim.add_argument("--series", help="time series CSV path")
    sim.add_argument("--fit", help="equilibrium family to fit against")
    sim.add_argument("--report", help="FitReport JSON path (with --fit)")
    sim.add_argument("--format", default="csv", choices=["csv", "json"])
    sim.set_defaults(func=cmd_simulate)

    fp = sub.add_parser("fixedpoint", help="Picard-solve the stationary map")
    fp.add_argument("--law", required=True)
    fp.add_argument("--xi-max", type=float, default=10.0)
    fp.add_argument("--nodes", type=int, default=256)
    fp.add_argument("--max-iters", type=int, default=200)
    fp.add_argument("--tol", type=float, default=1e-8)
    fp.add_argument("--out", help="grid CSV path")
    fp.set_defaults(func=cmd_fixedpoint)

    gf = sub.add_parser("gfun", help="evaluate the key function G")
    gf.add_argument("--law", required=True)
    gf.add_argument("--s", type=float, default=None)
    gf.add_argument("--prime", action="store_true",
                    help="print G'(1) instead of G(s)")
    gf.set_defaults(func=cmd_gfun)

    ver = sub.add_parser("verify", help="check analytic fixed points")
    ver.add_argument("--case", help="exp | gamma:A | slanina | dirac")
    ver.add_argument("--all", action="store_true")
    ver.add_argument("--tol", type=float, default=1e-5)
    ver.add_argument("--xi-max", type=float, default=10.0)
    ver.add_argument("--nodes", type=int, default=256)
    ver.set_defaults(func=cmd_verify)
    return parser


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for attr in ("agents", "trades_per_agent", "burn_in", "replicas",
                 "nodes", "max_iters"):
        value = getattr(args, attr.replace("-", "_"), None)
        if value is not None and value < 0:
            raise ValueError("--%s must be non-negative" % attr.replace("_", "-"))
    return args.func(args)


def main(argv=None):
    try:
        return run(argv)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
