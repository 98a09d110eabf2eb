"""Command-line front end: experiment configuration, sieve-cache persistence,
and report emission.

Subcommands: sieve, density, katai, tk, meanvalue, dist, weyl, ergodic.
Reports are written atomically; every CSV starts with a ``# config:`` comment
carrying the exact experiment configuration (thread count and output paths
are execution details, not experiment identity, so they are excluded and the
output bytes are identical for any --threads).

Exit codes: 0 success, 2 validation error, 3 numeric-budget violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import equidist, functions, levelsets, meanvalues, orthogonality, reports
from .constants import Constant
from .levelsets import IntervalSetMod1, LevelSet
from .sieve import FactorSieve, SieveRangeError
from .summation import geometric_checkpoints

SCHEMA_VERSION = 1


@dataclass
class ExperimentConfig:
    """Full invocation record; round-trips losslessly through JSON."""

    command: str
    params: dict
    threads: int = 1
    outputs: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_json(obj) -> "ExperimentConfig":
        return ExperimentConfig(
            command=obj["command"], params=obj["params"],
            threads=obj.get("threads", 1), outputs=obj.get("outputs", {}),
            schema_version=obj.get("schema_version", SCHEMA_VERSION),
        )

    def provenance(self) -> dict:
        # what reports embed: stable under --threads and output relocation
        return {"command": self.command, "params": self.params,
                "schema_version": self.schema_version}


def default_cache_dir() -> str:
    env = os.environ.get("KATAILAB_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "katailab")


# -- spec parsers -------------------------------------------------------------


def parse_set(text: str) -> LevelSet:
    """Level-set shorthand: squarefree, kfree:3, big_omega_mod:2,0, abundant,
    deficient, phi_below:0.5, tau_mod:4,1, omega_rot:sqrt2,0,0.5, all, or raw
    JSON."""
    text = text.strip()
    if text.startswith("{"):
        return levelsets.from_json(json.loads(text))
    if text == "all":
        return levelsets.GenericLevel(functions.constant_one(), 1)
    name, _, args = text.partition(":")
    parts = [a for a in args.split(",") if a] if args else []
    try:
        if name == "squarefree":
            return levelsets.Squarefree()
        if name == "abundant":
            return levelsets.Abundant()
        if name == "deficient":
            return levelsets.Deficient()
        if name == "kfree":
            return levelsets.KFree(int(parts[0]))
        if name in ("omega_mod", "big_omega_mod"):
            counted = "big_omega" if name == "big_omega_mod" else "small_omega"
            return levelsets.OmegaMod(int(parts[0]), int(parts[1]), counted)
        if name == "tau_mod":
            return levelsets.TauMod(int(parts[0]), int(parts[1]))
        if name == "phi_below":
            return levelsets.PhiRatioBelow(Constant.parse(parts[0]))
        if name in ("omega_rot", "big_omega_rot"):
            counted = "big_omega" if name == "big_omega_rot" else "small_omega"
            window = IntervalSetMod1([(Constant.parse(parts[1]), Constant.parse(parts[2]), "[)")])
            return levelsets.OmegaRot(Constant.parse(parts[0]), window, counted)
    except (IndexError, ValueError) as err:
        raise ValueError(f"bad level-set spec {text!r}: {err}") from err
    raise ValueError(f"unknown level-set spec {text!r}")


def parse_function(text: str) -> functions.ArithmeticFunction:
    text = text.strip()
    if text.startswith("{"):
        return functions.from_json(json.loads(text))
    name, _, args = text.partition(":")
    parts = [a for a in args.split(",") if a] if args else []
    if name in functions.CATALOG:
        return functions.CATALOG[name]()
    if name == "dirichlet":
        return functions.dirichlet_character(int(parts[0]), [int(a) for a in parts[1:]])
    if name == "archimedean":
        return functions.archimedean(float(parts[0]))
    if name in ("lambda_xi", "kappa_xi", "mu_xi"):
        maker = {"lambda_xi": functions.lambda_xi, "kappa_xi": functions.kappa_xi,
                 "mu_xi": functions.mu_xi}[name]
        return maker(Constant.parse(parts[0]))
    raise ValueError(f"unknown function spec {text!r}")


def parse_hardy(text: str) -> equidist.HardyFunction:
    text = text.strip()
    if text.startswith("{"):
        return equidist.HardyFunction.from_json(json.loads(text))
    name, _, args = text.partition(":")
    parts = [a for a in args.split(",") if a] if args else []
    if name == "power":
        return equidist.power(Constant.parse(parts[0]))
    if name == "poly":
        return equidist.polynomial([Constant.parse(a) for a in parts])
    if name == "logpow":
        return equidist.log_power(Constant.parse(parts[0]))
    if name == "tlogt":
        return equidist.t_log_t()
    if name == "toverlogt":
        return equidist.t_over_log_t()
    if name == "loggamma":
        return equidist.log_gamma()
    raise ValueError(f"unknown hardy spec {text!r}")


def parse_checkpoints(text: str | None, x: int):
    if not text:
        return geometric_checkpoints(x)
    return sorted({int(float(t)) for t in text.split(",")} | {int(x)})


# -- sieve cache --------------------------------------------------------------


def obtain_sieve(args, needed: int) -> FactorSieve:
    path = getattr(args, "cache", None)
    threads = getattr(args, "threads", 1)
    if path and os.path.exists(path):
        sieve = FactorSieve.load(path)
        if sieve.limit < needed:
            raise ValueError(
                f"cache {path} covers n <= {sieve.limit} but the run needs {needed}"
            )
        return sieve
    sieve = FactorSieve.build(needed, threads=threads)
    if path:
        sieve.save(path)
    return sieve


def emit(report, config: ExperimentConfig, args, summary_line: str):
    prov = config.provenance()
    if getattr(args, "csv", None):
        reports.write_csv(report, prov, args.csv)
    if getattr(args, "json_out", None):
        reports.write_json(report, prov, args.json_out)
    print(summary_line)


# -- subcommands ---------------------------------------------------------------


def cmd_sieve(args):
    out = args.out or os.path.join(default_cache_dir(), f"spf_{args.limit}.spf")
    sieve = FactorSieve.build(args.limit, threads=args.threads)
    sieve.save(out)
    FactorSieve.load(out)  # verify magic + spot check before declaring success
    print(f"sieve limit={args.limit} written to {out}")
    return 0


def cmd_density(args):
    spec = parse_set(args.set)
    checkpoints = parse_checkpoints(args.checkpoints, args.x)
    sieve = obtain_sieve(args, args.x)
    rep = levelsets.empirical_density(spec, checkpoints, sieve)
    config = _config("density", args, {
        "set": spec.to_json(), "x": args.x, "checkpoints": checkpoints,
    })
    emit(rep, config, args,
         f"density[{spec.name}] at {args.x}: {rep.last_value:.6f} "
         f"(oscillation last decade {rep.max_oscillation_last_decade:.2e})")
    return 0


def cmd_katai(args):
    theta = Constant.parse(args.theta)
    if not theta.is_irrational and not args.negative_control:
        raise ValueError(
            f"theta = {theta} is rational: the correlation hypothesis fails; "
            f"pass --negative-control to run the falsification mode"
        )
    seq = orthogonality.LinearExponential(theta)
    checkpoints = parse_checkpoints(args.checkpoints, args.x)
    if args.correlation:
        p, q = args.correlation
        rep = orthogonality.katai_correlation(seq, p, q, args.x, checkpoints,
                                              threads=args.threads)
        config = _config("katai", args, {
            "sequence": seq.to_json(), "p": p, "q": q, "x": args.x,
            "checkpoints": checkpoints, "negative_control": args.negative_control,
        })
        emit(rep, config, args,
             f"correlation p={p} q={q} at {args.x}: "
             f"|value| = {abs(rep.correlations[-1]):.3e}")
        return 0
    spec = parse_set(args.set)
    sieve = obtain_sieve(args, args.x)
    rep = orthogonality.orthogonality_sum(spec, seq, args.x, checkpoints, sieve,
                                          threads=args.threads)
    config = _config("katai", args, {
        "set": spec.to_json(), "sequence": seq.to_json(), "x": args.x,
        "checkpoints": checkpoints, "negative_control": args.negative_control,
    })
    emit(rep, config, args,
         f"orthogonality[{spec.name}] at {args.x}: {rep.values[-1]:.3e} "
         f"(slope {rep.slope:+.2f})")
    return 0


def cmd_tk(args):
    xs = sorted({int(float(t)) for t in args.x_list.split(",")}) if args.x_list else [args.x]
    sieve = obtain_sieve(args, max(xs))
    primes = [int(p) for p in sieve.primes(args.pmax)]
    lines = []
    last = None
    for x in xs:
        rep = orthogonality.turan_kubilius_variance(primes, x, sieve)
        lines.append(f"tk x={x}: variance={float(rep.variance):.6g} "
                     f"m={float(rep.m):.6f} ratio={rep.ratio:.4f}")
        last = rep
    config = _config("tk", args, {"pmax": args.pmax, "x_list": xs})
    emit(last, config, args, "\n".join(lines))
    return 0


def cmd_meanvalue(args):
    fn = parse_function(args.function)
    checkpoints = parse_checkpoints(args.checkpoints, args.n)
    sieve = obtain_sieve(args, args.n)
    if args.euler_product:
        rep = meanvalues.mean_with_product(fn, args.n, checkpoints, sieve,
                                           prime_cutoff=args.prime_cutoff,
                                           threads=args.threads)
        tail = (f", product {rep.product.real:.7f}{rep.product.imag:+.1e}i "
                f"(tail <= {rep.tail_bound:.1e}, discrepancy {rep.final_discrepancy:.2e})")
    else:
        rep = meanvalues.empirical_mean(fn, args.n, checkpoints, sieve,
                                        threads=args.threads)
        tail = ""
    config = _config("meanvalue", args, {
        "function": fn.to_json(), "n": args.n, "checkpoints": checkpoints,
        "euler_product": bool(args.euler_product), "prime_cutoff": args.prime_cutoff,
    })
    m = complex(rep.means[-1])
    emit(rep, config, args,
         f"mean[{fn.name}] at {args.n}: {m.real:.7f}{m.imag:+.1e}i{tail}")
    return 0


def cmd_dist(args):
    fn = parse_function(args.function)
    if args.series == "cdf":
        sieve = obtain_sieve(args, args.n)
        values = np.real(fn.values_upto(args.n, sieve)[1:])
        lo, hi, k = (float(t) for t in args.thresholds.split(":"))
        table = meanvalues.empirical_cdf(values, np.linspace(lo, hi, int(k)))
        rep = reports.CdfReport([t for t, _ in table], [y for _, y in table])
        config = _config("dist", args, {
            "function": fn.to_json(), "n": args.n, "series": "cdf",
            "thresholds": args.thresholds,
        })
        emit(rep, config, args,
             f"cdf[{fn.name}] at {args.n}: " +
             " ".join(f"F({t:g})={y:.6f}" for t, y in table[:: max(1, len(table) // 5)]))
        return 0
    sieve = obtain_sieve(args, args.y)
    checkpoints = parse_checkpoints(args.checkpoints, args.y)
    config = _config("dist", args, {
        "function": fn.to_json(), "series": args.series, "y": args.y,
        "checkpoints": checkpoints, "t": args.t, "target": args.target,
        "tolerance": args.tolerance,
    })
    if args.series == "three":
        if fn.kind != "additive":
            raise ValueError("--series three needs an additive function "
                             "(big_omega or small_omega)")
        s1, s2, s3 = meanvalues.three_series(
            lambda p: float(fn.prime_power(p, 1)), args.y, checkpoints, sieve)
        rep = reports.ThreeSeriesReport(
            checkpoints, s1.partial_sums, s2.partial_sums, s3.partial_sums,
            slopes=(s1.slope, s2.slope, s3.slope))
        emit(rep, config, args,
             f"three-series[{fn.name}] at y={args.y}: "
             f"{s1.partial_sums[-1]:.4f} / {s2.partial_sums[-1]:.4f} / "
             f"{s3.partial_sums[-1]:.4f}")
        return 0
    if args.series == "halasz":
        rep = meanvalues.halasz_series(fn, args.t, args.y, checkpoints, sieve)
    else:
        target = complex(*(float(t) for t in args.target.split(","))) if args.target else 1.0
        if target.imag == 0:
            target = target.real
        rep = levelsets.concentration_scan(fn, target, args.y, checkpoints, sieve,
                                           tolerance=args.tolerance)
    emit(rep, config, args,
         f"{rep.name} at y={args.y}: {rep.partial_sums[-1]:.6f} "
         f"(advisory slope {rep.slope:+.3f})")
    return 0


def cmd_weyl(args):
    h = parse_hardy(args.hardy)
    if args.dilate:
        p, q = args.dilate
        rep = equidist.pq_dilation_check(h, p, q, args.n, args.kmax)
        config = _config("weyl", args, {
            "hardy": h.to_json(), "p": p, "q": q, "n": args.n, "kmax": args.kmax,
        })
        emit(rep, config, args,
             f"dilation ({p},{q}) N={rep.n_points}: D*={rep.dstar:.5f} "
             f"max|W|={rep.max_abs_weyl:.5f}")
        return 0
    spec = parse_set(args.set)
    sieve = obtain_sieve(args, args.sieve_limit or 4 * args.n)
    rep = equidist.ud_test(h, spec, args.n, args.kmax, sieve)
    config = _config("weyl", args, {
        "hardy": h.to_json(), "set": spec.to_json(), "n": args.n, "kmax": args.kmax,
    })
    emit(rep, config, args,
         f"ud[{spec.name}] N={rep.n_points}: D*={rep.dstar:.5f} "
         f"max|W|={rep.max_abs_weyl:.5f}")
    return 0


def cmd_ergodic(args):
    spec = parse_set(args.set)
    alpha = Constant.parse(args.alpha)
    sieve = obtain_sieve(args, args.sieve_limit or 4 * args.n)
    if args.mode == "floor":
        h = parse_hardy(args.hardy)
        floors = equidist.floor_sequence(h, spec, args.n, sieve)
        rep = equidist.ergodic_weyl_test(floors, alpha)
        label = f"floor-ergodic[{spec.name}, {h.variant}]"
        params = {"set": spec.to_json(), "alpha": alpha.to_json(),
                  "hardy": h.to_json(), "n": args.n, "mode": "floor"}
    else:
        rep = equidist.total_ergodicity_test(spec, alpha, args.n, sieve,
                                             negative_control=args.negative_control)
        label = f"total-ergodic[{spec.name}]"
        params = {"set": spec.to_json(), "alpha": alpha.to_json(), "n": args.n,
                  "mode": "total", "negative_control": args.negative_control}
    config = _config("ergodic", args, params)
    emit(rep, config, args,
         f"{label} alpha={alpha} N={args.n}: {rep.values[-1]:.3e} "
         f"(slope {rep.slope:+.2f})")
    return 0


def _config(command, args, params) -> ExperimentConfig:
    outputs = {}
    if getattr(args, "csv", None):
        outputs["csv"] = args.csv
    if getattr(args, "json_out", None):
        outputs["json"] = args.json_out
    return ExperimentConfig(command=command, params=params,
                            threads=getattr(args, "threads", 1), outputs=outputs)


def _common(sub, cache=True):
    sub.add_argument("--csv", help="write the report as CSV")
    sub.add_argument("--json", dest="json_out", help="write the report as JSON")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker threads (results are identical for any value)")
    if cache:
        sub.add_argument("--cache", help="sieve cache file (built+saved if missing)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="katailab",
        description="Desk-scale experiments on level sets of multiplicative "
                    "functions, orthogonality criteria, and equidistribution.",
    )
    sp = ap.add_subparsers(dest="command", required=True)

    s = sp.add_parser("sieve", help="build and persist a smallest-prime-factor table")
    s.add_argument("--limit", type=int, required=True)
    s.add_argument("--out", help="cache path (default: cache dir/spf_<limit>.spf)")
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_sieve)

    s = sp.add_parser("density", help="empirical density of a level set")
    s.add_argument("--set", required=True)
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--checkpoints")
    _common(s)
    s.set_defaults(func=cmd_density)

    s = sp.add_parser("katai", help="orthogonality decay / dilated correlations")
    s.add_argument("--set", default="squarefree")
    s.add_argument("--theta", required=True)
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--checkpoints")
    s.add_argument("--correlation", nargs=2, type=int, metavar=("P", "Q"),
                   help="report the (p,q) correlation instead of set decay")
    s.add_argument("--negative-control", action="store_true",
                   help="allow rational theta (hypothesis-failure mode)")
    _common(s)
    s.set_defaults(func=cmd_katai)

    s = sp.add_parser("tk", help="finite-prime-set variance against its budget")
    s.add_argument("--pmax", type=int, required=True)
    s.add_argument("--x", type=int)
    s.add_argument("--x-list", help="comma-separated x values")
    _common(s)
    s.set_defaults(func=cmd_tk)

    s = sp.add_parser("meanvalue", help="empirical mean, optionally vs Euler product")
    s.add_argument("--function", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--checkpoints")
    s.add_argument("--euler-product", action="store_true")
    s.add_argument("--prime-cutoff", type=int, default=100_000)
    _common(s)
    s.set_defaults(func=cmd_meanvalue)

    s = sp.add_parser("dist", help="value distribution and criterion series")
    s.add_argument("--function", required=True)
    s.add_argument("--series", choices=["cdf", "three", "halasz", "concentration"],
                   default="cdf")
    s.add_argument("--n", type=int, default=10**6, help="range for cdf mode")
    s.add_argument("--thresholds", default="0:1:21", help="lo:hi:count grid")
    s.add_argument("--y", type=int, default=10**5, help="prime cutoff for series")
    s.add_argument("--t", type=float, default=0.0, help="frequency for halasz series")
    s.add_argument("--target", help="re[,im] target for concentration scans")
    s.add_argument("--tolerance", type=float, default=0.0)
    s.add_argument("--checkpoints")
    _common(s)
    s.set_defaults(func=cmd_dist)

    s = sp.add_parser("weyl", help="equidistribution report along a level set")
    s.add_argument("--set", default="squarefree")
    s.add_argument("--hardy", required=True)
    s.add_argument("--n", type=int, required=True, help="number of points")
    s.add_argument("--kmax", type=int, default=5)
    s.add_argument("--dilate", nargs=2, type=int, metavar=("P", "Q"))
    s.add_argument("--sieve-limit", type=int)
    _common(s)
    s.set_defaults(func=cmd_weyl)

    s = sp.add_parser("ergodic", help="ergodic-sequence Weyl averages")
    s.add_argument("--set", required=True)
    s.add_argument("--alpha", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--mode", choices=["total", "floor"], default="total")
    s.add_argument("--hardy", default="power:1.5")
    s.add_argument("--sieve-limit", type=int)
    s.add_argument("--negative-control", action="store_true")
    _common(s)
    s.set_defaults(func=cmd_ergodic)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as err:
        return 2 if err.code not in (0, None) else 0
    try:
        return args.func(args)
    except SieveRangeError as err:
        print(f"numeric budget violated: {err}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
