"""Command-line front end.

Every subcommand prints JSON or CSV on stdout.  Options may also come from a
JSON file given with ``--config``; explicit flags win over the file.
Exit codes: 0 success, 2 parameter error, 3 regime error, 4 accuracy error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict
from fractions import Fraction

import mpmath

from . import experiments, painleve, regimes, saddles, sampler
from ._modular import configure_threads
from .errors import (AccuracyError, CapacityError, ParameterError, RegimeError,
                     StructureError, UntileableError)
from .exact_count import count
from .regions import FULL, VARIANTS, RegionSpec, as_weight

EXIT_OK, EXIT_PARAMETER, EXIT_REGIME, EXIT_ACCURACY = 0, 2, 3, 4


def _clean(obj):
    """JSON-ready copy: floats at 15 significant digits, rationals as ``num/den``."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (mpmath.mpf, mpmath.mpc)) or hasattr(obj, "item"):
        obj = complex(obj) if isinstance(obj, mpmath.mpc) else float(obj)
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(format(obj, ".15g"))
    return obj


def _emit(payload, out=None):
    out = out or sys.stdout
    out.write(json.dumps(_clean(payload), indent=2) + "\n")


def _rational(text: str) -> Fraction:
    try:
        return as_weight(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"cannot read weight {text!r}: {exc}", "rational p/q in (0,1]")


# subcommands ------------------------------------------------------------------

def cmd_exact(args):
    a = _rational(args.a)
    if args.variant == FULL:
        spec = RegionSpec.full(args.N)
    else:
        spec = RegionSpec(args.N, args.m, args.k, args.eps, args.variant)
    t0 = time.perf_counter()
    res = count(spec, a, args.method)
    elapsed = (time.perf_counter() - t0) * 1000
    _emit({"value_num": str(res.value.numerator), "value_den": str(res.value.denominator),
           "log10": res.log10 if res.tileable else None, "method": res.method,
           "elapsed_ms": elapsed, "region": spec.to_dict()})


def cmd_saddle(args):
    sd = saddles.saddle_data(args.mu, args.a)
    payload = {"saddle": asdict(sd)}
    if args.kappa is not None:
        if 0 < args.kappa < sd.kappa2:
            z = saddles.solve_z0(args.mu, args.kappa, args.a, args.eps)
            payload["liquid"] = {
                "z0": z.z0, "gamma": z.gamma, "abs_z0": z.abs_z0,
                "abs_z0_plus_a": z.abs_z0_plus_a, "abs_z0_minus_inva": z.abs_z0_minus_inva,
                "residuals": list(z.residuals), "closure_residual": z.closure_residual,
            }
        else:
            payload["liquid"] = None
            payload["note"] = f"kappa outside the liquid range (0, {sd.kappa2:.15g})"
    _emit(payload)


def cmd_asym(args):
    N, m, k, eps, a = args.N, args.m, args.k, args.eps, args.a
    regime = args.regime
    if regime == "auto":
        est = regimes.regime_dispatch(N, m, k, eps, a)
    elif regime == "1":
        est = regimes.theorem1_logF(N, m, k - 1, eps, a)
    elif regime == "2":
        est = regimes.theorem2_logF(N, m, k - 1, eps, a)
    elif regime == "3":
        est = regimes.theorem3_logF(N, m, k, eps, a)
    else:
        est = regimes.theorem4_logF(N, m, k, a)
    payload = est.to_dict()
    if args.exact:
        ex = count(RegionSpec.lshape(N, m, k, eps), as_weight(a))
        payload["exact_logF"] = float(ex.log_value)
        payload["residual"] = float(ex.log_value) - est.logF_pred
    _emit(payload)


def cmd_identities(args):
    _emit(regimes.identity_checks(args.mu, args.a, args.eps, tol=args.tol))


def cmd_tw(args):
    if args.table:
        s0, s1, step = args.table
        if step <= 0 or s1 < s0:
            raise ParameterError("table needs s0 <= s1 and step > 0", "s0 <= s1, step > 0")
        rows = []
        n = int(math.floor((s1 - s0) / step + 1e-9)) + 1
        for i in range(n):
            s = s0 + i * step
            val, src = painleve.log_ftw_with_source(s)
            rows.append({"s": s, "logFTW": val, "FTW": math.exp(val), "source": src})
        experiments.write_csv(rows, ("s", "logFTW", "FTW", "source"), sys.stdout)
        return
    if args.s is None:
        raise ParameterError("tw needs --s or --table", "--s or --table")
    val, src = painleve.log_ftw_with_source(args.s)
    _emit({"s": args.s, "logFTW": val, "FTW": math.exp(val), "source": src})


def _write_rows(rows, header, path):
    if path:
        with open(path, "w", newline="") as fh:
            experiments.write_csv(rows, header, fh)
    else:
        experiments.write_csv(rows, header, sys.stdout)


def cmd_figure3(args):
    cfg = experiments.figure3_config(args.which, args.N_min, args.N_max, a=args.a,
                                     max_N=args.max_N)
    rows = experiments.run_figure3(cfg)
    _write_rows(rows, experiments.FIGURE3_HEADER, args.out)


def cmd_sweep(args):
    cfg = experiments.ExperimentConfig.from_dict(dict(
        command="sweep", N_values=tuple(args.N), a=args.a, epsilons=tuple(args.eps),
        mu=args.mu, k=None, kappa=args.kappa,
        m_values=tuple(args.m) if args.m else None,
        k_values=tuple(args.k) if args.k else None, method=args.method))
    rows = experiments.run_sweep(cfg)
    if args.json:
        _emit(rows)
    else:
        _write_rows(rows, experiments.SWEEP_HEADER, args.out)


def cmd_sample(args):
    t = sampler.sample_tiling(args.N, _rational(args.a), args.seed)
    payload = {"N": t.N, "seed": t.seed, "dominoes": len(t.dominoes),
               "vertical_count": t.vertical_count}
    if args.svg:
        sampler.render_svg(t, args.svg)
        payload["svg"] = args.svg
    _emit(payload)


def cmd_mc(args):
    est, err = sampler.estimate_frozen_probability(args.N, args.m, args.k, args.eps,
                                                   _rational(args.a), args.samples, args.seed)
    _emit({"estimate": est, "stderr": err, "samples": args.samples})


# parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aztec-lshape",
                                description="Domino tilings of L-shaped Aztec diamonds.")
    p.add_argument("--config", help="JSON file with option values")
    sub = p.add_subparsers(dest="command", required=True)

    def region_args(sp, k_default=1):
        sp.add_argument("--N", type=int, required=False)
        sp.add_argument("--m", type=int, default=0)
        sp.add_argument("--k", type=int, default=k_default)
        sp.add_argument("--eps", type=int, default=1, choices=(0, 1))

    sp = sub.add_parser("exact", help="exact weighted tiling count")
    region_args(sp)
    sp.add_argument("--a", default="1", help="rational weight p/q in (0,1]")
    sp.add_argument("--variant", default="reduced", choices=VARIANTS)
    sp.add_argument("--method", default="auto", choices=("auto", "enumerate", "determinant"))
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("saddle", help="saddle points and edge constants")
    sp.add_argument("--mu", type=float)
    sp.add_argument("--kappa", type=float)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--eps", type=int, default=1, choices=(0, 1))
    sp.set_defaults(func=cmd_saddle)

    sp = sub.add_parser("asym", help="asymptotic prediction of log F_N^{m,k}")
    region_args(sp)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--regime", default="auto", choices=("auto", "1", "2", "3", "4"))
    sp.add_argument("--exact", action="store_true", help="also compute the exact value")
    sp.set_defaults(func=cmd_asym)

    sp = sub.add_parser("identities", help="integral identities of G, H, F")
    sp.add_argument("--mu", type=float)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--eps", type=int, default=1, choices=(0, 1))
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.set_defaults(func=cmd_identities)

    sp = sub.add_parser("tw", help="Tracy-Widom distribution")
    sp.add_argument("--s", type=float)
    sp.add_argument("--table", type=float, nargs=3, metavar=("S0", "S1", "STEP"))
    sp.set_defaults(func=cmd_tw)

    sp = sub.add_parser("figure3", help="residual study against Theorems 1 and 2 (CSV)")
    sp.add_argument("--which", default="left", choices=experiments.FIGURE3_PANELS)
    sp.add_argument("--N-min", dest="N_min", type=int, default=12)
    sp.add_argument("--N-max", dest="N_max", type=int, default=40)
    sp.add_argument("--a", default="0.7845")
    sp.add_argument("--max-N", dest="max_N", type=int, default=experiments.FEASIBLE_N)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_figure3)

    sp = sub.add_parser("sweep", help="exact counts against regime_dispatch (CSV)")
    sp.add_argument("--N", type=int, nargs="+")
    sp.add_argument("--m", type=int, nargs="*")
    sp.add_argument("--k", type=int, nargs="*")
    sp.add_argument("--mu", type=float)
    sp.add_argument("--kappa", type=float)
    sp.add_argument("--eps", type=int, nargs="+", default=[1])
    sp.add_argument("--a", default="1")
    sp.add_argument("--method", default="auto", choices=("auto", "enumerate", "determinant"))
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("sample", help="random weighted tiling of A_N")
    sp.add_argument("--N", type=int)
    sp.add_argument("--a", default="1")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--svg")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("mc", help="Monte-Carlo frozen-corner probability")
    region_args(sp)
    sp.add_argument("--a", default="1")
    sp.add_argument("--samples", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_mc)
    return p


def _required(args):
    needed = {"exact": ["N"], "asym": ["N"], "mc": ["N"], "sample": ["N"], "sweep": ["N"],
              "saddle": ["mu"], "identities": ["mu"]}
    for name in needed.get(args.command, []):
        if getattr(args, name, None) is None:
            raise ParameterError(f"--{name} is required for {args.command}", f"--{name}")


def parse(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise ParameterError("config file must hold a JSON object", "JSON object")
        # file values become defaults, explicit flags still override them
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**{k: v for k, v in cfg.items() if k != "command"})
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    try:
        configure_threads()
        args = parse(argv)
        _required(args)
        args.func(args)
    except (ParameterError, CapacityError, StructureError, UntileableError) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
