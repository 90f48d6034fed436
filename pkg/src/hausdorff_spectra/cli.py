"""Command-line interface: one result document per invocation."""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import arithmetic, operator, spectra
from .cases import CASE_SPECS, CASES, run_case_study
from .errors import HausdorffSpectraError
from .specfile import ResultDocument, load_spec, spec_to_dict
from .symbols import SymbolField, norm_bound


def _auto_real(text):
    if text == "auto":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a real number or 'auto', got {text!r}") from None


def _angles(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from None


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="spec file (JSON, schema_version 1)")
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--order", type=int, default=None, help="truncation order for generator specs")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--span", type=_auto_real, default=None, metavar="REAL|auto")
    grid.add_argument("--step", type=_auto_real, default=None, metavar="REAL|auto")

    parser = argparse.ArgumentParser(prog="hausdorff-spectra",
                                     description="Spectra and norms of discrete Hausdorff operators.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symbol", parents=[common], help="evaluate the symbols at one frequency")
    p.add_argument("--s", type=_floats, required=True, help="frequency, comma-separated")

    p = sub.add_parser("spectrum", parents=[common, grid], help="approximate the spectrum")
    p.add_argument("--method", choices=["grid", "torus", "analytic"], default="grid")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--bound", type=int, default=10)

    p = sub.add_parser("norm", parents=[common, grid], help="N_p bound and the symbol norm")
    p.add_argument("--p", type=float, default=2.0)

    p = sub.add_parser("relations", parents=[common], help="integer relations among log|a(k)|")
    p.add_argument("--bound", type=int, default=10)

    p = sub.add_parser("invariance", parents=[common, grid], help="rotational invariance check")
    p.add_argument("--method", choices=["grid", "torus", "analytic"], default="torus")
    p.add_argument("--angles", type=_angles, default=None)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("truncate", parents=[common], help="tail bound for successive truncations")
    p.add_argument("--orders", type=lambda t: [int(v) for v in t.split(",")], default=[5, 6, 7, 8, 9, 10])
    p.add_argument("--samples", type=int, default=200_000)

    p = sub.add_parser("apply", parents=[common], help="apply H to a Gaussian; norm ratios")
    p.add_argument("--x", type=_floats, action="append", default=None, help="evaluation point (repeatable)")
    p.add_argument("--center", type=_floats, default=None)
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--count", type=int, default=20, help="random Gaussians for the norm ratio")

    p = sub.add_parser("sharpness", parents=[common], help="sharpness ratio for A(k) = 1/k")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--t", type=float, default=1e-6)
    p.add_argument("--coefficients", type=_floats, default=[1.0, 1.0], help="c(1), c(2), ...")

    p = sub.add_parser("case", parents=[common], help="run a built-in case study")
    p.add_argument("name", choices=sorted(CASES))
    return parser


def _load(args, required=True):
    if args.spec is None:
        if required:
            raise HausdorffSpectraError("--spec is required for this command")
        return None, ""
    doc = load_spec(args.spec)
    return doc, doc.digest


def _approx(spec, args):
    if args.method == "grid":
        return spectra.spectrum_frequency_grid(spec, args.span, args.step)
    if args.method == "torus":
        _, rel = arithmetic.family_independence(spec, bound=getattr(args, "bound", 10))
        return spectra.spectrum_torus(spec, rel, samples=args.samples, seed=args.seed)
    fld = SymbolField(spec)
    if spectra.symbol_period(fld) is not None or not np.any(fld.log_rates):
        return spectra.analytic_curve(fld)
    return spectra.annulus_analytic(spec)


def cmd_symbol(args):
    doc, digest = _load(args)
    spec = doc.operator(args.order)
    ev = SymbolField(spec).evaluate(np.asarray(args.s, dtype=float))
    return ResultDocument("symbol", {"s": args.s}, ev.to_dict(), digest, args.seed)


def cmd_spectrum(args):
    doc, digest = _load(args)
    spec = doc.operator(args.order)
    approx = _approx(spec, args)
    params = {"method": args.method, "span": args.span if args.span is not None else "auto",
              "step": args.step if args.step is not None else "auto"}
    if args.method == "torus":
        params["samples"] = args.samples
    return ResultDocument("spectrum", params, approx.to_dict(), digest, args.seed)


def cmd_norm(args):
    doc, digest = _load(args)
    spec = doc.operator(args.order)
    out = {"n_p": norm_bound(spec, args.p), "p": args.p}
    if args.p == 2:
        out["symbol_norm_sup"] = spectra.symbol_norm_sup(spec, args.span, args.step)
    return ResultDocument("norm", {"p": args.p}, out, digest, args.seed)


def cmd_relations(args):
    doc, digest = _load(args)
    spec = doc.operator(args.order)
    nu, rep = arithmetic.family_independence(spec, bound=args.bound)
    return ResultDocument("relations", {"bound": args.bound}, {"nu": nu, **rep.to_dict()}, digest, args.seed)


def cmd_invariance(args):
    doc, digest = _load(args)
    spec = doc.operator(args.order)
    approx = _approx(spec, args)
    angles = args.angles
    if angles is None:
        angles = np.random.default_rng(args.seed).uniform(0, 2 * math.pi, 8).tolist()
    verdict = spectra.rotational_invariance_check(approx, angles, args.tol)
    out = {"verdict": "Pass" if verdict.passed else "Fail", **verdict.to_dict(),
           "resolution": approx.resolution}
    return ResultDocument("invariance", {"method": args.method, "angles": angles}, out, digest, args.seed)


def cmd_truncate(args):
    doc, digest = _load(args)
    steps = spectra.truncation_convergence(doc.as_family(), args.orders, args.samples, args.seed)
    out = {"steps": [s.to_dict() for s in steps], "all_within_bound": all(s.within_bound for s in steps)}
    return ResultDocument("truncate", {"orders": args.orders, "samples": args.samples}, out, digest,
                          args.seed)


def cmd_apply(args):
    doc, digest = _load(args)
    spec = doc.operator(args.order)
    d = spec.dimension
    center = args.center if args.center is not None else [0.0] * d
    f = operator.gaussian(center, args.width)
    xs = np.array(args.x if args.x else [[0.0] * d], dtype=float).reshape(-1, d)
    values = operator.apply(spec, f, xs)
    funcs = [f] + operator.random_gaussians(d, args.count, args.seed)
    rep = operator.norm_ratio_experiment(spec, funcs)
    out = {"x": xs, "values": np.atleast_1d(values), "norm_ratio": rep.to_dict()}
    return ResultDocument("apply", {"center": center, "width": args.width, "count": args.count}, out,
                          digest, args.seed)


def cmd_sharpness(args):
    coeffs = {k + 1: c for k, c in enumerate(args.coefficients) if c != 0}
    rep = operator.sharpness_experiment(args.p, coeffs, args.t)
    return ResultDocument("sharpness", {"p": args.p, "t": args.t, "coefficients": args.coefficients},
                          rep.to_dict(), "", args.seed)


def cmd_case(args):
    doc = run_case_study(args.name, seed=args.seed)
    doc.parameters["spec"] = spec_to_dict(CASE_SPECS[args.name]())
    return doc


COMMANDS = {
    "symbol": cmd_symbol, "spectrum": cmd_spectrum, "norm": cmd_norm, "relations": cmd_relations,
    "invariance": cmd_invariance, "truncate": cmd_truncate, "apply": cmd_apply,
    "sharpness": cmd_sharpness, "case": cmd_case,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = COMMANDS[args.command](args)
        text = doc.to_csv() if args.format == "csv" else doc.to_json()
    except (HausdorffSpectraError, KeyError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if doc.passed is not False else 1
