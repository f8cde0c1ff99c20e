"""Command-line laboratory: ``irpdf <command> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import icc, mc, pd, thoma, vk
from .fixalg import (FiniteActionSpace, Representation, fixed_space, minimal_projections, tau_M)
from .groups import PERMS, FiniteGroup, close_matrix_group, word_ball
from .perm import parse_perm, parse_perm_list


def _params(args) -> thoma.ThomaParams:
    return thoma.validate_params(args.alpha or [], args.beta or [])


def _add_params(p):
    p.add_argument("--alpha", type=float, nargs="*", default=[], help="alpha parameters, non-increasing")
    p.add_argument("--beta", type=float, nargs="*", default=[], help="beta parameters, non-increasing")


def cmd_thoma_eval(args) -> int:
    print(f"{thoma.tau(_params(args), parse_perm(args.perm)):.12g}")
    return 0


def cmd_vk_sample(args) -> int:
    omega = vk.sample_config(_params(args), args.n, args.seed, index=args.index)
    print(omega)
    return 0


def cmd_vk_expect(args) -> int:
    params = _params(args)
    g = parse_perm(args.perm)
    sampler = mc.VKSampler(params)
    est = mc.estimate(sampler, g, args.samples, args.seed, args.workers)
    exact = thoma.tau(params, g)
    v = mc.compare(est, exact, args.z)
    row = {
        "element": str(g), "estimate": est.mean.real, "stderr": est.stderr,
        "tau": exact, "zscore": v.zscore, "verdict": "pass" if v.passed else "fail",
    }
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(row), lineterminator="\n")
            w.writeheader()
            w.writerow({k: repr(x) if isinstance(x, float) else x for k, x in row.items()})
    print(f"estimate {est.mean.real:.6f}  stderr {est.stderr:.3g}  tau {exact:.12g}  z {v.zscore:.3f}  {row['verdict']}")
    return 0 if v.passed else 1


def _phi_source(args, elements):
    name = args.source
    if name == "regular":
        params = thoma.REGULAR
    elif name == "trivial":
        params = thoma.TRIVIAL
    elif name == "alternating":
        params = thoma.ALTERNATING
    elif name == "thoma":
        params = _params(args)
    elif name == "vk":
        width = max([g.max_support() for g in elements] + [1])
        return vk.averaged_view(_params(args), args.samples, args.seed, width)
    else:
        raise ValueError(f"unknown phi source {name!r}")
    return pd.PDFunctionView(lambda g: thoma.tau(params, g), PERMS)


def cmd_pd_check(args) -> int:
    elements = [parse_perm(s) for s in json.loads(Path(args.elements).read_text())]
    phi = _phi_source(args, elements)
    report = pd.psd_check(pd.gram(phi, elements), args.tol)
    out = report.to_dict()
    if not args.matrix:
        out.pop("matrix")
    print(json.dumps(out, indent=2))
    return 0 if report.psd else 1


def cmd_examples_sphere(args) -> int:
    gens = [mc.parse_matrix(m) for m in json.loads(Path(args.group).read_text())]
    try:
        elements = close_matrix_group(gens)
        kind = "finite"
    except ValueError:
        elements = word_ball(gens, args.radius)
        kind = f"word ball of radius {args.radius}"
    sampler = mc.SphereSampler(args.dim)
    worst, failures = 0.0, 0
    for gamma in elements:
        est = mc.estimate(sampler, gamma, args.samples, args.seed)
        v = mc.compare(est, sampler.target(gamma), args.z)
        worst = max(worst, v.zscore)
        failures += not v.passed
    print(json.dumps({"group": kind, "elements": len(elements), "max_zscore": worst,
                      "failures": failures, "pass": failures == 0}))
    return 0 if failures == 0 else 1


def cmd_fixalg(args) -> int:
    group = FiniteGroup(np.array(json.loads(Path(args.group).read_text())))
    rep = Representation(group, np.array([mc.parse_matrix(m) for m in json.loads(Path(args.rep).read_text())]))
    table = np.array(json.loads(Path(args.action).read_text()))
    space = FiniteActionSpace.uniform(group, table)
    basis = fixed_space(space, rep)
    projs = minimal_projections(basis, seed=args.seed)
    print(json.dumps({
        "dimension": basis.dimension,
        "minimal_projections": len(projs),
        "tau_M": [float(tau_M(p, space.weights).real) for p in projs],
    }))
    return 0


def cmd_icc_witness(args) -> int:
    report = icc.displacing_element(parse_perm_list(args.set))
    print(json.dumps(report.to_dict()))
    return 0 if report.verified else 1


def cmd_run(args) -> int:
    config = mc.ExperimentConfig.load(args.config)
    if args.workers is not None:
        config.workers = args.workers
    report = mc.run_experiment(config)
    print(json.dumps(report.summary))
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="irpdf", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    th = sub.add_parser("thoma", help="Thoma characters").add_subparsers(dest="action", required=True)
    p = th.add_parser("eval", help="evaluate tau_{alpha,beta} at a permutation")
    _add_params(p)
    p.add_argument("--perm", required=True, help='cycle notation, e.g. "(1 2)(3 4 5)" or "e"')
    p.set_defaults(func=cmd_thoma_eval)

    v = sub.add_parser("vk", help="Vershik-Kerov sampling").add_subparsers(dest="action", required=True)
    p = v.add_parser("sample", help="print one sampled configuration")
    _add_params(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--index", type=int, default=0, help="sample index within the seed's streams")
    p.set_defaults(func=cmd_vk_sample)
    p = v.add_parser("expect", help="Monte Carlo estimate of E[phi](g) against tau")
    _add_params(p)
    p.add_argument("--perm", required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--z", type=float, default=4.0)
    p.add_argument("--csv", help="also write the result row to this CSV file")
    p.set_defaults(func=cmd_vk_expect)

    pdp = sub.add_parser("pd", help="positive definiteness").add_subparsers(dest="action", required=True)
    p = pdp.add_parser("check", help="Gram matrix PSD report")
    p.add_argument("--elements", required=True, help="JSON file: list of permutations in cycle notation")
    p.add_argument("--source", default="thoma", choices=["thoma", "regular", "trivial", "alternating", "vk"])
    _add_params(p)
    p.add_argument("--samples", type=int, default=1000, help="configurations averaged for --source vk")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=pd.DEFAULT_TOL)
    p.add_argument("--matrix", action="store_true", help="include the Gram matrix in the output")
    p.set_defaults(func=cmd_pd_check)

    ex = sub.add_parser("examples", help="linear examples").add_subparsers(dest="action", required=True)
    p = ex.add_parser("sphere", help="E[<gamma xi, xi>] against tr(gamma)/n over a matrix group")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--group", required=True, help="JSON file: list of generator matrices with [re, im] entries")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=int, default=3, help="word-ball radius when the group is too large")
    p.add_argument("--z", type=float, default=4.0)
    p.set_defaults(func=cmd_examples_sphere)

    p = sub.add_parser("fixalg", help="fixed-point algebra of a finite model")
    p.add_argument("--group", required=True, help="JSON multiplication table")
    p.add_argument("--rep", required=True, help="JSON list of representation matrices, [re, im] entries")
    p.add_argument("--action", required=True, help="JSON action table: row g lists the images g.w")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fixalg)

    ic = sub.add_parser("icc", help="conjugacy witnesses").add_subparsers(dest="action", required=True)
    p = ic.add_parser("witness", help="displacing element for a finite set")
    p.add_argument("--set", required=True, help='";"-separated permutations, e.g. "(1 2);(1 2 3)"')
    p.set_defaults(func=cmd_icc_witness)

    p = sub.add_parser("run", help="run an experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
