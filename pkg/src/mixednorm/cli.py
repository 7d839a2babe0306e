"""Command-line frontend: compute norms and K-profiles, run the verify suite.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error.
All numbers print with 12 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .stepcore import DomainError, load_stepfn, rearrangement
from .rispace import UnsupportedSpaceError, parse_space, ri_norm
from .mixed import MixedSpaceSpec, load_gridfn, mixed_norm
from .kfun import (
    interp_norm,
    k_exact,
    mixed_couple,
    ri_couple,
    sample_profile,
)
from .embed import fournier_check, optimal_domain_norm, optimal_range_norm
from .verify import SuiteConfig, report_json, run_all


def _fmt(*values):
    return " ".join(f"{v:.12g}" for v in values)


def _load_function(args):
    """(object, couple-kind) from --step or --grid."""
    if getattr(args, "step", None):
        return load_stepfn(args.step), "ri"
    if getattr(args, "grid", None):
        return load_gridfn(args.grid), "mixed"
    raise DomainError("provide --step or --grid")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mixednorm",
        description="exact norms, K-functionals and embedding checks for "
                    "step and grid functions on the unit cube")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="r.i. norm of a step function")
    p.add_argument("--space", required=True)
    p.add_argument("--step", required=True)

    p = sub.add_parser("mixed-norm", help="symmetric mixed norm of a grid function")
    p.add_argument("--X", required=True)
    p.add_argument("--Y", required=True)
    p.add_argument("--grid", required=True)

    p = sub.add_parser("kfun", help="K-functional against Linf (value or CSV profile)")
    p.add_argument("--X", required=True)
    p.add_argument("--step")
    p.add_argument("--grid")
    p.add_argument("--t", type=float)
    p.add_argument("--out")

    p = sub.add_parser("interp", help="real-interpolation norm of the couple")
    p.add_argument("--X", required=True)
    p.add_argument("--step")
    p.add_argument("--grid")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--q", type=_parse_q, required=True)

    p = sub.add_parser("opt-range", help="norm in the optimal range construction")
    p.add_argument("--space", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--step", required=True)

    p = sub.add_parser("opt-domain", help="norm in the optimal domain construction")
    p.add_argument("--space", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--step", required=True)

    p = sub.add_parser("fournier", help="Lorentz vs mixed norm with the n' bound")
    p.add_argument("--grid", required=True)

    p = sub.add_parser("verify", help="run all property suites, emit JSON report")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--quick", action="store_true",
                   help="reduced sample counts (smoke run)")

    return parser


def _parse_q(text):
    return math.inf if text in ("inf", "oo") else float(text)


def _cmd_norm(args):
    X = parse_space(args.space)
    f = load_stepfn(args.step)
    print(_fmt(ri_norm(X, f)))
    return 0


def _cmd_mixed_norm(args):
    spec = MixedSpaceSpec(parse_space(args.X), parse_space(args.Y))
    f = load_gridfn(args.grid)
    print(_fmt(mixed_norm(f, spec)))
    return 0


def _couple_for(args, kind):
    X = parse_space(args.X)
    return ri_couple(X) if kind == "ri" else mixed_couple(X)


def _cmd_kfun(args):
    f, kind = _load_function(args)
    couple = _couple_for(args, kind)
    if args.t is not None:
        K, _ = k_exact(f, args.t, couple)
        print(_fmt(K))
        return 0
    ts = np.geomspace(1e-3, 2.0, 20)
    profile = sample_profile(f, couple, [float(t) for t in ts])
    csv = profile.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv)
    else:
        sys.stdout.write(csv)
    return 0


def _cmd_interp(args):
    f, kind = _load_function(args)
    couple = _couple_for(args, kind)
    print(_fmt(interp_norm(f, couple, args.theta, args.q)))
    return 0


def _cmd_opt_range(args):
    X = parse_space(args.space)
    f = rearrangement(load_stepfn(args.step))
    print(_fmt(optimal_range_norm(X, args.n, f)))
    return 0


def _cmd_opt_domain(args):
    Z = parse_space(args.space)
    f = rearrangement(load_stepfn(args.step))
    res = optimal_domain_norm(Z, args.n, f)
    line = _fmt(res.value, res.subst_value, res.ratio)
    if not res.equivalence_reliable:
        line += " unreliable"
    print(line)
    return 0


def _cmd_fournier(args):
    f = load_gridfn(args.grid)
    lor, mixed, ratio = fournier_check(f)
    print(_fmt(lor, mixed, ratio))
    return 0


def _cmd_verify(args):
    kwargs = {}
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.quick:
        kwargs.update(geometry_samples=60, distribution_grids=40, k_grids=12,
                      k_stepfns=40, interp_grids=6, fubini_grids=30,
                      axiom_samples=40)
    cfg = SuiteConfig(**kwargs)
    report = run_all(cfg)
    text = report_json(report)
    if args.out:
        os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["passed"] else 1


_COMMANDS = {
    "norm": _cmd_norm,
    "mixed-norm": _cmd_mixed_norm,
    "kfun": _cmd_kfun,
    "interp": _cmd_interp,
    "opt-range": _cmd_opt_range,
    "opt-domain": _cmd_opt_domain,
    "fournier": _cmd_fournier,
    "verify": _cmd_verify,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (DomainError, UnsupportedSpaceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
