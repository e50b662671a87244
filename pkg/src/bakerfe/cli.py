"""Command-line entry point.

Every command prints one document, JSON by default, with the fields
``command, params, results, residuals, status``. Exit codes:

    0  all residuals within --tol
    1  some residual above --tol
    2  usage error (argparse)
    3  unknown identity or tuple name
    4  invalid parameters
    5  identification failed
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import sys
from typing import Callable

import numpy as np

from .applications import (
    BiggyParams,
    Example2Data,
    example1_report,
    example2_solve,
    example2_tuple,
    example3_construct,
    grid_pairs,
)
from .elliptic import (
    Lattice,
    PoleError,
    degenerate_lattice,
    lattice_from_invariants,
    sigma,
    wp_prime,
    wp_value,
    zeta_fn,
)
from .identify import IdentificationError, identify
from .jacobi import lattice_from_m, phijacs_residual
from .phi import (
    INFINITY,
    PhiParams,
    addition_residual,
    homogeneity_residual,
    phi,
    three_term_residual,
    translation_residual,
    wp_difference_residual,
    zeta_sum_residual,
)
from .symmetry import (
    act,
    centered_tuple,
    jacobi_cn_tuple,
    jacobi_dn_tuple,
    jacobi_sn_tuple,
    max_functional_residual,
    random_element,
    validate,
)

EXIT_OK, EXIT_RESIDUAL, EXIT_USAGE, EXIT_UNKNOWN, EXIT_PARAMS, EXIT_IDENTIFY = 0, 1, 2, 3, 4, 5

IDENTITIES = ("addn", "three-term", "translation", "wps", "zetas", "homogeneity", "phiJacs")
TUPLES = ("canonical", "jacobi-dn", "jacobi-cn", "jacobi-sn")
KERNEL_OPS = ("sigma", "zeta", "wp", "wp_prime", "phi")


class UnknownNameError(LookupError):
    pass


# ---------------------------------------------------------------------------
# serialization


def _encode(obj) -> object:
    if obj is INFINITY:
        return "infinity"
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return [z.real, z.imag]
    return str(obj)


def _dump(obj, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return json.dumps(str(obj))
        return format(obj, ".17g")
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_dump(v, indent + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, indent + 1) for v in obj) + "\n" + "  " * indent + "]"
    return json.dumps(obj)


def to_json(doc: dict) -> str:
    """Deterministic JSON with 17 significant digits for every float."""
    return _dump(_encode(doc))


def _csv(rows: list[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x_re", "x_im", "y_re", "y_im", "residual"])
    for x, y, r in rows:
        w.writerow([format(v, ".17g") for v in (x.real, x.imag, y.real, y.imag, r)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# argument helpers


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def parse_shift(text: str):
    if text.strip().lower() in ("inf", "infinity"):
        return INFINITY
    return parse_complex(text)


def _lattice(args) -> Lattice:
    if getattr(args, "kappa", None) is not None:
        return degenerate_lattice(args.kappa)
    if getattr(args, "m", None) is not None and getattr(args, "g2", None) is None:
        return lattice_from_m(args.m).lattice
    g2 = args.g2 if args.g2 is not None else 1.0
    g3 = args.g3 if args.g3 is not None else 0.0
    return lattice_from_invariants(_real_if_possible(g2), _real_if_possible(g3))


def _real_if_possible(z: complex):
    z = complex(z)
    return z.real if z.imag == 0 else z


def _grid_radius(L: Lattice) -> float:
    return min(0.9, 0.3 * L.shortest_period)


def _grid_values(fn: Callable, pts) -> tuple[list, int]:
    rows, skipped = [], 0
    for x, y in pts:
        try:
            rows.append((x, y, float(fn(x, y))))
        except (PoleError, ZeroDivisionError, ValueError, OverflowError):
            skipped += 1
    return rows, skipped


# ---------------------------------------------------------------------------
# commands


def cmd_kernel(args) -> dict:
    if args.op not in KERNEL_OPS:
        raise UnknownNameError(f"unknown kernel operation {args.op!r}")
    L = _lattice(args)
    xs = args.x or [0.5]
    if args.op == "phi":
        if args.nu is None:
            raise ValueError("--nu is required for op=phi")
        P = PhiParams(args.nu, L)
        fn = lambda x: phi(x, P)
    else:
        fn = {"sigma": lambda x: sigma(x, L), "zeta": lambda x: zeta_fn(x, L),
              "wp": lambda x: wp_value(x, L), "wp_prime": lambda x: wp_prime(x, L)}[args.op]
    return {"results": {"op": args.op, "degeneracy": L.degeneracy,
                        "values": [[x, complex(fn(x))] for x in xs]},
            "residuals": {}}


def _build_tuple(args):
    name = args.tuple
    if name not in TUPLES:
        raise UnknownNameError(f"unknown tuple {name!r}")
    if name.startswith("jacobi"):
        m = 0.5 if args.m is None else args.m
        if not (0.0 < m < 1.0):
            raise ValueError("jacobi tuples need 0 < m < 1")
        return {"jacobi-dn": jacobi_dn_tuple, "jacobi-cn": jacobi_cn_tuple,
                "jacobi-sn": jacobi_sn_tuple}[name](m), None
    L = _lattice(args)
    nu1 = args.nu1 if args.nu1 is not None else 0.6
    nu2 = args.nu2 if args.nu2 is not None else 0.45 + 0.3j
    base_x0 = 0.0 if args.x0 is None else args.x0
    s = centered_tuple(L, nu1, nu2, base_x0)
    g = None
    if args.seed is not None:
        g = random_element(args.seed, args.magnitude)
        s = act(g, s)
    return s, g


def cmd_identify(args) -> dict:
    s, g = _build_tuple(args)
    R = identify(s, args.x0, tol=args.tol, order=args.jet_order)
    res = dict(R.residuals)
    res["gauge_k_consistency"] = R.k_consistency.get("gauge", 0.0)
    results = R.to_dict()
    results["tuple"] = args.tuple
    results["group_element"] = g is not None
    return {"results": results, "residuals": res, "accepted": R.accepted}


def _verify_fn(args, L: Lattice) -> Callable:
    ident = args.identity
    if ident not in IDENTITIES:
        raise UnknownNameError(f"unknown identity {ident!r}; choose from {', '.join(IDENTITIES)}")
    nu = args.nu if args.nu is not None else 0.7
    nu1 = args.nu1 if args.nu1 is not None else 0.4
    nu2 = args.nu2 if args.nu2 is not None else 0.2 + 0.9j
    alpha = args.alpha if args.alpha is not None else 0.3
    if ident == "addn":
        P = PhiParams(nu, L)
        return lambda x, y: addition_residual(x, y, P)
    if ident == "three-term":
        return lambda x, y: three_term_residual(x, y, nu1, nu2, L)
    if ident == "translation":
        return lambda x, y: translation_residual(x + 0.3 * y, alpha, nu, L)
    if ident == "wps":
        return lambda x, y: wp_difference_residual(x, y, L)
    if ident == "zetas":
        return lambda x, y: zeta_sum_residual(x, y, 0.5 * (x - y) + 0.17j, L)
    if ident == "homogeneity":
        return lambda x, y: homogeneity_residual(x + 0.3 * y, nu, L)
    return lambda x, y: phijacs_residual(x + 0.3 * y, L)


def cmd_verify(args) -> dict:
    L = _lattice(args)
    fn = _verify_fn(args, L)
    pts = grid_pairs(args.grid, _grid_radius(L))
    rows, skipped = _grid_values(fn, pts)
    if not rows:
        raise ValueError("every grid point was singular")
    worst = max(r for _, _, r in rows)
    return {"results": {"identity": args.identity, "points": len(rows), "skipped": skipped,
                        "degeneracy": L.degeneracy},
            "residuals": {args.identity: worst}, "rows": rows}


def cmd_example1(args) -> dict:
    m = 0.5 if args.m is None else args.m
    rep = example1_report(m, args.x0 if args.x0 is not None else 0.0, grid=args.grid)
    results = {"m": m, "K": rep["K"], "K_prime": rep["K_prime"], "expected": rep["expected"]}
    residuals = {}
    for name in ("dn", "cn"):
        R = rep[name]["result"]
        results[name] = R.to_dict()
        for k, v in R.residuals.items():
            residuals[f"{name}_{k}"] = v
        residuals[f"{name}_functional"] = rep[name]["functional_residual"]
    residuals["sn_limit"] = rep["sn"]["limit_residual"]
    residuals["sn_functional"] = rep["sn"]["functional_residual"]
    return {"results": results, "residuals": residuals}


def cmd_example2(args) -> dict:
    d = Example2Data(args.x0 if args.x0 is not None else 0.0, args.phi4, args.phi4p,
                     args.phi5, args.phi5p, args.kappa if args.kappa is not None else 1.0)
    sol = example2_solve(d, args.phi1_2x0, grid=7)
    R = identify(example2_tuple(sol), d.x0, tol=args.tol, order=args.jet_order)
    k2_in = complex(d.kappa) ** 2
    k2_out = complex(R.lattice.kappa) ** 2 if R.lattice.kappa is not None else complex("nan")
    scalars = {"N2": sol.N2, "sinh_kappa_nu1": cmath.sinh(complex(d.kappa) * sol.nu1), "nu1": sol.nu1,
               "lambda1": sol.lambda1, "lambda2": sol.lambda2, "exponent": sol.exponent,
               "phi1_2x0": sol.phi1_2x0}
    results = {k: complex(v) for k, v in scalars.items()}
    results["reidentified"] = R.to_dict()
    e = sol.exponent_checks
    residuals = {"functional": sol.residual, "ratio": sol.ratio_residual,
                 "exponent_consistency": max(abs(sol.exponent - v) for v in e),
                 "kappa_squared": abs(k2_out - k2_in) / abs(k2_in),
                 "nu2_infinite": 0.0 if R.nu[1] is INFINITY else 1.0}
    return {"results": results, "residuals": residuals}


def cmd_example3(args) -> dict:
    L = _lattice(args)
    mu1 = args.mu1 if args.mu1 is not None else 1.1
    mu2 = args.mu2 if args.mu2 is not None else 0.5
    mu3 = args.mu3 if args.mu3 is not None else 0.35
    p = BiggyParams(mu1, mu2, mu3, L)
    S = example3_construct(p, grid=args.grid)
    results = {"alpha": p.alpha, "nu1": p.nu1, "nu2": p.nu2, "c": p.c, "gamma": p.gamma,
               "c1": S.c1, "lambda1": S.lambda1, "c2": S.c2, "lambda2": S.lambda2}
    return {"results": results, "residuals": dict(S.residuals)}


def cmd_orbit(args) -> dict:
    L = _lattice(args)
    nu1 = args.nu1 if args.nu1 is not None else 0.6
    nu2 = args.nu2 if args.nu2 is not None else 0.45 + 0.3j
    seed = 0 if args.seed is None else args.seed
    base = centered_tuple(L, nu1, nu2)
    g = random_element(seed, args.magnitude)
    problems = validate(g)
    if problems:
        raise ValueError("group element violates " + ", ".join(problems))
    s = act(g, base)
    pts = grid_pairs(args.grid, _grid_radius(L))
    R0 = identify(base, 0.0, tol=args.tol, order=args.jet_order)
    R = identify(s, 0.0, tol=args.tol, order=args.jet_order)
    scale2 = 1.0 + abs(R0.g2)
    scale3 = 1.0 + abs(R0.g3)
    residuals = {"functional": max_functional_residual(s, pts),
                 "g2_drift": abs(R.g2 - R0.g2) / scale2,
                 "g3_drift": abs(R.g3 - R0.g3) / scale3}
    residuals.update(R.residuals)
    results = {"seed": seed, "inverted": g.invert, "c": g.c, "lambda": g.lam,
               "lambda_p": g.lam_p, "lambda_pp": g.lam_pp, "identified": R.to_dict()}
    return {"results": results, "residuals": residuals, "accepted": R.accepted}


COMMANDS = {"kernel": cmd_kernel, "identify": cmd_identify, "verify": cmd_verify,
            "example1": cmd_example1, "example2": cmd_example2, "example3": cmd_example3,
            "orbit": cmd_orbit}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--jet-order", type=int, default=8)
    common.add_argument("--grid", type=int, default=5)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--g2", type=parse_complex)
    common.add_argument("--g3", type=parse_complex)
    common.add_argument("--kappa", type=parse_complex)
    common.add_argument("--m", type=float)
    common.add_argument("--x0", type=parse_complex)

    p = argparse.ArgumentParser(prog="bakerfe", description="Elliptic functional-equation toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", parents=[common], help="evaluate sigma, zeta, wp or Phi")
    k.add_argument("--op", default="wp")
    k.add_argument("--x", type=parse_complex, action="append")
    k.add_argument("--nu", type=parse_shift)

    i = sub.add_parser("identify", parents=[common], help="identify a solution tuple")
    i.add_argument("--tuple", default="canonical")
    i.add_argument("--nu1", type=parse_complex)
    i.add_argument("--nu2", type=parse_complex)
    i.add_argument("--magnitude", type=float, default=0.5)

    v = sub.add_parser("verify", parents=[common], help="residual grid of a named identity")
    v.add_argument("--identity", required=True)
    v.add_argument("--nu", type=parse_complex)
    v.add_argument("--nu1", type=parse_complex)
    v.add_argument("--nu2", type=parse_complex)
    v.add_argument("--alpha", type=parse_complex)

    sub.add_parser("example1", parents=[common], help="Jacobi addition theorems")

    e2 = sub.add_parser("example2", parents=[common], help="sum-of-products equation")
    e2.add_argument("--phi4", type=parse_complex, default=1.0)
    e2.add_argument("--phi4p", type=parse_complex, default=1.0)
    e2.add_argument("--phi5", type=parse_complex, default=1.0)
    e2.add_argument("--phi5p", type=parse_complex, default=-1.0)
    e2.add_argument("--phi1-2x0", dest="phi1_2x0", type=parse_complex)

    e3 = sub.add_parser("example3", parents=[common], help="seven-function equation")
    for name in ("--mu1", "--mu2", "--mu3"):
        e3.add_argument(name, type=parse_complex)

    o = sub.add_parser("orbit", parents=[common], help="random group element and re-identification")
    o.add_argument("--nu1", type=parse_complex)
    o.add_argument("--nu2", type=parse_complex)
    o.add_argument("--magnitude", type=float, default=0.5)
    return p


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "format") and v is not None}


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.tol <= 0 or args.jet_order < 6 or args.grid < 1:
        print("error: need --tol > 0, --jet-order >= 6, --grid >= 1", file=err)
        return EXIT_PARAMS
    doc = {"command": args.command, "params": _params(args)}
    try:
        body = COMMANDS[args.command](args)
    except UnknownNameError as e:
        print(f"error: {e}", file=err)
        return EXIT_UNKNOWN
    except IdentificationError as e:
        print(f"error: identification failed {e}", file=err)
        return EXIT_IDENTIFY
    except (ValueError, PoleError, ArithmeticError) as e:
        print(f"error: invalid parameters: {e}", file=err)
        return EXIT_PARAMS
    residuals = body["residuals"]
    bad = [k for k, v in residuals.items() if not (v <= args.tol)]
    accepted = body.get("accepted", True)
    code = EXIT_OK if not bad and accepted else EXIT_RESIDUAL
    doc["results"] = body["results"]
    doc["residuals"] = residuals
    doc["status"] = "ok" if code == EXIT_OK else "fail: " + ", ".join(bad or ["not accepted"])
    if args.format == "csv":
        rows = body.get("rows")
        if rows is None:
            rows = [(0j, 0j, float(v)) for v in residuals.values()]
        out.write(_csv(rows))
    else:
        out.write(to_json(doc) + "\n")
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
