"""
Command-line entry point: ``hallforge <subcommand> [flags]``.

Exit status is 0 when the computation passes, 1 on a mathematical failure
(failed certificate, relation that does not vanish, mismatch) and 2 on a
usage error.  Output is sorted so identical flags give identical bytes.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import random
import sys
from fractions import Fraction

from . import hall
from .ffq import CapExceeded, SUPPORTED_PRIMES
from .groupoid import fraction_str, groupoid_to_json
from .quiverrep import class_name, dim_add, find_class, load_quiver
from .simpcomb import MonotoneMap, hcomb_cell, hcomb_map, hcomb_object

USAGE_ERROR, MATH_FAILURE = 2, 1


class UsageError(ValueError):
    pass


# ---------- parsing helpers


def parse_vector(text: str, n: int) -> tuple[int, ...]:
    """'2,1' -> (2, 1); a single integer is repeated over all vertices."""
    try:
        parts = [int(x) for x in str(text).replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise UsageError(f"not a dimension vector: {text!r}") from None
    if len(parts) == 1:
        parts = parts * n
    if len(parts) != n or any(x < 0 for x in parts):
        raise UsageError(f"dimension vector {text!r} does not fit a quiver with {n} vertices")
    return tuple(parts)


def parse_corners(text: str, n: int):
    pieces = text.split(";")
    if len(pieces) != 4:
        raise UsageError("--corners needs four dimension vectors separated by ';'")
    return [parse_vector(x, n) for x in pieces]


def parse_map(text: str, target: int | None) -> MonotoneMap:
    try:
        vals = tuple(int(x) for x in text.split(",") if x != "")
    except ValueError:
        raise UsageError(f"not a list of values: {text!r}") from None
    tgt = target if target is not None else (max(vals) + 1 if vals else 0)
    try:
        return MonotoneMap(len(vals), tgt, vals)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def laurent_str(c: hall.LaurentPoly) -> str:
    if not c.c:
        return "0"
    if set(c.c) == {0}:
        return fraction_str(c.c[0]) if c.c[0].denominator != 1 else str(c.c[0].numerator)
    return " + ".join(
        (fraction_str(x) if e == 0 else f"{fraction_str(x)}*v^{e}") for e, x in sorted(c.c.items())
    )


def _num(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else fraction_str(x)


# ---------- output


def emit(out, report, fmt: str, header=None):
    """JSON with sorted keys, or TSV with a header line; rows must already be sorted."""
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
        return
    out.write("\t".join(header or []) + "\n")
    for row in report:
        out.write("\t".join(str(x) for x in row) + "\n")


# ---------- subcommands (each returns (report, header, status))


def _names(Q, p, labels):
    return [class_name(hall.class_of(Q, p, l)) for l in labels]


def cmd_hall_mul(args, Q):
    x, y = find_class(Q, args.q, args.x), find_class(Q, args.q, args.y)
    a, b = hall.HallElement.basis(x), hall.HallElement.basis(y)
    prod = hall.hall_mul(a, b) if args.twist == "none" else hall.twisted_mul(a, b, args.twist)
    e = hall.TWISTS[args.twist](Q, x.dims, y.dims)
    rows = []  # in label order, like every HallElement
    for zl, c in prod.terms.items():
        g = c.shift(-e)
        rows.append((args.x, args.y, class_name(hall.class_of(Q, args.q, zl)), laurent_str(g), e))
    if args.format == "json":
        return {"x": args.x, "y": args.y, "twist": args.twist, "product": prod.to_json()}, None, 0
    return rows, ["X", "Y", "Z", "g", "v_power"], 0


def cmd_hall_table(args, Q):
    rows = [
        (class_name(hall.class_of(Q, args.q, x)), class_name(hall.class_of(Q, args.q, y)),
         class_name(hall.class_of(Q, args.q, z)), g, e)
        for x, y, z, g, e in hall.hall_table(Q, args.q, args.cap, args.twist)
    ]
    rows.sort()
    if args.format == "json":
        return [dict(zip(("X", "Y", "Z", "g", "v_power"), r)) for r in rows], None, 0
    return rows, ["X", "Y", "Z", "g", "v_power"], 0


def cmd_comul(args, Q):
    z = find_class(Q, args.q, args.z)
    d = hall.comul(hall.HallElement.basis(z))
    if args.twist != "none":
        d = hall.twisted_comul(hall.HallElement.basis(z), args.twist)
    rows = sorted(
        (args.z, *(_names(Q, args.q, key)), laurent_str(c)) for key, c in d.terms.items()
    )
    if args.format == "json":
        return {"z": args.z, "twist": args.twist, "coproduct": d.to_json()}, None, 0
    return rows, ["Z", "X", "Y", "coefficient"], 0


def cmd_green_check(args, Q):
    if args.x and args.y:
        a = hall.HallElement.of(Q, args.q, args.x)
        b = hall.HallElement.of(Q, args.q, args.y)
        surv = hall.green_check(a, b, args.product, args.factors)
        scope = {"x": args.x, "y": args.y}
    else:
        surv = hall.green_conventions(Q, args.q, args.cap, args.product, args.factors)
        scope = {"cap": list(args.cap)}
    surv = sorted(surv)
    status = 0 if surv else MATH_FAILURE
    if args.format == "json":
        return {"quiver": Q.name, "p": args.q, "product": args.product, "factors": args.factors,
                **scope, "survivors": [list(s) for s in surv],
                "verdict": "PASS" if surv else "FAIL"}, None, status
    return [(c1, c2) for c1, c2 in surv], ["c1", "c2"], status


def cmd_green_exponent(args, Q):
    a, b, c, d = parse_corners(args.corners, Q.n)
    value = hall.green_exponent(Q, a, b, c, d)
    total = dim_add(dim_add(a, b), dim_add(c, d))
    surv = sorted(hall.green_conventions(Q, args.q, total, args.product))
    implied = {f"{c1},{c2}": hall.implied_green_power(Q, (c1, c2), a, b, c, d, args.product) for c1, c2 in surv}
    ok = bool(surv) and all(v == value for v in implied.values())
    report = {
        "quiver": Q.name, "corners": [list(x) for x in (a, b, c, d)], "exponent": value,
        "conventions": implied, "verdict": "PASS" if ok else "FAIL",
    }
    if args.format == "json":
        return report, None, 0 if ok else MATH_FAILURE
    rows = [(k, v, value, "PASS" if v == value else "FAIL") for k, v in sorted(implied.items())]
    return rows, ["convention", "implied", "exponent", "verdict"], 0 if ok else MATH_FAILURE


def cmd_serre_check(args, Q):
    ok, elems = hall.serre_check(args.q, Q, None if args.twist == "none" else args.twist)
    residues = {
        f"{i},{j}": [[class_name(hall.class_of(Q, args.q, l)), laurent_str(c)] for l, c in e.terms.items()]
        for (i, j), e in sorted(elems.items())
    }
    status = 0 if ok else MATH_FAILURE
    if args.format == "json":
        return {"quiver": Q.name, "p": args.q, "twist": args.twist, "residues": residues,
                "verdict": "PASS" if ok else "FAIL"}, None, status
    return "PASS" if ok else "FAIL", None, status


def cmd_hall_poly(args, Q):
    primes = tuple(int(x) for x in args.primes.split(","))
    fit = hall.hall_poly_fit(Q, args.x, args.y, args.z, primes, args.holdout)
    report = {
        "x": args.x, "y": args.y, "z": args.z,
        "values": {str(p): _num(v) for p, v in sorted(fit.values.items())},
        "polynomial": str(fit), "coefficients": [_num(c) for c in fit.coeffs],
        "holdout": fit.holdout,
        "predicted": None if fit.predicted is None else _num(fit.predicted),
        "actual": fit.actual, "verdict": "PASS" if fit.ok else "FAIL",
    }
    status = 0 if fit.ok else MATH_FAILURE
    if args.format == "json":
        return report, None, status
    return [(args.x, args.y, args.z, report["polynomial"], report["predicted"], report["actual"], report["verdict"])], \
        ["X", "Y", "Z", "polynomial", "predicted", "actual", "verdict"], status


def cmd_transfer_compare(args, Q):
    r = hall.transfer_mul_compare(Q, args.q, args.cap)
    status = 0 if r.ok else MATH_FAILURE
    report = {
        "quiver": Q.name, "p": args.q, "cap": list(args.cap), "checked": r.checked,
        "rescalings": r.rescalings,
        "rejected": {k: list(v) for k, v in sorted(r.mismatches.items())},
        "verdict": "PASS" if r.ok else "FAIL",
    }
    if args.format == "json":
        return report, None, status
    return [(k, "PASS" if k in r.rescalings else "FAIL") for k in hall.RESCALINGS], ["rescaling", "verdict"], status


def cmd_hcomb_dump(args, Q):
    if args.chain:
        maps = []
        for piece in args.chain.split(";"):
            vals, _, tgt = piece.partition("->")
            maps.append(parse_map(vals, int(tgt) if tgt else None))
        try:
            return hcomb_cell(maps).to_json(), None, 0
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.map is not None:
        f = parse_map(args.map, args.target)
        c = hcomb_map(f)
        return {
            "map": {"source": f.source, "target": f.target, "values": list(f.values)},
            "apex": c.apex.to_json(),
            "left": c.left_source.to_json(),
            "right": c.right_source.to_json(),
            "right_vertex_map": list(c.right_vertex_map),
        }, None, 0
    n = 0 if args.n is None else args.n
    return hcomb_object(n).to_json(), None, 0


def cmd_waldhausen_dump(args, Q):
    from .waldhausen import provider

    gamma = parse_vector(args.gamma, Q.n)
    S = provider(Q, args.q).level(args.n, gamma)
    data = groupoid_to_json(S, with_group=False)
    data.update({"quiver": Q.name, "p": args.q, "n": args.n, "gamma": list(gamma)})
    if args.format == "json":
        return data, None, 0
    rows = [(i, c["object"], c["aut_order"]) for i, c in enumerate(data["classes"])]
    return rows, ["class", "object", "aut_order"], 0


def _provider(args, Q):
    from .waldhausen import Waldhausen, provider

    if not args.corrupt:
        return provider(Q, args.q)
    n, gamma = args.corrupt_level, parse_vector(args.corrupt_gamma or args.dim_cap, Q.n)
    size = len(Waldhausen(Q, args.q).level(n, gamma).classes())
    index = random.Random(args.seed).randrange(size)
    return Waldhausen(Q, args.q, corrupt=(n, gamma, index))


def cmd_two_segal(args, Q):
    from .twosegal import two_segal_report

    reports = two_segal_report(Q, args.q, args.nmax, args.cap, _provider(args, Q))
    ok = all(r.ok for r in reports)
    status = 0 if ok else MATH_FAILURE
    if args.format == "json":
        return {"quiver": Q.name, "p": args.q, "nmax": args.nmax, "cap": list(args.cap),
                "verdict": "PASS" if ok else "FAIL", "reports": [r.to_json() for r in reports]}, None, status
    rows = []
    for r in reports:
        for v in r.verdicts:
            rows.append((str(r.decomposition), ",".join(map(str, v.gamma)), "pass" if v.ok else "fail",
                         v.digest, v.witness))
    return rows, ["decomposition", "gamma", "verdict", "certificate_digest", "witness"], status


def cmd_square_check(args, Q):
    from .twosegal import hgeo_square_check, onto_maps

    W = _provider(args, Q)
    maps = [parse_map(args.map, args.target)] if args.map else [
        f for m in range(2, args.mmax + 1) for n in range(1, m + 1) for f in onto_maps(m, n)
    ]
    verdicts = []
    for f in maps:
        try:
            verdicts.extend(hgeo_square_check(f, Q, args.q, args.cap, W))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    ok = all(v.agree for v in verdicts) and (args.corrupt or all(v.square_ok for v in verdicts))
    status = 0 if ok else MATH_FAILURE
    rows = [
        (",".join(map(str, v.f.values)) + f"->{v.f.target}", ",".join(map(str, v.gamma)),
         "pass" if v.square_ok else "fail", "pass" if v.polygon_ok else "fail",
         str(v.decomposition), "yes" if v.agree else "no", v.witness)
        for v in verdicts
    ]
    header = ["map", "gamma", "square", "polygon", "decomposition", "agree", "witness"]
    if args.format == "json":
        return {"quiver": Q.name, "p": args.q, "verdict": "PASS" if ok else "FAIL",
                "cells": [dict(zip(header, r)) for r in rows]}, None, status
    return rows, header, status


COMMANDS = {
    "hall-mul": (cmd_hall_mul, "tsv"),
    "hall-table": (cmd_hall_table, "tsv"),
    "comul": (cmd_comul, "tsv"),
    "green-check": (cmd_green_check, "json"),
    "green-exponent": (cmd_green_exponent, "json"),
    "serre-check": (cmd_serre_check, "tsv"),
    "hall-poly": (cmd_hall_poly, "json"),
    "transfer-compare": (cmd_transfer_compare, "json"),
    "hcomb-dump": (cmd_hcomb_dump, "json"),
    "waldhausen-dump": (cmd_waldhausen_dump, "json"),
    "two-segal": (cmd_two_segal, "json"),
    "square-check": (cmd_square_check, "tsv"),
}


# ---------- argument parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", help="preset name (A1, A2, ...) or path to a quiver JSON file")
    common.add_argument("--q", type=int, help="prime field size")
    common.add_argument("--dim-cap", help="dimension vector cap, e.g. 2,2 (one number repeats)")
    common.add_argument("--format", choices=("json", "tsv"))
    common.add_argument("--cache-dir", help="directory for cached structure constants")
    common.add_argument("--no-cache", action="store_true", help="recompute everything")
    common.add_argument("--seed", type=int, help="seed for negative controls")
    common.add_argument("--config", help="JSON file with default flag values")

    parser = argparse.ArgumentParser(prog="hallforge", description="Hall algebras of quivers over F_p.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    twist = dict(choices=sorted(hall.TWISTS), help="product twist")

    p = add("hall-mul", "product of two basis classes")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--twist", default="none", **twist)

    p = add("hall-table", "all structure constants up to the cap")
    p.add_argument("--twist", default=hall.DEFAULT_TWIST, **twist)

    p = add("comul", "coproduct of a basis class")
    p.add_argument("--z", required=True)
    p.add_argument("--twist", default="none", **twist)

    p = add("green-check", "surviving twist conventions for Green's compatibility")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--product", default=hall.DEFAULT_TWIST, choices=["hall"] + sorted(hall.TWISTS))
    p.add_argument("--factors", default="inner", choices=("inner", "outer"))

    p = add("green-exponent", "2 d_q2 - 2 d_p2 from point counts, against the surviving convention")
    p.add_argument("--corners", required=True, help="four vectors a;b;c;d, e.g. '1;1;1;1'")
    p.add_argument("--product", default=hall.DEFAULT_TWIST, choices=["hall"] + sorted(hall.TWISTS))

    p = add("serre-check", "quantum Serre relations at v^2 = q")
    p.add_argument("--twist", default=hall.DEFAULT_TWIST, **twist)

    p = add("hall-poly", "fit a Hall polynomial and validate at a held-out prime")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--primes", default="2,3,5")
    p.add_argument("--holdout", type=int, default=7)

    add("transfer-compare", "transfer product against the Hall product")

    p = add("hcomb-dump", "H_comb of an object, a map or a chain of maps")
    p.add_argument("--n", type=int)
    p.add_argument("--map", help="values of a monotone map, e.g. 0,0,1")
    p.add_argument("--target", type=int)
    p.add_argument("--chain", help="maps separated by ';', each 'values->target'")

    p = add("waldhausen-dump", "the groupoid S_n(gamma)")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--gamma", required=True)

    for name, help_ in (("two-segal", "2-Segal report over polygonal decompositions"),
                        ("square-check", "H_comb squares against matching decompositions")):
        p = add(name, help_)
        p.add_argument("--corrupt", action="store_true", help="drop one class of S_n(gamma) (negative control)")
        p.add_argument("--corrupt-level", type=int, default=3)
        p.add_argument("--corrupt-gamma")
        if name == "two-segal":
            p.add_argument("--nmax", type=int, default=4)
        else:
            p.add_argument("--mmax", type=int, default=3)
            p.add_argument("--map")
            p.add_argument("--target", type=int)
    return parser


DEFAULTS = {"quiver": "A2", "q": 2, "dim_cap": None, "format": None, "cache_dir": None, "seed": 0}


def resolve(args):
    """Flags > config file > defaults; HALLFORGE_CACHE stands in for a missing --cache-dir."""
    config = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = {k.replace("-", "_"): v for k, v in json.load(fh).items()}
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
    for key, default in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, config.get(key, default))
    if args.cache_dir is None:
        args.cache_dir = os.environ.get("HALLFORGE_CACHE") or None
    if args.q not in SUPPORTED_PRIMES:
        raise UsageError(f"--q must be one of {SUPPORTED_PRIMES}")
    try:
        Q = load_quiver(str(args.quiver))
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot load quiver {args.quiver!r}: {exc}") from None
    args.cap = parse_vector(args.dim_cap if args.dim_cap is not None else (1 if Q.n > 1 else 2), Q.n)
    if args.format is None:
        args.format = COMMANDS[args.command][1]
    return Q


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        Q = resolve(args)
        hall.set_cache(None if args.no_cache else args.cache_dir, enabled=not args.no_cache)
        report, header, status = COMMANDS[args.command][0](args, Q)
    except (UsageError, CapExceeded) as exc:
        parser.print_usage(sys.stderr)
        print(f"hallforge: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print(f"hallforge: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if isinstance(report, str):
        out.write(report + "\n")
    else:
        emit(out, report, args.format, header)
    return status


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process and capture its standard output."""
    buf = io.StringIO()
    code = main(list(argv), buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
