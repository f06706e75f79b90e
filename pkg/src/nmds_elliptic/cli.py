"""Batch command line: build, complete, reproduce, export, field-info."""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys

from . import catalog, completeness, suites
from . import geometry as geo
from .curves import hesse, weierstrass
from .errors import DomainError, ResourceCap
from .field import GF, field_of_order
from .lift import lift_curve
from .tracks import parity_check_matrix

EXIT_OK, EXIT_CLAIM, EXIT_USAGE, EXIT_DOMAIN, EXIT_CAP = 0, 1, 2, 3, 4

_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d*)\*?sqrt\(?(\d+)\)?|(\d+))")


class UsageError(Exception):
    pass


def parse_element(F: GF, text: str, other_root: bool = False) -> int:
    """Evaluate sums like ``3``, ``-1``, ``1+sqrt3`` or ``2-3*sqrt(5)`` in F."""
    text = text.strip()
    pos, total = 0, 0
    if not text:
        raise UsageError("empty field element")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse field element {text!r}")
        sign, coef, rad, plain = m.groups()
        if plain is not None:
            val = F.from_int(int(plain))
        else:
            root = F.sqrt(F.from_int(int(rad)), other_root=other_root)
            val = F.mul(F.from_int(int(coef)) if coef else 1, root)
        total = F.sub(total, val) if sign == "-" else F.add(total, val)
        pos = m.end()
    return int(total)


def _assignments(items, names) -> dict[str, str]:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or key not in names:
            raise UsageError(f"expected {'/'.join(n + '=' for n in names)}, got {item!r}")
        out[key] = val
    missing = [n for n in names if n not in out]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")
    return out


def curve_from_args(args):
    F = field_of_order(args.q)
    if args.weierstrass is not None:
        kv = _assignments(args.weierstrass, ("a", "b"))
        return weierstrass(F, parse_element(F, kv["a"], args.other_root),
                           parse_element(F, kv["b"], args.other_root))
    if args.hesse is not None:
        kv = _assignments(args.hesse, ("c",))
        return hesse(F, parse_element(F, kv["c"], args.other_root))
    raise UsageError("give --weierstrass a=.. b=.. or --hesse c=..")


def _emit(record: catalog.CatalogRecord, args) -> None:
    print(record.to_json(), flush=True)
    if getattr(args, "catalog", None):
        catalog.append(args.catalog, [record])


# -- verbs -----------------------------------------------------------------------
def cmd_build(args) -> int:
    E = curve_from_args(args)
    track = suites.track_summary(E, args.seed, args.mode)
    if args.export:
        geo.write_matrix(args.export, lift_curve(E).generator_matrix(), E.field.q)
    _emit(suites.make_record(E, args.seed, track=track), args)
    return EXIT_OK if track["valid"] else EXIT_CLAIM


def cmd_complete(args) -> int:
    if args.all_curves:
        curves = list(suites.weierstrass_curves(field_of_order(args.q), all_curves=True))
    else:
        curves = [curve_from_args(args)]
    for E in curves:
        v = suites.completeness_record(E, args.seed, args.partitions, args.pruning == "on",
                                       args.workers, args.cap_scan)
        _emit(suites.make_record(E, args.seed, verdict=v), args)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    def show(c):
        print(c.line(), flush=True)

    kw = dict(seed=args.seed, emit=show)
    if args.suite == "small-q":
        kw.update(partitions=args.partitions, workers=args.workers, all_curves=args.all_curves)
    elif args.suite == "large-q":
        kw.update(partitions=args.partitions, workers=args.workers)
    else:
        kw.update(all_curves=True)
    claims, records = suites.SUITES[args.suite](**kw)
    if args.catalog:
        catalog.append(args.catalog, records)
    failed = sum(not c.passed for c in claims)
    print(f"{args.suite}: {len(claims) - failed}/{len(claims)} claims pass")
    return EXIT_CLAIM if failed else EXIT_OK


def cmd_export(args) -> int:
    E = curve_from_args(args)
    track = lift_curve(E)
    if args.what == "generator":
        M = track.generator_matrix()
    elif args.what == "parity":
        M = parity_check_matrix(track)
    else:
        M = completeness.extension_matrix(track).G
    text = geo.format_matrix(M, E.field.q)
    if args.export:
        with open(args.export, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_field_info(args) -> int:
    F = field_of_order(args.q)
    info = {"q": F.q, **F.describe(), "nonresidue": F.nonresidue,
            "cube_roots_of_unity": [int(w) for w in F.cube_roots_of_unity()],
            "sqrt3": None}
    if F.is_square(F.from_int(3)):
        info["sqrt3"] = [int(F.sqrt(3)), int(F.sqrt(3, other_root=True))]
    print(json.dumps(info, sort_keys=True))
    return EXIT_OK


# -- parser ----------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nmds", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="verb", required=True)

    def curve_opts(sp, required=True):
        sp.add_argument("--q", type=int, required=True)
        g = sp.add_mutually_exclusive_group(required=required)
        g.add_argument("--weierstrass", nargs=2, metavar="X=V", help="a=.. b=..")
        g.add_argument("--hesse", nargs=1, metavar="c=V", help="e.g. c=1+sqrt3")
        sp.add_argument("--other-root", action="store_true",
                        help="use the other square root when parsing sqrt terms")
        return g

    def run_opts(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--partitions", type=int, default=1)
        sp.add_argument("--workers", type=int, default=None,
                        help=f"worker threads (default: ${completeness.WORKERS_ENV} or all cores)")
        sp.add_argument("--catalog", metavar="PATH")

    b = sub.add_parser("build", help="build, lift and verify a track")
    curve_opts(b)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--mode", choices=("exhaustive", "sampled"), default=None)
    b.add_argument("--export", metavar="PATH", help="write the generator matrix")
    b.add_argument("--catalog", metavar="PATH")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("complete", help="decide completeness of a track")
    g = curve_opts(c, required=False)
    g.add_argument("--all-curves", action="store_true")
    run_opts(c)
    c.add_argument("--pruning", choices=("on", "off"), default="on")
    c.add_argument("--cap-scan", type=int, default=completeness.SCAN_Q_CAP)
    c.set_defaults(func=cmd_complete)

    r = sub.add_parser("reproduce", help="run a reproduction suite")
    r.add_argument("suite", choices=sorted(suites.SUITES))
    run_opts(r)
    r.add_argument("--all-curves", action="store_true", help="small-q: every (a, b), not one per n")
    r.set_defaults(func=cmd_reproduce)

    e = sub.add_parser("export", help="write a matrix in the text format")
    curve_opts(e)
    e.add_argument("--what", choices=("generator", "parity", "good"), default="generator")
    e.add_argument("--export", metavar="PATH")
    e.set_defaults(func=cmd_export)

    f = sub.add_parser("field-info", help="describe GF(q)")
    f.add_argument("--q", type=int, required=True)
    f.set_defaults(func=cmd_field_info)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "verb", None) == "complete" and not args.all_curves \
            and args.weierstrass is None and args.hesse is None:
        print("usage error: complete needs a curve or --all-curves", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResourceCap as exc:
        print(f"resource cap ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_CAP
