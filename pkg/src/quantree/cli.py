"""Command-line interface.

Exit codes: 0 success (results may be empty), 2 unparseable input,
3 inconsistent input, 4 bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import __version__
from .census import census
from .charpoly import charpoly_bundle
from .errors import ParseError, QuantreeError
from .exactalg import RationalFunction, parse_polynomial
from .invert import invert_ratio, invert_snowflake, root_degree_from_ratio
from .spectra import DEFAULT_PERIODS, DEFAULT_TOL, Spectrum, recover_shape_from_spectra, synthesize_spectrum
from .tree import RootedTree, canonical_code, enumerate_trees, random_tree


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from None


def _read_tree(path: str) -> RootedTree:
    return RootedTree.from_json(_read(path))


def _read_spectrum(path: str) -> Spectrum:
    return Spectrum.from_json(_read(path))


def _ratio_from_args(args) -> RationalFunction:
    num, den = parse_polynomial(args.num), parse_polynomial(args.den)
    if den.is_zero():
        raise ParseError("denominator is the zero polynomial")
    return RationalFunction(num, den)


def _emit(obj, out) -> None:
    out.write(json.dumps(obj, indent=2, sort_keys=True))
    out.write("\n")


def _unrooted(cands):
    seen = {}
    for c in cands:
        seen.setdefault(canonical_code(c.tree, "unrooted"), c)
    return [seen[k] for k in sorted(seen)]


def cmd_forward(args, out):
    _emit(charpoly_bundle(_read_tree(args.tree)).to_json(), out)


def cmd_spectra(args, out):
    t = _read_tree(args.tree)
    _emit(synthesize_spectrum(t, args.problem, args.l, args.periods).to_json(), out)


def cmd_invert_poly(args, out):
    R = _ratio_from_args(args)
    d0 = args.d0 if args.d0 is not None else root_degree_from_ratio(R)
    cands = invert_ratio(R, d0, args.pmax, exhaustive=args.exhaustive)
    if args.all_roots:
        cands = _unrooted(cands)
    if args.trace:
        for c in cands:
            print(f"{c.code}: {c.trace.text}", file=sys.stderr)
    _emit({
        "ratio": {"num": R.num.to_string(), "den": R.den.to_string()},
        "d0": d0,
        "pmax": args.pmax,
        "count": len(cands),
        "results": [c.to_json() for c in cands],
    }, out)


def cmd_invert_spectra(args, out):
    d0 = "search" if args.d0_search or args.d0 is None else args.d0
    found = recover_shape_from_spectra(_read_spectrum(args.neumann), _read_spectrum(args.dirichlet), d0, args.tol)
    found.sort(key=lambda r: (r.d0, r.candidate.code))
    if args.trace:
        for r in found:
            print(f"d0={r.d0} {r.candidate.code}: {r.candidate.trace.text}", file=sys.stderr)
    _emit({"count": len(found), "results": [r.to_json() for r in found]}, out)


def cmd_snowflake_invert(args, out):
    R = _ratio_from_args(args)
    d0 = args.d0 if args.d0 is not None else root_degree_from_ratio(R)
    c = invert_snowflake(R, d0)
    arms = sorted(c.tree.degree(v) for v in c.tree.children[c.tree.root])
    if args.trace:
        print(c.trace.text, file=sys.stderr)
    _emit({"arms": arms, "result": c.to_json()}, out)


def cmd_census(args, out):
    _emit(census(args.pmax, args.pmin, args.two_spectra).to_json(), out)


def cmd_enumerate(args, out):
    trees = list(enumerate_trees(args.p, args.mode))
    _emit({"p": args.p, "mode": args.mode, "count": len(trees),
           "trees": [t.to_json() for t in trees]}, out)


def cmd_random(args, out):
    rng = random.Random(args.seed)
    _emit([random_tree(args.p, rng).to_json() for _ in range(args.count)], out)


def cmd_dot_export(args, out):
    out.write(_read_tree(args.tree).to_dot())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quantree", description="Forward and inverse two-spectra problems on equilateral quantum trees.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-o", "--output", help="write JSON here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forward", help="psi, psi~, psi^ and the reduced ratio of a rooted tree")
    p.add_argument("--tree", required=True, help="tree JSON file ('-' for stdin)")
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("spectra", help="synthesize a zero-potential spectrum")
    p.add_argument("--tree", required=True)
    p.add_argument("--problem", choices=["neumann", "dirichlet"], required=True)
    p.add_argument("--l", type=float, default=1.0, help="edge length")
    p.add_argument("--periods", type=int, default=DEFAULT_PERIODS)
    p.set_defaults(func=cmd_spectra)

    def ratio_args(p, d0_required=False):
        p.add_argument("--num", required=True, help='numerator, e.g. "-108z^6+258z^4-202z^2+52" or "[52,0,-202]"')
        p.add_argument("--den", required=True, help="denominator, same formats")
        p.add_argument("--d0", type=int, required=d0_required, help="root degree (default: read from the ratio)")
        p.add_argument("--trace", action="store_true", help="print branched fractions to stderr")

    p = sub.add_parser("invert-poly", help="all tree shapes with a given ratio psi/psi^")
    ratio_args(p)
    p.add_argument("--pmax", type=int, required=True, help="largest vertex count to consider")
    p.add_argument("--all-roots", action="store_true", help="report unrooted shapes (dedupe over root choice)")
    p.add_argument("--exhaustive", action="store_true", help="filter all rooted trees instead of expanding")
    p.set_defaults(func=cmd_invert_poly)

    p = sub.add_parser("invert-spectra", help="tree shapes from a Neumann and a Dirichlet spectrum")
    p.add_argument("--neumann", required=True)
    p.add_argument("--dirichlet", required=True)
    p.add_argument("--d0", type=int)
    p.add_argument("--d0-search", action="store_true", help="try every root degree")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_invert_spectra)

    p = sub.add_parser("snowflake-invert", help="closed-form inversion for center-rooted snowflakes")
    ratio_args(p)
    p.set_defaults(func=cmd_snowflake_invert)

    p = sub.add_parser("census", help="cospectral free trees by canonical psi~")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--pmin", type=int, default=1)
    p.add_argument("--two-spectra", action="store_true", help="also fingerprint psi^ over all roots")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("enumerate", help="one tree per isomorphism class")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--mode", choices=["rooted", "free"], default="free")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("random", help="random labeled trees (Pruefer) with random roots")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("dot-export", help="Graphviz DOT with the root marked")
    p.add_argument("--tree", required=True)
    p.set_defaults(func=cmd_dot_export)
    return ap


def _glue_polynomial_args(argv: list[str]) -> list[str]:
    # "--num -3z^2+3" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for a in it:
        if a in ("--num", "--den"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_polynomial_args(argv))
    try:
        if args.output:
            with open(args.output, "w", encoding="utf-8") as out:
                args.func(args, out)
        else:
            args.func(args, sys.stdout)
    except QuantreeError as e:
        print(f"quantree: error: {e}", file=sys.stderr)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
