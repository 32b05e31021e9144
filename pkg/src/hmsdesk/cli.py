"""Command-line entry point: ``hmsdesk <verb> [options]``.

Every verb prints one key-sorted JSON document (or a plain table with
``--format table``).  Exit codes: 0 success or verified true, 1 verified
false, 2 usage or input error, 3 internal certificate failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .bmodels import TruncationTooSmall, coh_ext_table, fold_compare, mf_generator, mf_hom_cohomology
from .exactlin import Field, determinant
from .mirror import Bounds, verify_pants_mirror, verify_surface_mirror
from .pantsgeom import contact_cover_degree, euler_char_c, strata
from .quivers import (LinearQuiver, PerfComplex, VertexOutOfRange, direct_sum, euler_matrix, find_perf_quasi_iso,
                      hom_pairing_duality_check, named_generators, parse_object, rotate_times, shift)
from .skeleton import CertificateFailure, SkeletonParseError, build_diagram, glue_family, limit_hom, load_skeleton

SCHEMA = "hmsdesk.cli/1"

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CERT = 0, 1, 2, 3


class UsageError(Exception):
    """Bad parameter value; ``flag`` names the offending option."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(self.prog, message)


# --- verbs -------------------------------------------------------------------------------------

def _need(flag: str, ok: bool, message: str):
    if not ok:
        raise UsageError(flag, message)


def cmd_mf_hom(args, fld: Field) -> tuple[dict, bool]:
    _need("--n", args.n >= 1, "must be at least 1")
    nv = args.n + 1
    b = args.a if args.b is None else args.b
    _need("--a", 1 <= args.a <= nv, f"must lie in 1..{nv}")
    _need("--b", 1 <= b <= nv, f"must lie in 1..{nv}")
    _need("--deg", args.deg >= 0, "must be non-negative")
    table = mf_hom_cohomology(mf_generator(args.n, args.a, fld), mf_generator(args.n, b, fld), args.deg)
    return {"a": args.a, "b": b, "table": table}, True


def cmd_coh_ext(args, fld: Field) -> tuple[dict, bool]:
    _need("--n", args.n >= 2, "must be at least 2")
    for flag, v in (("--a", args.a), ("--b", args.b)):
        _need(flag, 1 <= v <= args.n, f"must lie in 1..{args.n}")
    _need("--deg", args.deg >= 0, "must be non-negative")
    _need("--udeg", args.udeg >= 0, "must be non-negative")
    table = coh_ext_table(args.n, args.a, args.b, args.deg, args.udeg, args.length, fld)
    return {"a": args.a, "b": args.b, "table": {str(j): row for j, row in sorted(table.items())}}, True


def cmd_fold_check(args, fld: Field) -> tuple[dict, bool]:
    _need("--n", args.n >= 2, "must be at least 2")
    _need("--deg", args.deg >= 0, "must be non-negative")
    res = {f"{a},{b}": fold_compare(args.n, a, args.deg, b, fld)
           for a in range(1, args.n + 1) for b in range(1, args.n + 1)}
    return {"pairs": res}, all(res.values())


def _perf_name(x: PerfComplex, gens: dict[str, PerfComplex], span: int, prefer: str = "") -> tuple[str, int] | None:
    for name in sorted(gens, key=lambda g: (g != prefer, g)):
        for s in sorted(range(-span, span + 1), key=lambda t: (abs(t), t)):
            if find_perf_quasi_iso(x, shift(gens[name], s)) is not None:
                return name, s
    return None


def cmd_mutate(args, fld: Field) -> tuple[dict, bool]:
    _need("--cycle", args.cycle >= 2, "a cycle needs at least 2 elements")
    q = LinearQuiver(args.cycle - 1)
    try:
        x = parse_object(q, args.object, fld)
    except (ValueError, IndexError, VertexOutOfRange) as exc:
        raise UsageError("--object", str(exc)) from None
    y = rotate_times(x, args.times)
    base = args.object.split("[")[0].strip()
    found = _perf_name(y, named_generators(q, fld), 2 * abs(args.times) + 4, prefer=base)
    out = {"object": args.object, "times": args.times, "terms": {str(k): list(v) for k, v in y.terms.items()}}
    if found is None:
        out["result"] = "not a shifted named generator"
        return out, True
    name, s = found
    # folded, [s] and [-s] agree; the integer-graded functor sends the wrap-around to [-1]
    out["integer_result"] = f"quasi-isomorphic to {name}[{s}]"
    out["result"] = f"quasi-isomorphic to {name}[{abs(s)}]"
    return out, True


def _parse_family(desc: str, skel, fld: Field):
    """``v1=P1+k2[1];v2=0;@v1/c1/1=3`` (``@vertex/edge/index=scalar`` or ``=a,b`` sets a monodromy)."""
    objs, mono = {}, {}
    for part in filter(None, (p.strip() for p in desc.split(";"))):
        if "=" not in part:
            raise ValueError(f"entry {part!r} lacks '='")
        key, val = (t.strip() for t in part.split("=", 1))
        if key.startswith("@"):
            v, e, i = key[1:].split("/")
            nums = [int(t) for t in val.split(",")]
            mono[(v, e, int(i))] = tuple(nums) if len(nums) == 2 else nums[0]
            continue
        if key not in skel.vertices:
            raise ValueError(f"unknown vertex {key!r}")
        q = LinearQuiver(skel.valence(key) - 1)
        if val == "0":
            objs[key] = PerfComplex(q, {}, field=fld)
        else:
            objs[key] = direct_sum(*(parse_object(q, t, fld) for t in val.split("+")))
    missing = [v for v in skel.vertices if v not in objs]
    if missing:
        raise ValueError(f"no object for vertices {missing}")
    return objs, mono


def _node_key(k) -> str:
    kind, name = k
    return f"{kind}:{'/'.join(map(str, name))}" if isinstance(name, tuple) else f"{kind}:{name}"


def cmd_skeleton(args, fld: Field) -> tuple[dict, bool]:
    skel = load_skeleton(args.file)
    d = build_diagram(skel, mode=args.mode, field=fld)
    out = {"file": args.file, "vertices": list(skel.vertices), "edges": sorted(skel.edges),
           "node_sizes": {_node_key(k): n.quiver.n for k, n in d.nodes.items()}}
    if args.action == "hom":
        fams = []
        for flag, desc in (("--x", args.x), ("--y", args.y)):
            _need(flag, desc is not None, "required for 'hom'")
            try:
                objs, mono = _parse_family(desc, skel, fld)
            except (ValueError, IndexError, VertexOutOfRange) as exc:
                raise UsageError(flag, str(exc)) from None
            fams.append(glue_family(d, objs, monodromy=mono, name=desc))
        out["hom"] = limit_hom(d, *fams).as_dict()
    return out, True


def cmd_strata(args, fld: Field) -> tuple[dict, bool]:
    _need("--n", args.n >= 1, "must be at least 1")
    t = strata(args.n)
    listing = [{"subset": sorted(s.subset), "torus_rank": s.torus_rank, "simplex_dim": s.simplex_dim,
                "dimension": s.dimension} for s in t.strata]
    return {"count": len(listing), "strata": listing, "euler_c": euler_char_c(args.n),
            "cover_degree": contact_cover_degree(args.n)}, True


def cmd_mirror(args, fld: Field) -> tuple[dict, bool]:
    bounds = Bounds(args.deg, args.udeg, args.loop)
    if args.case == "surface":
        _need("--punctures", args.punctures is not None and 2 <= args.punctures <= 5, "must lie in 2..5")
        rep = verify_surface_mirror(args.punctures, bounds, field=fld)
    else:
        _need("--dim", args.dim is not None and 1 <= args.dim <= 3, "must lie in 1..3")
        rep = verify_pants_mirror(args.dim, bounds, field=fld)
    return {"report": rep.to_dict()}, rep.overall


def cmd_duality(args, fld: Field) -> tuple[dict, bool]:
    _need("--an", args.an >= 1, "must be at least 1")
    q = LinearQuiver(args.an)
    ok = hom_pairing_duality_check(q, fld)
    det = determinant(euler_matrix(q, fld))
    return {"pairing": ok, "euler_determinant": str(det)}, ok and det == 1


# --- parser ------------------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--field", default="q", help="ground field: q (rationals, default) or fp:<prime>")
    p.add_argument("--format", choices=("json", "table"), default="json", help="output format")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="hmsdesk", description="Desk-scale checks of mirror equivalences for punctured spheres "
                  "and pairs of pants.")
    sub = top.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("mf-hom", help="Hom tables between matrix factorizations",
                       description="Hom cohomology between the generators A --W/z_a--> A --z_a--> A of "
                       "matrix factorizations of z_1...z_{n+1}: even part A/(z_a, W/z_a) on the diagonal, odd "
                       "part A/(z_a, z_b) off it.")
    p.add_argument("--n", type=int, required=True, help="the ring has n+1 variables")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int)
    p.add_argument("--deg", type=int, default=6, help="total polynomial degree bound (default 6)")
    p.set_defaults(run=cmd_mf_hom)

    p = sub.add_parser("coh-ext", help="Ext tables between hyperplane structure sheaves",
                       description="Ext between structure sheaves of coordinate hyperplanes on z_1...z_n = 0, "
                       "predicted by A[u]/(z_a, u W^a) with u of cohomological degree 2 (diagonal) and "
                       "A[u]/(z_a, z_b)[-1] (off-diagonal).")
    p.add_argument("--n", type=int, required=True, help="number of variables")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--deg", type=int, default=6, help="polynomial degree bound (default 6)")
    p.add_argument("--udeg", type=int, default=3, help="u-degree bound (default 3)")
    p.add_argument("--length", type=int, help="resolution length (default 2*udeg+2)")
    p.set_defaults(run=cmd_coh_ext)

    p = sub.add_parser("fold-check", help="folded coherent Ext against matrix factorization Homs",
                       description="Folding the coherent Ext tables mod 2 (sending u to z_{n+1}) reproduces the "
                       "matrix factorization Hom tables degreewise, for every generator pair.")
    p.add_argument("--n", type=int, required=True, help="number of variables on the coherent side")
    p.add_argument("--deg", type=int, default=6, help="degree bound (default 6)")
    p.set_defaults(run=cmd_fold_check)

    p = sub.add_parser("mutate", help="iterate the cyclic mutation",
                       description="Applies the mutation of a simple cyclic rotation; iterating it once per "
                       "element of the cycle gives the shift [2].")
    p.add_argument("--cycle", type=int, required=True, help="cycle size m (quiver A_{m-1})")
    p.add_argument("--object", required=True, help="named generator such as k1, P2 or I3, optionally with [s]")
    p.add_argument("--times", type=int, default=1)
    p.set_defaults(run=cmd_mutate)

    p = sub.add_parser("skeleton", help="limit Hom over a ribbon skeleton file",
                       description="Builds the diagram of linear-quiver categories over a skeleton and computes "
                       "Hom in its limit between two compatible families. Family syntax: "
                       "'v1=P1+k2[1];v2=0;@v1/c1/1=3'.")
    p.add_argument("--file", required=True, help="skeleton file (vertex/edge/sectors/incidence lines)")
    p.add_argument("--mode", choices=("sheaf", "cosheaf"), default="sheaf")
    p.add_argument("action", choices=("info", "hom"))
    p.add_argument("--x")
    p.add_argument("--y")
    p.set_defaults(run=cmd_skeleton)

    p = sub.add_parser("strata", help="strata of the pair-of-pants skeleton",
                       description="Lists the strata T^I x (open simplex) over proper subsets I of [n+1], their "
                       "compactly supported Euler characteristic (-1)^n and the degree n+1 of the contact cover.")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(run=cmd_strata)

    p = sub.add_parser("mirror", help="mirror verification reports",
                       description="Compares the A-side descent diagram with the B-side one: generator "
                       "dictionaries, Ext tables and edge squares. 'surface' covers the punctured sphere by "
                       "ends and middles (chain of lines); 'pants' compares torus models with coordinate "
                       "subspaces.")
    p.add_argument("case", choices=("surface", "pants"))
    p.add_argument("--punctures", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--deg", type=int, default=6, help="polynomial degree bound (default 6)")
    p.add_argument("--udeg", type=int, default=3, help="u-degree bound (default 3)")
    p.add_argument("--loop", type=int, default=6, help="loop-length bound (default 6)")
    p.set_defaults(run=cmd_mirror)

    p = sub.add_parser("duality", help="hom-pairing duality on A_n",
                       description="The hom pairing identifies Ext(x, y) with the dual of Ext(y, S x) for the "
                       "named generators of A_n, and the Euler form of the simples is unimodular.")
    p.add_argument("--an", type=int, required=True)
    p.set_defaults(run=cmd_duality)

    for sp in sub.choices.values():
        _common(sp)
    return top


def _bounds_header(args) -> dict:
    keys = ("deg", "udeg", "loop", "length")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _render_table(doc: dict, prefix: str = "") -> list[str]:
    lines = []
    for k in sorted(doc):
        v = doc[k]
        if isinstance(v, dict):
            lines += _render_table(v, f"{prefix}{k}.")
        else:
            lines.append(f"{prefix}{k}\t{json.dumps(v, sort_keys=True)}")
    return lines


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        fld = Field.parse(args.field)
    except ValueError as exc:
        print(f"usage error: --field: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        body, verdict = args.run(args, fld)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SkeletonParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, TruncationTooSmall) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateFailure as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return EXIT_CERT
    doc = {"schema": SCHEMA, "verb": args.verb, "field": fld.name, "bounds": _bounds_header(args),
           "verdict": verdict, **body}
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True, indent=2, default=str), file=out)
    else:
        print("\n".join(_render_table(doc)), file=out)
    return EXIT_OK if verdict else EXIT_FALSE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
