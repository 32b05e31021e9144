"""Mirror verifications as diagram comparisons with generator-level certificates.

A node passes when its generator dictionary is bijective, the folded Ext
tables agree pair by pair, and (where both sides can compose) the ranks of
all composition maps between generator Homs agree.  An edge passes when the
image of every generator on the A-side is quasi-isomorphic (with an explicit
map) to the image on the B-side.  None of this proves a dg equivalence; it
is the finitely checkable shadow of one.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

from .bmodels import (coh_ext_table, fold_compare,
                      kronecker_compose, kronecker_ext, kronecker_fiber, kronecker_hom_complex,
                      kronecker_skyscraper, kronecker_structure_sheaf, kronecker_twist_minus_one, nodal_chain_ext,
                      nodal_ext, nodal_line, nodal_point_on_branch, origin_skyscraper, restrict_between,
                      structure_sheaf, torsion_compose, torsion_ext, torsion_fiber, torsion_hom_complex, torsion_point,
                      free_complexes_equal)
from .complexes import (Complex, class_rank, cohomology, cohomology_representatives, find_quasi_iso, fold, point)
from .exactlin import Field, GradedSpace, Q
from .pantsgeom import cube_diagram, proper_subsets
from .polyring import (FreeComplex, MonomialIdeal, free_hom_complex, hilbert_function, koszul_complex,
                       set_variables_zero, shift_free, truncated_cohomology)
from .quivers import LinearQuiver, PerfComplex, direct_sum, parse_object
from .skeleton import (CatDiagram, CoverPiece, LimitHom, LimitObject, build_diagram, cover_diagram, glue_family,
                       limit_compose, limit_hom, mayer_vietoris_hom, punctured_sphere_skeleton)

SCHEMA = "hmsdesk.mirror-report/1"
WORKERS_ENV = "HMSDESK_WORKERS"


@dataclass(frozen=True)
class Bounds:
    poly_degree: int = 6
    u_degree: int = 3
    loop_length: int = 6


@dataclass
class NodeResult:
    node: str
    model: str
    dictionary: dict[str, str]
    ext_a: dict[str, dict[str, int]]
    ext_b: dict[str, dict[str, int]]
    compositions_checked: int
    verdict: bool
    failures: list[str] = field(default_factory=list)


@dataclass
class EdgeResult:
    edge: str
    images: dict[str, dict]
    verdict: bool
    failures: list[str] = field(default_factory=list)


@dataclass
class MirrorReport:
    case: dict
    bounds: Bounds
    node_results: list[NodeResult]
    edge_results: list[EdgeResult]
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return (all(r.verdict for r in self.node_results) and all(r.verdict for r in self.edge_results)
                and all(self.checks.values()))

    def failures(self) -> list[str]:
        out = [f"node {r.node}: {m}" for r in self.node_results for m in r.failures]
        out += [f"edge {r.edge}: {m}" for r in self.edge_results for m in r.failures]
        out += [f"check {k}" for k, v in sorted(self.checks.items()) if not v]
        return out

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "case": self.case,
            "bounds": asdict(self.bounds),
            "node_results": [asdict(r) for r in sorted(self.node_results, key=lambda r: r.node)],
            "edge_results": [asdict(r) for r in sorted(self.edge_results, key=lambda r: r.edge)],
            "checks": dict(sorted(self.checks.items())),
            "overall": self.overall,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _run_all(fn: Callable, jobs: Sequence[tuple]) -> list:
    """Evaluate independent checks, in worker processes when allowed; order is preserved."""
    w = _workers()
    if w == 1 or len(jobs) < 2:
        return [fn(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=w) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def _dims(g: GradedSpace) -> dict[str, int]:
    d = g.as_dict()
    return {"even": d.get("even", 0), "odd": d.get("odd", 0)}


# --- B-side models with a uniform interface ---------------------------------------------------

class _BModel:
    """Uniform access to a B-side model category: Ext, fibers and composition."""

    name = ""

    def ext(self, m, n) -> GradedSpace:
        raise NotImplementedError

    def hom_complex(self, m, n) -> Complex:
        raise NotImplementedError

    def compose(self, m, n, p, g, g_deg, f, f_deg) -> list:
        raise NotImplementedError

    def fiber(self, m, where) -> Complex:
        raise NotImplementedError


class _Kronecker(_BModel):
    name = "projective line (Kronecker modules)"

    def ext(self, m, n):
        return kronecker_ext(m, n)

    def hom_complex(self, m, n):
        return kronecker_hom_complex(m, n)

    def compose(self, m, n, p, g, g_deg, f, f_deg):
        return kronecker_compose(m, n, p, g, g_deg, f, f_deg)

    def fiber(self, m, where):
        return kronecker_fiber(m, where)


class _Torsion(_BModel):
    def __init__(self, name: str):
        self.name = name

    def ext(self, m, n):
        return torsion_ext(m, n)

    def hom_complex(self, m, n):
        return torsion_hom_complex(m, n)

    def compose(self, m, n, p, g, g_deg, f, f_deg):
        return torsion_compose(m, n, p, g, g_deg, f, f_deg)

    def fiber(self, m, where):
        return torsion_fiber(m, where)


def _shifted(m, n: int = 1):
    return m.shifted(n)


# --- per-piece dictionaries ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PieceFamily:
    """Generators of one cover piece on both sides, and where each arc attaches on the B-side."""

    piece: CoverPiece
    model: _BModel
    a_side: dict[str, LimitObject]
    b_side: dict[str, object]
    dictionary: dict[str, str]
    attach: dict[str, object]  # arc name -> point of the B-side model


def _piece_index(piece: CoverPiece) -> int:
    return int(piece.name[1:])


def piece_family(piece: CoverPiece, n: int, lambdas: Sequence = (1, 2), field: Field = Q) -> PieceFamily:
    """Generator dictionary for a piece of the ladder cover of the ``n``-punctured sphere."""
    m = _piece_index(piece)
    v, c = f"v{m}", f"c{m}"
    d = piece.diagram
    top = n - 1
    mono = (v, c, 1)
    if piece.kind == "circle":
        q = LinearQuiver(1)
        a = {f"k_{lam}": glue_family(d, {v: parse_object(q, "k1", field)}, monodromy={mono: lam},
                                     name=f"k_{lam}") for lam in lambdas}
        b = {f"k_{lam}": torsion_point(lam, field) for lam in lambdas}
        return PieceFamily(piece, _Torsion("punctured line (torsion k[t, 1/t]-modules)"), a, b,
                           {k: k for k in a}, {})
    if piece.kind == "end":
        q = LinearQuiver(2)
        obj = lambda s: parse_object(q, s, field)
        if m == 1:
            b_obj, z_obj, arc = obj("P2"), direct_sum(obj("P1"), obj("k1[1]")), f"a{m}"
        else:
            b_obj, z_obj, arc = obj("P1"), direct_sum(obj("P2"), obj("k1")), f"a{m - 1}"
        a = {f"B_{lam}": glue_family(d, {v: b_obj}, monodromy={mono: lam}, name=f"B_{lam}") for lam in lambdas}
        a["Z"] = glue_family(d, {v: z_obj}, name="Z")
        b = {f"B_{lam}": torsion_point(lam, field, parity=1) for lam in lambdas}
        b["Z"] = torsion_point(0, field, parity=1)
        dic = {f"B_{lam}": f"k_{lam}[1]" for lam in lambdas}
        dic["Z"] = "k_0[1]"
        return PieceFamily(piece, _Torsion("affine line (torsion k[t]-modules)"), a, b, dic, {arc: 0})
    if piece.kind != "middle" or not 1 < m < top:
        raise ValueError(f"unexpected piece {piece.name} of kind {piece.kind}")
    q = LinearQuiver(3)
    obj = lambda s: parse_object(q, s, field)
    a = {
        "A": glue_family(d, {v: obj("I2")}, name="A"),
        "C": glue_family(d, {v: direct_sum(obj("P1"), obj("k2"))}, name="C"),
        "Z_down": glue_family(d, {v: direct_sum(obj("P3"), obj("k2"))}, name="Z_down"),
        "Z_up": glue_family(d, {v: direct_sum(obj("P1"), obj("k1[1]"))}, name="Z_up"),
    }
    for lam in lambdas:
        a[f"B_{lam}"] = glue_family(d, {v: obj("P2")}, monodromy={mono: lam}, name=f"B_{lam}")
    b = {
        "A": kronecker_structure_sheaf(field),
        "C": kronecker_twist_minus_one(field),
        "Z_down": kronecker_skyscraper(0, field).shifted(1),
        "Z_up": kronecker_skyscraper("inf", field).shifted(1),
    }
    for lam in lambdas:
        b[f"B_{lam}"] = kronecker_skyscraper(lam, field).shifted(1)
    dic = {"A": "O", "C": "O(-1)", "Z_down": "k_0[1]", "Z_up": "k_inf[1]"}
    dic.update({f"B_{lam}": f"k_{lam}[1]" for lam in lambdas})
    return PieceFamily(piece, _Kronecker(), a, b, dic, {f"a{m - 1}": 0, f"a{m}": "inf"})


# --- node checks ------------------------------------------------------------------------------

def _b_composition_rank(model: _BModel, objs: Sequence, p1: int, p2: int) -> int:
    """Rank of ``Hom^{p2}(y, z) x Hom^{p1}(x, y) -> Hom^{p1+p2}(x, z)`` in folded parities."""
    x, y, z = objs
    j1 = (p1 + y.parity - x.parity) % 2
    j2 = (p2 + z.parity - y.parity) % 2
    if j1 + j2 > 1:
        return 0
    cxy, cyz, cxz = model.hom_complex(x, y), model.hom_complex(y, z), model.hom_complex(x, z)
    fs = cohomology_representatives(cxy, j1)
    gs = cohomology_representatives(cyz, j2)
    prods = [model.compose(x, y, z, g, j2, f, j1) for f in fs for g in gs]
    return class_rank(cxz, j1 + j2, prods) if prods else 0


def _a_composition_rank(d: CatDiagram, homs: dict, names: Sequence[str], p1: int, p2: int) -> int:
    x, y, z = names
    hxy, hyz, hxz = homs[(x, y)], homs[(y, z)], homs[(x, z)]
    fs = cohomology_representatives(hxy.complex, p1)
    gs = cohomology_representatives(hyz.complex, p2)
    prods = [limit_compose(d, hxy, hyz, g, p2, f, p1, hxz) for f in fs for g in gs]
    return class_rank(hxz.complex, (p1 + p2) % 2, prods) if prods else 0


def check_piece_node(fam: PieceFamily, compositions: bool = True) -> NodeResult:
    d = fam.piece.diagram
    names = sorted(fam.a_side)
    failures = []
    if sorted(fam.b_side) != names or len(set(fam.dictionary.values())) != len(names):
        failures.append("dictionary is not a bijection")
    homs = {(x, y): LimitHom(d, fam.a_side[x], fam.a_side[y]) for x in names for y in names}
    ext_a, ext_b = {}, {}
    for x in names:
        for y in names:
            key = f"{x}->{y}"
            ext_a[key] = _dims(cohomology(homs[(x, y)].complex))
            ext_b[key] = _dims(fam.model.ext(fam.b_side[x], fam.b_side[y]))
            if ext_a[key] != ext_b[key]:
                failures.append(f"Ext {key}: {ext_a[key]} vs {ext_b[key]}")
    checked = 0
    if compositions and not failures:
        for x in names:
            for y in names:
                for z in names:
                    for p1 in (0, 1):
                        for p2 in (0, 1):
                            if not (ext_a[f"{x}->{y}"][_par(p1)] and ext_a[f"{y}->{z}"][_par(p2)]
                                    and ext_a[f"{x}->{z}"][_par(p1 + p2)]):
                                continue
                            ra = _a_composition_rank(d, homs, (x, y, z), p1, p2)
                            rb = _b_composition_rank(fam.model, [fam.b_side[t] for t in (x, y, z)], p1, p2)
                            checked += 1
                            if ra != rb:
                                failures.append(f"composition {x}->{y}->{z} parities {p1},{p2}: rank {ra} vs {rb}")
    return NodeResult(fam.piece.name, fam.model.name, dict(sorted(fam.dictionary.items())), ext_a, ext_b,
                      checked, not failures, failures)


def _par(p: int) -> str:
    return "odd" if p % 2 else "even"


def _overlap_node(name: str) -> NodeResult:
    """An overlap is a line: both sides are ``Perf k`` generated by ``k``."""
    k = point()
    dims = _dims(cohomology(fold(k)))
    ok = dims == {"even": 1, "odd": 0}
    return NodeResult(name, "point (Perf k)", {"k": "k"}, {"k->k": dims}, {"k->k": dims}, 0, ok,
                      [] if ok else ["End(k) is not k"])


# --- edge checks ------------------------------------------------------------------------------

def check_arc_edge(fam: PieceFamily, arc: str, overlap: str, perturb: str | None = None) -> EdgeResult:
    """Restriction to an overlap arc against the derived fiber at the attaching point."""
    where = fam.attach[arc]
    images, failures = {}, []
    for name in sorted(fam.a_side):
        a_img = fam.a_side[name].edge_objects[arc]
        b_obj = fam.b_side[name]
        if name == perturb:
            b_obj = _shifted(b_obj)
        b_img = fold(fam.model.fiber(b_obj, where))
        cert = find_quasi_iso(a_img, b_img)
        images[name] = {"a": _dims(cohomology(a_img)), "b": _dims(cohomology(b_img)), "certificate": cert is not None}
        if cert is None:
            failures.append(f"{name}: no quasi-isomorphism between arc stalk and fiber at {where}")
    return EdgeResult(f"{overlap}->{fam.piece.name}", images, not failures, failures)


# --- global n = 3 pushout ------------------------------------------------------------------------

def thrice_punctured_families(field: Field = Q, values: Sequence = (1, 2)) -> tuple[CatDiagram, dict, dict]:
    """Global families on the two-circle skeleton and their nodal-cross images."""
    g = punctured_sphere_skeleton(3)
    d = build_diagram(g, field=field)
    q = LinearQuiver(2)
    obj = lambda s: parse_object(q, s, field)
    zero = PerfComplex(q, {}, field=field)
    a, b = {}, {}
    for c in values:
        a[f"ZZ_{c}"] = glue_family(d, {"v1": direct_sum(obj("P1"), obj("k1[1]")), "v2": direct_sum(obj("P2"), obj("k1"))},
                                   monodromy={("v2", "a1", 0): (1, c)}, name=f"ZZ_{c}")
        b[f"ZZ_{c}"] = nodal_line(c, field)
    for lam in values:
        a[f"B1_{lam}"] = glue_family(d, {"v1": obj("P2"), "v2": zero}, monodromy={("v1", "c1", 1): lam})
        b[f"B1_{lam}"] = nodal_point_on_branch(1, lam, field)
        a[f"B2_{lam}"] = glue_family(d, {"v1": zero, "v2": obj("P1")}, monodromy={("v2", "c2", 1): lam})
        b[f"B2_{lam}"] = nodal_point_on_branch(2, lam, field)
    return d, a, b


def _pushout_node(field: Field = Q) -> tuple[NodeResult, bool]:
    d, a, b = thrice_punctured_families(field)
    cover = cover_diagram(3, field)
    names = sorted(a)
    ext_a, ext_b, failures = {}, {}, []
    mv_ok = True
    for x in names:
        for y in names:
            key = f"{x}->{y}"
            ext_a[key] = _dims(limit_hom(d, a[x], a[y]))
            ext_b[key] = _dims(nodal_ext(b[x], b[y]))
            if ext_a[key] != ext_b[key]:
                failures.append(f"Ext {key}: {ext_a[key]} vs {ext_b[key]}")
            if _dims(mayer_vietoris_hom(cover, a[x], a[y])) != ext_a[key]:
                mv_ok = False
                failures.append(f"pushout totalization disagrees on {key}")
    dic = {x: b[x].name for x in names}
    return NodeResult("global", "nodal cross k[x, y]/(xy)", dic, ext_a, ext_b, 0, not failures, failures), mv_ok


# --- surface mirror -------------------------------------------------------------------------------

def _surface_piece_task(n: int, piece_name: str, compositions: bool, perturb, field: Field = Q) -> tuple:
    cover = cover_diagram(n, field)
    piece = next(p for p in cover.pieces if p.name == piece_name)
    fam = piece_family(piece, n, field=field)
    node = check_piece_node(fam, compositions)
    edges = []
    for o_name, p_name in cover.maps:
        if p_name != piece_name:
            continue
        o = next(o for o in cover.overlaps if o.name == o_name)
        (arc,) = o.skeleton.edges
        which = perturb[2] if perturb and perturb[:2] == (o_name, p_name) else None
        edges.append(check_arc_edge(fam, arc, o_name, which))
    return node, edges


def verify_surface_mirror(n: int, bounds: Bounds = Bounds(), compositions: bool = True,
                          perturb: tuple[str, str, str] | None = None, field: Field = Q) -> MirrorReport:
    """Compare the ladder cover of the ``n``-punctured sphere with the chain of curves.

    End pieces match affine lines, middle pieces projective lines and
    overlaps points.  ``perturb = (overlap, piece, generator)`` replaces that
    generator's B-side image on that edge by its shift, for harness tests.
    """
    if not 2 <= n <= 5:
        raise ValueError(f"verify_surface_mirror needs 2 <= n <= 5, got {n}")
    cover = cover_diagram(n, field)
    results = _run_all(_surface_piece_task, [(n, p.name, compositions, perturb, field) for p in cover.pieces])
    nodes = [r[0] for r in results] + [_overlap_node(o.name) for o in cover.overlaps]
    edges = [e for r in results for e in r[1]]
    checks: dict[str, bool] = {}
    if n == 3:
        node, mv = _pushout_node(field)
        nodes.append(node)
        checks["pushout_totalization"] = mv
    for r in nodes:
        if r.model.startswith("projective line"):
            tab = r.ext_a
            checks[f"{r.node}_line_bundle_homs"] = (
                (tab["A->A"]["even"], tab["A->C"]["even"], tab["C->A"]["even"]) == (1, 0, 2))
    case = {"kind": "surface", "punctures": n, "pieces": len(cover.pieces), "overlaps": len(cover.overlaps),
            "perturbed": list(perturb) if perturb else None, "field": field.name}
    return MirrorReport(case, bounds, nodes, edges, checks)


# --- pants mirror: torus models against coordinate subspaces ---------------------------------------

@dataclass(frozen=True, eq=False)
class TorusObject:
    """Object of the torus model over the coordinates ``subset``.

    ``complex`` lives over one variable ``y_a`` per coordinate, in increasing
    order; the other arrow ``x_a`` acts invertibly by ``scalars[a]``, so the
    mirror coordinate is ``t_a = y_a / x_a``.
    """

    subset: tuple[int, ...]
    complex: FreeComplex
    scalars: dict[int, object]
    name: str = ""


def _scalars(subset: Sequence[int]) -> dict[int, int]:
    return {a: a + 1 for a in subset}


def torus_structure(subset: Sequence[int], field: Field = Q) -> TorusObject:
    """``i_! k_0``: the free rank-one module over ``k[y]``."""
    sub = tuple(sorted(subset))
    return TorusObject(sub, structure_sheaf(len(sub), field), _scalars(sub), "O")


def torus_skyscraper(subset: Sequence[int], field: Field = Q) -> TorusObject:
    """Koszul complex on ``x_a^{-1} y_a``: the object cut out by ``t = 0``."""
    sub = tuple(sorted(subset))
    sc = _scalars(sub)
    kos = koszul_complex(len(sub), list(range(1, len(sub) + 1)), field)
    diffs = {}
    for k, m in kos.differentials.items():
        ent = {}
        for rc, p in m.items():
            ent[rc] = {mon: field(x) * field.inv(field(sc[sub[mon.index(1)]])) for mon, x in p.items()}
        diffs[k] = ent
    return TorusObject(sub, FreeComplex(len(sub), kos.terms, diffs, field=field), sc, "k0")


def torus_eta(x: TorusObject, keep: Sequence[int]) -> TorusObject:
    """Hyperbolic restriction to the coordinates in ``keep``: ``y_a = 0`` for the others."""
    keep = tuple(sorted(keep))
    pos = [x.subset.index(a) + 1 for a in keep]
    return TorusObject(keep, set_variables_zero(x.complex, pos), {a: x.scalars[a] for a in keep}, x.name)


def torus_to_coordinates(x: TorusObject) -> FreeComplex:
    """Substitute ``y_a = x_a t_a``."""
    fld = x.complex.field
    diffs = {}
    for k, m in x.complex.differentials.items():
        ent = {}
        for rc, p in m.items():
            q = {}
            for mon, c in p.items():
                w = fld(c)
                for i, e in enumerate(mon):
                    w = w * fld(x.scalars[x.subset[i]]) ** e
                if w:
                    q[mon] = w
            if q:
                ent[rc] = q
        diffs[k] = ent
    return FreeComplex(x.complex.nvars, x.complex.terms, diffs, field=fld, check=False)


def _label(subset) -> str:
    return "{" + ",".join(str(a) for a in sorted(subset)) + "}"


def _pants_generators(subset, field: Field) -> dict[str, tuple[TorusObject, FreeComplex]]:
    sub = sorted(subset)
    out = {"O": (torus_structure(sub, field), structure_sheaf(len(sub), field))}
    if sub:
        out["k0"] = (torus_skyscraper(sub, field), origin_skyscraper(len(sub), field))
    return out


def _pants_node_task(subset: frozenset, bound: int, field: Field = Q) -> NodeResult:
    gens = _pants_generators(subset, field)
    names = sorted(gens)
    failures, ext_a, ext_b = [], {}, {}
    for g in names:
        ta, b = gens[g]
        if not free_complexes_equal(torus_to_coordinates(ta), b):
            failures.append(f"{g}: dictionary image differs from the coordinate generator")
    for x in names:
        for y in names:
            key = f"{x}->{y}"
            ha = truncated_cohomology(free_hom_complex(gens[x][0].complex, gens[y][0].complex), bound)
            hb = truncated_cohomology(free_hom_complex(gens[x][1], gens[y][1]), bound)
            ext_a[key] = _fold_truncated(ha)
            ext_b[key] = _fold_truncated(hb)
            if ha != hb:
                failures.append(f"Ext {key} differs in the truncated range")
    dic = {g: g for g in names}
    return NodeResult(_label(subset), f"affine space of dimension {len(subset)}", dic, ext_a, ext_b, 0,
                      not failures, failures)


def _fold_truncated(h: dict) -> dict[str, int]:
    out = {"even": 0, "odd": 0}
    for (k, _), v in h.items():
        out[_par(k)] += v
    return out


def check_pants_edge(big: frozenset, small: frozenset, perturb: str | None = None, field: Field = Q) -> EdgeResult:
    """Hyperbolic restriction of each generator against the Koszul restriction of its image."""
    images, failures = {}, []
    for g, (ta, b) in sorted(_pants_generators(big, field).items()):
        a_img = torus_to_coordinates(torus_eta(ta, sorted(small)))
        b_img = restrict_between(b, big, small)
        if g == perturb:
            b_img = shift_free(b_img, 1)
        ok = free_complexes_equal(a_img, b_img)
        images[g] = {"certificate": ok, "terms": {str(k): len(v) for k, v in sorted(b_img.terms.items())}}
        if not ok:
            failures.append(f"{g}: hyperbolic restriction and Koszul restriction disagree")
    return EdgeResult(f"{_label(big)}->{_label(small)}", images, not failures, failures)


def predicted_coh_table(n: int, a: int, b: int, poly_bound: int, u_bound: int) -> dict[int, list[int]]:
    """Ext between hyperplane generators predicted by ``A[u]/(z_a, u W^a)`` and ``A[u]/(z_a, z_b)[-1]``."""
    za = [0] * n
    za[a - 1] = 1
    out = {}
    if a == b:
        wa = [1] * n
        wa[a - 1] = 0
        for j in range(2 * u_bound + 2):
            gens = [za] if j == 0 else [za, wa]
            out[j] = [0] * (poly_bound + 1) if j % 2 else hilbert_function(MonomialIdeal(n, gens), poly_bound)
    else:
        zb = [0] * n
        zb[b - 1] = 1
        for j in range(2 * u_bound + 2):
            out[j] = hilbert_function(MonomialIdeal(n, [za, zb]), poly_bound) if j % 2 else [0] * (poly_bound + 1)
    return out


def verify_pants_mirror(n: int, bounds: Bounds = Bounds(), perturb: tuple[str, str, str] | None = None,
                        node_bound: int = 4, field: Field = Q) -> MirrorReport:
    """Torus-model diagram over proper subsets of ``[n+1]`` against the coordinate-subspace cube.

    ``perturb = (source label, target label, generator)`` shifts one B-side
    edge image, e.g. ``("{1}", "{}", "O")``.
    """
    if not 1 <= n <= 3:
        raise ValueError(f"verify_pants_mirror needs 1 <= n <= 3, got {n}")
    cube = cube_diagram(n)
    subsets = proper_subsets(n)
    nodes = _run_all(_pants_node_task, [(s, node_bound, field) for s in subsets])
    jobs = []
    for e in cube.edges:
        which = perturb[2] if perturb and (perturb[0], perturb[1]) == (_label(e.source), _label(e.target)) else None
        jobs.append((e.source, e.target, which, field))
    edges = _run_all(check_pants_edge, jobs)
    m = n + 1
    checks = {}
    for a in range(1, m + 1):
        for b in range(1, m + 1):
            got = coh_ext_table(m, a, b, bounds.poly_degree, bounds.u_degree, field=field)
            checks[f"coh_table_{a}_{b}"] = got == predicted_coh_table(m, a, b, bounds.poly_degree, bounds.u_degree)
        checks[f"fold_{a}"] = fold_compare(m, a, bounds.poly_degree, field=field)
    if n == 1:
        for a in (1, 2):
            for b in (1, 2):
                got = nodal_chain_ext(3, f"O{a}", f"O{b}", bounds.poly_degree, bounds.u_degree, field)
                want = coh_ext_table(2, a, b, bounds.poly_degree, bounds.u_degree, field=field)
                checks[f"chain_descent_{a}_{b}"] = got == want
    case = {"kind": "pants", "dimension": n, "nodes": len(subsets), "edges": len(cube.edges),
            "perturbed": list(perturb) if perturb else None, "field": field.name}
    return MirrorReport(case, bounds, nodes, edges, checks)


__all__ = [
    "SCHEMA", "Bounds", "NodeResult", "EdgeResult", "MirrorReport", "PieceFamily", "piece_family",
    "check_piece_node", "check_arc_edge", "check_pants_edge", "thrice_punctured_families", "verify_surface_mirror",
    "TorusObject", "torus_structure", "torus_skyscraper", "torus_eta", "torus_to_coordinates",
    "predicted_coh_table", "verify_pants_mirror",
]
