"""Ribbon skeleta, their chain posets, the induced diagrams of quiver
categories, and Hom spaces in the limit between explicit compatible families.

Orientation conventions used by the builders and the file format:

* ``sectors v s_1 ... s_k`` lists the local sectors counterclockwise, so that
  crossing a half-edge counterclockwise goes from ``s_i`` to ``s_{i+1}``;
* ``incidence v e a b`` names the sector on the left of ``e`` (``a``) and on
  its right (``b``), for ``e`` oriented from its first endpoint to its second.

An incidence pair ``(a, b)`` with ``succ a = b`` restricts at the position of
``a``; otherwise the pair is read backwards and the restriction acquires the
folded twist ``[1]``.  Families and Hom spaces in the limit are mod-2 graded.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .complexes import ChainMap, Complex, HomComplex, cohomology, find_quasi_iso, is_quasi_iso, shift
from .cyclic import (CategoryNode, CyclicSet, FunctorEdge, NotConsecutive, SubcycleInclusion, cst_edge,
                     cst_node, cwst_edge)
from .exactlin import MOD2, ExactMatrix, Field, GradedSpace, Q, block, homology_dim
from .quivers import PerfComplex, fold as fold_perf, quiver_hom_complex, subcycle_restrict


class InvalidIncidence(ValueError):
    pass


class CertificateFailure(RuntimeError):
    pass


class SkeletonParseError(ValueError):
    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path, self.line, self.message = path, line, message


# --- skeleton data --------------------------------------------------------------

@dataclass(frozen=True)
class Incidence:
    vertex: str
    edge: str
    left: str
    right: str
    index: int = 0  # distinguishes the two ends of a loop

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.vertex, self.edge, self.index)


@dataclass(frozen=True, eq=False)
class RibbonSkeleton:
    vertices: tuple[str, ...]
    edges: Mapping[str, tuple[str | None, str | None]]
    sectors: Mapping[str, CyclicSet]
    incidences: tuple[Incidence, ...]

    def __post_init__(self):
        self.validate()

    def edge_cycle(self, e: str) -> CyclicSet:
        return CyclicSet((f"{e}:L", f"{e}:R"))

    def inclusion(self, inc: Incidence) -> SubcycleInclusion:
        src = self.edge_cycle(inc.edge)
        return SubcycleInclusion(src, self.sectors[inc.vertex],
                                 {src.elements[0]: inc.left, src.elements[1]: inc.right})

    def incidences_at(self, e: str) -> list[Incidence]:
        return [u for u in self.incidences if u.edge == e]

    def valence(self, v: str) -> int:
        return sum(1 for u in self.incidences if u.vertex == v)

    def validate(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise InvalidIncidence("duplicate vertex")
        for e, ends in self.edges.items():
            for w in ends:
                if w is not None and w not in vs:
                    raise InvalidIncidence(f"edge {e} ends at unknown vertex {w}")
        for v in self.vertices:
            if v not in self.sectors:
                raise InvalidIncidence(f"vertex {v} has no sector data")
            val = self.valence(v)
            if val < 2:
                raise InvalidIncidence(f"vertex {v} has valence {val}; univalent vertices are not supported")
            if val != len(self.sectors[v]):
                raise InvalidIncidence(f"vertex {v}: valence {val} but {len(self.sectors[v])} sectors")
        for e, ends in self.edges.items():
            expected = {w: sum(1 for x in ends if x == w) for w in ends if w is not None}
            got: dict[str, int] = {}
            for u in self.incidences_at(e):
                got[u.vertex] = got.get(u.vertex, 0) + 1
            if got != expected:
                raise InvalidIncidence(f"edge {e}: incidences {got} do not match endpoints {expected}")
        for u in self.incidences:
            if u.edge not in self.edges:
                raise InvalidIncidence(f"incidence on unknown edge {u.edge}")
            cyc = self.sectors[u.vertex]
            for s in (u.left, u.right):
                if s not in cyc:
                    raise InvalidIncidence(f"sector {s} is not at vertex {u.vertex}")
            if not cyc.adjacent(u.left, u.right):
                raise InvalidIncidence(f"sectors {u.left}, {u.right} are not adjacent at {u.vertex}")
        for v in self.vertices:
            cyc = self.sectors[v]
            if len(cyc) < 3:
                continue
            used = [frozenset((u.left, u.right)) for u in self.incidences if u.vertex == v]
            if len(set(used)) != len(used):
                raise InvalidIncidence(f"vertex {v}: two half-edges share a sector pair")

    def sub_skeleton(self, vertices: Iterable[str], edges: Mapping[str, tuple[str | None, str | None]]
                     ) -> "RibbonSkeleton":
        """Restrict to some vertices and edges; endpoints outside become open ends."""
        vs = tuple(vertices)
        keep = set(vs)
        incs = tuple(u for u in self.incidences if u.vertex in keep and u.edge in edges)
        return RibbonSkeleton(vs, dict(edges), {v: self.sectors[v] for v in vs}, incs)

    def to_text(self) -> str:
        out = [f"vertex {v}" for v in self.vertices]
        for e, (a, b) in self.edges.items():
            out.append(f"edge {e} {a or '-'} {b or '-'}")
        for v in self.vertices:
            out.append(f"sectors {v} " + " ".join(self.sectors[v].elements))
        for u in self.incidences:
            out.append(f"incidence {u.vertex} {u.edge} {u.left} {u.right}")
        return "\n".join(out) + "\n"


def parse_skeleton(text: str, path: str = "<string>") -> RibbonSkeleton:
    """Parse the line-oriented skeleton format; ``#`` starts a comment."""
    vertices: list[str] = []
    edges: dict[str, tuple[str | None, str | None]] = {}
    sectors: dict[str, CyclicSet] = {}
    raw_incs: list[tuple[int, str, str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        kw, args = words[0], words[1:]

        def need(n: int):
            if len(args) != n:
                raise SkeletonParseError(path, lineno, f"'{kw}' takes {n} arguments, got {len(args)}")

        if kw == "vertex":
            need(1)
            if args[0] in vertices:
                raise SkeletonParseError(path, lineno, f"duplicate vertex {args[0]}")
            vertices.append(args[0])
        elif kw == "edge":
            need(3)
            if args[0] in edges:
                raise SkeletonParseError(path, lineno, f"duplicate edge {args[0]}")
            edges[args[0]] = tuple(None if a == "-" else a for a in args[1:])
        elif kw == "sectors":
            if len(args) < 2:
                raise SkeletonParseError(path, lineno, "'sectors' needs a vertex and at least one label")
            try:
                sectors[args[0]] = CyclicSet(args[1:])
            except ValueError as exc:
                raise SkeletonParseError(path, lineno, str(exc)) from None
        elif kw == "incidence":
            need(4)
            raw_incs.append((lineno, *args))
        else:
            raise SkeletonParseError(path, lineno, f"unknown keyword {kw!r}")
    incs = []
    seen: dict[tuple[str, str], int] = {}
    for lineno, v, e, a, b in raw_incs:
        cyc = sectors.get(v)
        if cyc is None:
            raise SkeletonParseError(path, lineno, f"no sectors declared for vertex {v}")
        if a not in cyc or b not in cyc:
            raise SkeletonParseError(path, lineno, f"unknown sector at vertex {v}")
        if not cyc.adjacent(a, b):
            raise SkeletonParseError(path, lineno, f"sectors {a} and {b} are not adjacent at {v}")
        idx = seen.get((v, e), 0)
        seen[(v, e)] = idx + 1
        incs.append(Incidence(v, e, a, b, idx))
    try:
        return RibbonSkeleton(tuple(vertices), edges, sectors, tuple(incs))
    except InvalidIncidence as exc:
        raise SkeletonParseError(path, 0, str(exc)) from None


def load_skeleton(path: str | Path) -> RibbonSkeleton:
    p = Path(path)
    return parse_skeleton(p.read_text(), str(p))


# --- poset and diagram --------------------------------------------------------------

@dataclass(frozen=True)
class ChainPoset:
    elements: tuple
    relations: tuple  # (lower, upper) pairs

    @classmethod
    def of(cls, s: RibbonSkeleton) -> "ChainPoset":
        els = [("v", v) for v in s.vertices] + [("e", e) for e in s.edges]
        rels = []
        for u in s.incidences:
            els.append(("u", u.key))
            rels.append((("u", u.key), ("v", u.vertex)))
            rels.append((("u", u.key), ("e", u.edge)))
        return cls(tuple(els), tuple(rels))


@dataclass(frozen=True, eq=False)
class CatDiagram:
    skeleton: RibbonSkeleton
    mode: str
    poset: ChainPoset
    nodes: Mapping[tuple, CategoryNode]
    edges: Mapping[tuple, FunctorEdge]
    field: Field = Q

    def incidence(self, key) -> Incidence:
        for u in self.skeleton.incidences:
            if u.key == key:
                return u
        raise KeyError(key)

    def restriction_position(self, u: Incidence) -> tuple[int, int]:
        e = self.edges[(("u", u.key), ("v", u.vertex))]
        return e.position, e.twist

    def restricted_object(self, vertex_objects: Mapping[str, PerfComplex], u: Incidence) -> Complex:
        pos, tw = self.restriction_position(u)
        return restrict_object(vertex_objects[u.vertex], pos, tw)


def build_diagram(s: RibbonSkeleton, mode: str = "sheaf", field: Field = Q) -> CatDiagram:
    """Nodes at every poset element; restriction (sheaf) or extension (cosheaf) edges."""
    if mode not in ("sheaf", "cosheaf"):
        raise ValueError(f"mode must be 'sheaf' or 'cosheaf', not {mode!r}")
    poset = ChainPoset.of(s)
    nodes: dict[tuple, CategoryNode] = {}
    for v in s.vertices:
        cyc = s.sectors[v]
        nodes[("v", v)] = cst_node(cyc, cyc.elements[-1])
    for e in s.edges:
        cyc = s.edge_cycle(e)
        nodes[("e", e)] = cst_node(cyc, cyc.elements[0])
    make = cst_edge if mode == "sheaf" else cwst_edge
    edges: dict[tuple, FunctorEdge] = {}
    for u in s.incidences:
        ecyc = s.edge_cycle(u.edge)
        nodes[("u", u.key)] = cst_node(ecyc, ecyc.elements[0])
        try:
            inc = s.inclusion(u)
            edges[(("u", u.key), ("v", u.vertex))] = make(inc, (ecyc.elements[0], nodes[("v", u.vertex)].base),
                                                          field)
        except NotConsecutive as exc:
            raise InvalidIncidence(str(exc)) from None
        ident = SubcycleInclusion(ecyc, ecyc, {x: x for x in ecyc.elements})
        edges[(("u", u.key), ("e", u.edge))] = make(ident, (ecyc.elements[0], ecyc.elements[0]), field)
    return CatDiagram(s, mode, poset, nodes, edges, field)


# --- dg functor on morphisms ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Morph:
    """Degree-``deg`` map of mod-2 complexes; ``comps[i]: src^i -> tgt^{i+deg}``."""

    src: Complex
    tgt: Complex
    deg: int
    comps: Mapping[int, ExactMatrix]

    def at(self, i: int) -> ExactMatrix:
        i %= 2
        m = self.comps.get(i)
        if m is None:
            return ExactMatrix.zero(self.tgt.dim(i + self.deg), self.src.dim(i), self.src.field)
        return m


def compose(f: Morph, g: Morph) -> Morph:
    """``f o g`` (apply ``g`` first)."""
    return Morph(g.src, f.tgt, (f.deg + g.deg) % 2, {i: f.at(i + g.deg) @ g.at(i) for i in (0, 1)})


def shift_morph(f: Morph, n: int) -> Morph:
    sign = -1 if (n * f.deg) % 2 else 1
    return Morph(shift(f.src, n), shift(f.tgt, n), f.deg, {i: f.at(i + n).scale(sign) for i in (0, 1)})


def _eval_morph(f: Morph, x: PerfComplex, y: PerfComplex, v: int) -> Morph:
    xs, ys = x.evaluate(v), y.evaluate(v)
    comps = {}
    for i in (0, 1):
        cols = {c: t for t, c in enumerate(c for c, a in enumerate(x.labels(i)) if a <= v)}
        rows = {r: t for t, r in enumerate(r for r, a in enumerate(y.labels(i + f.deg)) if a <= v)}
        ent = {(rows[r], cols[c]): val for (r, c), val in f.at(i).entries.items() if r in rows and c in cols}
        comps[i] = ExactMatrix(len(rows), len(cols), ent, x.field)
    return Morph(xs, ys, f.deg, comps)


def restrict_object(x: PerfComplex, position: int, twist: int) -> Complex:
    out = subcycle_restrict(x, position)
    return shift(out, 1) if twist else out


def restrict_morph(f: Morph, x: PerfComplex, y: PerfComplex, position: int, twist: int) -> Morph:
    """The restriction functor applied to a morphism of projective complexes."""
    n = x.quiver.n
    fld = x.field
    if position == 1:
        out = shift_morph(_eval_morph(f, x, y, 1), -1)
    elif position == n + 1:
        out = _eval_morph(f, x, y, n)
    else:
        v = position - 1
        lo, hi = _eval_morph(f, x, y, v), _eval_morph(f, x, y, v + 1)
        cx, cy = subcycle_restrict(x, position), subcycle_restrict(y, position)
        sign = -1 if f.deg % 2 else 1
        comps = {}
        p = f.deg
        for k in (0, 1):
            # cone^k = X_v^{k+1} + X_{v+1}^k, before the final [-1]
            m = block([[lo.at(k + 1).scale(sign), None], [None, hi.at(k)]],
                      [lo.tgt.dim(k + 1 + p), hi.tgt.dim(k + p)], [lo.src.dim(k + 1), hi.src.dim(k)], fld)
            comps[k] = m
        conex, coney = shift(cx, 1), shift(cy, 1)
        out = shift_morph(Morph(conex, coney, p, comps), -1)
        out = Morph(cx, cy, p, out.comps)
    if twist:
        out = shift_morph(out, 1)
    return out


def _unit_morph(hom: HomComplex, n: int, t: int, src: Complex, tgt: Complex) -> Morph:
    i, r, c = hom.basis(n)[t]
    comps = {j: ExactMatrix.zero(tgt.dim(j + n), src.dim(j), src.field) for j in (0, 1)}
    comps[i % 2] = ExactMatrix(tgt.dim(i + n), src.dim(i), {(r, c): 1}, src.field)
    return Morph(src, tgt, n % 2, comps)


def _morph_vector(hom: HomComplex, n: int, f: Morph) -> dict[int, object]:
    idx = hom.index(n)
    out = {}
    for i in (0, 1):
        for (r, c), val in f.at(i).entries.items():
            out[idx[(i, r, c)]] = val
    return out


# --- limit objects ------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LimitObject:
    """A compatible family: objects at vertices and edges plus gluing certificates.

    ``certificates[u]`` is a quasi-isomorphism from the restriction of the
    vertex object to the edge object.
    """

    vertex_objects: Mapping[str, PerfComplex]
    edge_objects: Mapping[str, Complex]
    certificates: Mapping[tuple, ChainMap]
    name: str = ""

    def restricted(self, d: CatDiagram, u: Incidence) -> Complex:
        pos, tw = d.restriction_position(u)
        return restrict_object(self.vertex_objects[u.vertex], pos, tw)

    def validate(self, d: CatDiagram):
        s = d.skeleton
        for v in s.vertices:
            x = self.vertex_objects.get(v)
            if x is None or x.grading != MOD2 or x.quiver != d.nodes[("v", v)].quiver:
                raise CertificateFailure(f"vertex {v}: missing or mismatched object")
        for e in s.edges:
            if e not in self.edge_objects or self.edge_objects[e].grading != MOD2:
                raise CertificateFailure(f"edge {e}: missing object")
        for u in s.incidences:
            f = self.certificates.get(u.key)
            if f is None:
                raise CertificateFailure(f"incidence {u.key}: missing certificate")
            try:
                ChainMap(self.restricted(d, u), self.edge_objects[u.edge], dict(f.components))
            except ValueError as exc:
                raise CertificateFailure(f"incidence {u.key}: {exc}") from None
            if not is_quasi_iso(f):
                raise CertificateFailure(f"incidence {u.key}: certificate is not a quasi-isomorphism")

    def restrict_to(self, sub: RibbonSkeleton) -> "LimitObject":
        return LimitObject({v: self.vertex_objects[v] for v in sub.vertices},
                           {e: self.edge_objects[e] for e in sub.edges},
                           {u.key: self.certificates[u.key] for u in sub.incidences}, self.name)


def _scale_map(f: ChainMap, c) -> ChainMap:
    """Post-compose with ``c`` (a scalar, or a pair scaling degrees 0 and 1)."""
    cs = c if isinstance(c, tuple) else (c, c)
    return ChainMap(f.source, f.target, {k: m.scale(cs[k % 2]) for k, m in f.components.items()}, check=False)


def minimal_model(c: Complex) -> Complex:
    """Zero-differential complex with the same cohomology."""
    h = cohomology(c)
    return Complex({k: h[k] for k in (0, 1)}, {}, grading=MOD2, field=c.field)


def glue_family(d: CatDiagram, vertex_objects: Mapping[str, PerfComplex],
                edge_objects: Mapping[str, Complex] | None = None,
                monodromy: Mapping[tuple, object] | None = None, name: str = "") -> LimitObject:
    """Assemble a family from vertex objects, searching for gluing certificates.

    An edge without an explicit object carries the minimal model of its first
    restriction.  ``monodromy[u]`` post-composes the certificate at incidence
    ``u`` with a scalar, or with a pair of scalars acting on the even and odd
    parts of the (minimal) edge object.
    """
    s = d.skeleton
    vobj = {v: fold_perf(x) for v, x in vertex_objects.items()}
    eobj = {e: _fold_complex(c) for e, c in (edge_objects or {}).items()}
    certs: dict[tuple, ChainMap] = {}
    for e in s.edges:
        incs = s.incidences_at(e)
        if e not in eobj:
            if not incs:
                raise CertificateFailure(f"edge {e} has no endpoint and no object")
            eobj[e] = minimal_model(d.restricted_object(vobj, incs[0]))
        for u in incs:
            r = d.restricted_object(vobj, u)
            f = find_quasi_iso(r, eobj[e])
            if f is None:
                raise CertificateFailure(f"no quasi-isomorphism at incidence {u.key}")
            c = (monodromy or {}).get(u.key)
            if c is not None:
                if isinstance(c, tuple):
                    if eobj[e].differentials:
                        raise CertificateFailure("parity-wise scaling needs a zero-differential edge object")
                    c = (d.field(c[0]), d.field(c[1]))
                else:
                    c = d.field(c)
                f = _scale_map(f, c)
            certs[u.key] = f
    out = LimitObject(vobj, eobj, certs, name)
    out.validate(d)
    return out


def _fold_complex(c: Complex) -> Complex:
    from .complexes import fold
    return fold(c)


def shift_family(x: LimitObject, n: int) -> LimitObject:
    """``x[n]`` componentwise (folded, so only the parity of ``n`` matters)."""
    if n % 2 == 0:
        return x
    from .quivers import shift as shift_perf
    certs = {}
    for k, f in x.certificates.items():
        m = Morph(f.source, f.target, 0, dict(f.components))
        g = shift_morph(m, 1)
        certs[k] = ChainMap(g.src, g.tgt, dict(g.comps), check=False)
    return LimitObject({v: shift_perf(p, 1) for v, p in x.vertex_objects.items()},
                       {e: shift(c, 1) for e, c in x.edge_objects.items()}, certs, x.name and f"{x.name}[1]")


# --- Hom in the limit -----------------------------------------------------------------------

def _cert_morph(f: ChainMap) -> Morph:
    return Morph(f.source, f.target, 0, {i: f.at(i) for i in (0, 1)})


class LimitHom:
    """Two-layer totalization ``cone(delta)[-1]`` of Hom between two families.

    Layer 0 holds Hom at every vertex and edge; layer 1 holds, for every
    incidence ``u``, Hom from the restricted vertex object of ``x`` to the
    edge object of ``y``; ``delta(f)_u = phi^y_u r_u(f_v) - f_e phi^x_u``.
    Degree ``n`` of the total complex is ``C0^n + C1^{n-1}``.
    """

    def __init__(self, d: CatDiagram, x: LimitObject, y: LimitObject, check: bool = True):
        if check:
            x.validate(d)
            y.validate(d)
        self.d, self.x, self.y = d, x, y
        s = d.skeleton
        self.layer0: list[tuple[str, str, HomComplex, Complex, Complex]] = []
        for v in s.vertices:
            xv, yv = x.vertex_objects[v], y.vertex_objects[v]
            self.layer0.append(("v", v, quiver_hom_complex(xv, yv), xv.label_complex(), yv.label_complex()))
        for e in s.edges:
            xe, ye = x.edge_objects[e], y.edge_objects[e]
            self.layer0.append(("e", e, HomComplex(xe, ye), xe, ye))
        self.layer1: list[tuple[Incidence, HomComplex]] = [
            (u, HomComplex(x.restricted(d, u), y.edge_objects[u.edge])) for u in s.incidences]
        self.off0 = {n: _offsets([h.dim(n) for _, _, h, _, _ in self.layer0]) for n in (0, 1)}
        self.off1 = {n: _offsets([h.dim(n) for _, h in self.layer1]) for n in (0, 1)}
        self.complex = self._assemble()

    def _assemble(self) -> Complex:
        d, x, y = self.d, self.x, self.y
        fld = d.field
        layer0, layer1 = self.layer0, self.layer1
        diffs0, diffs1, delta = {}, {}, {}
        for n in (0, 1):
            diffs0[n] = block([[h.d(n) if i == j else None for j, (_, _, h, _, _) in enumerate(layer0)]
                               for i, (_, _, h, _, _) in enumerate(layer0)],
                              [h.dim(n + 1) for _, _, h, _, _ in layer0], [h.dim(n) for _, _, h, _, _ in layer0],
                              fld)
            diffs1[n] = block([[h.d(n) if i == j else None for j, (_, h) in enumerate(layer1)]
                               for i, (_, h) in enumerate(layer1)],
                              [h.dim(n + 1) for _, h in layer1], [h.dim(n) for _, h in layer1], fld)
            ent: dict[tuple[int, int], object] = {}
            pos0 = {(kind, name): off for (kind, name, _, _, _), off in zip(layer0, self.off0[n][0])}
            hom0 = {(kind, name): (h, xs, ys) for kind, name, h, xs, ys in layer0}
            for (u, h1), off1 in zip(layer1, self.off1[n][0]):
                pos, tw = d.restriction_position(u)
                phi_x = _cert_morph(x.certificates[u.key])
                phi_y = _cert_morph(y.certificates[u.key])
                h, xs, ys = hom0[("v", u.vertex)]
                base = pos0[("v", u.vertex)]
                xv, yv = x.vertex_objects[u.vertex], y.vertex_objects[u.vertex]
                for t in range(h.dim(n)):
                    g = restrict_morph(_unit_morph(h, n, t, xs, ys), xv, yv, pos, tw)
                    for row, val in _morph_vector(h1, n, compose(phi_y, g)).items():
                        ent[(off1 + row, base + t)] = ent.get((off1 + row, base + t), 0) + val
                h, xs, ys = hom0[("e", u.edge)]
                base = pos0[("e", u.edge)]
                for t in range(h.dim(n)):
                    g = compose(_unit_morph(h, n, t, xs, ys), phi_x)
                    for row, val in _morph_vector(h1, n, g).items():
                        ent[(off1 + row, base + t)] = ent.get((off1 + row, base + t), 0) - val
            delta[n] = ExactMatrix(self.off1[n][1], self.off0[n][1], ent, fld)
        terms = {n: self.off0[n][1] + self.off1[(n + 1) % 2][1] for n in (0, 1)}
        out = {}
        for n in (0, 1):
            m = (n + 1) % 2
            out[n] = block([[diffs0[n], None], [delta[n], diffs1[m].scale(-1)]],
                           [self.off0[m][1], self.off1[n][1]], [self.off0[n][1], self.off1[m][1]], fld)
        return Complex(terms, out, grading=MOD2, field=fld)

    def decode(self, vec: Sequence, n: int) -> tuple[dict, dict]:
        """Split a degree-``n`` element into layer-0 morphisms and incidence homotopies."""
        n %= 2
        m = (n + 1) % 2
        parts0 = {}
        for (kind, name, h, xs, ys), off in zip(self.layer0, self.off0[n][0]):
            parts0[(kind, name)] = _vector_morph(h, n, vec[off:off + h.dim(n)], xs, ys)
        base = self.off0[n][1]
        parts1 = {}
        for (u, h), off in zip(self.layer1, self.off1[m][0]):
            seg = vec[base + off:base + off + h.dim(m)]
            parts1[u.key] = _vector_morph(h, m, seg, h.x, h.y)
        return parts0, parts1

    def encode(self, parts0: Mapping, parts1: Mapping, n: int) -> list:
        n %= 2
        m = (n + 1) % 2
        fld = self.d.field
        out = [fld.zero()] * self.complex.dim(n)
        for (kind, name, h, _, _), off in zip(self.layer0, self.off0[n][0]):
            for i, v in _morph_vector(h, n, parts0[(kind, name)]).items():
                out[off + i] += v
        base = self.off0[n][1]
        for (u, h), off in zip(self.layer1, self.off1[m][0]):
            for i, v in _morph_vector(h, m, parts1[u.key]).items():
                out[base + off + i] += v
        return out


def _offsets(sizes: Sequence[int]) -> tuple[list[int], int]:
    out, t = [], 0
    for z in sizes:
        out.append(t)
        t += z
    return out, t


def _vector_morph(h: HomComplex, n: int, seg: Sequence, src: Complex, tgt: Complex) -> Morph:
    fld = src.field
    ents: dict[int, dict] = {0: {}, 1: {}}
    for (i, r, c), v in zip(h.basis(n), seg):
        if v:
            ents[i % 2][(r, c)] = v
    comps = {i: ExactMatrix(tgt.dim(i + n), src.dim(i), ents[i], fld) for i in (0, 1)}
    return Morph(src, tgt, n % 2, comps)


def _add_morph(f: Morph, g: Morph, scale=1) -> Morph:
    return Morph(f.src, f.tgt, f.deg, {i: f.at(i) + g.at(i).scale(scale) for i in (0, 1)})


def limit_compose(d: CatDiagram, hom_xy: LimitHom, hom_yz: LimitHom, g: Sequence, g_deg: int,
                  f: Sequence, f_deg: int, hom_xz: LimitHom) -> list:
    """``g o f`` in the limit: ``(g, k) o (f, h) = (g f, k r(f_v) + (-1)^{|g|} g_e h)``."""
    f0, f1 = hom_xy.decode(f, f_deg)
    g0, g1 = hom_yz.decode(g, g_deg)
    x, y = hom_xy.x, hom_xy.y
    out0 = {key: compose(g0[key], f0[key]) for key in f0}
    sign = -1 if g_deg % 2 else 1
    out1 = {}
    for u in d.skeleton.incidences:
        pos, tw = d.restriction_position(u)
        rf = restrict_morph(f0[("v", u.vertex)], x.vertex_objects[u.vertex], y.vertex_objects[u.vertex], pos, tw)
        out1[u.key] = _add_morph(compose(g1[u.key], rf), compose(g0[("e", u.edge)], f1[u.key]), sign)
    return hom_xz.encode(out0, out1, f_deg + g_deg)


def limit_hom_complex(d: CatDiagram, x: LimitObject, y: LimitObject) -> Complex:
    """Total complex ``cone(delta)[-1]`` of the two-layer totalization."""
    return LimitHom(d, x, y).complex


def limit_hom(d: CatDiagram, x: LimitObject, y: LimitObject) -> GradedSpace:
    c = limit_hom_complex(d, x, y)
    return GradedSpace(MOD2, {n: homology_dim(c.d(n - 1), c.d(n), check=False) for n in (0, 1)})


# --- builders ----------------------------------------------------------------------------------

def _vertex_data(m: int, down: bool, up: bool) -> tuple[list[str], dict[str, tuple[str, str]]]:
    """Counterclockwise sectors at a junction and the sector pair crossing each half-edge."""
    halves = ["E"] + (["N"] if up else []) + ["W"] + (["S"] if down else [])
    names = {("E", "N"): "NE", ("N", "W"): "NW", ("W", "S"): "SW", ("S", "E"): "SE",
             ("E", "W"): "N", ("W", "E"): "S"}
    secs = [f"{m}{names[(halves[i], halves[(i + 1) % len(halves)])]}" for i in range(len(halves))]
    around = {h: (secs[i - 1], secs[i]) for i, h in enumerate(halves)}
    return secs, around


def punctured_sphere_skeleton(n: int) -> RibbonSkeleton:
    """Ladder skeleton: ``n - 1`` circles on a cylinder joined by a vertical arc.

    Vertex ``v<m>`` sits where circle ``c<m>`` meets the arc; circles run in
    the direction of increasing angle and arcs ``a<m>`` run upward.  Middle
    junctions are 4-valent, the two ends trivalent; ``n = 2`` gives one
    circle with a 2-valent marker vertex.
    """
    if n < 2:
        raise ValueError("the punctured-sphere skeleton needs n >= 2")
    vertices, edges, sectors, incs = [], {}, {}, []
    top = n - 1
    for m in range(1, top + 1):
        v = f"v{m}"
        vertices.append(v)
        secs, around = _vertex_data(m, down=m > 1, up=m < top)
        sectors[v] = CyclicSet(secs)
        edges[f"c{m}"] = (v, v)
        # leaving eastward: left side is the sector after E; arriving from the west: before W
        before, after = around["E"]
        incs.append(Incidence(v, f"c{m}", after, before, 0))
        before, after = around["W"]
        incs.append(Incidence(v, f"c{m}", before, after, 1))
        if m < top:
            before, after = around["N"]
            incs.append(Incidence(v, f"a{m}", after, before, 0))
        if m > 1:
            before, after = around["S"]
            incs.append(Incidence(v, f"a{m - 1}", before, after, 0))
    for m in range(1, top):
        edges[f"a{m}"] = (f"v{m}", f"v{m + 1}")
    return RibbonSkeleton(tuple(vertices), edges, sectors, tuple(incs))


@dataclass(frozen=True, eq=False)
class CoverPiece:
    name: str
    kind: str  # "circle", "end", "middle" or "overlap"
    skeleton: RibbonSkeleton
    diagram: CatDiagram


@dataclass(frozen=True, eq=False)
class CoverDiagram:
    n: int
    pieces: tuple[CoverPiece, ...]
    overlaps: tuple[CoverPiece, ...]
    maps: tuple[tuple[str, str], ...]  # (overlap name, piece name)


def cover_diagram(n: int, field: Field = Q) -> CoverDiagram:
    """Cover of the ladder skeleton by end and middle pieces meeting along arcs.

    Piece ``P<m>`` keeps vertex ``v<m>`` with its circle and the adjacent arcs
    as half-infinite edges; the overlap ``O<m>`` is arc ``a<m>`` as an
    infinite edge (a line).
    """
    g = punctured_sphere_skeleton(n)
    top = n - 1
    if top == 1:
        piece = CoverPiece("P1", "circle", g, build_diagram(g, field=field))
        return CoverDiagram(n, (piece,), (), ())
    pieces, overlaps, maps = [], [], []
    for m in range(1, top + 1):
        edges = {f"c{m}": (f"v{m}", f"v{m}")}
        if m > 1:
            edges[f"a{m - 1}"] = (None, f"v{m}")
        if m < top:
            edges[f"a{m}"] = (f"v{m}", None)
        sub = g.sub_skeleton([f"v{m}"], edges)
        kind = "end" if m in (1, top) else "middle"
        pieces.append(CoverPiece(f"P{m}", kind, sub, build_diagram(sub, field=field)))
    for m in range(1, top):
        sub = g.sub_skeleton([], {f"a{m}": (None, None)})
        overlaps.append(CoverPiece(f"O{m}", "overlap", sub, build_diagram(sub, field=field)))
        maps += [(f"O{m}", f"P{m}"), (f"O{m}", f"P{m + 1}")]
    return CoverDiagram(n, tuple(pieces), tuple(overlaps), tuple(maps))


def mayer_vietoris_hom(cover: CoverDiagram, x: LimitObject, y: LimitObject) -> GradedSpace:
    """Limit Hom assembled from the pieces and overlaps of a cover.

    Computes the cohomology of ``cone(prod_P Hom_P -> prod_O Hom_O)[-1]``
    where each overlap receives the difference of the two piece restrictions.
    On an overlap (a bare edge) the restriction of a piece Hom class is its
    edge component, so the map is a projection.
    """
    if not cover.overlaps:
        p = cover.pieces[0]
        return limit_hom(p.diagram, x.restrict_to(p.skeleton), y.restrict_to(p.skeleton))
    fld = cover.pieces[0].diagram.field
    piece_c = {}
    for p in cover.pieces:
        piece_c[p.name] = (limit_hom_complex(p.diagram, x.restrict_to(p.skeleton), y.restrict_to(p.skeleton)), p)
    over_c = {}
    for o in cover.overlaps:
        (e,) = o.skeleton.edges
        over_c[o.name] = (HomComplex(x.edge_objects[e], y.edge_objects[e]).complex(), e)
    # layout of each piece complex: vertex homs, then edge homs (in skeleton order), then incidence terms
    def edge_offset(p: CoverPiece, e: str, n: int) -> int:
        t = 0
        for v in p.skeleton.vertices:
            t += quiver_hom_complex(x.vertex_objects[v], y.vertex_objects[v]).dim(n)
        for e2 in p.skeleton.edges:
            if e2 == e:
                return t
            t += HomComplex(x.edge_objects[e2], y.edge_objects[e2]).dim(n)
        raise KeyError(e)

    pieces = list(piece_c)
    overs = list(over_c)
    diffs0, diffs1, delta = {}, {}, {}
    size0 = {n: [piece_c[p][0].dim(n) for p in pieces] for n in (0, 1)}
    size1 = {n: [over_c[o][0].dim(n) for o in overs] for n in (0, 1)}
    for n in (0, 1):
        diffs0[n] = block([[piece_c[p][0].d(n) if i == j else None for j, p in enumerate(pieces)]
                           for i, p in enumerate(pieces)], size0[(n + 1) % 2], size0[n], fld)
        diffs1[n] = block([[over_c[o][0].d(n) if i == j else None for j, o in enumerate(overs)]
                           for i, o in enumerate(overs)], size1[(n + 1) % 2], size1[n], fld)
        ent = {}
        col0 = {p: sum(size0[n][:i]) for i, p in enumerate(pieces)}
        row0 = {o: sum(size1[n][:i]) for i, o in enumerate(overs)}
        for o_name, p_name in cover.maps:
            sign = 1 if int(p_name[1:]) == int(o_name[1:]) else -1
            oc, e = over_c[o_name]
            pc, p = piece_c[p_name]
            off = edge_offset(p, e, n)
            for t in range(oc.dim(n)):
                ent[(row0[o_name] + t, col0[p_name] + off + t)] = sign
        delta[n] = ExactMatrix(sum(size1[n]), sum(size0[n]), ent, fld)
    tot0 = {n: sum(size0[n]) for n in (0, 1)}
    tot1 = {n: sum(size1[n]) for n in (0, 1)}
    out = {}
    for n in (0, 1):
        m = (n + 1) % 2
        out[n] = block([[diffs0[n], None], [delta[n], diffs1[m].scale(-1)]],
                       [tot0[m], tot1[n]], [tot0[n], tot1[m]], fld)
    c = Complex({n: tot0[n] + tot1[(n + 1) % 2] for n in (0, 1)}, out, grading=MOD2, field=fld)
    return GradedSpace(MOD2, {n: homology_dim(c.d(n - 1), c.d(n), check=False) for n in (0, 1)})


__all__ = [
    "InvalidIncidence", "CertificateFailure", "SkeletonParseError", "Incidence", "RibbonSkeleton",
    "parse_skeleton", "load_skeleton", "ChainPoset", "CatDiagram", "build_diagram", "Morph", "compose",
    "shift_morph", "restrict_object", "restrict_morph", "LimitObject", "glue_family", "shift_family",
    "limit_hom_complex", "limit_hom", "LimitHom", "limit_compose", "punctured_sphere_skeleton", "CoverPiece", "CoverDiagram",
    "cover_diagram", "mayer_vietoris_hom",
]
