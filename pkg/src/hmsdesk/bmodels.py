"""B-side models at generator level.

* matrix factorizations of ``W = z_1 ... z_{n+1}`` and their Hom cohomology;
* hyperplane generators ``O^a`` on ``X_{n-1} = {z_1 ... z_n = 0}`` via
  truncated 2-periodic resolutions, and the folding comparison with
  matrix factorizations in one more variable;
* derived restriction to coordinate subspaces (Koszul restriction);
* Kronecker modules (the projective line), torsion modules over ``k[t]``
  (the affine line and the punctured line), and finite modules over the
  node ``k[x, y]/(xy)``;
* Ext on chains of rational curves assembled from local computations.

Every Ext table is computed from explicit complexes; the quotient-ring
formulas only ever appear as independent oracles in the tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .complexes import Complex, cohomology, fold, shift
from .exactlin import ExactMatrix, Field, GradedSpace, Q, block, matrix_from_columns, rank, solve
from .polyring import (FreeComplex, MonomialIdeal, MultiMonomial, NotHomogeneous, _compose, free_hom_complex,
                       monomials_of_degree, multidegrees_above, poly_add, set_variables_zero, slice_complex,
                       truncated_cohomology)


class IndexOutOfRange(ValueError):
    pass


class AlgebraMismatch(ValueError):
    pass


class TruncationTooSmall(ValueError):
    pass


class NotXInvertible(ValueError):
    pass


def _check_index(nvars: int, a: int):
    if not 1 <= a <= nvars:
        raise IndexOutOfRange(f"index {a} outside 1..{nvars}")


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


# --- matrix factorizations ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MatrixFactorization:
    """Free ``Z/2``-graded module with ``d^2 = W``.

    ``d0`` maps even generators to odd ones and ``d1`` odd to even, as
    ``{(row, col): poly}``.  Generator shifts make ``d1`` homogeneous of
    degree 0 and ``d0`` homogeneous of degree ``W``.
    """

    nvars: int
    superpotential: MultiMonomial
    even_shifts: tuple[tuple[int, ...], ...]
    odd_shifts: tuple[tuple[int, ...], ...]
    d0: Mapping[tuple[int, int], Mapping]
    d1: Mapping[tuple[int, int], Mapping]
    field: Field = Q

    def __post_init__(self):
        object.__setattr__(self, "d0", MappingProxyType(dict(self.d0)))
        object.__setattr__(self, "d1", MappingProxyType(dict(self.d1)))
        self.validate()

    @property
    def even_rank(self) -> int:
        return len(self.even_shifts)

    @property
    def odd_rank(self) -> int:
        return len(self.odd_shifts)

    def shifts(self, parity: int):
        return self.even_shifts if parity % 2 == 0 else self.odd_shifts

    def d(self, parity: int):
        return self.d0 if parity % 2 == 0 else self.d1

    def validate(self):
        w = self.superpotential.exponents
        wpoly = {w: 1}
        for p, (src, tgt) in ((0, (self.even_rank, self.odd_rank)), (1, (self.odd_rank, self.even_rank))):
            sq = _compose(self.d(p + 1), self.d(p))
            expect = {(i, i): wpoly for i in range(src)}
            if {k: v for k, v in sq.items()} != expect:
                raise ValueError("d^2 is not W times the identity")
            for (r, c), q in self.d(p).items():
                extra = w if p == 0 else (0,) * self.nvars
                for mon in q:
                    if _vadd(self.shifts(p + 1)[r], mon) != _vadd(self.shifts(p)[c], extra):
                        raise NotHomogeneous(f"entry {(r, c)} of d{p} is not homogeneous")


def mf_generator(n: int, a: int, field: Field = Q) -> MatrixFactorization:
    """``A --W/z_a--> A --z_a--> A`` in ``MF(A^{n+1}, z_1 ... z_{n+1})``."""
    nv = n + 1
    _check_index(nv, a)
    w = MultiMonomial.product_of_all(nv)
    za = MultiMonomial.var(nv, a)
    return MatrixFactorization(nv, w, ((0,) * nv,), (za.exponents,),
                               {(0, 0): {(w / za).exponents: 1}}, {(0, 0): {za.exponents: 1}}, field)


def mf_hom_complex(x: MatrixFactorization, y: MatrixFactorization, lo: int = -1, hi: int = 2) -> FreeComplex:
    """Unfurled Hom complex in degrees ``lo..hi``.

    A unit ``e_c -> e'_r`` from parity ``q`` to parity ``q'`` sits in degree
    ``j`` with shift ``s'_r - s_c - k W`` where ``k = (j - q + q') / 2``, so
    every differential entry is homogeneous and ``Hom^{2k}`` is twisted by
    ``-k W``.
    """
    if x.nvars != y.nvars or x.superpotential != y.superpotential or x.field != y.field:
        raise AlgebraMismatch("matrix factorizations over different algebras")
    w = x.superpotential.exponents
    units: dict[int, list[tuple[int, int, int]]] = {}
    terms = {}
    for j in range(lo, hi + 1):
        lst, sh = [], []
        for q in (0, 1):
            qt = (q + j) % 2
            for c, sc in enumerate(x.shifts(q)):
                for r, sr in enumerate(y.shifts(qt)):
                    k = (j - q + qt) // 2
                    lst.append((q, c, r))
                    sh.append(tuple(a - b - k * e for a, b, e in zip(sr, sc, w)))
        units[j], terms[j] = lst, sh
    diffs = {}
    for j in range(lo, hi):
        tgt = {u: t for t, u in enumerate(units[j + 1])}
        sign = -1 if j % 2 else 1
        ent: dict[tuple[int, int], dict] = {}
        for col, (q, c, r) in enumerate(units[j]):
            qt = (q + j) % 2
            for (r2, r1), p in y.d(qt).items():
                if r1 == r:
                    key = (tgt[(q, c, r2)], col)
                    ent[key] = poly_add(ent.get(key, {}), p)
            for (c1, c2), p in x.d(q + 1).items():
                if c1 == c:
                    key = (tgt[((q + 1) % 2, c2, r)], col)
                    ent[key] = poly_add(ent.get(key, {}), p, -sign)
        diffs[j] = {k: v for k, v in ent.items() if v}
    return FreeComplex(x.nvars, terms, diffs, field=x.field)


def mf_hom_cohomology(x: MatrixFactorization, y: MatrixFactorization, bound: int) -> dict[str, list[int]]:
    """Even and odd Hom cohomology by total degree ``0..bound``.

    Even classes are read off at unfurled degree 0 and reported at their
    multidegree; odd classes at unfurled degree 1, reported one degree up
    (the degree of the corresponding map into the shifted target).
    """
    u = mf_hom_complex(x, y, -1, 2)
    out = {"even": [0] * (bound + 1), "odd": [0] * (bound + 1)}
    for parity, name, offset in ((0, "even", 0), (1, "odd", 1)):
        shifts = [s for j in (parity - 1, parity, parity + 1) for s in u.shifts(j)]
        lower = tuple(min(s[i] for s in shifts) for i in range(u.nvars))
        for m in multidegrees_above(lower, bound - offset):
            deg = sum(m) + offset
            if deg < 0:
                continue
            h = cohomology(slice_complex(u, m))[parity]
            out[name][deg] += h
    return out


# --- coherent generators on X_{n-1} ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CoherentGenerator:
    """A generator with a truncated free resolution over its ambient ring.

    ``reference_degrees[j]`` is the total degree of the generators of the
    resolution in homological degree ``j``; Ext classes are reported at
    ``|m| + reference_degrees[j]``, the polynomial degree of the coefficient.
    """

    variant: str  # "hyperplane" or "node"
    n: int
    index: int
    resolution: FreeComplex
    valid_length: int
    reference_degrees: tuple[int, ...]
    module: FreeComplex  # the generator itself as a rank-1 quotient module


def _hyperplane_shift(n: int, a: int, j: int) -> tuple[int, ...]:
    w = (1,) * n
    ea = MultiMonomial.var(n, a).exponents
    base = tuple((j // 2) * x for x in w)
    return _vadd(base, ea) if j % 2 else base


def coh_hyperplane(n: int, a: int, length: int, field: Field = Q) -> CoherentGenerator:
    """``O^a = A_n/(z_a)`` on ``X_{n-1}`` with ``... --W^a--> B --z_a--> B``, truncated at ``length``."""
    _check_index(n, a)
    w = MultiMonomial.product_of_all(n)
    za = MultiMonomial.var(n, a)
    ring = MonomialIdeal(n, [w])
    terms = {-j: [_hyperplane_shift(n, a, j)] for j in range(length + 1)}
    diffs = {}
    for j in range(1, length + 1):
        mon = za if j % 2 else w / za
        diffs[-j] = {(0, 0): {mon.exponents: 1}}
    res = FreeComplex(n, terms, diffs, ideal=ring, field=field)
    mod = FreeComplex(n, {0: [(0,) * n]}, {}, ideal=MonomialIdeal(n, [za]), field=field)
    refs = tuple(sum(_hyperplane_shift(n, a, j)) for j in range(length + 1))
    return CoherentGenerator("hyperplane", n, a, res, length, refs, mod)


def node_skyscraper(length: int, field: Field = Q) -> CoherentGenerator:
    """The residue field of ``k[z_1, z_2]/(z_1 z_2)``; its minimal resolution has ranks ``1, 2, 2, ...``."""
    n = 2
    ring = MonomialIdeal(n, [(1, 1)])
    terms = {0: [(0, 0)]}
    diffs = {}
    if length >= 1:
        terms[-1] = [(1, 0), (0, 1)]
        diffs[-1] = {(0, 0): {(1, 0): 1}, (0, 1): {(0, 1): 1}}
    for j in range(2, length + 1):
        # even steps multiply by (z2, z1), odd steps by (z1, z2), diagonally
        if j % 2 == 0:
            terms[-j] = [(j // 2, j // 2)] * 2
            mons = [(0, 1), (1, 0)]
        else:
            terms[-j] = [(j // 2 + 1, j // 2), (j // 2, j // 2 + 1)]
            mons = [(1, 0), (0, 1)]
        diffs[-j] = {(0, 0): {mons[0]: 1}, (1, 1): {mons[1]: 1}}
    res = FreeComplex(n, terms, diffs, ideal=ring, field=field)
    mod = FreeComplex(n, {0: [(0, 0)]}, {}, ideal=MonomialIdeal(n, [(1, 0), (0, 1)]), field=field)
    return CoherentGenerator("node", 2, 0, res, length, tuple(range(length + 1)), mod)


def ext_table(source: CoherentGenerator, target: CoherentGenerator, max_degree: int,
              poly_bound: int) -> dict[int, list[int]]:
    """``Ext^j(source, target)`` by polynomial degree, for ``j <= max_degree``."""
    if max_degree > source.valid_length - 1:
        raise TruncationTooSmall(f"degree {max_degree} needs a resolution of length {max_degree + 1}, "
                                 f"stored length is {source.valid_length}")
    h = free_hom_complex(source.resolution, target.module)
    out = {}
    for j in range(max_degree + 1):
        counts = [0] * (poly_bound + 1)
        ms = set()
        for s in h.shifts(j):
            for d in range(poly_bound + 1):
                for e in monomials_of_degree(h.nvars, d):
                    ms.add(_vadd(e, s))
        for m in ms:
            deg = sum(m) + source.reference_degrees[j]
            if 0 <= deg <= poly_bound:
                counts[deg] += cohomology(slice_complex(h, m))[j]
        out[j] = counts
    return out


def coh_ext_table(n: int, a: int, b: int, poly_bound: int, u_bound: int, length: int | None = None,
                  field: Field = Q) -> dict[int, list[int]]:
    """``Ext^j(O^a, O^b)`` on ``X_{n-1}`` for ``j <= 2 u_bound + 1`` by polynomial degree."""
    need = 2 * u_bound + 2
    length = need if length is None else length
    if length < need:
        raise TruncationTooSmall(f"u-degree {u_bound} needs resolution length {need}, got {length}")
    src = coh_hyperplane(n, a, length, field)
    tgt = coh_hyperplane(n, b, 0, field)
    return ext_table(src, tgt, 2 * u_bound + 1, poly_bound)


def fold_coh_table(table: Mapping[int, Sequence[int]], bound: int) -> dict[str, list[int]]:
    """Collapse cohomological degree mod 2, regrading ``u^m`` as one more variable of degree ``m``."""
    out = {"even": [0] * (bound + 1), "odd": [0] * (bound + 1)}
    for j, counts in table.items():
        for d, v in enumerate(counts):
            t = d + j // 2
            if t <= bound:
                out["odd" if j % 2 else "even"][t] += v
    return out


def fold_compare(n: int, a: int, bound: int, b: int | None = None, field: Field = Q) -> bool:
    """Folded Ext of ``O^a, O^b`` on ``X_{n-1}`` against ``MF(A^{n+1}, W_{n+1})``, degreewise."""
    b = a if b is None else b
    _check_index(n, a)
    _check_index(n, b)
    coh = fold_coh_table(coh_ext_table(n, a, b, bound, bound, field=field), bound)
    mf = mf_hom_cohomology(mf_generator(n, a, field), mf_generator(n, b, field), bound)
    return coh == mf


# --- Koszul restriction ------------------------------------------------------------------

def koszul_restrict(c: FreeComplex, keep: Iterable[int]) -> FreeComplex:
    """Derived restriction to ``{z_a = 0 : a not in keep}``.

    For a complex of free modules, tensoring with the Koszul complex of the
    dropped variables and taking cohomology is the same as setting them to
    zero termwise, which is what is computed.
    """
    if c.ideal is not None:
        raise ValueError("koszul_restrict needs a complex of free modules over the polynomial ring")
    keep = sorted(set(keep))
    for a in keep:
        _check_index(c.nvars, a)
    return set_variables_zero(c, keep)


def structure_sheaf(nvars: int, field: Field = Q) -> FreeComplex:
    return FreeComplex(nvars, {0: [(0,) * nvars]}, {}, field=field)


def origin_skyscraper(nvars: int, field: Field = Q) -> FreeComplex:
    from .polyring import koszul_complex
    return koszul_complex(nvars, list(range(1, nvars + 1)), field)


def free_complexes_equal(a: FreeComplex, b: FreeComplex) -> bool:
    """Literal equality of presentations (the identity is then a certificate)."""
    if a.nvars != b.nvars or a.grading != b.grading:
        return False
    strip = lambda c: {k: dict(v) for k, v in c.differentials.items() if v}
    return dict(a.terms) == dict(b.terms) and strip(a) == strip(b)


@dataclass(frozen=True, eq=False)
class DescentObject:
    """Presentations over the coordinate subspaces ``A^I`` of a subset diagram.

    ``pieces[I]`` is a complex over the variables of ``I`` (in increasing
    order); ``certificates[(I, J)]`` for ``I`` strictly inside ``J`` records
    how the Koszul restriction of ``pieces[J]`` to ``A^I`` matches
    ``pieces[I]``: ``"identity"`` for equal presentations, ``"cohomology"``
    when only the truncated cohomology tables were compared.
    """

    universe: int
    pieces: Mapping[frozenset, FreeComplex]
    certificates: Mapping[tuple[frozenset, frozenset], str]
    name: str = ""

    def verify(self, bound: int = 4) -> bool:
        for (small, big), kind in self.certificates.items():
            r = restrict_between(self.pieces[big], big, small)
            if kind == "identity":
                if not free_complexes_equal(r, self.pieces[small]):
                    return False
            elif truncated_cohomology(r, bound) != truncated_cohomology(self.pieces[small], bound):
                return False
        return True


def restrict_between(c: FreeComplex, big: Iterable[int], small: Iterable[int]) -> FreeComplex:
    """Koszul restriction from ``A^big`` to ``A^small`` (subsets of coordinate labels)."""
    order = sorted(big)
    return koszul_restrict(c, [order.index(a) + 1 for a in sorted(small)])


def descent_object(universe: int, support: Iterable[int], top: FreeComplex, name: str = "",
                   bound: int = 4) -> DescentObject:
    """Restrict ``top`` (over ``A^support``) to every smaller coordinate subspace, with certificates."""
    support = frozenset(support)
    subsets = [frozenset(c) for r in range(len(support) + 1)
               for c in itertools.combinations(sorted(support), r)]
    pieces = {support: top}
    for sub in subsets:
        if sub != support:
            pieces[sub] = restrict_between(top, support, sub)
    certs = {}
    for small in subsets:
        for big in subsets:
            if small < big:
                r = restrict_between(pieces[big], big, small)
                certs[(small, big)] = "identity" if free_complexes_equal(r, pieces[small]) else "cohomology"
    out = DescentObject(universe, pieces, certs, name)
    if not out.verify(bound):
        raise ValueError("restrictions do not descend")
    return out


# --- Kronecker modules ----------------------------------------------------------------------

def _hom_basis(rows: int, cols: int) -> list[tuple[int, int]]:
    return [(r, c) for c in range(cols) for r in range(rows)]


def _vec_to_matrix(vec: Sequence, rows: int, cols: int, offset: int, fld: Field) -> ExactMatrix:
    ent = {}
    for t, (r, c) in enumerate(_hom_basis(rows, cols)):
        v = vec[offset + t]
        if v:
            ent[(r, c)] = v
    return ExactMatrix(rows, cols, ent, fld)


def _matrix_to_vec(m: ExactMatrix) -> list:
    return [m[(r, c)] for r, c in _hom_basis(m.rows, m.cols)]


@dataclass(frozen=True, eq=False)
class KroneckerModel:
    """Representation ``V_a --x, y--> V_b`` of the Kronecker quiver, placed in a parity."""

    va: int
    vb: int
    x: ExactMatrix
    y: ExactMatrix
    parity: int = 0
    x_invertible: bool = False
    name: str = ""

    def __post_init__(self):
        for m in (self.x, self.y):
            if m.shape != (self.vb, self.va):
                raise ValueError(f"arrow matrix has shape {m.shape}, expected {(self.vb, self.va)}")
        if self.x_invertible and not (self.va == self.vb and rank(self.x) == self.va):
            raise NotXInvertible("x is not invertible")

    @property
    def field(self) -> Field:
        return self.x.field

    def shifted(self, n: int) -> "KroneckerModel":
        return KroneckerModel(self.va, self.vb, self.x, self.y, (self.parity + n) % 2, self.x_invertible,
                              self.name)


def kronecker_structure_sheaf(field: Field = Q) -> KroneckerModel:
    """``O`` on the projective line: the projective at the source vertex."""
    return KroneckerModel(1, 2, ExactMatrix(2, 1, {(0, 0): 1}, field), ExactMatrix(2, 1, {(1, 0): 1}, field),
                          name="O")


def kronecker_twist_minus_one(field: Field = Q) -> KroneckerModel:
    """``O(-1)``: the projective at the target vertex."""
    return KroneckerModel(0, 1, ExactMatrix(1, 0, {}, field), ExactMatrix(1, 0, {}, field), name="O(-1)")


def kronecker_skyscraper(point, field: Field = Q) -> KroneckerModel:
    """Skyscraper at ``t = point`` (``t = y/x``), or at infinity for ``point = "inf"``."""
    if point == "inf":
        return KroneckerModel(1, 1, ExactMatrix(1, 1, {}, field), ExactMatrix.identity(1, field), name="k_inf")
    return KroneckerModel(1, 1, ExactMatrix.identity(1, field), ExactMatrix(1, 1, {(0, 0): point}, field),
                          x_invertible=True, name=f"k_{point}")


def kronecker_hom_complex(m: KroneckerModel, n: KroneckerModel) -> Complex:
    """``RHom`` of the underlying modules in degrees 0 and 1 (parities ignored).

    ``(f_a, f_b) -> (x f_a - f_b x, y f_a - f_b y)``.
    """
    fld = m.field
    b0 = [("a", rc) for rc in _hom_basis(n.va, m.va)] + [("b", rc) for rc in _hom_basis(n.vb, m.vb)]
    b1 = [(arrow, rc) for arrow in ("x", "y") for rc in _hom_basis(n.vb, m.va)]
    idx1 = {b: t for t, b in enumerate(b1)}
    ent: dict[tuple[int, int], object] = {}
    for col, (kind, (r, c)) in enumerate(b0):
        for arrow in ("x", "y"):
            am, an = (m.x, n.x) if arrow == "x" else (m.y, n.y)
            if kind == "a":
                # x_N E_rc: column c of V_a^M to column r of V_a^N, then the arrow
                for (r2, r1), v in an.entries.items():
                    if r1 == r:
                        key = (idx1[(arrow, (r2, c))], col)
                        ent[key] = ent.get(key, 0) + v
            else:
                for (r1, c1), v in am.entries.items():
                    if r1 == c:
                        key = (idx1[(arrow, (r, c1))], col)
                        ent[key] = ent.get(key, 0) - v
    d = ExactMatrix(len(b1), len(b0), ent, fld)
    return Complex({0: len(b0), 1: len(b1)}, {0: d}, field=fld)


def _folded_hom(c: Complex, src_parity: int, tgt_parity: int) -> Complex:
    return fold(shift(c, tgt_parity - src_parity))


def kronecker_ext(m: KroneckerModel, n: KroneckerModel) -> GradedSpace:
    """Folded ``Hom(m[p], n[q])`` cohomology."""
    return cohomology(_folded_hom(kronecker_hom_complex(m, n), m.parity, n.parity))


def kronecker_compose(m: KroneckerModel, n: KroneckerModel, p: KroneckerModel,
                      g: Sequence, g_deg: int, f: Sequence, f_deg: int) -> list:
    """``g o f`` for ``f`` in ``RHom(m, n)`` and ``g`` in ``RHom(n, p)`` (unshifted degrees 0/1)."""
    fld = m.field
    if f_deg + g_deg > 1:
        return [fld.zero()] * kronecker_hom_complex(m, p).dim(f_deg + g_deg)

    def split0(vec, s, t):
        fa = _vec_to_matrix(vec, t.va, s.va, 0, fld)
        fb = _vec_to_matrix(vec, t.vb, s.vb, t.va * s.va, fld)
        return fa, fb

    def split1(vec, s, t):
        size = t.vb * s.va
        return _vec_to_matrix(vec, t.vb, s.va, 0, fld), _vec_to_matrix(vec, t.vb, s.va, size, fld)

    if f_deg == 0 and g_deg == 0:
        fa, fb = split0(f, m, n)
        ga, gb = split0(g, n, p)
        return _matrix_to_vec(ga @ fa) + _matrix_to_vec(gb @ fb)
    if g_deg == 1:
        hx, hy = split1(g, n, p)
        fa, _ = split0(f, m, n)
        return _matrix_to_vec(hx @ fa) + _matrix_to_vec(hy @ fa)
    _, gb = split0(g, n, p)
    hx, hy = split1(f, m, n)
    return _matrix_to_vec(gb @ hx) + _matrix_to_vec(gb @ hy)


def kronecker_fiber(m: KroneckerModel, point) -> Complex:
    """Derived fiber at ``t = point`` (or ``"inf"``): ``V_a --(y - point x)--> V_b`` in degrees -1, 0, folded."""
    fld = m.field
    a = m.x if point == "inf" else m.y - m.x.scale(point)
    c = Complex({-1: m.va, 0: m.vb}, {-1: a}, field=fld)
    return fold(shift(c, -m.parity)) if m.parity else fold(c)


def kronecker_dictionary(m: KroneckerModel) -> tuple["TorsionModule", FreeComplex]:
    """Transport ``y`` along ``x^{-1}``: the ``k[t]``-module with ``t = x^{-1} y``.

    Returns the torsion module and its presentation ``A^V --(t - T)--> A^V``;
    the presentation is homogeneous only when ``T = 0``.
    """
    if not m.x_invertible:
        if not (m.va == m.vb and rank(m.x) == m.va):
            raise NotXInvertible("x is not invertible")
    fld = m.field
    inv = _inverse(m.x)
    t = inv @ m.y
    dim = m.va
    ent = {}
    for i in range(dim):
        ent[(i, i)] = {(1,): 1}
    for (r, c), v in t.entries.items():
        ent[(r, c)] = poly_add(ent.get((r, c), {}), {(0,): v}, -1)
    pres = FreeComplex(1, {-1: [(1,)] * dim, 0: [(0,)] * dim}, {-1: ent}, field=fld, check=False)
    return TorsionModule(dim, t, m.parity, m.name), pres


def kronecker_eta(m: KroneckerModel) -> Complex:
    """Hyperbolic restriction at the marked point: ``cone(y)`` folded."""
    return kronecker_fiber(m, 0)


def _inverse(m: ExactMatrix) -> ExactMatrix:
    n = m.rows
    cols = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        sol = solve(m, e)
        if sol is None:
            raise NotXInvertible("matrix is singular")
        cols.append(sol)
    return matrix_from_columns(cols, n, m.field)


# --- torsion modules over k[t] -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TorsionModule:
    """Finite-dimensional ``k[t]``-module ``(V, T)`` in a parity."""

    dim: int
    t: ExactMatrix
    parity: int = 0
    name: str = ""

    def __post_init__(self):
        if self.t.shape != (self.dim, self.dim):
            raise ValueError("t must be a square matrix of size dim")

    @property
    def field(self) -> Field:
        return self.t.field

    def shifted(self, n: int) -> "TorsionModule":
        return TorsionModule(self.dim, self.t, (self.parity + n) % 2, self.name)


def torsion_point(value, field: Field = Q, parity: int = 0) -> TorsionModule:
    return TorsionModule(1, ExactMatrix(1, 1, {(0, 0): value}, field), parity, f"k_{value}")


def torsion_hom_complex(m: TorsionModule, n: TorsionModule) -> Complex:
    """``Hom(V, W) --(f -> T_W f - f T_V)--> Hom(V, W)`` in degrees 0, 1."""
    fld = m.field
    basis = _hom_basis(n.dim, m.dim)
    idx = {b: t for t, b in enumerate(basis)}
    ent: dict[tuple[int, int], object] = {}
    for col, (r, c) in enumerate(basis):
        for (r2, r1), v in n.t.entries.items():
            if r1 == r:
                ent[(idx[(r2, c)], col)] = ent.get((idx[(r2, c)], col), 0) + v
        for (r1, c1), v in m.t.entries.items():
            if r1 == c:
                ent[(idx[(r, c1)], col)] = ent.get((idx[(r, c1)], col), 0) - v
    d = ExactMatrix(len(basis), len(basis), ent, fld)
    return Complex({0: len(basis), 1: len(basis)}, {0: d}, field=fld)


def torsion_ext(m: TorsionModule, n: TorsionModule) -> GradedSpace:
    return cohomology(_folded_hom(torsion_hom_complex(m, n), m.parity, n.parity))


def torsion_compose(m: TorsionModule, n: TorsionModule, p: TorsionModule,
                    g: Sequence, g_deg: int, f: Sequence, f_deg: int) -> list:
    fld = m.field
    if f_deg + g_deg > 1:
        return [fld.zero()] * (p.dim * m.dim)
    fm = _vec_to_matrix(f, n.dim, m.dim, 0, fld)
    gm = _vec_to_matrix(g, p.dim, n.dim, 0, fld)
    return _matrix_to_vec(gm @ fm)


def torsion_fiber(m: TorsionModule, point) -> Complex:
    """Derived fiber ``V --(T - point)--> V`` in degrees -1, 0, folded with the module's parity."""
    fld = m.field
    a = m.t - ExactMatrix.identity(m.dim, fld).scale(point)
    c = Complex({-1: m.dim, 0: m.dim}, {-1: a}, field=fld)
    return fold(shift(c, -m.parity)) if m.parity else fold(c)


# --- finite modules over the node k[x, y]/(xy) -----------------------------------------------

@dataclass(frozen=True, eq=False)
class NodalModule:
    """``R/(f)`` for a non-zero-divisor ``f`` of ``R = k[x, y]/(xy)``, with ``R/(f)`` finite.

    ``x`` and ``y`` act on a basis whose first vector is the class of 1.
    ``Ext(R/(f), M) = H(M --f--> M)`` because ``0 -> R --f--> R`` resolves ``R/(f)``.
    """

    f: Mapping[tuple[int, int], object]
    x: ExactMatrix
    y: ExactMatrix
    parity: int = 0
    name: str = ""

    def __post_init__(self):
        n = self.x.rows
        if (self.x @ self.y).entries or (self.y @ self.x).entries:
            raise ValueError("x y must act by zero")
        if not self.act(self.f).is_zero():
            raise ValueError("f must annihilate the module")
        span = rank(self._cyclic_span())
        if span != n:
            raise ValueError("the class of 1 must generate the module")

    @property
    def dim(self) -> int:
        return self.x.rows

    @property
    def field(self) -> Field:
        return self.x.field

    def act(self, p: Mapping[tuple[int, int], object]) -> ExactMatrix:
        fld = self.field
        out = ExactMatrix.zero(self.dim, self.dim, fld)
        for (i, j), c in p.items():
            term = ExactMatrix.identity(self.dim, fld)
            for _ in range(i):
                term = self.x @ term
            for _ in range(j):
                term = self.y @ term
            out = out + term.scale(c)
        return out

    def _cyclic_span(self) -> ExactMatrix:
        fld = self.field
        e0 = ExactMatrix(self.dim, 1, {(0, 0): 1}, fld)
        cols = [e0]
        for mat in (self.x, self.y):
            v = e0
            for _ in range(self.dim):
                v = mat @ v
                cols.append(v)
        return block([cols], [self.dim], [1] * len(cols), fld)


def nodal_point_on_branch(branch: int, value, field: Field = Q) -> NodalModule:
    """``R/(x - value)`` (branch 1) or ``R/(y - value)`` (branch 2), ``value != 0``: a point off the node."""
    if not value:
        raise ValueError("the point must lie off the node")
    fld = field
    v = ExactMatrix(1, 1, {(0, 0): value}, fld)
    z = ExactMatrix(1, 1, {}, fld)
    if branch == 1:
        return NodalModule({(1, 0): 1, (0, 0): -value}, v, z, name=f"x={value}")
    return NodalModule({(0, 1): 1, (0, 0): -value}, z, v, name=f"y={value}")


def nodal_line(c, field: Field = Q) -> NodalModule:
    """``R/(x + c y)``, ``c != 0``: basis ``1, y`` with ``x = -c y`` and ``y^2 = 0``."""
    if not c:
        raise ValueError("c must be nonzero")
    y = ExactMatrix(2, 2, {(1, 0): 1}, field)
    return NodalModule({(1, 0): 1, (0, 1): c}, y.scale(-c), y, name=f"x+{c}y")


def nodal_hom_complex(m: NodalModule, n: NodalModule) -> Complex:
    return Complex({0: n.dim, 1: n.dim}, {0: n.act(m.f)}, field=m.field)


def nodal_ext(m: NodalModule, n: NodalModule) -> GradedSpace:
    return cohomology(_folded_hom(nodal_hom_complex(m, n), m.parity, n.parity))


# --- chains of rational curves ----------------------------------------------------------------

def _parse_chain_generator(m: int, g: str) -> tuple[str, int]:
    kind, idx = g[0], int(g[1:])
    if kind == "O" and 1 <= idx <= m - 1:
        return kind, idx
    if kind == "p" and 1 <= idx <= m - 2:
        return kind, idx
    raise IndexOutOfRange(f"generator {g!r} not on the chain Q_{m}")


def _local_generator(kind: str, branch: int, length: int, field: Field) -> CoherentGenerator:
    return coh_hyperplane(2, branch, length, field) if kind == "O" else node_skyscraper(length, field)


def _add_tables(acc: dict[int, list[int]], t: Mapping[int, Sequence[int]], from_degree: int = 0):
    for j, row in t.items():
        if j < from_degree:
            continue
        cur = acc.setdefault(j, [0] * len(row))
        for i, v in enumerate(row):
            cur[i] += v


def nodal_chain_ext(m: int, g1: str, g2: str, poly_bound: int = 6, u_bound: int = 3,
                    field: Field = Q) -> dict[int, list[int]]:
    """Ext on ``Q_m`` (``m - 1`` components in a chain, ``m - 2`` nodes).

    Generators: ``O<i>`` (structure sheaf of component ``i``; the two ends
    are affine lines, the rest projective lines) and ``p<j>`` (skyscraper at
    node ``j``, where components ``j`` and ``j + 1`` meet).  The table is
    assembled by descent: global sections of the Hom sheaf in degree 0 plus
    the local Ext at each node, computed from truncated resolutions over the
    node ring; the higher Ext sheaves are supported at nodes.
    """
    if m < 3:
        raise ValueError("the chain needs m >= 3")
    k1, i1 = _parse_chain_generator(m, g1)
    k2, i2 = _parse_chain_generator(m, g2)
    top = 2 * u_bound + 1
    length = top + 1
    table: dict[int, list[int]] = {j: [0] * (poly_bound + 1) for j in range(top + 1)}

    def nodes_of(kind, i):
        # local charts: node j has component j on branch 1 and component j + 1 on branch 2
        if kind == "O":
            return {j: (1 if j == i else 2) for j in (i - 1, i) if 1 <= j <= m - 2}
        return {i: 0}

    n1, n2 = nodes_of(k1, i1), nodes_of(k2, i2)
    same_sheaf = (k1, i1) == (k2, i2)
    if same_sheaf and k1 == "O":
        ends = (1, m - 1)
        h0 = [1] * (poly_bound + 1) if i1 in ends else [1] + [0] * poly_bound
        table[0] = h0
    for j in sorted(set(n1) & set(n2)):
        src = _local_generator(k1, n1[j], length, field)
        tgt = _local_generator(k2, n2[j], 0, field)
        local = ext_table(src, tgt, top, poly_bound)
        # a shared component's Hom sheaf is global; its local germs are counted once above
        _add_tables(table, local, from_degree=1 if same_sheaf and k1 == "O" else 0)
    return table


__all__ = [
    "IndexOutOfRange", "AlgebraMismatch", "TruncationTooSmall", "NotXInvertible", "NotHomogeneous",
    "MatrixFactorization", "mf_generator", "mf_hom_complex", "mf_hom_cohomology",
    "CoherentGenerator", "coh_hyperplane", "node_skyscraper", "ext_table", "coh_ext_table", "fold_coh_table",
    "fold_compare", "koszul_restrict", "free_complexes_equal", "DescentObject", "restrict_between",
    "descent_object", "structure_sheaf", "origin_skyscraper",
    "KroneckerModel", "kronecker_structure_sheaf", "kronecker_twist_minus_one", "kronecker_skyscraper",
    "kronecker_hom_complex", "kronecker_ext", "kronecker_compose", "kronecker_fiber", "kronecker_dictionary",
    "kronecker_eta", "TorsionModule", "torsion_point", "torsion_hom_complex", "torsion_ext", "torsion_compose",
    "torsion_fiber", "NodalModule", "nodal_point_on_branch", "nodal_line", "nodal_hom_complex", "nodal_ext",
    "nodal_chain_ext",
]
