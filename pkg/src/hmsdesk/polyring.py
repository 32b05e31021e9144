"""Multigraded polynomial rings over the session field.

Monomials are exponent vectors; polynomials are sparse ``{exponents: coeff}``
maps.  A :class:`FreeComplex` is a complex of free modules over ``A`` or over
a monomial quotient ``A/J``; a generator with shift ``s`` spans the
multidegree-``m`` component ``z^{m-s}`` whenever ``m - s >= 0`` and
``z^{m-s}`` is not in ``J``.  Homogeneous differentials therefore split into
finite field-valued slices, which is how every cohomology here is computed
exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .complexes import Complex, cohomology
from .exactlin import INTEGERS, MOD2, ExactMatrix, Field, Q


class NotHomogeneous(ValueError):
    pass


# --- monomials -----------------------------------------------------------------

@dataclass(frozen=True, order=True)
class MultiMonomial:
    exponents: tuple[int, ...]

    def __post_init__(self):
        if any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be nonnegative")

    @classmethod
    def of(cls, *exps: int) -> "MultiMonomial":
        return cls(tuple(exps))

    @classmethod
    def one(cls, nvars: int) -> "MultiMonomial":
        return cls((0,) * nvars)

    @classmethod
    def var(cls, nvars: int, i: int) -> "MultiMonomial":
        """The variable ``z_i`` (1-based)."""
        return cls(tuple(1 if j == i - 1 else 0 for j in range(nvars)))

    @classmethod
    def product_of_all(cls, nvars: int) -> "MultiMonomial":
        return cls((1,) * nvars)

    @property
    def nvars(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __mul__(self, other: "MultiMonomial") -> "MultiMonomial":
        return MultiMonomial(tuple(a + b for a, b in zip(self.exponents, other.exponents, strict=True)))

    def divides(self, other: "MultiMonomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents, strict=True))

    def __truediv__(self, other: "MultiMonomial") -> "MultiMonomial":
        if not other.divides(self):
            raise ValueError(f"{other} does not divide {self}")
        return MultiMonomial(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def __str__(self):
        parts = [f"z{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(self.exponents) if e]
        return "*".join(parts) or "1"


def monomials_of_degree(nvars: int, d: int) -> Iterable[tuple[int, ...]]:
    """All exponent vectors of total degree ``d``."""
    if nvars == 0:
        if d == 0:
            yield ()
        return
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - first):
            yield (first,) + rest


def multidegrees_up_to(nvars: int, bound: int) -> list[tuple[int, ...]]:
    return [m for d in range(bound + 1) for m in monomials_of_degree(nvars, d)]


@dataclass(frozen=True)
class MonomialIdeal:
    nvars: int
    generators: tuple[MultiMonomial, ...]

    def __init__(self, nvars: int, generators: Iterable[MultiMonomial | Sequence[int]] = ()):
        gens = [g if isinstance(g, MultiMonomial) else MultiMonomial(tuple(g)) for g in generators]
        for g in gens:
            if g.nvars != nvars:
                raise ValueError("generator has the wrong number of variables")
        gens = sorted(set(gens))
        reduced = [g for g in gens if not any(h != g and h.divides(g) for h in gens)]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "generators", tuple(reduced))

    def contains(self, m: MultiMonomial | Sequence[int]) -> bool:
        mm = m if isinstance(m, MultiMonomial) else MultiMonomial(tuple(m))
        return any(g.divides(mm) for g in self.generators)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def hilbert_function(ideal: MonomialIdeal, bound: int) -> list[int]:
    """``dim (A/I)_d`` for ``d = 0..bound``, by enumerating standard monomials."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    return [sum(1 for m in monomials_of_degree(ideal.nvars, d) if not ideal.contains(m)) for d in range(bound + 1)]


def free_hilbert(nvars: int, d: int) -> int:
    return comb(d + nvars - 1, nvars - 1) if nvars else int(d == 0)


# --- polynomials -----------------------------------------------------------------

Poly = Mapping[tuple[int, ...], object]


def poly(terms: Mapping[tuple[int, ...] | MultiMonomial, object] | MultiMonomial, coeff=1) -> dict:
    """Build a sparse polynomial from a monomial or a ``{monomial: coeff}`` map."""
    if isinstance(terms, MultiMonomial):
        return {terms.exponents: coeff}
    out = {}
    for m, c in terms.items():
        key = m.exponents if isinstance(m, MultiMonomial) else tuple(m)
        if c:
            out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def poly_mul(p: Poly, q: Poly) -> dict:
    out: dict[tuple[int, ...], object] = {}
    for a, x in p.items():
        for b, y in q.items():
            k = tuple(i + j for i, j in zip(a, b))
            out[k] = out.get(k, 0) + x * y
    return {k: v for k, v in out.items() if v}


def poly_add(p: Poly, q: Poly, scale=1) -> dict:
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + scale * v
    return {k: v for k, v in out.items() if v}


def poly_is_zero(p: Poly, ideal: MonomialIdeal | None = None) -> bool:
    return all(ideal is not None and ideal.contains(m) for m in p) if p else True


# --- free complexes ------------------------------------------------------------------

PolyMatrix = Mapping[tuple[int, int], Poly]


def _key(grading: str, k: int) -> int:
    return k % 2 if grading == MOD2 else k


@dataclass(frozen=True, eq=False)
class FreeComplex:
    """Complex of free multigraded modules over ``A`` (or ``A/J``).

    ``terms[k]`` lists generator shifts; ``differentials[k]`` maps
    ``(row, col)`` to a polynomial, sending generator ``col`` of degree ``k``
    to ``sum_row p * e_row`` in degree ``k + 1``.
    """

    nvars: int
    terms: Mapping[int, tuple[tuple[int, ...], ...]]
    differentials: Mapping[int, Mapping[tuple[int, int], Poly]]
    grading: str = INTEGERS
    ideal: MonomialIdeal | None = None
    field: Field = Q

    def __init__(self, nvars: int, terms: Mapping[int, Sequence[Sequence[int] | MultiMonomial]],
                 differentials: Mapping[int, PolyMatrix] | None = None, grading: str = INTEGERS,
                 ideal: MonomialIdeal | None = None, field: Field = Q, check: bool = True):
        t = {}
        for k, shifts in terms.items():
            k = _key(grading, k)
            lst = tuple(s.exponents if isinstance(s, MultiMonomial) else tuple(s) for s in shifts)
            for s in lst:
                if len(s) != nvars:
                    raise ValueError("shift has the wrong number of variables")
            if lst:
                t[k] = lst
        diffs = {}
        for k, m in (differentials or {}).items():
            ent = {rc: {mon: field(c) for mon, c in p.items() if field(c)} for rc, p in m.items()}
            ent = {rc: p for rc, p in ent.items() if p}
            if ent:
                diffs[_key(grading, k)] = MappingProxyType(ent)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(t.items()))))
        object.__setattr__(self, "differentials", MappingProxyType(diffs))
        object.__setattr__(self, "grading", grading)
        object.__setattr__(self, "ideal", ideal)
        object.__setattr__(self, "field", field)
        if check:
            self.validate()

    def shifts(self, k: int) -> tuple[tuple[int, ...], ...]:
        return self.terms.get(_key(self.grading, k), ())

    def rank(self, k: int) -> int:
        return len(self.shifts(k))

    def d(self, k: int) -> Mapping[tuple[int, int], Poly]:
        return self.differentials.get(_key(self.grading, k), {})

    def is_homogeneous(self) -> bool:
        return all(self._entry_homogeneous(k, rc, p) for k, m in self.differentials.items() for rc, p in m.items())

    def _entry_homogeneous(self, k, rc, p) -> bool:
        r, c = rc
        src, tgt = self.shifts(k)[c], self.shifts(k + 1)[r]
        return all(tuple(a + b for a, b in zip(tgt, mon)) == src for mon in p)

    def validate(self):
        for k, m in self.differentials.items():
            for (r, c) in m:
                if not (0 <= c < self.rank(k) and 0 <= r < self.rank(k + 1)):
                    raise ValueError(f"entry {(r, c)} out of range in degree {k}")
        for k in self.differentials:
            sq = _compose(self.d(k + 1), self.d(k))
            reduced = ({m: c for m, c in p.items() if not self.field.is_zero(c)} for p in sq.values())
            if any(not poly_is_zero(p, self.ideal) for p in reduced):
                raise ValueError(f"d[{k + 1}] d[{k}] != 0")

    def degrees(self) -> list[int]:
        return sorted(self.terms)


def _compose(a: PolyMatrix, b: PolyMatrix) -> dict:
    """Matrix product ``a @ b`` of polynomial matrices."""
    by_row: dict[int, list[tuple[int, Poly]]] = {}
    for (r, c), p in b.items():
        by_row.setdefault(r, []).append((c, p))
    out: dict[tuple[int, int], dict] = {}
    for (r, mid), p in a.items():
        for c, q in by_row.get(mid, ()):
            out[(r, c)] = poly_add(out.get((r, c), {}), poly_mul(p, q))
    return {k: v for k, v in out.items() if v}


def _basis(c: FreeComplex, k: int, m: tuple[int, ...]) -> list[int]:
    out = []
    for i, s in enumerate(c.shifts(k)):
        e = tuple(a - b for a, b in zip(m, s))
        if all(x >= 0 for x in e) and not (c.ideal is not None and c.ideal.contains(e)):
            out.append(i)
    return out


def slice_complex(c: FreeComplex, m: MultiMonomial | Sequence[int]) -> Complex:
    """The field-valued complex of multidegree-``m`` components."""
    mm = m.exponents if isinstance(m, MultiMonomial) else tuple(m)
    if not c.is_homogeneous():
        raise NotHomogeneous("slicing needs multigraded-homogeneous differentials")
    degs = [0, 1] if c.grading == MOD2 else c.degrees()
    bases = {k: _basis(c, k, mm) for k in degs}
    terms = {k: len(b) for k, b in bases.items()}
    diffs = {}
    for k in degs:
        k1 = _key(c.grading, k + 1)
        tgt = {g: t for t, g in enumerate(bases.get(k1, []))}
        if k1 not in bases:
            tgt = {g: t for t, g in enumerate(_basis(c, k1, mm))}
        src = {g: t for t, g in enumerate(bases[k])}
        ent = {}
        for (r, col), p in c.d(k).items():
            if r in tgt and col in src:
                v = sum(p.values())  # homogeneous: at most one monomial lands here
                if v:
                    ent[(tgt[r], src[col])] = v
        diffs[k] = ExactMatrix(len(tgt), len(src), ent, c.field)
    return Complex(terms, diffs, grading=c.grading, field=c.field, check=False)


# ``slice`` is the public name used throughout
slice = slice_complex  # noqa: A001


def truncated_cohomology(c: FreeComplex, bound: int) -> dict[tuple[int, int], int]:
    """``{(cohomological degree, total multidegree): dim}`` over all slices with total degree <= bound.

    Exact in that range: cohomology of a homogeneous complex splits by
    multidegree.  Slices below zero are included when generator shifts are
    negative, as happens for Hom complexes.
    """
    out: dict[tuple[int, int], int] = {}
    shifts = [s for v in c.terms.values() for s in v]
    lower = tuple(min([0] + [s[i] for s in shifts]) for i in range(c.nvars))
    for m in multidegrees_above(lower, bound):
        h = cohomology(slice_complex(c, m))
        for k, v in h.dims.items():
            key = (k, sum(m))
            out[key] = out.get(key, 0) + v
    return out


def free_hom_complex(f: FreeComplex, g: FreeComplex) -> FreeComplex:
    """``Hom(f, g)`` for free ``f``; the unit ``e_c -> e'_r`` has shift ``s'_r - s_c``.

    ``f`` may live over a quotient ``A/J`` provided ``g`` is annihilated by
    ``J``; the result lives over ``g``'s ring.
    """
    if f.grading != INTEGERS or g.grading != INTEGERS:
        raise ValueError("free_hom_complex expects integer-graded complexes")
    if f.ideal is not None and not all(g.ideal is not None and g.ideal.contains(m) for m in f.ideal.generators):
        raise ValueError("target is not a module over the source ring")
    fdeg, gdeg = f.degrees(), g.degrees()
    if not fdeg or not gdeg:
        return FreeComplex(f.nvars, {}, {}, ideal=g.ideal, field=f.field)
    lo, hi = min(gdeg) - max(fdeg), max(gdeg) - min(fdeg)
    units: dict[int, list[tuple[int, int, int]]] = {}
    for n in range(lo, hi + 1):
        units[n] = [(p, c, r) for p in fdeg for c in range(f.rank(p)) for r in range(g.rank(p + n))]
    index = {n: {u: t for t, u in enumerate(lst)} for n, lst in units.items()}
    terms = {n: [tuple(a - b for a, b in zip(g.shifts(p + n)[r], f.shifts(p)[c])) for p, c, r in lst]
             for n, lst in units.items()}
    dg_cols = {k: {} for k in gdeg}
    for k in gdeg:
        for (r2, r), q in g.d(k).items():
            dg_cols[k].setdefault(r, []).append((r2, q))
    df_rows = {}
    for k in fdeg:
        for (c, c2), q in f.d(k).items():
            df_rows.setdefault((k + 1, c), []).append((c2, q))
    diffs = {}
    for n, lst in units.items():
        if n + 1 not in index:
            continue
        tgt = index[n + 1]
        sign = -1 if n % 2 else 1
        ent: dict[tuple[int, int], dict] = {}
        for col, (p, c, r) in enumerate(lst):
            for r2, q in dg_cols.get(p + n, {}).get(r, ()):
                row = tgt[(p, c, r2)]
                ent[(row, col)] = poly_add(ent.get((row, col), {}), q)
            for c2, q in df_rows.get((p, c), ()):
                row = tgt[(p - 1, c2, r)]
                ent[(row, col)] = poly_add(ent.get((row, col), {}), q, -sign)
        diffs[n] = {k: v for k, v in ent.items() if v}
    return FreeComplex(f.nvars, terms, diffs, ideal=g.ideal, field=f.field, check=False)


def set_variables_zero(c: FreeComplex, keep: Sequence[int]) -> FreeComplex:
    """Substitute ``z_a = 0`` for every variable not in ``keep`` (1-based) and drop it."""
    keep = sorted(keep)
    idx = [a - 1 for a in keep]
    drop = [i for i in range(c.nvars) if i not in idx]

    def proj(e):
        return tuple(e[i] for i in idx)

    terms = {k: [proj(s) for s in v] for k, v in c.terms.items()}
    diffs = {}
    for k, m in c.differentials.items():
        ent = {}
        for rc, p in m.items():
            q = {}
            for mon, x in p.items():
                if all(mon[i] == 0 for i in drop):
                    q[proj(mon)] = q.get(proj(mon), 0) + x
            q = {a: b for a, b in q.items() if b}
            if q:
                ent[rc] = q
        diffs[k] = ent
    ideal = None
    if c.ideal is not None:
        gens = [proj(g.exponents) for g in c.ideal.generators if all(g.exponents[i] == 0 for i in drop)]
        ideal = MonomialIdeal(len(idx), gens)
    return FreeComplex(len(idx), terms, diffs, c.grading, ideal, c.field, check=False)


def multidegrees_above(lower: Sequence[int], bound: int) -> list[tuple[int, ...]]:
    """Multidegrees ``m >= lower`` (componentwise) of total degree at most ``bound``."""
    extra = bound - sum(lower)
    if extra < 0:
        return []
    return [tuple(a + b for a, b in zip(lower, nu)) for nu in multidegrees_up_to(len(lower), extra)]


def slice_cohomology(c: FreeComplex, k: int, m: Sequence[int]) -> int:
    return cohomology(slice_complex(c, m))[k]


def koszul_complex(nvars: int, variables: Sequence[int], field: Field = Q) -> FreeComplex:
    """Koszul complex on the listed variables (1-based), in degrees ``-len..0``."""
    r = len(variables)
    subsets = {k: list(itertools.combinations(range(r), k)) for k in range(r + 1)}

    def shift_of(sub):
        s = [0] * nvars
        for i in sub:
            s[variables[i] - 1] += 1
        return tuple(s)

    terms = {-k: [shift_of(sub) for sub in subsets[k]] for k in range(r + 1)}
    diffs = {}
    for k in range(1, r + 1):
        idx = {sub: t for t, sub in enumerate(subsets[k - 1])}
        ent = {}
        for col, sub in enumerate(subsets[k]):
            for pos, i in enumerate(sub):
                rest = sub[:pos] + sub[pos + 1:]
                ent[(idx[rest], col)] = {MultiMonomial.var(nvars, variables[i]).exponents: (-1) ** pos}
        diffs[-k] = ent
    return FreeComplex(nvars, terms, diffs, field=field)


def shift_free(c: FreeComplex, n: int) -> FreeComplex:
    """``c[n]`` with differential ``(-1)^n d``."""
    sign = -1 if n % 2 else 1
    if c.grading == MOD2 and n % 2 == 0:
        return c
    terms = {k - n: v for k, v in c.terms.items()}
    diffs = {k - n: {rc: {m: sign * x for m, x in p.items()} for rc, p in d.items()} for k, d in c.differentials.items()}
    return FreeComplex(c.nvars, terms, diffs, c.grading, c.ideal, c.field, check=False)


def cone_free(c: FreeComplex, d: FreeComplex, f: Mapping[int, PolyMatrix]) -> FreeComplex:
    """Cone of a chain map ``f: c -> d`` (``f[k]`` maps degree ``k`` generators)."""
    degs = sorted({k - 1 for k in c.terms} | set(d.terms))
    terms = {k: list(c.shifts(k + 1)) + list(d.shifts(k)) for k in degs}
    diffs = {}
    for k in degs:
        nc1 = c.rank(k + 2)
        nc0 = c.rank(k + 1)
        ent = {}
        for (r, col), p in c.d(k + 1).items():
            ent[(r, col)] = {m: -x for m, x in p.items()}
        for (r, col), p in f.get(k + 1, {}).items():
            ent[(nc1 + r, col)] = dict(p)
        for (r, col), p in d.d(k).items():
            ent[(nc1 + r, nc0 + col)] = dict(p)
        diffs[k] = ent
    return FreeComplex(c.nvars, terms, diffs, c.grading, c.ideal, c.field)


__all__ = [
    "NotHomogeneous", "MultiMonomial", "MonomialIdeal", "hilbert_function", "free_hilbert", "monomials_of_degree",
    "multidegrees_up_to", "poly", "poly_mul", "poly_add", "FreeComplex", "slice_complex", "slice",
    "truncated_cohomology", "koszul_complex", "shift_free", "cone_free", "free_hom_complex", "set_variables_zero",
    "multidegrees_above", "slice_cohomology",
]
