"""Integer- and mod-2-graded cochain complexes of finite-dimensional spaces.

Conventions (fixed once here, used everywhere):

* differentials raise degree: ``d[k]`` maps ``C^k -> C^{k+1}`` and is stored
  as a ``dim C^{k+1} x dim C^k`` matrix;
* ``shift(c, n)`` is ``c[n]``: ``c[n]^k = c^{k+n}`` with differential
  ``(-1)^n d``;
* ``cone(f: X -> Y)^k = X^{k+1} + Y^k`` with ``d = [[-d_X, 0], [f, d_Y]]``;
* ``hom_complex(x, y)^n = prod_i Hom(x^i, y^{i+n})`` with
  ``d f = d_y f - (-1)^n f d_x``.

A mod-2-graded complex has terms in degrees 0 and 1 and two differentials
``d[0]: C^0 -> C^1`` and ``d[1]: C^1 -> C^0``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

from .exactlin import (INTEGERS, MOD2, ExactMatrix, Field, GradedSpace, NotAComplex, Q,
                       ShapeMismatch, block, homology_dim, matrix_from_columns, nullspace, rank)


class GradingMismatch(ValueError):
    """Complexes with different grading tags were combined."""


def _key(grading: str, k: int) -> int:
    return k % 2 if grading == MOD2 else k


@dataclass(frozen=True, eq=False)
class Complex:
    grading: str
    terms: Mapping[int, int]
    differentials: Mapping[int, ExactMatrix]
    field: Field = Q

    def __init__(self, terms: Mapping[int, int], differentials: Mapping[int, ExactMatrix] | None = None,
                 grading: str = INTEGERS, field: Field = Q, check: bool = True):
        if grading not in (INTEGERS, MOD2):
            raise ValueError(f"unknown grading {grading!r}")
        if grading == MOD2:
            t = {0: terms.get(0, 0), 1: terms.get(1, 0)}
        else:
            t = {k: v for k, v in terms.items() if v}
        diffs = {}
        for k, m in (differentials or {}).items():
            k = _key(grading, k)
            if m.field != field:
                raise ValueError("differential over a different field")
            if not m.is_zero():
                diffs[k] = m
        object.__setattr__(self, "grading", grading)
        object.__setattr__(self, "terms", MappingProxyType(dict(sorted(t.items()))))
        object.__setattr__(self, "differentials", MappingProxyType(diffs))
        object.__setattr__(self, "field", field)
        if check:
            self.validate()

    def dim(self, k: int) -> int:
        return self.terms.get(_key(self.grading, k), 0)

    def d(self, k: int) -> ExactMatrix:
        k = _key(self.grading, k)
        m = self.differentials.get(k)
        if m is None:
            return ExactMatrix.zero(self.dim(k + 1), self.dim(k), self.field)
        return m

    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def validate(self):
        for k, m in self.differentials.items():
            if m.shape != (self.dim(k + 1), self.dim(k)):
                raise ShapeMismatch(f"d[{k}] has shape {m.shape}, expected {(self.dim(k + 1), self.dim(k))}")
        for k in self.differentials:
            if not (self.d(k + 1) @ self.d(k)).is_zero():
                raise NotAComplex(f"d[{k + 1}] d[{k}] != 0")

    def __repr__(self):
        return f"Complex({self.grading}, {dict(self.terms)})"

    @property
    def is_mod2(self) -> bool:
        return self.grading == MOD2

    def euler(self) -> int:
        return sum((-1) ** (k % 2) * v for k, v in self.terms.items())

    def unfurled_term(self, k: int) -> int:
        """Term of the 2-periodic integer-graded view of a mod-2 complex."""
        return self.dim(k)

    def unfurled_diff(self, k: int) -> ExactMatrix:
        return self.d(k)


def point(field: Field = Q, degree: int = 0) -> Complex:
    """The ground field placed in one degree."""
    return Complex({degree: 1}, {}, field=field)


def zero_complex(grading: str = INTEGERS, field: Field = Q) -> Complex:
    return Complex({}, {}, grading=grading, field=field)


def direct_sum(*cs: Complex) -> Complex:
    if not cs:
        return zero_complex()
    g, f = cs[0].grading, cs[0].field
    if any(c.grading != g for c in cs):
        raise GradingMismatch("direct sum of complexes with different gradings")
    degs = sorted(set().union(*(c.terms.keys() for c in cs)))
    terms = {k: sum(c.dim(k) for c in cs) for k in degs}
    diffs = {}
    for k in degs:
        blocks = [[c.d(k) if i == j else None for j, c in enumerate(cs)] for i, c in enumerate(cs)]
        diffs[k] = block(blocks, [c.dim(k + 1) for c in cs], [c.dim(k) for c in cs], f)
    return Complex(terms, diffs, grading=g, field=f, check=False)


def cohomology(c: Complex) -> GradedSpace:
    """Dimension of cohomology in each degree."""
    dims = {k: homology_dim(c.d(k - 1), c.d(k), check=False) for k in c.terms}
    return GradedSpace(c.grading, dims)


def is_acyclic(c: Complex) -> bool:
    return cohomology(c).is_zero()


def shift(c: Complex, n: int) -> Complex:
    """``c[n]``: degree ``k`` holds ``c^{k+n}``; differential times ``(-1)^n``."""
    if n == 0:
        return c
    sign = -1 if n % 2 else 1
    if c.grading == MOD2:
        if n % 2 == 0:
            return c
        return Complex({0: c.dim(1), 1: c.dim(0)}, {0: c.d(1).scale(-1), 1: c.d(0).scale(-1)},
                       grading=MOD2, field=c.field, check=False)
    terms = {k - n: v for k, v in c.terms.items()}
    diffs = {k - n: m.scale(sign) for k, m in c.differentials.items()}
    return Complex(terms, diffs, field=c.field, check=False)


def fold(c: Complex) -> Complex:
    """Collapse an integer-graded complex to its even/odd parts."""
    if c.grading == MOD2:
        return c
    parts = {0: [k for k in c.degrees() if k % 2 == 0], 1: [k for k in c.degrees() if k % 2]}
    sizes = {p: [c.dim(k) for k in ks] for p, ks in parts.items()}
    diffs = {}
    for p in (0, 1):
        q = 1 - p
        blocks = [[c.d(ks) if kt == ks + 1 else None for ks in parts[p]] for kt in parts[q]]
        diffs[p] = block(blocks, sizes[q], sizes[p], c.field)
    return Complex({0: sum(sizes[0]), 1: sum(sizes[1])}, diffs, grading=MOD2, field=c.field, check=False)


def unfurl(c: Complex, lo: int, hi: int) -> Complex:
    """Window ``[lo, hi]`` of the 2-periodic integer view of a mod-2 complex.

    The window is a genuine complex (the boundary differentials are dropped),
    so its cohomology is exact strictly inside the window.
    """
    if c.grading != MOD2:
        raise GradingMismatch("unfurl expects a mod-2 complex")
    terms = {k: c.dim(k) for k in range(lo, hi + 1)}
    diffs = {k: c.d(k) for k in range(lo, hi)}
    return Complex(terms, diffs, field=c.field, check=False)


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: Complex
    target: Complex
    components: Mapping[int, ExactMatrix]

    def __init__(self, source: Complex, target: Complex, components: Mapping[int, ExactMatrix],
                 check: bool = True):
        if source.grading != target.grading:
            raise GradingMismatch("chain map between different gradings")
        comps = {_key(source.grading, k): m for k, m in components.items()}
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "components", MappingProxyType(comps))
        if check:
            self.validate()

    def at(self, k: int) -> ExactMatrix:
        k = _key(self.source.grading, k)
        m = self.components.get(k)
        if m is None:
            return ExactMatrix.zero(self.target.dim(k), self.source.dim(k), self.source.field)
        return m

    def validate(self):
        s, t = self.source, self.target
        for k, m in self.components.items():
            if m.shape != (t.dim(k), s.dim(k)):
                raise ShapeMismatch(f"component {k} has shape {m.shape}")
        degs = set(s.terms) | set(t.terms)
        for k in degs:
            if not (t.d(k) @ self.at(k) - self.at(k + 1) @ s.d(k)).is_zero():
                raise NotAComplex(f"chain map does not commute with d in degree {k}")

    @classmethod
    def identity(cls, c: Complex) -> "ChainMap":
        return cls(c, c, {k: ExactMatrix.identity(v, c.field) for k, v in c.terms.items()}, check=False)

    @classmethod
    def zero(cls, s: Complex, t: Complex) -> "ChainMap":
        return cls(s, t, {}, check=False)


def cone(f: ChainMap) -> Complex:
    x, y = f.source, f.target
    fld = x.field
    if x.grading == MOD2:
        degs = [0, 1]
    else:
        degs = sorted({k - 1 for k in x.terms} | set(y.terms))
    terms = {k: x.dim(k + 1) + y.dim(k) for k in degs}
    diffs = {}
    for k in degs:
        blocks = [[-x.d(k + 1), None], [f.at(k + 1), y.d(k)]]
        diffs[k] = block(blocks, [x.dim(k + 2), y.dim(k + 1)], [x.dim(k + 1), y.dim(k)], fld)
    return Complex(terms, diffs, grading=x.grading, field=fld, check=False)


def is_quasi_iso(f: ChainMap) -> bool:
    """True iff the cone of ``f`` is acyclic."""
    return is_acyclic(cone(f))


def _columns(m: ExactMatrix) -> list[list]:
    dense = m.to_dense()
    return [[dense[i][j] for i in range(m.rows)] for j in range(m.cols)]


def class_rank(c: Complex, n: int, vectors: Sequence[Sequence]) -> int:
    """Rank of the span of degree-``n`` cocycles modulo coboundaries."""
    bnd = _columns(c.d(n - 1))
    fld = c.field
    rows = c.dim(n)
    both = matrix_from_columns(bnd + [list(v) for v in vectors], rows, fld)
    return rank(both) - rank(matrix_from_columns(bnd, rows, fld))


def cohomology_representatives(c: Complex, n: int) -> list[list]:
    """Cocycles whose classes form a basis of ``H^n(c)``."""
    reps: list[list] = []
    for z in nullspace(c.d(n)):
        if class_rank(c, n, reps + [z]) > len(reps):
            reps.append(z)
    return reps


# --- Hom complexes ---------------------------------------------------------

Allowed = Callable[[int, int, int, int], bool]


class HomComplex:
    """Total Hom complex together with its basis bookkeeping.

    Basis elements of ``Hom^n`` are matrix units ``(i, r, c)``: the map sending
    basis vector ``c`` of ``x^i`` to basis vector ``r`` of ``y^{i+n}``.  An
    optional ``allowed(i, r, j, c)`` predicate (``j = i + n``) restricts the
    units, which is how path-algebra Hom spaces are encoded.
    """

    def __init__(self, x: Complex, y: Complex, allowed: Allowed | None = None,
                 degrees: Sequence[int] | None = None):
        if x.grading != y.grading:
            raise GradingMismatch(f"{x.grading} vs {y.grading}")
        self.x, self.y, self.allowed = x, y, allowed
        self.grading = x.grading
        self.field = x.field
        if self.grading == MOD2:
            self.degrees = [0, 1]
        elif degrees is not None:
            self.degrees = list(degrees)
        else:
            lo = min(y.terms, default=0) - max(x.terms, default=0)
            hi = max(y.terms, default=0) - min(x.terms, default=0)
            self.degrees = list(range(lo, hi + 1))
        self._basis: dict[int, list[tuple[int, int, int]]] = {}
        self._index: dict[int, dict[tuple[int, int, int], int]] = {}

    def _sources(self) -> list[int]:
        return [0, 1] if self.grading == MOD2 else list(self.x.terms)

    def basis(self, n: int) -> list[tuple[int, int, int]]:
        n = _key(self.grading, n)
        if n not in self._basis:
            out = []
            for i in self._sources():
                j = _key(self.grading, i + n)
                for c in range(self.x.dim(i)):
                    for r in range(self.y.dim(j)):
                        if self.allowed is None or self.allowed(i, r, j, c):
                            out.append((i, r, c))
            self._basis[n] = out
            self._index[n] = {b: t for t, b in enumerate(out)}
        return self._basis[n]

    def index(self, n: int) -> dict[tuple[int, int, int], int]:
        self.basis(n)
        return self._index[_key(self.grading, n)]

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def d(self, n: int) -> ExactMatrix:
        sign = -1 if n % 2 else 1
        src = self.basis(n)
        tgt = self.index(n + 1)
        x, y = self.x, self.y
        dy_cache: dict[int, list[dict[int, object]]] = {}
        dx_cache: dict[int, list[dict[int, object]]] = {}
        ent: dict[tuple[int, int], object] = {}

        def add(key, col, v):
            t = tgt.get(key)
            if t is None:
                raise NotAComplex(f"Hom differential leaves the allowed span at {key}")
            ent[(t, col)] = ent.get((t, col), 0) + v

        for col, (i, r, c) in enumerate(src):
            j = _key(self.grading, i + n)
            # d_y o E_rc  lands in slot i, degree n+1
            cols_y = dy_cache.get(j)
            if cols_y is None:
                cols_y = y.d(j).transpose().row_dicts()
                dy_cache[j] = cols_y
            for r2, v in cols_y[r].items():
                add((i, r2, c), col, v)
            # -(-1)^n E_rc o d_x  lands in slot i-1
            i0 = _key(self.grading, i - 1)
            if self.grading == MOD2 or i0 in x.terms:
                rows_x = dx_cache.get(i0)
                if rows_x is None:
                    rows_x = x.d(i0).row_dicts()
                    dx_cache[i0] = rows_x
                for c2, v in rows_x[c].items():
                    add((i0, r, c2), col, -sign * v)
        return ExactMatrix(self.dim(n + 1), self.dim(n), ent, self.field)

    def complex(self) -> Complex:
        terms = {n: self.dim(n) for n in self.degrees}
        diffs = {n: self.d(n) for n in self.degrees if self.dim(n)}
        return Complex(terms, diffs, grading=self.grading, field=self.field, check=False)

    def cohomology(self) -> GradedSpace:
        dims = {}
        for n in self.degrees:
            if self.dim(n):
                dims[n] = homology_dim(self.d(n - 1), self.d(n), check=False)
        return GradedSpace(self.grading, dims)

    def cocycles(self, n: int = 0) -> list[list]:
        return nullspace(self.d(n))

    def to_chain_map(self, vec: Sequence, n: int = 0) -> ChainMap:
        """Interpret a degree-``n`` element as a chain map ``x -> y[n]``."""
        comps: dict[int, dict] = {}
        for (i, r, c), v in zip(self.basis(n), vec):
            if v:
                comps.setdefault(i, {})[(r, c)] = v
        target = shift(self.y, n)
        mats = {i: ExactMatrix(target.dim(i), self.x.dim(i), comps.get(i, {}), self.field)
                for i in self._sources()}
        return ChainMap(self.x, target, mats, check=False)


def hom_complex(x: Complex, y: Complex) -> Complex:
    """Total Hom complex ``Hom(x, y)``."""
    return HomComplex(x, y).complex()


def hom_cohomology(x: Complex, y: Complex) -> GradedSpace:
    return HomComplex(x, y).cohomology()


# --- quasi-isomorphism search ----------------------------------------------

def find_quasi_iso(x: Complex, y: Complex, *, allowed: Allowed | None = None,
                   is_qi: Callable[[ChainMap], bool] | None = None,
                   max_sign_dim: int = 10, random_trials: int = 32, seed: int = 0):
    """Search for a degree-0 cocycle of ``Hom(x, y)`` that is a quasi-isomorphism.

    Cocycle basis vectors are combined with coefficients in ``{1, -1}`` first
    (exhaustive when the cocycle space has dimension at most
    ``max_sign_dim``), then with seeded random integer coefficients.  A
    generic combination is a quasi-isomorphism whenever any is, so the second
    phase is a complete search up to a negligible failure probability.
    Returns the chain map or ``None``.
    """
    is_qi = is_qi or is_quasi_iso
    hom = HomComplex(x, y, allowed)
    z = hom.cocycles(0)
    if not z:
        f = hom.to_chain_map([0] * hom.dim(0))
        return f if is_qi(f) else None
    fld = x.field

    def combo(coeffs):
        v = [fld.zero()] * hom.dim(0)
        for a, vec in zip(coeffs, z):
            if a:
                v = [s + a * t for s, t in zip(v, vec)]
        if fld.p:
            v = [s % fld.p for s in v]
        return v

    if len(z) <= max_sign_dim:
        for signs in itertools.product((1, -1), repeat=len(z)):
            f = hom.to_chain_map(combo(signs))
            if is_qi(f):
                return f
    rng = random.Random(seed)
    for _ in range(random_trials):
        f = hom.to_chain_map(combo([rng.randint(-50, 50) for _ in z]))
        if is_qi(f):
            return f
    return None


def are_quasi_isomorphic(x: Complex, y: Complex) -> bool:
    if cohomology(x) != cohomology(y):
        return False
    return find_quasi_iso(x, y) is not None


__all__ = [
    "Complex", "ChainMap", "HomComplex", "GradingMismatch",
    "point", "zero_complex", "direct_sum", "cohomology", "is_acyclic", "shift", "fold", "unfurl",
    "cone", "is_quasi_iso", "hom_complex", "hom_cohomology", "find_quasi_iso", "are_quasi_isomorphic",
]
