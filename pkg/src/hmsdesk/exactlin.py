"""Exact scalar arithmetic and sparse linear algebra.

Two ground fields are supported: the rationals (``Field.Q``, the default) and
prime fields ``Field.fp(p)``.  Matrices are sparse, keyed by ``(row, col)``,
and immutable once built.  Over the rationals, rank is computed by
fraction-free integer elimination with content removal, so intermediate
coefficients stay small on the sparse matrices that appear here.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from types import MappingProxyType
from typing import Iterator, Mapping, Sequence


class ShapeMismatch(ValueError):
    """Matrix shapes are not composable."""


class NotAComplex(ValueError):
    """A composite of consecutive differentials is nonzero."""


class FieldMismatch(ValueError):
    """Two values over different ground fields were combined."""


@dataclass(frozen=True)
class Field:
    """Ground field: ``p == 0`` means the rationals, otherwise ``F_p``."""

    p: int = 0

    def __post_init__(self):
        if self.p < 0 or self.p >= 2**31:
            raise ValueError(f"characteristic out of range: {self.p}")
        if self.p and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def fp(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``"q"`` or ``"fp:<p>"``."""
        text = text.strip().lower()
        if text in ("q", "qq", "rationals"):
            return cls(0)
        if text.startswith("fp:"):
            return cls(int(text[3:]))
        raise ValueError(f"unknown field {text!r}; expected 'q' or 'fp:<p>'")

    @property
    def name(self) -> str:
        return "q" if self.p == 0 else f"fp:{self.p}"

    def __call__(self, x) -> Fraction | int:
        """Coerce an integer or rational into the field."""
        if self.p == 0:
            return Fraction(x)
        x = Fraction(x)
        return (x.numerator * pow(x.denominator, -1, self.p)) % self.p

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def is_zero(self, x) -> bool:
        return x == 0 if self.p == 0 else x % self.p == 0


Q = Field(0)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True, eq=False)
class ExactMatrix:
    """Sparse matrix over a ``Field``.  Only nonzero entries are stored."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], object]
    field: Field = Q

    def __init__(self, rows: int, cols: int, entries=None, field: Field = Q):
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            v = field(v)
            if not field.is_zero(v):
                clean[(i, j)] = v
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", MappingProxyType(clean))
        object.__setattr__(self, "field", field)

    @classmethod
    def zero(cls, rows: int, cols: int, field: Field = Q) -> "ExactMatrix":
        return cls(rows, cols, {}, field)

    @classmethod
    def identity(cls, n: int, field: Field = Q) -> "ExactMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)}, field)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], field: Field = Q, cols: int | None = None) -> "ExactMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        ent = {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v}
        return cls(rows, cols, ent, field)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> list[list]:
        out = [[self.field.zero()] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __getitem__(self, ij: tuple[int, int]):
        return self.entries.get(ij, self.field.zero())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and dict(self.entries) == dict(other.entries))

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items()), self.field))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols}, nnz={len(self.entries)}, {self.field.name})"

    def is_zero(self) -> bool:
        return not self.entries

    def _check_field(self, other: "ExactMatrix"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field.name} vs {other.field.name}")

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()}, self.field)

    T = property(transpose)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot compose {self.shape} @ {other.shape}")
        by_row: dict[int, list[tuple[int, object]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict[tuple[int, int], object] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + a * b
        return ExactMatrix(self.rows, other.cols, acc, self.field)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} + {other.shape}")
        acc = dict(self.entries)
        for ij, v in other.entries.items():
            acc[ij] = acc.get(ij, 0) + v
        return ExactMatrix(self.rows, self.cols, acc, self.field)

    def __neg__(self) -> "ExactMatrix":
        return self.scale(-1)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        c = self.field(c)
        return ExactMatrix(self.rows, self.cols, {ij: c * v for ij, v in self.entries.items()}, self.field)

    def apply(self, vec: Sequence) -> list:
        """Matrix times a dense column vector."""
        out = [self.field.zero()] * self.rows
        for (i, j), v in self.entries.items():
            out[i] += v * vec[j]
        if self.field.p:
            out = [x % self.field.p for x in out]
        return out

    def row_dicts(self) -> list[dict[int, object]]:
        rows: list[dict[int, object]] = [{} for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows


def block(blocks: Sequence[Sequence[ExactMatrix | None]], row_sizes: Sequence[int],
          col_sizes: Sequence[int], field: Field = Q) -> ExactMatrix:
    """Assemble a block matrix; ``None`` blocks are zero."""
    roff = [0]
    for r in row_sizes:
        roff.append(roff[-1] + r)
    coff = [0]
    for c in col_sizes:
        coff.append(coff[-1] + c)
    ent = {}
    for bi, brow in enumerate(blocks):
        for bj, m in enumerate(brow):
            if m is None:
                continue
            if m.shape != (row_sizes[bi], col_sizes[bj]):
                raise ShapeMismatch(f"block ({bi},{bj}) has shape {m.shape}, "
                                    f"expected {(row_sizes[bi], col_sizes[bj])}")
            for (i, j), v in m.entries.items():
                ent[(roff[bi] + i, coff[bj] + j)] = v
    return ExactMatrix(roff[-1], coff[-1], ent, field)


# --- elimination -----------------------------------------------------------

def _integer_rows(m: ExactMatrix) -> list[dict[int, int]]:
    """Scale each rational row to a primitive integer row."""
    out = []
    for row in m.row_dicts():
        if not row:
            continue
        den = 1
        for v in row.values():
            den = den * v.denominator // gcd(den, v.denominator)
        irow = {j: int(v * den) for j, v in row.items()}
        g = 0
        for v in irow.values():
            g = gcd(g, v)
        out.append({j: v // g for j, v in irow.items()})
    return out


def _eliminate_rows(rows: list[dict[int, object]], field: Field) -> int:
    """Destructively reduce ``rows`` and return the rank.

    Pivot rows are chosen with the fewest nonzeros (a cheap Markowitz rule).
    Over the rationals the rows are integers and each elimination step is
    ``r <- p*r - q*pivot`` followed by division by the row content.
    """
    p = field.p
    active = [r for r in rows if r]
    rank = 0
    while active:
        k = min(range(len(active)), key=lambda i: len(active[i]))
        piv = active.pop(k)
        col = min(piv, key=lambda j: (abs(piv[j]) if not p else 0, j))
        a = piv[col]
        nxt = []
        for r in active:
            b = r.get(col)
            if b is None:
                nxt.append(r)
                continue
            if p:
                f = b * pow(a, -1, p) % p
                for j, v in piv.items():
                    w = (r.get(j, 0) - f * v) % p
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
            else:
                g = gcd(a, b)
                ca, cb = a // g, b // g
                new = {j: ca * v for j, v in r.items()}
                for j, v in piv.items():
                    w = new.get(j, 0) - cb * v
                    if w:
                        new[j] = w
                    else:
                        new.pop(j, None)
                c = 0
                for v in new.values():
                    c = gcd(c, v)
                    if c == 1:
                        break
                r = {j: v // c for j, v in new.items()} if c > 1 else new
            if r:
                nxt.append(r)
        active = nxt
        rank += 1
    return rank


def rank(m: ExactMatrix) -> int:
    """Rank of ``m`` over its field."""
    if m.is_zero():
        return 0
    if m.field.p:
        rows = [dict(r) for r in m.row_dicts() if r]
    else:
        rows = _integer_rows(m)
    # eliminate along the shorter side
    if len(rows) > m.cols:
        return rank(m.transpose())
    return _eliminate_rows(rows, m.field)


def rref(m: ExactMatrix) -> tuple[list[dict[int, object]], list[int]]:
    """Reduced row echelon form as sparse rows plus pivot columns."""
    f = m.field
    rows = [dict(r) for r in m.row_dicts() if r]
    pivots: list[int] = []
    done: list[dict[int, object]] = []
    for col in range(m.cols):
        idx = next((i for i, r in enumerate(rows) if col in r), None)
        if idx is None:
            continue
        piv = rows.pop(idx)
        inv = f.inv(piv[col])
        piv = {j: _norm(v * inv, f) for j, v in piv.items()}
        for others in (rows, done):
            for r in others:
                c = r.get(col)
                if c is None:
                    continue
                for j, v in piv.items():
                    w = _norm(r.get(j, 0) - c * v, f)
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
        rows = [r for r in rows if r]
        done.append(piv)
        pivots.append(col)
    return done, pivots


def _norm(x, f: Field):
    return x % f.p if f.p else x


def nullspace(m: ExactMatrix) -> list[list]:
    """Basis of the kernel of ``m`` as dense vectors."""
    f = m.field
    red, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [f.zero()] * m.cols
        v[free] = f.one()
        for r, pc in zip(red, pivots):
            c = r.get(free)
            if c is not None:
                v[pc] = _norm(-c, f)
        basis.append(v)
    return basis


def solve(m: ExactMatrix, b: Sequence) -> list | None:
    """One solution of ``m x = b``, or ``None`` when inconsistent."""
    f = m.field
    aug = ExactMatrix(m.rows, m.cols + 1,
                      {**dict(m.entries), **{(i, m.cols): v for i, v in enumerate(b) if v}}, f)
    red, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [f.zero()] * m.cols
    for r, pc in zip(red, pivots):
        x[pc] = r.get(m.cols, f.zero())
    return x


def matrix_from_columns(cols: Sequence[Sequence], nrows: int, field: Field = Q) -> ExactMatrix:
    ent = {(i, j): v for j, c in enumerate(cols) for i, v in enumerate(c) if v}
    return ExactMatrix(nrows, len(cols), ent, field)


def determinant(m: ExactMatrix):
    """Determinant of a square matrix by elimination over the field."""
    if m.rows != m.cols:
        raise ShapeMismatch("determinant of non-square matrix")
    f = m.field
    a = m.to_dense()
    n = m.rows
    det = f.one()
    for c in range(n):
        r = next((i for i in range(c, n) if not f.is_zero(a[i][c])), None)
        if r is None:
            return f.zero()
        if r != c:
            a[r], a[c] = a[c], a[r]
            det = -det
        det = _norm(det * a[c][c], f)
        inv = f.inv(a[c][c])
        for i in range(c + 1, n):
            if not f.is_zero(a[i][c]):
                t = a[i][c] * inv
                a[i] = [_norm(x - t * y, f) for x, y in zip(a[i], a[c])]
    return _norm(det, f)


def homology_dim(d_in: ExactMatrix, d_out: ExactMatrix, check: bool = True) -> int:
    """``dim ker(d_out) - rank(d_in)`` at the middle term of ``d_in, d_out``."""
    if d_out.cols != d_in.rows:
        raise ShapeMismatch(f"d_out has {d_out.cols} columns, d_in lands in dimension {d_in.rows}")
    if check and not (d_out @ d_in).is_zero():
        raise NotAComplex("d_out after d_in is nonzero")
    return d_out.cols - rank(d_out) - rank(d_in)


# --- graded dimension vectors ------------------------------------------------

INTEGERS = "integers"
MOD2 = "integers-mod-2"


@dataclass(frozen=True)
class GradedSpace:
    """Graded dimension vector; zero entries are dropped."""

    grading: str
    dims: Mapping[int, int] = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.grading not in (INTEGERS, MOD2):
            raise ValueError(f"unknown grading {self.grading!r}")
        clean = {}
        for k, v in self.dims.items():
            if v < 0:
                raise ValueError("negative dimension")
            if self.grading == MOD2:
                k = k % 2
            if v:
                clean[k] = clean.get(k, 0) + v
        object.__setattr__(self, "dims", MappingProxyType(dict(sorted(clean.items()))))

    def __getitem__(self, k: int) -> int:
        if self.grading == MOD2:
            k %= 2
        return self.dims.get(k, 0)

    def __eq__(self, other):
        if not isinstance(other, GradedSpace):
            return NotImplemented
        return self.grading == other.grading and dict(self.dims) == dict(other.dims)

    def __hash__(self):
        return hash((self.grading, tuple(self.dims.items())))

    def __repr__(self):
        return f"GradedSpace({self.grading}, {dict(self.dims)})"

    def total(self) -> int:
        return sum(self.dims.values())

    def euler(self) -> int:
        return sum((-1) ** (k % 2) * v for k, v in self.dims.items())

    def is_zero(self) -> bool:
        return not self.dims

    def fold(self) -> "GradedSpace":
        return GradedSpace(MOD2, dict(self.dims))

    def shift(self, n: int) -> "GradedSpace":
        """Apply ``[n]``: degree ``k`` moves to ``k - n``."""
        return GradedSpace(self.grading, {k - n: v for k, v in self.dims.items()})

    def as_dict(self) -> dict:
        if self.grading == MOD2:
            return {"even": self[0], "odd": self[1]}
        return {str(k): v for k, v in self.dims.items()}


def iter_entries(m: ExactMatrix) -> Iterator[tuple[int, int, object]]:
    for (i, j), v in sorted(m.entries.items()):
        yield i, j, v


__all__ = [
    "Field", "Q", "ExactMatrix", "GradedSpace", "INTEGERS", "MOD2",
    "ShapeMismatch", "NotAComplex", "FieldMismatch",
    "rank", "rref", "nullspace", "solve", "determinant", "homology_dim", "block",
    "matrix_from_columns", "iter_entries",
]
