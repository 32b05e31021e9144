"""Combinatorics of the pair-of-pants skeleton.

A stratum is indexed by a proper subset ``I`` of ``[n+1] = {1, ..., n+1}``:
the coordinates in ``I`` are free torus directions and the complementary
coordinates are pinned, leaving an open simplex of dimension ``n - |I|``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

from .exactlin import ExactMatrix, determinant


def _check_n(n: int):
    if n < 1:
        raise ValueError(f"the pants dimension must be at least 1, got {n}")


def proper_subsets(n: int) -> list[frozenset[int]]:
    """Proper subsets of ``[n+1]``, ordered by size then lexicographically."""
    ground = range(1, n + 2)
    return [frozenset(c) for r in range(n + 1) for c in itertools.combinations(ground, r)]


@dataclass(frozen=True)
class Stratum:
    subset: frozenset[int]
    torus_rank: int
    simplex_dim: int

    @property
    def dimension(self) -> int:
        return self.torus_rank + self.simplex_dim


@dataclass(frozen=True)
class StrataTable:
    n: int
    strata: tuple[Stratum, ...]

    def incident(self, a: frozenset[int], b: frozenset[int]) -> bool:
        """Frontier-meeting relation: the closure of ``S_a`` meets ``S_b`` iff ``a`` is inside ``b``."""
        return a <= b

    @property
    def incidence(self) -> tuple[tuple[frozenset[int], frozenset[int]], ...]:
        return tuple((s.subset, t.subset) for s in self.strata for t in self.strata
                     if s.subset < t.subset)


def strata(n: int) -> StrataTable:
    _check_n(n)
    return StrataTable(n, tuple(Stratum(i, len(i), n - len(i)) for i in proper_subsets(n)))


def _chi_c_torus(rank: int) -> int:
    return 1 if rank == 0 else 0


def _chi_c_open_simplex(dim: int) -> int:
    return (-1) ** dim


def euler_char_c(n: int) -> int:
    """Compactly supported Euler characteristic, summed stratum by stratum."""
    return sum(_chi_c_torus(s.torus_rank) * _chi_c_open_simplex(s.simplex_dim) for s in strata(n).strata)


@dataclass(frozen=True)
class SignPattern:
    """The open set where ``xi_a != 0`` for ``a`` outside ``subset`` and the coordinate sum is positive."""

    n: int
    subset: frozenset[int]
    sum_positive: bool = True

    def __post_init__(self):
        if not self.subset <= frozenset(range(1, self.n + 2)):
            raise ValueError("subset must lie in [n+1]")

    def allows(self, xi) -> bool:
        if self.sum_positive and not sum(xi) > 0:
            return False
        return all(x != 0 for a, x in enumerate(xi, 1) if a not in self.subset)


def cover_meet(p: SignPattern, q: SignPattern) -> SignPattern:
    if p.n != q.n:
        raise ValueError("sign patterns for different n")
    return SignPattern(p.n, p.subset & q.subset, p.sum_positive and q.sum_positive)


def meet_all(patterns) -> SignPattern:
    return reduce(cover_meet, patterns)


@dataclass(frozen=True)
class CubeNode:
    subset: frozenset[int]
    variables: tuple[str, ...]


@dataclass(frozen=True)
class CubeEdge:
    source: frozenset[int]  # the larger subset
    target: frozenset[int]  # the smaller subset
    set_to_zero: tuple[int, ...]


@dataclass(frozen=True)
class CubeDiagram:
    n: int
    nodes: tuple[CubeNode, ...]
    edges: tuple[CubeEdge, ...]


def cube_diagram(n: int) -> CubeDiagram:
    """``I -> A^I = Spec k[t_a : a in I]`` over proper subsets; ``I`` inside ``J`` restricts by ``t_a = 0``."""
    subs = proper_subsets(n)
    nodes = tuple(CubeNode(i, tuple(f"t{a}" for a in sorted(i))) for i in subs)
    edges = tuple(CubeEdge(j, i, tuple(sorted(j - i))) for j in subs for i in subs if i < j)
    return CubeDiagram(n, nodes, edges)


def contact_lattice_map(n: int) -> ExactMatrix:
    """Integer matrix of ``theta -> (theta mod the diagonal, sum of theta)`` on ``Z^{n+1}``.

    The quotient by the diagonal is coordinatized by ``theta_a - theta_{n+1}``.
    """
    m = n + 1
    ent = {}
    for a in range(n):
        ent[(a, a)] = 1
        ent[(a, n)] = -1
    for b in range(m):
        ent[(n, b)] = 1
    return ExactMatrix(m, m, ent)


def contact_cover_degree(n: int) -> int:
    """Index of the image lattice, i.e. ``|det|`` of the lattice map."""
    _check_n(n)
    return abs(int(determinant(contact_lattice_map(n))))


__all__ = [
    "Stratum", "StrataTable", "strata", "euler_char_c", "SignPattern", "cover_meet", "meet_all",
    "CubeNode", "CubeEdge", "CubeDiagram", "cube_diagram", "contact_lattice_map", "contact_cover_degree",
    "proper_subsets",
]
