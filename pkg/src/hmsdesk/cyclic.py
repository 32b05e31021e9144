"""Cyclically ordered finite sets and the generator-level data of the
restriction (``C_st``) and extension (``C^w_st``) functors on subcycle
inclusions of consecutive pairs.

A node for an ``m``-element cycle with base ``b`` is the linear quiver
``A_{m-1}``; its linearization lists the elements starting right after the
base, so ``lin = (succ b, succ^2 b, ..., b)``.  A consecutive pair
``(x, succ x)`` sits at position ``lin.index(x) + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .complexes import Complex, point, shift
from .exactlin import Field, Q
from .quivers import (LinearQuiver, PerfComplex, cyclic_rotate, named_generators, subcycle_extend,
                      subcycle_restrict)


class LabelNotFound(KeyError):
    pass


class NotConsecutive(ValueError):
    pass


@dataclass(frozen=True)
class CyclicSet:
    """Labels in cyclic order: ``elements[i + 1]`` follows ``elements[i]``."""

    elements: tuple

    def __init__(self, elements: Sequence[Hashable]):
        els = tuple(elements)
        if len(set(els)) != len(els):
            raise ValueError("cyclic set labels must be distinct")
        if not els:
            raise ValueError("empty cyclic set")
        object.__setattr__(self, "elements", els)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def succ(self, x):
        i = self._idx(x)
        return self.elements[(i + 1) % len(self.elements)]

    def pred(self, x):
        i = self._idx(x)
        return self.elements[(i - 1) % len(self.elements)]

    def _idx(self, x) -> int:
        try:
            return self.elements.index(x)
        except ValueError:
            raise LabelNotFound(x) from None

    def linearization(self, base) -> tuple:
        i = self._idx(base)
        m = len(self.elements)
        return tuple(self.elements[(i + 1 + k) % m] for k in range(m))

    def adjacent(self, x, y) -> bool:
        return x != y and (self.succ(x) == y or self.succ(y) == x)


@dataclass(frozen=True)
class SubcycleInclusion:
    """Inclusion of a 2-element cycle ``(s0, s1)`` onto a pair of a larger cycle."""

    source: CyclicSet
    target: CyclicSet
    embedding: Mapping

    def __init__(self, source: CyclicSet, target: CyclicSet, embedding: Mapping):
        emb = dict(embedding)
        if set(emb) != set(source.elements):
            raise ValueError("embedding must be defined on every source label")
        if len(set(emb.values())) != len(emb):
            raise ValueError("embedding must be injective")
        for y in emb.values():
            if y not in target:
                raise LabelNotFound(y)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "embedding", emb)

    def pair(self) -> tuple:
        """Image pair ``(x, succ x)`` in the target's cyclic order, and a twist bit.

        The twist is 0 when the source's first label lands on ``x``.
        """
        if len(self.source) != 2:
            raise NotConsecutive("only inclusions of 2-element cycles are supported")
        s0, s1 = self.source.elements
        a, b = self.embedding[s0], self.embedding[s1]
        t = self.target
        if t.succ(a) == b:
            return (a, b), 0
        if t.succ(b) == a:
            return (b, a), 1
        raise NotConsecutive(f"{a!r} and {b!r} are not cyclically adjacent")


@dataclass(frozen=True)
class CategoryNode:
    cycle: CyclicSet
    base: Hashable

    @property
    def quiver(self) -> LinearQuiver:
        return LinearQuiver(len(self.cycle) - 1)

    @property
    def linearization(self) -> tuple:
        return self.cycle.linearization(self.base)

    def position(self, x) -> int:
        return self.linearization.index(x) + 1


def cst_node(c: CyclicSet, base) -> CategoryNode:
    if base not in c:
        raise LabelNotFound(base)
    if len(c) < 2:
        raise ValueError("a 1-element cycle carries the zero category")
    return CategoryNode(c, base)


@dataclass(frozen=True, eq=False)
class FunctorEdge:
    direction: str  # "restriction" or "extension"
    source: CategoryNode
    target: CategoryNode
    position: int
    twist: int
    generator_images: Mapping[str, object]


def _pair_position(inc: SubcycleInclusion, big: CategoryNode) -> tuple[int, int]:
    (x, _), twist = inc.pair()
    return big.position(x), twist


def restriction_functor(node: CategoryNode, inc: SubcycleInclusion):
    """Return ``F(x)``: restrict a complex over ``node`` to the subcycle (folded twist ``[1]``)."""
    pos, twist = _pair_position(inc, node)

    def apply(x: PerfComplex) -> Complex:
        out = subcycle_restrict(x, pos)
        if twist:
            out = shift(out, 1)
        return out

    return apply, pos, twist


def cst_edge(inc: SubcycleInclusion, bases: tuple | None = None, field: Field = Q) -> FunctorEdge:
    """Restriction edge from the node of ``inc.target`` to the node of ``inc.source``."""
    src_base, tgt_base = bases if bases else (inc.source.elements[-1], inc.target.elements[-1])
    big = cst_node(inc.target, tgt_base)
    small = cst_node(inc.source, src_base)
    apply, pos, twist = restriction_functor(big, inc)
    images = {name: apply(g) for name, g in named_generators(big.quiver, field).items()}
    return FunctorEdge("restriction", big, small, pos, twist, images)


def cwst_edge(inc: SubcycleInclusion, bases: tuple | None = None, field: Field = Q) -> FunctorEdge:
    """Extension edge (left adjoint): image of ``k`` in the node of ``inc.target``."""
    src_base, tgt_base = bases if bases else (inc.source.elements[-1], inc.target.elements[-1])
    big = cst_node(inc.target, tgt_base)
    small = cst_node(inc.source, src_base)
    pos, twist = _pair_position(inc, big)
    # the twisted restriction is ``[1]`` after restricting, so its left adjoint starts from ``k[-1]``
    k = point(field, degree=1 if twist else 0)
    images = {"k": subcycle_extend(k, big.quiver, pos)}
    return FunctorEdge("extension", small, big, pos, twist, images)


def rebase_steps(c: CyclicSet, old_base, new_base) -> int:
    """Number of forward rotations taking the ``old_base`` node to the ``new_base`` node."""
    lin = c.linearization(old_base)
    return (lin.index(new_base) + 1) % len(c)


def rebase(x: PerfComplex, c: CyclicSet, old_base, new_base) -> PerfComplex:
    """Transport a complex between linearizations by the rotation dictionary.

    Moving the base one step back along the cycle moves every position up by
    one, which is one application of the mutation.
    """
    steps = (len(c) - rebase_steps(c, old_base, new_base)) % len(c)
    for _ in range(steps):
        x = cyclic_rotate(x)
    return x


__all__ = [
    "CyclicSet", "SubcycleInclusion", "CategoryNode", "FunctorEdge", "LabelNotFound", "NotConsecutive",
    "cst_node", "cst_edge", "cwst_edge", "restriction_functor", "rebase_steps", "rebase",
]
