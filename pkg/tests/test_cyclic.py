import pytest
from hypothesis import given, strategies as st

from hmsdesk.complexes import cohomology
from hmsdesk.cyclic import (CyclicSet, LabelNotFound, NotConsecutive, SubcycleInclusion, cst_edge, cst_node,
                            cwst_edge, rebase, rebase_steps)
from hmsdesk.quivers import find_perf_quasi_iso, named_generators, named_object, subcycle_restrict

labels = st.lists(st.integers(0, 50), min_size=2, max_size=7, unique=True)


@given(labels)
def test_succ_pred_inverse(els):
    c = CyclicSet(els)
    for x in els:
        assert c.pred(c.succ(x)) == x
        assert c.adjacent(x, c.succ(x)) or len(els) == 2 and c.succ(x) == c.pred(x)


@given(labels, st.data())
def test_linearization_ends_at_base(els, data):
    c = CyclicSet(els)
    base = data.draw(st.sampled_from(els))
    lin = c.linearization(base)
    assert lin[-1] == base
    assert sorted(lin) == sorted(els)
    assert all(c.succ(a) == b for a, b in zip(lin, lin[1:]))


def test_cyclic_set_rejects_bad_input():
    with pytest.raises(ValueError):
        CyclicSet([1, 1])
    with pytest.raises(ValueError):
        CyclicSet([])
    with pytest.raises(LabelNotFound):
        CyclicSet("ab").succ("z")


@pytest.mark.parametrize("emb,pair", [
    ({"x": "b", "y": "c"}, (("b", "c"), 0)),
    ({"x": "c", "y": "b"}, (("b", "c"), 1)),
    ({"x": "d", "y": "a"}, (("d", "a"), 0)),
])
def test_inclusion_pair(emb, pair):
    inc = SubcycleInclusion(CyclicSet("xy"), CyclicSet("abcd"), emb)
    assert inc.pair() == pair


def test_inclusion_must_be_consecutive():
    inc = SubcycleInclusion(CyclicSet("xy"), CyclicSet("abcd"), {"x": "a", "y": "c"})
    with pytest.raises(NotConsecutive):
        inc.pair()
    with pytest.raises(LabelNotFound):
        SubcycleInclusion(CyclicSet("xy"), CyclicSet("abcd"), {"x": "a", "y": "q"})


def test_single_element_cycle_has_no_node():
    with pytest.raises(ValueError):
        cst_node(CyclicSet("a"), "a")


@pytest.mark.parametrize("target", ["b", "c", "d"])
def test_restriction_sees_one_injective(target):
    """At a non-wrapping position only the injective at its vertex survives."""
    c = CyclicSet("abcd")
    inc = SubcycleInclusion(CyclicSet("xy"), c, {"x": target, "y": c.succ(target)})
    e = cst_edge(inc)
    vertex = e.position - 1
    q = e.source.quiver
    for a in q.vertices:
        dims = cohomology(e.generator_images[f"I{a}"]).dims
        assert dims == ({0: 1} if a == vertex else {})


def test_wrapping_position_sees_first_projective():
    c = CyclicSet("abcd")
    inc = SubcycleInclusion(CyclicSet("xy"), c, {"x": "a", "y": "b"})
    e = cst_edge(inc)
    assert e.position == 1
    assert cohomology(e.generator_images["P1"]).dims == {1: 1}
    assert cohomology(e.generator_images["P2"]).dims == {}


def test_extension_edge_image():
    c = CyclicSet("abcd")
    inc = SubcycleInclusion(CyclicSet("xy"), c, {"x": "b", "y": "c"})
    e = cwst_edge(inc)
    assert e.direction == "extension"
    assert find_perf_quasi_iso(e.generator_images["k"], named_object(e.target.quiver, "k", 1)) is not None


@pytest.mark.parametrize("new_base", ["a", "b", "c"])
def test_rebase_preserves_folded_restrictions(new_base):
    c = CyclicSet("abcd")
    old, new = cst_node(c, "d"), cst_node(c, new_base)
    for x in named_generators(old.quiver).values():
        y = rebase(x, c, "d", new_base)
        for u in c.elements:
            h_old = cohomology(subcycle_restrict(x, old.position(u))).fold()
            h_new = cohomology(subcycle_restrict(y, new.position(u))).fold()
            assert h_old == h_new


def test_rebase_steps():
    c = CyclicSet("abcd")
    assert rebase_steps(c, "a", "b") == 1
    assert rebase_steps(c, "a", "a") == 0
