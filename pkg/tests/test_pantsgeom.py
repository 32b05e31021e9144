import pytest
from hypothesis import given, strategies as st

from hmsdesk.pantsgeom import (SignPattern, contact_cover_degree, contact_lattice_map, cover_meet, cube_diagram,
                               euler_char_c, meet_all, proper_subsets, strata)


def bitmask_subsets(n):
    full = (1 << (n + 1)) - 1
    return [m for m in range(full)]


def bitmask_edges(n):
    masks = bitmask_subsets(n)
    return sum(1 for a in masks for b in masks if a != b and a & b == a)


@pytest.mark.parametrize("n,edges", [(1, 2), (2, 12), (3, 50)])
def test_cube_edge_counts(n, edges):
    assert len(cube_diagram(n).edges) == edges == bitmask_edges(n)


@pytest.mark.parametrize("n", range(1, 9))
def test_strata_table(n):
    t = strata(n)
    assert len(t.strata) == 2 ** (n + 1) - 1 == len(bitmask_subsets(n))
    assert all(s.dimension == n for s in t.strata)
    assert euler_char_c(n) == (-1) ** n
    assert contact_cover_degree(n) == n + 1


def test_n1_strata():
    t = strata(1)
    assert [(sorted(s.subset), s.torus_rank, s.simplex_dim) for s in t.strata] == [
        ([], 0, 1), ([1], 1, 0), ([2], 1, 0)]


def test_invalid_dimension():
    with pytest.raises(ValueError):
        strata(0)
    with pytest.raises(ValueError):
        contact_cover_degree(0)


@given(st.integers(1, 5))
def test_incidence_is_strict_inclusion(n):
    t = strata(n)
    for a, b in t.incidence:
        assert a < b and t.incident(a, b)
    assert len(t.incidence) == bitmask_edges(n)


@given(st.integers(1, 4))
def test_proper_subsets_sorted_by_size(n):
    subs = proper_subsets(n)
    assert [len(s) for s in subs] == sorted(len(s) for s in subs)
    assert frozenset(range(1, n + 2)) not in subs


def test_lattice_map_has_diagonal_kernel_mod_sum():
    m = contact_lattice_map(2)
    image = m.apply([1, 1, 1])
    assert image[:2] == [0, 0] and image[2] == 3


@given(st.integers(1, 4), st.data())
def test_cover_meet_intersects(n, data):
    subs = proper_subsets(n)
    p = SignPattern(n, data.draw(st.sampled_from(subs)))
    q = SignPattern(n, data.draw(st.sampled_from(subs)))
    r = cover_meet(p, q)
    xi = data.draw(st.lists(st.integers(-2, 2), min_size=n + 1, max_size=n + 1))
    assert r.allows(xi) == (p.allows(xi) and q.allows(xi))
    assert meet_all([p, q]) == r


def test_sign_pattern_validation():
    with pytest.raises(ValueError):
        SignPattern(1, frozenset({3}))
    with pytest.raises(ValueError):
        cover_meet(SignPattern(1, frozenset()), SignPattern(2, frozenset()))
