from math import comb

import pytest
from hypothesis import given, strategies as st

from hmsdesk.exactlin import Field
from hmsdesk.polyring import (FreeComplex, MonomialIdeal, MultiMonomial, cone_free,
                              free_hilbert, free_hom_complex, hilbert_function, koszul_complex, set_variables_zero,
                              shift_free, truncated_cohomology)
from oracles import brute_hilbert


def power_series_hilbert(powers, bound):
    """Coefficients of prod (1 - t^p) / (1 - t) for the ideal of pure powers."""
    series = [1] + [0] * bound
    for p in powers:
        factor = [1 if i < p else 0 for i in range(bound + 1)]
        series = [sum(series[i] * factor[d - i] for i in range(d + 1)) for d in range(bound + 1)]
    return series


ideals = st.integers(1, 3).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(*[st.integers(0, 3)] * n), max_size=4)))


@given(ideals, st.integers(0, 6))
def test_hilbert_matches_brute_force(data, bound):
    n, gens = data
    gens = [g for g in gens if any(g)]
    assert hilbert_function(MonomialIdeal(n, gens), bound) == brute_hilbert(n, gens, bound)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.integers(0, 8))
def test_hilbert_of_pure_powers(powers, bound):
    n = len(powers)
    gens = [tuple(p if i == j else 0 for j in range(n)) for i, p in enumerate(powers)]
    assert hilbert_function(MonomialIdeal(n, gens), bound) == power_series_hilbert(powers, bound)


@pytest.mark.parametrize("n,d", [(1, 5), (2, 3), (3, 4), (4, 2)])
def test_free_hilbert(n, d):
    assert hilbert_function(MonomialIdeal(n, []), d)[d] == free_hilbert(n, d)


def test_ideal_reduces_generators():
    i = MonomialIdeal(2, [(1, 0), (2, 1), (1, 0)])
    assert i.generators == (MultiMonomial.of(1, 0),)
    assert i.contains((3, 5))
    assert not i.contains((0, 5))
    with pytest.raises(ValueError):
        hilbert_function(i, -1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_koszul_resolves_residue_field(n):
    k = koszul_complex(n, list(range(1, n + 1)))
    assert truncated_cohomology(k, 4) == {(0, 0): 1}


@pytest.mark.parametrize("n,r", [(2, 1), (3, 1), (3, 2)])
def test_partial_koszul_leaves_polynomial_ring(n, r):
    k = koszul_complex(n, list(range(1, r + 1)))
    h = truncated_cohomology(k, 3)
    assert set(j for j, _ in h) == {0}
    assert [h.get((0, d), 0) for d in range(4)] == [free_hilbert(n - r, d) for d in range(4)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_self_ext_of_residue_field_is_exterior(n):
    k = koszul_complex(n, list(range(1, n + 1)))
    h = truncated_cohomology(free_hom_complex(k, k), 2)
    assert h == {(i, -i): comb(n, i) for i in range(n + 1)}


def test_set_variables_zero_on_koszul():
    k = koszul_complex(2, [1, 2])
    r = set_variables_zero(k, [1])
    assert truncated_cohomology(r, 3) == {(0, 0): 1, (-1, 0): 1}


def test_shift_and_cone():
    k = koszul_complex(1, [1])
    s = shift_free(k, 1)
    assert s.terms[-2] == k.terms[-1]
    assert truncated_cohomology(s, 2) == {(-1, 0): 1}
    ident = {k: {(0, 0): {(0,): 1}} for k in (-1, 0)}
    assert truncated_cohomology(cone_free(k, k, ident), 3) == {}


def test_homogeneity_reported():
    c = FreeComplex(1, {-1: [(0,)], 0: [(0,)]}, {-1: {(0, 0): {(1,): 1}}})
    assert not c.is_homogeneous()
    assert koszul_complex(2, [1, 2]).is_homogeneous()


def test_mod_p_d_squared():
    k = koszul_complex(3, [1, 2, 3], Field(7))
    assert truncated_cohomology(k, 3) == {(0, 0): 1}
