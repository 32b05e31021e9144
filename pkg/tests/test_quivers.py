import pytest
from hypothesis import given, strategies as st

from hmsdesk.complexes import cohomology, point
from hmsdesk.exactlin import Field, determinant
from hmsdesk.quivers import (LinearQuiver, PositionOutOfRange, QuiverMismatch, VertexOutOfRange, cyclic_rotate,
                             cyclic_rotate_inverse, direct_sum, euler_matrix, ext, find_perf_quasi_iso, fold,
                             hom_pairing_duality_check, literal_rotation_rule, named_generators, named_object,
                             parse_object, rotate_times, serre, shift, subcycle_extend, subcycle_restrict)
from hmsdesk.complexes import hom_cohomology

Q3 = LinearQuiver(3)
GENS3 = named_generators(Q3)


def dim_vector(x):
    return [cohomology(x.evaluate(v)).euler() for v in x.quiver.vertices]


def euler_form(m, n):
    """Ringel form of the linear quiver with arrows ``v -> v+1``."""
    s = sum(a * b for a, b in zip(m, n))
    return s - sum(m[v] * n[v + 1] for v in range(len(m) - 1))


objects = st.tuples(st.sampled_from(sorted(GENS3)), st.integers(-2, 2))


def _obj(item):
    name, s = item
    return shift(GENS3[name], s)


@pytest.mark.parametrize("name,expected", [
    ("P1", [1, 1, 1]), ("P2", [0, 1, 1]), ("P3", [0, 0, 1]),
    ("k1", [1, 0, 0]), ("k2", [0, 1, 0]), ("k3", [0, 0, 1]),
    ("I1", [1, 0, 0]), ("I2", [1, 1, 0]), ("I3", [1, 1, 1]),
])
def test_named_dimension_vectors(name, expected):
    assert dim_vector(GENS3[name]) == expected


@given(objects, st.integers(1, 3))
def test_hom_from_projective_is_evaluation(item, a):
    x = _obj(item)
    assert ext(named_object(Q3, "P", a), x) == cohomology(x.evaluate(a))


@given(objects, st.integers(1, 3))
def test_hom_into_injective_is_dual_evaluation(item, a):
    x = _obj(item)
    got = ext(x, named_object(Q3, "I", a)).dims
    assert got == {-k: v for k, v in cohomology(x.evaluate(a)).dims.items()}


@given(objects, objects)
def test_euler_pairing_matches_ringel_form(first, second):
    x, y = _obj(first), _obj(second)
    assert ext(x, y).euler() == euler_form(dim_vector(x), dim_vector(y))


@pytest.mark.parametrize("n", range(1, 9))
def test_euler_matrix_unimodular(n):
    assert determinant(euler_matrix(LinearQuiver(n))) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_duality_check(n):
    assert hom_pairing_duality_check(LinearQuiver(n))


def test_duality_check_mod_p():
    assert hom_pairing_duality_check(LinearQuiver(3), Field(3))


@pytest.mark.parametrize("a", [1, 2])
def test_rotation_moves_skyscrapers(a):
    x = cyclic_rotate(named_object(Q3, "k", a))
    assert find_perf_quasi_iso(x, named_object(Q3, "k", a + 1)) is not None
    assert find_perf_quasi_iso(x, literal_rotation_rule(Q3, a)) is not None


def test_rotation_of_last_skyscraper():
    x = cyclic_rotate(GENS3["k3"])
    assert find_perf_quasi_iso(x, shift(GENS3["P1"], -1)) is not None
    assert find_perf_quasi_iso(x, literal_rotation_rule(Q3, 3)) is None
    assert find_perf_quasi_iso(fold(x), fold(literal_rotation_rule(Q3, 3))) is not None


@given(objects)
def test_rotation_inverse(item):
    x = _obj(item)
    assert find_perf_quasi_iso(cyclic_rotate_inverse(cyclic_rotate(x)), x) is not None


@pytest.mark.parametrize("m", [2, 3, 4])
def test_full_rotation_is_double_shift(m):
    q = LinearQuiver(m - 1)
    for g in named_generators(q).values():
        assert find_perf_quasi_iso(rotate_times(g, m), shift(g, -2)) is not None


def test_serre_sends_projective_to_injective():
    for a in Q3.vertices:
        assert find_perf_quasi_iso(serre(named_object(Q3, "P", a)), named_object(Q3, "I", a)) is not None


@given(objects, st.integers(1, 4))
def test_restrict_extend_adjunction(item, pos):
    x = _obj(item)
    left = ext(subcycle_extend(point(), Q3, pos), x)
    assert left == cohomology(subcycle_restrict(x, pos))


def test_parse_object_and_errors():
    x = parse_object(Q3, "k2[1]")
    assert x.terms == {-2: (3,), -1: (2,)}
    with pytest.raises(VertexOutOfRange):
        named_object(Q3, "P", 4)
    with pytest.raises(PositionOutOfRange):
        subcycle_restrict(GENS3["P1"], 5)
    with pytest.raises(QuiverMismatch):
        ext(GENS3["P1"], named_object(LinearQuiver(2), "P", 1))


def test_direct_sum_ext_additive():
    s = direct_sum(GENS3["k1"], GENS3["k2"])
    assert ext(s, GENS3["k2"]).dims == {0: 1, 1: 1}


def test_fold_ext():
    assert ext(fold(GENS3["k1"]), fold(GENS3["k2"])).dims == {1: 1}
    assert hom_cohomology(point(), point()).dims == {0: 1}
