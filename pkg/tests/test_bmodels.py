import pytest
from hypothesis import given, strategies as st

from hmsdesk.bmodels import (AlgebraMismatch, IndexOutOfRange, NotXInvertible, TruncationTooSmall, coh_ext_table,
                             coh_hyperplane, fold_compare, free_complexes_equal, kronecker_dictionary, kronecker_eta,
                             kronecker_ext, kronecker_fiber, kronecker_skyscraper, kronecker_structure_sheaf,
                             kronecker_twist_minus_one, koszul_restrict, mf_generator, mf_hom_cohomology,
                             nodal_chain_ext, nodal_ext, nodal_line, nodal_point_on_branch, origin_skyscraper,
                             restrict_between, structure_sheaf, torsion_ext, torsion_fiber, torsion_point,
                             descent_object)
from hmsdesk.complexes import cohomology
from hmsdesk.exactlin import Field
from hmsdesk.polyring import truncated_cohomology
from oracles import coh_table, mf_table, p1_line_bundle_ext


@pytest.mark.parametrize("n,a,b", [(1, 1, 1), (1, 1, 2), (2, 1, 1), (2, 2, 3), (2, 3, 1)])
def test_mf_hom_matches_quotient_rings(n, a, b):
    assert mf_hom_cohomology(mf_generator(n, a), mf_generator(n, b), 5) == mf_table(n, a, b, 5)


def test_mf_hom_mod_p():
    f = Field(7)
    assert mf_hom_cohomology(mf_generator(2, 1, f), mf_generator(2, 1, f), 4) == mf_table(2, 1, 1, 4)


def test_mf_index_checked():
    with pytest.raises(IndexOutOfRange):
        mf_generator(2, 4)
    with pytest.raises(AlgebraMismatch):
        mf_hom_cohomology(mf_generator(1, 1), mf_generator(2, 1), 2)


@pytest.mark.parametrize("n,a,b", [(2, 1, 1), (2, 1, 2), (3, 2, 2), (3, 3, 1)])
def test_coh_ext_matches_quotient_rings(n, a, b):
    assert coh_ext_table(n, a, b, 4, 2) == coh_table(n, a, b, 4, 2)


def test_coh_truncation_guard():
    with pytest.raises(TruncationTooSmall):
        coh_ext_table(2, 1, 1, 3, 2, length=4)
    assert coh_hyperplane(2, 1, 3).valid_length == 3


@pytest.mark.parametrize("n,a,b", [(2, 1, 1), (2, 1, 2), (3, 2, 2), (3, 1, 3)])
def test_fold_compare(n, a, b):
    assert fold_compare(n, a, 4, b)


def test_nodal_chain_matches_node_local_tables():
    """The chain with one node is the union of two coordinate lines."""
    for a in (1, 2):
        assert nodal_chain_ext(3, f"O{a}", f"O{a}", 4, 2) == coh_ext_table(2, a, a, 4, 2)
    assert nodal_chain_ext(3, "O1", "O2", 4, 2) == coh_ext_table(2, 1, 2, 4, 2)


def test_nodal_chain_middle_component_is_projective():
    t = nodal_chain_ext(4, "O2", "O2", 4, 1)
    assert t[0] == [1, 0, 0, 0, 0]
    with pytest.raises(IndexOutOfRange):
        nodal_chain_ext(4, "O4", "O1")


LINE_BUNDLES = {"O": (kronecker_structure_sheaf, 0), "O(-1)": (kronecker_twist_minus_one, -1)}


@pytest.mark.parametrize("src", sorted(LINE_BUNDLES))
@pytest.mark.parametrize("tgt", sorted(LINE_BUNDLES))
def test_kronecker_line_bundles(src, tgt):
    (fs, a), (ft, b) = LINE_BUNDLES[src], LINE_BUNDLES[tgt]
    h0, h1 = p1_line_bundle_ext(a, b)
    assert kronecker_ext(fs(), ft()).as_dict() == {"even": h0, "odd": h1}


@pytest.mark.parametrize("p", [0, 1, 2, "inf"])
def test_kronecker_points(p):
    k = kronecker_skyscraper(p)
    for name, (f, _) in LINE_BUNDLES.items():
        assert kronecker_ext(f(), k).as_dict() == {"even": 1, "odd": 0}
        assert kronecker_ext(k, f()).as_dict() == {"even": 0, "odd": 1}
    for q in (0, 1, 2, "inf"):
        dims = kronecker_ext(k, kronecker_skyscraper(q)).as_dict()
        assert dims == ({"even": 1, "odd": 1} if p == q else {"even": 0, "odd": 0})


def test_kronecker_fibers():
    assert cohomology(kronecker_fiber(kronecker_structure_sheaf(), 3)).as_dict() == {"even": 1, "odd": 0}
    assert cohomology(kronecker_fiber(kronecker_skyscraper(3), 3)).as_dict() == {"even": 1, "odd": 1}
    assert cohomology(kronecker_fiber(kronecker_skyscraper(3), 2)).as_dict() == {"even": 0, "odd": 0}


def test_eta_of_structure_sheaf_is_a_point():
    assert cohomology(kronecker_eta(kronecker_structure_sheaf())).as_dict() == {"even": 1, "odd": 0}


def test_kronecker_dictionary():
    t, pres = kronecker_dictionary(kronecker_skyscraper(0))
    assert t.dim == 1 and t.t.is_zero()
    assert pres.is_homogeneous()
    t, pres = kronecker_dictionary(kronecker_skyscraper(2))
    assert t.t.entries == {(0, 0): 2}
    assert not pres.is_homogeneous()
    with pytest.raises(NotXInvertible):
        kronecker_dictionary(kronecker_skyscraper("inf"))


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 1))
def test_torsion_points(lam, mu, parity):
    dims = torsion_ext(torsion_point(lam), torsion_point(mu, parity=parity)).as_dict()
    # a parity shift swaps Hom and Ext^1, which have equal dimension here
    assert dims == ({"even": 1, "odd": 1} if lam == mu else {"even": 0, "odd": 0})
    assert cohomology(torsion_fiber(torsion_point(lam), lam)).as_dict() == {"even": 1, "odd": 1}


@pytest.mark.parametrize("c,d,expected", [(1, 1, 2), (1, 2, 1), (3, -1, 1)])
def test_nodal_lines(c, d, expected):
    """``x + c y`` acts on ``R/(x + d y)`` as ``(c - d) y``, which has rank one unless ``c = d``."""
    assert nodal_ext(nodal_line(c), nodal_line(d)).as_dict() == {"even": expected, "odd": expected}


@pytest.mark.parametrize("b1,v1,b2,v2,expected", [
    (1, 1, 1, 1, 1), (1, 1, 1, 2, 0), (1, 1, 2, 1, 0), (2, 3, 2, 3, 1),
])
def test_nodal_points(b1, v1, b2, v2, expected):
    got = nodal_ext(nodal_point_on_branch(b1, v1), nodal_point_on_branch(b2, v2))
    assert got.as_dict() == {"even": expected, "odd": expected}
    assert nodal_ext(nodal_point_on_branch(b1, v1), nodal_line(1)).as_dict() == {"even": 0, "odd": 0}


def test_nodal_point_off_node():
    with pytest.raises(ValueError):
        nodal_point_on_branch(1, 0)
    with pytest.raises(ValueError):
        nodal_line(0)


def test_koszul_restriction_examples():
    r = koszul_restrict(structure_sheaf(2), [1])
    assert free_complexes_equal(r, structure_sheaf(1))
    r = koszul_restrict(origin_skyscraper(1), [])
    assert truncated_cohomology(r, 2) == {(0, 0): 1, (-1, 0): 1}


subsets3 = st.sets(st.integers(1, 3))


@given(subsets3, subsets3, subsets3)
def test_koszul_restriction_squares_commute(a, b, c):
    big = a | b | c
    mid = b | c
    small = c
    for x in (structure_sheaf(len(big)), origin_skyscraper(len(big))):
        step = restrict_between(restrict_between(x, big, mid), mid, small)
        assert free_complexes_equal(step, restrict_between(x, big, small))


def test_descent_object():
    d = descent_object(3, [1, 2, 3], origin_skyscraper(3))
    assert len(d.pieces) == 8
    assert d.verify()
    assert set(d.certificates.values()) == {"identity"}
