import pytest
from hypothesis import given, strategies as st

from hmsdesk.complexes import class_rank, cohomology_representatives
from hmsdesk.exactlin import Field
from hmsdesk.mirror import thrice_punctured_families
from hmsdesk.quivers import parse_object
from hmsdesk.skeleton import (CertificateFailure, ChainPoset, InvalidIncidence, LimitHom, SkeletonParseError,
                              build_diagram, cover_diagram, glue_family, limit_compose, limit_hom, load_skeleton,
                              mayer_vietoris_hom, parse_skeleton, punctured_sphere_skeleton, shift_family)

TRIVALENT = """\
# one trivalent vertex with three legs
vertex v
edge e1 v -
edge e2 v -
edge e3 v -
sectors v s1 s2 s3
incidence v e1 s1 s2
incidence v e2 s2 s3
incidence v e3 s3 s1
"""


def test_parse_trivalent_example():
    s = parse_skeleton(TRIVALENT)
    assert s.valence("v") == 3
    d = build_diagram(s)
    assert len(d.nodes) == 1 + 3 + 3
    assert len(d.edges) == 6
    assert d.nodes[("v", "v")].quiver.n == 2
    assert all(d.nodes[("e", e)].quiver.n == 1 for e in ("e1", "e2", "e3"))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_text_roundtrip(n):
    s = punctured_sphere_skeleton(n)
    again = parse_skeleton(s.to_text())
    assert again.to_text() == s.to_text()


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_ladder_shape(n):
    s = punctured_sphere_skeleton(n)
    assert len(s.vertices) == n - 1
    assert len(s.vertices) - len(s.edges) == 2 - n
    vals = sorted(s.valence(v) for v in s.vertices)
    if n == 2:
        assert vals == [2]
    else:
        assert vals == [3, 3] + [4] * (n - 3)
    poset = ChainPoset.of(s)
    assert len(poset.relations) == 2 * len(s.incidences)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_cover_counts(n):
    c = cover_diagram(n)
    assert len(c.pieces) == n - 1
    assert len(c.overlaps) == n - 2
    assert [p.kind for p in c.pieces] == ["end"] + ["middle"] * (n - 3) + ["end"]
    assert len(c.maps) == 2 * len(c.overlaps)


def test_shipped_skeleton_files():
    for n in (2, 3):
        s = load_skeleton(f"skeletons/sphere{n}.skel")
        assert s.to_text() == punctured_sphere_skeleton(n).to_text()


@pytest.mark.parametrize("text,line,fragment", [
    ("vertex v\nvertex v\n", 2, "duplicate vertex"),
    ("vertex v\nedge e v\n", 2, "takes 3 arguments"),
    ("vertex v\nbogus x\n", 2, "unknown keyword"),
    ("vertex v\nsectors v a b c\nedge e v -\nincidence v e a q\n", 4, "unknown sector"),
    ("vertex v\nsectors v a b c d\nedge e v -\nincidence v e a c\n", 4, "not adjacent"),
    ("vertex v\nedge e v -\nincidence v e a b\n", 3, "no sectors"),
])
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(SkeletonParseError) as info:
        parse_skeleton(text, "demo.skel")
    assert info.value.line == line
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"demo.skel:{line}:")


def test_univalent_vertex_rejected():
    text = "vertex v\nedge e v -\nsectors v a\nincidence v e a a\n"
    with pytest.raises(SkeletonParseError):
        parse_skeleton(text)


def test_bad_mode():
    with pytest.raises(ValueError):
        build_diagram(punctured_sphere_skeleton(2), mode="stack")


def _circle(field=None):
    field = field or Field(0)
    d = build_diagram(punctured_sphere_skeleton(2), field=field)
    q = d.nodes[("v", "v1")].quiver

    def family(lam):
        return glue_family(d, {"v1": parse_object(q, "k1", field)}, monodromy={("v1", "c1", 1): lam})

    return d, family


@pytest.mark.parametrize("lam,mu", [(1, 1), (2, 2), (1, 2), (3, 2)])
def test_circle_local_systems(lam, mu):
    """Hom between rank-one local systems on a circle is H*(S^1, L_{mu/lam})."""
    d, family = _circle()
    expected = {"even": 1, "odd": 1} if lam == mu else {"even": 0, "odd": 0}
    assert limit_hom(d, family(lam), family(mu)).as_dict() == expected


@given(st.integers(1, 4), st.integers(1, 4))
def test_circle_local_systems_mod_5(lam, mu):
    d, family = _circle(Field(5))
    dims = limit_hom(d, family(lam), family(mu)).as_dict()
    assert dims == ({"even": 1, "odd": 1} if lam == mu else {"even": 0, "odd": 0})


def test_zero_monodromy_has_no_certificate():
    d, family = _circle(Field(5))
    with pytest.raises(CertificateFailure):
        family(5)


def test_shift_family_swaps_parity():
    d, family = _circle()
    x = family(1)
    assert limit_hom(d, x, shift_family(x, 1)).as_dict() == {"even": 1, "odd": 1}
    assert shift_family(x, 2) is x


def test_mayer_vietoris_matches_direct_limit():
    d, a, _ = thrice_punctured_families()
    cover = cover_diagram(3)
    for x in a.values():
        for y in a.values():
            assert mayer_vietoris_hom(cover, x, y) == limit_hom(d, x, y)


def test_endomorphisms_nonzero():
    d, a, _ = thrice_punctured_families()
    for x in a.values():
        assert limit_hom(d, x, x)[0] >= 1


def test_limit_compose_products_are_cocycles():
    d, a, _ = thrice_punctured_families()
    names = ["ZZ_1", "ZZ_2", "B1_1"]
    homs = {(p, q): LimitHom(d, a[p], a[q]) for p in names for q in names}
    for x in names:
        for y in names:
            for z in names:
                hxy, hyz, hxz = homs[(x, y)], homs[(y, z)], homs[(x, z)]
                for fd in (0, 1):
                    for gd in (0, 1):
                        for f in cohomology_representatives(hxy.complex, fd):
                            for g in cohomology_representatives(hyz.complex, gd):
                                h = limit_compose(d, hxy, hyz, g, gd, f, fd, hxz)
                                assert all(v == 0 for v in hxz.complex.d((fd + gd) % 2).apply(h))


def test_identity_class_acts_by_identity():
    d, a, _ = thrice_punctured_families()
    x = a["ZZ_1"]
    h = LimitHom(d, x, x)
    units = cohomology_representatives(h.complex, 0)
    odd = cohomology_representatives(h.complex, 1)
    # some even class composes with every odd class without loss of rank
    best = max(class_rank(h.complex, 1, [limit_compose(d, h, h, u, 0, f, 1, h) for f in odd]) for u in units)
    assert best == len(odd)


def test_incompatible_incidence_rejected():
    text = TRIVALENT.replace("incidence v e3 s3 s1", "incidence v e3 s1 s2")
    with pytest.raises(SkeletonParseError):
        parse_skeleton(text)
    with pytest.raises(InvalidIncidence):
        punctured_sphere_skeleton(2).sub_skeleton(["v1"], {"c1": ("v1", "zz")})
