import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lattice_points_hirzebruch, monomials_p2
from stablegeo.errors import StructuralError, UnsupportedError
from stablegeo.lattice import (
    DivisorClass,
    adjunction_genus,
    blow_up,
    custom_lattice,
    elliptic_product,
    h0,
    hirzebruch,
    intersect,
    projective_plane,
)


@st.composite
def lattice_and_classes(draw):
    n = draw(st.integers(1, 5))
    ints = st.integers(-5, 5)
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            gram[i][j] = gram[j][i] = draw(ints)
    lat = custom_lattice("L", [f"e{i}" for i in range(n)], gram, [0] * n, 1)
    vec = st.lists(ints, min_size=n, max_size=n).map(lambda v: DivisorClass(tuple(v)))
    return lat, draw(vec), draw(vec), draw(vec), draw(ints)


@settings(max_examples=200, deadline=None)
@given(lattice_and_classes())
def test_intersection_is_symmetric_bilinear(data):
    lat, a, b, c, n = data
    assert intersect(lat, a, b) == intersect(lat, b, a)
    assert intersect(lat, a + b, c) == intersect(lat, a, c) + intersect(lat, b, c)
    assert intersect(lat, a * n, b) == n * intersect(lat, a, b)
    assert intersect(lat, n * a, b) == intersect(lat, a, b * n)
    assert intersect(lat, a - a, b) == 0


def test_custom_lattice_rejects_asymmetric_gram():
    with pytest.raises(StructuralError):
        custom_lattice("bad", ["a", "b"], [[0, 1], [2, 0]], [0, 0], 1)


def test_rank_mismatch_raises():
    p2 = projective_plane()
    with pytest.raises(StructuralError):
        intersect(p2, DivisorClass((1, 0)), DivisorClass((1,)))
    with pytest.raises(StructuralError):
        DivisorClass((1,)) + DivisorClass((1, 2))


@pytest.mark.parametrize("n", range(0, 8))
def test_canonical_square_drops_by_one_per_blow_up(n):
    p2 = blow_up(projective_plane(), n)
    assert intersect(p2, p2.canonical, p2.canonical) == 9 - n
    fe = blow_up(hirzebruch(3), n)
    assert intersect(fe, fe.canonical, fe.canonical) == 8 - n


@pytest.mark.parametrize("e", range(0, 7))
def test_hirzebruch_basics(e):
    fe = hirzebruch(e)
    c0, f = fe.basis_class("C0"), fe.basis_class("F")
    assert intersect(fe, c0, c0) == -e
    assert intersect(fe, f, f) == 0
    assert intersect(fe, c0, f) == 1
    assert intersect(fe, fe.canonical, fe.canonical) == 8
    assert adjunction_genus(fe, c0) == 0
    assert adjunction_genus(fe, f) == 0
    # a C0 + b F has genus (a-1)(b-1) - e a(a-1)/2
    for a, b in ((3, 2 * e + 4), (2, e + 3), (1, e)):
        assert adjunction_genus(fe, fe.divisor(C0=a, F=b)) == (a - 1) * (b - 1) - e * a * (a - 1) // 2


def test_elliptic_product():
    cc = elliptic_product()
    assert intersect(cc, cc.canonical, cc.canonical) == 0
    assert cc.chi_structure == 0
    assert adjunction_genus(cc, cc.basis_class("C")) == 1


@pytest.mark.parametrize("d", range(1, 8))
def test_plane_curve_genus(d):
    p2 = projective_plane()
    assert adjunction_genus(p2, p2.divisor(H=d)) == (d - 1) * (d - 2) // 2


def test_exceptional_curves_are_rational_minus_one_curves():
    lat = blow_up(projective_plane(), 4, ["Ea", "Eb", "Ec", "Ed"])
    for lab in ("Ea", "Eb", "Ec", "Ed"):
        e = lat.basis_class(lab)
        assert intersect(lat, e, e) == -1
        assert intersect(lat, lat.canonical, e) == -1
        assert adjunction_genus(lat, e) == 0
    # strict transform of a line through two blown-up points
    line = lat.divisor(H=1, Ea=-1, Eb=-1)
    assert intersect(lat, line, line) == -1
    assert adjunction_genus(lat, line) == 0


def test_odd_parity_raises():
    lat = custom_lattice("odd", ["x"], [[1]], [0], 1)
    with pytest.raises(StructuralError):
        adjunction_genus(lat, lat.divisor(x=1))


def test_blow_up_labels_and_names():
    lat = blow_up(blow_up(projective_plane(), 2), 1)
    assert lat.basis == ("H", "E1", "E2", "E3")
    assert lat.blowups == 3
    with pytest.raises(StructuralError):
        blow_up(projective_plane(), 2, ["E"])
    with pytest.raises(StructuralError):
        blow_up(projective_plane(), -1)


def test_divisor_rejects_unknown_label():
    with pytest.raises(StructuralError):
        projective_plane().divisor(Q=1)


@pytest.mark.parametrize("a", range(-2, 12))
def test_h0_plane_matches_monomial_count(a):
    p2 = projective_plane()
    assert h0(p2, p2.divisor(H=a)) == monomials_p2(a)


@pytest.mark.parametrize("e", range(0, 6))
@pytest.mark.parametrize("a", range(-1, 5))
@pytest.mark.parametrize("b", range(-2, 12))
def test_h0_hirzebruch_matches_toric_count(e, a, b):
    fe = hirzebruch(e)
    assert h0(fe, fe.divisor(C0=a, F=b)) == lattice_points_hirzebruch(e, a, b)


def test_h0_unsupported_on_blow_ups():
    lat = blow_up(projective_plane(), 1)
    with pytest.raises(UnsupportedError):
        h0(lat, lat.divisor(H=1))
    with pytest.raises(UnsupportedError):
        h0(elliptic_product(), elliptic_product().divisor(C=1))


def test_describe():
    fe = hirzebruch(2)
    assert fe.describe(fe.divisor(C0=3, F=-1)) == "3C0-F"
    assert fe.describe(DivisorClass.zero(2)) == "0"
