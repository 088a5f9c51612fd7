from fractions import Fraction

import pytest

from oracles import SIGMAS, string_cycles
from stablegeo.catalog import (
    CATALOG,
    PERMS3,
    find_string_gluing,
    fake_fake_plane,
    normal_example,
    p2_curve_tile,
    string_surface,
    verify_extremal_pairs,
    x13,
    x24,
    x_35_index2,
    x_kl,
)
from stablegeo.errors import PreconditionError, RangeError, StructuralError
from stablegeo.invariants import compute_report


@pytest.mark.parametrize("k", range(1, 6))
def test_x_kl_over_the_whole_range(k):
    for l in range(1 - k, k + 2):
        s = x_kl(k, l)
        r = compute_report(s)
        assert (r.k_squared, r.chi) == (k, l)
        assert len(r.cusps) == k + l
        assert r.chi_semiresolution == r.chi_pushout
        # the recorded gluing reproduces the same cycle count independently
        meta = s.metadata
        perms = [tuple(p) for p in meta["junctions"]] + [tuple(meta["closing"])]
        assert len(string_cycles([SIGMAS[t] for t in meta["types"]], perms)) == k + l


@pytest.mark.parametrize("k, l", [(3, 9), (3, -3), (0, 1), (1, 4), (2, 5)])
def test_x_kl_out_of_range(k, l):
    with pytest.raises(RangeError, match="l <= k\\+1"):
        x_kl(k, l)


def test_special_cases():
    assert compute_report(x_kl(1, 3)).chi == 3
    assert compute_report(x_kl(2, 4)).chi == 4
    assert x13().metadata["types"] == ["C"]


def test_find_string_gluing_is_lexicographically_first():
    junctions, closing = find_string_gluing(["A", "A"], 1)
    # every lexicographically smaller choice gives a different cycle count
    target = (PERMS3.index(junctions[0]), PERMS3.index(closing))
    for a in range(6):
        for b in range(6):
            if (a, b) >= target:
                continue
            s = string_surface(["A", "A"], [PERMS3[a]], PERMS3[b])
            assert len(string_cycles([SIGMAS["A"]] * 2, [PERMS3[a], PERMS3[b]])) != 1
            assert len(compute_report(s).cusps) != 1


def test_find_string_gluing_impossible():
    with pytest.raises(StructuralError):
        find_string_gluing(["D"], 9)


def test_x24_range():
    with pytest.raises(RangeError):
        x24(nodes=4)


def test_p2_curve_tile():
    t = p2_curve_tile("Q", 5, 2)
    assert t.boundary[0].genus == 4
    assert len(t.boundary[0].slots) == 4
    with pytest.raises(RangeError):
        p2_curve_tile("Q", 3, 2)


@pytest.mark.parametrize("cr", [-1, 2, Fraction(1, 2), "3/7", -5])
def test_fake_fake_cross_ratio_is_inert(cr):
    r = compute_report(fake_fake_plane(cr))
    base = compute_report(fake_fake_plane())
    assert r == base


@pytest.mark.parametrize("cr", [0, 1, "1"])
def test_fake_fake_degenerate_cross_ratio(cr):
    with pytest.raises(PreconditionError):
        fake_fake_plane(cr)


def test_x35():
    r = compute_report(x_35_index2())
    assert (r.index, r.k_squared, r.chi) == (2, 3, 5)


@pytest.mark.parametrize("k", [1, 2, 5, 20])
@pytest.mark.parametrize("l", [1, 3, 20])
def test_normal_examples(k, l):
    r = normal_example(k, l)
    assert (r.k_squared, r.chi) == (k * l, k + l)
    assert r.extras["positive_on_test_curves"]
    assert r.extras["contracted_genus"] == 1


def test_normal_bmy_violation():
    r = normal_example(19, 19)
    assert (r.k_squared, 9 * r.chi) == (361, 342)
    assert not r.verdicts.bmy_classical
    assert normal_example(18, 18).verdicts.bmy_classical


def test_normal_precondition():
    with pytest.raises(PreconditionError):
        normal_example(0, 3)


def test_extremal_rows():
    rows = verify_extremal_pairs(6, 6)
    assert all(r.ok for r in rows)
    assert {r.family[:3] for r in rows} == {"i: ", "ii:", "iii", "iv:"}
    assert len(rows) == 2 + 7 * 6 + 6
    with pytest.raises(PreconditionError):
        verify_extremal_pairs(0, 1)


def test_catalog_registry():
    assert set(CATALOG) == {"x_kl", "x13", "x24", "x35", "fakefake", "normal", "extremal"}
    for name, entry in CATALOG.items():
        if not entry.expected:
            continue
        r = compute_report(entry.builder())
        for field, value in entry.expected.items():
            assert getattr(r, field) == value, (name, field)


def test_bicanonical_genus_of_strings():
    assert compute_report(x_kl(9, 1)).plurigenera[2] == 10
    for k in range(1, 7):
        assert compute_report(x_kl(k, 1 - k)).plurigenera[2] == 1
        # P_2 = 1 holds on the lowest line, not for l = 1
        assert compute_report(x_kl(k, 1)).plurigenera[2] == 1 + k


def test_normal_equality_plus_one_case():
    r = normal_example(3, 1)
    assert (r.k_squared, r.chi) == (3, 4)
    assert r.chi == r.k_squared + 1
