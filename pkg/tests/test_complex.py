import dataclasses

import pytest

from oracles import SIGMAS, string_cycles
from stablegeo.catalog import elementary_tile, fake_fake_plane, four_line_tile, string_surface, x13, x24, x_35_index2
from stablegeo.complex import (
    GluedSurface,
    GluePair,
    GluingMap,
    SelfGlue,
    conductor_components,
    exceptional_cycles,
    marked_point_classes,
    require_valid,
    validate,
)
from stablegeo.errors import PreconditionError, UnsupportedError


def _with_gluing(s, pairs=None, self_pairs=None):
    g = GluingMap(pairs if pairs is not None else s.gluing.pairs,
                  self_pairs if self_pairs is not None else s.gluing.self_pairs)
    return GluedSurface(s.tiles, g, s.label)


def test_catalog_surfaces_validate():
    for s in (x13(), x24(), x24(0), fake_fake_plane()):
        r = validate(s)
        assert r.valid, r.violations
        assert r.index == 1
    r = validate(x_35_index2())
    assert r.valid and r.index == 2


def test_single_tile_must_be_fully_glued():
    t = four_line_tile("T0")
    s = GluedSurface((t,), GluingMap((GluePair("T0.L1", "T0.L2", (0, 1, 2)),)))
    r = validate(s)
    assert not r.valid
    assert any("T0.L3 is not glued" in v for v in r.violations)


@pytest.mark.parametrize(
    "perm, fragment",
    [((0, 1), "slot"), ((0, 0, 1), "not a bijection"), ((0, 1, 3), "not a bijection")],
)
def test_bad_permutations_are_reported(perm, fragment):
    s = x13()
    pairs = list(s.gluing.pairs)
    pairs[1] = dataclasses.replace(pairs[1], perm=perm)
    r = validate(_with_gluing(s, pairs))
    assert not r.valid
    assert any(fragment in v for v in r.violations)


def test_unknown_and_repeated_components():
    s = x13()
    pairs = list(s.gluing.pairs)
    r = validate(_with_gluing(s, pairs + [GluePair("T0.L9", "T0.L1", (0, 1, 2))]))
    assert any("unknown component 'T0.L9'" in v for v in r.violations)
    assert any("appears in 2 gluing entries" in v for v in r.violations)


def test_self_gluing_must_be_an_involution():
    s = x_35_index2()
    sp = [SelfGlue("T0.L1", (1, 2, 0)), s.gluing.self_pairs[1]]
    r = validate(_with_gluing(s, self_pairs=sp))
    assert any("not an involution" in v for v in r.violations)


def test_strict_transform_check():
    t = four_line_tile("T0")
    bad = dataclasses.replace(t.boundary[0], cls=t.lattice.divisor(H=1))
    t2 = dataclasses.replace(t, boundary=(bad,) + t.boundary[1:])
    s = x13()
    s2 = GluedSurface((t2,), s.gluing)
    r = validate(s2)
    assert any("strict transform" in v for v in r.violations)


def test_require_valid_raises_precondition():
    s = _with_gluing(x13(), pairs=())
    with pytest.raises(PreconditionError):
        require_valid(s)
    # validate itself never raises
    assert not validate(s).valid


def test_x13_point_classes():
    classes = marked_point_classes(x13())
    # 12 marked points (3 per line) collapse into points of the double curve
    assert sum(pc.size for pc in classes) == 12
    assert all(pc.branch_count >= 1 for pc in classes)
    # four points of the double curve, two of them where both branches meet
    assert sorted(pc.branch_count for pc in classes) == [1, 1, 2, 2]


def test_point_classes_need_index_one():
    with pytest.raises(UnsupportedError):
        marked_point_classes(x_35_index2())


@pytest.mark.parametrize("t", sorted(SIGMAS))
@pytest.mark.parametrize("closing", [(0, 1, 2), (1, 2, 0), (0, 2, 1)])
def test_cycles_match_union_find_oracle(t, closing):
    s = string_surface([t], [], closing)
    got = sorted(c.length for c in exceptional_cycles(s) if c.closed)
    assert got == string_cycles([SIGMAS[t]], [closing])
    assert all(c.closed for c in exceptional_cycles(s))


def test_cycles_need_blown_up_tiles():
    with pytest.raises(UnsupportedError):
        exceptional_cycles(x24())


def test_index_two_chains_are_open_and_end_at_pinches():
    comps = exceptional_cycles(x_35_index2())
    open_chains = [c for c in comps if not c.closed]
    assert open_chains
    for c in open_chains:
        assert set(c.ends) <= {"pinch", "free"}


def test_conductor_components():
    d = conductor_components(x13())
    assert len(d) == 2 and all(c.genus == 0 for c in d)
    d = conductor_components(x24(nodes=1))
    assert [c.genus for c in d] == [2]
    d = conductor_components(x_35_index2())
    assert sum(c.pinched for c in d) == 2


def test_elementary_tile_rejects_unknown_type():
    with pytest.raises(ValueError):
        elementary_tile("Z")


def test_memoised_validation_survives_mutation_attempts():
    s = x13()
    r1 = validate(s)
    r1.violations.append("tampered")
    assert validate(s).violations == []
