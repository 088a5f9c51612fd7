"""Named constructions: string surfaces of glued planes, the doubled nodal
quartic, fake fake projective planes, the pinched index-two example, the
normal elliptic-contraction examples and the p_g-extremal log pairs.

Tile conventions
----------------
The four-line tile is P^2 with lines L1..L4 blown up in the six pairwise
intersection points.  Node ``"ij"`` is L_i meets L_j; its exceptional curve
is ``Eij``.  Every line lists its slots by the other line, in increasing
order, so L1 has slots ``("12", "13", "14")`` and L2 has
``("12", "23", "24")``.  An elementary tile glues L3 to L4 by one of the six
bijections of their slots (L3: ``13, 23, 34`` to L4: ``14, 24, 34``):

====  ==========  =====================================================
name  L3 -> L4    exceptional curves after gluing
====  ==========  =====================================================
D     (0, 1, 2)   E34 closes up; E13-E14 and E23-E24 turn back
C     (1, 0, 2)   E34 closes up; E13-E24 and E23-E14 cross over
A     (1, 2, 0)   E14-E34-E23 and E13-E24 cross over
B     (2, 1, 0)   E13-E34-E14 and E23-E24 turn back
A'    (2, 0, 1)   A with L3 and L4 renamed
B'    (0, 2, 1)   B with L1 and L2 renamed
====  ==========  =====================================================

A string of k tiles glues L2 of tile i to L1 of tile i+1 (cyclically) by a
slot permutation ``perm[i] = slot of L1 matched with slot i of L2``.
"""

from __future__ import annotations

import functools
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from stablegeo.complex import (
    BoundaryComponent,
    GluedSurface,
    GluePair,
    GluingMap,
    NodeRecord,
    SelfGlue,
    Tile,
    exceptional_cycles,
)
from stablegeo.errors import PreconditionError, RangeError, StructuralError
from stablegeo.invariants import InvariantReport, finish_report
from stablegeo.lattice import (
    SurfaceLattice,
    adjunction_genus,
    blow_up,
    elliptic_product,
    h0,
    hirzebruch,
    intersect,
    projective_plane,
)

log = logging.getLogger(__name__)

PERMS3: tuple[tuple[int, int, int], ...] = tuple(itertools.permutations(range(3)))
IDENTITY = (0, 1, 2)

TILE_SIGMAS: dict[str, tuple[int, int, int]] = {
    "D": (0, 1, 2),
    "C": (1, 0, 2),
    "A": (1, 2, 0),
    "B": (2, 1, 0),
    "A'": (2, 0, 1),
    "B'": (0, 2, 1),
}
SIGMA_NAMES = {v: k for k, v in TILE_SIGMAS.items()}
ELEMENTARY_TYPES = ("A", "B", "C", "D")

LINE_SLOTS = {
    "L1": ("12", "13", "14"),
    "L2": ("12", "23", "24"),
    "L3": ("13", "23", "34"),
    "L4": ("14", "24", "34"),
}
NODE_IDS = ("12", "13", "14", "23", "24", "34")


def four_line_tile(
    tile_id: str, blown_up: bool = True, slot_order: dict[str, Sequence[str]] | None = None
) -> Tile:
    """P^2 with four general lines, optionally blown up in the six nodes."""
    if slot_order is None:
        return _standard_four_line_tile(tile_id, blown_up)
    return _four_line_tile(tile_id, blown_up, slot_order)


@functools.lru_cache(maxsize=256)
def _standard_four_line_tile(tile_id: str, blown_up: bool) -> Tile:
    # tiles are immutable, so one instance per id can be shared between surfaces
    return _four_line_tile(tile_id, blown_up, None)


def _four_line_tile(tile_id, blown_up, slot_order) -> Tile:
    slot_order = {**LINE_SLOTS, **(slot_order or {})}
    if blown_up:
        lat = blow_up(projective_plane(), 6, [f"E{n}" for n in NODE_IDS])
    else:
        lat = projective_plane()
    boundary = []
    for name, slots in slot_order.items():
        coeffs = {"H": 1}
        if blown_up:
            for n in slots:
                coeffs[f"E{n}"] = -1
        boundary.append(BoundaryComponent(name, lat.divisor(coeffs), 0, tuple(slots)))
    nodes = []
    for n in NODE_IDS:
        li, lj = f"L{n[0]}", f"L{n[1]}"
        nodes.append(
            NodeRecord(n, ((li, slot_order[li].index(n)), (lj, slot_order[lj].index(n))), blown_up)
        )
    return Tile(tile_id, lat, tuple(boundary), tuple(nodes))


@dataclass(frozen=True)
class ElementaryTile:
    """A blown-up four-line tile with L3 already glued to L4; L1 and L2 stay open."""

    type: str
    tile: Tile
    inner: GluePair


def elementary_tile(t: str, tile_id: str = "T0") -> ElementaryTile:
    try:
        sigma = TILE_SIGMAS[t]
    except KeyError:
        raise StructuralError(f"unknown tile type {t!r}; expected one of {sorted(TILE_SIGMAS)}") from None
    tile = four_line_tile(tile_id)
    return ElementaryTile(t, tile, GluePair(f"{tile_id}.L3", f"{tile_id}.L4", sigma))


def _check_perm(p: Sequence[int], what: str) -> tuple[int, ...]:
    p = tuple(int(x) for x in p)
    if sorted(p) != [0, 1, 2]:
        raise StructuralError(f"{what} {list(p)} is not a permutation of three slots")
    return p


def string_surface(
    types: Sequence[str],
    junction_perms: Sequence[Sequence[int]],
    closing_perm: Sequence[int],
    label: str | None = None,
) -> GluedSurface:
    """Glue elementary tiles in a circle: L2 of tile i to L1 of tile i+1."""
    k = len(types)
    if k < 1:
        raise StructuralError("a string needs at least one tile")
    if len(junction_perms) != k - 1:
        raise StructuralError(f"{k} tiles need {k - 1} junction permutations, got {len(junction_perms)}")
    perms = [_check_perm(p, "junction") for p in junction_perms] + [_check_perm(closing_perm, "closing")]
    tiles, pairs = [], []
    for i, t in enumerate(types):
        et = elementary_tile(t, f"T{i}")
        tiles.append(et.tile)
        pairs.append(et.inner)
    for i, p in enumerate(perms):
        pairs.append(GluePair(f"T{i}.L2", f"T{(i + 1) % k}.L1", p))
    word = "".join(t if len(t) == 1 else f"({t})" for t in types)
    meta = {
        "kind": "string",
        "types": list(types),
        "junctions": [list(p) for p in perms[:-1]],
        "closing": list(perms[-1]),
    }
    return GluedSurface(tuple(tiles), GluingMap(tuple(pairs)), label or f"string[{word}]", meta)


def closed_cycle_count(s: GluedSurface) -> int:
    return sum(1 for c in exceptional_cycles(s) if c.closed)


def find_string_gluing(types: Sequence[str], cycles: int) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Lexicographically smallest (junctions..., closing) giving ``cycles`` closed exceptional cycles.

    Permutations are ordered as in :data:`PERMS3` (identity first); the
    closing permutation varies fastest.
    """
    k = len(types)
    for combo in itertools.product(range(len(PERMS3)), repeat=k):
        perms = [PERMS3[i] for i in combo]
        s = string_surface(types, perms[:-1], perms[-1])
        if closed_cycle_count(s) == cycles:
            return tuple(perms[:-1]), perms[-1]
    raise StructuralError(f"no circle gluing of {''.join(types)} has {cycles} exceptional cycles")


def _recipe(k: int, l: int) -> tuple[str, list[str]]:
    if (k, l) == (1, 3):
        return "x13", ["C"]
    if l == 1 - k:
        return "one-cycle", ["A"] * k
    if l <= 1:
        return "A-then-B", ["A"] * (1 - l) + ["B"] * (k + l - 1)
    return "D-then-B", ["D"] * (l - 1) + ["B"] * (k - l + 1)


def x_kl(k: int, l: int) -> GluedSurface:
    """A Gorenstein stable surface with K^2 = k and chi(O) = l glued from k planes.

    Admissible for k >= 1 with 1-k <= l <= k+1, and the two extra cases
    (1, 3) and (2, 4).
    """
    if (k, l) == (2, 4):
        return x24()
    if k < 1 or not (1 - k <= l <= k + 1 or (k, l) == (1, 3)):
        raise RangeError(
            f"X_{{k,l}} is constructed for k >= 1 and 1-k <= l <= k+1 (or (k,l) in {{(1,3),(2,4)}}); "
            f"got k={k}, l={l}, need {1 - k} <= l <= {k + 1}"
        )
    recipe, types = _recipe(k, l)
    junctions, closing = find_string_gluing(types, k + l)
    s = string_surface(types, junctions, closing, label=f"X_{{{k},{l}}}")
    s.metadata.update({"recipe": recipe, "k": k, "l": l})
    return s


def x13() -> GluedSurface:
    return x_kl(1, 3)


def p2_curve_tile(tile_id: str, degree: int, nodes: int = 0, blown_up: bool = False) -> Tile:
    """P^2 with one irreducible nodal curve of the given degree as its boundary."""
    pa = (degree - 1) * (degree - 2) // 2
    if degree < 1 or not 0 <= nodes <= pa:
        raise RangeError(f"an irreducible plane curve of degree {degree} has at most {pa} nodes, got {nodes}")
    lat = projective_plane()
    if blown_up and nodes:
        lat = blow_up(lat, nodes, [f"En{i + 1}" for i in range(nodes)])
    coeffs = {"H": degree}
    slots, recs = [], []
    for i in range(nodes):
        nid = f"n{i + 1}"
        slots += [f"{nid}a", f"{nid}b"]
        recs.append(NodeRecord(nid, (("C", 2 * i), ("C", 2 * i + 1)), blown_up))
        if blown_up:
            coeffs[f"E{nid}"] = -2
    comp = BoundaryComponent("C", lat.divisor(coeffs), pa - nodes, tuple(slots))
    return Tile(tile_id, lat, (comp,), tuple(recs))


def x24(nodes: int = 3, blown_up: bool = False) -> GluedSurface:
    """Two copies of (P^2, nodal quartic) with the quartics exchanged, nodes matched to nodes."""
    if not 0 <= nodes <= 3:
        raise RangeError(f"an irreducible plane quartic has at most 3 nodes, got {nodes}")
    tiles = tuple(p2_curve_tile(tid, 4, nodes, blown_up) for tid in ("P", "Q"))
    glue = GluingMap((GluePair("P.C", "Q.C", tuple(range(2 * nodes))),))
    return GluedSurface(tiles, glue, "X_{2,4}", {"kind": "x24", "nodes": nodes})


# Order of marked points on the four lines of the plane, following the
# labelling 1..6 of the six nodes used in the gluing tables below.
_FF_POINTS = {"1": "14", "2": "13", "3": "12", "4": "24", "5": "23", "6": "34"}
_FF_LINES = {"L1": "123", "L2": "345", "L3": "256", "L4": "164"}


def grid_tile(tile_id: str, h: int = 4, v: int = 3) -> Tile:
    """P^1 x P^1 with h horizontal (class C0) and v vertical (class F) lines, not blown up."""
    lat = hirzebruch(0)
    boundary = [
        BoundaryComponent(f"H{i}", lat.divisor(C0=1), 0, tuple(f"V{j}" for j in range(1, v + 1)))
        for i in range(1, h + 1)
    ] + [
        BoundaryComponent(f"V{j}", lat.divisor(F=1), 0, tuple(f"H{i}" for i in range(1, h + 1)))
        for j in range(1, v + 1)
    ]
    nodes = [
        NodeRecord(f"h{i}v{j}", ((f"H{i}", j - 1), (f"V{j}", i - 1)))
        for i in range(1, h + 1)
        for j in range(1, v + 1)
    ]
    return Tile(tile_id, lat, tuple(boundary), tuple(nodes))


def fake_fake_plane(cross_ratio: Fraction | int | str = Fraction(-1)) -> GluedSurface:
    """Three tiles (two grids in P^1 x P^1, one four-line plane) with K^2 = 9, chi = 1.

    The cross ratio of the four horizontal lines is carried as an inert
    annotation; none of the invariants depend on it.
    """
    cr = Fraction(cross_ratio)
    if cr in (0, 1):
        raise PreconditionError(f"cross ratio {cr} is degenerate (must avoid 0 and 1)")
    alpha, beta = grid_tile("alpha"), grid_tile("beta")
    order = {name: tuple(_FF_POINTS[p] for p in pts) for name, pts in _FF_LINES.items()}
    gamma = four_line_tile("gamma", blown_up=False, slot_order=order)
    pairs = [GluePair(f"alpha.V{j}", f"beta.V{j}", (0, 1, 2, 3)) for j in (1, 2, 3)]
    pairs += [GluePair(f"alpha.H{i}", f"beta.H{i}", IDENTITY) for i in (1, 2)]
    pairs += [
        GluePair("alpha.H3", "gamma.L1", IDENTITY),
        GluePair("beta.H3", "gamma.L2", IDENTITY),
        GluePair("alpha.H4", "gamma.L3", IDENTITY),
        GluePair("beta.H4", "gamma.L4", IDENTITY),
    ]
    return GluedSurface(
        (alpha, beta, gamma),
        GluingMap(tuple(pairs)),
        "fake fake plane",
        {"kind": "fakefake", "cross_ratio": str(cr)},
    )


def x_35_index2() -> GluedSurface:
    """Three D tiles in a row; the two end lines are folded onto themselves.

    Each fold fixes the slot on E12 (a pinch point) and swaps the other two.
    """
    tiles, pairs = [], []
    for i in range(3):
        et = elementary_tile("D", f"T{i}")
        tiles.append(et.tile)
        pairs.append(et.inner)
    pairs += [GluePair("T0.L2", "T1.L1", IDENTITY), GluePair("T1.L2", "T2.L1", IDENTITY)]
    folds = (SelfGlue("T0.L1", (0, 2, 1)), SelfGlue("T2.L2", (0, 2, 1)))
    return GluedSurface(tuple(tiles), GluingMap(tuple(pairs), folds), "X_{3,5}", {"kind": "x35"})


def normal_example(k: int, l: int) -> InvariantReport:
    """Contract k + l elliptic curves on C x C' blown up in k*l points.

    The contracted curves are the strict transforms of k horizontal and l
    vertical fibres; each gives an elliptic singularity adding one to chi.
    """
    if k < 1 or l < 1:
        raise PreconditionError(f"need k, l >= 1, got k={k}, l={l}")
    labels = [f"E{i},{j}" for i in range(1, k + 1) for j in range(1, l + 1)]
    lat = blow_up(elliptic_product(), k * l, labels)
    c, cp = lat.basis_class("C"), lat.basis_class("C'")
    sum_e = lat.divisor({lab: 1 for lab in labels})
    kx = k * c + l * cp - sum_e
    row_i = c - lat.divisor({f"E1,{j}": 1 for j in range(1, l + 1)})
    col_j = cp - lat.divisor({f"E{i},1": 1 for i in range(1, k + 1)})

    tests = {
        "exceptional E_ij": intersect(lat, kx, lat.basis_class(labels[0])),
        "general fibre C x pt": intersect(lat, kx, c),
        "general fibre pt x C'": intersect(lat, kx, cp),
        "diagonal-type class C + C'": intersect(lat, kx, c + cp),
    }
    contracted = {
        "strict transform of C_i": intersect(lat, kx, row_i),
        "strict transform of C'_j": intersect(lat, kx, col_j),
    }
    r = InvariantReport(
        label=f"normal X_{{{k},{l}}}",
        k_squared=intersect(lat, kx, kx),
        chi=lat.chi_structure + k + l,
        index=1,
        chi_normalization=lat.chi_structure,
    )
    r.extras = {
        "lattice": lat.name,
        "contracted_curves": k + l,
        "contracted_self_intersections": [intersect(lat, row_i, row_i), intersect(lat, col_j, col_j)],
        "contracted_genus": adjunction_genus(lat, row_i),
        "K_dot_test_curves": tests,
        "K_dot_contracted": contracted,
        "positive_on_test_curves": all(v > 0 for v in tests.values())
        and all(v == 0 for v in contracted.values()),
    }
    return finish_report(r)


@dataclass(frozen=True)
class ExtremalRow:
    family: str
    e: int | None
    k: int | None
    surface: str
    boundary: str
    adjoint: str
    self_intersection: int
    pg: int

    @property
    def ok(self) -> bool:
        return self.pg == self.self_intersection + 2


def _extremal_row(family: str, lat: SurfaceLattice, boundary, e=None, k=None) -> ExtremalRow:
    adj = lat.canonical + boundary
    return ExtremalRow(
        family, e, k, lat.name, lat.describe(boundary), lat.describe(adj),
        intersect(lat, adj, adj), h0(lat, adj),
    )


def verify_extremal_pairs(e_max: int, k_max: int) -> list[ExtremalRow]:
    """p_g = h0(K + boundary) against (K + boundary)^2 + 2 for the four extremal families."""
    if e_max < 1 or k_max < 1:
        raise PreconditionError("e_max and k_max must be at least 1")
    p2 = projective_plane()
    rows = [
        _extremal_row("i: P2, nodal quartic", p2, p2.divisor(H=4)),
        _extremal_row("ii: P2, nodal quintic", p2, p2.divisor(H=5)),
    ]
    for e in range(0, e_max + 1):
        fe = hirzebruch(e)
        for k in range(1, k_max + 1):
            rows.append(_extremal_row("iii: F_e, 3C0+(2e+k+2)F", fe, fe.divisor(C0=3, F=2 * e + k + 2), e, k))
    for e in range(1, e_max + 1):
        fe = hirzebruch(e)
        rows.append(_extremal_row("iv: F_e, 3C0+(2e+2)F", fe, fe.divisor(C0=3, F=2 * e + 2), e))
    return rows


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    parameters: tuple[str, ...]
    builder: Callable[..., Any]
    expected: dict[str, int] = field(default_factory=dict)
    description: str = ""


CATALOG: dict[str, CatalogEntry] = {
    e.name: e
    for e in (
        CatalogEntry("x_kl", ("k", "l"), x_kl, {}, "string of k glued planes with K^2 = k, chi = l"),
        CatalogEntry("x13", (), x13, {"k_squared": 1, "chi": 3}, "one type-C tile closed on itself"),
        CatalogEntry("x24", ("nodes",), x24, {"k_squared": 2, "chi": 4}, "doubled nodal quartic"),
        CatalogEntry("x35", (), x_35_index2, {"k_squared": 3, "chi": 5, "index": 2}, "pinched index-two string"),
        CatalogEntry("fakefake", ("cross_ratio",), fake_fake_plane, {"k_squared": 9, "chi": 1}, "fake fake projective plane"),
        CatalogEntry("normal", ("k", "l"), normal_example, {}, "normal surface with k+l elliptic singularities"),
        CatalogEntry("extremal", ("e_max", "k_max"), verify_extremal_pairs, {}, "p_g-extremal log pairs"),
    )
}
