"""Enumerate circle gluings of elementary tiles up to symmetry; build the geography map.

A string surface with k tiles is encoded as two k-tuples of indices into
:data:`~stablegeo.catalog.PERMS3`: the L3->L4 permutation of each tile and
the permutation gluing L2 of tile i to L1 of tile i+1 (the last entry
closes the circle).  Two encodings are identified if they differ by

* a rotation of the circle,
* reversing the circle (renames L1 and L2 in every tile),
* renaming L3 and L4 inside any single tile.

The canonical key is the lexicographically smallest encoding in the orbit.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from stablegeo.catalog import ELEMENTARY_TYPES, PERMS3, SIGMA_NAMES, TILE_SIGMAS, string_surface, x24
from stablegeo.complex import GluedSurface
from stablegeo.errors import PreconditionError, UnsupportedError
from stablegeo.invariants import compute_report

log = logging.getLogger(__name__)

Encoding = tuple[tuple[int, ...], tuple[int, ...]]

_IDX = {p: i for i, p in enumerate(PERMS3)}


def _compose(p, q):
    """p after q"""
    return tuple(p[q[i]] for i in range(3))


def _inverse(p):
    out = [0, 0, 0]
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


_S34 = (0, 2, 1)
_S12 = (1, 0, 2)
_INV = tuple(_IDX[_inverse(p)] for p in PERMS3)
_LEFT = tuple(_IDX[_compose(_S34, p)] for p in PERMS3)
_RIGHT = tuple(_IDX[_compose(p, _S34)] for p in PERMS3)
_CONJ12 = tuple(_IDX[_compose(_S12, _compose(p, _S12))] for p in PERMS3)
_TYPE_INDEX = {name: _IDX[sig] for name, sig in TILE_SIGMAS.items()}


def _swap_tiles(sig: tuple[int, ...], per: tuple[int, ...], mask: int) -> Encoding:
    k = len(sig)
    sig2 = list(sig)
    per2 = list(per)
    for i in range(k):
        if mask >> i & 1:
            sig2[i] = _INV[sig2[i]]
            per2[(i - 1) % k] = _LEFT[per2[(i - 1) % k]]
            per2[i] = _RIGHT[per2[i]]
    return tuple(sig2), tuple(per2)


def _dihedral(sig: tuple[int, ...], per: tuple[int, ...]) -> Iterator[Encoding]:
    k = len(sig)
    rsig = tuple(_CONJ12[sig[k - 1 - j]] for j in range(k))
    rper = tuple(_INV[per[(k - 2 - j) % k]] for j in range(k))
    for a, b in ((sig, per), (rsig, rper)):
        for r in range(k):
            yield a[r:] + a[:r], b[r:] + b[:r]


def orbit(enc: Encoding) -> set[Encoding]:
    sig, per = enc
    out = set()
    for a, b in _dihedral(sig, per):
        for mask in range(1 << len(sig)):
            out.add(_swap_tiles(a, b, mask))
    return out


def _interleave(enc: Encoding) -> tuple[int, ...]:
    return tuple(x for pair in zip(*enc) for x in pair)


def canonical_encoding(enc: Encoding) -> Encoding:
    return min(orbit(enc), key=_interleave)


def format_key(enc: Encoding) -> str:
    sig, per = enc
    return "-".join(
        SIGMA_NAMES[PERMS3[s]] + "".join(map(str, PERMS3[p])) for s, p in zip(sig, per)
    )


def encode(s: GluedSurface) -> Encoding:
    """Read the string structure back off a glued surface built by :func:`string_surface`."""
    k = len(s.tiles)
    if k == 0:
        raise UnsupportedError("empty surface")
    if s.gluing.self_pairs:
        raise UnsupportedError("canonical forms are only defined for circle strings (no self-gluings)")
    ids = [t.id for t in s.tiles]
    pos = {tid: i for i, tid in enumerate(ids)}
    inner: dict[int, int] = {}
    links: dict[int, tuple[int, int]] = {}
    for p in s.gluing.pairs:
        ta, ca = p.a.split(".", 1)
        tb, cb = p.b.split(".", 1)
        if ta == tb and {ca, cb} == {"L3", "L4"}:
            perm = p.perm if ca == "L3" else _inverse(p.perm)
            inner[pos[ta]] = _IDX[tuple(perm)]
        elif ca == "L2" and cb == "L1":
            links[pos[ta]] = (pos[tb], _IDX[tuple(p.perm)])
        elif ca == "L1" and cb == "L2":
            links[pos[tb]] = (pos[ta], _IDX[_inverse(p.perm)])
        else:
            raise UnsupportedError(f"gluing {p.a}<->{p.b} is not part of a circle string")
    if len(inner) != k or len(links) != k:
        raise UnsupportedError("surface is not a circle of elementary tiles")
    for t in s.tiles:
        if {c.id for c in t.boundary} != {"L1", "L2", "L3", "L4"} or not t.blown_up:
            raise UnsupportedError(f"tile {t.id} is not a blown-up four-line tile")
    order = [0]
    while len(order) < k:
        nxt = links[order[-1]][0]
        if nxt in order:
            raise UnsupportedError("tiles do not form a single circle")
        order.append(nxt)
    if links[order[-1]][0] != 0:
        raise UnsupportedError("tiles do not form a single circle")
    return tuple(inner[i] for i in order), tuple(links[i][1] for i in order)


def canonical_form(s: GluedSurface) -> str:
    return format_key(canonical_encoding(encode(s)))


def surface_from_encoding(enc: Encoding, label: str | None = None) -> GluedSurface:
    sig, per = enc
    types = [SIGMA_NAMES[PERMS3[x]] for x in sig]
    perms = [PERMS3[x] for x in per]
    s = string_surface(types, perms[:-1], perms[-1], label=label)
    s.metadata["key"] = format_key(canonical_encoding(enc))
    return s


@dataclass
class Enumeration:
    """Iterable over canonical string gluings with k tiles.

    ``budget`` caps the number of raw candidates examined; when it runs out
    iteration stops and ``truncated`` is set.
    """

    k: int
    budget: int | None = None
    truncated: bool = False
    raw_examined: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise PreconditionError("k must be at least 1")

    def words(self) -> Iterator[tuple[str, ...]]:
        return itertools.product(ELEMENTARY_TYPES, repeat=self.k)

    def encodings(self) -> Iterator[tuple[Encoding, Encoding]]:
        """Yield (first raw representative, canonical encoding) once per orbit."""
        seen: set[Encoding] = set()
        self.truncated = False
        self.raw_examined = 0
        for word in self.words():
            sig = tuple(_TYPE_INDEX[t] for t in word)
            for per in itertools.product(range(len(PERMS3)), repeat=self.k):
                if self.budget is not None and self.raw_examined >= self.budget:
                    self.truncated = True
                    log.warning("enumeration for k=%d truncated after %d candidates", self.k, self.budget)
                    return
                self.raw_examined += 1
                enc = (sig, per)
                if enc in seen:
                    continue
                orb = orbit(enc)
                seen |= orb
                yield enc, min(orb, key=_interleave)

    def __iter__(self) -> Iterator[GluedSurface]:
        for enc, canon in self.encodings():
            s = surface_from_encoding(enc, label=f"string {format_key(canon)}")
            s.metadata["key"] = format_key(canon)
            yield s


def enumerate_string_gluings(k: int, budget: int | None = None) -> Enumeration:
    return Enumeration(k, budget)


@dataclass
class GeographyPoint:
    chi: int
    k_squared: int
    witness: str
    count: int = 1


@dataclass(frozen=True)
class RegionLine:
    """The line chi = slope * K^2 + offset."""

    name: str
    slope: int
    offset: int
    realized: bool

    def chi_at(self, k2: int) -> int:
        return self.slope * k2 + self.offset


REGION_LINES = (
    RegionLine("P2 = 0: chi = -K^2", -1, 0, False),
    RegionLine("stable log Noether: chi = K^2 + 2", 1, 2, True),
)


@dataclass(frozen=True)
class Evaluation:
    key: str
    k: int
    k_squared: int
    chi: int
    chi_semiresolution: int
    chi_pushout: int
    cycles: int
    census: tuple[tuple[int, int], ...]


def evaluate(enc: Encoding) -> Evaluation:
    s = surface_from_encoding(enc)
    r = compute_report(s)
    return Evaluation(
        s.metadata["key"], len(enc[0]), r.k_squared, r.chi, r.chi_semiresolution, r.chi_pushout,
        len(r.cusps), tuple(r.census().items()),
    )


def evaluate_all(encodings: Iterable[Encoding], workers: int | None = 1, chunksize: int = 64) -> list[Evaluation]:
    """Evaluate in input order; with ``workers > 1`` the work is spread over processes."""
    encodings = list(encodings)
    if not workers or workers <= 1 or len(encodings) < 2 * chunksize:
        return [evaluate(e) for e in encodings]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, encodings, chunksize=chunksize))


@dataclass
class GeographyMap:
    points: list[GeographyPoint]
    lines: tuple[RegionLine, ...] = REGION_LINES
    k_max: int = 0
    evaluations: list[Evaluation] = field(default_factory=list)
    specials: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def pairs(self) -> set[tuple[int, int]]:
        return {(p.chi, p.k_squared) for p in self.points}


SPECIALS = {"x24": x24}


def geography_map(k_max: int, workers: int | None = 1, include_specials: bool = True) -> GeographyMap:
    """All (chi, K^2) realized by circle strings with at most k_max tiles, plus the special constructions."""
    if k_max < 1:
        raise PreconditionError("k_max must be at least 1")
    evaluations: list[Evaluation] = []
    for k in range(1, k_max + 1):
        canon = [c for _, c in Enumeration(k).encodings()]
        log.info("k=%d: %d canonical classes", k, len(canon))
        evaluations.extend(evaluate_all(canon, workers))

    points: dict[tuple[int, int], GeographyPoint] = {}
    for ev in evaluations:
        key = (ev.chi, ev.k_squared)
        if key in points:
            points[key].count += 1
        else:
            points[key] = GeographyPoint(ev.chi, ev.k_squared, ev.key)

    specials = []
    if include_specials:
        for name, builder in SPECIALS.items():
            r = compute_report(builder())
            if r.k_squared > k_max:
                continue
            specials.append(name)
            key = (r.chi, r.k_squared)
            if key in points:
                points[key].count += 1
            else:
                points[key] = GeographyPoint(r.chi, r.k_squared, name)

    notes = []
    for k in range(1, k_max + 1):
        realized = {ev.chi for ev in evaluations if ev.k_squared == k}
        expected = set(range(1 - k, k + 2))
        if realized != expected:
            extra = sorted(realized - expected)
            missing = sorted(expected - realized)
            notes.append(f"K^2={k}: strings realize chi {sorted(realized)}; outside [1-k,k+1]: {extra}; missing: {missing}")

    ordered = sorted(points.values(), key=lambda p: (p.k_squared, p.chi))
    return GeographyMap(ordered, REGION_LINES, k_max, evaluations, specials, notes)
