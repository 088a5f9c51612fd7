"""Tiles, gluing involutions and the quotient structures they induce.

A stable surface is encoded by its normalisation (a list of tiles, each a
smooth surface with a nodal boundary curve), and an involution on the
normalised boundary.  The involution is given combinatorially: which
boundary components are exchanged and how their marked points (the
preimages of boundary nodes) are matched.

Slot references are ``(component_key, slot_index)`` pairs where the
component key is ``"<tile id>.<component id>"``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, TypeVar

import networkx as nx

from stablegeo.errors import PreconditionError, UnsupportedError
from stablegeo.lattice import DivisorClass, SurfaceLattice, intersect

SlotRef = tuple[str, int]
T = TypeVar("T")

_MEMO_LOCK = threading.Lock()


def _memo(obj: Any, name: str, compute: Callable[[], T]) -> T:
    """Cache a derived value on an immutable object."""
    slot = "_memo_" + name
    try:
        return obj.__dict__[slot]
    except KeyError:
        pass
    value = compute()
    with _MEMO_LOCK:
        return obj.__dict__.setdefault(slot, value)


@dataclass(frozen=True)
class BoundaryComponent:
    """A component of the boundary curve, seen on its normalisation.

    ``slots`` lists the marked points in a fixed order; ``free`` holds the
    indices of slots that are not branches of a node.
    """

    id: str
    cls: DivisorClass
    genus: int
    slots: tuple[str, ...]
    free: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        object.__setattr__(self, "free", frozenset(self.free))


@dataclass(frozen=True)
class NodeRecord:
    id: str
    branches: tuple[tuple[str, int], tuple[str, int]]
    blown_up: bool = False

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple((str(c), int(i)) for c, i in self.branches))


@dataclass(frozen=True)
class Tile:
    id: str
    lattice: SurfaceLattice
    boundary: tuple[BoundaryComponent, ...]
    nodes: tuple[NodeRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(self.boundary))
        object.__setattr__(self, "nodes", tuple(self.nodes))

    @property
    def blown_up(self) -> bool:
        return bool(self.nodes) and all(n.blown_up for n in self.nodes)

    def component(self, cid: str) -> BoundaryComponent:
        for comp in self.boundary:
            if comp.id == cid:
                return comp
        raise KeyError(f"{self.id}.{cid}")

    def exceptional_label(self, node: NodeRecord) -> str:
        return f"E{node.id}"

    def log_canonical_class(self) -> DivisorClass:
        """K + boundary, pulled back to this model.

        On a blown-up tile the boundary classes are strict transforms, so each
        exceptional curve is added back once to recover the pull-back.
        """
        total = self.lattice.canonical
        for comp in self.boundary:
            total = total + comp.cls
        for node in self.nodes:
            if node.blown_up:
                total = total + self.lattice.basis_class(self.exceptional_label(node))
        return total


@dataclass(frozen=True)
class GluePair:
    """Exchange of two components; ``perm[i]`` is the slot of ``b`` matched with slot ``i`` of ``a``."""

    a: str
    b: str
    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(int(x) for x in self.perm))


@dataclass(frozen=True)
class SelfGlue:
    """A component mapped to itself by an involution of its slots; fixed slots are pinch points."""

    comp: str
    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(int(x) for x in self.perm))

    @property
    def pinch_slots(self) -> tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.perm) if i == j)


@dataclass(frozen=True)
class GluingMap:
    pairs: tuple[GluePair, ...] = ()
    self_pairs: tuple[SelfGlue, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        object.__setattr__(self, "self_pairs", tuple(self.self_pairs))


@dataclass(frozen=True)
class GluedSurface:
    tiles: tuple[Tile, ...]
    gluing: GluingMap
    label: str = ""
    metadata: dict[str, Any] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(self.tiles))

    def components(self) -> dict[str, tuple[Tile, BoundaryComponent]]:
        return {f"{t.id}.{c.id}": (t, c) for t in self.tiles for c in t.boundary}

    def node_edges(self) -> Iterator[tuple[str, SlotRef, SlotRef, Tile, NodeRecord]]:
        for t in self.tiles:
            for n in t.nodes:
                (c0, i0), (c1, i1) = n.branches
                yield f"{t.id}.{n.id}", (f"{t.id}.{c0}", i0), (f"{t.id}.{c1}", i1), t, n

    def sigma(self) -> dict[SlotRef, SlotRef]:
        """The slot involution; pinch slots map to themselves."""
        sig: dict[SlotRef, SlotRef] = {}
        for p in self.gluing.pairs:
            for i, j in enumerate(p.perm):
                sig[(p.a, i)] = (p.b, j)
                sig[(p.b, j)] = (p.a, i)
        for sp in self.gluing.self_pairs:
            for i, j in enumerate(sp.perm):
                sig[(sp.comp, i)] = (sp.comp, j)
        return sig

    @property
    def all_blown_up(self) -> bool:
        return all(t.blown_up for t in self.tiles)

    @property
    def node_count(self) -> int:
        return sum(len(t.nodes) for t in self.tiles)


@dataclass
class ValidationReport:
    valid: bool
    violations: list[str]
    index: int

    @property
    def gorenstein(self) -> bool:
        return self.index == 1


def _is_permutation(perm: tuple[int, ...], n: int) -> bool:
    return len(perm) == n and sorted(perm) == list(range(n))


def validate(s: GluedSurface) -> ValidationReport:
    """Check the structural requirements on tiles and gluing; never raises."""
    report = _memo(s, "validation", lambda: _validate(s))
    return ValidationReport(report.valid, list(report.violations), report.index)


def _validate(s: GluedSurface) -> ValidationReport:
    problems: list[str] = []
    seen_tiles: set[str] = set()
    comps: dict[str, BoundaryComponent] = {}

    for t in s.tiles:
        if t.id in seen_tiles:
            problems.append(f"duplicate tile id {t.id!r}")
        seen_tiles.add(t.id)
        local: dict[str, BoundaryComponent] = {}
        for c in t.boundary:
            if c.id in local:
                problems.append(f"duplicate component {t.id}.{c.id}")
            local[c.id] = c
            comps[f"{t.id}.{c.id}"] = c
            if c.genus < 0:
                problems.append(f"{t.id}.{c.id}: negative genus")
            if len(c.cls) != t.lattice.rank:
                problems.append(f"{t.id}.{c.id}: class rank does not match lattice {t.lattice.name}")
            if any(i < 0 or i >= len(c.slots) for i in c.free):
                problems.append(f"{t.id}.{c.id}: free slot index out of range")

        covered: dict[SlotRef, str] = {}
        node_ids: set[str] = set()
        for n in t.nodes:
            if n.id in node_ids:
                problems.append(f"duplicate node {t.id}.{n.id}")
            node_ids.add(n.id)
            if n.branches[0] == n.branches[1]:
                problems.append(f"node {t.id}.{n.id}: both branches are the same slot")
            for cid, i in n.branches:
                comp = local.get(cid)
                if comp is None:
                    problems.append(f"node {t.id}.{n.id}: unknown component {cid!r}")
                    continue
                if not 0 <= i < len(comp.slots):
                    problems.append(f"node {t.id}.{n.id}: slot {i} out of range on {cid}")
                    continue
                if i in comp.free:
                    problems.append(f"node {t.id}.{n.id}: slot {cid}[{i}] is marked free")
                if (cid, i) in covered:
                    problems.append(f"slot {t.id}.{cid}[{i}] is a branch of two nodes")
                covered[(cid, i)] = n.id
        for c in t.boundary:
            for i in range(len(c.slots)):
                if (c.id, i) not in covered and i not in c.free:
                    problems.append(f"slot {t.id}.{c.id}[{i}] is neither a node branch nor free")

        flags = {n.blown_up for n in t.nodes}
        if len(flags) > 1:
            problems.append(f"tile {t.id}: blown_up is not uniform across nodes")
        elif flags == {True}:
            problems.extend(_memo(t, "strict", lambda: _check_strict_transforms(t)))

    used: dict[str, int] = {}
    for p in s.gluing.pairs:
        for key in (p.a, p.b):
            used[key] = used.get(key, 0) + 1
        ca, cb = comps.get(p.a), comps.get(p.b)
        if ca is None or cb is None:
            missing = p.a if ca is None else p.b
            problems.append(f"gluing references unknown component {missing!r}")
            continue
        if p.a == p.b:
            problems.append(f"pair {p.a}<->{p.b} glues a component to itself; use a self-gluing")
        if ca.genus != cb.genus:
            problems.append(f"pair {p.a}<->{p.b}: genera {ca.genus} != {cb.genus}")
        if len(ca.slots) != len(cb.slots):
            problems.append(f"pair {p.a}<->{p.b}: slot counts {len(ca.slots)} != {len(cb.slots)}")
        elif not _is_permutation(p.perm, len(ca.slots)):
            problems.append(f"pair {p.a}<->{p.b}: {list(p.perm)} is not a bijection of {len(ca.slots)} slots")
        elif any((i in ca.free) != (j in cb.free) for i, j in enumerate(p.perm)):
            problems.append(f"pair {p.a}<->{p.b}: free slots are not matched with free slots")
    for sp in s.gluing.self_pairs:
        used[sp.comp] = used.get(sp.comp, 0) + 1
        c = comps.get(sp.comp)
        if c is None:
            problems.append(f"self-gluing references unknown component {sp.comp!r}")
            continue
        if not _is_permutation(sp.perm, len(c.slots)):
            problems.append(f"self-gluing {sp.comp}: {list(sp.perm)} is not a bijection of {len(c.slots)} slots")
        elif any(sp.perm[sp.perm[i]] != i for i in range(len(sp.perm))):
            problems.append(f"self-gluing {sp.comp}: {list(sp.perm)} is not an involution")
    for key in comps:
        k = used.get(key, 0)
        if k == 0:
            problems.append(f"component {key} is not glued")
        elif k > 1:
            problems.append(f"component {key} appears in {k} gluing entries")

    index = 2 if any(sp.pinch_slots for sp in s.gluing.self_pairs) else 1
    return ValidationReport(not problems, problems, index)


def _check_strict_transforms(t: Tile) -> list[str]:
    problems = []
    lat = t.lattice
    for n in t.nodes:
        if not lat.has_class(t.exceptional_label(n)):
            problems.append(f"tile {t.id}: lattice has no exceptional class {t.exceptional_label(n)}")
    if problems:
        return problems
    for c in t.boundary:
        for n in t.nodes:
            e = lat.basis_class(t.exceptional_label(n))
            expected = sum(1 for cid, _ in n.branches if cid == c.id)
            got = intersect(lat, c.cls, e)
            if got != expected:
                problems.append(
                    f"{t.id}.{c.id}: meets {t.exceptional_label(n)} {got} times, expected {expected} "
                    "(class is not the strict transform)"
                )
    return problems


def require_valid(s: GluedSurface) -> ValidationReport:
    report = validate(s)
    if not report.valid:
        raise PreconditionError(f"surface {s.label!r} is not valid: " + "; ".join(report.violations))
    return report


@dataclass(frozen=True)
class PointClass:
    """An equivalence class of marked points, i.e. one point of the double curve."""

    members: tuple[SlotRef, ...]
    nodes: tuple[str, ...]
    branch_count: int

    @property
    def size(self) -> int:
        return len(self.members)


def marked_point_classes(s: GluedSurface) -> list[PointClass]:
    report = require_valid(s)
    if report.index != 1:
        raise UnsupportedError("marked point classes are only defined for index-1 gluings")
    sig = s.sigma()
    g = nx.Graph()
    node_of: dict[SlotRef, str] = {}
    for key, r0, r1, _t, _n in s.node_edges():
        g.add_edge(r0, r1)
        node_of[r0] = node_of[r1] = key
    for r, r2 in sig.items():
        g.add_edge(r, r2)
    classes = []
    for comp in nx.connected_components(g):
        members = tuple(sorted(comp))
        orbits = {frozenset((r, sig[r])) for r in members}
        nodes = tuple(sorted({node_of[r] for r in members if r in node_of}))
        classes.append(PointClass(members, nodes, len(orbits)))
    classes.sort(key=lambda pc: (pc.members[0]))
    return classes


@dataclass(frozen=True)
class ExceptionalComponent:
    """Connected chain of exceptional curves on the semi-resolution.

    ``curves`` are node keys in walk order.  A closed cycle contracts to a
    degenerate cusp; an open chain ends at pinch or free slots.
    """

    curves: tuple[str, ...]
    closed: bool
    ends: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.curves)


def exceptional_cycles(s: GluedSurface) -> list[ExceptionalComponent]:
    return list(_memo(s, "cycles", lambda: _exceptional_cycles(s)))


def _exceptional_cycles(s: GluedSurface) -> list[ExceptionalComponent]:
    require_valid(s)
    if not s.all_blown_up:
        raise UnsupportedError("exceptional cycles need every tile to carry blow-up data")
    sig = s.sigma()
    orbit = {r: min(r, r2) for r, r2 in sig.items()}
    g = nx.MultiGraph()
    g.add_nodes_from(set(orbit.values()))
    for key, r0, r1, _t, _n in s.node_edges():
        g.add_edge(orbit[r0], orbit[r1], key=key)

    def end_kind(v: SlotRef) -> str:
        return "pinch" if sig[v] == v else "free"

    result = []
    for comp in nx.connected_components(g):
        sub = g.subgraph(comp)
        if sub.number_of_edges() == 0:
            continue
        closed = all(d == 2 for _, d in sub.degree())
        if closed:
            curves = _walk_cycle(sub)
            result.append(ExceptionalComponent(curves, True))
        else:
            ends = sorted(v for v, d in sub.degree() if d == 1)
            curves = _walk_chain(sub, ends[0]) if ends else tuple(sorted(k for *_, k in sub.edges(keys=True)))
            result.append(ExceptionalComponent(curves, False, tuple(end_kind(v) for v in ends)))
    result.sort(key=lambda c: (not c.closed, c.length, c.curves))
    return result


def _walk_cycle(sub: nx.MultiGraph) -> tuple[str, ...]:
    edges = sorted(sub.edges(keys=True), key=lambda e: e[2])
    u, v, k = edges[0]
    order = [k]
    used = {k}
    cur = v
    while True:
        nxt = [(a, b, kk) for a, b, kk in sub.edges(cur, keys=True) if kk not in used]
        if not nxt:
            break
        _, b, kk = min(nxt, key=lambda e: e[2])
        order.append(kk)
        used.add(kk)
        cur = b
    return tuple(order)


def _walk_chain(sub: nx.MultiGraph, start: SlotRef) -> tuple[str, ...]:
    order: list[str] = []
    used: set[str] = set()
    cur = start
    while True:
        nxt = [(a, b, kk) for a, b, kk in sub.edges(cur, keys=True) if kk not in used]
        if not nxt:
            return tuple(order)
        _, b, kk = nxt[0]
        order.append(kk)
        used.add(kk)
        cur = b


@dataclass(frozen=True)
class DComponent:
    """A component of the double curve: an orbit of boundary components under the gluing."""

    members: tuple[str, ...]
    genus: int
    pinched: bool = False


def conductor_components(s: GluedSurface) -> list[DComponent]:
    require_valid(s)
    comps = s.components()
    out = [DComponent((p.a, p.b), comps[p.a][1].genus) for p in s.gluing.pairs]
    for sp in s.gluing.self_pairs:
        c = comps[sp.comp][1]
        if c.genus != 0:
            raise UnsupportedError(
                f"genus of the quotient of a genus-{c.genus} component by an involution is not determined"
            )
        out.append(DComponent((sp.comp,), 0, pinched=True))
    return out
