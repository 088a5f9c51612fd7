"""JSON surface documents and report serialisation.

A surface document is a JSON object::

    {
      "format_version": 1,
      "label": "X_{1,3}",
      "tiles": [
        {"id": "T0", "constructor": {"kind": "p2_4lines_blown"}},
        {"id": "Q", "constructor": {"kind": "p2_curve", "degree": 4, "nodes": 3}},
        {"id": "G", "constructor": {"kind": "custom"},
         "lattice": {"name": ..., "basis": [...], "gram": [[...]], "canonical": [...],
                     "chi_structure": 1},
         "boundary": [{"id": "L1", "cls": [...], "genus": 0, "slots": ["12", ...], "free": []}],
         "nodes": [{"id": "12", "branches": [["L1", 0], ["L2", 0]], "blown_up": true}]}
      ],
      "gluing": {
        "pairs": [{"a": "T0.L2", "b": "T0.L1", "perm": [0, 2, 1]}],
        "self_pairs": [{"comp": "T0.L1", "perm": [0, 2, 1]}]
      },
      "metadata": {}
    }

Constructor kinds are ``p2_4lines_blown``, ``p2_4lines``, ``p1xp1_grid``
(``h``, ``v``), ``p2_curve`` (``degree``, ``nodes``, optional ``blown_up``)
and ``custom``.  Permutations are 0-based: ``perm[i]`` is the slot of the
second component glued to slot ``i`` of the first.  :func:`dump_surface`
always writes the explicit ``custom`` form, so documents round-trip exactly.
"""

from __future__ import annotations

import json
from typing import Any

import jsonschema

from stablegeo.catalog import grid_tile, four_line_tile, p2_curve_tile
from stablegeo.complex import (
    BoundaryComponent,
    GluedSurface,
    GluePair,
    GluingMap,
    NodeRecord,
    SelfGlue,
    Tile,
)
from stablegeo.errors import RangeError, StableGeoError, StructuralError
from stablegeo.invariants import InvariantReport
from stablegeo.lattice import DivisorClass, SurfaceLattice

FORMAT_VERSION = 1

# a parsed surface document: the JSON object described in the module docstring
SurfaceDocument = dict[str, Any]


class DocumentError(StableGeoError):
    """A surface document could not be read; ``path`` names the offending field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


_INT_LIST = {"type": "array", "items": {"type": "integer"}}
_SLOT_REF = {"type": "array", "prefixItems": [{"type": "string"}, {"type": "integer", "minimum": 0}],
             "minItems": 2, "maxItems": 2}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["format_version", "tiles", "gluing"],
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "label": {"type": "string"},
        "metadata": {"type": "object"},
        "tiles": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "constructor"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "constructor": {
                        "type": "object",
                        "required": ["kind"],
                        "properties": {
                            "kind": {"enum": ["p2_4lines_blown", "p2_4lines", "p1xp1_grid", "p2_curve", "custom"]},
                            "h": {"type": "integer", "minimum": 1},
                            "v": {"type": "integer", "minimum": 1},
                            "degree": {"type": "integer", "minimum": 1},
                            "nodes": {"type": "integer", "minimum": 0},
                            "blown_up": {"type": "boolean"},
                        },
                    },
                    "lattice": {
                        "type": "object",
                        "required": ["name", "basis", "gram", "canonical", "chi_structure"],
                        "properties": {
                            "name": {"type": "string"},
                            "basis": {"type": "array", "items": {"type": "string"}},
                            "gram": {"type": "array", "items": _INT_LIST},
                            "canonical": _INT_LIST,
                            "chi_structure": {"type": "integer"},
                            "kind": {"type": "string"},
                            "e": {"type": ["integer", "null"]},
                            "blowups": {"type": "integer", "minimum": 0},
                        },
                    },
                    "boundary": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["id", "cls", "genus", "slots"],
                            "properties": {
                                "id": {"type": "string"},
                                "cls": _INT_LIST,
                                "genus": {"type": "integer", "minimum": 0},
                                "slots": {"type": "array", "items": {"type": "string"}},
                                "free": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                            },
                        },
                    },
                    "nodes": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["id", "branches"],
                            "properties": {
                                "id": {"type": "string"},
                                "branches": {"type": "array", "items": _SLOT_REF, "minItems": 2, "maxItems": 2},
                                "blown_up": {"type": "boolean"},
                            },
                        },
                    },
                },
                "if": {
                    "required": ["constructor"],
                    "properties": {"constructor": {"required": ["kind"], "properties": {"kind": {"const": "custom"}}}},
                },
                "then": {"required": ["lattice", "boundary", "nodes"]},
            },
        },
        "gluing": {
            "type": "object",
            "properties": {
                "pairs": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["a", "b", "perm"],
                        "properties": {"a": {"type": "string"}, "b": {"type": "string"}, "perm": _INT_LIST},
                    },
                },
                "self_pairs": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["comp", "perm"],
                        "properties": {"comp": {"type": "string"}, "perm": _INT_LIST},
                    },
                },
            },
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<document>"


def _tile_from_dict(d: dict, where: str) -> Tile:
    cons = d["constructor"]
    kind = cons["kind"]
    tid = d["id"]
    if kind == "p2_4lines_blown":
        return four_line_tile(tid, blown_up=True)
    if kind == "p2_4lines":
        return four_line_tile(tid, blown_up=False)
    if kind == "p1xp1_grid":
        return grid_tile(tid, cons.get("h", 4), cons.get("v", 3))
    if kind == "p2_curve":
        if "degree" not in cons:
            raise DocumentError("p2_curve needs 'degree'", f"{where}.constructor")
        try:
            return p2_curve_tile(tid, cons["degree"], cons.get("nodes", 0), cons.get("blown_up", False))
        except RangeError as exc:
            raise DocumentError(str(exc), f"{where}.constructor") from None
    lat_d = d["lattice"]
    try:
        lat = SurfaceLattice(
            lat_d["name"],
            tuple(lat_d["basis"]),
            tuple(tuple(r) for r in lat_d["gram"]),
            DivisorClass(tuple(lat_d["canonical"])),
            lat_d["chi_structure"],
            kind=lat_d.get("kind", "custom"),
            e=lat_d.get("e"),
            blowups=lat_d.get("blowups", 0),
        )
    except StructuralError as exc:
        raise DocumentError(str(exc), f"{where}.lattice") from None
    boundary = tuple(
        BoundaryComponent(b["id"], DivisorClass(tuple(b["cls"])), b["genus"], tuple(b["slots"]), frozenset(b.get("free", ())))
        for b in d["boundary"]
    )
    nodes = tuple(
        NodeRecord(n["id"], tuple((c, i) for c, i in n["branches"]), n.get("blown_up", False))
        for n in d["nodes"]
    )
    return Tile(tid, lat, boundary, nodes)


def surface_from_dict(doc: SurfaceDocument) -> GluedSurface:
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise DocumentError(err.message, _path(err.absolute_path))
    tiles = tuple(_tile_from_dict(t, f"tiles[{i}]") for i, t in enumerate(doc["tiles"]))
    g = doc["gluing"]
    gluing = GluingMap(
        tuple(GluePair(p["a"], p["b"], tuple(p["perm"])) for p in g.get("pairs", ())),
        tuple(SelfGlue(p["comp"], tuple(p["perm"])) for p in g.get("self_pairs", ())),
    )
    return GluedSurface(tiles, gluing, doc.get("label", ""), dict(doc.get("metadata", {})))


def loads_surface(text: str) -> GluedSurface:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    return surface_from_dict(doc)


def load_surface(path) -> GluedSurface:
    with open(path, encoding="utf-8") as fh:
        return loads_surface(fh.read())


def _lattice_to_dict(lat: SurfaceLattice) -> dict:
    return {
        "name": lat.name,
        "basis": list(lat.basis),
        "gram": [list(r) for r in lat.gram],
        "canonical": list(lat.canonical.coeffs),
        "chi_structure": lat.chi_structure,
        "kind": lat.kind,
        "e": lat.e,
        "blowups": lat.blowups,
    }


def surface_to_dict(s: GluedSurface) -> SurfaceDocument:
    return {
        "format_version": FORMAT_VERSION,
        "label": s.label,
        "tiles": [
            {
                "id": t.id,
                "constructor": {"kind": "custom"},
                "lattice": _lattice_to_dict(t.lattice),
                "boundary": [
                    {"id": c.id, "cls": list(c.cls.coeffs), "genus": c.genus, "slots": list(c.slots),
                     "free": sorted(c.free)}
                    for c in t.boundary
                ],
                "nodes": [
                    {"id": n.id, "branches": [list(b) for b in n.branches], "blown_up": n.blown_up}
                    for n in t.nodes
                ],
            }
            for t in s.tiles
        ],
        "gluing": {
            "pairs": [{"a": p.a, "b": p.b, "perm": list(p.perm)} for p in s.gluing.pairs],
            "self_pairs": [{"comp": p.comp, "perm": list(p.perm)} for p in s.gluing.self_pairs],
        },
        "metadata": s.metadata,
    }


def dumps_surface(s: GluedSurface) -> str:
    return json.dumps(surface_to_dict(s), indent=1)


def dump_surface(s: GluedSurface, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_surface(s) + "\n")


def report_to_dict(r: InvariantReport) -> dict:
    return {
        "label": r.label,
        "index": r.index,
        "k_squared": r.k_squared,
        "chi": r.chi,
        "experimental": r.experimental,
        "chi_semiresolution": r.chi_semiresolution,
        "chi_pushout": r.chi_pushout,
        "chi_normalization": r.chi_normalization,
        "chi_conductor_bar": r.chi_conductor_bar,
        "chi_conductor": r.chi_conductor,
        "double_curve_points": None if r.point_classes is None else sorted(r.point_classes),
        "singular_points": r.singular_points,
        "max_branch_count": r.max_branch_count,
        "cusps": None if r.cusps is None else [
            {"cycle_length": c.cycle_length, "local_model": c.local_model, "members": list(c.members)}
            for c in r.cusps
        ],
        "plurigenera": {str(m): p for m, p in r.plurigenera.items()},
        "verdicts": None if r.verdicts is None else r.verdicts.as_dict(),
        "extras": r.extras,
    }
