"""Command-line front end.

Exit statuses: 0 success, 2 parse or validation error, 3 I/O error,
4 a Gorenstein surface failing one of the inequalities (``check`` only).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import xml.etree.ElementTree as ET
from fractions import Fraction
from typing import Sequence

from stablegeo.catalog import CATALOG, ExtremalRow
from stablegeo.complex import GluedSurface, validate
from stablegeo.document import DocumentError, dump_surface, load_surface, report_to_dict
from stablegeo.errors import StableGeoError
from stablegeo.invariants import InvariantReport, compute_report
from stablegeo.search import GeographyMap, geography_map

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_IO = 3
EXIT_INEQUALITY = 4

log = logging.getLogger("stablegeo")


class CliError(Exception):
    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


# ---- report formatting ----------------------------------------------------

def _fmt(v) -> str:
    return "n/a" if v is None else str(v)


def report_rows(r: InvariantReport) -> list[tuple[str, str]]:
    rows = [
        ("surface", r.label),
        ("index", str(r.index) + (" (experimental)" if r.experimental else "")),
        ("K^2", str(r.k_squared)),
        ("chi(O_X)", str(r.chi)),
        ("chi via semi-resolution", _fmt(r.chi_semiresolution)),
        ("chi via pushout", _fmt(r.chi_pushout)),
        ("chi(O_Xbar)", _fmt(r.chi_normalization)),
        ("chi(O_Dbar)", _fmt(r.chi_conductor_bar)),
        ("chi(O_D)", _fmt(r.chi_conductor)),
        ("singular points of D", _fmt(r.singular_points)),
        ("max branch count", _fmt(r.max_branch_count)),
    ]
    if r.cusps is not None:
        rows.append(("cusps", ",".join(str(c.cycle_length) for c in sorted(r.cusps, key=lambda c: c.cycle_length)) or "none"))
    for m, p in r.plurigenera.items():
        rows.append((f"P_{m}", str(p)))
    if r.verdicts is not None:
        for name, ok in r.verdicts.as_dict().items():
            rows.append((name, "yes" if ok else "NO"))
    for name, value in r.extras.items():
        rows.append((name, json.dumps(value) if isinstance(value, (dict, list)) else str(value)))
    return rows


def warnings_for(r: InvariantReport) -> list[str]:
    out = []
    if r.verdicts is not None and not r.verdicts.bmy_classical:
        out.append(
            f"warning: classical BMY inequality K^2 <= 9 chi fails: {r.k_squared} > {9 * r.chi}"
        )
    if r.experimental:
        out.append("warning: index-two chi computation is experimental")
    return out


def format_text(r: InvariantReport) -> str:
    rows = report_rows(r)
    width = max(len(k) for k, _ in rows)
    lines = []
    for k, v in rows:
        # the census line is kept in its compact form
        lines.append(f"cusps: {v}" if k == "cusps" else f"{k.ljust(width)}  {v}")
    lines += warnings_for(r)
    return "\n".join(lines) + "\n"


def format_csv(r: InvariantReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "value"])
    w.writerows(report_rows(r))
    return buf.getvalue()


def format_structured(r: InvariantReport) -> str:
    d = report_to_dict(r)
    d["warnings"] = warnings_for(r)
    return json.dumps(d, indent=1) + "\n"


FORMATTERS = {"text": format_text, "csv": format_csv, "structured": format_structured}


def format_extremal(rows: list[ExtremalRow]) -> str:
    header = ("family", "e", "k", "(K+B)^2", "p_g", "(K+B)^2+2", "ok")
    body = [
        (r.family, _fmt(r.e), _fmt(r.k), str(r.self_intersection), str(r.pg), str(r.self_intersection + 2),
         "yes" if r.ok else "NO")
        for r in rows
    ]
    widths = [max(len(x[i]) for x in [header, *body]) for i in range(len(header))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in [header, *body]) + "\n"


# ---- geography export -----------------------------------------------------

def geography_csv(gm: GeographyMap) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["chi", "k2", "count", "witness"])
    for p in gm.points:
        w.writerow([p.chi, p.k_squared, p.count, p.witness])
    return buf.getvalue()


def geography_svg(gm: GeographyMap, scale: int = 40, margin: int = 60) -> str:
    """Scatter of realized (chi, K^2) with chi horizontal, K^2 vertical."""
    k_top = max([gm.k_max] + [p.k_squared for p in gm.points]) + 1
    chi_lo = min([-k_top] + [p.chi for p in gm.points]) - 1
    chi_hi = max([k_top + 2] + [p.chi for p in gm.points]) + 1
    width = (chi_hi - chi_lo) * scale + 2 * margin
    height = k_top * scale + 2 * margin

    def x(chi: int) -> str:
        return str(margin + (chi - chi_lo) * scale)

    def y(k2: int) -> str:
        return str(margin + (k_top - k2) * scale)

    svg = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg", "version": "1.1",
        "width": str(width), "height": str(height), "viewBox": f"0 0 {width} {height}",
    })
    ET.SubElement(svg, "title").text = f"Realized (chi, K^2) for K^2 <= {gm.k_max}"
    axes = ET.SubElement(svg, "g", {"stroke": "black", "stroke-width": "1"})
    ET.SubElement(axes, "line", {"x1": x(chi_lo), "y1": y(0), "x2": x(chi_hi), "y2": y(0)})
    ET.SubElement(axes, "line", {"x1": x(0), "y1": y(0), "x2": x(0), "y2": y(k_top)})
    ticks = ET.SubElement(svg, "g", {"font-family": "sans-serif", "font-size": "11", "text-anchor": "middle"})
    for c in range(chi_lo, chi_hi + 1):
        ET.SubElement(ticks, "text", {"x": x(c), "y": str(int(y(0)) + 16)}).text = str(c)
    for k in range(1, k_top + 1):
        ET.SubElement(ticks, "text", {"x": str(int(x(0)) - 12), "y": str(int(y(k)) + 4)}).text = str(k)
    labels = ET.SubElement(svg, "g", {"font-family": "sans-serif", "font-size": "14"})
    ET.SubElement(labels, "text", {"x": x(chi_hi), "y": str(int(y(0)) + 36), "text-anchor": "end"}).text = "χ(O_X)"
    ET.SubElement(labels, "text", {"x": str(int(x(0)) + 8), "y": str(margin - 16)}).text = "K²"

    for line in gm.lines:
        # chi = slope * K^2 + offset, drawn for 0 <= K^2 <= k_top
        ET.SubElement(svg, "line", {
            "x1": x(line.chi_at(0)), "y1": y(0), "x2": x(line.chi_at(k_top)), "y2": y(k_top),
            "stroke": "#1f5fa8" if line.realized else "#b03030", "stroke-width": "2",
            "stroke-dasharray": "none" if line.realized else "6,4",
        })
        ET.SubElement(svg, "text", {
            "x": x(line.chi_at(k_top)), "y": str(int(y(k_top)) - 6), "font-family": "sans-serif",
            "font-size": "11", "text-anchor": "middle",
        }).text = line.name

    dots = ET.SubElement(svg, "g", {"fill": "black"})
    for p in gm.points:
        c = ET.SubElement(dots, "circle", {"cx": x(p.chi), "cy": y(p.k_squared), "r": "4"})
        ET.SubElement(c, "title").text = f"chi={p.chi}, K^2={p.k_squared}, {p.count} gluing(s), e.g. {p.witness}"
    ET.indent(svg)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(svg, encoding="unicode") + "\n"


# ---- commands -------------------------------------------------------------

def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def _load(path: str) -> GluedSurface:
    try:
        return load_surface(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None
    except DocumentError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INVALID) from None


def _report(s: GluedSurface) -> InvariantReport:
    v = validate(s)
    if not v.valid:
        raise CliError("invalid surface:\n" + "\n".join(f"  - {m}" for m in v.violations), EXIT_INVALID)
    return compute_report(s)


def cmd_invariants(args, out) -> int:
    r = _report(_load(args.file))
    out.write(FORMATTERS[args.format](r))
    return EXIT_OK


def cmd_check(args, out) -> int:
    r = _report(_load(args.file))
    if r.verdicts is None:
        out.write(f"{r.label}: index {r.index}, the inequalities apply to Gorenstein surfaces only\n")
        return EXIT_OK
    for name, ok in r.verdicts.as_dict().items():
        out.write(f"{name}: {'yes' if ok else 'NO'}\n")
    failed = r.verdicts.failed()
    if failed:
        out.write(f"failed: {', '.join(failed)}\n")
        return EXIT_INEQUALITY
    return EXIT_OK


def _convert(param: str, raw: str):
    if param == "cross_ratio":
        return Fraction(raw)
    return int(raw)


def cmd_catalog(args, out) -> int:
    entry = CATALOG.get(args.name)
    if entry is None:
        raise CliError(f"unknown catalog entry {args.name!r}; choose from {', '.join(CATALOG)}", EXIT_INVALID)
    if len(args.params) > len(entry.parameters):
        raise CliError(f"{entry.name} takes parameters ({', '.join(entry.parameters)})", EXIT_INVALID)
    try:
        params = [_convert(p, raw) for p, raw in zip(entry.parameters, args.params)]
    except (ValueError, ZeroDivisionError):
        raise CliError(f"bad parameters {args.params} for {entry.name}({', '.join(entry.parameters)})", EXIT_INVALID) from None
    if args.name in ("x_kl", "normal", "extremal") and len(params) != len(entry.parameters):
        raise CliError(f"{entry.name} needs parameters ({', '.join(entry.parameters)})", EXIT_INVALID)
    result = entry.builder(*params)

    if args.name == "extremal":
        text = format_extremal(result)
        out.write(text)
        if args.out:
            _write(args.out, text)
        return EXIT_OK
    if isinstance(result, InvariantReport):
        if args.out:
            _write(args.out, format_structured(result))
        out.write(FORMATTERS[args.format](result))
        return EXIT_OK
    if args.out:
        try:
            dump_surface(result, args.out)
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc.strerror}", EXIT_IO) from None
    out.write(FORMATTERS[args.format](compute_report(result)))
    return EXIT_OK


def cmd_geography(args, out) -> int:
    if args.k_max < 1:
        raise CliError("--k-max must be at least 1", EXIT_INVALID)
    for path in (args.csv, args.svg):
        if path:
            _write(path, "")  # fail on unwritable paths before the enumeration
    gm = geography_map(args.k_max, workers=args.workers)
    if args.csv:
        _write(args.csv, geography_csv(gm))
    if args.svg:
        _write(args.svg, geography_svg(gm))
    out.write(f"{len(gm.points)} realized (chi, K^2) pairs from {len(gm.evaluations)} gluings, K^2 <= {args.k_max}\n")
    for note in gm.notes:
        out.write(f"note: {note}\n")
    if not args.csv:
        out.write(geography_csv(gm))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stablegeo", description="Invariants of glued Gorenstein stable surfaces.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="print the invariant report of a surface document")
    p.add_argument("file")
    p.add_argument("--format", choices=sorted(FORMATTERS), default="text")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("check", help="print inequality verdicts; exit 4 if one fails")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("catalog", help="build a named construction and print its report")
    p.add_argument("name", help=", ".join(f"{e.name}({','.join(e.parameters)})" for e in CATALOG.values()))
    p.add_argument("params", nargs="*")
    p.add_argument("--out", help="write the surface document (or table) here")
    p.add_argument("--format", choices=sorted(FORMATTERS), default="text")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("geography", help="enumerate string gluings and export realized (chi, K^2)")
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_geography)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.status
    except StableGeoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
