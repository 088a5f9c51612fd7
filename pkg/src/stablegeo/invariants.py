"""K^2, chi(O_X) by two independent routes, cusp census, plurigenera, inequalities.

The first route for chi goes through the semi-resolution: chi of the glued
semi-smooth surface plus one for every closed cycle of exceptional curves.
The second works directly on the normalisation and the double curve,
treating every singular point of the double curve as seminormal
(delta = number of branches - 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from stablegeo.complex import (
    GluedSurface,
    conductor_components,
    exceptional_cycles,
    marked_point_classes,
    require_valid,
)
from stablegeo.errors import PreconditionError, StructuralError, UnsupportedError
from stablegeo.lattice import intersect

DEFAULT_MAX_PLURIGENUS = 6


def local_model(m: int) -> str:
    if m < 1:
        raise StructuralError("cycle length must be positive")
    if m == 1:
        return "cone over a plane nodal cubic"
    if m == 2:
        return "T_{2,inf,inf}: x^2 + y^2 z^2 = 0"
    return f"cone over a cycle of {m} independent lines"


@dataclass(frozen=True)
class CuspRecord:
    cycle_length: int
    members: tuple[str, ...]
    local_model: str


@dataclass
class Verdicts:
    p2_inequality: bool
    noether_bound: bool
    on_noether_line: bool
    bmy_classical: bool

    def failed(self) -> list[str]:
        """Names of violated inequalities; the classical BMY check is informational only."""
        return [n for n in ("p2_inequality", "noether_bound") if not getattr(self, n)]

    def as_dict(self) -> dict[str, bool]:
        return {
            "p2_inequality": self.p2_inequality,
            "noether_bound": self.noether_bound,
            "on_noether_line": self.on_noether_line,
            "bmy_classical": self.bmy_classical,
        }


@dataclass
class InvariantReport:
    label: str
    k_squared: int
    chi: int
    index: int = 1
    chi_normalization: int | None = None
    chi_conductor_bar: int | None = None
    chi_conductor: int | None = None
    chi_semiresolution: int | None = None
    chi_pushout: int | None = None
    cusps: list[CuspRecord] | None = None
    point_classes: list[int] | None = None
    plurigenera: dict[int, int] = field(default_factory=dict)
    verdicts: Verdicts | None = None
    experimental: bool = False
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def singular_points(self) -> int | None:
        """Singular points of the double curve (classes with at least two branches)."""
        if self.point_classes is None:
            return None
        return sum(1 for b in self.point_classes if b >= 2)

    @property
    def max_branch_count(self) -> int | None:
        if not self.point_classes:
            return None
        return max(self.point_classes)

    def census(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.cusps or ():
            out[c.cycle_length] = out.get(c.cycle_length, 0) + 1
        return dict(sorted(out.items()))


def k_squared(s: GluedSurface) -> int:
    """Sum over tiles of (K + boundary)^2, pulled back to each tile."""
    require_valid(s)
    total = 0
    for t in s.tiles:
        c = t.log_canonical_class()
        total += intersect(t.lattice, c, c)
    return total


def chi_normalization(s: GluedSurface) -> int:
    return sum(t.lattice.chi_structure for t in s.tiles)


def chi_semiresolution_path(s: GluedSurface) -> int:
    """chi(O_Y) of the semi-resolution plus the number of closed exceptional cycles.

    Open chains (index two: chains ending in pinch points) contract to
    rational points and contribute nothing.
    """
    require_valid(s)
    if not s.all_blown_up:
        raise UnsupportedError("the semi-resolution route needs blown-up tiles")
    comps = s.components()
    chi_dbar = sum(1 - c.genus for _, c in comps.values())
    chi_d = sum(1 - d.genus for d in conductor_components(s))
    chi_y = chi_normalization(s) - chi_dbar + chi_d
    cycles = sum(1 for c in exceptional_cycles(s) if c.closed)
    return chi_y + cycles


def chi_pushout_parts(s: GluedSurface) -> tuple[int, int, int, list[int]]:
    """(chi(O_Xbar), chi(O_Dbar), chi(O_D), branch counts of the point classes)."""
    report = require_valid(s)
    if report.index != 1:
        raise UnsupportedError("the pushout route is only implemented for index one")
    chi_dbar = sum(1 - c.genus for _, c in s.components().values()) - s.node_count
    classes = marked_point_classes(s)
    chi_d = sum(1 - d.genus for d in conductor_components(s)) - sum(pc.branch_count - 1 for pc in classes)
    return chi_normalization(s), chi_dbar, chi_d, [pc.branch_count for pc in classes]


def chi_pushout_path(s: GluedSurface) -> int:
    chi_x, chi_dbar, chi_d, _ = chi_pushout_parts(s)
    return chi_x + chi_d - chi_dbar


def cusp_census(s: GluedSurface) -> list[CuspRecord]:
    return [
        CuspRecord(c.length, c.curves, local_model(c.length))
        for c in exceptional_cycles(s)
        if c.closed
    ]


def riemann_roch(chi: int, L_self: int, L_dot_K: int) -> int:
    """chi(O_X(L)) = chi(O_X) + L(L - K)/2."""
    diff = L_self - L_dot_K
    if diff % 2:
        raise StructuralError(f"L^2 - L.K = {diff} is odd")
    return chi + diff // 2


def plurigenus(r: InvariantReport, m: int) -> int:
    """P_m = chi + m(m-1)/2 K^2 (no boundary, Gorenstein, m >= 2)."""
    if m < 2:
        raise PreconditionError("the plurigenus formula needs m >= 2")
    if r.index != 1:
        raise PreconditionError("the plurigenus formula needs a Gorenstein surface")
    return r.chi + m * (m - 1) // 2 * r.k_squared


def check_inequalities(r: InvariantReport) -> Verdicts:
    if r.index != 1:
        raise PreconditionError("the inequalities are stated for Gorenstein surfaces")
    k2, chi = r.k_squared, r.chi
    return Verdicts(
        p2_inequality=chi >= -k2,
        noether_bound=chi <= k2 + 2,
        on_noether_line=chi == k2 + 2,
        bmy_classical=k2 <= 9 * chi,
    )


def finish_report(r: InvariantReport, max_m: int = DEFAULT_MAX_PLURIGENUS) -> InvariantReport:
    """Fill plurigenera and verdicts for Gorenstein reports."""
    if r.index == 1:
        r.plurigenera = {m: plurigenus(r, m) for m in range(2, max_m + 1)}
        r.verdicts = check_inequalities(r)
    return r


def compute_report(s: GluedSurface, max_m: int = DEFAULT_MAX_PLURIGENUS) -> InvariantReport:
    """Everything computable for ``s``; raises :class:`PreconditionError` if ``s`` is invalid.

    When both chi routes apply they must agree, otherwise a
    :class:`StructuralError` is raised.
    """
    validation = require_valid(s)
    r = InvariantReport(label=s.label, k_squared=k_squared(s), chi=0, index=validation.index)
    r.chi_normalization = chi_normalization(s)
    if s.all_blown_up:
        r.chi_semiresolution = chi_semiresolution_path(s)
        r.cusps = cusp_census(s)
    if validation.index == 1:
        chi_x, chi_dbar, chi_d, branches = chi_pushout_parts(s)
        r.chi_conductor_bar = chi_dbar
        r.chi_conductor = chi_d
        r.point_classes = branches
        r.chi_pushout = chi_x + chi_d - chi_dbar
    else:
        r.experimental = True
    routes = [c for c in (r.chi_semiresolution, r.chi_pushout) if c is not None]
    if not routes:
        raise UnsupportedError(f"no chi route applies to {s.label!r}")
    if len(set(routes)) > 1:
        raise StructuralError(
            f"chi routes disagree on {s.label!r}: semi-resolution {r.chi_semiresolution}, pushout {r.chi_pushout}"
        )
    r.chi = routes[0]
    return finish_report(r, max_m)
