"""Picard lattices of the smooth rational and elliptic surfaces used as tiles.

Everything here is exact integer arithmetic.  Lattices are immutable;
:func:`blow_up` returns a new lattice.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from typing import Iterable, Mapping, Sequence

from stablegeo.errors import StructuralError, UnsupportedError

__all__ = [
    "DivisorClass",
    "SurfaceLattice",
    "projective_plane",
    "hirzebruch",
    "elliptic_product",
    "custom_lattice",
    "blow_up",
    "intersect",
    "adjunction_genus",
    "h0",
]


@dataclass(frozen=True)
class DivisorClass:
    """Integer coefficient vector with respect to a lattice basis."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def __len__(self) -> int:
        return len(self.coeffs)

    def _check(self, other: DivisorClass) -> None:
        if len(other.coeffs) != len(self.coeffs):
            raise StructuralError(
                f"divisor classes of different rank: {len(self.coeffs)} vs {len(other.coeffs)}"
            )

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._check(other)
        return DivisorClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        self._check(other)
        return DivisorClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(tuple(-a for a in self.coeffs))

    def __mul__(self, n: int) -> DivisorClass:
        if not isinstance(n, int):
            return NotImplemented
        return DivisorClass(tuple(n * a for a in self.coeffs))

    __rmul__ = __mul__

    def extended(self, extra: int) -> DivisorClass:
        """The same class viewed in a lattice with ``extra`` more basis vectors."""
        return DivisorClass(self.coeffs + (0,) * extra)

    @classmethod
    def zero(cls, rank: int) -> DivisorClass:
        return cls((0,) * rank)


@dataclass(frozen=True)
class SurfaceLattice:
    """Intersection form, canonical class and chi(O) of a smooth projective surface.

    ``kind`` records the constructor ("P2", "F", "CxC" or "custom") and
    ``blowups`` how many points have been blown up since; ``e`` is the
    Hirzebruch index for kind "F".
    """

    name: str
    basis: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]
    canonical: DivisorClass
    chi_structure: int
    kind: str = "custom"
    e: int | None = None
    blowups: int = 0
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _rows: tuple = field(default=None, init=False, repr=False, compare=False, hash=False)
    # blow_up passes the sparse rows it already knows and skips re-checking its own gram
    sparse_rows: InitVar[tuple | None] = None

    def __post_init__(self, sparse_rows=None):
        n = len(self.basis)
        if len(set(self.basis)) != n:
            raise StructuralError(f"duplicate basis labels in lattice {self.name!r}")
        if len(self.canonical) != n:
            raise StructuralError(f"canonical class of {self.name!r} has wrong rank")
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "_index", {label: i for i, label in enumerate(self.basis)})
        if sparse_rows is not None:
            object.__setattr__(self, "_rows", sparse_rows)
            return
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        if len(gram) != n or any(len(row) != n for row in gram):
            raise StructuralError(f"gram matrix of {self.name!r} is not {n}x{n}")
        for i in range(n):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise StructuralError(f"gram matrix of {self.name!r} is not symmetric")
        object.__setattr__(self, "gram", gram)
        rows = tuple(tuple((j, g) for j, g in enumerate(row) if g) for row in gram)
        object.__setattr__(self, "_rows", rows)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def divisor(self, coeffs: Mapping[str, int] | None = None, **kwargs: int) -> DivisorClass:
        """Build a class from basis labels, e.g. ``lat.divisor(H=4)``."""
        values = dict(coeffs or {})
        values.update(kwargs)
        vec = [0] * self.rank
        for label, c in values.items():
            try:
                vec[self._index[label]] += int(c)
            except KeyError:
                raise StructuralError(f"{label!r} is not a basis class of {self.name!r}") from None
        return DivisorClass(tuple(vec))

    def basis_class(self, label: str) -> DivisorClass:
        return self.divisor({label: 1})

    def has_class(self, label: str) -> bool:
        return label in self._index

    def describe(self, d: DivisorClass) -> str:
        terms = []
        for c, label in zip(d.coeffs, self.basis):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            terms.append(("-" if c < 0 else "+") + mag + label)
        if not terms:
            return "0"
        text = "".join(terms)
        return text[1:] if text[0] == "+" else text


def projective_plane() -> SurfaceLattice:
    return SurfaceLattice("P2", ("H",), ((1,),), DivisorClass((-3,)), 1, kind="P2")


def hirzebruch(e: int) -> SurfaceLattice:
    """F_e with basis (C0, F): C0^2 = -e, C0.F = 1, F^2 = 0."""
    if e < 0:
        raise StructuralError("Hirzebruch index must be non-negative")
    return SurfaceLattice(
        f"F{e}", ("C0", "F"), ((-e, 1), (1, 0)), DivisorClass((-2, -(e + 2))), 1, kind="F", e=e
    )


def elliptic_product() -> SurfaceLattice:
    """C x C' for elliptic curves C, C': only the two fibre classes are tracked."""
    return SurfaceLattice("CxC'", ("C", "C'"), ((0, 1), (1, 0)), DivisorClass((0, 0)), 0, kind="CxC")


def custom_lattice(
    name: str,
    basis: Sequence[str],
    gram: Sequence[Sequence[int]],
    canonical: Sequence[int],
    chi_structure: int,
) -> SurfaceLattice:
    return SurfaceLattice(
        name, tuple(basis), tuple(tuple(r) for r in gram), DivisorClass(tuple(canonical)), chi_structure
    )


def blow_up(lat: SurfaceLattice, n: int, labels: Iterable[str] | None = None) -> SurfaceLattice:
    """Blow up ``n`` distinct points; each new class E has E^2 = -1 and K gains +E."""
    if n < 0:
        raise StructuralError("cannot blow up a negative number of points")
    if n == 0:
        return lat
    if labels is None:
        labels = [f"E{lat.blowups + i + 1}" for i in range(n)]
    labels = tuple(labels)
    if len(labels) != n:
        raise StructuralError(f"expected {n} exceptional labels, got {len(labels)}")
    m = lat.rank
    pad = (0,) * n
    gram = [row + pad for row in lat.gram]
    for i in range(n):
        gram.append((0,) * (m + i) + (-1,) + (0,) * (n - i - 1))
    rows = lat._rows + tuple(((m + i, -1),) for i in range(n))
    canonical = DivisorClass(lat.canonical.coeffs + (1,) * n)
    return SurfaceLattice(
        f"Bl_{n}({lat.name})",
        lat.basis + labels,
        tuple(gram),
        canonical,
        lat.chi_structure,
        kind=lat.kind,
        e=lat.e,
        blowups=lat.blowups + n,
        sparse_rows=rows,
    )


def intersect(lat: SurfaceLattice, a: DivisorClass, b: DivisorClass) -> int:
    """a^T . gram . b"""
    if len(a) != lat.rank or len(b) != lat.rank:
        raise StructuralError(
            f"class of rank {len(a)}/{len(b)} does not live on {lat.name!r} (rank {lat.rank})"
        )
    b = b.coeffs
    total = 0
    for i, ai in enumerate(a.coeffs):
        if ai:
            total += ai * sum(g * b[j] for j, g in lat._rows[i])
    return total


def adjunction_genus(lat: SurfaceLattice, d: DivisorClass) -> int:
    """Arithmetic genus 1 + d(d+K)/2."""
    twice = intersect(lat, d, d + lat.canonical)
    if twice % 2:
        raise StructuralError(f"d(d+K) = {twice} is odd for {lat.describe(d)} on {lat.name}")
    return 1 + twice // 2


def h0(lat: SurfaceLattice, d: DivisorClass) -> int:
    """Dimension of global sections of O(d) on P^2 or a Hirzebruch surface."""
    if lat.blowups:
        raise UnsupportedError(f"h0 is only implemented on P2 and F_e, not on {lat.name}")
    if lat.kind == "P2":
        if len(d) != 1:
            raise StructuralError("class does not live on P2")
        (a,) = d.coeffs
        return (a + 1) * (a + 2) // 2 if a >= 0 else 0
    if lat.kind == "F":
        if len(d) != 2:
            raise StructuralError("class does not live on a Hirzebruch surface")
        a, b = d.coeffs
        if a < 0:
            return 0
        return sum(max(0, b - j * lat.e + 1) for j in range(a + 1))
    raise UnsupportedError(f"h0 is only implemented on P2 and F_e, not on {lat.name}")
