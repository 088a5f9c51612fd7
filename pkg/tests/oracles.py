"""Brute-force reference computations used by the tests.

Nothing here imports the library's graph, orbit or lattice code; each
function works from first principles on plain tuples.
"""

from __future__ import annotations

import itertools

PERMS = list(itertools.permutations(range(3)))

# slot order on each line of the four-line tile: nodes listed by the other line
LINES = {
    "L1": ("12", "13", "14"),
    "L2": ("12", "23", "24"),
    "L3": ("13", "23", "34"),
    "L4": ("14", "24", "34"),
}
SIGMAS = {
    "D": (0, 1, 2),
    "C": (1, 0, 2),
    "A": (1, 2, 0),
    "B": (2, 1, 0),
    "A'": (2, 0, 1),
    "B'": (0, 2, 1),
}


def monomials_p2(d: int) -> int:
    """Number of degree-d monomials in x, y, z."""
    if d < 0:
        return 0
    return sum(1 for a in range(d + 1) for b in range(d + 1) for c in range(d + 1) if a + b + c == d)


def lattice_points_hirzebruch(e: int, a: int, b: int) -> int:
    """h0(F_e, a C0 + b F) as the number of lattice points of the toric polygon.

    Fan rays (1,0), (0,1), (-1,e), (0,-1); the divisor a C0 + b F is
    b D_(1,0) + a D_(0,1), giving the polygon
    x >= -b, y >= -a, -x + e y >= 0, y <= 0.
    """
    # the polygon lies in -a <= y <= 0, -b <= x <= 0; scan a slightly larger box
    count = 0
    for x in range(-abs(b) - 2, 3):
        for y in range(-abs(a) - 2, 3):
            if x >= -b and y >= -a and -x + e * y >= 0 and y <= 0:
                count += 1
    return count


class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[rx] = ry

    def classes(self):
        out = {}
        for x in list(self.parent):
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def string_cycles(sigmas, perms) -> list[int]:
    """Lengths of the closed exceptional cycles of a circle string.

    Tile i glues L3 to L4 by ``sigmas[i]`` and L2 to L1 of tile i+1 by
    ``perms[i]``.  Each exceptional curve E_n of tile i has one end on each
    of the two lines through n; an identified pair of slots joins the two
    curves sitting there.  With no pinch points every curve ends up in a cycle.
    """
    k = len(sigmas)
    uf = UnionFind()
    glued = []
    for i in range(k):
        for s in range(3):
            glued.append(((i, LINES["L3"][s]), (i, LINES["L4"][sigmas[i][s]])))
            glued.append(((i, LINES["L2"][s]), ((i + 1) % k, LINES["L1"][perms[i][s]])))
    for i in range(k):
        for n in ("12", "13", "14", "23", "24", "34"):
            uf.find((i, n))
    for a, b in glued:
        uf.union(a, b)
    # each curve has two ends and each end is glued once, so classes are cycles
    return sorted(len(c) for c in uf.classes())


def string_invariants(sigmas, perms) -> tuple[int, int]:
    """(chi, K^2) of a circle string from first principles.

    Every tile is P^2 (chi 1) with four lines; after gluing, the 4k lines
    become 2k rational double curves, and every closed exceptional cycle
    contracts to a degenerate cusp adding one.  On each tile the pullback
    of K + boundary is the class of a line, so K^2 = k.
    """
    k = len(sigmas)
    cycles = len(string_cycles(sigmas, perms))
    return k - 4 * k + 2 * k + cycles, k


def compose(p, q):
    return tuple(p[q[i]] for i in range(3))


def inverse(p):
    out = [0, 0, 0]
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


S12 = (1, 0, 2)
S34 = (0, 2, 1)


def relabel(sigmas, perms, shift=0, reverse=False, swaps=()):
    """Apply a rotation, optional reversal, then L3/L4 swaps on the listed tiles.

    Reversal renames L1 <-> L2 in every tile.  On L3 = (13, 23, 34) that
    exchanges the first two slots, and on the L1/L2 slot lists it keeps
    indices in place, so sigma becomes s12 sigma s12 and each junction is
    traversed backwards.  Swapping L3 and L4 in tile i inverts its sigma
    and exchanges slots 1 and 2 of its L1 and L2 (``13``/``14`` and
    ``23``/``24``).
    """
    k = len(sigmas)
    sig, per = list(sigmas), list(perms)
    if reverse:
        sig = [compose(S12, compose(s, S12)) for s in reversed(sig)]
        # old junction i runs old tile i -> i+1, i.e. new tile k-2-i+1 -> k-1-i
        per = [inverse(per[(k - 2 - j) % k]) for j in range(k)]
    sig = sig[shift:] + sig[:shift]
    per = per[shift:] + per[:shift]
    for i in swaps:
        sig[i] = inverse(sig[i])
        per[i] = compose(per[i], S34)            # L2 of tile i is read through s34
        per[(i - 1) % k] = compose(S34, per[(i - 1) % k])  # L1 of tile i receives through s34
    return tuple(sig), tuple(per)


def group_orbit(sigmas, perms):
    k = len(sigmas)
    out = set()
    for reverse in (False, True):
        for shift in range(k):
            for r in range(k + 1):
                for swaps in itertools.combinations(range(k), r):
                    out.add(relabel(sigmas, perms, shift, reverse, swaps))
    return out


def orbit_count(k: int) -> int:
    """Orbits of the relabelling group on raw string encodings, via union-find."""
    uf = UnionFind()
    for sig in itertools.product([SIGMAS[t] for t in "ABCD"], repeat=k):
        for per in itertools.product(PERMS, repeat=k):
            enc = (sig, per)
            uf.find(enc)
            for other in group_orbit(sig, per):
                uf.union(enc, other)
    return len(uf.classes())
