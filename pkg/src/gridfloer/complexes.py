"""Generators, empty rectangles, and the boundary maps.

Generators are permutations (one point per vertical circle).  Any two
generators differing at exactly two columns are connected by exactly two
toroidal rectangles; a rectangle is empty when its interior misses the
generator points.  The minus boundary counts empty rectangles free of X's,
weighted by one U variable per O covered; the tilde boundary keeps only
rectangles free of all markers.  Everything is over the two-element field,
so coefficients are parities.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import factorial

import numpy as np

from . import engine
from .grid import GridDiagram
from .gradings import Generator


def generators(g: GridDiagram):
    """All n! generators in lexicographic order of their permutations."""
    for rho in permutations(range(g.n)):
        yield Generator(rho)


def generator_rank(x: Generator) -> int:
    """Lexicographic rank via the Lehmer code."""
    n = x.n
    rank = 0
    for i in range(n - 1):
        smaller = sum(1 for j in range(i + 1, n) if x.rho[j] < x.rho[i])
        rank += smaller * factorial(n - 1 - i)
    return rank


def generator_from_rank(n: int, rank: int) -> Generator:
    digits = []
    for i in range(n):
        f = factorial(n - 1 - i)
        digits.append(rank // f)
        rank %= f
    pool = list(range(n))
    return Generator(tuple(pool.pop(d) for d in digits))


@dataclass(frozen=True)
class Monomial:
    """Product of U variables, one per O index, with nonnegative exponents."""

    exponents: tuple[int, ...]

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @classmethod
    def one(cls, n: int) -> "Monomial":
        return cls((0,) * n)

    @classmethod
    def variable(cls, n: int, i: int) -> "Monomial":
        return cls(tuple(1 if k == i else 0 for k in range(n)))


@dataclass(frozen=True)
class Rect:
    """An embedded toroidal rectangle from one generator to another.

    The cell footprint is the cyclic box cols [col_start, col_start+width) x
    rows [row_start, row_start+height); corners are generator points, with
    the SW and NE corners on the source.  o_inside / x_inside list the
    indices of markers whose cells lie in the box.
    """

    source: Generator
    target: Generator
    col_start: int
    width: int
    row_start: int
    height: int
    o_inside: tuple[int, ...]
    x_inside: tuple[int, ...]

    def cols(self) -> tuple[int, ...]:
        n = self.source.n
        return tuple((self.col_start + k) % n for k in range(self.width))

    def rows(self) -> tuple[int, ...]:
        n = self.source.n
        return tuple((self.row_start + k) % n for k in range(self.height))

    def cells(self) -> frozenset[tuple[int, int]]:
        return frozenset((r, c) for r in self.rows() for c in self.cols())

    def monomial(self, n_o: int) -> Monomial:
        exps = [0] * n_o
        for i in self.o_inside:
            exps[i] += 1
        return Monomial(tuple(exps))


def empty_rects(g: GridDiagram, x: Generator) -> list[Rect]:
    """All empty rectangles leaving x (interior free of generator points)."""
    n = g.n
    if x.n != n:
        raise ValueError("generator size does not match the grid")
    o_index_of_col = {m.col: m.index for m in g.o_markers()}
    o_row_of_col = {m.col: m.row for m in g.o_markers()}
    x_index_at = {m.cell: m.index for m in g.x_markers()}

    out: list[Rect] = []
    for c1 in range(n):
        for c2 in range(c1 + 1, n):
            target = list(x.rho)
            target[c1], target[c2] = target[c2], target[c1]
            y = Generator(tuple(target))
            for cs, ce in ((c1, c2), (c2, c1)):
                r0 = x.rho[cs]
                h = (x.rho[ce] - r0) % n
                width = (ce - cs) % n
                cols = [(cs + k) % n for k in range(width)]
                if any(
                    0 < (x.rho[(cs + k) % n] - r0) % n < h for k in range(1, width)
                ):
                    continue
                rows = [(r0 + k) % n for k in range(h)]
                rowset = set(rows)
                o_in = sorted(
                    o_index_of_col[c] for c in cols if o_row_of_col[c] in rowset
                )
                x_in = sorted(
                    x_index_at[(r, c)] for r in rows for c in cols
                    if (r, c) in x_index_at
                )
                out.append(Rect(x, y, cs, width, r0, h, tuple(o_in), tuple(x_in)))
    return out


@dataclass(frozen=True)
class BoundaryMap:
    """Sparse boundary over the two-element field, arrows sorted by source.

    ``omask`` packs the O content of each arrow's rectangle as a bitmask over
    O indices (each exponent is 0 or 1 for a single rectangle); tilde arrows
    always carry mask 0.
    """

    grid: GridDiagram
    flavor: str
    src: np.ndarray
    tgt: np.ndarray
    omask: np.ndarray

    @property
    def n_generators(self) -> int:
        return factorial(self.grid.n)

    def __len__(self) -> int:
        return len(self.src)

    def arrows_from(self, x: Generator) -> list[tuple[Monomial, Generator]]:
        rank = generator_rank(x)
        lo = int(np.searchsorted(self.src, rank, side="left"))
        hi = int(np.searchsorted(self.src, rank, side="right"))
        n = self.grid.n
        out = []
        for k in range(lo, hi):
            exps = tuple((int(self.omask[k]) >> i) & 1 for i in range(n))
            out.append((Monomial(exps), generator_from_rank(n, int(self.tgt[k]))))
        return out

    def as_arrow_set(self) -> set[tuple[int, int, int]]:
        return {
            (int(s), int(t), int(m))
            for s, t, m in zip(self.src, self.tgt, self.omask)
        }


class MinusBoundary(BoundaryMap):
    pass


class TildeBoundary(BoundaryMap):
    pass


def minus_boundary(g: GridDiagram) -> MinusBoundary:
    """Boundary counting empty rectangles with no X, weighted by U's."""
    src, tgt, omask = engine.boundary_arrays(g, "minus")
    return MinusBoundary(g, "minus", src, tgt, omask)


def tilde_boundary(g: GridDiagram) -> TildeBoundary:
    """Boundary counting empty rectangles with no X and no O."""
    src, tgt, omask = engine.boundary_arrays(g, "tilde")
    return TildeBoundary(g, "tilde", src, tgt, omask)


def _spread_table(n: int) -> list[int]:
    """Widen each bit of an O mask to a two-bit lane so masks add as exponents."""
    table = []
    for mask in range(1 << n):
        v = 0
        for i in range(n):
            if (mask >> i) & 1:
                v |= 1 << (2 * i)
        table.append(v)
    return table


def _adjacency(b: BoundaryMap) -> list[list[tuple[int, int]]]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(b.n_generators)]
    for s, t, m in zip(b.src, b.tgt, b.omask):
        adj[int(s)].append((int(t), int(m)))
    return adj


def verify_d_squared(b: BoundaryMap) -> bool:
    """Compose the boundary with itself symbolically over F2[U]; True iff 0."""
    n = b.grid.n
    spread = _spread_table(n)
    adj = _adjacency(b)
    for x in range(b.n_generators):
        terms: set[tuple[int, int]] = set()
        for (y, m1) in adj[x]:
            s1 = spread[m1]
            for (z, m2) in adj[y]:
                key = (z, s1 + spread[m2])
                if key in terms:
                    terms.discard(key)
                else:
                    terms.add(key)
        if terms:
            return False
    return True


@dataclass(frozen=True)
class SparseUMap:
    """A F2[U]-linear map as arrows (source rank, target rank, U exponents)."""

    grid: GridDiagram
    arrows: tuple[tuple[int, int, tuple[int, ...]], ...]


def u_homotopy(g: GridDiagram, k: int) -> SparseUMap:
    """Homotopy counting empty rectangles containing X_k and no other X.

    When X_k shares its row and its column with other X's the zero map is
    returned; in the remaining cases the anticommutator with the minus
    boundary is multiplication by the O variable of X_k's row, column, or
    their sum, depending on which lines X_k occupies alone.
    """
    xm = g.x_markers()[k]
    shares_row = g.x_count_in_row(xm.row) > 1
    shares_col = g.x_count_in_col(xm.col) > 1
    if shares_row and shares_col:
        return SparseUMap(g, ())
    arrows = []
    for x in generators(g):
        rank = generator_rank(x)
        for r in empty_rects(g, x):
            if r.x_inside == (k,):
                exps = r.monomial(g.n).exponents
                arrows.append((rank, generator_rank(r.target), exps))
    return SparseUMap(g, tuple(sorted(arrows)))


def u_multiplication(g: GridDiagram, i: int) -> SparseUMap:
    """The map x -> U_i x."""
    exps = Monomial.variable(g.n, i).exponents
    return SparseUMap(g, tuple((x, x, exps) for x in range(factorial(g.n))))


def map_sum(a: SparseUMap, b: SparseUMap) -> SparseUMap:
    terms = set(a.arrows)
    for arrow in b.arrows:
        if arrow in terms:
            terms.discard(arrow)
        else:
            terms.add(arrow)
    return SparseUMap(a.grid, tuple(sorted(terms)))


def anticommutator(d: BoundaryMap, h: SparseUMap) -> SparseUMap:
    """d h + h d over F2[U], as a canonical arrow set."""
    n = d.grid.n

    def mask_exps(m: int) -> tuple[int, ...]:
        return tuple((m >> i) & 1 for i in range(n))

    d_adj = _adjacency(d)
    h_adj: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
    for (s, t, e) in h.arrows:
        h_adj.setdefault(s, []).append((t, e))

    terms: set[tuple[int, int, tuple[int, ...]]] = set()

    def toggle(x: int, z: int, exps: tuple[int, ...]) -> None:
        key = (x, z, exps)
        if key in terms:
            terms.discard(key)
        else:
            terms.add(key)

    for x in range(d.n_generators):
        for (y, e1) in h_adj.get(x, ()):  # h then d
            for (z, m2) in d_adj[y]:
                e2 = mask_exps(m2)
                toggle(x, z, tuple(a + b for a, b in zip(e1, e2)))
        for (y, m1) in d_adj[x]:  # d then h
            e1 = mask_exps(m1)
            for (z, e2) in h_adj.get(y, ()):
                toggle(x, z, tuple(a + b for a, b in zip(e1, e2)))

    return SparseUMap(d.grid, tuple(sorted(terms)))
