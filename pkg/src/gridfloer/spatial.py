"""Spatial graph tracing and the first homology of its complement.

A valid grid presents a transverse spatial graph: starred O's are vertices,
and each X in a vertex row starts a directed edge that alternates column
arcs (X to O) and row arcs (O to the unique X of a standard O's row) until
it reaches another starred O.  Unstarred O's passed along the way are the
edge's interior O's.

H1 of the graph complement is presented by one generator per edge (the
meridian) modulo one relation per vertex: the incoming meridians sum to the
outgoing ones.  Elements are kept as canonical coset representatives against
the Hermite normal form of the relation lattice, so equal classes compare
equal as plain integer vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .grid import GridDiagram, Marker, validate


class GridTraceError(RuntimeError):
    """A trace walk failed to terminate; signals a corrupt grid."""


@dataclass(frozen=True)
class Edge:
    source: int  # vertex ordinal
    target: int
    interior_o: tuple[int, ...]  # O indices in walk order
    xs: tuple[int, ...]  # X indices in walk order

    @property
    def n_e(self) -> int:
        return len(self.interior_o)


@dataclass(frozen=True)
class SpatialGraphModel:
    grid: GridDiagram
    vertices: tuple[Marker, ...]  # starred O's, by ordinal
    edges: tuple[Edge, ...]
    x_edge: tuple[int, ...]  # X index -> edge index
    o_edge: tuple[tuple[int, int], ...]  # (unstarred O index, edge index) pairs

    def edge_of_x(self, x_index: int) -> int:
        return self.x_edge[x_index]

    def edge_of_interior_o(self, o_index: int) -> int:
        for oi, ei in self.o_edge:
            if oi == o_index:
                return ei
        raise KeyError(f"O index {o_index} is not an interior O")

    def vertex_of_o(self, o_index: int) -> int:
        """Ordinal of the vertex whose O has the given index."""
        if o_index >= len(self.vertices):
            raise KeyError(f"O index {o_index} is not a vertex O")
        return o_index

    def out_edges(self, v: int) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.source == v]

    def in_edges(self, v: int) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.target == v]

    def is_sinkless_sourceless(self) -> bool:
        for v in range(len(self.vertices)):
            if not self.out_edges(v) or not self.in_edges(v):
                return False
        return True


def trace_graph(g: GridDiagram) -> SpatialGraphModel:
    """Trace the transverse spatial graph presented by a valid grid.

    Edges come out sorted by (source vertex ordinal, column of the first X
    of the walk), which pins the H1 coordinates.  Works on unsaturated valid
    grids too; those produce vertices with no outgoing or incoming edges.
    """
    report = validate(g)
    if not report.ok:
        raise ValueError(f"cannot trace an invalid grid: {report.violations[0].message}")

    o_markers = g.o_markers()
    x_markers = g.x_markers()
    x_index_at = {m.cell: m.index for m in x_markers}
    o_marker_of_row = {m.row: m for m in o_markers}
    vertices = tuple(m for m in o_markers if m.starred)
    vertex_ordinal = {m.row: i for i, m in enumerate(vertices)}

    xs_in_row: dict[int, list[tuple[int, int]]] = {}
    for (r, c) in g.x_cells:
        xs_in_row.setdefault(r, []).append((r, c))
    for r in xs_in_row:
        xs_in_row[r].sort(key=lambda cell: cell[1])

    edges: list[Edge] = []
    x_edge: dict[int, int] = {}
    o_edge: dict[int, int] = {}
    budget = 2 * g.n * g.n + 4

    for v_ord, vm in enumerate(vertices):
        for start in xs_in_row.get(vm.row, []):
            xs: list[int] = []
            interior: list[int] = []
            cell = start
            for _ in range(budget):
                xs.append(x_index_at[cell])
                o_row = g.o_row_of_col(cell[1])
                om = o_marker_of_row[o_row]
                if om.starred:
                    edge_idx = len(edges)
                    edges.append(Edge(v_ord, vertex_ordinal[om.row], tuple(interior), tuple(xs)))
                    for xi in xs:
                        x_edge[xi] = edge_idx
                    for oi in interior:
                        o_edge[oi] = edge_idx
                    break
                interior.append(om.index)
                nxt = xs_in_row.get(om.row, [])
                if len(nxt) != 1:
                    raise GridTraceError(f"unstarred O in row {om.row} lacks a unique X")
                cell = nxt[0]
            else:
                raise GridTraceError(f"walk from {start} did not terminate")

    covered_x = len(x_edge)
    if covered_x != len(x_markers):
        raise GridTraceError("some X's are not on any edge (grid is corrupt)")
    x_edge_tuple = tuple(x_edge[i] for i in range(len(x_markers)))
    return SpatialGraphModel(
        g, vertices, tuple(edges), x_edge_tuple, tuple(sorted(o_edge.items())))


@dataclass(frozen=True)
class H1Element:
    """Canonical coset representative of a class in H1 of the complement."""

    coeffs: tuple[int, ...]

    def __add__(self, other: "H1Element") -> "H1Element":
        return H1Element(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "H1Element") -> "H1Element":
        return H1Element(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "H1Element":
        return H1Element(tuple(-a for a in self.coeffs))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)


def _hnf(rows: list[list[int]], width: int) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Pivots are positive, entries below a pivot are zero and entries above it
    are reduced into [0, pivot).  Returns (hnf rows, pivot columns).
    """
    work = [list(r) for r in rows if any(r)]
    out: list[list[int]] = []
    pivots: list[int] = []
    for col in range(width):
        live = [r for r in work if r[col] != 0]
        if not live:
            continue
        # Euclidean reduction: shrink the column entries to a single pivot.
        while True:
            live.sort(key=lambda r: abs(r[col]))
            if len(live) == 1:
                break
            small = live[0]
            for r in live[1:]:
                q = r[col] // small[col]
                for j in range(width):
                    r[j] -= q * small[j]
            live = [r for r in live if r[col] != 0]
        pivot_row = live[0]
        work = [r for r in work if r is not pivot_row and any(r)]
        for r in work:
            if r[col] != 0:
                q = r[col] // pivot_row[col]
                for j in range(width):
                    r[j] -= q * pivot_row[j]
        work = [r for r in work if any(r)]
        if pivot_row[col] < 0:
            pivot_row = [-v for v in pivot_row]
        out.append(pivot_row)
        pivots.append(col)
    # Reduce entries above each pivot.
    for i in range(len(out) - 1, -1, -1):
        p = pivots[i]
        for k in range(i):
            q = out[k][p] // out[i][p]
            if q:
                for j in range(width):
                    out[k][j] -= q * out[i][j]
    return tuple(tuple(r) for r in out), tuple(pivots)


@dataclass(frozen=True)
class H1Group:
    """H1 of the graph complement, presented by edges modulo vertex relations."""

    edge_count: int
    relations: tuple[tuple[int, ...], ...]  # one row per vertex
    hnf: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return self.edge_count - len(self.hnf)

    def reduce(self, vec) -> H1Element:
        """Canonical representative of vec + lattice."""
        v = list(vec.coeffs if isinstance(vec, H1Element) else vec)
        if len(v) != self.edge_count:
            raise ValueError(f"vector length {len(v)} != edge count {self.edge_count}")
        for row, p in zip(self.hnf, self.pivots):
            q = v[p] // row[p]
            if q:
                for j in range(self.edge_count):
                    v[j] -= q * row[j]
        return H1Element(tuple(v))

    def zero(self) -> H1Element:
        return H1Element((0,) * self.edge_count)

    def add(self, a: H1Element, b: H1Element) -> H1Element:
        return self.reduce(a + b)

    def sub(self, a: H1Element, b: H1Element) -> H1Element:
        return self.reduce(a - b)

    def neg(self, a: H1Element) -> H1Element:
        return self.reduce(-a)

    def basis_element(self, edge: int) -> H1Element:
        return self.reduce(tuple(1 if i == edge else 0 for i in range(self.edge_count)))


def _frozen_key(sg: SpatialGraphModel):
    return (sg.grid, sg.vertices, sg.edges)


@lru_cache(maxsize=256)
def _h1_group_cached(key) -> H1Group:
    _, vertices, edges = key
    n_v, n_e = len(vertices), len(edges)
    rows = [[0] * n_e for _ in range(n_v)]
    for j, e in enumerate(edges):
        rows[e.target][j] += 1  # incoming
        rows[e.source][j] -= 1  # outgoing; a loop cancels to zero
    hnf, pivots = _hnf(rows, n_e)
    return H1Group(n_e, tuple(tuple(r) for r in rows), hnf, pivots)


def h1_group(sg: SpatialGraphModel) -> H1Group:
    return _h1_group_cached(_frozen_key(sg))


def h1_reduce(group: H1Group, vec) -> H1Element:
    return group.reduce(vec)


def weight(sg: SpatialGraphModel, marker: Marker) -> H1Element:
    """Meridian weight of a marker: its edge class, or for a vertex O the sum
    of the outgoing edge classes."""
    group = h1_group(sg)
    if marker.kind == "X":
        return group.basis_element(sg.edge_of_x(marker.index))
    if marker.starred:
        v = sg.vertex_of_o(marker.index)
        vec = [0] * group.edge_count
        for ei in sg.out_edges(v):
            vec[ei] += 1
        return group.reduce(vec)
    return group.basis_element(sg.edge_of_interior_o(marker.index))
