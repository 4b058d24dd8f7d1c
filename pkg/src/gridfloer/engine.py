"""Bulk evaluation over all n! generators, vectorized with numpy.

The public modules expose per-generator operations; everything that has to
touch the whole generator set (gradings, boundary arrows, homology) goes
through here.  Generators are identified with their lexicographic rank; the
rank order equals the row order of ``perm_matrix``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from math import factorial

import numpy as np

from .grid import GridDiagram
from .gradings import GradingError, _aj2_table, _h_table, _maslov_tables
from .spatial import SpatialGraphModel, h1_group, trace_graph


@lru_cache(maxsize=4)
def perm_matrix(n: int) -> np.ndarray:
    """All permutations of range(n) in lexicographic order, one per row."""
    return np.array(list(permutations(range(n))), dtype=np.int64)


def lehmer_ranks(perms: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each row."""
    n = perms.shape[1]
    fact = [factorial(k) for k in range(n)]
    ranks = np.zeros(len(perms), dtype=np.int64)
    for i in range(n - 1):
        digit = np.zeros(len(perms), dtype=np.int64)
        col_i = perms[:, i]
        for j in range(i + 1, n):
            digit += perms[:, j] < col_i
        ranks += digit * fact[n - 1 - i]
    return ranks


@lru_cache(maxsize=64)
def _trace_cached(g: GridDiagram) -> SpatialGraphModel:
    return trace_graph(g)


def grading_arrays(g: GridDiagram, sg: SpatialGraphModel | None = None):
    """(M, A) for every generator: M is an int vector, A a matrix whose rows
    are canonical H1 representatives.  The winding-number and J-formula
    routes are both evaluated and must agree."""
    if sg is None:
        sg = _trace_cached(g)
    n = g.n
    group = h1_group(sg)
    e = group.edge_count
    P = perm_matrix(n)
    N = len(P)

    ne, sw, joo = _maslov_tables(g)
    ne_arr = np.array(ne, dtype=np.int64)
    sw_arr = np.array(sw, dtype=np.int64)
    asc = np.zeros(N, dtype=np.int64)
    two_jxo = np.zeros(N, dtype=np.int64)
    for c in range(n):
        col = P[:, c]
        for c2 in range(c + 1, n):
            asc += P[:, c2] > col
        two_jxo += ne_arr[c][col] + sw_arr[c][col]
    # two_jxo is I(x,O) + I(O,x) = 2 J(x,O), so no halving is needed.
    maslov = asc - two_jxo + joo + 1

    htab = np.array(_h_table(g, sg), dtype=np.int64)  # (n+1, n+1, e)
    a_raw = np.zeros((N, e), dtype=np.int64)
    for c in range(n):
        a_raw -= htab[c][P[:, c]]
    a_red = reduce_rows(a_raw, group)

    aj = np.array(_aj2_table(g, sg), dtype=np.int64)
    a2 = np.zeros((N, e), dtype=np.int64)
    for c in range(n):
        a2 += aj[c][P[:, c]]
    if (a2 % 2).any():
        raise GradingError("J-formula Alexander values are not integral")
    aj_red = reduce_rows(a2 // 2, group)
    if not np.array_equal(a_red, aj_red):
        raise GradingError("winding-number and J-formula Alexander gradings disagree")
    return maslov, a_red


def reduce_rows(mat: np.ndarray, group) -> np.ndarray:
    """Reduce each row to its canonical coset representative."""
    out = mat.copy()
    for row, p in zip(group.hnf, group.pivots):
        q = out[:, p] // row[p]
        out -= q[:, None] * np.array(row, dtype=np.int64)[None, :]
    return out


def boundary_arrays(g: GridDiagram, flavor: str):
    """Arrow arrays (src, tgt, omask) of the requested boundary flavor.

    Arrows are empty rectangles; "minus" drops rectangles containing an X
    and records the O content as a bitmask over O indices, "tilde"
    additionally drops rectangles containing any O, and "all" keeps every
    empty rectangle (used only for cross-checks).
    """
    if flavor not in ("minus", "tilde", "all"):
        raise ValueError(f"unknown flavor {flavor!r}")
    n = g.n
    P = perm_matrix(n)
    N = len(P)

    o_row_of_col = [0] * n
    for r in range(n):
        o_row_of_col[g.o_col[r]] = r
    o_index_of_col = [0] * n
    for m in g.o_markers():
        o_index_of_col[m.col] = m.index

    # xpre[r, c]: number of X's in rows < r, cols < c
    xpre = np.zeros((n + 1, n + 1), dtype=np.int64)
    for (r, c) in g.x_cells:
        xpre[r + 1, c + 1] = 1
    xpre = np.cumsum(np.cumsum(xpre, axis=0), axis=1)

    def col_span(start: int, width: int) -> list[tuple[int, int]]:
        if start + width <= n:
            return [(start, start + width)]
        return [(start, n), (0, start + width - n)]

    def x_in_rows(colcum: np.ndarray, r0: np.ndarray, h: np.ndarray) -> np.ndarray:
        hi = r0 + h
        nowrap = hi <= n
        lo_cnt = colcum[r0]
        direct = colcum[np.minimum(hi, n)] - lo_cnt
        wrapped = (colcum[n] - lo_cnt) + colcum[np.maximum(hi - n, 0)]
        return np.where(nowrap, direct, wrapped)

    srcs, tgts, masks = [], [], []
    src_ranks = np.arange(N, dtype=np.int64)
    for c1 in range(n):
        for c2 in range(c1 + 1, n):
            Y = P.copy()
            Y[:, c1] = P[:, c2]
            Y[:, c2] = P[:, c1]
            tgt_ranks = lehmer_ranks(Y)
            for (cs, ce, width) in ((c1, c2, c2 - c1), (c2, c1, n - (c2 - c1))):
                r0 = P[:, cs]
                h = (P[:, ce] - r0) % n

                inside = np.zeros(N, dtype=bool)
                for k in range(1, width):
                    c = (cs + k) % n
                    rel = (P[:, c] - r0) % n
                    inside |= (rel > 0) & (rel < h)
                keep = ~inside

                spans = col_span(cs, width)
                if flavor != "all":
                    colcum = np.zeros(n + 1, dtype=np.int64)
                    for (a, b) in spans:
                        colcum += xpre[:, b] - xpre[:, a]
                    keep = keep & (x_in_rows(colcum, r0, h) == 0)

                omask = np.zeros(N, dtype=np.int64)
                ocnt = np.zeros(N, dtype=np.int64)
                for (a, b) in spans:
                    for c in range(a, b):
                        rel = (o_row_of_col[c] - r0) % n
                        hit = rel < h
                        ocnt += hit
                        omask += hit.astype(np.int64) << o_index_of_col[c]
                if flavor == "tilde":
                    keep = keep & (ocnt == 0)

                srcs.append(src_ranks[keep])
                tgts.append(tgt_ranks[keep])
                masks.append(omask[keep])

    src = np.concatenate(srcs) if srcs else np.zeros(0, dtype=np.int64)
    tgt = np.concatenate(tgts) if tgts else np.zeros(0, dtype=np.int64)
    omask = np.concatenate(masks) if masks else np.zeros(0, dtype=np.int64)
    if flavor == "all":
        order = np.lexsort((tgt, src))
        return src[order], tgt[order], omask[order]
    # Coefficients live in the two-element field: a pair connected by two
    # rectangles with the same monomial cancels (disconnected grids hit this).
    stacked = np.stack([src, tgt, omask], axis=1)
    uniq, counts = np.unique(stacked, axis=0, return_counts=True)
    odd = uniq[counts % 2 == 1]
    return odd[:, 0].copy(), odd[:, 1].copy(), odd[:, 2].copy()
