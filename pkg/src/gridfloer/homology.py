"""Exact F2 homology of the tilde complex, block by bigrading.

Every tilde arrow preserves the Alexander class and drops Maslov by one, so
the complex splits into independent blocks indexed by (Alexander class,
Maslov degree).  Within a block, dim H_m = dim C_m - rank d_m - rank d_{m+1}
with ranks computed by Gaussian elimination over GF(2) on int bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import engine
from .grid import GridDiagram, is_saturated, validate
from .gradings import Generator
from .complexes import TildeBoundary, generator_from_rank, tilde_boundary


class BlockError(RuntimeError):
    """An arrow crossed bigrading blocks; the gradings are inconsistent."""


@dataclass
class BigradedDims:
    """Finitely supported map (Alexander class, Maslov degree) -> dimension."""

    dims: dict[tuple[tuple[int, ...], int], int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.dims.values())

    def items_sorted(self):
        return sorted(self.dims.items())

    def to_json_obj(self) -> list[dict]:
        return [
            {"alexander": list(a), "maslov": m, "dim": d}
            for (a, m), d in self.items_sorted()
        ]

    def translated(self, delta: tuple[int, ...], group) -> "BigradedDims":
        out = {}
        for (a, m), d in self.dims.items():
            key = tuple(x + y for x, y in zip(a, delta))
            out[(group.reduce(key).coeffs, m)] = d
        return BigradedDims(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, BigradedDims) and self.dims == other.dims


def gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of rows stored as int bitsets (lowest-bit pivoting)."""
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            low = row & -row
            other = pivots.get(low)
            if other is None:
                pivots[low] = row
                rank += 1
                break
            row ^= other
    return rank


def block_decompose(g: GridDiagram, boundary: TildeBoundary):
    """Partition all generators by (Alexander class, Maslov), checking that
    every arrow stays in its Alexander class and drops Maslov by one."""
    maslov, a_red = engine.grading_arrays(g)
    src, tgt = boundary.src, boundary.tgt
    if len(src):
        if not np.array_equal(a_red[src], a_red[tgt]):
            raise BlockError("a tilde arrow changes the Alexander class")
        if not np.array_equal(maslov[src] - 1, maslov[tgt]):
            raise BlockError("a tilde arrow does not drop Maslov by one")
    blocks: dict[tuple[int, ...], dict[int, list[Generator]]] = {}
    n = g.n
    for rank in range(len(maslov)):
        key = tuple(int(v) for v in a_red[rank])
        blocks.setdefault(key, {}).setdefault(int(maslov[rank]), []).append(
            generator_from_rank(n, rank))
    return blocks


def _rank_of_level(arrows, src_level: dict[int, int], tgt_level: dict[int, int]) -> int:
    rows: dict[int, int] = {}
    for s, t in arrows:
        rows[s] = rows.get(s, 0) ^ (1 << tgt_level[t])
    return gf2_rank(list(rows.values()))


def _rank_task(task):
    key, arrow_list, src_gens, tgt_gens = task
    src_level = {r: i for i, r in enumerate(src_gens)}
    tgt_level = {r: i for i, r in enumerate(tgt_gens)}
    return key, _rank_of_level(arrow_list, src_level, tgt_level)


def tilde_homology(
    g: GridDiagram,
    boundary: TildeBoundary | None = None,
    workers: int = 1,
) -> BigradedDims:
    """Bigraded dimensions of the tilde homology of a saturated valid grid.

    Blocks are independent; with workers > 1 their rank computations run in
    a process pool (results are identical either way).
    """
    report = validate(g)
    if not report.ok:
        raise ValueError(f"invalid grid: {report.violations[0].message}")
    if not is_saturated(g):
        raise ValueError("homology needs a saturated grid (an X in every row and column)")
    if boundary is None:
        boundary = tilde_boundary(g)

    maslov, a_red = engine.grading_arrays(g)
    src = boundary.src
    tgt = boundary.tgt
    if len(src):
        if not np.array_equal(a_red[src], a_red[tgt]):
            raise BlockError("a tilde arrow changes the Alexander class")
        if not np.array_equal(maslov[src] - 1, maslov[tgt]):
            raise BlockError("a tilde arrow does not drop Maslov by one")

    # Group generators into blocks by Alexander row, then Maslov level.
    _, block_ids = np.unique(a_red, axis=0, return_inverse=True)
    key_of_block: dict[int, tuple[int, ...]] = {}
    levels: dict[tuple[int, int], list[int]] = {}
    for rank in range(len(maslov)):
        bid = int(block_ids[rank])
        if bid not in key_of_block:
            key_of_block[bid] = tuple(int(v) for v in a_red[rank])
        levels.setdefault((bid, int(maslov[rank])), []).append(rank)

    # Group arrows by (block, source Maslov level).
    arrows_at: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for k in range(len(src)):
        s = int(src[k])
        key = (int(block_ids[s]), int(maslov[s]))
        arrows_at.setdefault(key, []).append((s, int(tgt[k])))

    tasks = [
        (key, arrow_list, levels[key], levels[(key[0], key[1] - 1)])
        for key, arrow_list in arrows_at.items()
    ]
    ranks: dict[tuple[int, int], int] = {}
    if workers > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            for key, rank in pool.map(_rank_task, tasks,
                                      chunksize=max(1, len(tasks) // (4 * workers))):
                ranks[key] = rank
    else:
        for task in tasks:
            key, rank = _rank_task(task)
            ranks[key] = rank

    dims: dict[tuple[tuple[int, ...], int], int] = {}
    for (bid, m), gens in levels.items():
        d = len(gens) - ranks.get((bid, m), 0) - ranks.get((bid, m + 1), 0)
        if d < 0:
            raise BlockError("negative homology dimension; rank bookkeeping broke")
        if d:
            dims[(key_of_block[bid], m)] = d
    return BigradedDims(dims)
