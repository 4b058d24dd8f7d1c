"""Block decomposition and tilde homology against the dense oracle."""

from math import factorial

import pytest

from gridfloer import (
    alexander,
    block_decompose,
    h1_group,
    maslov,
    tilde_boundary,
    tilde_homology,
    trace_graph,
)
from gridfloer.homology import BigradedDims, gf2_rank
from gridfloer import moves
from conftest import load
from oracles import dense_homology, gf2_rank_dense


def test_gf2_rank_basics():
    assert gf2_rank([]) == 0
    assert gf2_rank([0b101, 0b011, 0b110]) == 2
    assert gf2_rank([0b101, 0b011, 0b110, 0b001]) == 3
    assert gf2_rank([0, 0]) == 0


def test_gf2_rank_matches_dense_random():
    import random

    rng = random.Random(5)
    for _ in range(50):
        n_rows, n_cols = rng.randint(1, 8), rng.randint(1, 8)
        rows = [[rng.randint(0, 1) for _ in range(n_cols)] for _ in range(n_rows)]
        ints = [sum(b << i for i, b in enumerate(r)) for r in rows]
        assert gf2_rank(ints) == gf2_rank_dense(rows)


def test_block_decompose_unknot(unknot2):
    blocks = block_decompose(unknot2, tilde_boundary(unknot2))
    assert len(blocks) == 2
    sizes = sorted(sum(len(v) for v in by_m.values()) for by_m in blocks.values())
    assert sizes == [1, 1]
    keys = {(a, m) for a, by_m in blocks.items() for m in by_m}
    assert keys == {((0,), 0), ((-1,), -1)}


def test_block_sizes_sum_to_factorial(corpus_grid):
    blocks = block_decompose(corpus_grid, tilde_boundary(corpus_grid))
    total = sum(len(gens) for by_m in blocks.values() for gens in by_m.values())
    assert total == factorial(corpus_grid.n)


def test_blocks_are_boundary_closed(spec3):
    sg = trace_graph(spec3)
    tb = tilde_boundary(spec3)
    from gridfloer.complexes import generator_from_rank

    for s, t in zip(tb.src, tb.tgt):
        xs = generator_from_rank(spec3.n, int(s))
        xt = generator_from_rank(spec3.n, int(t))
        assert alexander(spec3, sg, xs) == alexander(spec3, sg, xt)
        assert maslov(spec3, xs) - 1 == maslov(spec3, xt)


def test_tilde_homology_unknot(unknot2):
    dims = tilde_homology(unknot2)
    assert dims.total() == 2
    assert dims.dims == {((0,), 0): 1, ((-1,), -1): 1}


def test_tilde_homology_spec3(spec3):
    # Frozen from the dense oracle.
    assert tilde_homology(spec3).dims == {
        ((0, -2, -1), -2): 1,
        ((0, -2, 0), -1): 1,
        ((0, -1, -1), -1): 1,
        ((0, -1, 0), 0): 1,
    }


def test_zero_boundary_dims_equal_block_sizes(unknot2):
    tb = tilde_boundary(unknot2)
    assert len(tb) == 0
    dims = tilde_homology(unknot2)
    blocks = block_decompose(unknot2, tb)
    for a, by_m in blocks.items():
        for m, gens in by_m.items():
            assert dims.dims.get((a, m), 0) == len(gens)


def test_euler_characteristic_is_differential_free(corpus_grid):
    """Per block, the alternating sum of dims matches the generator count."""
    if corpus_grid.n > 5:
        pytest.skip("covered up to n=5")
    blocks = block_decompose(corpus_grid, tilde_boundary(corpus_grid))
    dims = tilde_homology(corpus_grid)
    for a, by_m in blocks.items():
        chain = sum((-1) ** (m % 2) * len(gens) for m, gens in by_m.items())
        hom = sum(
            (-1) ** (m % 2) * d for (aa, m), d in dims.dims.items() if aa == a)
        assert chain == hom


def test_dense_oracle_equivalence(corpus_grid):
    if corpus_grid.n > 5:
        pytest.skip("oracle equivalence is an acceptance criterion at n<=5")
    sg = trace_graph(corpus_grid)
    assert dense_homology(corpus_grid, sg) == tilde_homology(corpus_grid).dims


def test_rank_bounds(corpus_grid):
    dims = tilde_homology(corpus_grid)
    blocks = block_decompose(corpus_grid, tilde_boundary(corpus_grid))
    for a, by_m in blocks.items():
        for m, gens in by_m.items():
            assert dims.dims.get((a, m), 0) <= len(gens)


def test_cyclic_shift_equal_dims(spec3):
    """Re-cutting the torus translates the bigraded dimensions."""
    from gridfloer.harness import edge_correspondence, find_shift, transport_dims

    sg = trace_graph(spec3)
    group = h1_group(sg)
    base = tilde_homology(spec3)
    for axis in ("rows", "cols"):
        result = moves.cyclic_with_map(spec3, axis, 1)
        sgm = trace_graph(result.grid)
        emap = edge_correspondence(sg, sgm, result.marker_map)
        moved = transport_dims(tilde_homology(result.grid), emap, group)
        assert find_shift(base, moved, group) is not None


def test_homology_requires_saturated():
    with pytest.raises(ValueError, match="saturated"):
        tilde_homology(load("unsat3"))
    with pytest.raises(ValueError, match="invalid"):
        tilde_homology(load("invalid_nostar2"))


def test_parallel_blocks_match_serial():
    g = load("knot5")
    assert tilde_homology(g, workers=1) == tilde_homology(g, workers=2)


def test_bigraded_dims_translation():
    group = h1_group(trace_graph(load("spec3")))
    d = BigradedDims({((0, 1, 0), 2): 3, ((0, 0, 0), 1): 1})
    moved = d.translated((0, 0, 1), group)
    assert moved.total() == 4
    assert moved.dims[(group.reduce((0, 1, 1)).coeffs, 2)] == 3
    # Translating back is the identity.
    assert moved.translated((0, 0, -1), group) == d
