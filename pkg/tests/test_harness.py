"""Invariance harness internals and end-to-end trials."""

import pytest

from gridfloer import h1_group, hat_dims, tilde_homology, trace_graph
from gridfloer.harness import (
    CorrespondenceError,
    edge_correspondence,
    find_shift,
    invariance_report,
    run_trial,
    transport_dims,
    _baseline,
)
from gridfloer.homology import BigradedDims
from gridfloer import moves
from conftest import load


def test_edge_correspondence_identity(spec3):
    sg = trace_graph(spec3)
    identity = {}
    for r in range(spec3.n):
        identity[("O", r, spec3.o_col[r])] = ("O", r, spec3.o_col[r])
    for (r, c) in spec3.x_cells:
        identity[("X", r, c)] = ("X", r, c)
    assert edge_correspondence(sg, sg, identity) == (0, 1, 2)


def test_edge_correspondence_cyclic_cols(spec3):
    # Shifting columns reorders the edges (ordering keys move); the map
    # must still be a bijection compatible with endpoints.
    result = moves.cyclic_with_map(spec3, "cols", 1)
    sg = trace_graph(spec3)
    sgm = trace_graph(result.grid)
    emap = edge_correspondence(sg, sgm, result.marker_map)
    assert sorted(emap) == [0, 1, 2]
    for e_new, e_old in enumerate(emap):
        assert sgm.edges[e_new].n_e == sg.edges[e_old].n_e


def test_edge_correspondence_rejects_wrong_map(spec3):
    sg = trace_graph(spec3)
    bad = {}
    for r in range(spec3.n):
        bad[("O", r, spec3.o_col[r])] = ("O", r, spec3.o_col[r])
    xs = sorted(spec3.x_cells)
    # Swap the images of two X's on different edges.
    swap = {xs[0]: xs[1], xs[1]: xs[0]}
    for (r, c) in xs:
        r2, c2 = swap.get((r, c), (r, c))
        bad[("X", r, c)] = ("X", r2, c2)
    with pytest.raises(CorrespondenceError):
        edge_correspondence(sg, sg, bad)


def test_find_shift(spec3):
    group = h1_group(trace_graph(spec3))
    base = tilde_homology(spec3)
    delta = (0, 1, 0)
    shifted = base.translated(delta, group)
    found = find_shift(base, shifted, group)
    assert found == group.reduce(delta).coeffs
    # A mangled copy has no shift.
    broken = BigradedDims(dict(list(base.dims.items())[:-1]))
    assert find_shift(base, broken, group) is None


def test_trials_pass_small_grids():
    for name in ("unknot2", "spec3", "theta4", "flock5"):
        rep = invariance_report(load(name), trials=15, seed=202, max_moves=8, max_n=7)
        assert rep["failed"] == 0, rep["results"]
        assert all(r["shift"] is not None for r in rep["results"])


def test_trials_parallel_matches_serial(spec3):
    serial = invariance_report(spec3, trials=8, seed=5, max_moves=6, max_n=7)
    parallel = invariance_report(spec3, trials=8, seed=5, max_moves=6, max_n=7, workers=2)
    assert serial["results"] == parallel["results"]


def test_trial_results_are_seed_deterministic(theta4):
    a = invariance_report(theta4, trials=6, seed=99, max_moves=8, max_n=7)
    b = invariance_report(theta4, trials=6, seed=99, max_moves=8, max_n=7)
    assert a == b
    c = invariance_report(theta4, trials=6, seed=100, max_moves=8, max_n=7)
    assert [r["moves"] for r in a["results"]] != [r["moves"] for r in c["results"]]


def test_trials_respect_size_cap(spec3):
    rep = invariance_report(spec3, trials=30, seed=1, max_moves=8, max_n=5)
    assert all(r["final_n"] <= 5 for r in rep["results"])


def test_fault_injected_boundary_fails(monkeypatch, spec3):
    """Mutating the boundary map must trip the harness."""
    import gridfloer.homology as hom
    from gridfloer.complexes import TildeBoundary, tilde_boundary as real_tb

    def broken_tb(g):
        tb = real_tb(g)
        if len(tb) > 0:
            return TildeBoundary(g, "tilde", tb.src[1:], tb.tgt[1:], tb.omask[1:])
        return tb

    base = _baseline(spec3)
    monkeypatch.setattr(hom, "tilde_boundary", broken_tb)
    results = [run_trial(base, t, 12, 8, 7) for t in range(10)]
    assert any(not r.ok for r in results)


def test_transport_dims_roundtrip(spec3):
    group = h1_group(trace_graph(spec3))
    dims = hat_dims(tilde_homology(spec3), trace_graph(spec3))
    identity = tuple(range(group.edge_count))
    assert transport_dims(dims, identity, group) == dims
