"""Grid moves: legality, round trips, preservation of rules and the graph."""

import pytest
from gridfloer import GridDiagram, is_saturated, trace_graph, validate
from gridfloer.moves import (
    MoveError,
    apply_move,
    apply_script,
    commute,
    commute_with_map,
    commutation_valid,
    cyclic,
    destabilize,
    find_destab_patterns,
    format_move,
    parse_move,
    stabilize,
    stabilize_col,
    stabilize_with_map,
)
from gridfloer.harness import edge_correspondence, random_move
import random

from conftest import load


def test_cyclic_full_cycle_is_identity(corpus_grid):
    n = corpus_grid.n
    assert cyclic(corpus_grid, "rows", n) == corpus_grid
    assert cyclic(corpus_grid, "cols", n) == corpus_grid


def test_cyclic_inverse(corpus_grid):
    for axis in ("rows", "cols"):
        assert cyclic(cyclic(corpus_grid, axis, 1), axis, -1) == corpus_grid


def test_cyclic_coordinates(spec3):
    moved = cyclic(spec3, "cols", 1)
    assert moved.o_col == (1, 2, 0)
    assert moved.x_cells == {(r, (c + 1) % 3) for (r, c) in spec3.x_cells}
    assert moved.starred == spec3.starred


def test_commutation_disjoint_spans_valid():
    # Classical commutation: columns 0 and 1 occupy disjoint height ranges.
    g = GridDiagram(4, (0, 2, 1, 3),
                    frozenset({(1, 0), (3, 1), (0, 2), (2, 3)}),
                    frozenset({0, 2}))
    assert validate(g).ok
    assert commutation_valid(g, "cols", 0)


def test_commutation_nested_spans_valid():
    # Column 1's height range sits inside column 0's.
    g = GridDiagram(4, (0, 1, 2, 3), frozenset({(3, 0), (2, 1), (1, 2), (0, 3)}),
                    frozenset({0, 1}))
    assert validate(g).ok
    assert commutation_valid(g, "cols", 0)


def test_commutation_interleaved_invalid():
    g = GridDiagram(4, (0, 1, 2, 3), frozenset({(2, 0), (3, 1)}), frozenset({0, 1, 2, 3}))
    assert validate(g).ok
    assert not commutation_valid(g, "cols", 0)


def test_commutation_shared_row_xs_valid(spec3):
    # Columns 1 and 2 of the two-vertex grid share row 0 (X's in the same
    # row); the shared height sits at a cut point, so the move is legal.
    assert commutation_valid(spec3, "cols", 1)
    moved = commute(spec3, "cols", 1)
    assert validate(moved).ok and is_saturated(moved)


def test_commute_is_involution(corpus_grid):
    for axis in ("rows", "cols"):
        for i in range(corpus_grid.n):
            if commutation_valid(corpus_grid, axis, i):
                again = commute(commute(corpus_grid, axis, i), axis, i)
                assert again == corpus_grid


def test_commute_rejects_invalid():
    g = GridDiagram(4, (0, 1, 2, 3), frozenset({(2, 0), (3, 1)}), frozenset({0, 1, 2, 3}))
    with pytest.raises(MoveError):
        commute(g, "cols", 0)


def test_commute_preserves_graph(corpus_grid):
    sg = trace_graph(corpus_grid)
    for axis in ("rows", "cols"):
        for i in range(corpus_grid.n):
            if not commutation_valid(corpus_grid, axis, i):
                continue
            result = commute_with_map(corpus_grid, axis, i)
            sgm = trace_graph(result.grid)
            emap = edge_correspondence(sg, sgm, result.marker_map)
            for e_new, e_old in enumerate(emap):
                assert sgm.edges[e_new].n_e == sg.edges[e_old].n_e


def test_stabilize_unknot():
    g = load("unknot2")
    s = stabilize(g, 0, 1, "above")
    assert s.n == 3
    assert validate(s).ok and is_saturated(s)
    sg = trace_graph(s)
    assert len(sg.vertices) == 1 and len(sg.edges) == 1
    assert sg.edges[0].n_e == 2  # the loop gains one interior O


def test_stabilize_increments_one_edge(corpus_grid):
    sg = trace_graph(corpus_grid)
    for (r, c) in sorted(corpus_grid.x_cells)[:3]:
        for placement in ("above", "below"):
            result = stabilize_with_map(corpus_grid, r, c, placement)
            assert validate(result.grid).ok and is_saturated(result.grid)
            sgm = trace_graph(result.grid)
            emap = edge_correspondence(sg, sgm, result.marker_map)
            bumps = [
                sgm.edges[e_new].n_e - sg.edges[e_old].n_e
                for e_new, e_old in enumerate(emap)
            ]
            assert sorted(bumps) == [0] * (len(bumps) - 1) + [1]


def test_stabilize_requires_an_x(spec3):
    with pytest.raises(MoveError, match="no X"):
        stabilize(spec3, 0, 0)


def test_destabilize_round_trip(corpus_grid):
    for (r, c) in sorted(corpus_grid.x_cells)[:2]:
        for placement in ("above", "below"):
            s = stabilize(corpus_grid, r, c, placement)
            hits = [
                p for p in find_destab_patterns(s)
                if destabilize(s, *p) == corpus_grid
            ]
            assert hits, (r, c, placement)


def test_destabilize_col_round_trip(spec3):
    for (r, c) in sorted(spec3.x_cells):
        for placement in ("right", "left"):
            s = stabilize_col(spec3, r, c, placement)
            assert validate(s).ok and is_saturated(s)
            hits = [
                p for p in find_destab_patterns(s)
                if destabilize(s, *p) == spec3
            ]
            assert hits, (r, c, placement)


def test_destabilize_pattern_absent(spec3):
    with pytest.raises(MoveError, match="pattern"):
        destabilize(spec3, 0, 0)


def test_moves_preserve_rules_randomized(corpus_grid):
    rng = random.Random(11)
    g = corpus_grid
    for _ in range(12):
        spec = random_move(g, rng, max_n=corpus_grid.n + 2)
        g = apply_move(g, spec).grid
        assert validate(g).ok
        assert is_saturated(g)


def test_move_script_parse_format_round_trip():
    lines = [
        "cyclic rows +2",
        "cyclic cols -1",
        "commute rows 3",
        "commute cols 0",
        "stab row 2 col 4 above",
        "stab row 0 col 1 below",
        "stab col 4 row 2 right",
        "stab col 1 row 0 left",
        "destab 5 5",
    ]
    for line in lines:
        spec = parse_move(line)
        assert parse_move(format_move(spec)) == spec


def test_move_script_defaults():
    assert parse_move("stab row 1 col 2").placement == "above"
    assert parse_move("stab col 2 row 1").placement == "right"


def test_move_script_errors():
    for bad in ["", "frobnicate 1", "cyclic up 1", "stab row x col 2", "destab 1"]:
        with pytest.raises(MoveError):
            parse_move(bad)


def test_apply_script_identity(spec3):
    out = apply_script(spec3, "cyclic cols +1\ncyclic cols -1\n")
    assert out == spec3


def test_apply_script_stab_then_destab(unknot2):
    s = stabilize(unknot2, 0, 1, "above")
    pattern = find_destab_patterns(s)[0]
    script = f"stab row 0 col 1 above\ndestab {pattern[0]} {pattern[1]}\n"
    assert apply_script(unknot2, script) == unknot2


def test_apply_script_reports_line(spec3):
    with pytest.raises(MoveError, match="line 2"):
        apply_script(spec3, "cyclic cols +1\ndestab 0 0\n")


def test_commute_scripted_swap(spec3):
    """A scripted commutation produces exactly the swapped grid."""
    moved = apply_script(spec3, "commute cols 1\n")
    expect_x = set()
    for (r, c) in spec3.x_cells:
        if c == 1:
            expect_x.add((r, 2))
        elif c == 2:
            expect_x.add((r, 1))
        else:
            expect_x.add((r, c))
    assert moved.x_cells == expect_x
    swapped_o = tuple({1: 2, 2: 1}.get(c, c) for c in spec3.o_col)
    assert moved.o_col == swapped_o
