"""Graph tracing and the H1 presentation."""

from hypothesis import given, settings
from hypothesis import strategies as st

from gridfloer import (
    h1_group,
    h1_reduce,
    is_saturated,
    parse_grid,
    trace_graph,
    weight,
)
from gridfloer.spatial import H1Element, _hnf
from conftest import CORPUS, load


def test_trace_unknot(unknot2):
    sg = trace_graph(unknot2)
    assert len(sg.vertices) == 1
    assert len(sg.edges) == 1
    e = sg.edges[0]
    assert (e.source, e.target) == (0, 0)
    assert e.n_e == 1


def test_trace_spec3(spec3):
    sg = trace_graph(spec3)
    assert [(e.source, e.target, e.n_e) for e in sg.edges] == [
        (0, 1, 0),  # first X of v0's row, no interior O
        (0, 0, 1),  # the loop through the unstarred O
        (1, 0, 0),
    ]


def test_trace_one_step_edge():
    # X in a starred O's row whose column O is also starred: a 0-interior edge.
    g = load("two_unknots4")
    sg = trace_graph(g)
    assert all(e.n_e == 1 for e in sg.edges)
    g2 = parse_grid("2\nX*\n*X\n")
    sg2 = trace_graph(g2)
    assert all(e.n_e == 0 for e in sg2.edges)
    assert len(sg2.edges) == 2


def test_trace_covers_markers_once(corpus_grid):
    sg = trace_graph(corpus_grid)
    xs = [xi for e in sg.edges for xi in e.xs]
    assert sorted(xs) == list(range(len(corpus_grid.x_markers())))
    os = [oi for e in sg.edges for oi in e.interior_o]
    expected = [m.index for m in corpus_grid.o_markers() if not m.starred]
    assert sorted(os) == sorted(expected)


def test_sinkless_sourceless_iff_saturated():
    for name, g in CORPUS:
        assert trace_graph(g).is_sinkless_sourceless() == is_saturated(g)
    for name in ["unsat1", "unsat3"]:
        g = load(name)
        assert trace_graph(g).is_sinkless_sourceless() == is_saturated(g)


def test_h1_relations_spec3(spec3):
    group = h1_group(trace_graph(spec3))
    assert group.relations == ((-1, 0, 1), (1, 0, -1))
    assert group.rank == 2
    assert group.basis_element(0) == group.basis_element(2)


def test_h1_single_loop(unknot2):
    group = h1_group(trace_graph(unknot2))
    assert group.relations == ((0,),)
    assert group.hnf == ()
    assert group.rank == 1


def test_h1_in_in_out_relation(theta4):
    # v0 has in {e2}, out {e0, e1}: the relation is e2 - e0 - e1 = 0.
    sg = trace_graph(theta4)
    group = h1_group(sg)
    assert group.relations[0] == (-1, -1, 1)
    assert group.reduce((0, 0, 1)) == group.reduce((1, 1, 0))


def test_h1_reduce_properties(corpus_grid):
    group = h1_group(trace_graph(corpus_grid))
    zero = group.zero()
    assert h1_reduce(group, [0] * group.edge_count) == zero
    for row in group.relations:
        assert h1_reduce(group, row) == zero
    probe = tuple(range(1, group.edge_count + 1))
    red = h1_reduce(group, probe)
    assert h1_reduce(group, red) == red
    for row in group.relations:
        shifted = tuple(p + r for p, r in zip(probe, row))
        assert h1_reduce(group, shifted) == red


def test_vertex_relation_holds(corpus_grid):
    sg = trace_graph(corpus_grid)
    group = h1_group(sg)
    for v in range(len(sg.vertices)):
        incoming = [0] * group.edge_count
        outgoing = [0] * group.edge_count
        for ei in sg.in_edges(v):
            incoming[ei] += 1
        for ei in sg.out_edges(v):
            outgoing[ei] += 1
        assert group.reduce(incoming) == group.reduce(outgoing)


def test_rank_equals_first_betti_number(corpus_grid):
    sg = trace_graph(corpus_grid)
    group = h1_group(sg)
    # Component count of the abstract graph by union-find on vertices.
    parent = list(range(len(sg.vertices)))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for e in sg.edges:
        ra, rb = find(e.source), find(e.target)
        if ra != rb:
            parent[ra] = rb
    comps = len({find(v) for v in range(len(sg.vertices))})
    assert group.rank == len(sg.edges) - len(sg.vertices) + comps


def test_weights_spec3(spec3):
    sg = trace_graph(spec3)
    group = h1_group(sg)
    x_at = {m.cell: m for m in spec3.x_markers()}
    assert weight(sg, x_at[(0, 1)]) == group.basis_element(0)
    v0_marker = sg.vertices[0]
    assert weight(sg, v0_marker) == group.reduce((1, 1, 0))
    unstarred = [m for m in spec3.o_markers() if not m.starred][0]
    assert weight(sg, unstarred) == group.basis_element(1)


def test_weight_unknot_loop(unknot2):
    sg = trace_graph(unknot2)
    group = h1_group(sg)
    unstarred = [m for m in unknot2.o_markers() if not m.starred][0]
    assert weight(sg, unstarred) == group.basis_element(0)
    assert weight(sg, sg.vertices[0]) == group.basis_element(0)


# -- HNF unit behavior ---------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), max_size=4),
       st.lists(st.integers(-9, 9), min_size=3, max_size=3))
def test_hnf_reduction_is_canonical(rows, vec):
    hnf, pivots = _hnf([list(r) for r in rows], 3)

    def reduce(v):
        v = list(v)
        for row, p in zip(hnf, pivots):
            q = v[p] // row[p]
            for j in range(3):
                v[j] -= q * row[j]
        return tuple(v)

    red = reduce(vec)
    assert reduce(red) == red
    for row in rows:
        assert reduce([a + b for a, b in zip(vec, row)]) == red
        assert reduce([a - b for a, b in zip(vec, row)]) == red


def test_h1_element_arithmetic():
    a = H1Element((1, 2))
    b = H1Element((3, -1))
    assert (a + b).coeffs == (4, 1)
    assert (a - b).coeffs == (-2, 3)
    assert (-a).coeffs == (-1, -2)
    assert not a.is_zero() and H1Element((0, 0)).is_zero()
