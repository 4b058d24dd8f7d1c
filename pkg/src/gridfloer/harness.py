"""Randomized invariance harness.

Each trial applies a random legal move sequence to a grid, recomputes the
hat homology, and checks that the result matches the baseline after one
translation of the Alexander grading (the Maslov grading is absolute).  The
Euler characteristics must agree up to units.  Because every move rebuilds
the spatial graph with its own edge ordering, markers are tracked through
each move and edges of the moved grid are matched to baseline edges via the
surviving X's; that correspondence transports Alexander classes back into
the baseline coordinates.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import moves
from .alexpoly import GroupRingPoly, equal_up_to_units, euler_characteristic, hat_dims
from .grid import GridDiagram, render_grid
from .homology import BigradedDims, tilde_homology
from .spatial import H1Group, SpatialGraphModel, h1_group, trace_graph


class CorrespondenceError(RuntimeError):
    """The moved grid's graph no longer matches the original one."""


def edge_correspondence(
    sg_old: SpatialGraphModel,
    sg_new: SpatialGraphModel,
    marker_map: dict,
) -> tuple[int, ...]:
    """Map each edge of sg_new to its edge in sg_old through one move.

    Every edge of the moved grid contains at least one X that survived the
    move (a stabilization's fresh X shares its edge with the chosen X), so
    following any surviving X identifies the edge; all surviving X's of an
    edge must agree, the map must be a bijection, and endpoints must match
    under the vertex correspondence.
    """
    if len(sg_old.edges) != len(sg_new.edges):
        raise CorrespondenceError("edge counts differ")
    inverse = {v: k for k, v in marker_map.items()}

    old_x_index = {m.cell: m.index for m in sg_old.grid.x_markers()}
    new_x_cells = {m.index: m.cell for m in sg_new.grid.x_markers()}
    old_vertex_of_cell = {m.cell: i for i, m in enumerate(sg_old.vertices)}

    vertex_map = {}
    for v_new, marker in enumerate(sg_new.vertices):
        pre = inverse.get(("O", marker.row, marker.col))
        if pre is None:
            raise CorrespondenceError("a vertex O has no preimage")
        vertex_map[v_new] = old_vertex_of_cell[(pre[1], pre[2])]

    out = []
    for e_new, edge in enumerate(sg_new.edges):
        hits = set()
        for xi in edge.xs:
            r, c = new_x_cells[xi]
            pre = inverse.get(("X", r, c))
            if pre is not None:
                hits.add(sg_old.edge_of_x(old_x_index[(pre[1], pre[2])]))
        if len(hits) != 1:
            raise CorrespondenceError(f"edge {e_new} maps to {sorted(hits)}")
        e_old = hits.pop()
        old_edge = sg_old.edges[e_old]
        if (vertex_map[edge.source], vertex_map[edge.target]) != (
            old_edge.source, old_edge.target):
            raise CorrespondenceError(f"edge {e_new} endpoints changed")
        out.append(e_old)
    if sorted(out) != list(range(len(sg_old.edges))):
        raise CorrespondenceError("edge map is not a bijection")
    return tuple(out)


def transport_key(h: tuple[int, ...], edge_map: tuple[int, ...], group_old: H1Group):
    """Rewrite an Alexander class from moved-grid coordinates to baseline ones."""
    vec = [0] * len(edge_map)
    for i, v in enumerate(h):
        vec[edge_map[i]] += v
    return group_old.reduce(vec).coeffs


def transport_dims(dims: BigradedDims, edge_map, group_old: H1Group) -> BigradedDims:
    out: dict = {}
    for (h, m), d in dims.dims.items():
        key = (transport_key(h, edge_map, group_old), m)
        out[key] = out.get(key, 0) + d
    return BigradedDims(out)


def transport_poly(p: GroupRingPoly, edge_map, group_old: H1Group) -> GroupRingPoly:
    acc: dict = {}
    for h, c in p.coeffs:
        k = transport_key(h, edge_map, group_old)
        acc[k] = acc.get(k, 0) + c
    return GroupRingPoly.from_dict(acc)


def find_shift(base: BigradedDims, other: BigradedDims, group: H1Group):
    """The translation delta with other = base shifted by delta, or None."""
    if base.total() != other.total():
        return None
    if not base.dims:
        return group.zero().coeffs
    m_star = min(m for (_, m) in base.dims)
    base_level = sorted(h for (h, m) in base.dims if m == m_star)
    other_level = sorted(h for (h, m) in other.dims if m == m_star)
    if len(base_level) != len(other_level):
        return None
    anchor = base_level[0]
    for h in other_level:
        delta = tuple(a - b for a, b in zip(h, anchor))
        if base.translated(delta, group) == other:
            return group.reduce(delta).coeffs
    return None


def random_move(g: GridDiagram, rng: random.Random, max_n: int) -> moves.MoveSpec:
    """Sample one legal move: cyclic 40%, commutation 30%, stabilization 20%,
    destabilization 10%, falling back to cyclic when a kind is unavailable."""
    n = g.n
    roll = rng.random()
    if roll < 0.4:
        kind = "cyclic"
    elif roll < 0.7:
        kind = "commute"
    elif roll < 0.9:
        kind = "stab"
    else:
        kind = "destab"

    if kind == "commute":
        pairs = [
            (axis, i)
            for axis in ("rows", "cols")
            for i in range(n)
            if moves.commutation_valid(g, axis, i)
        ]
        if pairs:
            axis, i = rng.choice(pairs)
            return moves.MoveSpec("commute", axis=axis, index=i)
        kind = "cyclic"
    if kind == "stab" and n < max_n:
        r, c = rng.choice(sorted(g.x_cells))
        if rng.random() < 0.5:
            placement = rng.choice(["above", "below"])
            return moves.MoveSpec("stab", axis="row", row=r, col=c, placement=placement)
        placement = rng.choice(["right", "left"])
        return moves.MoveSpec("stab", axis="col", row=r, col=c, placement=placement)
    if kind == "destab":
        patterns = moves.find_destab_patterns(g)
        if patterns:
            r, c = rng.choice(patterns)
            return moves.MoveSpec("destab", row=r, col=c)
        kind = "cyclic"
    axis = rng.choice(["rows", "cols"])
    return moves.MoveSpec("cyclic", axis=axis, amount=rng.randrange(1, n) if n > 1 else 0)


@dataclass
class TrialResult:
    trial: int
    ok: bool
    moves: list[str]
    final_n: int
    shift: list[int] | None
    chi_ok: bool
    error: str = ""

    def to_json_obj(self) -> dict:
        return {
            "trial": self.trial,
            "ok": self.ok,
            "moves": self.moves,
            "final_n": self.final_n,
            "shift": self.shift,
            "chi_ok": self.chi_ok,
            "error": self.error,
        }


@dataclass
class _Baseline:
    grid: GridDiagram
    sg: SpatialGraphModel
    group: H1Group
    hat: BigradedDims
    chi: GroupRingPoly
    cache: dict = field(default_factory=dict)


def _baseline(g: GridDiagram) -> _Baseline:
    sg = trace_graph(g)
    group = h1_group(sg)
    hat = hat_dims(tilde_homology(g), sg)
    chi = euler_characteristic(hat, group)
    return _Baseline(g, sg, group, hat, chi)


def _hat_of(grid: GridDiagram, cache: dict):
    key = render_grid(grid)
    if key not in cache:
        sg = trace_graph(grid)
        cache[key] = (sg, hat_dims(tilde_homology(grid), sg))
    return cache[key]


def run_trial(base: _Baseline, trial: int, seed, max_moves: int, max_n: int) -> TrialResult:
    rng = random.Random(f"{seed}:{trial}")
    length = rng.randint(1, max_moves)
    g = base.grid
    sg = base.sg
    edge_map = tuple(range(len(sg.edges)))  # moved edge -> baseline edge
    script: list[str] = []
    try:
        for _ in range(length):
            spec = random_move(g, rng, max_n)
            result = moves.apply_move(g, spec)
            script.append(moves.format_move(spec))
            sg_next = trace_graph(result.grid)
            step_map = edge_correspondence(sg, sg_next, result.marker_map)
            edge_map = tuple(edge_map[step_map[i]] for i in range(len(step_map)))
            g, sg = result.grid, sg_next
        # Tracing is deterministic, so the cached spatial graph of the final
        # grid has the same edge order as sg and edge_map applies directly.
        sg_final, hat = _hat_of(g, base.cache)
        moved = transport_dims(hat, edge_map, base.group)
        shift = find_shift(base.hat, moved, base.group)
        chi_moved = euler_characteristic(hat, h1_group(sg_final))
        chi_ok = equal_up_to_units(
            transport_poly(chi_moved, edge_map, base.group), base.chi, base.group)
        ok = shift is not None and chi_ok
        return TrialResult(trial, ok, script, g.n, list(shift) if shift else None, chi_ok)
    except Exception as exc:  # a failed trial must surface its script
        return TrialResult(trial, False, script, g.n, None, False, f"{type(exc).__name__}: {exc}")


_WORKER_BASE: dict = {}


def _worker_init(grid_text: str) -> None:
    from .grid import parse_grid

    _WORKER_BASE["base"] = _baseline(parse_grid(grid_text))


def _run_trial_remote(args):
    trial, seed, max_moves, max_n = args
    return run_trial(_WORKER_BASE["base"], trial, seed, max_moves, max_n)


def invariance_report(
    g: GridDiagram,
    trials: int,
    seed,
    max_moves: int = 8,
    max_n: int = 9,
    workers: int = 1,
) -> dict:
    """Run seeded trials; any failure carries the offending move script."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    base = _baseline(g)
    if workers > 1 and trials > 1:
        text = render_grid(g)
        args = [(t, seed, max_moves, max_n) for t in range(trials)]
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_worker_init, initargs=(text,)
        ) as pool:
            results = list(pool.map(
                _run_trial_remote, args, chunksize=max(1, trials // (4 * workers))))
    else:
        results = [run_trial(base, t, seed, max_moves, max_n) for t in range(trials)]
    passed = sum(1 for r in results if r.ok)
    return {
        "trials": trials,
        "seed": seed,
        "max_moves": max_moves,
        "passed": passed,
        "failed": trials - passed,
        "baseline_hat_total": base.hat.total(),
        "results": [r.to_json_obj() for r in results],
    }
