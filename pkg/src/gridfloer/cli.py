"""Command-line front end.

Subcommands: validate, graph, homology, alexander, move, invariance.  All
machine outputs are JSON on stdout (schemas ship in gridfloer/schemas/);
--format text switches to a human-readable rendering.  Outputs are
deterministic for fixed input bytes, seed, and flags.

Grids larger than the size guard (default 9, where the generator count is
9! = 362880) are refused unless --force is given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import report as report_mod
from .alexpoly import DivisionError, euler_characteristic, hat_dims
from .grid import GridFormatError, is_saturated, parse_grid, render_grid, validate
from .harness import invariance_report
from .homology import tilde_homology
from .moves import MoveError, apply_script
from .spatial import h1_group, trace_graph

DEFAULT_MAX_GRID = 9

MOVE_GRAMMAR = """\
move script grammar (one move per line, '#' comments):
  cyclic rows <k>              cyclically shift rows by k (k may be negative)
  cyclic cols <k>
  commute rows <i>             exchange rows i and i+1 (mod n) when legal
  commute cols <i>
  stab row <r> col <c> [above|below]   row stabilization at the X in (r, c)
  stab col <c> row <r> [right|left]    column stabilization at the X in (r, c)
  destab <r> <c>               destabilization at the O in (r, c)
Rows count from the bottom (row 0), columns from the left (col 0)."""


def _emit(obj, fmt: str, text_renderer) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")
    else:
        sys.stdout.write(text_renderer(obj))


def _load_grid(args) -> "GridDiagram":
    with open(args.grid, "r") as fh:
        g = parse_grid(fh.read())
    if g.n > args.max_grid and not args.force:
        raise SystemExit(
            f"error: grid size {g.n} exceeds the guard ({args.max_grid}); "
            f"pass --force to proceed")
    return g


def _require_computable(g) -> None:
    rep = validate(g)
    if not rep.ok:
        msgs = "; ".join(v.message for v in rep.violations)
        raise SystemExit(f"error: invalid grid: {msgs}")
    if not is_saturated(g):
        raise SystemExit("error: grid is not saturated (needs an X in every row and column)")


def cmd_validate(args) -> int:
    with open(args.grid, "r") as fh:
        try:
            g = parse_grid(fh.read())
        except GridFormatError as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return 2
    rep = validate(g)
    sat = is_saturated(g)
    obj = {
        "ok": rep.ok,
        "saturated": sat,
        "violations": [
            {"rule": v.rule, "message": v.message, "cells": [list(c) for c in v.cells]}
            for v in rep.violations
        ],
    }

    def text(o):
        lines = [f"valid: {o['ok']}", f"saturated: {o['saturated']}"]
        for v in o["violations"]:
            lines.append(f"  [{v['rule']}] {v['message']} at {v['cells']}")
        return "\n".join(lines) + "\n"

    _emit(obj, args.format, text)
    if rep.ok and not sat:
        print("warning: grid is valid but not saturated; homology commands will refuse it",
              file=sys.stderr)
    return 0 if rep.ok else 1


def cmd_graph(args) -> int:
    g = _load_grid(args)
    rep = validate(g)
    if not rep.ok:
        raise SystemExit(f"error: invalid grid: {rep.violations[0].message}")
    sg = trace_graph(g)
    group = h1_group(sg)
    obj = {
        "n": g.n,
        "vertices": [
            {"index": i, "row": v.row, "col": v.col}
            for i, v in enumerate(sg.vertices)
        ],
        "edges": [
            {"index": i, "source": e.source, "target": e.target,
             "interior_o_count": e.n_e, "x_count": len(e.xs)}
            for i, e in enumerate(sg.edges)
        ],
        "relation_matrix": [list(r) for r in group.relations],
        "hnf": [list(r) for r in group.hnf],
    }

    def text(o):
        lines = [f"grid size {o['n']}",
                 f"vertices: {len(o['vertices'])}  edges: {len(o['edges'])}"]
        for e in o["edges"]:
            lines.append(f"  e{e['index']}: v{e['source']} -> v{e['target']}"
                         f"  interior O's: {e['interior_o_count']}")
        lines.append(f"relation matrix: {o['relation_matrix']}")
        lines.append(f"HNF: {o['hnf']}")
        return "\n".join(lines) + "\n"

    _emit(obj, args.format, text)
    return 0


def cmd_homology(args) -> int:
    g = _load_grid(args)
    _require_computable(g)
    dims = tilde_homology(g, workers=args.workers)
    if args.flavor == "hat":
        sg = trace_graph(g)
        try:
            dims = hat_dims(dims, sg)
        except DivisionError as exc:
            print(f"error: tensor division failed: {exc}", file=sys.stderr)
            return 3
    obj = dims.to_json_obj()

    def text(o):
        lines = [f"{args.flavor} homology, total dimension {sum(e['dim'] for e in o)}"]
        for e in o:
            lines.append(f"  A={e['alexander']} M={e['maslov']}: {e['dim']}")
        return "\n".join(lines) + "\n"

    _emit(obj, args.format, text)
    if args.report_dir:
        report_mod.write_homology_report(dims, args.flavor, args.report_dir)
    return 0


def cmd_alexander(args) -> int:
    g = _load_grid(args)
    _require_computable(g)
    sg = trace_graph(g)
    try:
        hat = hat_dims(tilde_homology(g), sg)
    except DivisionError as exc:
        print(f"error: tensor division failed: {exc}", file=sys.stderr)
        return 3
    chi = euler_characteristic(hat, h1_group(sg))
    obj = chi.to_json_obj()

    def text(o):
        if not o["chi"]:
            return "chi = 0\n"
        terms = [f"{t['coeff']:+d}*t^{t['h']}" for t in o["chi"]]
        return "chi = " + " ".join(terms) + "\n"

    _emit(obj, args.format, text)
    return 0


def cmd_move(args) -> int:
    g = _load_grid(args)
    with open(args.script, "r") as fh:
        script = fh.read()
    try:
        out = apply_script(g, script)
    except MoveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render_grid(out))
    return 0


def cmd_invariance(args) -> int:
    g = _load_grid(args)
    _require_computable(g)
    rep = invariance_report(
        g, trials=args.trials, seed=args.seed, max_moves=args.max_moves,
        max_n=args.max_grid, workers=args.workers)

    def text(o):
        lines = [f"invariance: {o['passed']}/{o['trials']} trials passed (seed {o['seed']})"]
        for r in o["results"]:
            mark = "ok  " if r["ok"] else "FAIL"
            lines.append(f"  [{mark}] trial {r['trial']}: n={r['final_n']} "
                         f"shift={r['shift']} moves: {'; '.join(r['moves'])}")
        return "\n".join(lines) + "\n"

    _emit(rep, args.format, text)
    if args.report_dir:
        report_mod.write_invariance_report(rep, args.report_dir)
    if rep["failed"]:
        for r in rep["results"]:
            if not r["ok"]:
                print(f"invariance failure (trial {r['trial']}): "
                      f"{'; '.join(r['moves'])} -- {r.get('error', '')}",
                      file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridfloer",
        description="Graph Floer homology of spatial graphs from grid diagrams",
        epilog=MOVE_GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("grid", help="grid file (size line, then rows top first)")
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--max-grid", type=int, default=DEFAULT_MAX_GRID,
                       help="refuse grids larger than this without --force")
        p.add_argument("--force", action="store_true",
                       help="override the grid size guard")
        p.add_argument("--workers", type=int,
                       default=int(os.environ.get("GRIDFLOER_WORKERS", "1")),
                       help="parallel workers (env GRIDFLOER_WORKERS)")

    p = sub.add_parser("validate", help="check the grid diagram rules")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("graph", help="trace the spatial graph and its H1 presentation")
    common(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("homology", help="bigraded homology dimensions")
    common(p)
    p.add_argument("--flavor", choices=["tilde", "hat"], default="tilde")
    p.add_argument("--report-dir", help="also write a TSV and a figure here")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("alexander", help="graded Euler characteristic (normalized)")
    common(p)
    p.set_defaults(func=cmd_alexander)

    p = sub.add_parser("move", help="apply a move script and print the grid")
    common(p)
    p.add_argument("--script", required=True, help="move script file")
    p.set_defaults(func=cmd_move)

    p = sub.add_parser("invariance", help="randomized move invariance harness")
    common(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-moves", type=int, default=8,
                   help="maximum moves per trial")
    p.add_argument("--report-dir", help="also write a TSV and a figure here")
    p.set_defaults(func=cmd_invariance)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GridFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except SystemExit:
        raise
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
