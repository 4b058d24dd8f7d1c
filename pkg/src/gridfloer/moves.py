"""The graph grid moves: cyclic permutation, commutation', stabilization'.

Every move application also produces a marker correspondence (old marker
cell to new marker cell) so that callers can follow edges through a move
sequence; stabilization adds an O/X pair with no preimage and
destabilization removes one.

Commutation' of two adjacent lines is legal when the marker heights of the
two lines fit into two complementary closed arcs of the perpendicular
circle that overlap only at their two shared endpoints; heights used by
both lines are admitted only at those endpoints.

Stabilization' splits a row at a chosen X: the X moves to a new row of its
own, a new column directly right of it receives a fresh unstarred O next to
the X and a fresh X next to the remainder row's O column slot.  Column
stabilization is the transposed move.  Destabilization inverts the
canonical corner patterns.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grid import GridDiagram, is_saturated, validate


class MoveError(ValueError):
    """A move with out-of-range or inapplicable parameters."""


MarkerMap = dict  # (kind, row, col) -> (kind, row, col)


@dataclass(frozen=True)
class MoveSpec:
    kind: str  # cyclic | commute | stab | destab
    axis: str = ""  # rows | cols (cyclic, commute); row | col (stab)
    amount: int = 0  # cyclic shift
    index: int = 0  # commute line index
    row: int = 0
    col: int = 0
    placement: str = ""  # stab: above|below (rows), right|left (cols)


@dataclass(frozen=True)
class MoveResult:
    grid: GridDiagram
    marker_map: dict


def _markers_of(g: GridDiagram) -> list[tuple[str, int, int]]:
    out = [("O", r, g.o_col[r]) for r in range(g.n)]
    out += [("X", r, c) for (r, c) in sorted(g.x_cells)]
    return out


def _build(n, o_of_row: dict, x_cells, starred) -> GridDiagram:
    o_col = tuple(o_of_row[r] for r in range(n))
    return GridDiagram(n, o_col, frozenset(x_cells), frozenset(starred))


# -- cyclic permutation ------------------------------------------------------

def cyclic(g: GridDiagram, axis: str, k: int) -> GridDiagram:
    return cyclic_with_map(g, axis, k).grid


def cyclic_with_map(g: GridDiagram, axis: str, k: int) -> MoveResult:
    n = g.n
    k %= n
    if axis == "rows":
        def move(r, c):
            return ((r + k) % n, c)
    elif axis == "cols":
        def move(r, c):
            return (r, (c + k) % n)
    else:
        raise MoveError(f"cyclic axis must be rows or cols, got {axis!r}")
    o_of_row = {}
    starred = set()
    for r in range(n):
        nr, nc = move(r, g.o_col[r])
        o_of_row[nr] = nc
        if r in g.starred:
            starred.add(nr)
    x_cells = {move(r, c) for (r, c) in g.x_cells}
    marker_map = {("O", r, g.o_col[r]): ("O", *move(r, g.o_col[r])) for r in range(n)}
    marker_map.update({("X", r, c): ("X", *move(r, c)) for (r, c) in g.x_cells})
    return MoveResult(_build(n, o_of_row, x_cells, starred), marker_map)


# -- commutation' ------------------------------------------------------------

def _line_heights(g: GridDiagram, axis: str, index: int) -> list[int]:
    """Doubled cyclic heights of the markers on one line (row or column)."""
    if axis == "cols":
        heights = [2 * r + 1 for (r, c) in g.x_cells if c == index]
        o_row = g.o_row_of_col(index)
        if o_row is not None:
            heights.append(2 * o_row + 1)
    else:
        heights = [2 * c + 1 for (r, c) in g.x_cells if r == index]
        heights.append(2 * g.o_col[index] + 1)
    return heights


def commutation_valid(g: GridDiagram, axis: str, index: int) -> bool:
    """Can lines index and index+1 (cyclically) be exchanged?"""
    n = g.n
    if axis not in ("rows", "cols"):
        raise MoveError(f"commute axis must be rows or cols, got {axis!r}")
    if not (0 <= index < n):
        raise MoveError(f"line index {index} out of range")
    if n < 2:
        return False
    a = _line_heights(g, axis, index)
    b = _line_heights(g, axis, (index + 1) % n)
    size = 2 * n

    def in_arc(x: int, start: int, end: int) -> bool:
        return (x - start) % size <= (end - start) % size

    for p1 in range(size):
        for p2 in range(size):
            if p1 == p2:
                continue
            if all(in_arc(x, p1, p2) for x in a) and all(in_arc(x, p2, p1) for x in b):
                return True
    return False


def commute(g: GridDiagram, axis: str, index: int) -> GridDiagram:
    return commute_with_map(g, axis, index).grid


def commute_with_map(g: GridDiagram, axis: str, index: int) -> MoveResult:
    if not commutation_valid(g, axis, index):
        raise MoveError(f"commutation of {axis} {index},{(index + 1) % g.n} is not legal")
    n = g.n
    j = (index + 1) % n

    def move(r, c):
        if axis == "cols":
            if c == index:
                return (r, j)
            if c == j:
                return (r, index)
            return (r, c)
        if r == index:
            return (j, c)
        if r == j:
            return (index, c)
        return (r, c)

    o_of_row = {}
    starred = set()
    for r in range(n):
        nr, nc = move(r, g.o_col[r])
        o_of_row[nr] = nc
        if r in g.starred:
            starred.add(nr)
    x_cells = {move(r, c) for (r, c) in g.x_cells}
    marker_map = {("O", r, g.o_col[r]): ("O", *move(r, g.o_col[r])) for r in range(n)}
    marker_map.update({("X", r, c): ("X", *move(r, c)) for (r, c) in g.x_cells})
    return MoveResult(_build(n, o_of_row, x_cells, starred), marker_map)


# -- stabilization' ----------------------------------------------------------

def stabilize(g: GridDiagram, row: int, col: int, placement: str = "above") -> GridDiagram:
    return stabilize_with_map(g, row, col, placement).grid


def stabilize_with_map(g: GridDiagram, row: int, col: int, placement: str = "above") -> MoveResult:
    """Row stabilization' at the X in cell (row, col)."""
    if (row, col) not in g.x_cells:
        raise MoveError(f"no X at {(row, col)} to stabilize at")
    if placement not in ("above", "below"):
        raise MoveError(f"row stabilization placement must be above or below, got {placement!r}")
    n = g.n
    new_col = col + 1
    new_x_row = row + 1 if placement == "above" else row
    remainder = row if placement == "above" else row + 1

    def cmap(c: int) -> int:
        return c if c <= col else c + 1

    def rmap(r: int) -> int:
        # Rows strictly above the split shift up; the split row itself goes
        # to the remainder row.
        if r < row:
            return r
        if r == row:
            return remainder
        return r + 1

    o_of_row = {}
    starred = set()
    marker_map: MarkerMap = {}
    for r in range(n):
        nr, nc = rmap(r), cmap(g.o_col[r])
        o_of_row[nr] = nc
        if r in g.starred:
            starred.add(nr)
        marker_map[("O", r, g.o_col[r])] = ("O", nr, nc)
    o_of_row[new_x_row] = new_col

    x_cells = set()
    for (r, c) in g.x_cells:
        if (r, c) == (row, col):
            nr, nc = new_x_row, col
        else:
            nr, nc = rmap(r), cmap(c)
        x_cells.add((nr, nc))
        marker_map[("X", r, c)] = ("X", nr, nc)
    x_cells.add((remainder, new_col))
    return MoveResult(_build(n + 1, o_of_row, x_cells, starred), marker_map)


def stabilize_col(g: GridDiagram, row: int, col: int, placement: str = "right") -> GridDiagram:
    return stabilize_col_with_map(g, row, col, placement).grid


def stabilize_col_with_map(g: GridDiagram, row: int, col: int, placement: str = "right") -> MoveResult:
    """Column stabilization' at the X in cell (row, col); the transposed move."""
    if (row, col) not in g.x_cells:
        raise MoveError(f"no X at {(row, col)} to stabilize at")
    if placement not in ("right", "left"):
        raise MoveError(f"column stabilization placement must be right or left, got {placement!r}")
    n = g.n
    new_row = row + 1
    new_x_col = col + 1 if placement == "right" else col
    remainder = col if placement == "right" else col + 1

    def rmap(r: int) -> int:
        return r if r <= row else r + 1

    def cmap(c: int) -> int:
        if c < col:
            return c
        if c == col:
            return remainder
        return c + 1

    o_of_row = {}
    starred = set()
    marker_map: MarkerMap = {}
    for r in range(n):
        nr, nc = rmap(r), cmap(g.o_col[r])
        o_of_row[nr] = nc
        if r in g.starred:
            starred.add(nr)
        marker_map[("O", r, g.o_col[r])] = ("O", nr, nc)
    o_of_row[new_row] = new_x_col

    x_cells = set()
    for (r, c) in g.x_cells:
        if (r, c) == (row, col):
            nr, nc = row, new_x_col
        else:
            nr, nc = rmap(r), cmap(c)
        x_cells.add((nr, nc))
        marker_map[("X", r, c)] = ("X", nr, nc)
    x_cells.add((new_row, remainder))
    return MoveResult(_build(n + 1, o_of_row, x_cells, starred), marker_map)


def find_destab_patterns(g: GridDiagram) -> list[tuple[int, int]]:
    """Positions (row, col) of O's where destabilize applies."""
    out = []
    for r in range(g.n):
        for c in range(g.n):
            if _destab_pattern(g, r, c) is not None:
                out.append((r, c))
    return out


def _destab_pattern(g: GridDiagram, R: int, C: int):
    """Corner pattern around an O at (R, C), or None.

    The O must be unstarred with exactly one X in its row (directly left or
    right) and one in its column (directly below or above); one of the two
    X's survives the move and slides into the corner cell diagonally across
    the O, which must be free.  Returns (moving X cell, its target cell,
    removed X cell).
    """
    n = g.n
    if n < 2 or not (0 <= R < n) or not (0 <= C < n):
        return None
    if g.o_col[R] != C or R in g.starred:
        return None
    if g.x_count_in_row(R) != 1 or g.x_count_in_col(C) != 1:
        return None
    if C >= 1 and (R, C - 1) in g.x_cells:
        row_x, side = (R, C - 1), -1
    elif C + 1 < n and (R, C + 1) in g.x_cells:
        row_x, side = (R, C + 1), +1
    else:
        return None
    if R >= 1 and (R - 1, C) in g.x_cells:
        col_x = (R - 1, C)
    elif R + 1 < n and (R + 1, C) in g.x_cells:
        col_x = (R + 1, C)
    else:
        return None
    target = (col_x[0], C + side)
    if target in g.x_cells or g.o_col[target[0]] == target[1]:
        return None
    if side < 0:
        # The row X survives and joins the column X's row (row merge).
        return row_x, target, col_x
    # The column X survives and joins the row X's column (column merge).
    return col_x, target, row_x


def destabilize(g: GridDiagram, row: int, col: int) -> GridDiagram:
    return destabilize_with_map(g, row, col).grid


def destabilize_with_map(g: GridDiagram, row: int, col: int) -> MoveResult:
    """Inverse of a stabilization' whose new O sits at (row, col)."""
    pattern = _destab_pattern(g, row, col)
    if pattern is None:
        raise MoveError(f"no destabilization pattern at {(row, col)}")
    moving_x, target, removed_x = pattern
    n = g.n

    def rmap(r: int) -> int:
        return r if r < row else r - 1

    def cmap(c: int) -> int:
        return c if c < col else c - 1

    o_of_row = {}
    starred = set()
    marker_map: MarkerMap = {}
    for r in range(n):
        if r == row:
            continue  # the stabilization O disappears
        nr, nc = rmap(r), cmap(g.o_col[r])
        o_of_row[nr] = nc
        if r in g.starred:
            starred.add(nr)
        marker_map[("O", r, g.o_col[r])] = ("O", nr, nc)

    x_cells = set()
    for (r, c) in g.x_cells:
        if (r, c) == removed_x:
            continue  # the stabilization X disappears
        if (r, c) == moving_x:
            nr, nc = rmap(target[0]), cmap(target[1])
        else:
            nr, nc = rmap(r), cmap(c)
        x_cells.add((nr, nc))
        marker_map[("X", r, c)] = ("X", nr, nc)

    result = _build(n - 1, o_of_row, x_cells, starred)
    report = validate(result)
    if not report.ok:
        raise MoveError(f"destabilization at {(row, col)} breaks the grid: "
                        f"{report.violations[0].message}")
    return MoveResult(result, marker_map)


# -- move scripts ------------------------------------------------------------

def parse_move(line: str) -> MoveSpec:
    """One move per line; see the CLI help for the grammar."""
    parts = line.split()
    if not parts:
        raise MoveError("empty move line")
    kind = parts[0]
    try:
        if kind == "cyclic" and len(parts) == 3 and parts[1] in ("rows", "cols"):
            return MoveSpec("cyclic", axis=parts[1], amount=int(parts[2]))
        if kind == "commute" and len(parts) == 3 and parts[1] in ("rows", "cols"):
            return MoveSpec("commute", axis=parts[1], index=int(parts[2]))
        if kind == "stab" and len(parts) in (5, 6) and parts[1] == "row" and parts[3] == "col":
            placement = parts[5] if len(parts) == 6 else "above"
            return MoveSpec("stab", axis="row", row=int(parts[2]), col=int(parts[4]),
                            placement=placement)
        if kind == "stab" and len(parts) in (5, 6) and parts[1] == "col" and parts[3] == "row":
            placement = parts[5] if len(parts) == 6 else "right"
            return MoveSpec("stab", axis="col", row=int(parts[4]), col=int(parts[2]),
                            placement=placement)
        if kind == "destab" and len(parts) == 3:
            return MoveSpec("destab", row=int(parts[1]), col=int(parts[2]))
    except ValueError as exc:
        raise MoveError(f"bad move parameters in {line!r}: {exc}") from None
    raise MoveError(f"unrecognized move {line!r}")


def format_move(spec: MoveSpec) -> str:
    if spec.kind == "cyclic":
        return f"cyclic {spec.axis} {spec.amount:+d}"
    if spec.kind == "commute":
        return f"commute {spec.axis} {spec.index}"
    if spec.kind == "stab" and spec.axis == "row":
        return f"stab row {spec.row} col {spec.col} {spec.placement}"
    if spec.kind == "stab":
        return f"stab col {spec.col} row {spec.row} {spec.placement}"
    if spec.kind == "destab":
        return f"destab {spec.row} {spec.col}"
    raise MoveError(f"unknown move kind {spec.kind!r}")


def apply_move(g: GridDiagram, spec: MoveSpec) -> MoveResult:
    if spec.kind == "cyclic":
        return cyclic_with_map(g, spec.axis, spec.amount)
    if spec.kind == "commute":
        return commute_with_map(g, spec.axis, spec.index)
    if spec.kind == "stab" and spec.axis == "row":
        return stabilize_with_map(g, spec.row, spec.col, spec.placement)
    if spec.kind == "stab" and spec.axis == "col":
        return stabilize_col_with_map(g, spec.row, spec.col, spec.placement)
    if spec.kind == "destab":
        return destabilize_with_map(g, spec.row, spec.col)
    raise MoveError(f"unknown move kind {spec.kind!r}")


def apply_script(g: GridDiagram, text: str) -> GridDiagram:
    """Apply a move script, one move per line ('#' starts a comment)."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            spec = parse_move(line)
            g = apply_move(g, spec).grid
        except MoveError as exc:
            raise MoveError(f"line {lineno}: {exc}") from None
    return g


def preserves_grid_rules(g: GridDiagram, moved: GridDiagram) -> bool:
    """Moves keep validity and saturation; used as an internal tripwire."""
    return validate(moved).ok and (is_saturated(moved) == is_saturated(g))
