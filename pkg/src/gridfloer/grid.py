"""Grid diagram data model, text format, validity rules.

A grid diagram is an n x n array of cells, each empty or holding a single
X or O marker.  There is exactly one O per row; O's may carry a star, which
marks them as graph vertices.  Rows are indexed 0..n-1 from the *bottom*,
columns 0..n-1 from the left; cell (r, c) occupies the unit square
[c, c+1] x [r, r+1] and its marker sits at the center (c + 1/2, r + 1/2).

The text format puts the top row first for readability; see ``parse_grid``.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class GridFormatError(ValueError):
    """Raised when grid text cannot be parsed (distinct from rule violations)."""


GRID_CHARS = frozenset(".XO*")


@dataclass(frozen=True)
class Marker:
    """A single X or O in the grid.

    O indices list all starred O's before unstarred ones (each group by row);
    X indices run by (row, col).
    """

    kind: str  # "X" or "O"
    row: int
    col: int
    starred: bool = False
    index: int = 0

    @property
    def cell(self) -> tuple[int, int]:
        return (self.row, self.col)

    @property
    def center(self) -> tuple[float, float]:
        """Planar position of the marker point (half-integer coordinates)."""
        return (self.col + 0.5, self.row + 0.5)


@dataclass(frozen=True)
class GridDiagram:
    """An n x n grid diagram.

    o_col maps each row to the column of that row's O (one O per row is
    structural; one O per *column* is a validation rule).  x_cells is the set
    of (row, col) cells carrying an X, and starred is the set of rows whose
    O carries a star.
    """

    n: int
    o_col: tuple[int, ...]
    x_cells: frozenset[tuple[int, int]]
    starred: frozenset[int]

    def __post_init__(self):
        n = self.n
        if n < 1:
            raise ValueError("grid size must be >= 1")
        if len(self.o_col) != n or any(not (0 <= c < n) for c in self.o_col):
            raise ValueError("o_col must assign one in-range column per row")
        if any(not (0 <= r < n and 0 <= c < n) for r, c in self.x_cells):
            raise ValueError("x_cells out of range")
        if any(not (0 <= r < n) for r in self.starred):
            raise ValueError("starred rows out of range")

    # -- marker views -------------------------------------------------------

    def o_markers(self) -> tuple[Marker, ...]:
        """All O's, starred first, each group sorted by row."""
        starred = [r for r in range(self.n) if r in self.starred]
        plain = [r for r in range(self.n) if r not in self.starred]
        out = []
        for i, r in enumerate(starred + plain):
            out.append(Marker("O", r, self.o_col[r], r in self.starred, i))
        return tuple(out)

    def x_markers(self) -> tuple[Marker, ...]:
        cells = sorted(self.x_cells)
        return tuple(Marker("X", r, c, False, j) for j, (r, c) in enumerate(cells))

    def markers(self) -> tuple[Marker, ...]:
        return self.o_markers() + self.x_markers()

    def o_index_of_row(self, row: int) -> int:
        """Index of the O in the given row, under the starred-first numbering."""
        for m in self.o_markers():
            if m.row == row:
                return m.index
        raise KeyError(row)

    def row_of_o_index(self, index: int) -> int:
        return self.o_markers()[index].row

    # -- per-line counts ----------------------------------------------------

    def x_count_in_row(self, r: int) -> int:
        return sum(1 for (rr, _) in self.x_cells if rr == r)

    def x_count_in_col(self, c: int) -> int:
        return sum(1 for (_, cc) in self.x_cells if cc == c)

    def o_row_of_col(self, c: int) -> int | None:
        """Row of the O in column c, or None if that column has no O."""
        for r in range(self.n):
            if self.o_col[r] == c:
                return r
        return None


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    cells: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...] = field(default=())


def parse_grid(text: str) -> GridDiagram:
    """Parse the grid text format.

    Line 1 is the decimal grid size n; lines 2..n+1 give the rows top first,
    exactly n characters each from ``. X O *`` ('*' is a starred O).  Parsing
    only builds the diagram; rule checking is done separately by ``validate``.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    if not lines:
        raise GridFormatError("empty input")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise GridFormatError(f"malformed size line: {lines[0]!r}") from None
    if n < 1:
        raise GridFormatError(f"grid size must be positive, got {n}")
    if len(lines) != n + 1:
        raise GridFormatError(f"expected {n} grid lines after the size line, got {len(lines) - 1}")

    o_col: list[int | None] = [None] * n
    x_cells = set()
    starred = set()
    for i, line in enumerate(lines[1:]):
        r = n - 1 - i  # top row first in the file
        if len(line) != n:
            raise GridFormatError(f"line {i + 2}: length {len(line)} != {n}")
        for c, ch in enumerate(line):
            if ch not in GRID_CHARS:
                raise GridFormatError(f"line {i + 2}: illegal character {ch!r}")
            if ch == ".":
                continue
            if ch == "X":
                x_cells.add((r, c))
            else:
                if o_col[r] is not None:
                    raise GridFormatError(f"line {i + 2}: more than one O in row {r}")
                o_col[r] = c
                if ch == "*":
                    starred.add(r)
    missing = [r for r in range(n) if o_col[r] is None]
    if missing:
        raise GridFormatError(f"rows without an O: {missing}")
    return GridDiagram(n, tuple(o_col), frozenset(x_cells), frozenset(starred))


def render_grid(g: GridDiagram) -> str:
    """Inverse of parse_grid; ends with a trailing newline."""
    lines = [str(g.n)]
    for r in range(g.n - 1, -1, -1):
        row = []
        for c in range(g.n):
            if g.o_col[r] == c:
                row.append("*" if r in g.starred else "O")
            elif (r, c) in g.x_cells:
                row.append("X")
            else:
                row.append(".")
        lines.append("".join(row))
    return "\n".join(lines) + "\n"


def validate(g: GridDiagram) -> ValidationReport:
    """Check all grid diagram rules; failures are reported, never raised."""
    violations: list[Violation] = []

    # One O per column (one per row is structural).
    seen: dict[int, list[int]] = {}
    for r, c in enumerate(g.o_col):
        seen.setdefault(c, []).append(r)
    for c, rows in sorted(seen.items()):
        if len(rows) > 1:
            violations.append(Violation(
                "o-permutation",
                f"column {c} holds {len(rows)} O's",
                tuple((r, c) for r in rows),
            ))

    # No cell holds both an X and an O.
    for r in range(g.n):
        cell = (r, g.o_col[r])
        if cell in g.x_cells:
            violations.append(Violation(
                "xo-overlap", f"cell {cell} holds both an X and an O", (cell,)))

    # A row or column whose X count differs from 1 must have a starred O.
    for r in range(g.n):
        if g.x_count_in_row(r) != 1 and r not in g.starred:
            violations.append(Violation(
                "starring",
                f"row {r} has {g.x_count_in_row(r)} X's but its O is not starred",
                ((r, g.o_col[r]),),
            ))
    for c in range(g.n):
        if g.x_count_in_col(c) != 1:
            rows = [r for r in range(g.n) if g.o_col[r] == c]
            for r in rows:
                if r not in g.starred:
                    violations.append(Violation(
                        "starring",
                        f"column {c} has {g.x_count_in_col(c)} X's but its O is not starred",
                        ((r, c),),
                    ))

    # Every connected component needs a starred O.
    for comp in connected_components(g):
        if not any(m.kind == "O" and m.starred for m in comp):
            cells = tuple(sorted(m.cell for m in comp))
            violations.append(Violation(
                "component-star", "connected component has no starred O", cells))

    return ValidationReport(not violations, tuple(violations))


def connected_components(g: GridDiagram) -> list[frozenset[Marker]]:
    """Partition of all markers under the share-a-row-or-column relation."""
    markers = g.markers()
    parent = list(range(len(markers)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    by_row: dict[int, list[int]] = {}
    by_col: dict[int, list[int]] = {}
    for i, m in enumerate(markers):
        by_row.setdefault(m.row, []).append(i)
        by_col.setdefault(m.col, []).append(i)
    for group in list(by_row.values()) + list(by_col.values()):
        for other in group[1:]:
            union(group[0], other)

    comps: dict[int, list[Marker]] = {}
    for i, m in enumerate(markers):
        comps.setdefault(find(i), []).append(m)
    out = [frozenset(v) for v in comps.values()]
    out.sort(key=lambda s: min(m.cell for m in s))
    return out


def is_saturated(g: GridDiagram) -> bool:
    """True iff every row and every column holds at least one X."""
    rows = {r for r, _ in g.x_cells}
    cols = {c for _, c in g.x_cells}
    return len(rows) == g.n and len(cols) == g.n
