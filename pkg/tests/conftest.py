"""Shared fixtures: the grid corpus used across the suite."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gridfloer import moves, parse_grid

DATA = Path(__file__).parent / "data"

# Saturated corpus, n = 2..6: unknot, the two-vertex 3x3, a theta graph, a
# two-component grid, knots, a 2-in-2-out vertex, plus stabilized variants.
SATURATED_NAMES = [
    "unknot2",
    "spec3",
    "theta4",
    "two_unknots4",
    "vertex22_5",
    "knot5",
    "flock5",
    "twocomp6",
    "knot6",
]


def load(name: str):
    return parse_grid((DATA / f"{name}.grid").read_text())


def saturated_corpus():
    grids = [(name, load(name)) for name in SATURATED_NAMES]
    spec3 = load("spec3")
    grids.append(("spec3_stab4", moves.stabilize(spec3, 0, 1, "above")))
    theta4 = load("theta4")
    grids.append(("theta5_stab", moves.stabilize(theta4, 0, 2, "above")))
    return grids


CORPUS = saturated_corpus()
SMALL_CORPUS = [(n, g) for n, g in CORPUS if g.n <= 4]


@pytest.fixture(params=CORPUS, ids=[n for n, _ in CORPUS])
def corpus_grid(request):
    return request.param[1]


@pytest.fixture(params=SMALL_CORPUS, ids=[n for n, _ in SMALL_CORPUS])
def small_grid(request):
    return request.param[1]


@pytest.fixture
def unknot2():
    return load("unknot2")


@pytest.fixture
def spec3():
    return load("spec3")


@pytest.fixture
def theta4():
    return load("theta4")


def grid_text(name: str) -> str:
    return (DATA / f"{name}.grid").read_text()
