"""Graph Floer homology of transverse spatial graphs from grid diagrams."""

from .grid import (
    GridDiagram,
    GridFormatError,
    Marker,
    ValidationReport,
    connected_components,
    is_saturated,
    parse_grid,
    render_grid,
    validate,
)
from .spatial import (
    H1Element,
    H1Group,
    SpatialGraphModel,
    h1_group,
    h1_reduce,
    trace_graph,
    weight,
)
from .gradings import Generator, GradingError, HalfInt, alexander, j_pairing, maslov, u_degree, winding
from .complexes import (
    Monomial,
    Rect,
    empty_rects,
    generators,
    minus_boundary,
    tilde_boundary,
    u_homotopy,
    verify_d_squared,
)
from .homology import BigradedDims, block_decompose, tilde_homology
from .alexpoly import (
    GroupRingPoly,
    equal_up_to_units,
    euler_characteristic,
    hat_dims,
)

__version__ = "0.1.0"
