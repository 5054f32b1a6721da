"""Bratteli diagrams: exact dimensions, telescoping, simplicity, equivalence
search, dimension-group invariants, Vershik maps and subfactor towers."""

__version__ = "0.1.0"

from .diagram import (
    BratteliDiagram,
    DimensionVector,
    NotSimple,
    Simple,
    UnknownAtBound,
    certificate_holds,
    dims,
    generate,
    gicar,
    odometer,
    pascal,
    simplicity,
    stationary,
    telescope,
    truncate,
    uhf,
    validate,
)
from .diagram_io import DiagramDocument, export_dot, parse_bd, serialize_bd
from .dimension_group import (
    Distinguished,
    Inconclusive,
    InvariantReport,
    StationaryPresentation,
    compare_invariants,
    k0_presentation,
    stationary_invariants,
)
from .equivalence import (
    Found,
    IntertwiningWitness,
    NotFoundWithinBound,
    SupernaturalInvariant,
    find_intertwining,
    supernatural_differ,
    supernatural_invariant,
    verify_intertwining,
)
from .errors import BratteliError, ParseError, ValidationError
from .towers import MarkedGraph, dynkin, graph_norm, jones_index, marked_graph, tower_diagram
from .vershik import (
    CylinderMeasure,
    NotProperlyOrdered,
    OrderedBratteliDiagram,
    PathWord,
    ProperlyOrdered,
    UnknownOrdering,
    max_path,
    min_path,
    orbit,
    parse_path,
    proper_ordering_check,
    stationary_measure,
    successor,
    with_orders,
)
