"""Exact combinatorial completion and verification of labelled Bratteli diagrams.

The package completes a diagram by adding label-1 source vertices that
absorb every label deficit, then verifies the construction end to end
with arbitrary-precision integer arithmetic: path-count realization of
the labels, the defining relations of the path-space matrix family,
matrix-unit structure and embedding multiplicities, corner dimension
accounting, closure-based fullness, and filtration bookkeeping.
"""

from .bd1 import BD1ParseError, parse_bd1, write_bd1
from .completion import (
    Completion,
    complete,
    completion_from_marked,
    is_unital,
)
from .diagram import (
    BratteliDiagram,
    DeficiencyVector,
    Edge,
    Finding,
    InvalidDiagramError,
    ValidationReport,
    VertexId,
    deficiencies,
    validate,
)
from .dot import to_dot
from .filtration import FiltrationLevel, filtration_dims, verify_filtration
from .matrices import IntMatrix, rank_of_matrices, rank_of_rows
from .paths import (
    ClosureResult,
    ClosureStep,
    FullnessReport,
    Path,
    count_paths_from,
    enumerate_paths,
    fullness_check,
    hereditary_saturated_closure,
    multiplicity,
)
from .pipeline import VerifyOptions, verify_all
from .representation import (
    CornerReport,
    PathSpaceRep,
    SinkPathCounts,
    build_rep,
    corner_analysis,
    matrix_unit,
    path_isometry,
    verify_ck,
    verify_embedding,
    verify_matrix_units,
)

__version__ = "0.1.0"

__all__ = [
    "BD1ParseError",
    "BratteliDiagram",
    "ClosureResult",
    "ClosureStep",
    "Completion",
    "CornerReport",
    "DeficiencyVector",
    "Edge",
    "FiltrationLevel",
    "Finding",
    "FullnessReport",
    "IntMatrix",
    "InvalidDiagramError",
    "Path",
    "PathSpaceRep",
    "SinkPathCounts",
    "ValidationReport",
    "VerifyOptions",
    "VertexId",
    "build_rep",
    "complete",
    "completion_from_marked",
    "corner_analysis",
    "count_paths_from",
    "deficiencies",
    "enumerate_paths",
    "filtration_dims",
    "fullness_check",
    "hereditary_saturated_closure",
    "is_unital",
    "matrix_unit",
    "multiplicity",
    "parse_bd1",
    "path_isometry",
    "rank_of_matrices",
    "rank_of_rows",
    "to_dot",
    "validate",
    "verify_all",
    "verify_ck",
    "verify_embedding",
    "verify_filtration",
    "verify_matrix_units",
    "write_bd1",
]
