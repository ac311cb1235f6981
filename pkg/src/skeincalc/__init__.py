"""Exact computations in skein algebras of triangulated marked surfaces."""

from skeincalc.algebra import Skein, commutator, mul, normalize, threaded_power
from skeincalc.center import (
    CentralGenerator,
    CentralityReport,
    DecompositionCertificate,
    NotCentralError,
    chebyshev,
    decompose_central,
    homogenized_chebyshev,
    in_boundary_lattice,
    is_central,
    make_central,
)
from skeincalc.coeffs import GENERIC, Coefficient, RingMode, Scalar, root_of_unity
from skeincalc.curves import (
    AdmissibilityError,
    MultiCurve,
    curve_from_coordinates,
    edge_arc,
    enumerate_basis,
)
from skeincalc.diagrams import EngineError
from skeincalc.exprs import ParseError, parse_expression
from skeincalc.qtorus import (
    SkewMatrix,
    TorusElement,
    build_PI,
    center_lattice,
    kernel_size,
    pi_degree,
    read_matrix,
    torus_mul,
)
from skeincalc.surface import Surface, SurfaceError, builtin_surface

__all__ = [
    "AdmissibilityError",
    "CentralGenerator",
    "CentralityReport",
    "Coefficient",
    "DecompositionCertificate",
    "EngineError",
    "GENERIC",
    "MultiCurve",
    "NotCentralError",
    "ParseError",
    "RingMode",
    "Scalar",
    "Skein",
    "SkewMatrix",
    "Surface",
    "SurfaceError",
    "TorusElement",
    "build_PI",
    "builtin_surface",
    "center_lattice",
    "chebyshev",
    "commutator",
    "curve_from_coordinates",
    "decompose_central",
    "edge_arc",
    "enumerate_basis",
    "homogenized_chebyshev",
    "in_boundary_lattice",
    "is_central",
    "kernel_size",
    "make_central",
    "mul",
    "normalize",
    "parse_expression",
    "pi_degree",
    "read_matrix",
    "root_of_unity",
    "threaded_power",
    "torus_mul",
]
