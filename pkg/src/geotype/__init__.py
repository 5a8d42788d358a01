"""Finite algorithms on the combinatorial types of Markov partitions.

The package is organised around one immutable value, :class:`GeometricType`:
a finite table recording how a surface homeomorphism shuffles the horizontal
sub-rectangles of a Markov partition into vertical ones, together with
orientation signs.  Everything else is an exact, finite algorithm on that
table:

``core``
    construction, validation, (de)serialisation, incidence matrices,
    mixing test and the inverse type.
``algebra``
    powers of a type, the horizontal (binary) refinement.
``paclass``
    the bounded obstruction sweep deciding whether a type is realised by
    a pseudo-Anosov homeomorphism.
``symbolic``
    boundary labels, their one-sided codes, periodic boundary codes and
    periodic orbit enumeration.
``refine``
    refinement of a partition along periodic orbits, the corner property,
    joint refinement of a pair, and invariant comparison.
``singular``
    singularity classes, prong counts and the genus of the carried surface.
"""

from .core import (
    BijectionViolation,
    FormatError,
    GeometricType,
    GeometricTypeError,
    RangeViolation,
    SumMismatch,
    incidence_matrix,
    inverse,
    is_binary,
    is_mixing,
    is_valid,
    load_type,
    make_type,
    matrix_power,
    parse_type,
    save_type,
    serialize_type,
    validate,
)
from .algebra import (
    DEFAULT_CELL_LIMIT,
    CellLimitExceeded,
    horizontal_type,
    power,
)
from .paclass import (
    Verdict,
    Witness,
    decide_pseudo_anosov,
)
from .symbolic import (
    BoundaryCode,
    BoundaryLabel,
    PairingError,
    PeriodicBoundaryCode,
    PeriodicOrbit,
    boundary_labels,
    enumerate_periodic_orbits,
    gamma,
    has_corner_property,
    is_s_boundary_orbit,
    is_u_boundary_orbit,
    make_orbit,
    periodic_boundary_codes,
    s_boundary_code,
    u_boundary_code,
    upsilon,
)
from .refine import (
    InvariantComparison,
    RefinementBookkeeping,
    bounded_corner_refine,
    compare_invariants,
    corner_refine,
    joint_refine,
    lift_orbit_through_s_refinement,
    max_boundary_period,
    perron_root,
    s_refine,
    u_refine,
)
from .singular import (
    SingularityClass,
    SingularityReport,
    genus,
    prepare_for_census,
    s_adjacent,
    singularity_classes,
    u_adjacent,
)

__version__ = "0.1.0"

__all__ = [
    "BijectionViolation",
    "BoundaryCode",
    "BoundaryLabel",
    "CellLimitExceeded",
    "DEFAULT_CELL_LIMIT",
    "FormatError",
    "GeometricType",
    "GeometricTypeError",
    "InvariantComparison",
    "PairingError",
    "PeriodicBoundaryCode",
    "PeriodicOrbit",
    "RangeViolation",
    "RefinementBookkeeping",
    "SingularityClass",
    "SingularityReport",
    "SumMismatch",
    "Verdict",
    "Witness",
    "boundary_labels",
    "bounded_corner_refine",
    "compare_invariants",
    "corner_refine",
    "decide_pseudo_anosov",
    "enumerate_periodic_orbits",
    "gamma",
    "genus",
    "has_corner_property",
    "horizontal_type",
    "incidence_matrix",
    "inverse",
    "is_binary",
    "is_mixing",
    "is_s_boundary_orbit",
    "is_u_boundary_orbit",
    "is_valid",
    "joint_refine",
    "lift_orbit_through_s_refinement",
    "load_type",
    "make_orbit",
    "make_type",
    "matrix_power",
    "max_boundary_period",
    "parse_type",
    "periodic_boundary_codes",
    "perron_root",
    "power",
    "prepare_for_census",
    "s_adjacent",
    "s_boundary_code",
    "s_refine",
    "save_type",
    "serialize_type",
    "singularity_classes",
    "u_adjacent",
    "u_boundary_code",
    "u_refine",
    "upsilon",
    "validate",
    "__version__",
]
