"""Entanglement measures for bipartite quantum states with local symmetry."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DomainError,
    Infeasible,
    InputError,
    NonAbelianUnsupported,
    OutsideStateSpace,
    SymtangleError,
    Unsupported,
    UnsupportedRegion,
)
from .groups import GroupSpec, commutant_basis, coords, state_from_coords, twirl  # noqa: E402
from .opcore import DensityMatrix, Operator, PureStateVector  # noqa: E402

__all__ = [
    "DensityMatrix",
    "DomainError",
    "GroupSpec",
    "Infeasible",
    "InputError",
    "NonAbelianUnsupported",
    "Operator",
    "OutsideStateSpace",
    "PureStateVector",
    "SymtangleError",
    "Unsupported",
    "UnsupportedRegion",
    "commutant_basis",
    "coords",
    "state_from_coords",
    "twirl",
]
