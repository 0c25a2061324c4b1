"""Bound electron pairs on a quantum wire and their condensation.

The package discretizes the two-electron pair Hamiltonian on a truncated
wire, certifies its lowest eigenvalues, locates the contact strength that
destroys the bound pair, and feeds the resulting spectrum into the
statistical mechanics of a one-dimensional pair gas.
"""

from .bec import (
    BoundModel,
    ExplicitModel,
    GasSolution,
    NoBoundModel,
    SpectrumModel,
    condensate_stats,
    critical_density,
    rectangle_eigenvalue,
    rho_ex_infinity,
    solve_mu,
    thermo_sweep,
    total_density,
)
from .discretize import (
    Grid,
    SigmaProfile,
    SparseOperator,
    assemble_operator,
    build_grid,
    sigma_profile,
)
from .eigensolve import (
    DEFAULT_SEED,
    DENSE_CUTOFF,
    SpectrumResult,
    dense_reference,
    lowest_eigenpairs,
    residual_check,
)
from .errors import (
    CapError,
    ConfigurationError,
    ConvergenceError,
    DomainError,
    ResolutionError,
    SizeCapError,
    ValidationError,
)
from .geometry import BoundaryTag, DomainSpec, classify_boundary, contains
from .spectral import (
    SAFETY_FACTOR,
    ConvergenceRow,
    ConvergenceTable,
    GammaSearch,
    convergence_study,
    count_below,
    find_gamma,
    gap,
    threshold_dimless,
)
from .units import (
    CODATA,
    PhysicalConstants,
    PhysicalEnergy,
    REFERENCE_PAIR_EXTENT_M,
    d_from_gap,
    energy_unit_joules,
    gap_from_d,
    to_dimensionless,
    to_physical,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryTag",
    "BoundModel",
    "CapError",
    "CODATA",
    "ConfigurationError",
    "ConvergenceError",
    "ConvergenceRow",
    "ConvergenceTable",
    "DEFAULT_SEED",
    "DENSE_CUTOFF",
    "DomainError",
    "DomainSpec",
    "ExplicitModel",
    "GammaSearch",
    "GasSolution",
    "Grid",
    "NoBoundModel",
    "PhysicalConstants",
    "PhysicalEnergy",
    "REFERENCE_PAIR_EXTENT_M",
    "ResolutionError",
    "SAFETY_FACTOR",
    "SigmaProfile",
    "SizeCapError",
    "SparseOperator",
    "SpectrumModel",
    "SpectrumResult",
    "ValidationError",
    "assemble_operator",
    "build_grid",
    "classify_boundary",
    "condensate_stats",
    "contains",
    "convergence_study",
    "count_below",
    "critical_density",
    "d_from_gap",
    "dense_reference",
    "energy_unit_joules",
    "find_gamma",
    "gap",
    "gap_from_d",
    "lowest_eigenpairs",
    "rectangle_eigenvalue",
    "residual_check",
    "rho_ex_infinity",
    "sigma_profile",
    "solve_mu",
    "thermo_sweep",
    "threshold_dimless",
    "to_dimensionless",
    "to_physical",
    "total_density",
]
