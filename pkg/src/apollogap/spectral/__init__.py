"""Low spectrum of the hyperbolic Laplacian on geodesic polygons."""

from .domain import (
    DIRICHLET,
    MATCHED,
    NEUMANN,
    DomainError,
    GeodesicWall,
    HyperbolicDomain,
    build_domain,
    hecke_D,
    hecke_D1,
    hecke_D2,
    named_domain,
    strip_domain,
    strip_exact,
)
from .fem import AssembledSystem, Eigenpairs, SpectralError, assemble, boundary_mass_fraction, s_of_lambda, solve_lowest
from .mesh import BOTTOM, TOP, Mesh, MeshError, build_mesh
from .report import (
    DEFAULT_SCHEDULE,
    GENUINE,
    SPURIOUS,
    UNRESOLVED,
    SpectralConfig,
    SpectrumReport,
    convergence_order,
    spectrum_below,
)

__all__ = [name for name in dir() if not name.startswith("_")]
