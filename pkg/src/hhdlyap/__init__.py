"""Lyapunov functions from Helmholtz-Hodge decompositions of polynomial fields."""

from .errors import (
    Diverged,
    HypothesisError,
    InvariantError,
    NoFeasiblePoint,
    NotAPotential,
    NotEquilibrium,
    NotHarmonic,
    NotMinimum,
    NotStrictlyOrthogonal,
    ParseError,
)
from .flow import integrate, omega_limit_estimate, verify_theorem3
from .harmonic import harmonic_basis, optimize_quadratic, quartic_basin_search
from .hhd import (
    Decomposition,
    add_harmonic,
    boundary_flux_check,
    decompose,
    is_strictly_orthogonal,
    normalize_center,
    poisson_solve,
    theorem1_construction,
)
from .linalg import Definiteness, definiteness, singular_values, symmetric_eigenvalues
from .lyapunov import (
    BasinEstimate,
    Certificate,
    basin_estimate,
    corollary_check,
    orbital_derivative,
    sign_grid,
    theorem2_certify,
)
from .planar import FourierBoundary, PlanarJet, coefficient_feasible, hdot_jet_at_origin
from .poly import PolyVectorField, Polynomial, format_polynomial, parse_polynomial

__version__ = "0.1.0"
