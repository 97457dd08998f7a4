"""Harmonic polynomial bases and searches over harmonic gauge changes.

Adding a harmonic h to the potential leaves the field untouched but moves
Hess V(0) and Du0 by Hess h(0). Only quadratic harmonics affect the
certificate; higher-degree ones reshape V away from the origin and are
judged by basin scans instead.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

from . import _rational
from .errors import InvariantError, NoFeasiblePoint, NotMinimum
from .hhd import add_harmonic, laplacian_matrix
from .linalg import Definiteness, definiteness, singular_values, symmetric_eigenvalues
from .lyapunov import basin_estimate, hessian_at, jacobian_at, theorem2_certify
from .poly import Polynomial

__all__ = [
    "HarmonicBasis",
    "SearchCandidate",
    "harmonic_basis",
    "optimize_quadratic",
    "quartic_basin_search",
    "max_workers",
]


@dataclass(frozen=True)
class HarmonicBasis:
    dimension: int
    degree: int
    elements: tuple

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def combine(self, coefficients):
        coefficients = list(coefficients)
        if len(coefficients) != len(self.elements):
            raise ValueError(f"expected {len(self.elements)} coefficients")
        total = Polynomial.zero(self.dimension)
        for c, e in zip(coefficients, self.elements):
            total = total + e.scale(c)
        return total


@dataclass(frozen=True)
class SearchCandidate:
    coefficients: tuple
    decomposition: object
    certificate: object
    basin: object

    def to_dict(self):
        return {
            "coefficients": [float(c) for c in self.coefficients],
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "basin_level": self.basin.level if self.basin else None,
        }


def max_workers():
    """Thread cap from ``HHD_LYAP_THREADS`` (default: CPU count)."""
    raw = os.environ.get("HHD_LYAP_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def harmonic_basis(n, d):
    """Exact basis of the homogeneous degree-d harmonic polynomials in n variables."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    rows, src, _ = laplacian_matrix(n, d)
    vectors = _rational.nullspace([list(r) for r in rows], len(src))
    elements = []
    for vec in vectors:
        p = Polynomial({m: c for m, c in zip(src, vec) if c}, n)
        if not p.laplacian().is_zero():
            raise InvariantError("basis element is not harmonic")
        elements.append(p)
    return HarmonicBasis(n, d, tuple(elements))


def optimize_quadratic(F, d, budget=200):
    """Nelder-Mead over quadratic harmonic gauges to improve the certificate.

    The objective is lambda_{u+grad h}^2 - mu_{V+h}^2, set to +inf when
    Hess(V+h)(0) is not positive definite. Returns the better of the
    incumbent and the optimum as ``(decomposition, certificate)``.
    """
    if d.field != F:
        raise ValueError("decomposition does not belong to this field")
    try:
        incumbent_cert = theorem2_certify(d)
    except NotMinimum as exc:
        raise NoFeasiblePoint(f"incumbent is infeasible: {exc}") from None
    n = F.nvars
    basis = harmonic_basis(n, 2)
    if budget <= 0 or len(basis) == 0:
        return d, incumbent_cert

    h0 = hessian_at(d.potential)
    du0 = jacobian_at(d.rotational)
    hess_basis = [hessian_at(e) for e in basis]

    def objective(c):
        dh = sum((ci * hb for ci, hb in zip(c, hess_basis)), np.zeros((n, n)))
        hv = h0 + dh
        # same positivity test as the certificate, so the optimum certifies
        if definiteness(hv) is not Definiteness.POSITIVE:
            return np.inf
        mu_v = symmetric_eigenvalues(hv)[0]
        lam = singular_values(du0 + dh)[-1]
        return lam ** 2 - mu_v ** 2

    start = np.zeros(len(basis))
    f0 = objective(start)
    if not np.isfinite(f0):
        raise NoFeasiblePoint("incumbent potential has no strict minimum at the origin")
    rho = float(np.trace(h0))
    radius = 0.1 * rho if rho > 0 else 0.1
    simplex = np.vstack([start] + [start + radius * e for e in np.eye(len(basis))])
    res = minimize(
        objective,
        start,
        method="Nelder-Mead",
        options={
            "maxfev": int(budget),
            "initial_simplex": simplex,
            "adaptive": False,
            "xatol": 1e-12,
            "fatol": 1e-14,
        },
    )
    if not (np.isfinite(res.fun) and res.fun < f0):
        return d, incumbent_cert
    h = basis.combine([Fraction(float(c)) for c in res.x])
    best = add_harmonic(d, h)
    try:
        cert = theorem2_certify(best)
    except NotMinimum:
        # rounding the optimum to a rational left the feasible set
        return d, incumbent_cert
    if cert.criterion_value > incumbent_cert.criterion_value:
        return d, incumbent_cert
    return best, cert


def _as_vector(c, size):
    if np.isscalar(c) or isinstance(c, Fraction):
        c = [c]
    c = tuple(c)
    if len(c) != size:
        raise ValueError(f"coefficient vector of length {len(c)}, expected {size}")
    return c


def quartic_basin_search(F, d, coefficients, bounds=(-1.0, 1.0, -1.0, 1.0),
                         resolution=400, epsilon=None, harmonics=None):
    """Scan harmonic additions of degree >= 3 and rank them by basin level.

    ``harmonics`` defaults to the degree-4 harmonic basis in two variables.
    Each entry of ``coefficients`` is a scalar (one harmonic) or a vector
    matching ``harmonics``. Results are sorted by descending level; ties
    keep scan order.
    """
    if F.nvars != 2:
        raise ValueError("quartic basin search is planar only")
    if d.field != F:
        raise ValueError("decomposition does not belong to this field")
    if harmonics is None:
        harmonics = harmonic_basis(2, 4).elements
    harmonics = tuple(harmonics)
    origin = (0, 0)
    for h in harmonics:
        if not h.laplacian().is_zero():
            raise ValueError(f"{h} is not harmonic")
        if any(sum(e) < 3 for e in h.terms):
            raise ValueError("scan harmonics must have no terms below degree 3")
    base_hess = d.potential.hessian_at(origin)
    base_du = d.rotational.jacobian_at(origin)
    try:
        cert = theorem2_certify(d)
    except ValueError:
        cert = None

    def run(c):
        c = _as_vector(c, len(harmonics))
        h = Polynomial.zero(2)
        for ci, hi in zip(c, harmonics):
            h = h + hi.scale(ci)
        cand = add_harmonic(d, h)
        if (cand.potential.hessian_at(origin) != base_hess
                or cand.rotational.jacobian_at(origin) != base_du):
            raise InvariantError("high-degree harmonic changed the certificate inputs")
        basin = basin_estimate(cand.potential, F, bounds, resolution, epsilon)
        return SearchCandidate(c, cand, cert, basin)

    coefficients = list(coefficients)
    workers = min(max_workers(), max(1, len(coefficients)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, coefficients))
    else:
        results = [run(c) for c in coefficients]
    return sorted(results, key=lambda r: -r.basin.level)
