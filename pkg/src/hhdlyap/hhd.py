"""Helmholtz-Hodge decompositions F = -grad V + u of polynomial vector fields.

Everything here is exact: the Poisson equation is solved by rational row
reduction, and the identities F = -grad V + u and div u = 0 are checked as
polynomial equalities, never up to a tolerance.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _rational
from .errors import (
    DivergenceNotNegative,
    InvariantError,
    NotAPotential,
    NotEquilibrium,
    NotHarmonic,
)
from .poly import Polynomial, PolyVectorField, monomials_of_degree

__all__ = [
    "Decomposition",
    "poisson_solve",
    "decompose",
    "add_harmonic",
    "normalize_center",
    "theorem1_construction",
    "is_strictly_orthogonal",
    "boundary_flux_check",
    "laplacian_matrix",
    "quadratic_form",
    "is_equilibrium",
]


@dataclass(frozen=True, eq=True)
class Decomposition:
    """A certified pair (potential, rotational) for ``field``.

    Construction verifies ``field == -grad(potential) + rotational`` and
    ``div(rotational) == 0`` exactly and raises :class:`InvariantError`
    otherwise.
    """

    field: PolyVectorField
    potential: Polynomial
    rotational: PolyVectorField

    def __post_init__(self):
        n = self.field.nvars
        if len(self.field) != n or len(self.rotational) != n or self.potential.nvars != n:
            raise InvariantError("decomposition parts have inconsistent dimensions")
        residual = -self.potential.gradient() + self.rotational - self.field
        if not residual.is_zero():
            raise InvariantError("F != -grad V + u")
        if not self.rotational.divergence().is_zero():
            raise InvariantError("div u != 0")

    @property
    def nvars(self):
        return self.field.nvars

    @classmethod
    def from_potential(cls, field, potential):
        """Decomposition with a user-chosen potential; u = F + grad V.

        Raises :class:`NotAPotential` if the remainder is not divergence-free.
        """
        u = field + potential.gradient()
        div = u.divergence()
        if not div.is_zero():
            raise NotAPotential(f"div(F + grad V) = {div} is not zero")
        return cls(field, potential, u)

    def orthogonality_defect(self):
        """The polynomial grad V . u (zero iff strictly orthogonal)."""
        return self.potential.gradient().dot(self.rotational)


@lru_cache(maxsize=None)
def laplacian_matrix(n, d):
    """Matrix of the Laplacian from degree-d to degree-(d-2) homogeneous monomials.

    Returns ``(rows, source_monomials, target_monomials)`` with rows indexed
    by target monomials and columns by source monomials (grlex order).
    """
    src = monomials_of_degree(n, d)
    dst = monomials_of_degree(n, d - 2)
    pos = {m: i for i, m in enumerate(dst)}
    rows = [[Fraction(0)] * len(src) for _ in dst]
    for j, m in enumerate(src):
        for axis in range(n):
            k = m[axis]
            if k >= 2:
                t = m[:axis] + (k - 2,) + m[axis + 1:]
                rows[pos[t]][j] += k * (k - 1)
    return tuple(tuple(r) for r in rows), tuple(src), tuple(dst)


def poisson_solve(rhs):
    """Polynomial V with laplacian(V) == rhs exactly.

    The Laplacian maps homogeneous degree k+2 onto homogeneous degree k, so
    the solve splits by degree. Within each block we take the solution of
    minimum Euclidean coefficient norm; V has no constant or linear part.
    """
    n = rhs.nvars
    out = {}
    for k in range(rhs.degree + 1):
        part = rhs.homogeneous_part(k)
        if part.is_zero():
            continue
        rows, src, dst = laplacian_matrix(n, k + 2)
        b = [part.coefficient(m) for m in dst]
        coeffs = _rational.min_norm_solution([list(r) for r in rows], b)
        for m, c in zip(src, coeffs):
            if c:
                out[m] = c
    v = Polynomial(out, n)
    if v.laplacian() != rhs:
        raise InvariantError("Poisson residual is not zero")
    return v


def decompose(field):
    """HHD via the Poisson route: V solves laplacian V = -div F, u = F + grad V."""
    if len(field) != field.nvars:
        raise ValueError("field must have n components in n variables")
    v = poisson_solve(-field.divergence())
    return Decomposition(field, v, field + v.gradient())


def add_harmonic(d, h):
    """Gauge change (V, u) -> (V + h, u + grad h) for harmonic ``h``."""
    if h.nvars != d.nvars:
        raise ValueError("dimension mismatch")
    lap = h.laplacian()
    if not lap.is_zero():
        raise NotHarmonic(f"laplacian(h) = {lap} is not zero")
    g = h.gradient()
    return Decomposition(d.field, d.potential + h, d.rotational + g)


def normalize_center(d, at=None):
    """Subtract the linear harmonic grad V(at) . x so that grad V(at) = 0."""
    n = d.nvars
    at = (0,) * n if at is None else at
    grad = d.potential.gradient_at(at)
    if not any(grad):
        return d
    h = Polynomial({tuple(int(i == j) for j in range(n)): -g for i, g in enumerate(grad)}, n)
    return add_harmonic(d, h)


def quadratic_form(matrix):
    """The polynomial x^T A x for a square (rational) matrix A."""
    n = len(matrix)
    terms = {}
    for i in range(n):
        for j in range(n):
            e = [0] * n
            e[i] += 1
            e[j] += 1
            e = tuple(e)
            terms[e] = terms.get(e, Fraction(0)) + Fraction(matrix[i][j])
    return Polynomial(terms, n)


def is_equilibrium(field, point=None):
    point = (0,) * field.nvars if point is None else point
    return not any(field.exact_value(point))


def theorem1_construction(field):
    """Decomposition whose potential has a strict minimum at the origin.

    Requires F(0) = 0 and div F(0) < 0. Starting from the Poisson
    decomposition, the gradient at the origin is removed and a trace-free
    quadratic harmonic is added so that Hess V(0) = (rho/n) I with
    rho = -div F(0).
    """
    n = field.nvars
    origin = (0,) * n
    if not is_equilibrium(field):
        raise NotEquilibrium(f"F(0) = {[str(v) for v in field.exact_value(origin)]} is not zero")
    div0 = field.divergence().exact_value(origin)
    if div0 >= 0:
        raise DivergenceNotNegative(f"div F(0) = {div0} is not negative")
    d = normalize_center(decompose(field))
    hess = d.potential.hessian_at(origin)
    rho = sum(hess[i][i] for i in range(n))
    a = [[(rho / n if i == j else 0) - hess[i][j] for j in range(n)] for i in range(n)]
    # Hess(x^T A x) = 2A, hence the factor 1/2
    h = quadratic_form(a).scale(Fraction(1, 2))
    d = add_harmonic(d, h)
    target = [[rho / n if i == j else 0 for j in range(n)] for i in range(n)]
    if d.potential.hessian_at(origin) != target or any(d.potential.gradient_at(origin)):
        raise InvariantError("construction did not reach Hess V(0) = (rho/n) I")
    return d


def is_strictly_orthogonal(d):
    """True iff grad V . u is the zero polynomial."""
    return d.orthogonality_defect().is_zero()


def boundary_flux_check(d, center=(0.0, 0.0), radius=1.0, samples=256):
    """Max |u . n| over equispaced points of a circle (n = outward normal).

    ``d`` is a decomposition or the field u itself.
    """
    u = d.rotational if isinstance(d, Decomposition) else d
    if u.nvars != 2:
        raise ValueError("boundary flux check is planar only")
    if samples < 1 or radius <= 0:
        raise ValueError("need samples >= 1 and radius > 0")
    theta = 2.0 * np.pi * np.arange(samples) / samples
    nx, ny = np.cos(theta), np.sin(theta)
    x = center[0] + radius * nx
    y = center[1] + radius * ny
    ux, uy = u(x, y)
    return float(np.max(np.abs(ux * nx + uy * ny)))
