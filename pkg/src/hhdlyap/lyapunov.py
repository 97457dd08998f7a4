"""Orbital derivatives, the local Lyapunov certificate, and basin scans.

For a decomposition F = -grad V + u with grad V(0) = 0, the Hessian of the
orbital derivative at the origin is DF0^T H + H DF0 with H = Hess V(0).
The certificate bounds it through singular values:
lambda_u^2 - mu_V^2 < mu_F^2 makes it negative definite.
"""

from dataclasses import asdict, dataclass

import numpy as np
from scipy import ndimage

from .errors import GradientNotZeroAtOrigin, NotEquilibrium, NotMinimum
from .grid import Grid
from .hhd import is_equilibrium
from .linalg import Definiteness, definiteness, singular_values, symmetric_eigenvalues
from .poly import Polynomial

__all__ = [
    "Certificate",
    "BasinEstimate",
    "SignGrid",
    "orbital_derivative",
    "jacobian_at",
    "hessian_at",
    "hess_vdot_at_origin",
    "theorem2_certify",
    "corollary_check",
    "basin_estimate",
    "sign_grid",
]

CERTIFICATE_MARGIN = 1e-10
SIGN_ZERO = 1e-12


@dataclass(frozen=True)
class Certificate:
    lambda_u: float
    mu_F: float
    mu_V: float
    criterion_value: float
    passed: bool

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class BasinEstimate:
    """Largest certified sublevel ``{V <= level}`` found on a grid.

    ``violations`` counts grid nodes outside the epsilon-ball with
    ``Vdot >= 0`` inside the reported sublevel component; it is zero unless
    no positive level could be certified.
    """

    level: float
    epsilon: float
    resolution: tuple
    bounds: tuple
    violations: int

    def to_dict(self):
        return {
            "level": self.level,
            "epsilon": self.epsilon,
            "resolution": list(self.resolution),
            "violations": self.violations,
        }


@dataclass(frozen=True)
class SignGrid:
    xs: np.ndarray
    ys: np.ndarray
    signs: np.ndarray  # int8, shape (ny, nx)

    def rows(self):
        for j, y in enumerate(self.ys):
            for i, x in enumerate(self.xs):
                yield float(x), float(y), int(self.signs[j, i])


def orbital_derivative(V, F):
    """Vdot = grad V . F as an exact polynomial."""
    if V.nvars != F.nvars or len(F) != V.nvars:
        raise ValueError("dimension mismatch between potential and field")
    return V.gradient().dot(F)


def jacobian_at(F, point=None):
    point = (0,) * F.nvars if point is None else point
    return np.array([[float(v) for v in row] for row in F.jacobian_at(point)])


def hessian_at(p, point=None):
    point = (0,) * p.nvars if point is None else point
    return np.array([[float(v) for v in row] for row in p.hessian_at(point)])


def _require_critical_origin(V):
    grad = V.gradient_at((0,) * V.nvars)
    if any(grad):
        raise GradientNotZeroAtOrigin(f"grad V(0) = {[str(g) for g in grad]}")


def hess_vdot_at_origin(d):
    """DF0^T H + H DF0 with H = Hess V(0); requires grad V(0) = 0."""
    _require_critical_origin(d.potential)
    h = hessian_at(d.potential)
    j = jacobian_at(d.field)
    return j.T @ h + h @ j


def theorem2_certify(d):
    """Singular-value certificate that V is a local Lyapunov function."""
    if not is_equilibrium(d.field):
        raise NotEquilibrium("F(0) is not zero")
    _require_critical_origin(d.potential)
    h = hessian_at(d.potential)
    if definiteness(h) is not Definiteness.POSITIVE:
        raise NotMinimum("Hess V(0) is not positive definite")
    lam_u = float(singular_values(jacobian_at(d.rotational))[-1])
    mu_f = float(singular_values(jacobian_at(d.field))[0])
    mu_v = float(symmetric_eigenvalues(h)[0])
    lhs = lam_u ** 2 - mu_v ** 2
    margin = CERTIFICATE_MARGIN * max(1.0, mu_f ** 2)
    return Certificate(
        lambda_u=lam_u,
        mu_F=mu_f,
        mu_V=mu_v,
        criterion_value=lhs - mu_f ** 2,
        passed=bool(lhs < mu_f ** 2 - margin),
    )


def corollary_check(F):
    """True iff DF0 + DF0^T is negative definite."""
    if not is_equilibrium(F):
        raise NotEquilibrium("F(0) is not zero")
    j = jacobian_at(F)
    return definiteness(j + j.T) is Definiteness.NEGATIVE


def _sublevel_component(values, level, seeds):
    mask = values <= level
    labels, _ = ndimage.label(mask)
    ids = np.unique(labels[seeds & mask])
    ids = ids[ids > 0]
    return np.isin(labels, ids)


def basin_estimate(V, F, bounds=(-1.0, 1.0, -1.0, 1.0), resolution=400, epsilon=None):
    """Grid estimate of the largest sublevel set of V on which Vdot < 0.

    V is shifted so that V(0) = 0. Only the connected component of
    ``{V <= c}`` that reaches the epsilon-ball around the origin is
    considered (4-connectivity on the grid); nodes inside the ball are
    exempt because Vdot(0) = 0. The level is found by bisection over the
    sorted grid values of V.
    """
    if V.nvars != 2:
        raise ValueError("basin estimation is planar only")
    grid = Grid.from_bounds(bounds, resolution)
    eps = 0.01 * grid.diagonal if epsilon is None else float(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be non-negative")
    V = V - V.constant_term
    x, y = grid.mesh()
    v = V(x, y)
    vdot = orbital_derivative(V, F)(x, y)
    r = np.hypot(x, y)
    seeds = r <= eps
    if not seeds.any():
        seeds = r == r.min()
    violators = (~seeds) & (vdot >= 0)

    def result(level, violations):
        return BasinEstimate(float(level), eps, (len(grid.xs), len(grid.ys)),
                             grid.bounds, int(violations))

    candidates = np.unique(v)
    lo = int(np.searchsorted(candidates, v[seeds].min()))

    def bad(i):
        return int(np.count_nonzero(_sublevel_component(v, candidates[i], seeds) & violators))

    first = bad(lo)
    if first:
        return result(0.0, first)
    hi = len(candidates) - 1
    if not bad(hi):
        best = hi
    else:
        good = lo
        while hi - good > 1:
            mid = (good + hi) // 2
            if bad(mid):
                hi = mid
            else:
                good = mid
        best = good
    if candidates[best] <= 0:
        nxt = min(best + 1, len(candidates) - 1)
        return result(0.0, bad(nxt))
    return result(candidates[best], 0)


def sign_grid(g, bounds=(-1.0, 1.0, -1.0, 1.0), resolution=400):
    """Sign (-1, 0, +1) of ``g`` at each grid node; |g| <= 1e-12 counts as 0."""
    if g.nvars != 2:
        raise ValueError("sign grids are planar only")
    grid = Grid.from_bounds(bounds, resolution)
    values = grid.evaluate(g)
    signs = np.where(values > SIGN_ZERO, 1, np.where(values < -SIGN_ZERO, -1, 0)).astype(np.int8)
    return SignGrid(grid.xs, grid.ys, signs)
