"""Harmonic functions on the unit disk from Fourier boundary data.

Coefficient convention::

    a_k = 1/(2 pi) * integral of alpha(t) cos(k t) dt
    b_k = 1/(2 pi) * integral of alpha(t) sin(k t) dt

so that ``alpha = a_0 + 2 * sum(a_k cos(k t) + b_k sin(k t))``. With this
normalisation boundary data ``cos t`` has ``a_1 = 1/2``, its harmonic
extension is ``x``, and dh/dx(0) = 2 a_1 = 1.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import HypothesisError, NotEquilibrium
from .hhd import is_equilibrium

__all__ = [
    "FourierBoundary",
    "PlanarJet",
    "poisson_kernel",
    "poisson_kernel_gradient",
    "l_of_f",
    "harmonic_extension",
    "hdot_extension",
    "h_jet_at_origin",
    "hdot_jet_at_origin",
    "coefficient_feasible",
    "DEFAULT_NODES",
]

DEFAULT_NODES = 2048


@dataclass(frozen=True)
class FourierBoundary:
    """Boundary data alpha on the unit circle, truncated at order K >= 2."""

    a0: float
    a: tuple = ()
    b: tuple = ()

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        b = tuple(float(v) for v in self.b)
        k = max(len(a), len(b), 2)
        a += (0.0,) * (k - len(a))
        b += (0.0,) * (k - len(b))
        values = (float(self.a0),) + a + b
        if not all(np.isfinite(values)):
            raise ValueError("Fourier coefficients must be finite")
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def order(self):
        return len(self.a)

    @classmethod
    def from_samples(cls, theta, values, order=2):
        """Coefficients of equispaced samples on [0, 2 pi) by discrete quadrature."""
        theta = np.asarray(theta, dtype=float)
        values = np.asarray(values, dtype=float)
        if theta.shape != values.shape or theta.ndim != 1 or theta.size < 2 * order + 1:
            raise ValueError("need matching 1-d samples, at least 2*order+1 of them")
        ks = np.arange(1, order + 1)[:, None]
        a = np.mean(values * np.cos(ks * theta), axis=1)
        b = np.mean(values * np.sin(ks * theta), axis=1)
        return cls(float(np.mean(values)), tuple(a), tuple(b))

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, self.a0)
        for k, (ak, bk) in enumerate(zip(self.a, self.b), start=1):
            out = out + 2.0 * (ak * np.cos(k * theta) + bk * np.sin(k * theta))
        return out

    def to_dict(self):
        return {"a0": self.a0, "a": list(self.a), "b": list(self.b)}


@dataclass(frozen=True)
class PlanarJet:
    """First and second partials of F = (f1, f2) at the origin.

    ``J[i][j] = d f_i / d x_j``; ``S1``/``S2`` are the Hessians of f1/f2.
    ``value`` is F(0), which must vanish for the jet formulas to apply.
    """

    J: np.ndarray
    S1: np.ndarray
    S2: np.ndarray
    value: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        for name in ("J", "S1", "S2"):
            m = np.array(getattr(self, name), dtype=float)
            if m.shape != (2, 2):
                raise ValueError(f"{name} must be 2x2")
            object.__setattr__(self, name, m)
        for name in ("S1", "S2"):
            m = getattr(self, name)
            if not np.allclose(m, m.T, rtol=0, atol=1e-12):
                raise ValueError(f"{name} must be symmetric")
        object.__setattr__(self, "value", np.array(self.value, dtype=float).reshape(2))

    @classmethod
    def from_field(cls, F):
        if F.nvars != 2 or len(F) != 2:
            raise ValueError("planar jets need a planar field")
        origin = (0, 0)
        J = [[float(v) for v in row] for row in F.jacobian_at(origin)]
        S1, S2 = ([[float(v) for v in row] for row in f.hessian_at(origin)] for f in F)
        value = [float(v) for v in F.exact_value(origin)]
        return cls(J, S1, S2, value)


def _check_interior(x, y):
    r2 = np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2
    if np.any(r2 >= 1.0):
        raise ValueError("point must lie strictly inside the unit disk")


def poisson_kernel(x, y, theta):
    """K(x, y, theta) = (1 - x^2 - y^2) / |(x, y) - e_theta|^2."""
    _check_interior(x, y)
    c, s = np.cos(theta), np.sin(theta)
    return (1.0 - x * x - y * y) / ((x - c) ** 2 + (y - s) ** 2)


def poisson_kernel_gradient(x, y, theta):
    """(dK/dx, dK/dy) = 2 (-(1 + K) x + K e_theta) / |(x, y) - e_theta|^2."""
    _check_interior(x, y)
    c, s = np.cos(theta), np.sin(theta)
    dist2 = (x - c) ** 2 + (y - s) ** 2
    k = (1.0 - x * x - y * y) / dist2
    return (2.0 * (-(1.0 + k) * x + k * c) / dist2,
            2.0 * (-(1.0 + k) * y + k * s) / dist2)


def l_of_f(F, x, y, theta):
    """L[F](x, y, theta) = f1 dK/dx + f2 dK/dy, the orbital derivative of K."""
    if F.nvars != 2 or len(F) != 2:
        raise ValueError("L[F] needs a planar field")
    kx, ky = poisson_kernel_gradient(x, y, theta)
    f1, f2 = F.evaluate((x, y))
    return f1 * kx + f2 * ky


def _nodes(count):
    if count < 1:
        raise ValueError("quadrature needs at least one node")
    return 2.0 * np.pi * np.arange(count) / count


def harmonic_extension(alpha, x, y, quadrature_nodes=DEFAULT_NODES):
    """h(x, y) = 1/(2 pi) integral alpha K dtheta by the trapezoid rule."""
    theta = _nodes(quadrature_nodes)
    return float(np.mean(alpha(theta) * poisson_kernel(x, y, theta)))


def hdot_extension(alpha, F, x, y, quadrature_nodes=DEFAULT_NODES):
    """Orbital derivative of the harmonic extension: 1/(2 pi) integral alpha L[F]."""
    theta = _nodes(quadrature_nodes)
    return float(np.mean(alpha(theta) * l_of_f(F, x, y, theta)))


def h_jet_at_origin(alpha):
    """Gradient and Hessian of the harmonic extension at the origin."""
    a1, a2 = alpha.a[0], alpha.a[1]
    b1, b2 = alpha.b[0], alpha.b[1]
    grad = np.array([2.0 * a1, 2.0 * b1])
    hess = np.array([[4.0 * a2, 4.0 * b2], [4.0 * b2, -4.0 * a2]])
    return grad, hess


def hdot_jet_at_origin(alpha, jet):
    """Value, gradient and Hessian of hdot at the origin.

    ``jet`` is a :class:`PlanarJet` or a planar field. The d2/dy2 entry is
    8 (b2 df1/dy - a2 df2/dy) + 2 (a1 d2f1/dy2 + b1 d2f2/dy2), from
    d2K/dxdy(0) = 4 sin 2t and d2K/dy2(0) = -4 cos 2t.
    """
    if not isinstance(jet, PlanarJet):
        if not is_equilibrium(jet):
            raise NotEquilibrium("F(0) is not zero")
        jet = PlanarJet.from_field(jet)
    if np.any(jet.value != 0):
        raise NotEquilibrium("F(0) is not zero")
    a1, a2 = alpha.a[0], alpha.a[1]
    b1, b2 = alpha.b[0], alpha.b[1]
    (f1x, f1y), (f2x, f2y) = jet.J
    s1, s2 = jet.S1, jet.S2
    grad = np.array([
        2.0 * (a1 * f1x + b1 * f2x),
        2.0 * (a1 * f1y + b1 * f2y),
    ])
    hxx = 8.0 * (a2 * f1x + b2 * f2x) + 2.0 * (a1 * s1[0, 0] + b1 * s2[0, 0])
    hxy = (4.0 * a2 * (f1y - f2x) + 4.0 * b2 * (f1x + f2y)
           + 2.0 * (a1 * s1[0, 1] + b1 * s2[0, 1]))
    hyy = 8.0 * (b2 * f1y - a2 * f2y) + 2.0 * (a1 * s1[1, 1] + b1 * s2[1, 1])
    return 0.0, grad, np.array([[hxx, hxy], [hxy, hyy]])


def coefficient_feasible(a2, b2, trace_df0):
    """Exact test of 0 <= a2^2 + b2^2 < (tr DF0)^2 / 64.

    Under this bound the Hessian of V + h at the origin stays positive
    definite when V comes from the minimum construction.
    """
    a2, b2, tr = (Fraction(v) for v in (a2, b2, trace_df0))
    if tr >= 0:
        raise HypothesisError(f"tr DF0 = {tr} must be negative")
    return a2 * a2 + b2 * b2 < tr * tr / 64
