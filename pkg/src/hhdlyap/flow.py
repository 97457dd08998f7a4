"""Fixed-step RK4 flows and numerical omega-limit estimates."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import Diverged, NotStrictlyOrthogonal
from .hhd import is_strictly_orthogonal

__all__ = [
    "Trajectory",
    "Theorem3Report",
    "integrate",
    "integrate_many",
    "omega_limit_estimate",
    "cluster_points",
    "gradient_zero_set",
    "verify_theorem3",
]

DIVERGENCE_GUARD = 1e6
DEFAULT_DT = 1e-3


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray   # (N+1,)
    states: np.ndarray  # (N+1, n)
    step: float

    @property
    def final(self):
        return self.states[-1]

    def rows(self):
        for t, s in zip(self.times, self.states):
            yield (float(t), *(float(v) for v in s))


@dataclass(frozen=True)
class Theorem3Report:
    max_distance: float
    distances: tuple
    seeds: tuple
    final_states: tuple

    def to_dict(self):
        return {
            "max_distance": self.max_distance,
            "seeds": [
                {"x0": list(s), "final": list(f), "distance": d}
                for s, f, d in zip(self.seeds, self.final_states, self.distances)
            ],
        }


def _rhs(F):
    fn = F.compiled()

    def f(x):
        # x has shape (n, m); constant components broadcast on assignment
        out = np.empty_like(x)
        for i, v in enumerate(fn(*x)):
            out[i] = v
        return out

    return f


def integrate_many(F, x0s, horizon, dt=DEFAULT_DT):
    """Integrate several initial states at once; returns (times, states[N+1, m, n])."""
    if dt <= 0 or horizon < dt:
        raise ValueError("need dt > 0 and horizon >= dt")
    x0 = np.array(x0s, dtype=float)
    if x0.ndim != 2 or x0.shape[1] != F.nvars:
        raise ValueError("initial states must have shape (m, n)")
    steps = int(round(horizon / dt))
    f = _rhs(F)
    out = np.empty((steps + 1,) + x0.shape[::-1])
    x = x0.T.copy()
    out[0] = x
    half = 0.5 * dt
    sixth = dt / 6.0
    for k in range(steps):
        k1 = f(x)
        k2 = f(x + half * k1)
        k3 = f(x + half * k2)
        k4 = f(x + dt * k3)
        nxt = x + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if not np.abs(nxt).max() <= DIVERGENCE_GUARD:
            raise Diverged(f"trajectory left |x| <= {DIVERGENCE_GUARD:g} at t = {(k + 1) * dt:g}",
                           state=x.T.copy(), time=k * dt)
        x = nxt
        out[k + 1] = x
    return dt * np.arange(steps + 1), out.transpose(0, 2, 1)


def integrate(F, x0, horizon, dt=DEFAULT_DT):
    """Classical RK4 with a fixed step."""
    times, states = integrate_many(F, [x0], horizon, dt)
    return Trajectory(times, states[:, 0, :], dt)


def cluster_points(points, radius=1e-3):
    """Thin ``points`` to one representative per cell of diameter ``radius``.

    Representatives keep their original order (first point seen per cell).
    """
    points = np.asarray(points, dtype=float)
    if len(points) == 0:
        return points
    side = radius / np.sqrt(points.shape[1])
    keys = np.floor(points / side).astype(np.int64)
    _, first = np.unique(keys, axis=0, return_index=True)
    return points[np.sort(first)]


def _tail(states, transient_fraction):
    if not 0 <= transient_fraction < 1:
        raise ValueError("transient_fraction must lie in [0, 1)")
    start = int(np.floor(transient_fraction * (len(states) - 1)))
    return states[start:]


def omega_limit_estimate(F, x0, horizon, transient_fraction=0.5, dt=DEFAULT_DT,
                         merge_radius=1e-3):
    """Finite surrogate for the omega-limit set: clustered tail of the trajectory."""
    traj = integrate(F, x0, horizon, dt)
    return cluster_points(_tail(traj.states, transient_fraction), merge_radius)


def _gauss_newton_zeros(V, points, iterations=30, tol=1e-6):
    n = V.nvars
    grad = V.gradient()
    hess = [[g.diff(j) for j in range(n)] for g in grad]
    x = np.array(points, dtype=float)
    for _ in range(iterations):
        cols = [x[:, i] for i in range(n)]
        g = np.stack([gi(*cols) for gi in grad], axis=1)
        h = np.stack([np.stack([hij(*cols) for hij in row], axis=-1) for row in hess], axis=-2)
        step = np.einsum("mij,mj->mi", np.linalg.pinv(h, rcond=1e-8), g)
        x = x - step
        if not np.all(np.isfinite(x)):
            x = x[np.all(np.isfinite(x), axis=1)]
    cols = [x[:, i] for i in range(n)]
    g = np.stack([gi(*cols) for gi in grad], axis=1)
    return x[np.linalg.norm(g, axis=1) < tol]


def gradient_zero_set(V, bounds, resolution=201, extra=None, tol=1e-6):
    """Sample of {grad V = 0}: grid nodes refined by Gauss-Newton, kept if |grad V| < tol."""
    lo = np.asarray(bounds[0], dtype=float)
    hi = np.asarray(bounds[1], dtype=float)
    axes = [np.linspace(a, b, resolution) for a, b in zip(lo, hi)]
    if V.nvars > 2:
        # keep the sample size manageable in higher dimension
        axes = [np.linspace(a, b, max(5, int(round(resolution ** (2.0 / V.nvars)))))
                for a, b in zip(lo, hi)]
    nodes = np.stack([m.ravel() for m in np.meshgrid(*axes, indexing="ij")], axis=1)
    if extra is not None and len(extra):
        nodes = np.vstack([nodes, np.asarray(extra, dtype=float)])
    return _gauss_newton_zeros(V, nodes, tol=tol)


def verify_theorem3(F, d, samples, horizon, dt=DEFAULT_DT, transient_fraction=0.5,
                    merge_radius=1e-3):
    """Distance from numerical omega-limit points to the critical set of V.

    Requires a strictly orthogonal decomposition of ``F``. Returns a
    :class:`Theorem3Report` whose ``max_distance`` is the largest distance
    over all seeds.
    """
    if d.field != F:
        raise ValueError("decomposition does not belong to this field")
    if not is_strictly_orthogonal(d):
        raise NotStrictlyOrthogonal("grad V . u is not identically zero")
    seeds = np.array(samples, dtype=float)
    if seeds.ndim != 2 or seeds.shape[1] != F.nvars:
        raise ValueError("samples must have shape (m, n)")
    _, states = integrate_many(F, seeds, horizon, dt)
    omegas = [cluster_points(_tail(states[:, i, :], transient_fraction), merge_radius)
              for i in range(len(seeds))]
    allpts = np.vstack(omegas)
    pad = 0.25 * max(1.0, float(np.ptp(allpts, axis=0).max()))
    bounds = (allpts.min(axis=0) - pad, allpts.max(axis=0) + pad)
    zeros = gradient_zero_set(d.potential, bounds, extra=allpts)
    if len(zeros) == 0:
        distances = tuple(np.inf for _ in omegas)
    else:
        tree = cKDTree(zeros)
        distances = tuple(float(tree.query(w)[0].max()) for w in omegas)
    return Theorem3Report(
        max_distance=float(max(distances)),
        distances=distances,
        seeds=tuple(tuple(float(v) for v in s) for s in seeds),
        final_states=tuple(tuple(float(v) for v in states[-1, i]) for i in range(len(seeds))),
    )
