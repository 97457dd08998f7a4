"""Rectangular evaluation grids for planar scans."""

from dataclasses import dataclass

import numpy as np


def normalize_bounds(bounds):
    """Accept ``(xmin, xmax, ymin, ymax)`` or ``((xmin, xmax), (ymin, ymax))``."""
    flat = np.asarray(bounds, dtype=float).ravel()
    if flat.size != 4:
        raise ValueError(f"bounds need 4 numbers, got {flat.size}")
    xmin, xmax, ymin, ymax = (float(v) for v in flat)
    if not (xmin < xmax and ymin < ymax):
        raise ValueError(f"empty bounds {bounds!r}")
    return xmin, xmax, ymin, ymax


def normalize_resolution(resolution):
    if np.isscalar(resolution):
        nx = ny = int(resolution)
    else:
        nx, ny = (int(v) for v in resolution)
    if nx < 2 or ny < 2:
        raise ValueError("grid resolution must be at least 2 nodes per axis")
    return nx, ny


@dataclass(frozen=True)
class Grid:
    """Nodes ``xs`` x ``ys``; values on the grid are arrays of shape (ny, nx)."""

    xs: np.ndarray
    ys: np.ndarray

    @classmethod
    def from_bounds(cls, bounds, resolution):
        xmin, xmax, ymin, ymax = normalize_bounds(bounds)
        nx, ny = normalize_resolution(resolution)
        return cls(np.linspace(xmin, xmax, nx), np.linspace(ymin, ymax, ny))

    @property
    def shape(self):
        return (len(self.ys), len(self.xs))

    @property
    def bounds(self):
        return (float(self.xs[0]), float(self.xs[-1]), float(self.ys[0]), float(self.ys[-1]))

    @property
    def diagonal(self):
        xmin, xmax, ymin, ymax = self.bounds
        return float(np.hypot(xmax - xmin, ymax - ymin))

    def mesh(self):
        return np.meshgrid(self.xs, self.ys)

    def evaluate(self, p):
        x, y = self.mesh()
        return p(x, y)
