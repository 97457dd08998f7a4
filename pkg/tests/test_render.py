import re
from fractions import Fraction

import numpy as np
import pytest

from hhdlyap.grid import Grid
from hhdlyap.lyapunov import orbital_derivative
from hhdlyap.render import contour_lines, render_contours

from _support import CUBIC, QUARTIC_HARMONIC, V1

V2 = V1 + QUARTIC_HARMONIC.scale(Fraction(1, 2))


def _winding(pts):
    ang = np.unwrap(np.arctan2(pts[:, 1], pts[:, 0]))
    return round((ang[-1] - ang[0]) / (2 * np.pi))


def test_constant_grid_has_no_contours():
    xs = ys = np.linspace(-1, 1, 11)
    assert contour_lines(xs, ys, np.ones((11, 11)), 0.5) == []
    assert contour_lines(xs, ys, np.ones((11, 11)), 1.0) == []


def test_linear_grid_gives_one_vertical_line():
    xs = ys = np.linspace(-1, 1, 20)
    z = np.tile(xs, (20, 1))
    (pts, closed), = contour_lines(xs, ys, z, 0.0)
    assert not closed
    assert np.abs(pts[:, 0]).max() <= xs[1] - xs[0]
    assert pts[:, 1].min() == -1 and pts[:, 1].max() == 1


# lowest nonzero critical value of V2 (a saddle); computed symbolically
V2_SADDLE = 0.0663168759676587


def _loops_around_origin(z, g, level):
    lines = contour_lines(g.xs, g.ys, z, level)
    return [pts for pts, closed in lines if closed and abs(_winding(pts)) == 1]


def test_v2_levels_are_closed_around_origin():
    g = Grid.from_bounds((-1, 1, -1, 1), 200)
    z = g.evaluate(V2)
    for level in (0.02, 0.05, V2_SADDLE - 1e-3):
        loops = _loops_around_origin(z, g, level)
        assert len(loops) == 1, level
        assert np.hypot(*loops[0].T).min() > 0


def test_v2_levels_above_the_saddle_open_up():
    g = Grid.from_bounds((-1, 1, -1, 1), 200)
    z = g.evaluate(V2)
    assert V2.gradient_at((0, 0)) == [0, 0]
    for level in (V2_SADDLE + 1e-3, 0.09):
        assert _loops_around_origin(z, g, level) == []


def test_circle_contour_radius():
    g = Grid.from_bounds((-1, 1, -1, 1), 101)
    x, y = g.mesh()
    (pts, closed), = contour_lines(g.xs, g.ys, x ** 2 + y ** 2, 0.25)
    assert closed
    assert np.allclose(np.hypot(*pts.T), 0.5, atol=2e-3)
    assert np.array_equal(pts[0], pts[-1])


def test_saddle_cells_are_resolved():
    xs = ys = np.array([0.0, 1.0])
    z = np.array([[1.0, -1.0], [-1.0, 1.0]])
    lines = contour_lines(xs, ys, z, 0.0)
    assert len(lines) == 2
    assert all(len(p) == 2 for p, _ in lines)


def test_degenerate_grid_rejected():
    with pytest.raises(ValueError):
        contour_lines([0.0], [0.0, 1.0], np.zeros((2, 1)), 0.0)
    with pytest.raises(ValueError):
        render_contours([0.0, 1.0], [0.0], np.zeros((1, 2)), [0.0])
    with pytest.raises(ValueError):
        contour_lines([0.0, 1.0], [0.0, 1.0], np.zeros((3, 3)), 0.0)


def test_svg_is_deterministic_and_layered():
    g = Grid.from_bounds((-1, 1, -1, 1), 60)
    z = g.evaluate(V1)
    shade = g.evaluate(orbital_derivative(V1, CUBIC))
    a = render_contours(g.xs, g.ys, z, [0.02, 0.05], shade=shade,
                        polylines=[np.array([[0, 0], [0.5, 0.5]])])
    b = render_contours(g.xs, g.ys, z, [0.02, 0.05], shade=shade,
                        polylines=[np.array([[0, 0], [0.5, 0.5]])])
    assert a == b
    assert a.startswith("<svg") and a.rstrip().endswith("</svg>")
    assert "<rect" in a.split('fill="#bbbbbb"')[1]
    assert set(re.findall(r'data-level="([^"]+)"', a)) == {"0.02", "0.05"}
    with pytest.raises(ValueError):
        render_contours(g.xs, g.ys, z, [0.1], shade=np.zeros((3, 3)))
