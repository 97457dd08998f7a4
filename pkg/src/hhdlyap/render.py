"""Marching-squares contours and a small SVG writer."""

from collections import defaultdict

import numpy as np

__all__ = ["contour_lines", "render_contours"]

# corner order: bottom-left, bottom-right, top-right, top-left
_CORNER_EDGES = (("b", "l"), ("b", "r"), ("r", "t"), ("t", "l"))


def _edge_key(side, j, i):
    return {
        "b": ("h", j, i),
        "t": ("h", j + 1, i),
        "l": ("v", j, i),
        "r": ("v", j, i + 1),
    }[side]


def _edge_point(key, xs, ys, z, level):
    kind, j, i = key
    if kind == "h":
        a, b = z[j, i], z[j, i + 1]
        t = (level - a) / (b - a)
        return xs[i] + t * (xs[i + 1] - xs[i]), ys[j]
    a, b = z[j, i], z[j + 1, i]
    t = (level - a) / (b - a)
    return xs[i], ys[j] + t * (ys[j + 1] - ys[j])


def _check_grid(xs, ys, values):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    z = np.asarray(values, dtype=float)
    if xs.ndim != 1 or ys.ndim != 1 or len(xs) < 2 or len(ys) < 2:
        raise ValueError("degenerate grid: need at least 2x2 nodes")
    if z.shape != (len(ys), len(xs)):
        raise ValueError(f"values must have shape {(len(ys), len(xs))}, got {z.shape}")
    return xs, ys, z


def contour_lines(xs, ys, values, level):
    """Polylines of ``values == level``; returns a list of (points, closed)."""
    xs, ys, z = _check_grid(xs, ys, values)
    above = z > level
    corners = np.stack([above[:-1, :-1], above[:-1, 1:], above[1:, 1:], above[1:, :-1]])
    count = corners.sum(axis=0)
    cells = np.argwhere((count > 0) & (count < 4))
    adj = defaultdict(list)
    for j, i in cells:
        state = corners[:, j, i]
        crossings = sum(state[k] != state[(k + 1) % 4] for k in range(4))
        if crossings == 4:
            center = z[j:j + 2, i:i + 2].mean() > level
            isolated = [k for k in range(4) if state[k] != center]
        else:
            # the minority corners; one corner or an adjacent pair
            minority = state if count[j, i] <= 2 else ~state
            isolated = [k for k in range(4) if minority[k]]
            if len(isolated) == 2:
                # adjacent pair: the segment joins the two edges not shared by them
                k0, k1 = isolated
                e0 = set(_CORNER_EDGES[k0]) - set(_CORNER_EDGES[k1])
                e1 = set(_CORNER_EDGES[k1]) - set(_CORNER_EDGES[k0])
                a, b = _edge_key(e0.pop(), j, i), _edge_key(e1.pop(), j, i)
                adj[a].append(b)
                adj[b].append(a)
                continue
        for k in isolated:
            s0, s1 = _CORNER_EDGES[k]
            a, b = _edge_key(s0, j, i), _edge_key(s1, j, i)
            adj[a].append(b)
            adj[b].append(a)

    lines = []
    seen = set()

    def walk(start):
        path = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = next((n for n in adj[cur] if n != prev and n not in seen), None)
            if nxt is None:
                closed = len(path) > 2 and start in adj[cur] and prev is not None
                return path, closed
            seen.add(nxt)
            path.append(nxt)
            prev, cur = cur, nxt

    keys = sorted(adj)
    for key in keys:
        if key not in seen and len(adj[key]) == 1:
            lines.append(walk(key))
    for key in keys:
        if key not in seen:
            lines.append(walk(key))
    out = []
    for path, closed in lines:
        pts = np.array([_edge_point(k, xs, ys, z, level) for k in path])
        if closed:
            pts = np.vstack([pts, pts[:1]])
        out.append((pts, closed))
    return out


def _fmt(v):
    return f"{v:.3f}"


def render_contours(xs, ys, values, levels, shade=None, polylines=(), width=600):
    """SVG with contour polylines, optional positive-sign shading and extra polylines.

    ``shade`` is an array like ``values``; nodes with shade > 0 are filled.
    Output bytes depend only on the inputs.
    """
    xs, ys, z = _check_grid(xs, ys, values)
    xmin, xmax, ymin, ymax = xs[0], xs[-1], ys[0], ys[-1]
    height = width * (ymax - ymin) / (xmax - xmin)
    sx = width / (xmax - xmin)
    sy = height / (ymax - ymin)

    def px(x, y):
        return (x - xmin) * sx, (ymax - y) * sy

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="white"/>',
    ]
    if shade is not None:
        s = np.asarray(shade) > 0
        if s.shape != z.shape:
            raise ValueError("shade grid must match the value grid")
        dx = (xmax - xmin) / (len(xs) - 1)
        dy = (ymax - ymin) / (len(ys) - 1)
        parts.append('<g fill="#bbbbbb" stroke="none">')
        for j in range(len(ys)):
            row = s[j]
            i = 0
            while i < len(xs):
                if row[i]:
                    k = i
                    while k + 1 < len(xs) and row[k + 1]:
                        k += 1
                    x0, y0 = px(xs[i] - dx / 2, ys[j] + dy / 2)
                    parts.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" '
                                 f'width="{_fmt((k - i + 1) * dx * sx)}" height="{_fmt(dy * sy)}"/>')
                    i = k + 1
                else:
                    i += 1
        parts.append("</g>")
    parts.append('<g fill="none" stroke="black" stroke-width="1">')
    for level in levels:
        for pts, _ in contour_lines(xs, ys, z, level):
            coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (px(x, y) for x, y in pts))
            parts.append(f'<polyline data-level="{float(level)!r}" points="{coords}"/>')
    parts.append("</g>")
    if len(polylines):
        parts.append('<g fill="none" stroke="#1f4e9c" stroke-width="1">')
        for line in polylines:
            coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in (px(x, y) for x, y in line))
            parts.append(f'<polyline points="{coords}"/>')
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
