"""Independent oracles and fixture builders shared by the test modules.

Everything here is deliberately brute-force and kept separate from the
library code paths it checks: flood fill by BFS, box occupancy by literal
grid scans, Student-t tails by quadrature, Otsu by trying all thresholds.
"""

from __future__ import annotations

import math

import numpy as np


# -- images ----------------------------------------------------------------

def checkerboard(n: int = 512) -> np.ndarray:
    img = np.zeros((n, n), dtype=np.uint8)
    img[::2, 1::2] = 255
    img[1::2, ::2] = 255
    return img


def bright_line(n: int = 512) -> np.ndarray:
    img = np.zeros((n, n), dtype=np.uint8)
    img[n // 2, :] = 255
    return img


def sierpinski(depth: int = 8, size: int = 1024) -> np.ndarray:
    """Bright Sierpinski triangle: cell (x, y) on iff x & y == 0 at the
    depth's block resolution (block = size >> depth pixels)."""
    shift = int(math.log2(size)) - depth
    yy, xx = np.mgrid[0:size, 0:size]
    return np.where(((xx >> shift) & (yy >> shift)) == 0, 255, 0).astype(np.uint8)


def dark_disk(center, radius, shape=(64, 64)) -> np.ndarray:
    """Dark disk(s) on white ground; center may be one (y, x) or a list."""
    img = np.full(shape, 255, dtype=np.uint8)
    centers = center if isinstance(center, list) else [center]
    radii = radius if isinstance(radius, list) else [radius] * len(centers)
    yy, xx = np.mgrid[0 : shape[0], 0 : shape[1]]
    for (cy, cx), r in zip(centers, radii):
        img[(yy - cy) ** 2 + (xx - cx) ** 2 <= r * r] = 0
    return img


def punch_hole(img: np.ndarray, center, radius) -> np.ndarray:
    out = img.copy()
    yy, xx = np.mgrid[0 : img.shape[0], 0 : img.shape[1]]
    out[(yy - center[0]) ** 2 + (xx - center[1]) ** 2 <= radius * radius] = 255
    return out


# -- flood-fill component/hole oracle ---------------------------------------

def flood_components_and_holes(fg: np.ndarray) -> tuple[int, int]:
    """BFS count of 8-connected foreground components and 4-connected
    background regions that do not touch the border."""
    fg = fg.astype(bool)
    h, w = fg.shape
    seen = np.zeros((h, w), dtype=bool)

    def flood(sy, sx, want, neighbours):
        stack = [(sy, sx)]
        seen[sy, sx] = True
        touches_border = False
        while stack:
            y, x = stack.pop()
            if y in (0, h - 1) or x in (0, w - 1):
                touches_border = True
            for dy, dx in neighbours:
                ny, nx = y + dy, x + dx
                if 0 <= ny < h and 0 <= nx < w and not seen[ny, nx] and fg[ny, nx] == want:
                    seen[ny, nx] = True
                    stack.append((ny, nx))
        return touches_border

    eight = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]
    four = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    components = 0
    for y in range(h):
        for x in range(w):
            if fg[y, x] and not seen[y, x]:
                components += 1
                flood(y, x, True, eight)
    holes = 0
    for y in range(h):
        for x in range(w):
            if not fg[y, x] and not seen[y, x]:
                if not flood(y, x, False, four):
                    holes += 1
    return components, holes


# -- box counting oracle -----------------------------------------------------

def brute_box_counts(fg: np.ndarray, box_min: int, box_max_frac: float) -> list[tuple[int, int]]:
    fg = fg.astype(bool)
    h, w = fg.shape
    out = []
    eps = box_min
    while eps <= box_max_frac * min(w, h):
        count = 0
        for by in range(0, h, eps):
            for bx in range(0, w, eps):
                if fg[by : by + eps, bx : bx + eps].any():
                    count += 1
        out.append((eps, count))
        eps *= 2
    return out


def ols_slope(xs, ys) -> float:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    dx = xs - xs.mean()
    return float((dx * (ys - ys.mean())).sum() / (dx * dx).sum())


# -- Otsu oracle --------------------------------------------------------------

def brute_otsu(values: np.ndarray) -> int | None:
    """Try every threshold t in 1..255, split into {v < t} and {v >= t},
    return the smallest t maximizing between-class variance."""
    v = values.ravel().astype(float)
    best_t, best_var = None, -1.0
    for t in range(1, 256):
        lo = v[v < t]
        hi = v[v >= t]
        if lo.size == 0 or hi.size == 0:
            continue
        var = lo.size * hi.size * (lo.mean() - hi.mean()) ** 2
        if var > best_var + 1e-9:
            best_var, best_t = var, t
    return best_t


# -- Student-t tail oracle -----------------------------------------------------

def t_two_sided_p(t: float, dof: int, steps: int = 20001) -> float:
    """Two-sided tail probability by Simpson quadrature of the t density.

    The tail integral over (|t|, inf) is mapped to s in (0, 1] via
    t' = |t|/s, which is well behaved for dof >= 1; |t| = 0 gives p = 1.
    """
    t = abs(t)
    if t == 0.0:
        return 1.0
    const = math.gamma((dof + 1) / 2.0) / (
        math.sqrt(dof * math.pi) * math.gamma(dof / 2.0)
    )

    def density(x):
        return const * (1.0 + x * x / dof) ** (-(dof + 1) / 2.0)

    def integrand(s):
        if s == 0.0:
            return 0.0
        x = t / s
        return density(x) * t / (s * s)

    xs = np.linspace(0.0, 1.0, steps)
    ys = np.array([integrand(s) for s in xs])
    h = xs[1] - xs[0]
    simpson = (ys[0] + ys[-1] + 4 * ys[1:-1:2].sum() + 2 * ys[2:-2:2].sum()) * h / 3.0
    return 2.0 * simpson


# -- Glicko single-game oracle --------------------------------------------------

def glicko_oracle(r1, rd1, r2, rd2, score):
    """Plain transcription of the five update formulas for one side."""
    q = math.log(10.0) / 400.0
    g = 1.0 / math.sqrt(1.0 + 3.0 * q * q * rd2 * rd2 / math.pi**2)
    e = 1.0 / (1.0 + 10.0 ** (-g * (r1 - r2) / 400.0))
    d2 = 1.0 / (q * q * g * g * e * (1.0 - e))
    new_r = r1 + q / (1.0 / rd1**2 + 1.0 / d2) * g * (score - e)
    new_rd = math.sqrt(1.0 / (1.0 / rd1**2 + 1.0 / d2))
    return new_r, new_rd


# -- polygon helpers -------------------------------------------------------------

CROSS_VERTICES = [
    (1, 0), (2, 0), (2, 1), (3, 1), (3, 2), (2, 2),
    (2, 3), (1, 3), (1, 2), (0, 2), (0, 1), (1, 1),
]
# Hand shoelace: cross area = 5; its convex hull is the corner-cut octagon
# with area 7 (the 3x3 bounding square minus four half-unit corner
# triangles), so the deviation is 1 - 5/7 = 2/7.
CROSS_DEVIATION = 2.0 / 7.0


def shoelace(points) -> float:
    pts = list(points)
    total = 0.0
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        total += x1 * y2 - x2 * y1
    return total / 2.0
