"""Physical complexity of layered forms.

A form is a stack of z-ordered layers, each holding one or more closed
simple polygons (the captured outlines of a grown 3D shape). Two
scale-free quantities are computed per polygon: how far it deviates from
its own convex hull (area deficit ratio) and the quartile coefficient of
dispersion of its interior angles. A layer scores the mean of its
polygons' (deviation + dispersion) / 2, and the form's score Sc is the
unweighted mean over layers, so Sc always lies in [0, 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, ParameterError


def shoelace_area(vertices: np.ndarray) -> float:
    """Signed polygon area; positive for counter-clockwise winding."""
    x = vertices[:, 0]
    y = vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _segments_intersect(p1, p2, p3, p4) -> bool:
    """Proper or improper intersection of segments p1p2 and p3p4."""

    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if v > 0:
            return 1
        if v < 0:
            return -1
        return 0

    def on_segment(a, b, c):
        return (
            min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    o1, o2 = orient(p1, p2, p3), orient(p1, p2, p4)
    o3, o4 = orient(p3, p4, p1), orient(p3, p4, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_segment(p1, p2, p3):
        return True
    if o2 == 0 and on_segment(p1, p2, p4):
        return True
    if o3 == 0 and on_segment(p3, p4, p1):
        return True
    if o4 == 0 and on_segment(p3, p4, p2):
        return True
    return False


@dataclass(frozen=True)
class LayerPolygon:
    """Closed simple polygon; first vertex != last, closure implied."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ParameterError(f"polygon vertices must be an (n, 2) array, got shape {v.shape}")
        if v.shape[0] >= 2 and np.array_equal(v[0], v[-1]):
            v = v[:-1]  # tolerate an explicit closing point
        if v.shape[0] < 3:
            raise ParameterError("polygon needs at least 3 distinct vertices")
        if not np.isfinite(v).all():
            raise ParameterError("polygon coordinates must be finite")
        if shoelace_area(v) == 0.0:
            raise ParameterError("polygon has zero area")
        _check_simple(v)
        object.__setattr__(self, "vertices", v)

    def __len__(self) -> int:
        return self.vertices.shape[0]


def _check_simple(v: np.ndarray) -> None:
    """Reject self-intersecting outlines. Bounding-box prefiltering keeps
    the all-pairs test fast for the many-hundred-vertex layers real grown
    forms produce; the exact test runs only on overlapping candidates."""
    n = v.shape[0]
    starts = v
    ends = np.roll(v, -1, axis=0)
    if np.any(np.all(starts == ends, axis=1)):
        raise ParameterError("polygon has a zero-length edge")
    lo = np.minimum(starts, ends)
    hi = np.maximum(starts, ends)
    for i in range(n - 2):
        # candidate edges j > i whose boxes overlap edge i, excluding the
        # two neighbours that legitimately share an endpoint
        j_start = i + 2
        j_stop = n if i > 0 else n - 1  # edge 0 is adjacent to edge n-1
        if j_start >= j_stop:
            continue
        sel = slice(j_start, j_stop)
        overlap = np.all(lo[sel] <= hi[i], axis=1) & np.all(hi[sel] >= lo[i], axis=1)
        for j in np.nonzero(overlap)[0] + j_start:
            if _segments_intersect(starts[i], ends[i], starts[j], ends[j]):
                raise ParameterError(f"polygon is self-intersecting (edges {i} and {j})")


@dataclass(frozen=True)
class LayeredForm:
    """Stack of layers; z strictly increasing, each layer >= 1 polygon."""

    layers: tuple[tuple[LayerPolygon, ...], ...]
    z_indices: tuple[int, ...]

    def __post_init__(self):
        if len(self.layers) < 1:
            raise ParameterError("a form needs at least one layer")
        if len(self.layers) != len(self.z_indices):
            raise ParameterError("one z index per layer required")
        if any(len(layer) < 1 for layer in self.layers):
            raise ParameterError("every layer needs at least one polygon")
        if any(b <= a for a, b in zip(self.z_indices, self.z_indices[1:])):
            raise ParameterError("z indices must be strictly increasing")


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Convex hull by the monotone chain algorithm, counter-clockwise,
    collinear boundary points dropped."""
    pts = np.unique(np.asarray(points, dtype=np.float64), axis=0)
    if pts.shape[0] < 3:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[np.ndarray] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[np.ndarray] = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def convexity_deviation(poly: LayerPolygon) -> float:
    """1 - polygon area / convex hull area; 0 for convex polygons."""
    area = abs(shoelace_area(poly.vertices))
    hull = convex_hull(poly.vertices)
    if hull.shape[0] < 3:
        raise DomainError("degenerate polygon: all vertices collinear")
    hull_area = abs(shoelace_area(hull))
    if hull_area == 0.0:
        raise DomainError("degenerate polygon: zero hull area")
    return max(0.0, 1.0 - area / hull_area)  # clamp float dust on convex input


def interior_angles(poly: LayerPolygon) -> np.ndarray:
    """Interior angle at each vertex, degrees in (0, 360)."""
    v = poly.vertices
    if shoelace_area(v) < 0:
        v = v[::-1]  # normalize to counter-clockwise
    incoming = v - np.roll(v, 1, axis=0)
    outgoing = np.roll(v, -1, axis=0) - v
    cross = incoming[:, 0] * outgoing[:, 1] - incoming[:, 1] * outgoing[:, 0]
    dot = (incoming * outgoing).sum(axis=1)
    turn = np.degrees(np.arctan2(cross, dot))
    return 180.0 - turn


def angle_dispersion(poly: LayerPolygon) -> float:
    """Quartile coefficient of dispersion (Q3-Q1)/(Q3+Q1) of the interior
    angles; quartiles by linear interpolation."""
    angles = interior_angles(poly)
    if angles.size < 3:
        raise ParameterError("angle dispersion needs at least 3 angles")
    q1, q3 = np.percentile(angles, [25.0, 75.0])
    return float((q3 - q1) / (q3 + q1))


def polygon_score(poly: LayerPolygon) -> float:
    return (convexity_deviation(poly) + angle_dispersion(poly)) / 2.0


def layer_score(polygons) -> float:
    return float(np.mean([polygon_score(p) for p in polygons]))


def physical_complexity(form: LayeredForm) -> float:
    """Mean layer score over the stack; layers weighted equally."""
    return float(np.mean([layer_score(layer) for layer in form.layers]))


def load_form_json(path) -> LayeredForm:
    """Read a form file: {"layers": [{"z": int, "polygons": [[[x, y], ...], ...]}, ...]}.

    Validation failures name the offending layer index.
    """
    p = Path(path)
    with open(p, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "layers" not in doc:
        raise ParameterError(f"{p}: form document must contain a 'layers' list")
    layers = []
    z_indices = []
    for idx, entry in enumerate(doc["layers"]):
        try:
            z = int(entry["z"])
            polys = tuple(LayerPolygon(np.asarray(ring, dtype=np.float64))
                          for ring in entry["polygons"])
            if not polys:
                raise ParameterError("layer holds no polygons")
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"{p}: invalid layer {idx}: {exc}") from exc
        layers.append(polys)
        z_indices.append(z)
    return LayeredForm(layers=tuple(layers), z_indices=tuple(z_indices))
