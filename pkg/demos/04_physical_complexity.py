"""Physical complexity of layered forms.

Builds three synthetic forms as stacks of closed outlines: a plain prism
(square every layer), a twisting star, and a noisy blob. Per layer the
score averages the convex-hull area deficit with the quartile dispersion
of interior angles; the form score Sc is the layer mean. Also round-trips
the form-file JSON format used by `aesthia physical`.
"""

import json
import math
import tempfile
from pathlib import Path

import numpy as np

from aesthia import LayeredForm, LayerPolygon, load_form_json, physical_complexity
from aesthia.geometry import angle_dispersion, convexity_deviation, layer_score


def star(points, inner, outer, phase=0.0):
    vertices = []
    for k in range(points * 2):
        radius = outer if k % 2 == 0 else inner
        angle = phase + math.pi * k / points
        vertices.append((radius * math.cos(angle), radius * math.sin(angle)))
    return LayerPolygon(np.array(vertices))


def blob(n, rng):
    angles = np.sort(rng.uniform(0, 2 * math.pi, n))
    radii = rng.uniform(0.5, 1.0, n)
    return LayerPolygon(np.column_stack([radii * np.cos(angles), radii * np.sin(angles)]))


def main():
    rng = np.random.default_rng(4)
    square = LayerPolygon(np.array([(0, 0), (1, 0), (1, 1), (0, 1)], float))

    prism = LayeredForm(layers=tuple((square,) for _ in range(10)), z_indices=tuple(range(10)))
    twist = LayeredForm(
        layers=tuple((star(7, 0.45, 1.0, phase=0.1 * z),) for z in range(10)),
        z_indices=tuple(range(10)),
    )
    noisy = LayeredForm(
        layers=tuple((blob(14, rng),) for _ in range(10)), z_indices=tuple(range(10))
    )

    for name, form in (("square prism", prism), ("twisting star", twist), ("noisy blob", noisy)):
        first = form.layers[0][0]
        print(
            f"{name:>14}: Sc = {physical_complexity(form):.4f}   "
            f"(layer0: hull deficit {convexity_deviation(first):.3f}, "
            f"angle dispersion {angle_dispersion(first):.3f}, "
            f"layer score {layer_score(form.layers[0]):.3f})"
        )

    # the JSON interchange format
    doc = {
        "layers": [
            {"z": z, "polygons": [form_layer[0].vertices.tolist()]}
            for z, form_layer in zip(twist.z_indices, twist.layers)
        ]
    }
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "twist.json"
        path.write_text(json.dumps(doc))
        reloaded = load_form_json(path)
        print(f"\nJSON round-trip: Sc {physical_complexity(reloaded):.6f} "
              f"== {physical_complexity(twist):.6f}")


if __name__ == "__main__":
    main()
