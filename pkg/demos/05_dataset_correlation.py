"""End-to-end dataset workflow: manifest -> measures -> correlation report.

Creates a small synthetic corpus whose "artist score" is deliberately tied
to image busyness, runs the measure suite over the manifest, writes the
results CSV, and renders the correlation matrix with the best measure
starred, the same shape the CLI produces via:

    aesthia measure manifest.csv -o results.csv
    aesthia correlate results.csv --markdown
"""

import tempfile
from pathlib import Path

import numpy as np
from PIL import Image

from aesthia import GrayImage, MeasureConfig, load_manifest, measure_all, write_results
from aesthia.datasets import RESULT_COLUMNS, read_results
from aesthia.measures import MEASURE_NAMES
from aesthia.stats import ResultsTable, correlation_matrix, render_matrix_text


def busy_image(level, rng):
    """Dark blobs on white; higher level = more, smaller blobs."""
    canvas = np.full((128, 128), 255, dtype=np.uint8)
    yy, xx = np.mgrid[0:128, 0:128]
    for _ in range(2 + level * 3):
        cy, cx = rng.integers(10, 118, 2)
        radius = max(3, 14 - level)
        canvas[(yy - cy) ** 2 + (xx - cx) ** 2 <= radius**2] = 0
    return canvas


def main():
    rng = np.random.default_rng(11)
    cfg = MeasureConfig()
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        (root / "imgs").mkdir()
        lines = ["id,path,score,category"]
        for i in range(24):
            level = i % 6
            name = f"img{i:02d}.png"
            Image.fromarray(busy_image(level, rng)).save(root / "imgs" / name)
            score = level + rng.normal(0.0, 0.3)
            lines.append(f"img{i:02d},imgs/{name},{score:.3f},")
        manifest_path = root / "manifest.csv"
        manifest_path.write_text("\n".join(lines) + "\n")

        manifest = load_manifest(manifest_path)
        table = ResultsTable(columns=RESULT_COLUMNS)
        for entry in manifest.entries:
            img = GrayImage(np.asarray(Image.open(entry.path)))
            values = measure_all(img, cfg).as_dict()
            values["score"] = entry.score
            table.add_row(entry.image_id, values)
        write_results(table, root / "results.csv")

        back = read_results(root / "results.csv")
        usable = [c for c in MEASURE_NAMES if np.isfinite(back.column(c)).sum() >= 3]
        matrix = correlation_matrix(back, usable, score_column="score")
        print(render_matrix_text(matrix))


if __name__ == "__main__":
    main()
