"""The per-image complexity and aesthetic measures.

Eleven quantities are computed per image: luminance entropy and energy,
contour and Euler counts of the binarized image, three compression-based
complexities (lossless ratio, coarse-grained "structural" ratio, and the
lossy reconstruction-error measure with and without edge pre-processing),
box-counting fractal dimension with its Gaussian preference score, and
luminance skewness.

Everything here is pure and reentrant; batch drivers may fan images out
across workers freely.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from PIL import Image
from scipy import ndimage

from . import imaging
from .errors import CodecError, DomainError, ParameterError
from .imaging import BinaryImage, GrayImage, Histogram
from .lzw import lzw_encode

# Prompt-independent defaults; radii in pixels.
DEFAULT_COARSE_RADIUS = 5
DEFAULT_COARSE_DELTA = 0.23
DEFAULT_JPEG_QUALITY = 0.75
DEFAULT_PEAK_DIMENSION = 1.35
DEFAULT_PREFERENCE_WIDTH = 0.2


@dataclass(frozen=True)
class MeasureConfig:
    """Tunable parameters shared by the measure suite."""

    r_adapt: int = 2
    r_cg: int = DEFAULT_COARSE_RADIUS
    delta: float = DEFAULT_COARSE_DELTA
    jpeg_quality: float = DEFAULT_JPEG_QUALITY
    peak: float = DEFAULT_PEAK_DIMENSION
    sigma: float = DEFAULT_PREFERENCE_WIDTH
    box_min: int = 2
    box_max_frac: float = 0.25

    def validate(self) -> "MeasureConfig":
        if self.r_adapt < 1 or self.r_cg < 1:
            raise ParameterError("radii must be >= 1")
        if not 0.0 <= self.delta <= 0.5:
            raise ParameterError(f"delta must lie in [0, 0.5], got {self.delta}")
        if not 0.0 < self.jpeg_quality <= 1.0:
            raise ParameterError(f"jpeg_quality must lie in (0, 1], got {self.jpeg_quality}")
        if self.sigma <= 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")
        if self.box_min < 2:
            raise ParameterError(f"box_min must be >= 2, got {self.box_min}")
        if not 0.0 < self.box_max_frac <= 1.0:
            raise ParameterError(f"box_max_frac must lie in (0, 1], got {self.box_max_frac}")
        return self


# CSV column names, in output order, mapped to MeasureVector attributes.
MEASURE_COLUMNS = (
    ("S", "entropy"),
    ("E", "energy"),
    ("T", "contour_count"),
    ("gamma", "euler"),
    ("C_a", "algorithmic"),
    ("C_s", "structural"),
    ("C_mc", "machado_cardoso"),
    ("C_mc_E", "machado_cardoso_edge"),
    ("D", "fractal_dim"),
    ("D_a", "fractal_aesthetic"),
    ("S_k", "skew"),
)
MEASURE_NAMES = tuple(name for name, _ in MEASURE_COLUMNS)


@dataclass
class MeasureVector:
    """Per-image measure values; a field is None when its measure failed
    for this image (the reason is kept in ``errors``)."""

    entropy: float | None = None
    energy: float | None = None
    contour_count: int | None = None
    euler: int | None = None
    algorithmic: float | None = None
    structural: float | None = None
    machado_cardoso: float | None = None
    machado_cardoso_edge: float | None = None
    fractal_dim: float | None = None
    fractal_aesthetic: float | None = None
    skew: float | None = None
    errors: dict[str, str] = field(default_factory=dict)

    def as_dict(self) -> dict[str, float | int | None]:
        """Values keyed by CSV column name."""
        return {name: getattr(self, attr) for name, attr in MEASURE_COLUMNS}


def entropy(hist: Histogram) -> float:
    """Shannon entropy (nats) of the luminance distribution."""
    if hist.total <= 0:
        raise ParameterError("empty histogram")
    p = hist.bins[hist.bins > 0] / hist.total
    return float(-(p * np.log(p)).sum() + 0.0)  # +0.0 normalizes -0.0


def energy(hist: Histogram) -> float:
    """Sum of squared bin probabilities; 1 for constant images,
    1/256 at the uniform histogram."""
    if hist.total <= 0:
        raise ParameterError("empty histogram")
    p = hist.bins / hist.total
    return float((p * p).sum())


_EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


def components_and_holes(binary: BinaryImage) -> tuple[int, int]:
    """(8-connected foreground components, 4-connected interior holes)."""
    fg = binary.data.astype(bool)
    _, n_components = ndimage.label(fg, structure=_EIGHT_CONNECTED)
    bg_labels, n_bg = ndimage.label(~fg)  # default structure = 4-connectivity
    if n_bg == 0:
        return n_components, 0
    border = np.unique(
        np.concatenate(
            [bg_labels[0, :], bg_labels[-1, :], bg_labels[:, 0], bg_labels[:, -1]]
        )
    )
    n_border = int(np.count_nonzero(border))
    return n_components, n_bg - n_border


def contours(img: GrayImage) -> int:
    """Number of boundary curves of the binarized image: one per connected
    component plus one per hole."""
    comps, holes = components_and_holes(imaging.otsu_binarize(img))
    return comps + holes


def euler_number(img: GrayImage) -> int:
    """Connected components minus holes of the binarized image."""
    comps, holes = components_and_holes(imaging.otsu_binarize(img))
    return comps - holes


def algorithmic_complexity(img: GrayImage) -> float:
    """LZW compressed size over raw size of the luminance bytes."""
    return len(lzw_encode(img.to_bytes())) / img.pixel_count


def structural_complexity(img: GrayImage, cfg: MeasureConfig | None = None) -> float:
    """Compression ratio of the coarse-grained three-level raster.

    The coarse-graining removes high-frequency spatial and intensity detail,
    so this behaves like a noise-robust variant of algorithmic_complexity.
    """
    cfg = (cfg or MeasureConfig()).validate()
    ternary = imaging.coarse_grain(img, cfg.r_cg, cfg.delta)
    return len(lzw_encode(ternary.to_bytes())) / img.pixel_count


def jpeg_roundtrip(img: GrayImage, quality: float) -> tuple[GrayImage, int]:
    """Encode to in-memory JPEG and decode back; returns (decoded image,
    compressed byte count). quality is on the (0, 1] scale."""
    q = int(round(quality * 100))
    buf = io.BytesIO()
    try:
        Image.fromarray(img.data, mode="L").save(buf, format="JPEG", quality=q)
        compressed = buf.getvalue()
        decoded = np.asarray(Image.open(io.BytesIO(compressed)).convert("L"), dtype=np.uint8)
    except OSError as exc:
        raise CodecError(f"JPEG round-trip failed: {exc}") from exc
    return GrayImage(decoded), len(compressed)


def machado_cardoso(img: GrayImage, cfg: MeasureConfig | None = None, edge: bool = False) -> float:
    """Lossy-compression complexity: RMS reconstruction error times the
    compressed/raw size ratio. With edge=True the image is Sobel-filtered
    first."""
    cfg = (cfg or MeasureConfig()).validate()
    src = imaging.sobel_magnitude(img) if edge else img
    decoded, compressed_size = jpeg_roundtrip(src, cfg.jpeg_quality)
    a = src.data.astype(np.float64) / 255.0
    b = decoded.data.astype(np.float64) / 255.0
    rms = math.sqrt(float(np.mean((a - b) ** 2)))
    return rms * compressed_size / src.pixel_count


def box_sizes(width: int, height: int, cfg: MeasureConfig) -> list[int]:
    """Doubling box sizes from box_min up to box_max_frac of the short side."""
    limit = cfg.box_max_frac * min(width, height)
    sizes = []
    eps = cfg.box_min
    while eps <= limit:
        sizes.append(eps)
        eps *= 2
    return sizes


def box_counts(binary: BinaryImage, cfg: MeasureConfig | None = None) -> list[tuple[int, int]]:
    """Occupied-box counts per box size, grid anchored at the origin with
    partial border cells included."""
    cfg = (cfg or MeasureConfig()).validate()
    if binary.foreground_count == 0:
        raise DomainError("box counting is undefined for a blank image")
    fg = binary.data.astype(bool)
    h, w = fg.shape
    pairs = []
    for eps in box_sizes(w, h, cfg):
        rows = math.ceil(h / eps)
        cols = math.ceil(w / eps)
        padded = np.zeros((rows * eps, cols * eps), dtype=bool)
        padded[:h, :w] = fg
        occupied = padded.reshape(rows, eps, cols, eps).any(axis=(1, 3))
        pairs.append((eps, int(occupied.sum())))
    return pairs


def box_dimension(binary: BinaryImage, cfg: MeasureConfig | None = None) -> float:
    """Box-counting dimension of a binary set: negative OLS slope of
    ln(count) against ln(box size), clamped to [0, 2]."""
    cfg = (cfg or MeasureConfig()).validate()
    pairs = box_counts(binary, cfg)
    if len(pairs) < 3:
        raise ParameterError(
            f"need at least 3 box sizes for a dimension fit, image supports {len(pairs)}"
        )
    log_eps = np.log([eps for eps, _ in pairs])
    log_n = np.log([count for _, count in pairs])
    slope = np.polyfit(log_eps, log_n, 1)[0]
    return float(np.clip(-slope, 0.0, 2.0))


def fractal_dimension(img: GrayImage, cfg: MeasureConfig | None = None) -> float:
    """Box-counting dimension of the adaptively binarized image."""
    cfg = (cfg or MeasureConfig()).validate()
    binary = imaging.adaptive_binarize(img, cfg.r_adapt)
    if binary.foreground_count == 0:
        raise DomainError("adaptive binarisation produced a blank image")
    return box_dimension(binary, cfg)


def fractal_aesthetic(dimension: float, cfg: MeasureConfig | None = None) -> float:
    """Gaussian preference score over fractal dimension, peaking at
    cfg.peak with width cfg.sigma."""
    cfg = (cfg or MeasureConfig()).validate()
    return math.exp(-((dimension - cfg.peak) ** 2) / (2.0 * cfg.sigma**2))


def skewness(hist: Histogram) -> float:
    """Skewness of the luminance distribution, m3 / m2^(3/2)."""
    if hist.total < 2:
        raise ParameterError("skewness needs at least two pixels")
    levels = np.arange(256, dtype=np.float64)
    p = hist.bins / hist.total
    mean = float((levels * p).sum())
    centered = levels - mean
    m2 = float((centered**2 * p).sum())
    if m2 == 0.0:
        raise DomainError("skewness is undefined at zero variance")
    m3 = float((centered**3 * p).sum())
    return m3 / m2**1.5


def measure_selected(
    img: GrayImage, cfg: MeasureConfig | None = None, names=MEASURE_NAMES
) -> MeasureVector:
    """Compute the requested measures (CSV column names); individual
    failures are recorded in .errors and leave their field None instead of
    aborting the rest. D_a implies D."""
    cfg = (cfg or MeasureConfig()).validate()
    unknown = set(names) - set(MEASURE_NAMES)
    if unknown:
        raise ParameterError(f"unknown measure names: {sorted(unknown)}")
    wanted = set(names)
    if "D_a" in wanted:
        wanted.add("D")
    vec = MeasureVector()

    def attempt(attr, fn):
        try:
            setattr(vec, attr, fn())
        except (ParameterError, DomainError, CodecError) as exc:
            vec.errors[attr] = str(exc)

    hist = (
        imaging.luminance_histogram(img) if wanted & {"S", "E", "S_k"} else None
    )
    if "S" in wanted:
        attempt("entropy", lambda: entropy(hist))
    if "E" in wanted:
        attempt("energy", lambda: energy(hist))
    if wanted & {"T", "gamma"}:
        try:
            comps, holes = components_and_holes(imaging.otsu_binarize(img))
            if "T" in wanted:
                vec.contour_count = comps + holes
            if "gamma" in wanted:
                vec.euler = comps - holes
        except (ParameterError, DomainError) as exc:
            for attr in ("contour_count", "euler"):
                vec.errors[attr] = str(exc)
    if "C_a" in wanted:
        attempt("algorithmic", lambda: algorithmic_complexity(img))
    if "C_s" in wanted:
        attempt("structural", lambda: structural_complexity(img, cfg))
    if "C_mc" in wanted:
        attempt("machado_cardoso", lambda: machado_cardoso(img, cfg, edge=False))
    if "C_mc_E" in wanted:
        attempt("machado_cardoso_edge", lambda: machado_cardoso(img, cfg, edge=True))
    if "D" in wanted:
        attempt("fractal_dim", lambda: fractal_dimension(img, cfg))
    if "D_a" in wanted:
        if vec.fractal_dim is not None:
            attempt("fractal_aesthetic", lambda: fractal_aesthetic(vec.fractal_dim, cfg))
        else:
            vec.errors["fractal_aesthetic"] = "no fractal dimension available"
    if "S_k" in wanted:
        attempt("skew", lambda: skewness(hist))
    return vec


def measure_all(img: GrayImage, cfg: MeasureConfig | None = None) -> MeasureVector:
    """Compute the full measure suite; see measure_selected."""
    return measure_selected(img, cfg, MEASURE_NAMES)
