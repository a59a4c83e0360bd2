"""Image decoding and the pre-processing transforms feeding the measures.

Images are 8-bit luminance rasters held as 2-D numpy arrays (row-major,
shape ``(height, width)``). All transforms here are pure functions:
identical input bytes yield identical output rasters, and every output
array is freshly allocated, so the types are safe to share across threads.

Border policy, fixed once for the whole toolkit: local statistics
(adaptive binarisation, coarse-graining) use windows clipped at the image
border; convolution (Sobel) uses edge replication. Neither invents
phantom intensities.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CodecError, ParameterError

# TernaryImage pixel codes.
WHITE = 0
GREY = 1
BLACK = 2

# Bytes used when a ternary raster is serialized for compression.
_TERNARY_BYTES = np.array([255, 128, 0], dtype=np.uint8)  # white, grey, black


def _as_raster(data, allowed_max: int) -> np.ndarray:
    arr = np.asarray(data)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ParameterError(f"raster must be a non-empty 2-D array, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ParameterError(f"raster values must be integers, got dtype {arr.dtype}")
        if arr.min() < 0 or arr.max() > allowed_max:
            raise ParameterError(f"raster values must lie in [0, {allowed_max}]")
        arr = arr.astype(np.uint8)
    elif allowed_max < 255 and arr.max(initial=0) > allowed_max:
        raise ParameterError(f"raster values must lie in [0, {allowed_max}]")
    return arr


@dataclass(frozen=True)
class GrayImage:
    """8-bit luminance raster, values in [0, 255]."""

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _as_raster(self.data, 255))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def pixel_count(self) -> int:
        return self.data.size

    def to_bytes(self) -> bytes:
        """Row-major luminance bytes (the raw buffer the codecs see)."""
        return self.data.tobytes()


@dataclass(frozen=True)
class BinaryImage:
    """Foreground mask, values in {0, 1} with 1 = foreground."""

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _as_raster(self.data, 1))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def foreground_count(self) -> int:
        return int(self.data.sum())


@dataclass(frozen=True)
class TernaryImage:
    """Three-level raster with codes WHITE=0, GREY=1, BLACK=2."""

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _as_raster(self.data, 2))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    def to_bytes(self) -> bytes:
        """Serialize codes as one byte per pixel: white=255, grey=128, black=0."""
        return _TERNARY_BYTES[self.data].tobytes()


@dataclass(frozen=True)
class Histogram:
    """256-bin luminance histogram."""

    bins: np.ndarray
    total: int

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=np.int64)
        if bins.shape != (256,) or bins.min() < 0:
            raise ParameterError("histogram needs 256 non-negative counts")
        if int(bins.sum()) != self.total:
            raise ParameterError("histogram counts must sum to the pixel total")
        object.__setattr__(self, "bins", bins)


def load_image(path) -> GrayImage:
    """Decode a PNG or JPEG file to 8-bit luminance.

    RGB inputs are converted with ITU-R BT.601 weights
    (0.299 R + 0.587 G + 0.114 B), rounded to nearest; 16-bit grayscale is
    scaled to 8-bit by a right shift. Missing files raise FileNotFoundError,
    undecodable or non-PNG/JPEG content raises CodecError; both name the path.
    """
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"image file not found: {p}")
    try:
        with Image.open(p) as im:
            if im.format not in ("PNG", "JPEG"):
                raise CodecError(f"unsupported image format {im.format!r}: {p}")
            im.load()
            return _to_luminance(im)
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise CodecError(f"cannot decode image {p}: {exc}") from exc


def _to_luminance(im: Image.Image) -> GrayImage:
    if im.mode == "L":
        return GrayImage(np.asarray(im, dtype=np.uint8))
    if im.mode in ("I;16", "I;16B", "I;16L"):
        arr = np.asarray(im).astype(np.int64) >> 8
        return GrayImage(np.clip(arr, 0, 255).astype(np.uint8))
    if im.mode == "I":
        # 32-bit integer mode; PNGs land here with 16-bit sample depth
        arr = np.asarray(im).astype(np.int64)
        if arr.max(initial=0) > 255:
            arr = arr >> 8
        return GrayImage(np.clip(arr, 0, 255).astype(np.uint8))
    if im.mode in ("P", "LA", "RGBA", "CMYK", "YCbCr"):
        im = im.convert("RGB")
    if im.mode == "RGB":
        rgb = np.asarray(im, dtype=np.float64)
        y = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
        return GrayImage(np.rint(y).astype(np.uint8))
    if im.mode == "1":
        return GrayImage(np.asarray(im, dtype=np.uint8) * 255)
    raise CodecError(f"unsupported pixel mode {im.mode!r}")


def luminance_histogram(img: GrayImage) -> Histogram:
    """Count pixels per luminance level."""
    bins = np.bincount(img.data.ravel(), minlength=256).astype(np.int64)
    return Histogram(bins=bins, total=img.pixel_count)


def otsu_threshold(hist: Histogram) -> int | None:
    """Threshold maximizing between-class variance; None for constant images.

    The split is values < t versus values >= t, t in 1..255. Ties pick the
    smallest t so the result is deterministic.
    """
    counts = hist.bins.astype(np.float64)
    total = counts.sum()
    if total <= 0:
        raise ParameterError("empty histogram")
    if np.count_nonzero(counts) < 2:
        return None
    levels = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(counts)[:-1]  # w0[k] = #pixels with value <= k, t = k+1
    w1 = total - w0
    m0 = np.cumsum(counts * levels)[:-1]
    m1 = m0[-1] + counts[-1] * 255.0 - m0
    valid = (w0 > 0) & (w1 > 0)
    var_b = np.zeros(255)
    var_b[valid] = w0[valid] * w1[valid] * (m0[valid] / w0[valid] - m1[valid] / w1[valid]) ** 2
    return int(np.argmax(var_b)) + 1


def otsu_binarize(img: GrayImage) -> BinaryImage:
    """Global Otsu binarisation; foreground = the darker class.

    The survey corpora are dark forms on light ground, so pixels below the
    threshold become foreground. A constant image has no split and maps to
    all-background.
    """
    t = otsu_threshold(luminance_histogram(img))
    if t is None:
        return BinaryImage(np.zeros_like(img.data))
    return BinaryImage((img.data < t).astype(np.uint8))


def _clipped_window_sums(values: np.ndarray, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Sum and pixel count of the (2r+1)^2 window around each pixel,
    windows clipped at the border. Integer-exact via an integral image."""
    h, w = values.shape
    integral = np.zeros((h + 1, w + 1), dtype=np.int64)
    integral[1:, 1:] = values.astype(np.int64).cumsum(axis=0).cumsum(axis=1)
    rows = np.arange(h)
    cols = np.arange(w)
    r0 = np.maximum(rows - r, 0)
    r1 = np.minimum(rows + r + 1, h)
    c0 = np.maximum(cols - r, 0)
    c1 = np.minimum(cols + r + 1, w)
    sums = (
        integral[r1[:, None], c1[None, :]]
        - integral[r0[:, None], c1[None, :]]
        - integral[r1[:, None], c0[None, :]]
        + integral[r0[:, None], c0[None, :]]
    )
    counts = (r1 - r0)[:, None] * (c1 - c0)[None, :]
    return sums, counts


def adaptive_binarize(img: GrayImage, r: int) -> BinaryImage:
    """Local-mean binarisation: 1 where a pixel exceeds the mean of the
    (2r+1)x(2r+1) block centered on it, blocks clipped at borders."""
    if r < 1:
        raise ParameterError(f"radius must be >= 1, got {r}")
    if r >= min(img.width, img.height):
        raise ParameterError(
            f"radius {r} must be smaller than the image's minimum dimension "
            f"{min(img.width, img.height)}"
        )
    sums, counts = _clipped_window_sums(img.data, r)
    # value > sum/count, kept in exact integer arithmetic
    fg = img.data.astype(np.int64) * counts > sums
    return BinaryImage(fg.astype(np.uint8))


_SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
_SOBEL_Y = np.array([[-1, -2, -1], [0, 0, 0], [1, 2, 1]], dtype=np.float64)


def sobel_magnitude(img: GrayImage) -> GrayImage:
    """Gradient magnitude from the standard 3x3 Sobel pair.

    Values are normalized to [0, 1] before filtering; the magnitude is
    clamped to [0, 1] and re-quantized to [0, 255]. Borders are handled by
    edge replication.
    """
    if img.width < 3 or img.height < 3:
        raise ParameterError("Sobel filtering needs an image of at least 3x3 pixels")
    v = img.data.astype(np.float64) / 255.0
    padded = np.pad(v, 1, mode="edge")
    gx = np.zeros_like(v)
    gy = np.zeros_like(v)
    h, w = v.shape
    for dy in range(3):
        for dx in range(3):
            window = padded[dy : dy + h, dx : dx + w]
            if _SOBEL_X[dy, dx]:
                gx += _SOBEL_X[dy, dx] * window
            if _SOBEL_Y[dy, dx]:
                gy += _SOBEL_Y[dy, dx] * window
    mag = np.clip(np.hypot(gx, gy), 0.0, 1.0)
    return GrayImage(np.rint(mag * 255.0).astype(np.uint8))


def coarse_grain(img: GrayImage, r_cg: int, delta: float) -> TernaryImage:
    """Low-pass the binarized image into three levels.

    The image is Otsu-binarized, then each pixel's foreground ratio eta over
    the clipped (2*r_cg+1)^2 window maps to white (eta <= delta), grey
    (delta < eta <= 1-delta) or black (eta > 1-delta).
    """
    if r_cg < 1:
        raise ParameterError(f"coarse-grain radius must be >= 1, got {r_cg}")
    if not 0.0 <= delta <= 0.5:
        raise ParameterError(f"delta must lie in [0, 0.5], got {delta}")
    fg = otsu_binarize(img).data
    sums, counts = _clipped_window_sums(fg, r_cg)
    eta = sums / counts
    codes = np.full(fg.shape, GREY, dtype=np.uint8)
    codes[eta <= delta] = WHITE
    codes[eta > 1.0 - delta] = BLACK
    return TernaryImage(codes)
