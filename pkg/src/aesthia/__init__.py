"""Image complexity/aesthetic measures, layered-form complexity, and
pairwise-comparison survey ranking."""

from .imaging import (
    BinaryImage,
    GrayImage,
    Histogram,
    TernaryImage,
    adaptive_binarize,
    coarse_grain,
    load_image,
    luminance_histogram,
    otsu_binarize,
    sobel_magnitude,
)
from .measures import (
    MeasureConfig,
    MeasureVector,
    algorithmic_complexity,
    box_counts,
    box_dimension,
    contours,
    energy,
    entropy,
    euler_number,
    fractal_aesthetic,
    fractal_dimension,
    machado_cardoso,
    measure_all,
    skewness,
    structural_complexity,
)
from .lzw import lzw_decode, lzw_encode
from .geometry import (
    LayeredForm,
    LayerPolygon,
    angle_dispersion,
    convexity_deviation,
    load_form_json,
    physical_complexity,
)
from .ranking import (
    ComparisonEvent,
    Rating,
    RankingTable,
    filter_by_rd,
    glicko_update,
    replay,
)
from .stats import ResultsTable, correlation_matrix, pearson, spearman
from .datasets import DatasetManifest, load_manifest, read_results, write_results

__version__ = "0.1.0"
