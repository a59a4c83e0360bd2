import math

import numpy as np
import pytest

from aesthia import imaging, measures
from aesthia.errors import DomainError, ParameterError
from aesthia.imaging import BinaryImage, GrayImage, Histogram, luminance_histogram
from aesthia.measures import (
    MeasureConfig,
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
    measure_selected,
    skewness,
    structural_complexity,
)

import helpers


def gray(arr):
    return GrayImage(np.asarray(arr, dtype=np.uint8))


def hist_of(arr):
    return luminance_histogram(gray(arr))


CFG = MeasureConfig()


class TestEntropyEnergy:
    def test_constant(self):
        h = hist_of(np.full((4, 4), 9))
        assert entropy(h) == 0.0
        assert energy(h) == 1.0

    def test_fifty_fifty(self):
        img = np.zeros((2, 2), dtype=np.uint8)
        img[:, 1] = 255
        h = hist_of(img)
        assert entropy(h) == pytest.approx(math.log(2), abs=1e-12)
        assert energy(h) == 0.5

    def test_uniform_256(self):
        h = Histogram(bins=np.full(256, 4, dtype=np.int64), total=1024)
        assert entropy(h) == pytest.approx(math.log(256), abs=1e-12)
        assert energy(h) == pytest.approx(1 / 256, abs=1e-15)

    def test_empty_histogram(self):
        h = Histogram(bins=np.zeros(256, dtype=np.int64), total=0)
        with pytest.raises(ParameterError):
            entropy(h)
        with pytest.raises(ParameterError):
            energy(h)

    def test_concentration_ordering(self):
        # progressively flatter histograms: entropy rises, energy falls
        previous_s, previous_e = -1.0, 2.0
        for levels in (1, 2, 4, 16, 64):
            img = np.repeat(np.linspace(0, 255, levels).astype(np.uint8), 256 // levels)
            h = hist_of(img.reshape(16, -1))
            s, e = entropy(h), energy(h)
            assert s > previous_s or levels == 1
            assert e < previous_e or levels == 1
            previous_s, previous_e = s, e


class TestContoursEuler:
    def test_single_disk(self):
        img = gray(helpers.dark_disk((32, 32), 18))
        assert contours(img) == 1
        assert euler_number(img) == 1

    def test_annulus(self):
        img = gray(helpers.punch_hole(helpers.dark_disk((32, 32), 20), (32, 32), 9))
        assert contours(img) == 2
        assert euler_number(img) == 0

    def test_three_disks_one_with_hole(self):
        canvas = helpers.dark_disk(
            [(16, 16), (16, 48), (48, 32)], [9, 9, 12], shape=(64, 64)
        )
        canvas = helpers.punch_hole(canvas, (48, 32), 5)
        fg = (canvas == 0).astype(np.uint8)
        assert helpers.flood_components_and_holes(fg) == (3, 1)
        img = gray(canvas)
        assert contours(img) == 4
        assert euler_number(img) == 2

    def test_two_disks_plus_annulus(self):
        canvas = helpers.dark_disk(
            [(16, 16), (16, 48), (48, 32)], [8, 8, 12], shape=(64, 64)
        )
        canvas = helpers.punch_hole(canvas, (48, 32), 6)
        assert euler_number(gray(canvas)) == 2  # 3 components - 1 hole

    def test_blank_image(self):
        img = gray(np.full((16, 16), 255))
        assert contours(img) == 0
        assert euler_number(img) == 0

    def test_matches_flood_fill_oracle_on_random_images(self):
        rng = np.random.default_rng(1234)
        for _ in range(100):
            fg = (rng.random((16, 16)) < rng.uniform(0.2, 0.8)).astype(np.uint8)
            comps, holes = measures.components_and_holes(BinaryImage(fg))
            assert (comps, holes) == helpers.flood_components_and_holes(fg)


class TestCompressionMeasures:
    def test_constant_image_ratio(self):
        img = gray(np.full((512, 512), 130))
        assert algorithmic_complexity(img) < 0.05

    def test_random_image_ratio(self):
        rng = np.random.default_rng(42)
        img = gray(rng.integers(0, 256, (512, 512)))
        assert algorithmic_complexity(img) >= 1.0

    def test_repeatable(self):
        rng = np.random.default_rng(3)
        img = gray(rng.integers(0, 256, (64, 64)))
        assert algorithmic_complexity(img) == algorithmic_complexity(img)

    def test_structural_constant(self):
        img = gray(np.full((256, 256), 255))
        assert structural_complexity(img, CFG) < 0.05

    def test_structural_discards_noise(self):
        # smooth dark disk with salt-and-pepper: coarse graining removes the
        # noise, so the structural ratio drops below the raw ratio
        rng = np.random.default_rng(7)
        canvas = helpers.dark_disk((128, 128), 80, shape=(256, 256))
        mask = rng.random(canvas.shape) < 0.05
        canvas[mask] = rng.integers(0, 256, int(mask.sum()))
        img = gray(canvas)
        assert structural_complexity(img, CFG) < algorithmic_complexity(img)

    def test_structural_noise_robust_on_half_plane(self):
        rng = np.random.default_rng(8)
        half = np.zeros((256, 256), dtype=np.uint8)
        half[:, 128:] = 255
        noisy = half.copy()
        mask = rng.random(half.shape) < 0.01
        noisy[mask] = rng.integers(0, 256, int(mask.sum()))
        clean_cs = structural_complexity(gray(half), CFG)
        noisy_cs = structural_complexity(gray(noisy), CFG)
        assert noisy_cs < 2 * clean_cs


class TestMachadoCardoso:
    def test_constant_image_near_zero(self):
        img = gray(np.full((128, 128), 180))
        assert machado_cardoso(img, CFG) <= 0.002

    def test_random_beats_constant(self):
        rng = np.random.default_rng(0)
        const = gray(np.full((128, 128), 180))
        noise = gray(rng.integers(0, 256, (128, 128)))
        assert machado_cardoso(noise, CFG) > machado_cardoso(const, CFG)

    def test_edge_variant_requires_3x3(self):
        with pytest.raises(ParameterError):
            machado_cardoso(gray(np.zeros((2, 8))), CFG, edge=True)

    def test_edge_variant_differs_from_plain(self):
        rng = np.random.default_rng(1)
        img = gray(rng.integers(0, 256, (64, 64)))
        assert machado_cardoso(img, CFG, edge=True) != machado_cardoso(img, CFG)


class TestBoxCounting:
    def test_full_frame(self):
        fg = BinaryImage(np.ones((64, 64), dtype=np.uint8))
        pairs = dict(box_counts(fg, CFG))
        assert pairs[2] == 1024  # (64/2)^2

    def test_single_pixel(self):
        data = np.zeros((64, 64), dtype=np.uint8)
        data[10, 17] = 1
        assert all(count == 1 for _, count in box_counts(BinaryImage(data), CFG))

    def test_horizontal_line(self):
        data = np.zeros((64, 64), dtype=np.uint8)
        data[31, :] = 1
        pairs = dict(box_counts(BinaryImage(data), CFG))
        assert pairs[4] == 16  # 64/4

    def test_blank_rejected(self):
        with pytest.raises(DomainError):
            box_counts(BinaryImage(np.zeros((32, 32), dtype=np.uint8)), CFG)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(10)
        fg = (rng.random((96, 80)) < 0.07).astype(np.uint8)
        assert box_counts(BinaryImage(fg), CFG) == helpers.brute_box_counts(
            fg, CFG.box_min, CFG.box_max_frac
        )


class TestFractalDimension:
    def test_space_filling(self):
        # a full-frame checkerboard adaptively binarizes to the bright cells,
        # which occupy every box at every scale: the space-filling case
        img = gray(helpers.checkerboard(512))
        assert fractal_dimension(img, CFG) == pytest.approx(2.0, abs=0.05)

    def test_straight_line(self):
        img = gray(helpers.bright_line(512))
        assert fractal_dimension(img, CFG) == pytest.approx(1.0, abs=0.1)

    def test_sierpinski_depth_8(self):
        img = gray(helpers.sierpinski(depth=8, size=1024))
        d = fractal_dimension(img, CFG)
        assert d == pytest.approx(math.log(3) / math.log(2), abs=0.08)
        # fit verified against brute-force counts of the same binarized set
        binary = imaging.adaptive_binarize(img, CFG.r_adapt)
        pairs = helpers.brute_box_counts(binary.data, CFG.box_min, CFG.box_max_frac)
        slope = helpers.ols_slope(
            [math.log(e) for e, _ in pairs], [math.log(c) for _, c in pairs]
        )
        assert d == pytest.approx(-slope, abs=1e-9)

    def test_blank_binarisation_is_domain_error(self):
        with pytest.raises(DomainError):
            fractal_dimension(gray(np.full((64, 64), 7)), CFG)

    def test_too_small_image(self):
        img = np.zeros((16, 16), dtype=np.uint8)
        img[8, :] = 255
        with pytest.raises(ParameterError):
            fractal_dimension(gray(img), CFG)  # only 2 box sizes available

    def test_translation_invariance_by_whole_boxes(self):
        rng = np.random.default_rng(4)
        fg = np.zeros((128, 128), dtype=np.uint8)
        fg[32:64, 32:64] = (rng.random((32, 32)) < 0.4).astype(np.uint8)
        shifted = np.roll(np.roll(fg, 32, axis=0), 64, axis=1)
        d0 = box_dimension(BinaryImage(fg), CFG)
        d1 = box_dimension(BinaryImage(shifted), CFG)
        assert d0 == pytest.approx(d1, abs=1e-9)

    def test_union_idempotence(self):
        rng = np.random.default_rng(6)
        fg = (rng.random((128, 128)) < 0.1).astype(np.uint8)
        doubled = np.maximum(fg, fg)
        assert box_dimension(BinaryImage(fg), CFG) == box_dimension(BinaryImage(doubled), CFG)


class TestFractalAesthetic:
    def test_peak(self):
        assert fractal_aesthetic(1.35, CFG) == 1.0

    def test_one_sigma(self):
        assert fractal_aesthetic(1.55, CFG) == pytest.approx(math.exp(-0.5), abs=1e-12)

    def test_symmetry(self):
        for x in np.linspace(0.0, 0.6, 13):
            assert fractal_aesthetic(1.35 + x, CFG) == pytest.approx(
                fractal_aesthetic(1.35 - x, CFG), abs=1e-12
            )


class TestSkewness:
    def test_symmetric_histogram(self):
        bins = np.zeros(256, dtype=np.int64)
        bins[10] = 40
        bins[245] = 40
        bins[100] = 25
        bins[155] = 25
        assert skewness(Histogram(bins=bins, total=130)) == pytest.approx(0.0, abs=1e-12)

    def test_bernoulli_90_10(self):
        bins = np.zeros(256, dtype=np.int64)
        bins[0] = 900
        bins[255] = 100
        # closed form (1 - 2q) / sqrt(q (1 - q)) with q = 0.1
        assert skewness(Histogram(bins=bins, total=1000)) == pytest.approx(8 / 3, abs=1e-9)

    def test_negation_flips_sign(self):
        rng = np.random.default_rng(2)
        img = rng.integers(0, 200, (32, 32)).astype(np.uint8)
        s = skewness(hist_of(img))
        s_neg = skewness(hist_of(255 - img))
        assert s_neg == pytest.approx(-s, abs=1e-9)

    def test_zero_variance(self):
        with pytest.raises(DomainError):
            skewness(hist_of(np.full((4, 4), 77)))


class TestMeasureAll:
    def test_constant_image_fields(self):
        vec = measure_all(gray(np.full((64, 64), 201)), CFG)
        assert vec.entropy == 0.0
        assert vec.energy == 1.0
        assert vec.contour_count == 0
        assert vec.euler == 0
        assert vec.skew is None and "skew" in vec.errors
        assert vec.fractal_dim is None and vec.fractal_aesthetic is None
        assert vec.algorithmic is not None and vec.structural is not None

    def test_composition_matches_individual_calls(self):
        img = gray(helpers.sierpinski(depth=6, size=256))
        vec = measure_all(img, CFG)
        hist = luminance_histogram(img)
        assert vec.entropy == entropy(hist)
        assert vec.energy == energy(hist)
        assert vec.contour_count == contours(img)
        assert vec.euler == euler_number(img)
        assert vec.algorithmic == algorithmic_complexity(img)
        assert vec.structural == structural_complexity(img, CFG)
        assert vec.machado_cardoso == machado_cardoso(img, CFG)
        assert vec.machado_cardoso_edge == machado_cardoso(img, CFG, edge=True)
        assert vec.fractal_dim == fractal_dimension(img, CFG)
        assert vec.fractal_aesthetic == fractal_aesthetic(vec.fractal_dim, CFG)
        assert vec.skew == skewness(hist)

    def test_stored_pair_satisfies_preference_curve(self):
        img = gray(helpers.sierpinski(depth=5, size=128))
        vec = measure_all(img, CFG)
        expected = math.exp(-((vec.fractal_dim - CFG.peak) ** 2) / (2 * CFG.sigma**2))
        assert vec.fractal_aesthetic == pytest.approx(expected, abs=0)

    def test_batch_equals_single_calls(self):
        rng = np.random.default_rng(10)
        imgs = [gray(rng.integers(0, 256, (24, 24))) for _ in range(10)]
        batch = [measure_all(im, CFG).as_dict() for im in imgs]
        again = [measure_all(im, CFG).as_dict() for im in imgs]
        assert batch == again

    def test_selected_subset(self):
        img = gray(helpers.checkerboard(64))
        vec = measure_selected(img, CFG, ("S", "D_a"))
        assert vec.entropy is not None
        assert vec.fractal_dim is not None  # pulled in by D_a
        assert vec.fractal_aesthetic is not None
        assert vec.machado_cardoso is None and vec.algorithmic is None

    def test_selected_rejects_unknown(self):
        with pytest.raises(ParameterError):
            measure_selected(gray(np.zeros((8, 8))), CFG, ("S", "bogus"))

    def test_degenerate_tiny_images_never_raise(self):
        # every failure is captured per measure, none aborts the vector
        for data in (np.array([[7]]), np.array([[0, 255]]), np.zeros((2, 2))):
            vec = measure_all(gray(data), CFG)
            assert vec.entropy is not None
            assert vec.algorithmic is not None
            assert "machado_cardoso_edge" in vec.errors  # Sobel needs 3x3
            assert vec.fractal_dim is None


def test_config_validation():
    with pytest.raises(ParameterError):
        MeasureConfig(r_adapt=0).validate()
    with pytest.raises(ParameterError):
        MeasureConfig(delta=0.7).validate()
    with pytest.raises(ParameterError):
        MeasureConfig(jpeg_quality=0.0).validate()
    with pytest.raises(ParameterError):
        MeasureConfig(sigma=0.0).validate()
    with pytest.raises(ParameterError):
        MeasureConfig(box_min=1).validate()
    MeasureConfig().validate()
