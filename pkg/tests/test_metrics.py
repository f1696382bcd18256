"""Tests for MSE, PSNR, histograms, accuracy counting, and aggregation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from stegosteril import (
    AccuracyResult,
    EmbedTrace,
    ImageBuffer,
    aggregate,
    compare_images,
    histogram,
    histogram_l1,
    histogram_to_csv,
    mse,
    psnr,
    psnr_from_mse,
    sterilization_accuracy,
    sterilize_channel,
)

from conftest import random_image, random_rgb


def _gray(values) -> ImageBuffer:
    arr = np.asarray(values, dtype=np.uint8)
    return ImageBuffer.grayscale(arr.size, 1, arr)


class TestMse:
    def test_hand_case(self):
        result = mse(_gray([0, 2]), _gray([1, 4]))
        assert result.per_channel == (2.5,)
        assert result.combined == 2.5

    def test_identical_images(self, rng):
        img = random_image(rng, 7, 5)
        result = mse(img, img)
        assert result.per_channel == (0.0,) * img.channels
        assert result.combined == 0.0

    def test_per_channel_independent(self):
        r = np.array([10, 10], dtype=np.uint8)
        g = np.array([20, 20], dtype=np.uint8)
        b = np.array([30, 30], dtype=np.uint8)
        a = ImageBuffer.rgb(2, 1, r, g, b)
        b_img = ImageBuffer.rgb(2, 1, r + 1, g, b + 3)
        result = mse(a, b_img)
        assert result.per_channel == (1.0, 0.0, 9.0)
        assert result.combined == pytest.approx(10.0 / 3.0)

    def test_large_differences_no_overflow(self):
        result = mse(_gray([0, 0]), _gray([255, 255]))
        assert result.per_channel == (65025.0,)

    def test_shape_mismatch_rejected(self, rng):
        with pytest.raises(ValueError):
            mse(_gray([0, 1]), _gray([0, 1, 2]))
        with pytest.raises(ValueError):
            mse(_gray([0, 1]), random_rgb(rng, 2, 1))

    def test_matches_direct_formula(self, rng):
        for _ in range(20):
            a = random_image(rng, 6, 6)
            b = a.with_planes(
                np.clip(
                    a.planes.astype(int) + rng.integers(-2, 3, a.planes.shape), 0, 255
                ).astype(np.uint8)
            )
            result = mse(a, b)
            for c in range(a.channels):
                diff = a.plane(c).astype(float) - b.plane(c).astype(float)
                assert result.per_channel[c] == pytest.approx((diff**2).mean())

    def test_symmetric(self, rng):
        a = random_rgb(rng, 6, 4)
        b = random_rgb(rng, 6, 4)
        assert mse(a, b).per_channel == mse(b, a).per_channel


class TestPsnr:
    def test_frozen_value(self):
        assert psnr_from_mse(0.005) == pytest.approx(71.14110356531891, abs=1e-12)

    def test_unit_mse(self):
        assert psnr_from_mse(1.0) == pytest.approx(10 * math.log10(255**2))

    def test_zero_mse_is_infinite(self):
        assert psnr_from_mse(0.0) == float("inf")

    def test_worst_case_mse_is_zero_db(self):
        assert psnr_from_mse(65025.0) == 0.0

    def test_image_wrapper(self, rng):
        img = random_image(rng, 5, 5)
        assert psnr(img, img) == float("inf")

    def test_monotone_in_mse(self):
        assert psnr_from_mse(0.1) > psnr_from_mse(0.2) > psnr_from_mse(1.0)

    def test_negative_mse_rejected(self):
        with pytest.raises(ValueError):
            psnr_from_mse(-0.1)


class TestAccuracy:
    def test_full_recovery_is_one(self):
        cover = _gray([4, 4, 6, 7])
        stego = _gray([5, 4, 7, 7])
        steri = _gray([4, 4, 6, 7])
        trace = EmbedTrace([(0, 0), (0, 1), (0, 2), (0, 3)])
        report = sterilization_accuracy(cover, stego, steri, trace)
        assert report.overall.embedded == 4
        assert report.overall.changed == 2
        assert report.overall.recovered == 2
        assert report.overall.accuracy == 1.0

    def test_no_recovery_is_zero(self):
        cover = _gray([4, 4])
        stego = _gray([5, 4])
        steri = _gray([5, 5])
        trace = EmbedTrace([(0, 0), (0, 1)])
        report = sterilization_accuracy(cover, stego, steri, trace)
        assert report.overall.changed == 1
        assert report.overall.recovered == 0
        assert report.overall.accuracy == 0.0

    def test_nothing_changed_is_undefined(self):
        cover = _gray([4, 4])
        stego = _gray([4, 4])
        steri = _gray([5, 5])
        trace = EmbedTrace([(0, 0), (0, 1)])
        report = sterilization_accuracy(cover, stego, steri, trace)
        assert report.overall.changed == 0
        assert report.overall.accuracy is None

    def test_untraced_pixels_ignored(self):
        cover = _gray([4, 4, 4, 4])
        stego = _gray([5, 5, 5, 5])
        steri = _gray([4, 5, 5, 5])
        trace = EmbedTrace([(0, 0)])
        report = sterilization_accuracy(cover, stego, steri, trace)
        assert report.overall.embedded == 1
        assert report.overall.changed == 1
        assert report.overall.recovered == 1
        assert report.overall.accuracy == 1.0

    def test_per_channel_split(self):
        r = np.array([4, 4], dtype=np.uint8)
        g = np.array([6, 6], dtype=np.uint8)
        b = np.array([8, 8], dtype=np.uint8)
        cover = ImageBuffer.rgb(2, 1, r, g, b)
        stego = ImageBuffer.rgb(2, 1, np.array([5, 4], np.uint8), g, b)
        steri = ImageBuffer.rgb(2, 1, r, g, b)
        trace = EmbedTrace([(0, 0), (0, 1), (1, 0)])
        report = sterilization_accuracy(cover, stego, steri, trace)
        assert report.per_channel[0].embedded == 2
        assert report.per_channel[0].changed == 1
        assert report.per_channel[0].accuracy == 1.0
        assert report.per_channel[1].embedded == 1
        assert report.per_channel[1].accuracy is None
        assert report.per_channel[2].embedded == 0

    def test_trace_out_of_range_rejected(self):
        cover = _gray([4, 4])
        with pytest.raises(ValueError):
            sterilization_accuracy(cover, cover, cover, EmbedTrace([(0, 2)]))
        with pytest.raises(ValueError):
            sterilization_accuracy(cover, cover, cover, EmbedTrace([(1, 0)]))

    def test_result_validation(self):
        with pytest.raises(ValueError):
            AccuracyResult(embedded=1, changed=2, recovered=0)
        with pytest.raises(ValueError):
            AccuracyResult(embedded=2, changed=1, recovered=2)


class TestHistogram:
    def test_counts(self):
        counts = histogram(np.array([0, 0, 5, 255], dtype=np.uint8))
        assert counts.shape == (256,)
        assert counts[0] == 2
        assert counts[5] == 1
        assert counts[255] == 1
        assert counts.sum() == 4

    def test_matches_bincount(self, rng):
        plane = rng.integers(0, 256, 500, dtype=np.uint8)
        assert (histogram(plane) == np.bincount(plane, minlength=256)).all()

    def test_empty_plane_is_all_zeros(self):
        counts = histogram(np.array([], dtype=np.uint8))
        assert counts.shape == (256,)
        assert (counts == 0).all()

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            histogram(np.array([300]))

    def test_l1_distance(self):
        a = histogram(np.full(10, 5, dtype=np.uint8))
        b = histogram(np.full(10, 7, dtype=np.uint8))
        assert histogram_l1(a, b) == 20
        assert histogram_l1(a, a) == 0

    def test_l1_requires_256_bins(self):
        with pytest.raises(ValueError):
            histogram_l1(np.zeros(10), np.zeros(10))

    def test_l1_after_sterilization_counts_moved_pixels_twice(self, rng):
        # sterilization moves pixels between the two bins of a bucket, so
        # the L1 distance is twice the per-bucket absolute count shift
        for _ in range(10):
            plane = rng.integers(0, 256, 400, dtype=np.uint8)
            steri = sterilize_channel(plane)
            a = histogram(plane)
            b = histogram(steri)
            bucket_shift = sum(
                abs(int(a[2 * j]) - int(b[2 * j])) for j in range(128)
            )
            assert histogram_l1(a, b) == 2 * bucket_shift

    def test_csv_format(self):
        counts = histogram(np.array([0, 1, 1], dtype=np.uint8))
        text = histogram_to_csv(counts)
        lines = text.strip().split("\n")
        assert len(lines) == 257
        assert lines[0] == "value,count"
        assert lines[1] == "0,1"
        assert lines[2] == "1,2"
        assert lines[-1] == "255,0"


class TestAggregate:
    def test_frozen_std(self):
        stats = aggregate([1.0, 2.0, 3.0])
        assert stats.minimum == 1.0
        assert stats.maximum == 3.0
        assert stats.average == 2.0
        assert stats.std_deviation == pytest.approx(0.816496580927726, abs=1e-15)

    def test_single_value(self):
        stats = aggregate([0.75])
        assert stats.minimum == stats.maximum == stats.average == 0.75
        assert stats.std_deviation == 0.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])

    def test_permutation_invariant(self, rng):
        values = list(rng.random(12))
        shuffled = list(values)
        rng.shuffle(shuffled)
        a = aggregate(values)
        b = aggregate(shuffled)
        assert (a.minimum, a.maximum) == (b.minimum, b.maximum)
        assert a.average == pytest.approx(b.average, abs=1e-15)
        assert a.std_deviation == pytest.approx(b.std_deviation, abs=1e-15)


class TestCompareImages:
    def test_bundles_everything(self, rng):
        cover = _gray([4, 4, 6, 7])
        stego = _gray([5, 4, 7, 7])
        steri = _gray([4, 4, 6, 7])
        trace = EmbedTrace([(0, 0), (0, 2)])
        report = compare_images(stego, steri, cover=cover, trace=trace)
        assert report.mse.per_channel == (0.5,)
        assert report.psnr_combined == pytest.approx(psnr_from_mse(0.5))
        assert report.accuracy.overall.accuracy == 1.0

    def test_metrics_only_when_no_trace(self, rng):
        img = random_image(rng, 5, 5)
        report = compare_images(img, img)
        assert report.accuracy is None
        assert report.psnr_combined == float("inf")
        assert report.histogram_l1_per_channel == (0,) * img.channels

    def test_cover_without_trace_rejected(self, rng):
        img = random_image(rng, 5, 5)
        with pytest.raises(ValueError):
            compare_images(img, img, cover=img)
