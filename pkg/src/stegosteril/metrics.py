"""Quantitative evaluation: sterilization accuracy, MSE/PSNR, histograms.

Accuracy is measured over the traced embedding positions: of the positions
whose intensity the embedder actually changed, the fraction that
sterilization restored to the cover value. MSE/PSNR use the standard
8-bit definitions (PSNR = 10*log10(255^2 / MSE)); the headline PSNR uses
the channel-mean MSE and per-channel figures are reported alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image_model import EmbedTrace, ImageBuffer

PEAK_SQUARED = 255 * 255


@dataclass(frozen=True)
class MseResult:
    per_channel: tuple[float, ...]
    combined: float


@dataclass(frozen=True)
class AccuracyResult:
    """Position counts for one channel (or the whole trace).

    embedded: traced positions; changed: those where stego differs from
    cover; recovered: changed positions restored to the cover value.
    """

    embedded: int
    changed: int
    recovered: int

    def __post_init__(self):
        if not 0 <= self.recovered <= self.changed <= self.embedded:
            raise ValueError(
                f"need 0 <= recovered <= changed <= embedded, got "
                f"{self.recovered}/{self.changed}/{self.embedded}"
            )

    @property
    def accuracy(self) -> float | None:
        """recovered/changed ratio, or None when nothing was changed."""
        if self.changed == 0:
            return None
        return self.recovered / self.changed


@dataclass(frozen=True)
class AccuracyReport:
    per_channel: tuple[AccuracyResult, ...]
    overall: AccuracyResult


@dataclass(frozen=True)
class AggregateStats:
    minimum: float
    maximum: float
    average: float
    std_deviation: float


@dataclass(frozen=True)
class MetricsReport:
    """Per-image comparison bundle between a reference and a test image."""

    mse: MseResult
    psnr_per_channel: tuple[float, ...]
    psnr_combined: float
    histogram_l1_per_channel: tuple[int, ...]
    accuracy: AccuracyReport | None = None


def _check_same_shape(a: ImageBuffer, b: ImageBuffer) -> None:
    if (a.width, a.height, a.channels) != (b.width, b.height, b.channels):
        raise ValueError(
            f"shape mismatch: {a.width}x{a.height}x{a.channels} vs "
            f"{b.width}x{b.height}x{b.channels}"
        )


def mse(reference: ImageBuffer, test: ImageBuffer) -> MseResult:
    """Per-channel and channel-mean squared error."""
    _check_same_shape(reference, test)
    diff = reference.planes.astype(np.int64) - test.planes.astype(np.int64)
    per_channel = (diff * diff).sum(axis=1) / (reference.width * reference.height)
    return MseResult(
        per_channel=tuple(float(v) for v in per_channel),
        combined=float(per_channel.mean()),
    )


def psnr_from_mse(value: float) -> float:
    """PSNR in dB for an 8-bit image; infinite when the error is zero."""
    if value < 0:
        raise ValueError(f"MSE must be non-negative, got {value}")
    if value == 0:
        return math.inf
    return 10.0 * math.log10(PEAK_SQUARED / value)


def psnr(reference: ImageBuffer, test: ImageBuffer) -> float:
    return psnr_from_mse(mse(reference, test).combined)


def sterilization_accuracy(
    cover: ImageBuffer,
    stego: ImageBuffer,
    sterilized: ImageBuffer,
    trace: EmbedTrace,
) -> AccuracyReport:
    """Count embedded/changed/recovered positions per channel and overall."""
    _check_same_shape(cover, stego)
    _check_same_shape(cover, sterilized)
    if len(trace):
        if trace.channel_indices.max() >= cover.channels:
            raise ValueError("trace channel out of range")
        if trace.pixel_indices.max() >= cover.pixel_count:
            raise ValueError("trace pixel index out of range")
    per_channel = []
    for c in range(cover.channels):
        pixels = trace.pixel_indices[trace.channel_indices == c]
        cov = cover.plane(c)[pixels]
        ste = stego.plane(c)[pixels]
        srl = sterilized.plane(c)[pixels]
        changed = ste != cov
        recovered = changed & (srl == cov)
        per_channel.append(
            AccuracyResult(
                embedded=int(pixels.size),
                changed=int(changed.sum()),
                recovered=int(recovered.sum()),
            )
        )
    overall = AccuracyResult(
        embedded=sum(r.embedded for r in per_channel),
        changed=sum(r.changed for r in per_channel),
        recovered=sum(r.recovered for r in per_channel),
    )
    return AccuracyReport(per_channel=tuple(per_channel), overall=overall)


def histogram(plane) -> np.ndarray:
    """Occurrence counts of each intensity value 0..255."""
    arr = np.asarray(plane).reshape(-1)
    if arr.size:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"intensities must be integers, got {arr.dtype}")
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("intensities out of [0, 255]")
    return np.bincount(arr.astype(np.int64), minlength=256)


def histogram_l1(a, b) -> int:
    """Sum of absolute count differences between two 256-bin histograms."""
    ha = np.asarray(a, dtype=np.int64).reshape(-1)
    hb = np.asarray(b, dtype=np.int64).reshape(-1)
    if ha.shape != (256,) or hb.shape != (256,):
        raise ValueError("histograms must have 256 bins")
    return int(np.abs(ha - hb).sum())


def histogram_to_csv(counts) -> str:
    arr = np.asarray(counts, dtype=np.int64).reshape(-1)
    if arr.shape != (256,):
        raise ValueError("histograms must have 256 bins")
    lines = ["value,count"]
    lines.extend(f"{v},{int(n)}" for v, n in enumerate(arr))
    return "\n".join(lines) + "\n"


def aggregate(values) -> AggregateStats:
    """Min/max/mean and population standard deviation of a ratio list."""
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot aggregate an empty list")
    return AggregateStats(
        minimum=float(arr.min()),
        maximum=float(arr.max()),
        average=float(arr.mean()),
        std_deviation=float(arr.std()),
    )


def compare_images(
    reference: ImageBuffer,
    test: ImageBuffer,
    *,
    cover: ImageBuffer | None = None,
    trace: EmbedTrace | None = None,
) -> MetricsReport:
    """Bundle MSE, PSNR and histogram distance; accuracy when cover+trace given."""
    if (cover is None) != (trace is None):
        raise ValueError("accuracy needs both a cover image and a trace")
    result = mse(reference, test)
    hist_l1 = tuple(
        histogram_l1(histogram(reference.plane(c)), histogram(test.plane(c)))
        for c in range(reference.channels)
    )
    accuracy = None
    if cover is not None and trace is not None:
        accuracy = sterilization_accuracy(cover, reference, test, trace)
    return MetricsReport(
        mse=result,
        psnr_per_channel=tuple(psnr_from_mse(v) for v in result.per_channel),
        psnr_combined=psnr_from_mse(result.combined),
        histogram_l1_per_channel=hist_l1,
        accuracy=accuracy,
    )
