"""Batch experiment runner: embed, sterilize, measure, aggregate.

Covers are paired with text files in sorted-name order (texts cycle when
there are fewer of them), each text is truncated to fill_ratio of the
cover's character capacity, and every cover goes through embed ->
sterilize -> metrics. The report carries one CSV row per image/channel
plus per-channel min/max/average/std aggregates of the accuracy ratios;
images where the embedder changed nothing are excluded from aggregation
and counted separately. Identical config and inputs give a byte-identical
report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .bmp_codec import parse_bmp
from .embedders import (
    capacity,
    embed_lsb_matching,
    embed_random_segmented,
    embed_sequential,
    extract_lsb_matching,
    extract_random_segmented,
    extract_sequential,
)
from .image_model import ImageBuffer, StegoKey, text_to_bits
from .metrics import (
    AggregateStats,
    aggregate,
    histogram,
    histogram_l1,
    mse,
    psnr_from_mse,
    sterilization_accuracy,
)
from .sterilizer import SterilizeConfig, sterilize_image

ALGORITHMS = ("A", "B", "C")


@dataclass(frozen=True)
class ExperimentConfig:
    covers_dir: Path
    texts_dir: Path
    algorithm: str
    key: StegoKey | None = None
    fill_ratio: float = 1.0
    sterilize_config: SterilizeConfig = field(default_factory=SterilizeConfig)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if not 0.0 < self.fill_ratio <= 1.0:
            raise ValueError("fill_ratio must be in (0, 1]")
        if self.algorithm == "C" and self.key is None:
            raise ValueError("algorithm C requires a key")


@dataclass(frozen=True)
class ExperimentRow:
    image: str
    channel: int
    embedded: int
    changed: int
    recovered: int
    accuracy: float | None
    mse_stego_steri: float
    mse_cover_steri: float
    psnr_cover_steri: float
    histogram_l1: int


@dataclass
class ExperimentReport:
    rows: list[ExperimentRow]
    aggregates: dict[int, AggregateStats | None]
    defined_counts: dict[int, int]
    undefined_counts: dict[int, int]
    failures: list[tuple[str, str]]

    ROW_HEADER = (
        "image,channel,embedded,changed,recovered,accuracy,"
        "mse_stego_steri,mse_cover_steri,psnr_cover_steri,histogram_l1"
    )
    AGGREGATE_HEADER = (
        "aggregate,channel,minimum,maximum,average,std_deviation,defined,undefined"
    )
    FAILURE_HEADER = "failure,image,error"

    def to_csv(self) -> str:
        lines = [self.ROW_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.image},{r.channel},{r.embedded},{r.changed},{r.recovered},"
                f"{_fmt_ratio(r.accuracy)},{_fmt(r.mse_stego_steri)},"
                f"{_fmt(r.mse_cover_steri)},{_fmt(r.psnr_cover_steri)},"
                f"{r.histogram_l1}"
            )
        lines.append("")
        lines.append(self.AGGREGATE_HEADER)
        for channel in sorted(self.aggregates):
            stats = self.aggregates[channel]
            defined = self.defined_counts[channel]
            undefined = self.undefined_counts[channel]
            if stats is None:
                values = "undefined,undefined,undefined,undefined"
            else:
                values = (
                    f"{_fmt(stats.minimum)},{_fmt(stats.maximum)},"
                    f"{_fmt(stats.average)},{_fmt(stats.std_deviation)}"
                )
            lines.append(f"accuracy,{channel},{values},{defined},{undefined}")
        if self.failures:
            lines.append("")
            lines.append(self.FAILURE_HEADER)
            for image, error in self.failures:
                safe = error.replace("\n", " ").replace(",", ";")
                lines.append(f"failure,{image},{safe}")
        return "\n".join(lines) + "\n"


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return f"{value:.6f}"


def _fmt_ratio(value: float | None) -> str:
    if value is None:
        return "undefined"
    return f"{value:.6f}"


def embed_with(algorithm: str, cover: ImageBuffer, bits, key: StegoKey | None):
    """Dispatch to the embedder for algorithm A, B or C."""
    if algorithm == "A":
        return embed_sequential(cover, bits)
    if algorithm == "B":
        return embed_lsb_matching(cover, bits)
    if algorithm == "C":
        if key is None:
            raise ValueError("algorithm C requires a key")
        return embed_random_segmented(cover, bits, key)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def extract_with(algorithm: str, stego: ImageBuffer, n_bits: int, key: StegoKey | None):
    """Dispatch to the extractor for algorithm A, B or C."""
    if algorithm == "A":
        return extract_sequential(stego, n_bits)
    if algorithm == "B":
        return extract_lsb_matching(stego, n_bits)
    if algorithm == "C":
        if key is None:
            raise ValueError("algorithm C requires a key")
        return extract_random_segmented(stego, n_bits, key)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _list_files(directory: Path, suffix: str | None = None) -> list[Path]:
    if not directory.is_dir():
        raise ValueError(f"not a directory: {directory}")
    files = [
        p for p in directory.iterdir()
        if p.is_file() and (suffix is None or p.suffix.lower() == suffix)
    ]
    return sorted(files, key=lambda p: p.name)


def evaluate_image(
    name: str,
    cover: ImageBuffer,
    text: bytes,
    config: ExperimentConfig,
) -> list[ExperimentRow]:
    """Embed, sterilize and measure one cover; one row per channel."""
    _, max_chars = capacity(cover)
    n_chars = int(config.fill_ratio * max_chars)
    bits = text_to_bits(text[:n_chars])
    result = embed_with(config.algorithm, cover, bits, config.key)
    sterilized = sterilize_image(result.stego, config.sterilize_config)
    accuracy = sterilization_accuracy(cover, result.stego, sterilized, result.trace)
    mse_stego = mse(result.stego, sterilized)
    mse_cover = mse(cover, sterilized)
    rows = []
    for c in range(cover.channels):
        acc = accuracy.per_channel[c]
        rows.append(
            ExperimentRow(
                image=name,
                channel=c,
                embedded=acc.embedded,
                changed=acc.changed,
                recovered=acc.recovered,
                accuracy=acc.accuracy,
                mse_stego_steri=mse_stego.per_channel[c],
                mse_cover_steri=mse_cover.per_channel[c],
                psnr_cover_steri=psnr_from_mse(mse_cover.per_channel[c]),
                histogram_l1=histogram_l1(
                    histogram(result.stego.plane(c)),
                    histogram(sterilized.plane(c)),
                ),
            )
        )
    return rows


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    covers = _list_files(Path(config.covers_dir), suffix=".bmp")
    if not covers:
        raise ValueError(f"no .bmp covers in {config.covers_dir}")
    texts = _list_files(Path(config.texts_dir))
    if not texts:
        raise ValueError(f"no text files in {config.texts_dir}")

    rows: list[ExperimentRow] = []
    failures: list[tuple[str, str]] = []
    for i, cover_path in enumerate(covers):
        text_path = texts[i % len(texts)]
        try:
            cover = parse_bmp(cover_path.read_bytes())
            text = text_path.read_bytes()
            rows.extend(evaluate_image(cover_path.name, cover, text, config))
        except (ValueError, OSError) as exc:
            failures.append((cover_path.name, str(exc)))

    channels = sorted({r.channel for r in rows})
    aggregates: dict[int, AggregateStats | None] = {}
    defined_counts: dict[int, int] = {}
    undefined_counts: dict[int, int] = {}
    for c in channels:
        defined = [r.accuracy for r in rows if r.channel == c and r.accuracy is not None]
        undefined_counts[c] = sum(
            1 for r in rows if r.channel == c and r.accuracy is None
        )
        defined_counts[c] = len(defined)
        aggregates[c] = aggregate(defined) if defined else None
    return ExperimentReport(
        rows=rows,
        aggregates=aggregates,
        defined_counts=defined_counts,
        undefined_counts=undefined_counts,
        failures=failures,
    )
