"""LSB steganography toolkit with even/odd majority sterilization.

Three embedders hide bit streams in BMP images (sequential LSB
replacement, pairwise LSB matching, keyed random placement over image
segments), a sterilizer rewrites every intensity bucket {2j, 2j+1} to its
majority parity to destroy hidden payloads, and the metrics and harness
modules measure how well that works (sterilization accuracy, MSE, PSNR,
histogram distance) over whole corpora.
"""

from .bmp_codec import BmpFormatError, parse_bmp, write_bmp
from .embedders import (
    CapacityError,
    EmbedResult,
    capacity,
    embed_lsb_matching,
    embed_random_segmented,
    embed_sequential,
    extract_lsb_matching,
    extract_random_segmented,
    extract_sequential,
)
from .harness import (
    ExperimentConfig,
    ExperimentReport,
    ExperimentRow,
    embed_with,
    extract_with,
    run_experiment,
)
from .image_model import (
    BitString,
    EmbedTrace,
    ImageBuffer,
    StegoKey,
    bits_to_text,
    text_to_bits,
)
from .metrics import (
    AccuracyReport,
    AccuracyResult,
    AggregateStats,
    MetricsReport,
    MseResult,
    aggregate,
    compare_images,
    histogram,
    histogram_l1,
    histogram_to_csv,
    mse,
    psnr,
    psnr_from_mse,
    sterilization_accuracy,
)
from .sterilizer import SterilizeConfig, sterilize_channel, sterilize_image

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "AccuracyResult",
    "AggregateStats",
    "BitString",
    "BmpFormatError",
    "CapacityError",
    "EmbedResult",
    "EmbedTrace",
    "ExperimentConfig",
    "ExperimentReport",
    "ExperimentRow",
    "ImageBuffer",
    "MetricsReport",
    "MseResult",
    "StegoKey",
    "SterilizeConfig",
    "aggregate",
    "bits_to_text",
    "capacity",
    "compare_images",
    "embed_lsb_matching",
    "embed_random_segmented",
    "embed_sequential",
    "embed_with",
    "extract_lsb_matching",
    "extract_random_segmented",
    "extract_sequential",
    "extract_with",
    "histogram",
    "histogram_l1",
    "histogram_to_csv",
    "mse",
    "parse_bmp",
    "psnr",
    "psnr_from_mse",
    "run_experiment",
    "sterilization_accuracy",
    "sterilize_channel",
    "sterilize_image",
    "text_to_bits",
    "write_bmp",
]
