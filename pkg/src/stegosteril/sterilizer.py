"""Even/odd majority replacement that destroys LSB-borne payloads.

Intensities are grouped into buckets {2j, 2j+1}. Within each grouping
region, every bucket is forced to a single parity: if even values
outnumber odd ones the odd values drop to 2j, otherwise (ties included)
the even values rise to 2j+1. Each changed intensity moves by exactly 1,
so the image stays visually intact while LSB readers see scrambled bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image_model import ImageBuffer

_EVEN_VALUES = np.arange(0, 256, 2, dtype=np.uint8)
_ODD_VALUES = np.arange(1, 256, 2, dtype=np.uint8)


@dataclass(frozen=True)
class SterilizeConfig:
    """Grouping scope for the majority rule.

    block_side None means buckets are counted over the whole channel;
    a positive side groups per square block (ragged at the edges).
    """

    block_side: int | None = None

    def __post_init__(self):
        if self.block_side is not None and self.block_side < 1:
            raise ValueError("block side must be >= 1")

    @classmethod
    def whole_channel(cls) -> "SterilizeConfig":
        return cls()

    @classmethod
    def square_block(cls, side: int) -> "SterilizeConfig":
        return cls(block_side=side)


def _majority_lut(values: np.ndarray) -> np.ndarray:
    """256-entry replacement table for one grouping region."""
    counts = np.bincount(values.reshape(-1), minlength=256)
    even_wins = counts[0::2] > counts[1::2]
    lut = np.empty(256, dtype=np.uint8)
    lut[0::2] = np.where(even_wins, _EVEN_VALUES, _ODD_VALUES)
    lut[1::2] = np.where(even_wins, _EVEN_VALUES, _ODD_VALUES)
    return lut


def sterilize_channel(plane, config: SterilizeConfig | None = None) -> np.ndarray:
    """Apply the majority rule to one intensity plane.

    Accepts a 1-D or 2-D array-like; block grouping needs the 2-D form.
    Returns a uint8 array of the same shape.
    """
    if config is None:
        config = SterilizeConfig()
    arr = np.asarray(plane)
    if not np.issubdtype(arr.dtype, np.integer):
        raise ValueError(f"intensities must be integers, got {arr.dtype}")
    if arr.size and (arr.min() < 0 or arr.max() > 255):
        raise ValueError("intensities out of [0, 255]")
    arr = arr.astype(np.uint8)
    if config.block_side is None:
        return _majority_lut(arr)[arr]
    if arr.ndim != 2:
        raise ValueError("square-block grouping needs a 2-D plane")
    side = config.block_side
    out = arr.copy()
    height, width = arr.shape
    for r in range(0, height, side):
        for c in range(0, width, side):
            block = arr[r:r + side, c:c + side]
            out[r:r + side, c:c + side] = _majority_lut(block)[block]
    return out


def sterilize_image(image: ImageBuffer, config: SterilizeConfig | None = None) -> ImageBuffer:
    """Sterilize every channel plane independently."""
    if config is None:
        config = SterilizeConfig()
    shape = (image.height, image.width)
    planes = np.empty_like(image.planes)
    for c in range(image.channels):
        plane = image.plane(c).reshape(shape)
        planes[c] = sterilize_channel(plane, config).reshape(-1)
    return image.with_planes(planes)
