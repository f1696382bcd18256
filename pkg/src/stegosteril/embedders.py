"""The three LSB embedding/extraction algorithm pairs and capacity math.

All algorithms share one traversal order over intensities: pixel index
0,1,2,... and within each pixel channel order R, G, B (traversal index t
maps to channel t % channels, pixel t // channels). Grayscale images have
the single channel 0.

  A  sequential   - bit i replaces the LSB of the i-th traversed intensity
  B  lsb_matching - pairwise +-1 scheme; pair (x1,x2) carries bits (m1,m2)
                    with m1 = LSB(y1) and m2 = LSB(floor(y1/2) + y2)
  C  random_segmented - the traversal is split into key.segments contiguous
                    segments, the message proportionally across them, and a
                    keyed generator picks positions inside each segment

The keyed selection in C (contiguous near-equal segments, proportional
message split, the fixed 64-bit LCG below, seed XOR segment index, and
swap-remove selection without replacement) is this toolkit's concrete
instantiation of "random pixel selection plus image segmentation"; treat
it as a file-format-level contract: both sides must use this library or
reimplement the procedure exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image_model import BitString, EmbedTrace, ImageBuffer, StegoKey


class CapacityError(ValueError):
    """Message does not fit the carrier image."""


@dataclass(frozen=True)
class EmbedResult:
    stego: ImageBuffer
    trace: EmbedTrace


def capacity(image: ImageBuffer) -> tuple[int, int]:
    """Maximum embeddable payload as (bits, whole characters)."""
    max_bits = image.width * image.height * image.channels
    return max_bits, max_bits // 8


def _flat_intensities(image: ImageBuffer) -> np.ndarray:
    """Writable copy of all intensities in traversal order."""
    return image.planes.T.copy().reshape(-1)


def _rebuild(image: ImageBuffer, flat: np.ndarray) -> ImageBuffer:
    planes = flat.reshape(image.pixel_count, image.channels).T
    return image.with_planes(planes)


def _positions_to_trace(positions, channels: int) -> EmbedTrace:
    pos = np.asarray(list(positions), dtype=np.int64)
    entries = np.stack([pos % channels, pos // channels], axis=1)
    return EmbedTrace(entries)


def _check_capacity(image: ImageBuffer, n_bits: int) -> None:
    max_bits, _ = capacity(image)
    if n_bits > max_bits:
        raise CapacityError(f"{n_bits} bits exceed capacity of {max_bits}")
    if n_bits < 0:
        raise ValueError("bit count must be non-negative")


def embed_sequential(cover: ImageBuffer, bits: BitString) -> EmbedResult:
    """Algorithm A: replace the LSB of the first len(bits) intensities."""
    n = len(bits)
    _check_capacity(cover, n)
    flat = _flat_intensities(cover)
    flat[:n] = (flat[:n] & 0xFE) | bits.bits
    trace = _positions_to_trace(range(n), cover.channels)
    return EmbedResult(_rebuild(cover, flat), trace)


def extract_sequential(stego: ImageBuffer, n_bits: int) -> BitString:
    """Read the LSBs of the first n_bits traversed intensities."""
    _check_capacity(stego, n_bits)
    flat = _flat_intensities(stego)
    return BitString(flat[:n_bits] & 1)


def _pair_function(y1: int, y2: int) -> int:
    return ((y1 >> 1) + y2) & 1


def embed_lsb_matching(cover: ImageBuffer, bits: BitString) -> EmbedResult:
    """Algorithm B: pairwise +-1 embedding, two bits per intensity pair.

    Odd-length messages are padded with a single 0 bit; extraction callers
    must request the padded (even) length. Every pair that consumed bits is
    traced, including intensities left unchanged.
    """
    padded = bits + BitString([0]) if len(bits) % 2 else bits
    n = len(padded)
    _check_capacity(cover, n)
    flat = _flat_intensities(cover)
    msg = padded.bits
    for p in range(n // 2):
        x1 = int(flat[2 * p])
        x2 = int(flat[2 * p + 1])
        m1 = int(msg[2 * p])
        m2 = int(msg[2 * p + 1])
        if m1 == (x1 & 1):
            if m2 != _pair_function(x1, x2):
                x2 = x2 + 1 if x2 != 255 else x2 - 1
        else:
            # Exactly one of x1-1 / x1+1 satisfies the pair function.
            want = x1 - 1 if _pair_function(x1 - 1, x2) == m2 else x1 + 1
            if 0 <= want <= 255:
                x1 = want
            else:
                # Forced out of range: move x1 the legal way, restore m2
                # by nudging x2 instead.
                x1 = x1 + 1 if want < 0 else x1 - 1
                x2 = x2 + 1 if x2 != 255 else x2 - 1
        flat[2 * p] = x1
        flat[2 * p + 1] = x2
    trace = _positions_to_trace(range(n), cover.channels)
    return EmbedResult(_rebuild(cover, flat), trace)


def extract_lsb_matching(stego: ImageBuffer, n_bits: int) -> BitString:
    """Recover bits from intensity pairs in embedding order."""
    if n_bits % 2 != 0:
        raise ValueError(f"bit count {n_bits} must be even")
    _check_capacity(stego, n_bits)
    flat = _flat_intensities(stego).astype(np.int64)
    y1 = flat[0:n_bits:2]
    y2 = flat[1:n_bits:2]
    out = np.empty(n_bits, dtype=np.uint8)
    out[0::2] = y1 & 1
    out[1::2] = ((y1 >> 1) + y2) & 1
    return BitString(out)


# Fixed 64-bit LCG so that keyed embedding is reproducible everywhere.
_LCG_MULTIPLIER = 6364136223846793005
_LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1


def _split_sizes(total: int, parts: int) -> list[int]:
    base, rem = divmod(total, parts)
    return [base + 1 if i < rem else base for i in range(parts)]


def _select_without_replacement(start: int, stop: int, count: int, seed: int) -> list[int]:
    """Draw `count` distinct positions from [start, stop) with the keyed LCG."""
    pool = list(range(start, stop))
    state = seed
    chosen = []
    for _ in range(count):
        state = (state * _LCG_MULTIPLIER + _LCG_INCREMENT) & _MASK64
        r = (state >> 32) % len(pool)
        chosen.append(pool[r])
        pool[r] = pool[-1]
        pool.pop()
    return chosen


def _keyed_positions(image: ImageBuffer, n_bits: int, key: StegoKey) -> list[int]:
    total = image.width * image.height * image.channels
    if key.segments > total:
        raise ValueError(
            f"{key.segments} segments exceed {total} intensity positions"
        )
    seg_sizes = _split_sizes(total, key.segments)
    part_sizes = _split_sizes(n_bits, key.segments)
    positions = []
    start = 0
    for index, (seg, part) in enumerate(zip(seg_sizes, part_sizes)):
        positions.extend(
            _select_without_replacement(start, start + seg, part, key.seed ^ index)
        )
        start += seg
    return positions


def embed_random_segmented(cover: ImageBuffer, bits: BitString, key: StegoKey) -> EmbedResult:
    """Algorithm C: keyed random positions inside contiguous image segments."""
    n = len(bits)
    _check_capacity(cover, n)
    positions = _keyed_positions(cover, n, key)
    flat = _flat_intensities(cover)
    idx = np.asarray(positions, dtype=np.int64)
    flat[idx] = (flat[idx] & 0xFE) | bits.bits
    trace = _positions_to_trace(positions, cover.channels)
    return EmbedResult(_rebuild(cover, flat), trace)


def extract_random_segmented(stego: ImageBuffer, n_bits: int, key: StegoKey) -> BitString:
    """Regenerate the keyed position sequence and read its LSBs."""
    _check_capacity(stego, n_bits)
    positions = _keyed_positions(stego, n_bits, key)
    flat = _flat_intensities(stego)
    if not positions:
        return BitString()
    return BitString(flat[np.asarray(positions, dtype=np.int64)] & 1)
