"""Core value types: rasters, bit strings, embed traces, stego keys.

All pixel planes are stored row-major, top-down, one plane per channel.
Trace pixel indices always refer to this flat row-major layout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GRAYSCALE = 1
COLOR = 3


class ImageBuffer:
    """Decoded raster: dimensions plus per-channel 8-bit intensity planes.

    ``planes`` is a (channels, width*height) uint8 array; channel order for
    color images is R, G, B. Instances are treated as immutable values.
    """

    __slots__ = ("width", "height", "planes")

    def __init__(self, width: int, height: int, planes: np.ndarray):
        if width < 1 or height < 1:
            raise ValueError(f"bad dimensions {width}x{height}")
        arr = np.asarray(planes)
        if arr.ndim != 2 or arr.shape[0] not in (GRAYSCALE, COLOR):
            raise ValueError(f"planes must be (1|3, width*height), got {arr.shape}")
        if arr.shape[1] != width * height:
            raise ValueError(
                f"plane length {arr.shape[1]} != {width}x{height}={width * height}"
            )
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise ValueError(f"intensities must be integers, got {arr.dtype}")
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("intensities out of [0, 255]")
            arr = arr.astype(np.uint8)
        arr = arr.copy()
        arr.setflags(write=False)
        self.width = width
        self.height = height
        self.planes = arr

    @property
    def channels(self) -> int:
        return int(self.planes.shape[0])

    @property
    def pixel_count(self) -> int:
        return self.width * self.height

    def plane(self, channel: int) -> np.ndarray:
        """Read-only flat view of one channel plane."""
        return self.planes[channel]

    @classmethod
    def grayscale(cls, width: int, height: int, values) -> "ImageBuffer":
        return cls(width, height, np.asarray(values).reshape(1, -1))

    @classmethod
    def rgb(cls, width: int, height: int, r, g, b) -> "ImageBuffer":
        stacked = np.stack(
            [np.asarray(p).reshape(-1) for p in (r, g, b)], axis=0
        )
        return cls(width, height, stacked)

    def with_planes(self, planes: np.ndarray) -> "ImageBuffer":
        """New buffer of the same shape with replaced plane data."""
        planes = np.asarray(planes)
        if planes.shape != self.planes.shape:
            raise ValueError(
                f"planes shape {planes.shape} does not match {self.planes.shape}"
            )
        return ImageBuffer(self.width, self.height, planes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and self.planes.shape == other.planes.shape
            and bool(np.array_equal(self.planes, other.planes))
        )

    def __hash__(self):
        raise TypeError("ImageBuffer is not hashable")

    def __repr__(self) -> str:
        return f"ImageBuffer({self.width}x{self.height}, channels={self.channels})"


class BitString:
    """Ordered sequence of message bits."""

    __slots__ = ("_bits",)

    def __init__(self, bits=()):
        arr = np.asarray(bits, dtype=np.int64).reshape(-1)
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("bits must be 0 or 1")
        arr = arr.astype(np.uint8)
        arr.setflags(write=False)
        self._bits = arr

    @property
    def bits(self) -> np.ndarray:
        """Read-only uint8 array of 0/1 values."""
        return self._bits

    def __len__(self) -> int:
        return int(self._bits.size)

    def __iter__(self):
        return iter(int(b) for b in self._bits)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return BitString(self._bits[key])
        return int(self._bits[key])

    def __add__(self, other: "BitString") -> "BitString":
        if not isinstance(other, BitString):
            return NotImplemented
        return BitString(np.concatenate([self._bits, other._bits]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return bool(np.array_equal(self._bits, other._bits))

    def __hash__(self):
        raise TypeError("BitString is not hashable")

    def __repr__(self) -> str:
        head = "".join(str(int(b)) for b in self._bits[:32])
        tail = "..." if len(self) > 32 else ""
        return f"BitString({len(self)} bits: {head}{tail})"


def text_to_bits(data: bytes) -> BitString:
    """Expand each byte to 8 bits, most-significant bit first."""
    raw = np.frombuffer(bytes(data), dtype=np.uint8)
    return BitString(np.unpackbits(raw))


def bits_to_text(bits: BitString) -> bytes:
    """Inverse of text_to_bits; length must be a multiple of 8."""
    if len(bits) % 8 != 0:
        raise ValueError(f"bit count {len(bits)} not divisible by 8")
    return np.packbits(bits.bits).tobytes()


TRACE_HEADER = "channel,pixel_index"


class EmbedTrace:
    """Ordered (channel, pixel_index) positions written during embedding.

    One entry per embedded bit, in embedding order; duplicates are invalid.
    """

    __slots__ = ("entries",)

    def __init__(self, entries=()):
        if isinstance(entries, np.ndarray):
            arr = entries.astype(np.int64).reshape(-1, 2)
        else:
            arr = np.asarray(list(entries), dtype=np.int64).reshape(-1, 2)
        if arr.size:
            if arr.min() < 0:
                raise ValueError("trace entries must be non-negative")
            if len(np.unique(arr, axis=0)) != len(arr):
                raise ValueError("duplicate (channel, pixel) entry in trace")
        arr.setflags(write=False)
        self.entries = arr

    @property
    def channel_indices(self) -> np.ndarray:
        return self.entries[:, 0]

    @property
    def pixel_indices(self) -> np.ndarray:
        return self.entries[:, 1]

    def __len__(self) -> int:
        return int(self.entries.shape[0])

    def __iter__(self):
        return iter((int(c), int(p)) for c, p in self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbedTrace):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))

    def __hash__(self):
        raise TypeError("EmbedTrace is not hashable")

    def __repr__(self) -> str:
        return f"EmbedTrace({len(self)} entries)"

    def to_csv(self) -> str:
        lines = [TRACE_HEADER]
        lines.extend(f"{int(c)},{int(p)}" for c, p in self.entries)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "EmbedTrace":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0].strip() != TRACE_HEADER:
            raise ValueError(f"trace file must start with header '{TRACE_HEADER}'")
        entries = []
        for ln in lines[1:]:
            parts = ln.split(",")
            if len(parts) != 2:
                raise ValueError(f"bad trace line: {ln!r}")
            try:
                entries.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise ValueError(f"bad trace line: {ln!r}") from None
        return cls(entries)


@dataclass(frozen=True)
class StegoKey:
    """Seed and segment count for the keyed random-segmented algorithm."""

    seed: int
    segments: int = 1

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.segments < 1:
            raise ValueError("segments must be >= 1")
