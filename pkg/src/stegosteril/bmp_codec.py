"""Bit-exact reader/writer for uncompressed 8-bit grayscale and 24-bit BMP.

Only BITMAPINFOHEADER (40-byte) files with positive height are accepted.
8-bit files must carry an identity grayscale palette (entry i == (i,i,i)),
so the stored palette index doubles as the intensity. The writer emits a
single canonical layout per variant so outputs are byte-reproducible.
"""

from __future__ import annotations

import struct

import numpy as np

from .image_model import ImageBuffer

FILE_HEADER_SIZE = 14
INFO_HEADER_SIZE = 40
PALETTE_SIZE = 256 * 4

# Canonical pixel-data offsets emitted by write_bmp.
OFFSET_24BIT = FILE_HEADER_SIZE + INFO_HEADER_SIZE          # 54
OFFSET_8BIT = OFFSET_24BIT + PALETTE_SIZE                   # 1078


class BmpFormatError(ValueError):
    """Raised when a byte sequence is not a supported BMP file."""


def _row_stride(width: int, bytes_per_pixel: int) -> int:
    return (width * bytes_per_pixel + 3) // 4 * 4


def parse_bmp(data: bytes) -> ImageBuffer:
    """Decode a BMP byte sequence into an ImageBuffer.

    Rows are normalized to top-down order and 24-bit BGR triples are
    reordered to R, G, B planes. Rejects anything outside the supported
    subset rather than guessing.
    """
    data = bytes(data)
    if len(data) < FILE_HEADER_SIZE:
        raise BmpFormatError(f"truncated input: {len(data)} bytes")
    magic, file_size, _res1, _res2, data_offset = struct.unpack_from("<2sIHHI", data, 0)
    if magic != b"BM":
        raise BmpFormatError("bad magic, expected 'BM'")
    if file_size != len(data):
        raise BmpFormatError(
            f"declared file size {file_size} != actual {len(data)} bytes"
        )
    if len(data) < FILE_HEADER_SIZE + INFO_HEADER_SIZE:
        raise BmpFormatError("truncated input: info header missing")
    (
        info_size,
        width,
        height,
        planes,
        bit_count,
        compression,
        _image_size,
        _xppm,
        _yppm,
        colors_used,
        _colors_important,
    ) = struct.unpack_from("<IiiHHIIiiII", data, FILE_HEADER_SIZE)
    if info_size != INFO_HEADER_SIZE:
        raise BmpFormatError(f"unsupported info header size {info_size}")
    if planes != 1:
        raise BmpFormatError(f"bad plane count {planes}")
    if compression != 0:
        raise BmpFormatError(f"unsupported compression {compression}")
    if bit_count not in (8, 24):
        raise BmpFormatError(f"unsupported bit count {bit_count}")
    if width < 1:
        raise BmpFormatError(f"bad width {width}")
    if height < 1:
        # Negative height would mean top-down storage; not supported.
        raise BmpFormatError(f"bad height {height}")

    if bit_count == 8:
        if colors_used not in (0, 256):
            raise BmpFormatError(f"8-bit palette must have 256 entries, got {colors_used}")
        palette_offset = FILE_HEADER_SIZE + INFO_HEADER_SIZE
        if len(data) < palette_offset + PALETTE_SIZE:
            raise BmpFormatError("truncated input: palette missing")
        palette = np.frombuffer(
            data, dtype=np.uint8, count=PALETTE_SIZE, offset=palette_offset
        ).reshape(256, 4)
        idx = np.arange(256, dtype=np.uint8)
        if not (
            np.array_equal(palette[:, 0], idx)
            and np.array_equal(palette[:, 1], idx)
            and np.array_equal(palette[:, 2], idx)
        ):
            raise BmpFormatError("8-bit palette is not an identity grayscale ramp")
        min_offset = palette_offset + PALETTE_SIZE
        bytes_pp = 1
        channels = 1
    else:
        if colors_used != 0:
            raise BmpFormatError("24-bit images must not declare a palette")
        min_offset = FILE_HEADER_SIZE + INFO_HEADER_SIZE
        bytes_pp = 3
        channels = 3

    if data_offset < min_offset:
        raise BmpFormatError(f"pixel data offset {data_offset} overlaps headers")
    stride = _row_stride(width, bytes_pp)
    needed = data_offset + stride * height
    if needed > len(data):
        raise BmpFormatError(
            f"pixel data needs {needed} bytes but file has {len(data)}"
        )

    rows = np.frombuffer(
        data, dtype=np.uint8, count=stride * height, offset=data_offset
    ).reshape(height, stride)
    rows = rows[::-1]  # stored bottom-up; normalize to top-down
    if channels == 1:
        plane = rows[:, :width].reshape(1, -1)
        return ImageBuffer(width, height, plane)
    pixels = rows[:, : width * 3].reshape(height * width, 3)
    # BGR byte order on disk -> R, G, B planes.
    planes = np.stack([pixels[:, 2], pixels[:, 1], pixels[:, 0]], axis=0)
    return ImageBuffer(width, height, planes)


def write_bmp(image: ImageBuffer) -> bytes:
    """Encode an ImageBuffer as a canonical BMP byte sequence."""
    if image.channels == 1:
        return _write_8bit(image)
    if image.channels == 3:
        return _write_24bit(image)
    raise ValueError(f"unsupported channel count {image.channels}")


def _file_header(file_size: int, data_offset: int) -> bytes:
    return struct.pack("<2sIHHI", b"BM", file_size, 0, 0, data_offset)


def _info_header(width: int, height: int, bit_count: int, image_size: int,
                 colors_used: int) -> bytes:
    return struct.pack(
        "<IiiHHIIiiII",
        INFO_HEADER_SIZE, width, height, 1, bit_count, 0,
        image_size, 0, 0, colors_used, 0,
    )


def _pad_rows(rows: np.ndarray, stride: int) -> np.ndarray:
    height, used = rows.shape
    padded = np.zeros((height, stride), dtype=np.uint8)
    padded[:, :used] = rows
    return padded


def _write_8bit(image: ImageBuffer) -> bytes:
    stride = _row_stride(image.width, 1)
    image_size = stride * image.height
    file_size = OFFSET_8BIT + image_size
    idx = np.arange(256, dtype=np.uint8)
    palette = np.zeros((256, 4), dtype=np.uint8)
    palette[:, 0] = idx
    palette[:, 1] = idx
    palette[:, 2] = idx
    rows = image.plane(0).reshape(image.height, image.width)[::-1]
    return b"".join([
        _file_header(file_size, OFFSET_8BIT),
        _info_header(image.width, image.height, 8, image_size, 256),
        palette.tobytes(),
        _pad_rows(rows, stride).tobytes(),
    ])


def _write_24bit(image: ImageBuffer) -> bytes:
    stride = _row_stride(image.width, 3)
    image_size = stride * image.height
    file_size = OFFSET_24BIT + image_size
    pixels = np.stack(
        [image.plane(2), image.plane(1), image.plane(0)], axis=1
    )  # B, G, R byte order on disk
    rows = pixels.reshape(image.height, image.width * 3)[::-1]
    return b"".join([
        _file_header(file_size, OFFSET_24BIT),
        _info_header(image.width, image.height, 24, image_size, 0),
        _pad_rows(rows, stride).tobytes(),
    ])
