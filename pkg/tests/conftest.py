"""Shared helpers for the test suite.

Randomized tests draw from numpy Generators seeded per test so failures
reproduce exactly; helpers here build image buffers and bit streams from a
caller-supplied generator.
"""

from __future__ import annotations

import numpy as np
import pytest

from stegosteril import BitString, ImageBuffer


def random_gray(rng: np.random.Generator, width: int, height: int) -> ImageBuffer:
    values = rng.integers(0, 256, width * height, dtype=np.uint8)
    return ImageBuffer.grayscale(width, height, values)


def random_rgb(rng: np.random.Generator, width: int, height: int) -> ImageBuffer:
    r, g, b = rng.integers(0, 256, (3, width * height), dtype=np.uint8)
    return ImageBuffer.rgb(width, height, r, g, b)


def random_image(rng: np.random.Generator, width: int, height: int) -> ImageBuffer:
    if rng.integers(0, 2) == 0:
        return random_gray(rng, width, height)
    return random_rgb(rng, width, height)


def random_bits(rng: np.random.Generator, n: int) -> BitString:
    return BitString(rng.integers(0, 2, n, dtype=np.uint8))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0xC0FFEE)
