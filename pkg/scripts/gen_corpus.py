#!/usr/bin/env python3
"""Regenerate the checked-in golden corpus and its frozen experiment report.

Covers are 32x32 color BMPs built from a smooth gradient plus Gaussian
noise, with the LSB of roughly 75% of intensities forced even. The parity
skew is what makes bucket majorities track the original cover, so the
sterilization accuracy of the golden experiment lands well inside its
expected band instead of hovering at a coin flip. Everything is seeded,
so rerunning this script reproduces the exact same bytes.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from stegosteril import ExperimentConfig, ImageBuffer, run_experiment, write_bmp

DATA_DIR = Path(__file__).resolve().parent.parent / "tests" / "data"
SEED = 20240917
N_COVERS = 10
SIDE = 32
EVEN_FRACTION = 0.85
FILL_RATIO = 0.3

TEXTS = {
    "field_notes.txt": (
        "Day twelve at the survey site. The river rose a hand's width "
        "overnight and the gauge needed recalibration before breakfast. "
        "Cloud cover held until noon, then broke into the kind of flat "
        "light that makes the far bank look painted. We logged fourteen "
        "samples, two of them duplicates for the lab in town, and marked "
        "the third transect with orange flags. The generator is burning "
        "more fuel than the manifest predicted, so the next supply run "
        "moves up a week. Morale is fine; the cook found wild onions."
    ),
    "radio_script.txt": (
        "Good evening, you are listening to the shortwave service. "
        "Tonight's bulletin covers harbor traffic, grain prices, and the "
        "long-promised repairs to the coastal road. Fishing boats should "
        "expect a northerly swell after midnight and small craft are "
        "advised to stay moored. The market report follows the news at "
        "the top of the hour, read twice at dictation speed. We close "
        "tonight with a request: the lighthouse keeper at Point Arris "
        "asks travelers to stop ringing the fog bell for photographs."
    ),
    "recipe_card.txt": (
        "Split four ripe plums and set them cut side down in a heavy pan "
        "with a spoon of butter and two of sugar. Let them take color "
        "without moving them, about six minutes, then add a splash of "
        "water and cover. Meanwhile whisk three eggs with a cup of milk, "
        "a half cup of flour, and a pinch of salt until smooth. Pour the "
        "batter over the plums, move the pan to a hot oven, and bake "
        "until puffed at the edges and set in the middle. Dust with "
        "powdered sugar and serve straight from the pan while warm."
    ),
}


def make_cover(rng: np.random.Generator) -> ImageBuffer:
    y, x = np.mgrid[0:SIDE, 0:SIDE]
    channels = []
    for c in range(3):
        angle = rng.uniform(0, 2 * np.pi)
        slope = rng.uniform(1.0, 3.0)
        base = 128 + slope * (np.cos(angle) * x + np.sin(angle) * y)
        noise = rng.normal(0, 18, (SIDE, SIDE))
        plane = np.clip(base + noise, 0, 255).astype(np.uint8)
        force_even = rng.random((SIDE, SIDE)) < EVEN_FRACTION
        plane = np.where(force_even, plane & 0xFE, plane | 1).astype(np.uint8)
        channels.append(plane.reshape(-1))
    return ImageBuffer.rgb(SIDE, SIDE, *channels)


def main() -> int:
    covers_dir = DATA_DIR / "corpus" / "covers"
    texts_dir = DATA_DIR / "corpus" / "texts"
    covers_dir.mkdir(parents=True, exist_ok=True)
    texts_dir.mkdir(parents=True, exist_ok=True)

    rng = np.random.default_rng(SEED)
    for i in range(N_COVERS):
        path = covers_dir / f"cover_{i:02d}.bmp"
        path.write_bytes(write_bmp(make_cover(rng)))
    for name, body in TEXTS.items():
        (texts_dir / name).write_text(body, encoding="ascii")

    config = ExperimentConfig(
        covers_dir=covers_dir,
        texts_dir=texts_dir,
        algorithm="A",
        fill_ratio=FILL_RATIO,
    )
    report = run_experiment(config)
    (DATA_DIR / "golden_report.csv").write_text(report.to_csv(), encoding="ascii")

    defined = [r.accuracy for r in report.rows if r.accuracy is not None]
    print(f"wrote {N_COVERS} covers, {len(TEXTS)} texts, "
          f"{len(report.rows)} report rows")
    print(f"accuracy: min {min(defined):.4f} max {max(defined):.4f} "
          f"mean {sum(defined) / len(defined):.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
