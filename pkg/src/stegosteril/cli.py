"""Command-line front end: embed, extract, sterilize, metrics, histogram,
experiment.

Messages are framed with a 32-bit big-endian bit-length prefix so extract
needs no length argument. For the keyed algorithm C the framed stream is
zero-padded up to 32*segments bits when shorter; that pins the prefix to
the first selections of the first segment, which is what lets extraction
recover the length without knowing the payload size up front.

Exit codes: 0 success, 1 usage error, 2 data error (a truncated extract
also exits 2 after writing what could be recovered).
"""

from __future__ import annotations

import argparse
import struct
import sys
from pathlib import Path

from .bmp_codec import parse_bmp, write_bmp
from .embedders import (
    capacity,
    extract_lsb_matching,
    extract_random_segmented,
    extract_sequential,
)
from .harness import ExperimentConfig, embed_with, run_experiment
from .image_model import (
    BitString,
    EmbedTrace,
    ImageBuffer,
    StegoKey,
    bits_to_text,
    text_to_bits,
)
from .metrics import compare_images, histogram, histogram_to_csv, mse, psnr_from_mse
from .sterilizer import SterilizeConfig, sterilize_image

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

PREFIX_BITS = 32


class UsageError(Exception):
    """Bad flag combination detected after argparse."""


def frame_message(payload: bytes, segments: int = 1) -> BitString:
    """Length-prefix a payload; pad to 32*segments bits for algorithm C."""
    n_bits = len(payload) * 8
    if n_bits >= 2**32:
        raise ValueError("payload too large for 32-bit length prefix")
    framed = text_to_bits(struct.pack(">I", n_bits)) + text_to_bits(payload)
    shortfall = PREFIX_BITS * segments - len(framed)
    if shortfall > 0:
        framed = framed + BitString([0] * shortfall)
    return framed


def extract_framed(stego: ImageBuffer, algorithm: str, key: StegoKey | None) -> tuple[bytes, bool]:
    """Recover (payload bytes, truncated flag) from a framed stego image.

    A declared length beyond capacity is clamped so garbage input never
    crashes; the flag reports that clamping (or a garbage odd length for
    the pairwise algorithm) happened.
    """
    max_bits, _ = capacity(stego)
    if max_bits < PREFIX_BITS:
        raise ValueError(
            f"image capacity {max_bits} bits cannot hold a {PREFIX_BITS}-bit prefix"
        )
    if algorithm == "C":
        assert key is not None
        probe = min(PREFIX_BITS * key.segments, max_bits)
        prefix = extract_random_segmented(stego, probe, key)[:PREFIX_BITS]
    elif algorithm == "B":
        prefix = extract_lsb_matching(stego, PREFIX_BITS)
    else:
        prefix = extract_sequential(stego, PREFIX_BITS)
    declared = int.from_bytes(bits_to_text(prefix), "big")
    max_payload = max_bits - PREFIX_BITS
    n_payload = min(declared, max_payload)
    truncated = declared > max_payload
    total = PREFIX_BITS + n_payload
    if algorithm == "C":
        assert key is not None
        stream_len = min(max(total, PREFIX_BITS * key.segments), max_bits)
        bits = extract_random_segmented(stego, stream_len, key)
    elif algorithm == "B":
        request = total + (total % 2)
        if request > max_bits:
            request = total - 1  # odd garbage length at full capacity
            truncated = True
        bits = extract_lsb_matching(stego, request)
    else:
        bits = extract_sequential(stego, total)
    payload_bits = bits[PREFIX_BITS:total]
    usable = len(payload_bits) // 8 * 8
    if usable < n_payload:
        truncated = True
    return bits_to_text(payload_bits[:usable]), truncated


def _fmt(value: float) -> str:
    if value == float("inf"):
        return "infinite"
    return f"{value:.6f}"


def _key_from_args(args) -> StegoKey | None:
    if args.algo != "C":
        return None
    if args.seed is None:
        raise UsageError("algorithm C requires --seed")
    return StegoKey(seed=args.seed, segments=args.segments)


def _sterilize_config(block: int | None) -> SterilizeConfig:
    return SterilizeConfig(block_side=block)


def cmd_embed(args) -> int:
    key = _key_from_args(args)
    cover = parse_bmp(Path(args.cover).read_bytes())
    payload = Path(args.msg).read_bytes()
    segments = key.segments if key else 1
    framed = frame_message(payload, segments)
    max_bits, _ = capacity(cover)
    result = embed_with(args.algo, cover, framed, key)
    Path(args.out).write_bytes(write_bmp(result.stego))
    Path(args.trace).write_text(result.trace.to_csv(), encoding="utf-8")
    used = len(result.trace)
    print(
        f"embedded {used} bits ({100.0 * used / max_bits:.2f}% of "
        f"capacity {max_bits} bits)"
    )
    return EXIT_OK


def cmd_extract(args) -> int:
    key = _key_from_args(args)
    stego = parse_bmp(Path(args.stego).read_bytes())
    payload, truncated = extract_framed(stego, args.algo, key)
    Path(args.out).write_bytes(payload)
    print(f"recovered {len(payload)} bytes")
    if truncated:
        print("warning: declared length exceeded capacity; output truncated",
              file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def cmd_sterilize(args) -> int:
    image = parse_bmp(Path(args.infile).read_bytes())
    sterilized = sterilize_image(image, _sterilize_config(args.block))
    Path(args.out).write_bytes(write_bmp(sterilized))
    result = mse(image, sterilized)
    for c in range(image.channels):
        changed = int((image.plane(c) != sterilized.plane(c)).sum())
        print(f"channel {c}: changed {changed} pixels, "
              f"mse {_fmt(result.per_channel[c])}, "
              f"psnr {_fmt(psnr_from_mse(result.per_channel[c]))}")
    print(f"combined: mse {_fmt(result.combined)}, "
          f"psnr {_fmt(psnr_from_mse(result.combined))}")
    return EXIT_OK


def cmd_metrics(args) -> int:
    if (args.cover is None) != (args.trace is None):
        raise UsageError("--cover and --trace must be given together")
    reference = parse_bmp(Path(args.stego).read_bytes())
    test = parse_bmp(Path(args.steri).read_bytes())
    cover = parse_bmp(Path(args.cover).read_bytes()) if args.cover else None
    trace = (
        EmbedTrace.from_csv(Path(args.trace).read_text(encoding="utf-8"))
        if args.trace else None
    )
    report = compare_images(reference, test, cover=cover, trace=trace)
    for c in range(reference.channels):
        print(f"channel {c}: mse {_fmt(report.mse.per_channel[c])}, "
              f"psnr {_fmt(report.psnr_per_channel[c])}, "
              f"histogram_l1 {report.histogram_l1_per_channel[c]}")
    print(f"combined: mse {_fmt(report.mse.combined)}, "
          f"psnr {_fmt(report.psnr_combined)}")
    if report.accuracy is not None:
        for c, acc in enumerate(report.accuracy.per_channel):
            ratio = "undefined" if acc.accuracy is None else f"{acc.accuracy:.6f}"
            print(f"channel {c}: embedded {acc.embedded}, changed {acc.changed}, "
                  f"recovered {acc.recovered}, accuracy {ratio}")
        overall = report.accuracy.overall
        ratio = "undefined" if overall.accuracy is None else f"{overall.accuracy:.6f}"
        print(f"overall: embedded {overall.embedded}, changed {overall.changed}, "
              f"recovered {overall.recovered}, accuracy {ratio}")
    return EXIT_OK


def cmd_histogram(args) -> int:
    image = parse_bmp(Path(args.infile).read_bytes())
    if not 0 <= args.channel < image.channels:
        raise UsageError(
            f"--channel {args.channel} out of range for {image.channels} channel(s)"
        )
    counts = histogram(image.plane(args.channel))
    Path(args.out).write_text(histogram_to_csv(counts), encoding="utf-8")
    print(f"wrote histogram of channel {args.channel} to {args.out}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    if not 0.0 < args.fill <= 1.0:
        raise UsageError("--fill must be in (0, 1]")
    key = _key_from_args(args)
    config = ExperimentConfig(
        covers_dir=Path(args.covers),
        texts_dir=Path(args.texts),
        algorithm=args.algo,
        key=key,
        fill_ratio=args.fill,
        sterilize_config=_sterilize_config(args.block),
    )
    report = run_experiment(config)
    Path(args.report).write_text(report.to_csv(), encoding="utf-8")
    print(f"evaluated {len(report.rows)} image/channel rows "
          f"({len(report.failures)} failures) -> {args.report}")
    for channel in sorted(report.aggregates):
        stats = report.aggregates[channel]
        if stats is None:
            print(f"channel {channel}: accuracy undefined on all images")
        else:
            print(f"channel {channel}: accuracy min {stats.minimum:.6f} "
                  f"max {stats.maximum:.6f} avg {stats.average:.6f} "
                  f"std {stats.std_deviation:.6f}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="stegosteril",
        description="LSB steganography toolkit with even/odd majority sterilization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_key_flags(p):
        p.add_argument("--seed", type=_seed, default=None,
                       help="64-bit key seed (algorithm C)")
        p.add_argument("--segments", type=_positive_int, default=1,
                       help="image segment count (algorithm C, default 1)")

    p = sub.add_parser("embed", parents=[], help="hide a message file in a cover BMP")
    p.add_argument("--algo", choices=("A", "B", "C"), required=True)
    p.add_argument("--cover", required=True, help="cover BMP path")
    p.add_argument("--msg", required=True, help="message file path")
    p.add_argument("--out", required=True, help="stego BMP output path")
    p.add_argument("--trace", required=True, help="trace CSV output path")
    add_key_flags(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover a framed message from a stego BMP")
    p.add_argument("--algo", choices=("A", "B", "C"), required=True)
    p.add_argument("--stego", required=True, help="stego BMP path")
    p.add_argument("--out", required=True, help="recovered message output path")
    add_key_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("sterilize", help="destroy LSB payloads in a BMP")
    p.add_argument("--in", dest="infile", required=True, help="input BMP path")
    p.add_argument("--out", required=True, help="sterilized BMP output path")
    p.add_argument("--block", type=_positive_int, default=None,
                   help="square block side for grouping (default: whole channel)")
    p.set_defaults(func=cmd_sterilize)

    p = sub.add_parser("metrics", help="compare two BMPs (MSE/PSNR/histogram)")
    p.add_argument("--stego", required=True, help="reference BMP path")
    p.add_argument("--steri", required=True, help="test BMP path")
    p.add_argument("--cover", default=None,
                   help="original cover (with --trace, adds accuracy counts)")
    p.add_argument("--trace", default=None, help="trace CSV from embed")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("histogram", help="dump one channel's histogram as CSV")
    p.add_argument("--in", dest="infile", required=True, help="input BMP path")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--channel", type=int, default=0,
                   help="channel index (default 0)")
    p.set_defaults(func=cmd_histogram)

    p = sub.add_parser("experiment", help="run embed->sterilize->measure over a corpus")
    p.add_argument("--algo", choices=("A", "B", "C"), required=True)
    p.add_argument("--covers", required=True, help="directory of cover BMPs")
    p.add_argument("--texts", required=True, help="directory of message text files")
    p.add_argument("--fill", type=float, default=1.0,
                   help="fraction of character capacity to embed (default 1.0)")
    p.add_argument("--block", type=_positive_int, default=None,
                   help="square block side for grouping (default: whole channel)")
    p.add_argument("--report", required=True, help="report CSV output path")
    add_key_flags(p)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"stegosteril: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"stegosteril: error: {exc}", file=sys.stderr)
        return EXIT_DATA
