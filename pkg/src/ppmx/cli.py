"""ppmx command line: compress, decompress, bench."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import BenchPlan, run_bench
from .container import FormatError
from .entropy_coder import DecodeError
from .huffman import KraftError
from .ppm_codec import (MAX_CCM_ORDER, ConfigError, ModelConfig, StateMismatch, compress,
                        decompress)

EXIT_IO = 3
EXIT_CONFIG = 4
EXIT_DECODE = 20
EXIT_STATE = 21

log = logging.getLogger("ppmx")


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def int_list(text: str) -> list[int]:
    """Parse ``1..6``, ``4,8,12`` or a mix such as ``1..3,8``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..", 1)
            lo, hi = positive_int(a), positive_int(b)
            if hi < lo:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(positive_int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def pitch_arg(text: str) -> int | None:
    return None if text == "auto" else positive_int(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ppmx", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("compress", help="compress a file")
    c.add_argument("--mode", choices=["classic", "ccm"], required=True)
    c.add_argument("--order", type=positive_int, required=True,
                   help="context length: symbols (classic) or bits (ccm)")
    c.add_argument("--pitch", type=positive_int, default=None,
                   help="bits dropped per escape in ccm mode (default: rounded average code length)")
    c.add_argument("input", type=Path)
    c.add_argument("output", type=Path)

    d = sub.add_parser("decompress", help="decompress a .ppmx file")
    d.add_argument("input", type=Path)
    d.add_argument("output", type=Path)

    b = sub.add_parser("bench", help="benchmark a corpus directory")
    b.add_argument("--corpus", type=Path, required=True)
    b.add_argument("--out", type=Path, required=True)
    b.add_argument("--classic-orders", type=int_list, default=[1, 2, 3, 4, 5, 6])
    b.add_argument("--ccm-bits", type=int_list, default=None,
                   help=f"bit orders to run (default: sweep 1..{MAX_CCM_ORDER} until the trie "
                        "outgrows the largest classic trie)")
    b.add_argument("--pitch", type=pitch_arg, default=None, help="auto or a fixed number of bits")
    b.add_argument("--jobs", type=positive_int, default=1)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.cmd == "compress":
            cfg = ModelConfig(args.mode, args.order, args.pitch)
            data = args.input.read_bytes()
            blob = compress(data, cfg)
            args.output.write_bytes(blob)
            log.info("%d -> %d bytes (%.3f bits/symbol)", len(data), len(blob),
                     8 * len(blob) / max(1, len(data)))
        elif args.cmd == "decompress":
            args.output.write_bytes(decompress(args.input.read_bytes()))
        else:
            plan = BenchPlan(args.corpus, args.out, args.classic_orders, args.ccm_bits,
                             args.pitch, args.jobs)
            runs, _ = run_bench(plan)
            log.info("%d runs written to %s", len(runs), args.out)
    except FormatError as e:
        print(f"ppmx: {type(e).__name__}: {e}", file=sys.stderr)
        return e.code
    except (DecodeError, KraftError) as e:
        print(f"ppmx: corrupt input: {e}", file=sys.stderr)
        return EXIT_DECODE
    except StateMismatch as e:
        print(f"ppmx: {e}", file=sys.stderr)
        return EXIT_STATE
    except ConfigError as e:
        print(f"ppmx: bad configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, RuntimeError) as e:
        print(f"ppmx: {e}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
