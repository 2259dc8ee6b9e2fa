"""Classic vs compressed-context analysis of a single file.

For each classic order, picks the largest bit order whose normalized trie is
still smaller than the classic trie and prints both sides with the gains.

    python3 scripts/analyze_file.py corpus/calgary/book1 --pitch 5
"""

import argparse
from pathlib import Path

from ppmx import CCM, CLASSIC, ModelConfig, encode, gains, pick_ccm_order, run_stats
from ppmx.huffman import build_codebook, count_frequencies, default_pitch
from ppmx.ppm_codec import MAX_CCM_ORDER
from ppmx.stats import NoTradeoff


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("path", type=Path)
    p.add_argument("--orders", type=int, nargs="+", default=[1, 2, 3, 4, 5, 6])
    p.add_argument("--pitch", type=int, default=None, help="default: rounded average code length")
    args = p.parse_args()

    data = args.path.read_bytes()
    cb = build_codebook(count_frequencies(data))
    print(f"{args.path.name}: {len(data)} bytes, alphabet {sum(1 for c in cb.code_length if c)}, "
          f"average code length {cb.average_code_length:.3f}, default pitch {default_pitch(cb)}")

    classic = {k: run_stats(encode(data, ModelConfig(CLASSIC, k)), args.path.name)
               for k in args.orders}
    limit = max(s.normalized_nodes for s in classic.values())
    ccm = {}
    for bits in range(1, MAX_CCM_ORDER + 1):
        pitch = None if args.pitch is None else min(args.pitch, bits)
        ccm[bits] = run_stats(encode(data, ModelConfig(CCM, bits, pitch)), args.path.name)
        if ccm[bits].normalized_nodes >= limit:
            break

    print(f"{'k':>2} {'nodes':>9} {'bps':>6} | {'I':>3} {'Y':>10} {'bps':>6} | {'mem%':>7} {'comp%':>7}")
    for k in args.orders:
        c = classic[k]
        try:
            bits = pick_ccm_order({kk: s.normalized_nodes for kk, s in classic.items()},
                                  {b: s.normalized_nodes for b, s in ccm.items()}, k)
        except NoTradeoff:
            print(f"{k:>2} {c.node_count:>9} {c.bps_excl_header:6.3f} | no trade-off")
            continue
        r = gains(c, ccm[bits], exclude_header=True)
        print(f"{k:>2} {c.node_count:>9} {c.bps_excl_header:6.3f} | {bits:>3} {r.ccm_nodes:>10.0f} "
              f"{r.ccm_bps:6.3f} | {r.memory_gain_pct:7.2f} {r.compression_gain_pct:7.2f}")


if __name__ == "__main__":
    main()
