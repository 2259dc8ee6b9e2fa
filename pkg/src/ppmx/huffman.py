"""Static order-0 Huffman coding used to build compressed contexts."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .entropy_coder import BitReader, BitWriter, DecodeError


class KraftError(ValueError):
    """Code lengths do not describe a complete prefix code."""


@dataclass(frozen=True)
class SymbolFrequencies:
    count: tuple[int, ...]

    def __post_init__(self):
        if len(self.count) != 256:
            raise ValueError("expected 256 counts")

    @property
    def alphabet_size(self) -> int:
        return sum(1 for c in self.count if c > 0)

    @property
    def total(self) -> int:
        return sum(self.count)

    @property
    def alphabet(self) -> list[int]:
        return [s for s, c in enumerate(self.count) if c > 0]


def count_frequencies(data: bytes) -> SymbolFrequencies:
    counts = [0] * 256
    for b in data:
        counts[b] += 1
    return SymbolFrequencies(tuple(counts))


@dataclass(frozen=True)
class HuffmanCodebook:
    """Canonical prefix code. ``code_bits[s]`` holds ``code_length[s]`` bits.

    ``average_code_length`` is only known when the codebook was built from
    frequencies; a codebook rebuilt from a serialized length table has it
    set to ``None``. It does not take part in equality.
    """

    code_length: tuple[int, ...]
    code_bits: tuple[int, ...] = field(init=False)
    average_code_length: float | None = field(default=None, compare=False)

    def __post_init__(self):
        lengths = tuple(int(x) for x in self.code_length)
        if len(lengths) != 256:
            raise ValueError("expected 256 code lengths")
        check_kraft(lengths)
        object.__setattr__(self, "code_length", lengths)
        object.__setattr__(self, "code_bits", canonical_codes(lengths))

    @property
    def alphabet(self) -> list[int]:
        return [s for s, n in enumerate(self.code_length) if n]

    def codeword(self, symbol: int) -> str:
        return encode_codeword(self, symbol)


def check_kraft(lengths: Iterable[int]) -> None:
    used = [n for n in lengths if n]
    if not used:
        raise KraftError("empty code table")
    if any(n < 0 for n in used):
        raise KraftError("negative code length")
    if len(used) == 1:
        if used[0] != 1:
            raise KraftError("a single-symbol table must use length 1")
        return
    if sum(Fraction(1, 1 << n) for n in used) != 1:
        raise KraftError("code lengths violate Kraft equality")


def canonical_codes(lengths: tuple[int, ...]) -> tuple[int, ...]:
    """Assign codes in (length, symbol) order."""
    codes = [0] * 256
    code = 0
    prev_len = 0
    for n, s in sorted((n, s) for s, n in enumerate(lengths) if n):
        code <<= n - prev_len
        codes[s] = code
        code += 1
        prev_len = n
    return tuple(codes)


def code_lengths(freqs: SymbolFrequencies) -> list[int]:
    """Optimal prefix-code lengths.

    Merges the two lightest subtrees, ties broken by the smaller minimum
    symbol contained in the subtree.
    """
    heap = [(c, s, (s,)) for s, c in enumerate(freqs.count) if c > 0]
    if not heap:
        raise ValueError("cannot build a code for an empty alphabet")
    lengths = [0] * 256
    if len(heap) == 1:
        lengths[heap[0][1]] = 1
        return lengths
    heapq.heapify(heap)
    while len(heap) > 1:
        wa, ma, sa = heapq.heappop(heap)
        wb, mb, sb = heapq.heappop(heap)
        for s in sa + sb:
            lengths[s] += 1
        heapq.heappush(heap, (wa + wb, min(ma, mb), sa + sb))
    return lengths


def build_codebook(freqs: SymbolFrequencies) -> HuffmanCodebook:
    lengths = code_lengths(freqs)
    n = freqs.total
    avg = sum(c * l for c, l in zip(freqs.count, lengths)) / n
    return HuffmanCodebook(tuple(lengths), average_code_length=avg)


def encode_codeword(cb: HuffmanCodebook, symbol: int) -> str:
    n = cb.code_length[symbol]
    if not n:
        raise KeyError(f"symbol {symbol} is not in the codebook")
    return format(cb.code_bits[symbol], f"0{n}b")


def default_pitch(cb: HuffmanCodebook) -> int:
    """Average code length rounded half-up, at least 1."""
    if cb.average_code_length is None:
        raise ValueError("codebook carries no average code length")
    return max(1, int(cb.average_code_length + 0.5))


def serialize_lengths(cb: HuffmanCodebook) -> bytes:
    if max(cb.code_length) > 255:
        raise ValueError("code length does not fit in a byte")
    return bytes(cb.code_length)


def deserialize_lengths(table: bytes) -> HuffmanCodebook:
    if len(table) != 256:
        raise ValueError(f"code table must be 256 bytes, got {len(table)}")
    return HuffmanCodebook(tuple(table))


def encode_bytes(cb: HuffmanCodebook, data: bytes) -> tuple[bytes, int]:
    """Huffman-code ``data``; returns (packed bytes, bit count)."""
    w = BitWriter()
    for b in data:
        w.write_bits(encode_codeword(cb, b))
    return w.getvalue(), w.bits_written


def decode_bytes(cb: HuffmanCodebook, packed: bytes, nbits: int) -> bytes:
    lookup = {(cb.code_length[s], cb.code_bits[s]): s for s in cb.alphabet}
    r = BitReader(packed)
    out = bytearray()
    n = code = 0
    while r.bits_read < nbits:
        code = (code << 1) | r.read_bit()
        n += 1
        s = lookup.get((n, code))
        if s is not None:
            out.append(s)
            n = code = 0
    if n:
        raise DecodeError("bit stream ends inside a codeword")
    return bytes(out)
