"""Bit-level streams and a 32-bit carry-propagating range coder.

The range coder follows the classic "low/range + cache" layout: ``low`` is
kept in 33 bits so a carry out of the top byte can be propagated into the
pending run of 0xFF bytes. Frequencies handed to the coder must total less
than ``2**24`` so that ``range // total`` never drops to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

TOP = 1 << 24
MAX_TOTAL = 1 << 24
MASK32 = 0xFFFFFFFF


class DecodeError(Exception):
    """Raised when a coded stream is truncated or inconsistent."""


# ---------------------------------------------------------------------------
# bit streams


class BitWriter:
    """Accumulates bits MSB-first into a byte buffer."""

    def __init__(self):
        self.buf = bytearray()
        self._acc = 0
        self._nacc = 0
        self.bits_written = 0

    def write(self, value: int, width: int) -> None:
        if not 1 <= width <= 64:
            raise ValueError(f"width must be in 1..64, got {width}")
        if value < 0 or value >> width:
            raise ValueError(f"value {value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self._nacc += width
        self.bits_written += width
        while self._nacc >= 8:
            self._nacc -= 8
            self.buf.append((self._acc >> self._nacc) & 0xFF)
        self._acc &= (1 << self._nacc) - 1

    def write_bits(self, bits: str) -> None:
        """Write a string of '0'/'1' characters."""
        for i in range(0, len(bits), 64):
            chunk = bits[i:i + 64]
            self.write(int(chunk, 2), len(chunk))

    def getvalue(self) -> bytes:
        """Return the buffer with the final partial byte zero-padded."""
        out = bytes(self.buf)
        if self._nacc:
            out += bytes([(self._acc << (8 - self._nacc)) & 0xFF])
        return out


class BitReader:
    def __init__(self, data: bytes):
        self.data = bytes(data)
        self.bits_read = 0

    @property
    def bits_left(self) -> int:
        return 8 * len(self.data) - self.bits_read

    def read(self, width: int) -> int:
        if not 1 <= width <= 64:
            raise ValueError(f"width must be in 1..64, got {width}")
        if width > self.bits_left:
            raise DecodeError("bit stream exhausted")
        value = 0
        pos = self.bits_read
        for _ in range(width):
            byte = self.data[pos >> 3]
            value = (value << 1) | ((byte >> (7 - (pos & 7))) & 1)
            pos += 1
        self.bits_read = pos
        return value

    def read_bit(self) -> int:
        return self.read(1)


# ---------------------------------------------------------------------------
# distributions


@dataclass(frozen=True)
class CodingDistribution:
    """Integer frequency table handed to the range coder.

    Slots with zero frequency are allowed in the table but can never be
    encoded.
    """

    freq: tuple[int, ...]
    cum: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        freq = tuple(int(f) for f in self.freq)
        if not freq:
            raise ValueError("distribution needs at least one slot")
        if any(f < 0 for f in freq):
            raise ValueError("negative frequency")
        cum = [0]
        for f in freq:
            cum.append(cum[-1] + f)
        if cum[-1] == 0:
            raise ValueError("distribution has zero total")
        if cum[-1] >= MAX_TOTAL:
            raise ValueError(f"total {cum[-1]} >= 2**24; use from_frequencies to rescale")
        object.__setattr__(self, "freq", freq)
        object.__setattr__(self, "cum", tuple(cum))

    @classmethod
    def from_frequencies(cls, freqs: Sequence[int]) -> "CodingDistribution":
        return cls(tuple(rescale(list(freqs))))

    @property
    def slot_count(self) -> int:
        return len(self.freq)

    @property
    def total(self) -> int:
        return self.cum[-1]


def rescale(freqs: list[int]) -> list[int]:
    """Halve (rounding up) until the total fits below 2**24."""
    while sum(freqs) >= MAX_TOTAL:
        freqs = [(f + 1) >> 1 for f in freqs]
    return freqs


# ---------------------------------------------------------------------------
# range coder


class RangeEncoder:
    def __init__(self):
        self.low = 0
        self.range = MASK32
        self._cache = 0
        self._cache_size = 1
        # the very first cache byte is always 0 and is never emitted
        self._skip_first = True
        self.out = bytearray()
        self.symbols = 0

    def encode(self, cum: int, freq: int, total: int) -> None:
        """Code the interval [cum, cum+freq) out of total."""
        if freq <= 0:
            raise ValueError("cannot encode a zero-frequency slot")
        if total == freq:
            return
        r = self.range // total
        self.low += r * cum
        self.range = r * freq
        while self.range < TOP:
            self.range <<= 8
            self._shift_low()

    def encode_symbol(self, dist: CodingDistribution, slot: int) -> None:
        if not 0 <= slot < dist.slot_count:
            raise IndexError(f"slot {slot} out of range for {dist.slot_count} slots")
        self.encode(dist.cum[slot], dist.freq[slot], dist.total)
        self.symbols += 1

    def _shift_low(self) -> None:
        if self.low < 0xFF000000 or self.low > MASK32:
            carry = self.low >> 32
            temp = self._cache
            while True:
                if self._skip_first:
                    assert temp + carry == 0
                    self._skip_first = False
                else:
                    self.out.append((temp + carry) & 0xFF)
                temp = 0xFF
                self._cache_size -= 1
                if self._cache_size == 0:
                    break
            self._cache = (self.low >> 24) & 0xFF
        self._cache_size += 1
        self.low = (self.low << 8) & MASK32

    def finish(self) -> bytes:
        """Flush the coder and return the complete byte stream.

        Calling finish again returns the same bytes.
        """
        if not hasattr(self, "_final"):
            for _ in range(5):
                self._shift_low()
            self._final = bytes(self.out)
        return self._final


class RangeDecoder:
    def __init__(self, data: bytes):
        self.data = bytes(data)
        self.pos = 0
        self.range = MASK32
        self.code = 0
        for _ in range(4):
            self.code = (self.code << 8) | self._next_byte()

    def _next_byte(self) -> int:
        if self.pos >= len(self.data):
            raise DecodeError("range-coded payload is truncated")
        b = self.data[self.pos]
        self.pos += 1
        return b

    def decode_target(self, total: int) -> int:
        """First half of a decode step: the cumulative count the code falls on."""
        self._r = self.range // total
        v = self.code // self._r
        if v >= total:
            raise DecodeError("code value outside the coding interval")
        return v

    def consume(self, cum: int, freq: int) -> None:
        """Second half of a decode step, once the slot is known."""
        self.code -= self._r * cum
        self.range = self._r * freq
        while self.range < TOP:
            self.code = ((self.code << 8) | self._next_byte()) & MASK32
            self.range <<= 8

    def decode(self, freqs: Sequence[int], cum: Sequence[int], total: int) -> int:
        if len(freqs) == 1 or total == max(freqs):
            # certain event: nothing was coded
            return max(range(len(freqs)), key=lambda i: freqs[i])
        v = self.decode_target(total)
        slot = _bisect_cum(cum, v)
        self.consume(cum[slot], freqs[slot])
        return slot

    def decode_symbol(self, dist: CodingDistribution) -> int:
        return self.decode(dist.freq, dist.cum, dist.total)

    def check_exhausted(self) -> None:
        """Raise unless every payload byte was consumed."""
        if self.pos != len(self.data):
            raise DecodeError(
                f"{len(self.data) - self.pos} unconsumed payload bytes")


def _bisect_cum(cum: Sequence[int], v: int) -> int:
    lo, hi = 0, len(cum) - 2
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        if cum[mid] <= v:
            lo = mid
        else:
            hi = mid - 1
    return lo
