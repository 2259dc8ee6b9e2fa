"""On-disk format.

    offset  size  field
    0       4     magic b"PPMX"
    4       1     version (1)
    5       1     mode (0 classic, 1 ccm)
    6       1     order (symbols for classic, bits for ccm)
    7       1     pitch (0 for classic)
    8       8     original length, little-endian unsigned
    16      256   Huffman code lengths, one byte per byte value (ccm only)
    ...           range-coder payload

Empty inputs carry no payload. All integers are little-endian.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .huffman import KraftError, check_kraft

MAGIC = b"PPMX"
VERSION = 1
MODE_CLASSIC = 0
MODE_CCM = 1
HEADER = struct.Struct("<4sBBBBQ")
HEADER_SIZE = HEADER.size
TABLE_SIZE = 256
MAX_CLASSIC_ORDER = 16
MAX_CCM_ORDER = 64


class FormatError(Exception):
    """Base class for container parsing errors; ``code`` doubles as a CLI exit status."""

    code = 10


class BadMagic(FormatError):
    code = 11


class BadVersion(FormatError):
    code = 12


class BadMode(FormatError):
    code = 13


class ShortFile(FormatError):
    code = 14


class BadTable(FormatError):
    code = 15


class BadHeader(FormatError):
    code = 16


@dataclass(frozen=True)
class Container:
    mode: int
    order: int
    pitch: int
    original_length: int
    huffman_lengths: bytes | None
    payload: bytes

    @property
    def header_size(self) -> int:
        return HEADER_SIZE + (TABLE_SIZE if self.mode == MODE_CCM else 0)

    @property
    def size(self) -> int:
        return self.header_size + len(self.payload)


def write(c: Container) -> bytes:
    if c.mode not in (MODE_CLASSIC, MODE_CCM):
        raise BadMode(f"mode {c.mode}")
    if (c.huffman_lengths is not None) != (c.mode == MODE_CCM):
        raise BadTable("huffman table must be present exactly in ccm mode")
    head = HEADER.pack(MAGIC, VERSION, c.mode, c.order, c.pitch, c.original_length)
    table = c.huffman_lengths or b""
    if c.mode == MODE_CCM and len(table) != TABLE_SIZE:
        raise BadTable(f"table has {len(table)} bytes")
    return head + table + c.payload


def read(blob: bytes) -> Container:
    if len(blob) < 4:
        raise ShortFile("file shorter than the magic number")
    if blob[:4] != MAGIC:
        raise BadMagic("not a PPMX container")
    if len(blob) < HEADER_SIZE:
        raise ShortFile(f"header needs {HEADER_SIZE} bytes, got {len(blob)}")
    _, version, mode, order, pitch, length = HEADER.unpack_from(blob)
    if version != VERSION:
        raise BadVersion(f"unsupported version {version}")
    if mode not in (MODE_CLASSIC, MODE_CCM):
        raise BadMode(f"unknown mode {mode}")
    limit = MAX_CCM_ORDER if mode == MODE_CCM else MAX_CLASSIC_ORDER
    if not 1 <= order <= limit:
        raise BadHeader(f"order {order} outside 1..{limit}")
    if mode == MODE_CLASSIC and pitch != 0:
        raise BadHeader("classic containers carry pitch 0")
    if mode == MODE_CCM and not 1 <= pitch <= order:
        raise BadHeader(f"pitch {pitch} outside 1..{order}")
    pos = HEADER_SIZE
    table = None
    if mode == MODE_CCM:
        if len(blob) < pos + TABLE_SIZE:
            raise ShortFile("truncated code-length table")
        table = bytes(blob[pos:pos + TABLE_SIZE])
        pos += TABLE_SIZE
        if any(table):
            try:
                check_kraft(table)
            except KraftError as e:
                raise BadTable(str(e)) from None
        elif length:
            raise BadTable("empty code table for a non-empty input")
    payload = bytes(blob[pos:])
    if length == 0 and payload:
        raise BadHeader("payload present for an empty input")
    if length and not payload:
        raise ShortFile("missing payload")
    return Container(mode, order, pitch, length, table, payload)
