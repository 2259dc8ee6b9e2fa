import struct

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ppmx import container as fmt
from ppmx.container import (BadHeader, BadMagic, BadMode, BadTable, BadVersion, Container,
                            FormatError, ShortFile)
from ppmx.huffman import build_codebook, count_frequencies, serialize_lengths


@st.composite
def containers(draw):
    ccm = draw(st.booleans())
    n = draw(st.integers(0, 2 ** 40))
    payload = draw(st.binary(min_size=1, max_size=200)) if n else b""
    if ccm:
        order = draw(st.integers(1, 64))
        pitch = draw(st.integers(1, order))
        sample = draw(st.binary(min_size=1, max_size=300))
        table = serialize_lengths(build_codebook(count_frequencies(sample))) if n else bytes(256)
        return Container(fmt.MODE_CCM, order, pitch, n, table, payload)
    return Container(fmt.MODE_CLASSIC, draw(st.integers(1, 16)), 0, n, None, payload)


@given(containers())
def test_roundtrip(c):
    blob = fmt.write(c)
    assert len(blob) == c.size
    assert fmt.read(blob) == c


def test_classic_header_is_16_bytes():
    blob = fmt.write(Container(fmt.MODE_CLASSIC, 3, 0, 5, None, b"xyz"))
    assert fmt.HEADER_SIZE == 16
    assert blob[:16] == b"PPMX" + bytes([1, 0, 3, 0]) + struct.pack("<Q", 5)
    assert blob[16:] == b"xyz"


def test_ccm_header_carries_table():
    table = serialize_lengths(build_codebook(count_frequencies(b"aab")))
    c = Container(fmt.MODE_CCM, 8, 1, 3, table, b"\x01")
    blob = fmt.write(c)
    assert c.header_size == 16 + 256
    assert blob[16:272] == table


def good_blob():
    return bytearray(fmt.write(Container(fmt.MODE_CLASSIC, 3, 0, 5, None, b"xyz")))


@pytest.mark.parametrize("n", [0, 3, 10, 15])
def test_short_file(n):
    blob = bytes(good_blob()[:n]) if n >= 4 else b"PPM"[:n]
    with pytest.raises(ShortFile):
        fmt.read(blob)


def test_bad_magic():
    with pytest.raises(BadMagic):
        fmt.read(b"GIF89a" + bytes(20))


def test_bad_version():
    b = good_blob()
    b[4] = 2
    with pytest.raises(BadVersion):
        fmt.read(bytes(b))


def test_bad_mode():
    b = good_blob()
    b[5] = 7
    with pytest.raises(BadMode):
        fmt.read(bytes(b))


@pytest.mark.parametrize("offset,value", [(6, 0), (6, 17), (7, 1)])
def test_bad_header_fields(offset, value):
    b = good_blob()
    b[offset] = value
    with pytest.raises(BadHeader):
        fmt.read(bytes(b))


def test_kraft_violation_is_bad_table():
    table = bytearray(256)
    table[1] = table[2] = table[3] = 1
    blob = fmt.write(Container(fmt.MODE_CCM, 8, 2, 3, bytes(table), b"\x01"))
    with pytest.raises(BadTable):
        fmt.read(blob)


def test_truncated_table():
    table = serialize_lengths(build_codebook(count_frequencies(b"ab")))
    blob = fmt.write(Container(fmt.MODE_CCM, 8, 1, 2, table, b"\x01"))
    with pytest.raises(ShortFile):
        fmt.read(blob[:100])


def test_payload_consistency_with_length():
    with pytest.raises(ShortFile):
        fmt.read(fmt.write(Container(fmt.MODE_CLASSIC, 1, 0, 9, None, b"")))
    with pytest.raises(BadHeader):
        fmt.read(fmt.write(Container(fmt.MODE_CLASSIC, 1, 0, 0, None, b"\x00")))


def test_error_codes_are_distinct():
    codes = [e.code for e in (FormatError, BadMagic, BadVersion, BadMode, ShortFile, BadTable,
                              BadHeader)]
    assert len(set(codes)) == len(codes)


@given(st.binary(max_size=400))
def test_arbitrary_bytes_parse_or_raise_typed_error(blob):
    try:
        c = fmt.read(blob)
    except FormatError:
        return
    assert fmt.write(c) == blob


@given(containers(), st.integers(0, 10 ** 6), st.integers(0, 255))
def test_mutated_headers_parse_or_raise_typed_error(c, pos, value):
    blob = bytearray(fmt.write(c))
    blob[pos % len(blob)] = value
    try:
        fmt.read(bytes(blob))
    except FormatError:
        pass
