"""PPM encoder/decoder with classic or compressed (Huffman-bit) contexts.

Both context styles share one escape cascade. At each position coding
starts at the deepest available context; each escape excludes the symbols
the context offered and moves to a shorter context, one symbol shorter in
classic mode, ``pitch`` bits shorter in compressed mode. Past the empty
context, a byte never seen before is coded uniformly over the bytes not yet
excluded.

Two implementations live side by side. ``engine="reference"`` walks
:class:`~ppmx.context_model.ContextTrie` objects and the pure-Python range
coder and is meant to be read. ``engine="fast"`` (the default) runs the
jitted array coder in :mod:`ppmx._engine`; it produces identical bytes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import _engine
from . import container as fmt
from .container import Container
from .context_model import CCM, CLASSIC, ContextTrie, FNV_OFFSET, TrieNode, build_distribution
from .entropy_coder import CodingDistribution, DecodeError, RangeDecoder, RangeEncoder
from .huffman import (HuffmanCodebook, build_codebook, count_frequencies, default_pitch,
                      deserialize_lengths, encode_codeword, serialize_lengths)

MAX_CLASSIC_ORDER = fmt.MAX_CLASSIC_ORDER
MAX_CCM_ORDER = fmt.MAX_CCM_ORDER
DEBUG_ENV = "PPMX_DEBUG_STATEHASH"


class ConfigError(ValueError):
    pass


class StateMismatch(AssertionError):
    """Encoder and decoder model states diverged."""


@dataclass(frozen=True)
class ModelConfig:
    """``pitch=None`` in ccm mode means: rounded average code length, capped at ``order``."""

    mode: str
    order: int
    pitch: int | None = None

    def __post_init__(self):
        if self.mode == CLASSIC:
            if not 1 <= self.order <= MAX_CLASSIC_ORDER:
                raise ConfigError(f"classic order must be in 1..{MAX_CLASSIC_ORDER}")
            if self.pitch not in (None, 0):
                raise ConfigError("pitch only applies to ccm mode")
        elif self.mode == CCM:
            if not 1 <= self.order <= MAX_CCM_ORDER:
                raise ConfigError(f"ccm order must be in 1..{MAX_CCM_ORDER} bits")
            if self.pitch is not None and not 1 <= self.pitch <= self.order:
                raise ConfigError(f"pitch must be in 1..{self.order}")
        else:
            raise ConfigError(f"unknown mode {self.mode!r}")

    def resolve_pitch(self, cb: HuffmanCodebook | None) -> int:
        if self.mode == CLASSIC:
            return 0
        if self.pitch is not None:
            return self.pitch
        if cb is None:
            return 1
        return min(self.order, default_pitch(cb))


# ---------------------------------------------------------------------------
# contexts


@dataclass(frozen=True)
class CompressedContext:
    """First ``k`` bits of code(t[i-1]) || code(t[i-2]) || ..."""

    bits: str
    k: int

    def __post_init__(self):
        if len(self.bits) > self.k:
            raise ValueError("context longer than its order")

    def labels(self) -> list[int]:
        return [1 if c == "1" else 0 for c in self.bits]

    def __len__(self):
        return len(self.bits)


@dataclass(frozen=True)
class ClassicContext:
    """Preceding symbols, most recent first."""

    symbols: tuple[int, ...]
    k: int

    def labels(self) -> list[int]:
        return list(self.symbols)

    def __len__(self):
        return len(self.symbols)


def ccm_advance(ctx: CompressedContext, codeword: str) -> CompressedContext:
    if not codeword:
        raise ValueError("empty codeword")
    return CompressedContext((codeword + ctx.bits)[: ctx.k], ctx.k)


def classic_advance(ctx: ClassicContext, symbol: int) -> ClassicContext:
    return ClassicContext(((symbol,) + ctx.symbols)[: ctx.k], ctx.k)


def shorten(ctx, pitch: int = 1):
    """Drop the most distant part of a context.

    Classic contexts lose their oldest symbol; compressed contexts lose
    their last ``pitch`` bits, even if that cuts through a codeword.
    """
    if not len(ctx):
        raise ValueError("cannot shorten an empty context")
    if isinstance(ctx, ClassicContext):
        return ClassicContext(ctx.symbols[:-1], ctx.k)
    return CompressedContext(ctx.bits[: max(0, len(ctx.bits) - pitch)], ctx.k)


def compressed_context_from_scratch(history: bytes, cb: HuffmanCodebook, k: int) -> str:
    """Context of the next position computed directly from its definition.

    Concatenates codewords of the preceding symbols, most recent first, for
    the smallest number of symbols that reaches ``k`` bits (or the whole
    history), then truncates to ``k`` bits.
    """
    bits = ""
    for b in reversed(history):
        if len(bits) >= k:
            break
        bits += encode_codeword(cb, b)
    return bits[:k]


def cascade_depths(depth: int, step: int) -> list[int]:
    """Context lengths visited by one escape cascade, deepest first."""
    out = [depth]
    while depth > 0:
        depth = max(0, depth - step)
        out.append(depth)
    return out


# ---------------------------------------------------------------------------
# results


@dataclass
class EncodeResult:
    container: Container
    escape_count: int
    node_count: int
    alphabet_size: int
    codebook: HuffmanCodebook | None
    state_hash: int
    state_trace: np.ndarray | None = None
    context_trace: list[str] | None = None
    trie: ContextTrie | None = field(default=None, repr=False)
    _arrays: tuple | None = field(default=None, repr=False)

    @property
    def input_bytes(self) -> int:
        return self.container.original_length

    def context_trie(self) -> ContextTrie:
        """The final statistics trie (rebuilt from arrays for the fast engine)."""
        if self.trie is None:
            self.trie = trie_from_arrays(self.container, *self._arrays)
        return self.trie


def trie_from_arrays(c: Container, node_head, ent_sym, ent_cnt, ent_next, hkeys, hvals) -> ContextTrie:
    mode = CCM if c.mode == fmt.MODE_CCM else CLASSIC
    trie = ContextTrie(mode, c.order)
    nodes = [trie.root] + [TrieNode(i) for i in range(1, len(node_head))]
    for i, head in enumerate(node_head):
        e = head
        while e != -1:
            nodes[i].sym_count[int(ent_sym[e])] = int(ent_cnt[e])
            e = ent_next[e]
    for key, val in sorted((int(k), int(v)) for k, v in zip(hkeys, hvals) if k != -1):
        nodes[key >> 8].children[key & 0xFF] = nodes[val]
    trie.node_count = len(nodes)
    return trie


def debug_enabled() -> bool:
    return os.environ.get(DEBUG_ENV, "") not in ("", "0")


# ---------------------------------------------------------------------------
# entry points


def encode(data: bytes, cfg: ModelConfig, *, engine: str = "fast", trace: bool | None = None) -> EncodeResult:
    """Compress ``data``. In ccm mode this makes a frequency pass first."""
    data = bytes(data)
    if trace is None:
        trace = debug_enabled()
    cb = None
    table = None
    freqs = count_frequencies(data)
    if cfg.mode == CCM:
        if data:
            cb = build_codebook(freqs)
            table = serialize_lengths(cb)
        else:
            table = bytes(fmt.TABLE_SIZE)
    pitch = cfg.resolve_pitch(cb)
    mode_byte = fmt.MODE_CCM if cfg.mode == CCM else fmt.MODE_CLASSIC

    if not data:
        c = Container(mode_byte, cfg.order, pitch, 0, table, b"")
        return EncodeResult(c, 0, 1, 0, cb, FNV_OFFSET, np.zeros(0, np.uint64) if trace else None,
                            [] if trace and cfg.mode == CCM else None, ContextTrie(cfg.mode, cfg.order))

    if engine == "reference":
        res = _encode_reference(data, cfg.mode, cfg.order, pitch, cb, trace)
        payload, escapes, trie, states, contexts = res
        c = Container(mode_byte, cfg.order, pitch, len(data), table, payload)
        return EncodeResult(c, escapes, trie.node_count, freqs.alphabet_size, cb, trie.state_hash,
                            np.array(states, dtype=np.uint64) if trace else None, contexts, trie)
    if engine != "fast":
        raise ValueError(f"unknown engine {engine!r}")

    bits, lens = _engine.code_tables(cb.code_length if cb else [0] * 256,
                                     cb.code_bits if cb else [0] * 256, cfg.order)
    (payload, escapes, n_nodes, h, states, ctx_bits, ctx_lens,
     node_head, ent_sym, ent_cnt, ent_next, hkeys, hvals) = _engine.encode_core(
        np.frombuffer(data, dtype=np.uint8), mode_byte, cfg.order, max(pitch, 1), bits, lens, trace)
    contexts = None
    if trace and cfg.mode == CCM:
        contexts = ["".join("1" if b else "0" for b in row[:n]) for row, n in zip(ctx_bits, ctx_lens)]
    c = Container(mode_byte, cfg.order, pitch, len(data), table, payload.tobytes())
    return EncodeResult(c, int(escapes), int(n_nodes), freqs.alphabet_size, cb, int(h),
                        states if trace else None, contexts,
                        _arrays=(node_head, ent_sym, ent_cnt, ent_next, hkeys, hvals))


def decode(c: Container, *, engine: str = "fast", expected_states: np.ndarray | None = None) -> bytes:
    """Decompress a container.

    ``expected_states`` is the encoder's per-symbol state-hash trace; when
    given, the decoder's own trace must match it symbol by symbol.
    """
    if c.original_length == 0:
        return b""
    mode = CCM if c.mode == fmt.MODE_CCM else CLASSIC
    cb = None
    if mode == CCM:
        cb = deserialize_lengths(c.huffman_lengths)
    trace = expected_states is not None
    if engine == "reference":
        out, states = _decode_reference(c.payload, c.original_length, mode, c.order, c.pitch, cb)
    elif engine == "fast":
        bits, lens = _engine.code_tables(cb.code_length if cb else [0] * 256,
                                         cb.code_bits if cb else [0] * 256, c.order)
        arr, status, _, states = _engine.decode_core(
            np.frombuffer(c.payload, dtype=np.uint8), c.original_length, c.mode, c.order,
            max(c.pitch, 1), bits, lens, trace)
        if status != _engine.OK:
            raise DecodeError(_STATUS_MESSAGES.get(int(status), f"decoder status {status}"))
        out = arr.tobytes()
    else:
        raise ValueError(f"unknown engine {engine!r}")
    if trace:
        mism = _first_mismatch(expected_states, states)
        if mism is not None:
            raise StateMismatch(f"model states diverge at symbol {mism}")
    return out


_STATUS_MESSAGES = {
    _engine.ERR_TRUNCATED: "range-coded payload is truncated",
    _engine.ERR_INTERVAL: "code value outside the coding interval",
    _engine.ERR_EXHAUSTED_ALPHABET: "escape past a context holding all 256 bytes",
    _engine.ERR_TRAILING: "unconsumed payload bytes",
    _engine.ERR_NOT_IN_TABLE: "decoded a byte that has no codeword",
}


def _first_mismatch(a, b) -> int | None:
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    n = min(len(a), len(b))
    diff = np.nonzero(a[:n] != b[:n])[0]
    if len(diff):
        return int(diff[0])
    if len(a) != len(b):
        return n
    return None


def compress(data: bytes, cfg: ModelConfig, **kw) -> bytes:
    """Encode and serialize. With the debug env var set, verifies by decoding."""
    res = encode(data, cfg, **kw)
    if debug_enabled():
        if decode(res.container, expected_states=res.state_trace) != bytes(data):
            raise StateMismatch("roundtrip check failed")
    return fmt.write(res.container)


def decompress(blob: bytes, **kw) -> bytes:
    return decode(fmt.read(blob), **kw)


# ---------------------------------------------------------------------------
# reference implementation


class _History:
    """Rolling context for either mode, expressed as trie labels."""

    def __init__(self, mode: str, k: int, cb: HuffmanCodebook | None):
        self.mode = mode
        self.cb = cb
        if mode == CLASSIC:
            self.ctx = ClassicContext((), k)
        else:
            self.ctx = CompressedContext("", k)

    def labels(self) -> list[int]:
        return self.ctx.labels()

    def push(self, symbol: int) -> None:
        if self.mode == CLASSIC:
            self.ctx = classic_advance(self.ctx, symbol)
        else:
            self.ctx = ccm_advance(self.ctx, encode_codeword(self.cb, symbol))


def _encode_reference(data: bytes, mode: str, k: int, pitch: int, cb, trace: bool):
    trie = ContextTrie(mode, k)
    hist = _History(mode, k, cb)
    enc = RangeEncoder()
    step = 1 if mode == CLASSIC else pitch
    escapes = 0
    states = []
    contexts = [] if trace and mode == CCM else None
    for sym in data:
        if contexts is not None:
            contexts.append(hist.ctx.bits)
        path = hist.labels()
        nodes = trie.path_nodes(path)
        excluded: set[int] = set()
        visited = []
        for depth in cascade_depths(len(path), step):
            visited.append(depth)
            dist, syms = build_distribution(nodes[depth], excluded)
            if sym in syms:
                enc.encode_symbol(dist, syms.index(sym))
                break
            enc.encode_symbol(dist, len(syms))
            if syms:
                escapes += 1
            excluded.update(syms)
        else:
            cands = [b for b in range(256) if b not in excluded]
            enc.encode_symbol(CodingDistribution((1,) * len(cands)), cands.index(sym))
        trie.update_path(path, sym, visited)
        if trace:
            states.append(trie.state_hash)
        hist.push(sym)
    return enc.finish(), escapes, trie, states, contexts


def _decode_reference(payload: bytes, n: int, mode: str, k: int, pitch: int, cb):
    trie = ContextTrie(mode, k)
    hist = _History(mode, k, cb)
    dec = RangeDecoder(payload)
    step = 1 if mode == CLASSIC else pitch
    out = bytearray()
    states = []
    for _ in range(n):
        path = hist.labels()
        nodes = trie.path_nodes(path)
        excluded: set[int] = set()
        visited = []
        sym = None
        for depth in cascade_depths(len(path), step):
            visited.append(depth)
            dist, syms = build_distribution(nodes[depth], excluded)
            slot = dec.decode_symbol(dist)
            if slot < len(syms):
                sym = syms[slot]
                break
            excluded.update(syms)
        if sym is None:
            cands = [b for b in range(256) if b not in excluded]
            if not cands:
                raise DecodeError("escape past a context holding all 256 bytes")
            sym = cands[dec.decode_symbol(CodingDistribution((1,) * len(cands)))]
        if cb is not None and not cb.code_length[sym]:
            raise DecodeError("decoded a byte that has no codeword")
        trie.update_path(path, sym, visited)
        states.append(trie.state_hash)
        hist.push(sym)
        out.append(sym)
    dec.check_exhausted()
    return bytes(out), np.array(states, dtype=np.uint64)
