"""Evaluation quantities: bits/symbol, escapes/symbol, trie sizes, gains."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from statistics import mean
from typing import Mapping, Sequence

from .context_model import CCM, normalized_node_count
from .ppm_codec import EncodeResult


class NoTradeoff(ValueError):
    """No compressed-context order fits below the classic trie size."""


def round2(x: float) -> float:
    return float(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class RunStats:
    file: str
    mode: str
    order: int
    pitch: int
    input_bytes: int
    output_bits: int
    payload_bits: int
    escape_count: int
    node_count: int
    alphabet_size: int

    @property
    def bits_per_symbol(self) -> float:
        """Whole container (header and code table included) per input byte."""
        return self.output_bits / self.input_bytes if self.input_bytes else 0.0

    @property
    def bps_excl_header(self) -> float:
        return self.payload_bits / self.input_bytes if self.input_bytes else 0.0

    @property
    def escapes_per_symbol(self) -> float:
        return self.escape_count / self.input_bytes if self.input_bytes else 0.0

    @property
    def normalized_nodes(self) -> float:
        """Trie size in classic-node units; binary tries are scaled down."""
        if self.mode == CCM and self.alphabet_size:
            return normalized_node_count(self.node_count, self.alphabet_size)
        return float(self.node_count)

    def row(self) -> dict:
        d = asdict(self)
        d.update(bits_per_symbol=self.bits_per_symbol, bps_excl_header=self.bps_excl_header,
                 escapes_per_symbol=self.escapes_per_symbol, normalized_nodes=self.normalized_nodes)
        return d


def run_stats(result: EncodeResult, file: str = "") -> RunStats:
    c = result.container
    return RunStats(
        file=file,
        mode="ccm" if c.mode == 1 else "classic",
        order=c.order,
        pitch=c.pitch,
        input_bytes=c.original_length,
        output_bits=8 * c.size,
        payload_bits=8 * len(c.payload),
        escape_count=result.escape_count,
        node_count=result.node_count,
        alphabet_size=result.alphabet_size,
    )


@dataclass(frozen=True)
class TradeoffRow:
    file: str
    classic_order: int
    ccm_order: int | None
    classic_nodes: float
    ccm_nodes: float | None
    classic_bps: float
    ccm_bps: float | None
    memory_gain_pct: float | None
    compression_gain_pct: float | None


def gain_percentages(x_classic: float, y_ccm: float, bps_classic: float, bps_ccm: float
                     ) -> tuple[float, float]:
    if x_classic == 0 or bps_classic == 0:
        raise ZeroDivisionError("classic node count and bits/symbol must be nonzero")
    mem = 100 * (x_classic - y_ccm) / x_classic
    comp = 100 * (bps_classic - bps_ccm) / bps_classic
    return round2(mem), round2(comp)


def gains(classic: RunStats, ccm: RunStats, *, exclude_header: bool = False) -> TradeoffRow:
    if classic.file != ccm.file:
        raise ValueError("stats come from different files")
    bc = classic.bps_excl_header if exclude_header else classic.bits_per_symbol
    bm = ccm.bps_excl_header if exclude_header else ccm.bits_per_symbol
    mem, comp = gain_percentages(classic.normalized_nodes, ccm.normalized_nodes, bc, bm)
    return TradeoffRow(classic.file, classic.order, ccm.order, classic.normalized_nodes,
                       ccm.normalized_nodes, bc, bm, mem, comp)


def pick_ccm_order(classic_sizes: Mapping[int, float], ccm_sizes: Mapping[int, float], k: int) -> int:
    """Largest bit order whose normalized trie is smaller than the order-k classic trie."""
    if not classic_sizes or not ccm_sizes:
        raise ValueError("need both classic and ccm sizes")
    limit = classic_sizes[k]
    fits = [bits for bits, y in ccm_sizes.items() if y < limit]
    if not fits:
        raise NoTradeoff(f"no ccm order below {limit} nodes")
    return max(fits)


@dataclass(frozen=True)
class Summary:
    label: str
    memory_gain_pct: float
    compression_gain_pct: float


def summarize(rows: Sequence[TradeoffRow]) -> list[Summary]:
    """AVG/MAX/MIN over rows that have a trade-off."""
    usable = [r for r in rows if r.memory_gain_pct is not None]
    if not usable:
        return []
    m = [r.memory_gain_pct for r in usable]
    c = [r.compression_gain_pct for r in usable]
    return [
        Summary("AVG", round2(mean(m)), round2(mean(c))),
        Summary("MAX", max(m), max(c)),
        Summary("MIN", min(m), min(c)),
    ]
