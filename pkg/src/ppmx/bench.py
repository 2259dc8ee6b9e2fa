"""Corpus benchmark: classic vs compressed-context runs, gain tables, figures.

Everything downstream of the coding runs is derived from ``runs.csv``:
gains, summary rows and all figures can be regenerated from it alone.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import svgplot
from .context_model import CCM, CLASSIC
from .ppm_codec import MAX_CCM_ORDER, ModelConfig, encode
from .stats import (NoTradeoff, RunStats, TradeoffRow, gains, pick_ccm_order, run_stats,
                    summarize)

log = logging.getLogger(__name__)

RUN_COLUMNS = ["file", "mode", "order", "pitch", "nodes", "normalized_nodes", "bits_per_symbol",
               "bps_excl_header", "escapes_per_symbol", "input_bytes", "output_bits",
               "payload_bits", "escape_count", "alphabet_size"]
GAIN_COLUMNS = ["file", "classic_order", "ccm_order", "classic_nodes", "ccm_nodes", "classic_bps",
                "ccm_bps", "memory_gain_pct", "compression_gain_pct"]
SUMMARY_LABELS = ("AVG", "MAX", "MIN")


@dataclass
class BenchPlan:
    corpus: Path
    out: Path
    classic_orders: list[int] = field(default_factory=lambda: [1, 2, 3, 4, 5, 6])
    # None: sweep bit orders upward until the trie outgrows the largest classic trie
    ccm_bits: list[int] | None = None
    pitch: int | None = None
    jobs: int = 1

    def __post_init__(self):
        for k in self.classic_orders:
            ModelConfig(CLASSIC, k)
        for b in self.ccm_bits or []:
            ModelConfig(CCM, b)


def ccm_config(bits: int, pitch: int | None) -> ModelConfig:
    return ModelConfig(CCM, bits, None if pitch is None else min(pitch, bits))


def bench_file(path: Path, classic_orders: Sequence[int], ccm_bits: Sequence[int] | None,
               pitch: int | None) -> list[RunStats]:
    data = path.read_bytes()
    name = path.name
    runs = [run_stats(encode(data, ModelConfig(CLASSIC, k)), name) for k in classic_orders]
    if not data:
        return runs
    if ccm_bits is not None:
        runs += [run_stats(encode(data, ccm_config(b, pitch)), name) for b in ccm_bits]
        return runs
    limit = max(r.normalized_nodes for r in runs)
    for b in range(1, MAX_CCM_ORDER + 1):
        r = run_stats(encode(data, ccm_config(b, pitch)), name)
        runs.append(r)
        if r.normalized_nodes >= limit:
            break
    return runs


def _job(args):
    path, classic_orders, ccm_bits, pitch = args
    try:
        return bench_file(path, classic_orders, ccm_bits, pitch)
    except OSError as e:
        log.warning("skipping %s: %s", path, e)
        return []


def run_bench(plan: BenchPlan) -> tuple[list[dict], list[dict]]:
    files = sorted(p for p in Path(plan.corpus).iterdir() if p.is_file() and not p.name.startswith("."))
    if not files:
        raise FileNotFoundError(f"no files in {plan.corpus}")
    jobs = [(p, plan.classic_orders, plan.ccm_bits, plan.pitch) for p in files]
    if plan.jobs > 1:
        with ProcessPoolExecutor(plan.jobs) as ex:
            results = list(ex.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]
    runs = [r for rs in results for r in rs]
    if not runs:
        raise RuntimeError("no file could be benchmarked")
    out = Path(plan.out)
    out.mkdir(parents=True, exist_ok=True)
    run_rows = sort_runs([run_row(r) for r in runs])
    write_csv(out / "runs.csv", RUN_COLUMNS, run_rows)
    gain_rows = gains_table(read_csv(out / "runs.csv"), plan.classic_orders)
    write_csv(out / "gains.csv", GAIN_COLUMNS, gain_rows)
    render_figures(out)
    return run_rows, gain_rows


def run_row(r: RunStats) -> dict:
    return {
        "file": r.file, "mode": r.mode, "order": r.order, "pitch": r.pitch,
        "nodes": r.node_count, "normalized_nodes": f"{r.normalized_nodes:.2f}",
        "bits_per_symbol": f"{r.bits_per_symbol:.6f}", "bps_excl_header": f"{r.bps_excl_header:.6f}",
        "escapes_per_symbol": f"{r.escapes_per_symbol:.6f}", "input_bytes": r.input_bytes,
        "output_bits": r.output_bits, "payload_bits": r.payload_bits,
        "escape_count": r.escape_count, "alphabet_size": r.alphabet_size,
    }


def stats_from_row(row: dict) -> RunStats:
    return RunStats(file=row["file"], mode=row["mode"], order=int(row["order"]),
                    pitch=int(row["pitch"]), input_bytes=int(row["input_bytes"]),
                    output_bits=int(row["output_bits"]), payload_bits=int(row["payload_bits"]),
                    escape_count=int(row["escape_count"]), node_count=int(row["nodes"]),
                    alphabet_size=int(row["alphabet_size"]))


def sort_runs(rows: list[dict]) -> list[dict]:
    return sorted(rows, key=lambda r: (r["file"], r["mode"], int(r["order"])))


def gains_table(run_rows: Iterable[dict], classic_orders: Sequence[int] | None = None) -> list[dict]:
    """Per-file trade-off rows for every classic order, then AVG/MAX/MIN per order."""
    by_file: dict[str, dict[str, dict[int, RunStats]]] = {}
    for row in run_rows:
        s = stats_from_row(row)
        if s.input_bytes == 0:
            continue
        by_file.setdefault(s.file, {CLASSIC: {}, CCM: {}})[s.mode][s.order] = s
    orders = sorted(classic_orders) if classic_orders else sorted(
        {k for modes in by_file.values() for k in modes[CLASSIC]})
    per_order: dict[int, list[TradeoffRow]] = {k: [] for k in orders}
    for name in sorted(by_file):
        classic, ccm = by_file[name][CLASSIC], by_file[name][CCM]
        for k in orders:
            if k not in classic:
                continue
            try:
                bits = pick_ccm_order({kk: s.normalized_nodes for kk, s in classic.items()},
                                      {b: s.normalized_nodes for b, s in ccm.items()}, k)
                row = gains(classic[k], ccm[bits])
            except (NoTradeoff, ValueError):
                c = classic[k]
                row = TradeoffRow(name, k, None, c.normalized_nodes, None, c.bits_per_symbol,
                                  None, None, None)
            per_order[k].append(row)
    out = []
    for k in orders:
        out += [tradeoff_row(r) for r in per_order[k]]
    for k in orders:
        for s in summarize(per_order[k]):
            out.append({"file": s.label, "classic_order": k, "ccm_order": "", "classic_nodes": "",
                        "ccm_nodes": "", "classic_bps": "", "ccm_bps": "",
                        "memory_gain_pct": f"{s.memory_gain_pct:.2f}",
                        "compression_gain_pct": f"{s.compression_gain_pct:.2f}"})
    return out


def tradeoff_row(r: TradeoffRow) -> dict:
    def fmt(x, spec):
        return "NA" if x is None else format(x, spec)
    return {"file": r.file, "classic_order": r.classic_order,
            "ccm_order": "NA" if r.ccm_order is None else r.ccm_order,
            "classic_nodes": fmt(r.classic_nodes, ".2f"), "ccm_nodes": fmt(r.ccm_nodes, ".2f"),
            "classic_bps": fmt(r.classic_bps, ".6f"), "ccm_bps": fmt(r.ccm_bps, ".6f"),
            "memory_gain_pct": fmt(r.memory_gain_pct, ".2f"),
            "compression_gain_pct": fmt(r.compression_gain_pct, ".2f")}


def resummarize(gain_rows: Iterable[dict]) -> dict[tuple[str, int], tuple[float, float]]:
    """Recompute AVG/MAX/MIN from the per-file rows of a gains table."""
    per: dict[int, list[TradeoffRow]] = {}
    for row in gain_rows:
        if row["file"] in SUMMARY_LABELS or row["memory_gain_pct"] == "NA":
            continue
        k = int(row["classic_order"])
        per.setdefault(k, []).append(TradeoffRow(row["file"], k, None, 0, None, 0, None,
                                                 float(row["memory_gain_pct"]),
                                                 float(row["compression_gain_pct"])))
    out = {}
    for k, rows in per.items():
        for s in summarize(rows):
            out[(s.label, k)] = (s.memory_gain_pct, s.compression_gain_pct)
    return out


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[dict]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=list(columns), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)


def read_csv(path: Path) -> list[dict]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def render_figures(out: Path) -> None:
    """Write the SVG figures from the CSV files in ``out``."""
    out = Path(out)
    runs = read_csv(out / "runs.csv")
    gain_rows = read_csv(out / "gains.csv")
    for mode, xlabel in ((CLASSIC, "order (symbols)"), (CCM, "order (bits)")):
        bps: dict[str, list] = {}
        esc: dict[str, list] = {}
        for r in runs:
            if r["mode"] != mode or int(r["input_bytes"]) == 0:
                continue
            bps.setdefault(r["file"], []).append((int(r["order"]), float(r["bits_per_symbol"])))
            esc.setdefault(r["file"], []).append((int(r["order"]), float(r["escapes_per_symbol"])))
        (out / f"bps_{mode}.svg").write_text(svgplot.plot(
            bps, title=f"{mode}: compression", xlabel=xlabel, ylabel="bits/symbol"))
        (out / f"escapes_{mode}.svg").write_text(svgplot.plot(
            esc, title=f"{mode}: escapes", xlabel=xlabel, ylabel="escapes/symbol"))
    pts: dict[str, list] = {}
    for r in gain_rows:
        if r["file"] in SUMMARY_LABELS or r["memory_gain_pct"] == "NA":
            continue
        pts.setdefault(f"order {r['classic_order']}", []).append(
            (float(r["memory_gain_pct"]), float(r["compression_gain_pct"])))
    (out / "tradeoff.svg").write_text(svgplot.plot(
        pts, title="memory vs compression gain", xlabel="% gain in memory",
        ylabel="% gain in compression", lines=False))

