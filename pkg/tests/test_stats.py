import csv
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ppmx.context_model import CCM, CLASSIC
from ppmx.ppm_codec import ModelConfig, encode
from ppmx.stats import (NoTradeoff, RunStats, TradeoffRow, gain_percentages, gains,
                        pick_ccm_order, round2, run_stats, summarize)

DATA = Path(__file__).parent / "data"

# book1: classic order, x, bps, ccm bits, Y, bps, printed memory gain, printed compression gain
BOOK1 = [
    (1, 83, 3.603, 6, 65, 3.523, 21.69, 2.23),
    (2, 1909, 2.907, 10, 1017, 2.860, 46.73, 1.60),
    (3, 15205, 2.474, 14, 10612, 2.482, 30.21, -0.33),
    (4, 65161, 2.323, 18, 61910, 2.365, 4.99, -1.81),
    (5, 189280, 2.325, 21, 168448, 2.369, 11.01, -1.91),
    (6, 417272, 2.367, 24, 369295, 2.406, 11.50, -1.63),
]

# printed summary rows for the per-file gains in data/reference_gains.csv
PRINTED_SUMMARY = {
    "AVG": [23.86, -0.63, 25.67, -2.49, 20.22, -7.33, 10.61, -8.16, 10.97, -8.23, 7.46, -8.06],
    "MAX": [35.35, 3.17, 46.73, 5.17, 73.95, 0.19, 24.36, -1.81, 21.60, -1.91, 14.86, -14.37],
    "MIN": [0.39, -5.19, 4.72, -11.38, 1.02, -15.19, 0.83, -14.69, 1.11, -14.50, 0.16, -1.63],
}
# printed cells that disagree with their own columns: (label, column) -> recomputed
PRINTED_INCONSISTENT = {("MAX", 0): 36.00, ("MAX", 1): 3.55, ("MIN", 4): 0.38,
                        ("MAX", 11): -1.63, ("MIN", 11): -14.37}


def stats(mode, order, nodes, bps, *, n=1000, file="f", sigma=82):
    bits = round(bps * n)
    return RunStats(file, mode, order, 5 if mode == CCM else 0, n, bits, bits, 0, nodes, sigma)


def test_round2_half_up():
    assert round2(2.225) == 2.23
    assert round2(-1.805) == -1.81
    assert round2(0.0) == 0.0


@pytest.mark.parametrize("row", BOOK1, ids=lambda r: f"order{r[0]}")
def test_book1_gains_from_printed_inputs(row):
    _, x, b, _, y, bb, mem, comp = row
    m, c = gain_percentages(x, y, b, bb)
    assert m == pytest.approx(mem, abs=0.02 + 1e-9)
    assert c == pytest.approx(comp, abs=0.02 + 1e-9)


def test_order1_exact_recomputation():
    assert gain_percentages(83, 65, 3.603, 3.523) == (21.69, 2.22)
    assert gain_percentages(65161, 61910, 2.323, 2.365) == (4.99, -1.81)


def test_identical_stats_give_zero_gain():
    s = stats(CLASSIC, 2, 100, 3.0)
    r = gains(s, s)
    assert (r.memory_gain_pct, r.compression_gain_pct) == (0.0, 0.0)


def test_gains_use_normalized_ccm_size():
    classic = stats(CLASSIC, 1, 83, 3.603, n=10 ** 6)
    ccm = stats(CCM, 6, 127, 3.523, n=10 ** 6)
    r = gains(classic, ccm)
    assert r.ccm_nodes == pytest.approx(127 * 84 / 164)
    assert r.memory_gain_pct == round2(100 * (83 - 127 * 84 / 164) / 83)


def test_gains_errors():
    with pytest.raises(ValueError):
        gains(stats(CLASSIC, 1, 10, 2.0, file="a"), stats(CCM, 4, 5, 2.0, file="b"))
    with pytest.raises(ZeroDivisionError):
        gain_percentages(0, 5, 2.0, 2.0)
    with pytest.raises(ZeroDivisionError):
        gain_percentages(5, 5, 0.0, 2.0)


def test_exclude_header_variant():
    classic = RunStats("f", CLASSIC, 1, 0, 100, 928, 800, 0, 10, 5)
    ccm = RunStats("f", CCM, 6, 3, 100, 2976, 720, 0, 10, 5)
    assert gains(classic, ccm, exclude_header=True).compression_gain_pct == 10.0
    assert gains(classic, ccm).compression_gain_pct < 0


def test_pick_ccm_order_book1():
    classic = {r[0]: r[1] for r in BOOK1}
    ccm = {r[3]: r[4] for r in BOOK1}
    assert pick_ccm_order(classic, ccm, 3) == 14
    assert [pick_ccm_order(classic, ccm, k) for k in range(1, 7)] == [6, 10, 14, 18, 21, 24]


def test_pick_ccm_order_edge_cases():
    with pytest.raises(NoTradeoff):
        pick_ccm_order({1: 50}, {4: 50, 6: 80}, 1)
    assert pick_ccm_order({1: 50}, {9: 49}, 1) == 9
    with pytest.raises(ValueError):
        pick_ccm_order({}, {4: 1}, 1)


@given(st.dictionaries(st.integers(1, 64), st.floats(0, 1e6), min_size=1), st.floats(1, 1e6),
       st.integers(1, 64), st.floats(0, 1e6))
def test_pick_ccm_order_monotone(ccm, x, extra_bits, extra_y):
    try:
        before = pick_ccm_order({1: x}, ccm, 1)
    except NoTradeoff:
        before = None
    if extra_y < x:
        after = pick_ccm_order({1: x}, {**ccm, extra_bits: extra_y}, 1)
        assert before is None or after >= before


def test_run_stats_accounting():
    data = b"mississippi river " * 200
    a = len(set(data))
    for cfg in (ModelConfig(CLASSIC, 2), ModelConfig(CCM, 8)):
        res = encode(data, cfg)
        s = run_stats(res, "m")
        assert s.bits_per_symbol * s.input_bytes == 8 * res.container.size
        assert s.bps_excl_header * s.input_bytes == 8 * len(res.container.payload)
        assert s.escapes_per_symbol == res.escape_count / len(data)
        assert s.bits_per_symbol > s.bps_excl_header > 0
        if cfg.mode == CCM:
            assert s.normalized_nodes == pytest.approx(s.node_count * (a + 2) / (2 * a))
        else:
            assert s.normalized_nodes == s.node_count


def load_reference_rows():
    with open(DATA / "reference_gains.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 18
    cols = [f"{mc}{k}" for k in range(1, 7) for mc in "MC"]
    return rows, cols


def test_summary_rows_from_reference_per_file_gains():
    rows, cols = load_reference_rows()
    recomputed = {label: [] for label in PRINTED_SUMMARY}
    for k in range(1, 7):
        trows = [TradeoffRow(r["file"], k, None, 0, None, 0, None, float(r[f"M{k}"]),
                             float(r[f"C{k}"])) for r in rows]
        for s in summarize(trows):
            recomputed[s.label] += [s.memory_gain_pct, s.compression_gain_pct]
    assert recomputed["AVG"][:2] == [23.86, -0.63]
    assert recomputed["AVG"] == PRINTED_SUMMARY["AVG"]
    mismatches = {(label, j): recomputed[label][j]
                  for label in ("MAX", "MIN") for j in range(12)
                  if recomputed[label][j] != PRINTED_SUMMARY[label][j]}
    assert mismatches == PRINTED_INCONSISTENT


def test_summary_skips_rows_without_tradeoff():
    rows = [TradeoffRow("a", 1, 6, 1, 1, 1, 1, 10.0, -1.0),
            TradeoffRow("b", 1, None, 1, None, 1, None, None, None),
            TradeoffRow("c", 1, 6, 1, 1, 1, 1, 20.0, 3.0)]
    out = {s.label: (s.memory_gain_pct, s.compression_gain_pct) for s in summarize(rows)}
    assert out == {"AVG": (15.0, 1.0), "MAX": (20.0, 3.0), "MIN": (10.0, -1.0)}
    assert summarize(rows[1:2]) == []
