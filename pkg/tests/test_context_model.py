import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ppmx.context_model import (CCM, CLASSIC, ContextTrie, TrieNode, build_distribution,
                                normalized_node_count)


def node_with(counts):
    n = TrieNode(0)
    n.sym_count.update(counts)
    return n


def test_descend():
    t = ContextTrie(CLASSIC, 3)
    assert t.descend([]) is t.root
    t.update_path([ord("a"), ord("b")], ord("c"), {2})
    node = t.descend([ord("a"), ord("b")])
    assert node is not None and node.sym_count == {ord("c"): 1}
    assert t.descend([ord("b")]) is None
    assert t.descend([ord("a"), ord("x")]) is None


def test_update_path_counts_nodes():
    t = ContextTrie(CLASSIC, 1)
    t.update_path([ord("a")], ord("a"), {0, 1})
    assert t.node_count == 2
    t.update_path([ord("a")], ord("a"), {0, 1})
    assert t.node_count == 2
    assert t.root.sym_count[ord("a")] == 2


def test_path_longer_than_depth_rejected():
    t = ContextTrie(CCM, 2)
    with pytest.raises(ValueError):
        t.update_path([0, 1, 1], 5, {0})


def test_ccm_labels_are_bits():
    t = ContextTrie(CCM, 4)
    with pytest.raises(ValueError):
        t.update_path([0, 2], 5, {0})


def test_count_halving():
    t = ContextTrie(CLASSIC, 1)
    node = t.root
    node.sym_count.update({1: 65535, 2: 3})
    t.increment(node, 1)
    assert node.sym_count == {1: 32768, 2: 2}


def test_distribution_single_symbol():
    dist, syms = build_distribution(node_with({97: 1}))
    assert syms == [97]
    assert dist.freq == (1, 1)


def test_distribution_with_exclusion():
    dist, syms = build_distribution(node_with({97: 3, 98: 1}), {98})
    assert syms == [97]
    assert dist.freq == (5, 1)


def test_distribution_escape_only():
    assert build_distribution(None)[0].freq == (1,)
    assert build_distribution(node_with({}))[0].freq == (1,)
    dist, syms = build_distribution(node_with({1: 4}), {1})
    assert dist.freq == (1,) and syms == []


def test_distribution_slot_order_is_first_seen():
    t = ContextTrie(CLASSIC, 1)
    for s in [9, 3, 7, 3]:
        t.update_path([], s, {0})
    assert build_distribution(t.root)[1] == [9, 3, 7]


def test_distribution_matches_rational_oracle():
    rng = random.Random(42)
    for _ in range(1000):
        syms = rng.sample(range(256), rng.randint(1, 40))
        counts = {s: rng.randint(1, 2000) for s in syms}
        excl = set(rng.sample(syms, rng.randint(0, len(syms))))
        dist, order = build_distribution(node_with(counts), excl)
        live = {s: c for s, c in counts.items() if s not in excl}
        if not live:
            assert dist.freq == (1,)
            continue
        n = sum(live.values())
        expected = {s: Fraction(2 * c - 1, 2 * n) for s, c in live.items()}
        expected["esc"] = Fraction(len(live), 2 * n)
        got = {s: Fraction(f, dist.total) for s, f in zip(order + ["esc"], dist.freq)}
        assert got == expected
        assert dist.total == sum(2 * c - 1 for c in live.values()) + len(live)


@given(st.dictionaries(st.integers(0, 255), st.integers(1, 65535), min_size=1, max_size=256),
       st.sets(st.integers(0, 255)))
def test_distribution_invariants(counts, excl):
    dist, syms = build_distribution(node_with(counts), excl)
    assert all(f >= 1 for f in dist.freq)
    assert dist.total < 1 << 24
    assert len(dist.freq) == len(syms) + 1
    assert set(syms) == set(counts) - excl


def test_normalized_node_count():
    assert normalized_node_count(10612, 82) == pytest.approx(10612 * 84 / 164)
    assert round(normalized_node_count(10612, 82)) == 5435
    assert normalized_node_count(0, 82) == 0
    assert normalized_node_count(77, 2) == 77
    with pytest.raises(ValueError):
        normalized_node_count(5, 0)


def test_binary_factor_rounds_to_051_for_82_symbols():
    assert round(normalized_node_count(1, 82), 2) == 0.51


def test_structural_hash_ignores_node_ids():
    a = ContextTrie(CLASSIC, 2)
    b = ContextTrie(CLASSIC, 2)
    a.update_path([1, 2], 3, {2, 1})
    a.update_path([5], 3, {1})
    b.update_path([5], 3, {1})
    b.update_path([1, 2], 3, {2, 1})
    assert a.structural_hash() == b.structural_hash()
    b.update_path([1], 3, {1})
    assert a.structural_hash() != b.structural_hash()


def test_traversal_count_matches_tally():
    rng = random.Random(1)
    t = ContextTrie(CCM, 12)
    for _ in range(500):
        path = [rng.randrange(2) for _ in range(rng.randint(0, 12))]
        t.update_path(path, rng.randrange(256), {len(path)})
        assert t.count_nodes() == t.node_count
    assert all(len(node.children) <= 2 for node, _ in t.iter_nodes())
    assert max(depth for _, depth in t.iter_nodes()) <= 12
