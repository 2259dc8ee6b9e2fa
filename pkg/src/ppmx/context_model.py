"""Context tries holding per-context symbol statistics.

One trie type covers both modeling styles: classic tries branch on byte
values (a path is t[i-1], t[i-2], ... most recent first), compressed-context
tries branch on bits 0/1 of the Huffman-coded history. Either way a node
stores a sparse ``symbol -> count`` map in first-seen order, and that order
fixes the slot layout of the coding distribution.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Sequence

from .entropy_coder import CodingDistribution, rescale

CLASSIC = "classic"
CCM = "ccm"

COUNT_LIMIT = 1 << 16
MASK64 = (1 << 64) - 1
FNV_PRIME = 0x100000001B3
FNV_OFFSET = 0xCBF29CE484222325

# mutation tags folded into the running state hash
EV_NODE = 1
EV_COUNT = 2
EV_HALVE = 3


def mix(h: int, *values: int) -> int:
    for v in values:
        h = ((h ^ (v & MASK64)) * FNV_PRIME) & MASK64
    return h


class TrieNode:
    __slots__ = ("id", "children", "sym_count")

    def __init__(self, node_id: int):
        self.id = node_id
        self.children: dict[int, TrieNode] = {}
        self.sym_count: dict[int, int] = {}

    @property
    def distinct(self) -> int:
        return len(self.sym_count)

    def __repr__(self):
        return f"TrieNode(id={self.id}, children={sorted(self.children)}, counts={self.sym_count})"


class ContextTrie:
    def __init__(self, mode: str, max_depth: int):
        if mode not in (CLASSIC, CCM):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.max_depth = max_depth
        self.root = TrieNode(0)
        self.node_count = 1
        self.state_hash = FNV_OFFSET

    @property
    def arity(self) -> int:
        return 2 if self.mode == CCM else 256

    def descend(self, path: Sequence[int]) -> TrieNode | None:
        if len(path) > self.max_depth:
            raise ValueError("path longer than the trie depth")
        node = self.root
        for label in path:
            node = node.children.get(label)
            if node is None:
                return None
        return node

    def path_nodes(self, path: Sequence[int]) -> list[TrieNode | None]:
        """Nodes at depth 0..len(path) along ``path`` (None where absent)."""
        nodes: list[TrieNode | None] = [self.root]
        node = self.root
        for label in path:
            node = node.children.get(label) if node is not None else None
            nodes.append(node)
        return nodes

    def ensure_path(self, path: Sequence[int]) -> list[TrieNode]:
        if len(path) > self.max_depth:
            raise ValueError("path longer than the trie depth")
        nodes = [self.root]
        node = self.root
        for label in path:
            if not 0 <= label < self.arity:
                raise ValueError(f"label {label} invalid for a {self.mode} trie")
            child = node.children.get(label)
            if child is None:
                child = TrieNode(self.node_count)
                self.node_count += 1
                node.children[label] = child
                self.state_hash = mix(self.state_hash, EV_NODE, node.id, label)
            node = child
            nodes.append(node)
        return nodes

    def increment(self, node: TrieNode, symbol: int) -> None:
        c = node.sym_count.get(symbol, 0) + 1
        node.sym_count[symbol] = c
        self.state_hash = mix(self.state_hash, EV_COUNT, node.id, symbol)
        if c >= COUNT_LIMIT:
            for s, v in node.sym_count.items():
                node.sym_count[s] = (v + 1) >> 1
            self.state_hash = mix(self.state_hash, EV_HALVE, node.id)

    def update_path(self, path: Sequence[int], symbol: int, increments: Iterable[int]) -> None:
        """Create ``path`` and bump ``symbol`` at each listed depth."""
        nodes = self.ensure_path(path)
        for depth in sorted(set(increments), reverse=True):
            self.increment(nodes[depth], symbol)

    def iter_nodes(self):
        stack = [(self.root, 0)]
        while stack:
            node, depth = stack.pop()
            yield node, depth
            for label in sorted(node.children, reverse=True):
                stack.append((node.children[label], depth + 1))

    def count_nodes(self) -> int:
        """Node count by full traversal (``node_count`` is the running tally)."""
        return sum(1 for _ in self.iter_nodes())

    def structural_hash(self) -> str:
        return structural_hash(self)


def structural_hash(trie: ContextTrie) -> str:
    """Digest of the trie shape and counts, independent of node ids."""
    h = hashlib.blake2b(digest_size=16)
    # explicit stack: ccm tries reach depth 64
    stack: list = [("node", trie.root)]
    while stack:
        kind, item = stack.pop()
        if kind == "raw":
            h.update(item)
            continue
        parts = [("raw", b"(" + b"".join(b"%d:%d," % kv for kv in item.sym_count.items()))]
        for label in sorted(item.children):
            parts.append(("raw", b"%d" % label))
            parts.append(("node", item.children[label]))
        parts.append(("raw", b")"))
        stack.extend(reversed(parts))
    return h.hexdigest()


def build_distribution(node: TrieNode | None, exclusions: set[int] | frozenset[int] = frozenset()
                       ) -> tuple[CodingDistribution, list[int]]:
    """Escape-aware distribution for ``node``.

    Each candidate symbol ``s`` gets ``2*count(s) - 1`` and the escape gets
    the number of candidates, so probabilities are (2c - 1)/2n and d/2n.
    Returns the distribution and the symbols in slot order; the escape is
    the slot after the last symbol.
    """
    if node is None:
        return CodingDistribution((1,)), []
    symbols = [s for s in node.sym_count if s not in exclusions]
    if not symbols:
        return CodingDistribution((1,)), []
    freqs = [2 * node.sym_count[s] - 1 for s in symbols]
    freqs.append(len(symbols))
    return CodingDistribution(tuple(rescale(freqs))), symbols


def normalized_node_count(x: int, alphabet_size: int) -> float:
    """Node count of a binary trie expressed in |alphabet|-ary node units."""
    if alphabet_size < 1:
        raise ValueError("alphabet_size must be >= 1")
    return x * (alphabet_size + 2) / (2 * alphabet_size)
