"""Bounded-order PPM with classic or Huffman-compressed contexts."""

from .container import Container
from .context_model import CCM, CLASSIC, ContextTrie, normalized_node_count
from .ppm_codec import ModelConfig, compress, decode, decompress, encode
from .stats import RunStats, gains, pick_ccm_order, run_stats

__all__ = ["CCM", "CLASSIC", "Container", "ContextTrie", "ModelConfig", "RunStats", "compress",
           "decode", "decompress", "encode", "gains", "normalized_node_count", "pick_ccm_order",
           "run_stats"]
