"""Deterministic compacted-trie indexing toolkit."""

from .dynamic_index import DynTrieIndex
from .predkit import (
    DetDictionary,
    DynamicPredecessor,
    LayeredStaticPredecessor,
    StaticPredecessor,
)
from .sa import SuffixArrayIndex, build_suffix_array, build_suffix_tree
from .static_index import (
    StaticTrieIndex,
    SuffixTrayIndex,
    build_static_index,
    build_suffix_tray,
)
from .suffix_oracle import FmaTree, OnlineSuffixTree
from .text import Alphabet, CompactedTrie, MatchResult, Outcome, Text, build_string_trie, encode_text
from .wexp import CAPACITY, ElementHandle, WexpTree

__all__ = [
    "Alphabet", "CompactedTrie", "MatchResult", "Outcome", "Text",
    "build_string_trie", "encode_text",
    "SuffixArrayIndex", "build_suffix_array", "build_suffix_tree",
    "DetDictionary", "StaticPredecessor", "LayeredStaticPredecessor",
    "DynamicPredecessor",
    "CAPACITY", "ElementHandle", "WexpTree",
    "StaticTrieIndex", "SuffixTrayIndex", "build_static_index", "build_suffix_tray",
    "DynTrieIndex",
    "FmaTree", "OnlineSuffixTree",
]
