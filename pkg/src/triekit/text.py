"""Coded texts, alphabets and the compacted-trie node arena.

Character codes are unsigned integers in [1, sigma]; code 0 is the sentinel,
which sorts below every real code and terminates every stored string.  Edge
labels are (source id, start, end) ranges into stored texts and are never
copied.  All indexing is 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import AlphabetOverflowError, DuplicateKeyError

SENTINEL = 0


@dataclass(frozen=True)
class Alphabet:
    """Alphabet of `sigma` real characters (codes 1..sigma)."""

    sigma: int

    def __post_init__(self):
        if self.sigma < 1:
            raise ValueError("sigma must be positive")

    def check(self, code: int):
        if not 1 <= code <= self.sigma:
            raise AlphabetOverflowError(f"code {code} outside [1, {self.sigma}]")


class Text:
    """Integer-coded text; position `n` reads as the sentinel."""

    __slots__ = ("codes", "n")

    def __init__(self, codes):
        self.codes = list(codes)
        self.n = len(self.codes)

    def at(self, i: int) -> int:
        """Character at position i; the sentinel at position n."""
        return self.codes[i] if i < self.n else SENTINEL

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, Text) and self.codes == other.codes

    def __repr__(self):
        return f"Text({self.codes!r})"


def encode_text(raw, sigma: int) -> Text:
    """Encode raw bytes (code = byte value + 1) or an iterable of codes.

    Byte value order is preserved by the +1 shift, which keeps code 0 free
    for the sentinel.  Raises AlphabetOverflowError if any symbol falls
    outside [1, sigma].
    """
    alphabet = Alphabet(sigma)
    if isinstance(raw, (bytes, bytearray)):
        codes = [b + 1 for b in raw]
    else:
        codes = [int(c) for c in raw]
    for c in codes:
        alphabet.check(c)
    return Text(codes)


class Outcome(Enum):
    MATCHED_AT_NODE = "MATCHED_AT_NODE"
    MATCHED_ON_EDGE = "MATCHED_ON_EDGE"
    NOT_FOUND = "NOT_FOUND"


@dataclass
class MatchResult:
    """Result of a prefix search.

    `node` is the locus: the node itself when `edge_offset` is 0, otherwise
    the point `edge_offset` characters down the locus node's incoming edge.
    `interval` is the leaf-rank interval of all matches (None iff NOT_FOUND).
    """

    outcome: Outcome
    node: int
    edge_offset: int
    interval: tuple[int, int] | None
    matched_len: int

    @property
    def matched(self) -> bool:
        return self.outcome is not Outcome.NOT_FOUND

    @property
    def occ(self) -> int:
        return 0 if self.interval is None else self.interval[1] - self.interval[0] + 1


@dataclass
class Node:
    """Arena record for one compacted-trie node."""

    parent: int
    sid: int        # source string id of the incoming edge label
    start: int      # label = source[start:end), position len(source) = sentinel
    end: int
    children: dict = field(default_factory=dict)   # first char -> node id
    low: int = -1   # leaf-rank interval [low, high]
    high: int = -1
    leaf_id: int = -1   # payload for leaves (suffix position / string id)

    @property
    def is_leaf(self) -> bool:
        return self.leaf_id >= 0

    @property
    def label_len(self) -> int:
        return self.end - self.start


class CompactedTrie:
    """Arena-backed compacted trie over sentinel-terminated strings.

    `sources` holds the Texts that edge labels reference.  Every internal
    node except possibly the root has at least two children.
    """

    ROOT = 0

    def __init__(self, sources: list[Text] | None = None):
        self.sources: list[Text] = sources if sources is not None else []
        self.nodes: list[Node] = [Node(parent=-1, sid=-1, start=0, end=0)]

    def add_source(self, text: Text) -> int:
        self.sources.append(text)
        return len(self.sources) - 1

    def label_char(self, node_id: int, offset: int) -> int:
        nd = self.nodes[node_id]
        return self.sources[nd.sid].at(nd.start + offset)

    def label_codes(self, node_id: int) -> list[int]:
        nd = self.nodes[node_id]
        src = self.sources[nd.sid]
        return [src.at(i) for i in range(nd.start, nd.end)]

    def new_node(self, parent, sid, start, end, leaf_id=-1) -> int:
        self.nodes.append(Node(parent=parent, sid=sid, start=start, end=end, leaf_id=leaf_id))
        return len(self.nodes) - 1

    def string_codes(self, sid: int) -> list[int]:
        """Stored string `sid`, sentinel included."""
        src = self.sources[sid]
        return src.codes + [SENTINEL]

    def insert_path(self, sid: int, leaf_rank: int = -1):
        """Insert the sentinel-terminated string `sources[sid]` as a leaf.

        Splits at most one existing edge and adds one leaf edge.  The leaf
        carries `sid` as its payload; `leaf_rank`, when given, becomes its
        interval.  Returns (leaf id, middle node id or None, attach node id).
        Raises DuplicateKeyError if the string is already stored.
        """
        text = self.sources[sid]
        total = text.n + 1  # sentinel included
        v = self.ROOT
        depth = 0
        while True:
            c = text.at(depth)
            child = self.nodes[v].children.get(c)
            if child is None:
                leaf = self.new_node(v, sid, depth, total, leaf_id=sid)
                self.nodes[v].children[c] = leaf
                if leaf_rank >= 0:
                    self.set_leaf_interval(leaf, leaf_rank)
                return leaf, None, v
            nd = self.nodes[child]
            src = self.sources[nd.sid]
            k = 0
            while k < nd.label_len and depth + k < total and src.at(nd.start + k) == text.at(depth + k):
                k += 1
            if k == nd.label_len:
                depth += k
                if depth == total:
                    raise DuplicateKeyError("string already stored")
                v = child
                continue
            if depth + k == total:
                # can only happen on the sentinel, which is unique per string
                raise DuplicateKeyError("string already stored")
            # split the edge at offset k, then hang the new leaf off the middle
            mid = self.new_node(v, nd.sid, nd.start, nd.start + k)
            mid_nd = self.nodes[mid]
            self.nodes[v].children[src.at(nd.start)] = mid
            nd.parent = mid
            nd.start += k
            mid_nd.children[src.at(nd.start)] = child
            leaf = self.new_node(mid, sid, depth + k, total, leaf_id=sid)
            mid_nd.children[text.at(depth + k)] = leaf
            if leaf_rank >= 0:
                self.set_leaf_interval(leaf, leaf_rank)
            return leaf, mid, v

    def compute_intervals(self):
        """Set [low, high] of every node from the leaf ranks below it."""
        order = self.topo_order()
        for v in reversed(order):
            nd = self.nodes[v]
            if nd.is_leaf:
                continue
            lows = []
            highs = []
            for ch in nd.children.values():
                lows.append(self.nodes[ch].low)
                highs.append(self.nodes[ch].high)
            nd.low = min(lows) if lows else 0
            nd.high = max(highs) if highs else -1

    def set_leaf_interval(self, leaf: int, rank: int):
        nd = self.nodes[leaf]
        nd.low = nd.high = rank

    def topo_order(self) -> list[int]:
        """Node ids, parents before children."""
        order = []
        stack = [self.ROOT]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(self.nodes[v].children.values())
        return order

    def leaf_count(self) -> int:
        return sum(1 for nd in self.nodes if nd.is_leaf)

    def string_depths(self) -> list[int]:
        depth = [0] * len(self.nodes)
        for v in self.topo_order():
            if v == self.ROOT:
                continue
            nd = self.nodes[v]
            depth[v] = depth[nd.parent] + nd.label_len
        return depth

    def canonical(self, node_id: int = ROOT):
        """Canonical form: children by first char, labels expanded.

        Two tries over the same string set are isomorphic iff their
        canonical forms are equal.  Iterative to cope with path-shaped tries.
        """
        done: dict[int, tuple] = {}
        stack = [(node_id, False)]
        while stack:
            v, expanded = stack.pop()
            nd = self.nodes[v]
            if not expanded:
                stack.append((v, True))
                for _, ch in sorted(nd.children.items()):
                    stack.append((ch, False))
            else:
                kids = tuple((c, done[ch]) for c, ch in sorted(nd.children.items()))
                done[v] = (tuple(self.label_codes(v)), nd.leaf_id if nd.is_leaf else -1, kids)
        return done[node_id]


def sorted_string_ranks(texts: list[Text]) -> list[int]:
    """Ranks of `texts` under sentinel-terminated lexicographic order."""
    keyed = sorted(range(len(texts)), key=lambda i: texts[i].codes)
    rank = [0] * len(texts)
    for r, i in enumerate(keyed):
        rank[i] = r
    return rank


def build_string_trie(texts: list[Text]) -> tuple[CompactedTrie, list[int]]:
    """Compacted trie over a set of distinct strings.

    Returns (trie, leaf_order) where leaf_order[rank] = original string id.
    Leaf-rank intervals are filled in.
    """
    trie = CompactedTrie(sources=list(texts))
    ranks = sorted_string_ranks(texts)
    leaf_order = [0] * len(texts)
    for sid, rank in enumerate(ranks):
        trie.insert_path(sid, leaf_rank=rank)
        leaf_order[rank] = sid
    trie.compute_intervals()
    return trie, leaf_order
