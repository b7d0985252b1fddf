"""Static compacted-trie search structures.

Two engines over the same trie + sorted-leaf-array data:

* StaticTrieIndex: heavy/light split at s = Theta(lg^2 lg sigma); branching
  heavy nodes hold a deterministic dictionary of their heavy-child edges,
  nonbranching ones a single pointer, and every heavy node a static
  predecessor over its light-child edge characters.  Entering a light child
  switches to binary search of the leaf array inside the child's interval.
  A second per-heavy-node predecessor over all edges plus rightmost-leaf
  links answers lexicographic predecessor queries.

* SuffixTrayIndex: the same with threshold sigma, size-sigma child arrays at
  branching heavy nodes and plain child binary search at the rest.
"""

from __future__ import annotations

import math

from .errors import AlphabetOverflowError, CorruptTrieError, InvalidInputError
from .instrument import GLOBAL
from .predkit import DetDictionary, StaticPredecessor
from .text import CompactedTrie, MatchResult, Outcome


def heavy_threshold(sigma: int) -> int:
    """s = max(2, ceil((lg lg sigma)^2)), with sigma clamped to >= 4."""
    return max(2, math.ceil(math.log2(math.log2(max(sigma, 4))) ** 2))


def validate_intervals(trie: CompactedTrie, n_leaves: int):
    """Check leaf-rank intervals: contiguous, child-ordered, consistent."""
    seen = [False] * n_leaves
    for v in reversed(trie.topo_order()):
        nd = trie.nodes[v]
        if nd.is_leaf:
            if nd.low != nd.high or not 0 <= nd.low < n_leaves or seen[nd.low]:
                raise CorruptTrieError(f"bad leaf interval at node {v}")
            seen[nd.low] = True
            continue
        kids = sorted(nd.children.items())
        if not kids:
            if v == trie.ROOT and n_leaves == 0:
                continue
            raise CorruptTrieError(f"childless internal node {v}")
        prev_high = None
        for _, ch in kids:
            c = trie.nodes[ch]
            if prev_high is not None and c.low != prev_high + 1:
                raise CorruptTrieError(f"non-contiguous intervals under {v}")
            prev_high = c.high
        if nd.low != trie.nodes[kids[0][1]].low or nd.high != prev_high:
            raise CorruptTrieError(f"interval of {v} not the union of its children")
    if not all(seen):
        raise CorruptTrieError("leaf ranks are not a permutation")


class _IndexBase:
    """Shared machinery: leaf access, light-subtree search, locus walk."""

    def __init__(self, trie: CompactedTrie, leaf_order: list[int], sigma: int, mode: str):
        self.trie = trie
        self.leaf_order = leaf_order
        self.sigma = sigma
        self.mode = mode  # "suffix": leaf_order holds positions; "strings": string ids
        validate_intervals(trie, len(leaf_order))
        counts = [0] * len(trie.nodes)
        for v, nd in enumerate(trie.nodes):
            counts[v] = nd.high - nd.low + 1 if nd.high >= nd.low else 0
        self.leaf_counts = counts

    # leaf rank r, character position d of the stored string (sentinel padded)
    def leaf_char(self, r: int, d: int) -> int:
        if self.mode == "suffix":
            return self.trie.sources[0].at(self.leaf_order[r] + d)
        return self.trie.sources[self.leaf_order[r]].at(d)

    def leaf_len(self, r: int) -> int:
        """Length of the stored string at rank r, sentinel excluded."""
        if self.mode == "suffix":
            return self.trie.sources[0].n - self.leaf_order[r]
        return self.trie.sources[self.leaf_order[r]].n

    def enumerate(self, interval: tuple[int, int]) -> list[int]:
        """Leaf payloads (positions / string ids) in rank order."""
        lo, hi = interval
        if not (0 <= lo <= hi < len(self.leaf_order)):
            raise InvalidInputError(f"interval {interval} out of range")
        return [self.leaf_order[r] for r in range(lo, hi + 1)]

    def _check_pattern(self, pattern):
        for c in pattern:
            if not 1 <= c <= self.sigma:
                raise AlphabetOverflowError(f"pattern char {c} outside [1, {self.sigma}]")

    def _cmp_leaf(self, r, pattern, start):
        """(sign, lcp): sign<0 leaf<P, 0 P is a prefix of the leaf, >0 leaf>P."""
        m = len(pattern)
        d = start
        while True:
            if d == m:
                return 0, m
            lc = self.leaf_char(r, d)
            GLOBAL.chars_compared += 1
            if lc != pattern[d]:
                return (-1 if lc < pattern[d] else 1), d
            d += 1

    def _first_geq(self, lo, hi, pattern, start, strict):
        """Smallest rank in [lo, hi] whose leaf is >= P (strict: > P and not
        P-prefixed).  Returns (rank or hi+1, best lcp seen).  Comparisons
        start at the shared matched-prefix floor, never re-reading it."""
        best = start
        l_lcp = r_lcp = start
        res = hi + 1
        while lo <= hi:
            mid = (lo + hi) // 2
            sign, lcp = self._cmp_leaf(mid, pattern, min(l_lcp, r_lcp))
            best = max(best, lcp)
            if sign > 0 or (sign == 0 and not strict):
                res = mid
                hi = mid - 1
                r_lcp = lcp
            else:
                lo = mid + 1
                l_lcp = lcp
        return res, best

    def _light_search(self, w, pattern, start):
        """Resolve the query inside light child w by leaf binary search.

        Returns (MatchResult, insert_pos) where insert_pos is the global
        rank P would occupy (used by predecessor queries)."""
        nd = self.trie.nodes[w]
        lo, hi = nd.low, nd.high
        m = len(pattern)
        left, best_l = self._first_geq(lo, hi, pattern, start, strict=False)
        right, best_r = self._first_geq(lo, hi, pattern, start, strict=True)
        if left < right:
            res = self._locus_result(w, left, right - 1, m, start)
            return res, left
        best = max(best_l, best_r)
        return MatchResult(Outcome.NOT_FOUND, w, 0, None, best), left

    def _locus_result(self, w, lo, hi, m, start) -> MatchResult:
        """Locate the trie locus of a match known to span ranks [lo, hi]."""
        u = w
        # start-1 is the depth where w's edge begins (its first char was
        # matched as the entry character)
        depth_above = start - 1
        while True:
            nd = self.trie.nodes[u]
            d_node = depth_above + nd.label_len
            if (nd.low, nd.high) == (lo, hi):
                offset = m - depth_above
                if offset == nd.label_len:
                    return MatchResult(Outcome.MATCHED_AT_NODE, u, 0, (lo, hi), m)
                return MatchResult(Outcome.MATCHED_ON_EDGE, u, offset, (lo, hi), m)
            # descend into the child whose interval covers the match
            depth_above = d_node
            for ch in nd.children.values():
                c = self.trie.nodes[ch]
                if c.low <= lo and hi <= c.high:
                    u = ch
                    break
            else:
                raise CorruptTrieError("match interval not covered by any child")


class StaticTrieIndex(_IndexBase):
    """Heavy/light static index with deterministic dictionaries."""

    def __init__(self, trie, leaf_order, sigma, mode, s=None):
        super().__init__(trie, leaf_order, sigma, mode)
        self.s = s if s is not None else heavy_threshold(sigma)
        n_nodes = len(trie.nodes)
        self.heavy = [False] * n_nodes
        for v in range(n_nodes):
            self.heavy[v] = self.leaf_counts[v] >= self.s or v == trie.ROOT
        u = sigma + 1  # edge characters live in [0, sigma]
        self.heavy_dict: dict[int, DetDictionary] = {}
        self.heavy_ptr: dict[int, tuple[int, int]] = {}
        self.light_pred: dict[int, StaticPredecessor] = {}
        self.all_pred: dict[int, StaticPredecessor] = {}
        for v in range(n_nodes):
            if not self.heavy[v]:
                continue
            nd = trie.nodes[v]
            heavy_kids = [(c, ch) for c, ch in nd.children.items() if self.heavy[ch]]
            light_kids = sorted(c for c, ch in nd.children.items() if not self.heavy[ch])
            if len(heavy_kids) >= 2:
                self.heavy_dict[v] = DetDictionary(heavy_kids)
            elif len(heavy_kids) == 1:
                self.heavy_ptr[v] = heavy_kids[0]
            if light_kids:
                self.light_pred[v] = StaticPredecessor(light_kids, u)
            if nd.children:
                self.all_pred[v] = StaticPredecessor(sorted(nd.children), u)

    def prefix_query(self, pattern: list[int]) -> MatchResult:
        self._check_pattern(pattern)
        res, _ = self._descend(pattern)
        return res

    def _descend(self, pattern):
        """Shared walk; returns (MatchResult, fail).

        `fail` describes where an unsuccessful walk stopped so that a
        predecessor query can be resolved without redoing the descent:
        ("node", v, c) for a missing edge, ("rank", r) when the failure
        point already pins the predecessor's rank (r may be -1 for none),
        and None for matches."""
        trie = self.trie
        m = len(pattern)
        if not self.leaf_order:
            return MatchResult(Outcome.NOT_FOUND, trie.ROOT, 0, None, 0), ("rank", -1)
        v = trie.ROOT
        i = 0
        while True:
            if i == m:
                nd = trie.nodes[v]
                return MatchResult(Outcome.MATCHED_AT_NODE, v, 0, (nd.low, nd.high), m), None
            c = pattern[i]
            child = None
            dic = self.heavy_dict.get(v)
            if dic is not None:
                child = dic.lookup(c)
            elif v in self.heavy_ptr:
                pc, pch = self.heavy_ptr[v]
                if pc == c:
                    child = pch
            if child is None:
                lp = self.light_pred.get(v)
                if lp is not None and lp.query(c) == c:
                    w = trie.nodes[v].children[c]
                    res, pos = self._light_search(w, pattern, i + 1)
                    if res.matched:
                        return res, None
                    return res, ("rank", pos - 1)
                # no edge with character c leaves v
                return MatchResult(Outcome.NOT_FOUND, v, 0, None, i), ("node", v, c)
            # heavy child: match the remainder of its edge label
            nd = trie.nodes[child]
            j = 1
            while j < nd.label_len and i + j < m:
                GLOBAL.chars_compared += 1
                if trie.label_char(child, j) != pattern[i + j]:
                    lc = trie.label_char(child, j)
                    rank = nd.low - 1 if pattern[i + j] < lc else nd.high
                    return MatchResult(Outcome.NOT_FOUND, child, j, None, i + j), ("rank", rank)
                j += 1
            if i + j == m:
                if j == nd.label_len:
                    return MatchResult(Outcome.MATCHED_AT_NODE, child, 0,
                                       (nd.low, nd.high), m), None
                return MatchResult(Outcome.MATCHED_ON_EDGE, child, j,
                                   (nd.low, nd.high), m), None
            i += nd.label_len
            v = child

    def _pred_at_node(self, v, c):
        """Rank of the predecessor when the walk dies at node v wanting c."""
        ap = self.all_pred.get(v)
        hit = ap.query(c) if ap is not None else None
        if hit is None:
            return self.trie.nodes[v].low - 1
        # rightmost leaf below the child entered with the largest char <= c
        return self.trie.nodes[self.trie.nodes[v].children[hit]].high

    def predecessor_query(self, pattern: list[int]):
        """Rank of the largest stored string <= pattern, or None.

        Stored strings are sentinel-terminated, so a stored proper prefix of
        the pattern sorts below it; a stored string equal to the pattern is
        returned itself."""
        self._check_pattern(pattern)
        res, fail = self._descend(pattern)
        if res.matched:
            lo = res.interval[0]
            if self.leaf_len(lo) == len(pattern):
                return lo  # the pattern itself is stored
            return lo - 1 if lo > 0 else None
        rank = fail[1] if fail[0] == "rank" else self._pred_at_node(fail[1], fail[2])
        return rank if rank >= 0 else None


def build_static_index(trie, leaf_order, sigma, mode="strings", s=None) -> StaticTrieIndex:
    return StaticTrieIndex(trie, leaf_order, sigma, mode, s=s)


class SuffixTrayIndex(_IndexBase):
    """Suffix-tray engine: threshold sigma, child arrays at branching heavy
    nodes, child binary search elsewhere, leaf-array search below."""

    def __init__(self, trie, leaf_order, sigma, mode):
        super().__init__(trie, leaf_order, sigma, mode)
        self.s = sigma
        n_nodes = len(trie.nodes)
        self.heavy = [self.leaf_counts[v] >= self.s or v == trie.ROOT
                      for v in range(n_nodes)]
        self.child_array: dict[int, list] = {}
        self.heavy_ptr: dict[int, tuple[int, int]] = {}
        self.sorted_children: dict[int, list] = {}
        for v in range(n_nodes):
            if not self.heavy[v]:
                continue
            nd = trie.nodes[v]
            heavy_kids = [(c, ch) for c, ch in nd.children.items() if self.heavy[ch]]
            if len(heavy_kids) >= 2:
                arr = [None] * (sigma + 1)
                for c, ch in nd.children.items():
                    arr[c] = ch
                self.child_array[v] = arr
            else:
                if len(heavy_kids) == 1:
                    self.heavy_ptr[v] = heavy_kids[0]
                self.sorted_children[v] = sorted(nd.children.items())

    def branching_heavy_count(self) -> int:
        return len(self.child_array)

    def tray_query(self, pattern: list[int]) -> MatchResult:
        self._check_pattern(pattern)
        trie = self.trie
        m = len(pattern)
        if not self.leaf_order:
            return MatchResult(Outcome.NOT_FOUND, trie.ROOT, 0, None, 0)
        v = trie.ROOT
        i = 0
        while True:
            if i == m:
                nd = trie.nodes[v]
                return MatchResult(Outcome.MATCHED_AT_NODE, v, 0, (nd.low, nd.high), m)
            c = pattern[i]
            child = None
            arr = self.child_array.get(v)
            if arr is not None:
                child = arr[c]
            else:
                hp = self.heavy_ptr.get(v)
                if hp is not None and hp[0] == c:
                    child = hp[1]
                else:
                    kids = self.sorted_children[v]
                    lo, hi = 0, len(kids) - 1
                    while lo <= hi:
                        mid = (lo + hi) // 2
                        GLOBAL.tray_bsearch_steps += 1
                        if kids[mid][0] == c:
                            child = kids[mid][1]
                            break
                        if kids[mid][0] < c:
                            lo = mid + 1
                        else:
                            hi = mid - 1
            if child is None:
                return MatchResult(Outcome.NOT_FOUND, v, 0, None, i)
            if not self.heavy[child]:
                res, _ = self._light_search(child, pattern, i + 1)
                return res
            nd = trie.nodes[child]
            j = 1
            while j < nd.label_len and i + j < m:
                GLOBAL.chars_compared += 1
                if trie.label_char(child, j) != pattern[i + j]:
                    return MatchResult(Outcome.NOT_FOUND, child, j, None, i + j)
                j += 1
            if i + j == m:
                if j == nd.label_len:
                    return MatchResult(Outcome.MATCHED_AT_NODE, child, 0, (nd.low, nd.high), m)
                return MatchResult(Outcome.MATCHED_ON_EDGE, child, j, (nd.low, nd.high), m)
            i += nd.label_len
            v = child


def build_suffix_tray(trie, leaf_order, sigma, mode="suffix") -> SuffixTrayIndex:
    return SuffixTrayIndex(trie, leaf_order, sigma, mode)
