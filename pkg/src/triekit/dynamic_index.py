"""Amortized dynamic compacted-trie search structure.

The trie is split into a heavy top (nodes with more than s/2 leaves, s =
sigma, always containing the root) and light small trees hanging off it.
Heavy nodes carry a dynamic predecessor over their children's first
characters, plus either a size-sigma array over heavy children (branching)
or a single heavy-child pointer.  Light nodes carry the per-small-tree
machinery: a level in the capacity hierarchy, fragments (maximal same-level
connected subtrees) with leaf counters at their roots, a deterministic
dictionary over same-level child edges and a wexponential search tree over
lower-level child edges whose stored weights track the true weights within
[ceil(sqrt(w)), w].

All rebuild work (small-tree rebalancing at s leaves, fragment promoting at
2*f(level+1)) is eager and atomic: the amortized variant.
"""

from __future__ import annotations

import os
from math import isqrt

from .errors import AlphabetOverflowError, DuplicateKeyError
from .instrument import GLOBAL
from .predkit import DetDictionary, DynamicPredecessor
from .text import SENTINEL, CompactedTrie, MatchResult, Outcome, Text
from .wexp import WexpTree, audit_wexp, capacity


def _ceil_sqrt(w: int) -> int:
    r = isqrt(w)
    return r if r * r == w else r + 1


def canonical_level(weight: int) -> int:
    """Highest level whose proper threshold 2*f(level) the weight meets."""
    level = 0
    while weight >= 2 * capacity(level + 1):
        level += 1
    return level


class _Fragment:
    """Maximal connected same-level subtree; the root holds the counter."""

    __slots__ = ("root", "members", "counter", "reg")

    def __init__(self, root, members, counter, reg=None):
        self.root = root
        self.members = members
        self.counter = counter
        self.reg = reg  # (owning WexpTree, ElementHandle) or None


class _SmallTree:
    __slots__ = ("root",)

    def __init__(self, root):
        self.root = root


class DynTrieIndex:
    """Dynamic trie over distinct strings with alphabet size sigma."""

    def __init__(self, sigma: int):
        self.sigma = sigma
        self.s = sigma
        self.trie = CompactedTrie(sources=[])
        self.heavy = [True]  # the root is permanently heavy
        self.level = [0]
        self.frag: list[_Fragment | None] = [None]
        self.small: list[_SmallTree | None] = [None]
        self.same_dict: list[DetDictionary | None] = [None]
        self.wexp: list[WexpTree | None] = [None]
        self.wexp_handles: list[dict | None] = [None]
        self.dynp: list[DynamicPredecessor | None] = [DynamicPredecessor(sigma + 1)]
        self.arr: list[list | None] = [None]
        self.hptr: list[tuple | None] = [None]
        self.occ: list[int] = [0]  # leaves below each node, for match reporting
        self.n_strings = 0

    # ------------------------------------------------------------- plumbing

    def _grow(self, node_id):
        while len(self.heavy) <= node_id:
            self.heavy.append(False)
            self.level.append(0)
            self.frag.append(None)
            self.small.append(None)
            self.same_dict.append(None)
            self.wexp.append(None)
            self.wexp_handles.append(None)
            self.dynp.append(None)
            self.arr.append(None)
            self.hptr.append(None)
            self.occ.append(0)

    def _edge_char(self, v) -> int:
        return self.trie.label_char(v, 0)

    def _rebuild_same_dict(self, v):
        trie = self.trie
        pairs = [(c, ch) for c, ch in trie.nodes[v].children.items()
                 if not self.heavy[ch] and self.level[ch] == self.level[v]]
        self.same_dict[v] = DetDictionary(pairs)

    def _register_child(self, v, child, weight):
        """Register lower-level child's fragment root in v's wexp tree with
        stored weight ceil(sqrt(weight)); reuses a stale handle when the
        edge character was registered before (no deletions exist)."""
        c = self._edge_char(child)
        handles = self.wexp_handles[v]
        h = handles.get(c)
        tree = self.wexp[v]
        if h is None:
            h = tree.insert(c)
            handles[c] = h
        target = _ceil_sqrt(weight)
        while h.weight < target:
            tree.increase(h)
            GLOBAL.promote_steps += 1
        return (tree, h)

    def _make_light(self, v, level, small, fragment):
        self.heavy[v] = False
        self.level[v] = level
        self.small[v] = small
        self.frag[v] = fragment
        self.same_dict[v] = DetDictionary([])
        self.wexp[v] = WexpTree(self.sigma + 1)
        self.wexp_handles[v] = {}
        self.dynp[v] = None
        self.arr[v] = None
        self.hptr[v] = None

    def _make_heavy(self, v):
        self.heavy[v] = True
        self.frag[v] = None
        self.small[v] = None
        self.same_dict[v] = None
        self.wexp[v] = None
        self.wexp_handles[v] = None
        dynp = DynamicPredecessor(self.sigma + 1)
        for c in self.trie.nodes[v].children:
            dynp.insert(c)
        self.dynp[v] = dynp

    def _set_heavy_child_links(self, v):
        kids = [(c, ch) for c, ch in self.trie.nodes[v].children.items() if self.heavy[ch]]
        if len(kids) >= 2:
            arr = [None] * (self.sigma + 1)
            for c, ch in kids:
                arr[c] = ch
            self.arr[v] = arr
            self.hptr[v] = None
        elif len(kids) == 1:
            self.arr[v] = None
            self.hptr[v] = kids[0]
        else:
            self.arr[v] = None
            self.hptr[v] = None

    def _note_new_heavy_child(self, u, child):
        """Child of heavy node u has just become heavy; update u's links."""
        c = self._edge_char(child)
        if self.arr[u] is not None:
            self.arr[u][c] = child
        elif self.hptr[u] is not None:
            oc, och = self.hptr[u]
            arr = [None] * (self.sigma + 1)
            arr[oc] = och
            arr[c] = child
            self.arr[u] = arr
            self.hptr[u] = None
        else:
            self.hptr[u] = (c, child)

    # --------------------------------------------------------------- insert

    def insert(self, codes: list[int]):
        """Insert one string (sentinel-terminated implicitly)."""
        for c in codes:
            if not 1 <= c <= self.sigma:
                raise AlphabetOverflowError(f"char {c} outside [1, {self.sigma}]")
        if self._stored(codes):
            raise DuplicateKeyError("string already stored")
        text = Text(codes)
        sid = self.trie.add_source(text)
        leaf, mid, attach = self.trie.insert_path(sid)
        self._grow(max(leaf, mid if mid is not None else 0))
        self.n_strings += 1

        if mid is not None:
            w = next(ch for ch in self.trie.nodes[mid].children.values() if ch != leaf)
            self.occ[mid] = self.occ[w]
            self._wire_mid(attach, mid, leaf)
        else:
            self._wire_leaf(attach, leaf)
        v = leaf
        while v != -1:
            self.occ[v] += 1
            v = self.trie.nodes[v].parent
        self._bump_counters_and_trigger(leaf)
        if os.environ.get("TRIEKIT_AUDIT") == "1":
            self.audit()

    def _stored(self, codes) -> bool:
        trie = self.trie
        v = trie.ROOT
        depth = 0
        total = len(codes) + 1

        def at(i):
            return codes[i] if i < len(codes) else SENTINEL

        while depth < total:
            child = trie.nodes[v].children.get(at(depth))
            if child is None:
                return False
            nd = trie.nodes[child]
            for k in range(nd.label_len):
                if depth + k >= total or trie.label_char(child, k) != at(depth + k):
                    return False
            depth += nd.label_len
            v = child
        return True

    def _wire_leaf(self, u, leaf):
        """New leaf directly under existing node u."""
        c = self._edge_char(leaf)
        if self.heavy[u]:
            small = _SmallTree(leaf)
            fragment = _Fragment(leaf, {leaf}, 0, reg=None)
            self._make_light(leaf, 0, small, fragment)
            self.dynp[u].insert(c)
        else:
            small = self.small[u]
            if self.level[u] == 0:
                fragment = self.frag[u]
                fragment.members.add(leaf)
                self._make_light(leaf, 0, small, fragment)
                self._rebuild_same_dict(u)
            else:
                fragment = _Fragment(leaf, {leaf}, 0, reg=None)
                self._make_light(leaf, 0, small, fragment)
                fragment.reg = self._register_child(u, leaf, 1)

    def _wire_mid(self, u, mid, leaf):
        """Edge (u, w) was split at new node mid; leaf hangs under mid."""
        trie = self.trie
        w = next(ch for ch in trie.nodes[mid].children.values() if ch != leaf)
        c_mid = self._edge_char(mid)
        if self.heavy[w]:
            # mid has all of w's leaves plus one: keep the heavy top connected
            self.heavy[mid] = True
            dynp = DynamicPredecessor(self.sigma + 1)
            for c in trie.nodes[mid].children:
                dynp.insert(c)
            self.dynp[mid] = dynp
            self.hptr[mid] = (self._edge_char(w), w)
            if self.arr[u] is not None:
                self.arr[u][c_mid] = mid
            elif self.hptr[u] is not None and self.hptr[u][0] == c_mid:
                self.hptr[u] = (c_mid, mid)
            self._wire_leaf(mid, leaf)
            return
        # light w: mid adopts w's level, small tree and fragment
        small = self.small[w]
        fragment = self.frag[w]
        was_root = fragment.root == w
        self._make_light(mid, self.level[w], small, fragment)
        fragment.members.add(mid)
        self._rebuild_same_dict(mid)  # w is mid's same-level child
        if was_root:
            fragment.root = mid
            if small.root == w:
                small.root = mid
        else:
            # u is light and same level as w: its dict must re-point c to mid
            self._rebuild_same_dict(u)
        self._wire_leaf(mid, leaf)

    def _bump_counters_and_trigger(self, leaf):
        frags = self._fragments_above(leaf)
        # counters first, top-down, maintaining the stored-weight windows
        for f in reversed(frags):
            f.counter += 1
            if f.reg is not None:
                tree, h = f.reg
                if h.weight < _ceil_sqrt(f.counter):
                    tree.increase(h)
        if frags and frags[-1].counter >= self.s:
            root = self.small[frags[-1].root].root
            self._rebalance(root)
            return
        while True:
            for f in self._fragments_above(leaf):
                if f.counter >= 2 * capacity(self.level[f.root] + 1):
                    self._promote(f)
                    break
            else:
                return

    def _fragments_above(self, node):
        out = []
        v = node
        while v != -1 and not self.heavy[v]:
            f = self.frag[v]
            out.append(f)
            v = self.trie.nodes[f.root].parent
        return out

    # ------------------------------------------------------------ promoting

    def _member_weights(self, fragment):
        """True weights of every member, via one DFS over the fragment."""
        trie = self.trie
        weights = {}
        order = []
        stack = [fragment.root]
        while stack:
            v = stack.pop()
            order.append(v)
            for ch in trie.nodes[v].children.values():
                if ch in fragment.members:
                    stack.append(ch)
        for v in reversed(order):
            nd = trie.nodes[v]
            GLOBAL.promote_steps += 1
            if nd.is_leaf:
                weights[v] = 1
                continue
            w = 0
            for ch in nd.children.values():
                GLOBAL.promote_steps += 1
                if ch in fragment.members:
                    w += weights[ch]
                elif self.heavy[ch]:
                    raise AssertionError("heavy child below a light node")
                else:
                    w += self.frag[ch].counter
            weights[v] = w
        return weights

    def _promote(self, fragment):
        """Raise the level of the over-weight tail of `fragment` by one."""
        GLOBAL.promotions += 1
        trie = self.trie
        r = fragment.root
        lv = self.level[r]
        weights = self._member_weights(fragment)
        threshold = capacity(lv + 1)
        # the tail: maximal descending chain of members heavier than f(lv+1)
        tail = [r]
        cur = r
        while True:
            nxt = [ch for ch in trie.nodes[cur].children.values()
                   if ch in fragment.members and weights[ch] > threshold]
            if not nxt:
                break
            assert len(nxt) == 1, "two over-weight children cannot coexist"
            cur = nxt[0]
            tail.append(cur)
        tail_set = set(tail)

        # split the remainder of the old fragment into new fragments
        new_roots = []
        for x in tail:
            for ch in trie.nodes[x].children.values():
                if ch in fragment.members and ch not in tail_set:
                    new_roots.append((x, ch))
        for parent_x, root_ch in new_roots:
            members = set()
            stack = [root_ch]
            while stack:
                v = stack.pop()
                members.add(v)
                GLOBAL.promote_steps += 1
                for ch in trie.nodes[v].children.values():
                    if ch in fragment.members and ch not in tail_set:
                        stack.append(ch)
            nf = _Fragment(root_ch, members, weights[root_ch])
            for v in members:
                self.frag[v] = nf

        # bump the tail's level
        for x in tail:
            self.level[x] = lv + 1

        # fragment record for the tail: join the parent's or start fresh
        p = trie.nodes[r].parent
        if p != -1 and not self.heavy[p] and self.level[p] == lv + 1:
            pf = self.frag[p]
            pf.members.update(tail_set)
            for x in tail:
                self.frag[x] = pf
            self._rebuild_same_dict(p)  # r's edge moves into the parent's dict
        else:
            nf = _Fragment(r, tail_set, weights[r],
                           reg=fragment.reg if (p != -1 and not self.heavy[p]) else None)
            for x in tail:
                self.frag[x] = nf

        # per tail node: same-level dict is just the next tail node; the
        # remaining former same-level children register in the wexp tree
        for x in tail:
            self._rebuild_same_dict(x)
            for ch in trie.nodes[x].children.values():
                if ch in fragment.members and ch not in tail_set:
                    f_ch = self.frag[ch]
                    f_ch.reg = self._register_child(x, ch, f_ch.counter)

    # ----------------------------------------------------------- rebalancing

    def _rebalance(self, root):
        """Small tree at `root` reached s leaves: carve out the new heavy
        top and rebuild every remaining light payload from scratch."""
        trie = self.trie
        u = trie.nodes[root].parent
        order = []
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(trie.nodes[v].children.values())
        counts = {}
        for v in reversed(order):
            GLOBAL.rebalance_steps += 1
            nd = trie.nodes[v]
            counts[v] = 1 if nd.is_leaf else sum(counts[ch] for ch in nd.children.values())
        half = self.s / 2
        new_heavy = [v for v in order if counts[v] > half]
        for v in new_heavy:
            self._make_heavy(v)
        for v in new_heavy:
            self._set_heavy_child_links(v)
        if u != -1:
            self._note_new_heavy_child(u, root)
        # remaining light nodes: fresh small trees, levels, fragments
        for v in order:
            if self.heavy[v]:
                continue
            p = trie.nodes[v].parent
            GLOBAL.rebalance_steps += 1
            lv = canonical_level(counts[v])
            if self.heavy[p]:
                small = _SmallTree(v)
            else:
                small = self.small[p]
            if self.heavy[p] or self.level[p] != lv:
                fragment = _Fragment(v, {v}, counts[v])
            else:
                fragment = self.frag[p]
                fragment.members.add(v)
            self._make_light(v, lv, small, fragment)
        for v in order:
            if self.heavy[v]:
                continue
            self._rebuild_same_dict(v)
            for ch in trie.nodes[v].children.values():
                if self.level[ch] != self.level[v]:
                    f_ch = self.frag[ch]
                    f_ch.reg = self._register_child(v, ch, f_ch.counter)

    # ---------------------------------------------------------------- search

    def search(self, pattern: list[int]) -> MatchResult:
        """Prefix search; the interval is (0, occ-1): the dynamic structure
        maintains no global leaf ranks, only the matched set."""
        for c in pattern:
            if not 1 <= c <= self.sigma:
                raise AlphabetOverflowError(f"pattern char {c} outside [1, {self.sigma}]")
        trie = self.trie
        m = len(pattern)
        if self.n_strings == 0:
            return MatchResult(Outcome.NOT_FOUND, trie.ROOT, 0, None, 0)
        v = trie.ROOT
        i = 0
        while True:
            if i == m:
                return self._match_at(v, 0, m)
            c = pattern[i]
            child = None
            if self.heavy[v]:
                if self.arr[v] is not None:
                    child = self.arr[v][c]
                elif self.hptr[v] is not None and self.hptr[v][0] == c:
                    child = self.hptr[v][1]
                if child is None and self.dynp[v].query(c) == c:
                    child = trie.nodes[v].children[c]
            else:
                child = self.same_dict[v].lookup(c)
                if child is None:
                    hit = self.wexp[v].pred(c)
                    if hit is not None and hit[0] == c:
                        child = trie.nodes[v].children[c]
            if child is None:
                return MatchResult(Outcome.NOT_FOUND, v, 0, None, i)
            nd = trie.nodes[child]
            j = 1
            while j < nd.label_len and i + j < m:
                GLOBAL.chars_compared += 1
                if trie.label_char(child, j) != pattern[i + j]:
                    return MatchResult(Outcome.NOT_FOUND, child, j, None, i + j)
                j += 1
            if i + j == m:
                return self._match_at(child, 0 if j == nd.label_len else j, m)
            i += nd.label_len
            v = child

    def _match_at(self, v, offset, m) -> MatchResult:
        out = Outcome.MATCHED_AT_NODE if offset == 0 else Outcome.MATCHED_ON_EDGE
        return MatchResult(out, v, offset, (0, self.occ[v] - 1), m)

    def enumerate_match(self, res: MatchResult) -> list[int]:
        """String ids under the match locus, in lexicographic order."""
        if not res.matched:
            return []
        trie = self.trie
        out = []
        stack = [res.node]
        while stack:
            v = stack.pop()
            nd = trie.nodes[v]
            if nd.is_leaf:
                out.append(nd.leaf_id)
            else:
                for _, ch in sorted(nd.children.items(), reverse=True):
                    stack.append(ch)
        return out

    # ------------------------------------------------------------ predecessor

    def predecessor(self, pattern: list[int]):
        """String id of the largest stored string <= pattern, or None."""
        for c in pattern:
            if not 1 <= c <= self.sigma:
                raise AlphabetOverflowError(f"pattern char {c} outside [1, {self.sigma}]")
        trie = self.trie
        if self.n_strings == 0:
            return None
        m = len(pattern)
        v = trie.ROOT
        i = 0
        while True:
            if i == m:
                leaf = trie.nodes[v].children.get(SENTINEL)
                if leaf is not None:
                    return trie.nodes[leaf].leaf_id  # the pattern is stored
                return self._ascend(v, SENTINEL)
            c = pattern[i]
            child = trie.nodes[v].children.get(c)
            if child is None:
                return self._ascend(v, c)
            nd = trie.nodes[child]
            j = 1
            while j < nd.label_len and i + j < m:
                lc = trie.label_char(child, j)
                if lc != pattern[i + j]:
                    if pattern[i + j] > lc:
                        return self._rightmost(child)
                    return self._ascend(v, c)
                j += 1
            if i + j == m:
                if j < nd.label_len:
                    if trie.label_char(child, j) == SENTINEL:
                        return trie.nodes[child].leaf_id  # stored == pattern
                    return self._ascend(v, c)
                i = m
                v = child
                continue
            i += nd.label_len
            v = child

    def _ascend(self, v, below_char):
        """Rightmost leaf preceding the subtrees at or above (v, below_char)."""
        trie = self.trie
        while True:
            cands = [c for c in trie.nodes[v].children if c < below_char]
            if cands:
                return self._rightmost(trie.nodes[v].children[max(cands)])
            if v == trie.ROOT:
                return None
            below_char = self._edge_char(v)
            v = trie.nodes[v].parent

    def _rightmost(self, v):
        trie = self.trie
        while not trie.nodes[v].is_leaf:
            kids = trie.nodes[v].children
            v = kids[max(kids)]
        return trie.nodes[v].leaf_id

    def string_codes(self, sid: int) -> list[int]:
        return self.trie.sources[sid].codes

    # ----------------------------------------------------------------- audit

    def audit(self):
        """Full structural audit; raises AssertionError on violations."""
        trie = self.trie
        order = trie.topo_order()
        counts = {}
        for v in reversed(order):
            nd = trie.nodes[v]
            counts[v] = 1 if nd.is_leaf else sum(counts[ch] for ch in nd.children.values())
        assert self.heavy[trie.ROOT]
        audited_wexps = set()
        for v in order:
            nd = trie.nodes[v]
            assert self.occ[v] == counts[v], "stale leaf-count payload"
            if v != trie.ROOT and not nd.is_leaf:
                assert len(nd.children) >= 2, "compactedness violated"
            for c, ch in nd.children.items():
                assert trie.label_char(ch, 0) == c
                assert trie.nodes[ch].parent == v
            if self.heavy[v]:
                assert v == trie.ROOT or counts[v] > self.s / 2, "underweight heavy node"
                p = nd.parent
                assert p == -1 or self.heavy[p], "heavy set must be connected"
                heavy_kids = [(c, ch) for c, ch in nd.children.items() if self.heavy[ch]]
                assert set(nd.children).issubset(set(self.dynp[v].keys())), \
                    "child char missing from dyn pred"
                if len(heavy_kids) >= 2:
                    assert self.arr[v] is not None, "branching heavy node lacks its array"
                    for c, ch in heavy_kids:
                        assert self.arr[v][c] == ch
                    for c, ch in nd.children.items():
                        if not self.heavy[ch]:
                            assert self.arr[v][c] is None
                elif len(heavy_kids) == 1:
                    assert self.arr[v] is None and self.hptr[v] == heavy_kids[0]
                else:
                    assert self.arr[v] is None and self.hptr[v] is None
                continue
            # light node checks
            assert counts[v] < self.s, "overweight light node"
            lv = self.level[v]
            f = self.frag[v]
            assert v in f.members
            p = nd.parent
            if f.root == v:
                assert self.heavy[p] or self.level[p] > lv, "fragment not maximal"
                assert f.counter == counts[v], "stale fragment counter"
                if not self.heavy[p]:
                    assert f.reg is not None
                    tree, h = f.reg
                    assert tree is self.wexp[p] and h is self.wexp_handles[p][self._edge_char(v)]
                    assert _ceil_sqrt(counts[v]) <= h.weight <= counts[v], \
                        "stored weight outside [ceil(sqrt(w)), w]"
            else:
                assert not self.heavy[p] and self.level[p] == lv and self.frag[p] is f
            low = capacity(lv) if lv >= 1 else 1
            assert low <= counts[v] < 2 * capacity(lv + 1), "level window violated"
            if not self.heavy[p]:
                assert self.level[p] >= lv, "levels must not increase downward"
                assert self.small[p] is self.small[v]
            else:
                assert self.small[v].root == v
            # same-level dict covers exactly the same-level children
            same = {c for c, ch in nd.children.items()
                    if not self.heavy[ch] and self.level[ch] == lv}
            for c, ch in nd.children.items():
                hit = self.same_dict[v].lookup(c)
                if c in same:
                    assert hit == ch
                else:
                    assert hit is None
                    assert self.level[ch] < lv
                    h = self.wexp_handles[v].get(c)
                    assert h is not None, "lower-level child missing from wexp"
            if id(self.wexp[v]) not in audited_wexps:
                audited_wexps.add(id(self.wexp[v]))
                audit_wexp(self.wexp[v])
