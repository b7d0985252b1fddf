"""Prepend-only suffix tree maintained Weiner-style, plus the fringe
marked-ancestor structure.

The text grows by prepending, so positions are counted from the right end:
after k prepends, position j holds the character j+1 places from the right,
and existing edge labels never shift.  Edge labels are (hi, lo) position
ranges read downward, with position -1 standing for the sentinel.

Every node stores its a-links in a per-node map: W_a(u) points to the locus
of a*str(u) when that string occurs; the link is hard when the locus is a
node, soft when it lies inside an edge (then it points to the edge's lower
end).  Soft links are stored eagerly and copied to the middle node whenever
an edge splits; reverse lists make the retargeting explicit.
"""

from __future__ import annotations

from .errors import AlphabetOverflowError, MarkOrderViolationError
from .instrument import GLOBAL
from .text import SENTINEL


class _ONode:
    __slots__ = ("parent", "hi", "lo", "sdepth", "children", "links",
                 "rev_soft", "leaf_id")

    def __init__(self, parent, hi, lo, sdepth, leaf_id=-1):
        self.parent = parent
        self.hi = hi
        self.lo = lo
        self.sdepth = sdepth
        self.children = {}
        self.links = {}      # letter -> (node, hard)
        self.rev_soft = set()  # (source node, letter) soft links aimed here
        self.leaf_id = leaf_id

    @property
    def label_len(self):
        return self.hi - self.lo + 1

    @property
    def is_leaf(self):
        return self.leaf_id >= 0


class OnlineSuffixTree:
    """Suffix tree of the current text; `prepend` adds one letter in front."""

    def __init__(self, sigma: int):
        self.sigma = sigma
        self.buf: list[int] = []
        self.n = 0
        root = _ONode(None, 0, 1, 0)  # empty label
        leaf0 = _ONode(root, -1, -1, 1, leaf_id=0)  # the sentinel suffix
        root.children[SENTINEL] = leaf0
        self.root = root
        self.active = leaf0  # leaf of the longest suffix

    def char(self, pos: int) -> int:
        return self.buf[pos] if pos >= 0 else SENTINEL

    def prepend(self, a: int):
        if not 1 <= a <= self.sigma:
            raise AlphabetOverflowError(f"char {a} outside [1, {self.sigma}]")
        n = self.n
        self.buf.append(a)  # position n now holds the new front letter

        # lowest ancestor of the active leaf with an a-link
        chain = []
        v = self.active
        while v is not self.root and a not in v.links:
            chain.append(v)
            v = v.parent
            GLOBAL.oracle_steps += 1
        u = v

        if a in u.links:
            target, hard = u.links[a]
            head_depth = u.sdepth + 1
            if hard:
                attach = target
            else:
                on_active_path = any(target is y for y in chain)
                attach = self._split(target, head_depth)
                if on_active_path:
                    # the middle node is itself an ancestor of the old
                    # active leaf, so a*str(mid) prefixes the new suffix
                    chain.append(attach)
        else:
            chain.append(u)  # the root gets its first a-link below
            head_depth = 0
            attach = self.root

        # hang the new longest suffix below the head
        first = self.char(n - head_depth)
        assert first not in attach.children, "head was not maximal"
        newleaf = _ONode(attach, n - head_depth, -1, n + 2, leaf_id=n + 1)
        attach.children[first] = newleaf
        GLOBAL.oracle_steps += 1

        # every walked ancestor now has a*str(y) on the new leaf edge
        for y in chain:
            hard = y.sdepth + 1 == newleaf.sdepth
            y.links[a] = (newleaf, hard)
            if not hard:
                newleaf.rev_soft.add((y, a))
            GLOBAL.oracle_steps += 1

        self.active = newleaf
        self.n = n + 1

    def _split(self, t, depth):
        """Split the edge into t at string depth `depth`; returns the new
        middle node.  Copies every link of t to the middle as a soft link
        and retargets soft links whose locus falls in the upper part."""
        p = t.parent
        offset = depth - p.sdepth
        assert 0 < offset < t.label_len
        mid = _ONode(p, t.hi, t.hi - offset + 1, depth)
        p.children[self.char(t.hi)] = mid
        t.hi -= offset
        t.parent = mid
        mid.children[self.char(t.hi)] = t
        for b, (tb, _) in t.links.items():
            mid.links[b] = (tb, False)
            tb.rev_soft.add((mid, b))
            GLOBAL.oracle_steps += 1
        for q, b in list(t.rev_soft):
            locus = q.sdepth + 1
            if locus > mid.sdepth:
                continue
            t.rev_soft.discard((q, b))
            if locus == mid.sdepth:
                q.links[b] = (mid, True)
            else:
                q.links[b] = (mid, False)
                mid.rev_soft.add((q, b))
            GLOBAL.oracle_steps += 1
        return mid

    # ------------------------------------------------------------- inspection

    def nodes(self):
        out = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(v.children.values())
        return out

    def label_codes(self, v) -> list[int]:
        return [self.char(p) for p in range(v.hi, v.lo - 1, -1)]

    def canonical(self):
        """(label codes, leaf id, sorted children) form, leaf ids being the
        0-based left start positions in the current text."""
        n = self.n
        done = {}
        stack = [(self.root, False)]
        while stack:
            v, expanded = stack.pop()
            if not expanded:
                stack.append((v, True))
                for _, ch in sorted(v.children.items()):
                    stack.append((ch, False))
            else:
                kids = tuple((c, done[id(ch)]) for c, ch in sorted(v.children.items()))
                leaf = n - v.leaf_id if v.is_leaf else -1
                done[id(v)] = (tuple(self.label_codes(v)), leaf, kids)
        return done[id(self.root)]

    def text_codes(self) -> list[int]:
        return list(reversed(self.buf))

    def suffix_char(self, leaf_id, k):
        """Character k of the suffix whose leaf id (right index) is leaf_id;
        the sentinel at k == leaf_id."""
        return self.char(leaf_id - 1 - k)

    def audit_links(self):
        """Verify every stored a-link against the definition, plus the
        monotonicity of link sets along root paths."""
        # a representative leaf under every node
        rep = {}
        order = self.nodes()
        for v in reversed(order):
            if v.is_leaf:
                rep[id(v)] = v.leaf_id
            else:
                rep[id(v)] = rep[id(next(iter(v.children.values())))]
        for v in order:
            if v.parent is not None and v.parent is not self.root:
                for b in v.links:
                    assert b in v.parent.links, "link sets must be monotone upward"
            for b, (t, hard) in v.links.items():
                depth = v.sdepth + 1
                if hard:
                    assert t.sdepth == depth, "hard link must aim at a node"
                else:
                    assert t.parent.sdepth < depth < t.sdepth, "soft locus outside edge"
                    assert (v, b) in t.rev_soft, "reverse soft list out of sync"
                # contents: b*str(v) must equal the first depth chars of str(t)
                src, dst = rep[id(v)], rep[id(t)]
                assert self.suffix_char(dst, 0) == b
                for k in range(v.sdepth):
                    assert self.suffix_char(dst, k + 1) == self.suffix_char(src, k)


class NaiveSuffixTree:
    """Independent oracle: plain compacted trie grown by inserting each new
    suffix with a character-by-character walk from the root."""

    def __init__(self):
        self.buf: list[int] = []
        self.n = 0
        root = _ONode(None, 0, 1, 0)
        root.children[SENTINEL] = _ONode(root, -1, -1, 1, leaf_id=0)
        self.root = root

    def char(self, pos):
        return self.buf[pos] if pos >= 0 else SENTINEL

    def prepend(self, a: int):
        n = self.n
        self.buf.append(a)
        # walk the new suffix (positions n, n-1, ..., -1) from the root
        v = self.root
        pos = n
        while True:
            child = v.children.get(self.char(pos))
            if child is None:
                v.children[self.char(pos)] = _ONode(v, pos, -1, n + 2, leaf_id=n + 1)
                break
            k = 0
            while k < child.label_len and self.char(child.hi - k) == self.char(pos - k):
                k += 1
            if k == child.label_len:
                v = child
                pos -= k
                continue
            # split and attach
            mid = _ONode(v, child.hi, child.hi - k + 1, v.sdepth + k)
            v.children[self.char(child.hi)] = mid
            child.hi -= k
            child.parent = mid
            mid.children[self.char(child.hi)] = child
            mid.children[self.char(pos - k)] = _ONode(mid, pos - k, -1, n + 2, leaf_id=n + 1)
            break
        self.n = n + 1

    canonical = OnlineSuffixTree.canonical
    label_codes = OnlineSuffixTree.label_codes
    nodes = OnlineSuffixTree.nodes


class FmaTree:
    """Fringe marked-ancestor structure: the marked set only grows downward
    from the root, queries return the lowest marked ancestor.

    Realized with per-node shortcut pointers compressed toward the fringe;
    a shortcut is followed only while its target is unmarked, which the
    downward-growth of marks makes safe (a marked node's ancestors are all
    marked, so an unmarked target proves the whole skipped stretch is still
    unmarked)."""

    def __init__(self):
        self.parent = [-1]
        self.marked = [False]
        self.skip: list[int | None] = [None]
        self.ROOT = 0

    def _new(self, parent):
        self.parent.append(parent)
        self.marked.append(False)
        self.skip.append(None)
        return len(self.parent) - 1

    def insert_leaf(self, parent: int) -> int:
        """New unmarked leaf below `parent`."""
        return self._new(parent)

    def insert_middle(self, child: int) -> int:
        """New node in the middle of the edge into `child`; it adopts the
        marked status of its (upper) parent."""
        p = self.parent[child]
        m = self._new(p)
        self.marked[m] = self.marked[p]
        self.parent[child] = m
        return m

    def mark(self, v: int):
        p = self.parent[v]
        if v != self.ROOT and not self.marked[p]:
            raise MarkOrderViolationError(f"parent of {v} is not marked")
        self.marked[v] = True

    def query(self, v: int):
        """Lowest marked ancestor of v (v counts), or None if none exists."""
        cur = v
        visited = []
        while cur != -1 and not self.marked[cur]:
            visited.append(cur)
            s = self.skip[cur]
            if s is not None and not self.marked[s]:
                cur = s
            else:
                cur = self.parent[cur]
        if visited and cur != -1:
            fringe = visited[-1]
            for x in visited:
                if x != fringe:
                    self.skip[x] = fringe
        return None if cur == -1 else cur
