"""Weighted exponential search trees.

A level-L tree keeps total weight below 2*f(L+1) for f(L) = floor(2^(1.5^L)).
Splitter elements sit in a static predecessor structure; the children between
consecutive splitters are trees one level lower.  Trees of level <= 1 are
plain sorted arrays (f(0) = f(1) = 2 makes the recursion degenerate there).
Splits are eager and atomic: the amortized variant.

Supported: weight-1 insert, handle-based weight increase by one, weighted
predecessor search.  No deletions, no weight decreases.
"""

from __future__ import annotations

from math import isqrt

from .errors import DuplicateKeyError, InvalidHandleError
from .instrument import GLOBAL
from .predkit import LayeredStaticPredecessor, StaticPredecessor


def _capacity_table() -> list[int]:
    # f(L) = floor(2^(1.5^L)) = isqrt applied L times to 2^(3^L)
    table = []
    level = 0
    while True:
        v = 1 << (3 ** level)
        for _ in range(level):
            v = isqrt(v)
        table.append(v)
        if v > 1 << 66:
            return table
        level += 1


CAPACITY = _capacity_table()
MAX_LEVEL = len(CAPACITY) - 1


def capacity(level: int) -> int:
    return CAPACITY[min(level, MAX_LEVEL)]


class ElementHandle:
    """Record for one stored element; `home` tracks the node (or base
    container) currently holding it and is updated whenever it moves."""

    __slots__ = ("key", "weight", "home")

    def __init__(self, key: int):
        self.key = key
        self.weight = 1
        self.home = None

    def __repr__(self):
        return f"ElementHandle(key={self.key}, weight={self.weight})"


class _Base:
    """Level-<=1 tree: sorted array with linear scan, weight < 2*f(2)."""

    __slots__ = ("items", "weight", "parent")
    level = 1

    def __init__(self, items, parent=None):
        self.items = items
        self.weight = sum(e.weight for e in items)
        self.parent = parent
        for e in items:
            e.home = self


class _Node:
    """Level->=2 tree: splitters + one child slot between/around each."""

    __slots__ = ("level", "weight", "splitters", "children", "pred", "slot_of", "parent")

    def __init__(self, level, splitters, children, u, splitter_kind, parent=None):
        self.level = level
        self.splitters = splitters
        self.children = children
        self.parent = parent
        self.weight = sum(e.weight for e in splitters) + sum(
            c.weight for c in children if c is not None
        )
        for e in splitters:
            e.home = self
        for c in children:
            if c is not None:
                c.parent = self
        self._refresh(u, splitter_kind)

    def _refresh(self, u, splitter_kind):
        keys = [e.key for e in self.splitters]
        cls = LayeredStaticPredecessor if splitter_kind == "layered" else StaticPredecessor
        self.pred = cls(keys, u)
        self.slot_of = {k: i for i, k in enumerate(keys)}


class WexpTree:
    """Weighted predecessor structure over integer keys in [0, u)."""

    def __init__(self, u: int, splitter_kind: str = "static"):
        self.u = u
        self.splitter_kind = splitter_kind
        self.root = _Base([])
        self.size = 0

    # ------------------------------------------------------------------ ops

    def insert(self, key: int) -> ElementHandle:
        """Insert `key` with weight one; returns its handle."""
        node = self.root
        while isinstance(node, _Node):
            hit = node.pred.query(key)
            if hit == key:
                raise DuplicateKeyError(f"key {key} already present")
            idx = node.slot_of[hit] + 1 if hit is not None else 0
            child = node.children[idx]
            if child is None:
                child = self._materialize(node, idx)
            node = child
        elem = ElementHandle(key)
        i = 0
        items = node.items
        while i < len(items) and items[i].key < key:
            i += 1
        if i < len(items) and items[i].key == key:
            raise DuplicateKeyError(f"key {key} already present")
        items.insert(i, elem)
        elem.home = node
        self.size += 1
        self._bump(node)
        return elem

    def increase(self, handle: ElementHandle) -> None:
        """Increase the weight of `handle`'s element by one."""
        self._validate(handle)
        handle.weight += 1
        self._bump(handle.home)

    def keys(self) -> list[int]:
        """All stored keys, unordered; O(size)."""
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, _Base):
                out.extend(e.key for e in node.items)
            else:
                out.extend(e.key for e in node.splitters)
                stack.extend(c for c in node.children if c is not None)
        return out

    def pred(self, x: int):
        """(key, weight) of the largest key <= x, or None."""
        node = self.root
        best = None
        while isinstance(node, _Node):
            GLOBAL.wexp_levels_descended += 1
            hit = node.pred.query(x)
            if hit is not None:
                e = node.splitters[node.slot_of[hit]]
                if hit == x:
                    return (e.key, e.weight)
                best = e
                child = node.children[node.slot_of[hit] + 1]
            else:
                child = node.children[0]
            if child is None:
                break
            node = child
        if isinstance(node, _Base):
            GLOBAL.wexp_levels_descended += 1
            found = None
            for e in node.items:
                if e.key <= x:
                    found = e
                else:
                    break
            if found is not None:
                return (found.key, found.weight)
        return None if best is None else (best.key, best.weight)

    # ------------------------------------------------------------ internals

    def _validate(self, handle):
        home = handle.home
        ok = False
        if isinstance(home, _Base):
            ok = handle in home.items
        elif isinstance(home, _Node):
            idx = home.slot_of.get(handle.key)
            ok = idx is not None and home.splitters[idx] is handle
        if not ok:
            raise InvalidHandleError("handle does not belong to this tree")
        node = home
        while node.parent is not None:
            node = node.parent
        if node is not self.root:
            raise InvalidHandleError("handle does not belong to this tree")

    def _materialize(self, parent, idx):
        """Create an empty child chain down to a base container."""
        child_level = parent.level - 1
        top = None
        if child_level >= 2:
            node = None
            for lv in range(child_level, 1, -1):
                nxt = _Node(lv, [], [None], self.u, self.splitter_kind)
                if node is None:
                    top = nxt
                else:
                    node.children[0] = nxt
                    nxt.parent = node
                node = nxt
            base = _Base([], parent=node)
            node.children[0] = base
        else:
            top = base = _Base([])
        parent.children[idx] = top
        top.parent = parent
        return base

    def _bump(self, node):
        """Propagate a +1 weight from `node` to the root, splitting any tree
        whose total weight reaches 2*f(level+1)."""
        while node is not None:
            node.weight += 1
            parent = node.parent
            if node.weight >= 2 * capacity(node.level + 1):
                self._split(node)
            node = parent

    def _split(self, node):
        GLOBAL.splits += 1
        level = node.level
        f_hi = capacity(level + 1)
        f_lo = capacity(level)
        need = f_hi - f_lo
        cap = f_hi + f_lo
        if isinstance(node, _Base):
            cands = node.items
            child_w = [0] * (len(cands) + 1)
        else:
            cands = node.splitters
            child_w = [c.weight if c is not None else 0 for c in node.children]
        total = node.weight
        w_pref = child_w[0]  # weight of everything left of candidate i (1-based)
        chosen = -1
        for i in range(1, len(cands) + 1):
            w_e = cands[i - 1].weight
            w_suf = total - w_pref - w_e
            if (w_pref < cap and w_suf < cap
                    and w_pref + w_e >= need and w_e + w_suf >= need):
                chosen = i
                break
            w_pref += w_e + child_w[i]
        if chosen < 0:
            raise AssertionError("no valid splitter found; invariants broken")

        e = cands[chosen - 1]
        parent = node.parent
        if isinstance(node, _Base):
            left = _Base(node.items[: chosen - 1]) if chosen > 1 else None
            right = _Base(node.items[chosen:]) if chosen < len(cands) else None
        else:
            ls, lc = node.splitters[: chosen - 1], node.children[:chosen]
            rs, rc = node.splitters[chosen:], node.children[chosen:]
            left = (_Node(level, ls, lc, self.u, self.splitter_kind)
                    if ls or any(c is not None for c in lc) else None)
            right = (_Node(level, rs, rc, self.u, self.splitter_kind)
                     if rs or any(c is not None for c in rc) else None)

        if parent is None:
            new_root = _Node(level + 1, [e], [left, right], self.u, self.splitter_kind)
            self.root = new_root
        else:
            j = parent.children.index(node)
            parent.children[j : j + 1] = [left, right]
            parent.splitters.insert(j, e)
            e.home = parent
            if left is not None:
                left.parent = parent
            if right is not None:
                right.parent = parent
            parent._refresh(self.u, self.splitter_kind)


def _floor_lg(x: int) -> int:
    return x.bit_length() - 1


def min_splitter_level(weight: int) -> int:
    """Lowest level an element of this weight may live at (depth bound)."""
    return max(0, _floor_lg(_floor_lg(max(weight, 4))) - 1)


def audit_wexp(tree: WexpTree) -> None:
    """Full structural audit; raises AssertionError on any violation.

    Checks: weight bound (condition 1) at every level, key ordering
    (condition 3), group weights (condition 4), the splitter-set size bound
    with explicit constant 4, levels decreasing by one per child step,
    recorded weights versus recomputed subtree weights, the weight threshold
    forcing heavy elements up (2*f of the home level), the depth consequence
    of the weight/level relation, and handle links.
    """

    def walk(node, parent, lo, hi):
        """Returns (weight, element count); lo < keys <= hi bounds (exclusive)."""
        assert node.parent is parent
        if isinstance(node, _Base):
            assert node.level == 1
            w = 0
            last = lo
            for e in node.items:
                assert last is None or e.key > last
                assert hi is None or e.key < hi
                assert e.home is node and e.weight >= 1
                assert e.weight < 2 * capacity(2), "overweight element in base container"
                assert 1 >= min_splitter_level(e.weight)
                last = e.key
                w += e.weight
            assert w == node.weight
            assert w < 2 * capacity(2)
            return w
        assert isinstance(node, _Node)
        lv = node.level
        assert lv >= 2
        assert len(node.children) == len(node.splitters) + 1
        f_lv, f_lo, f_hi = capacity(lv), capacity(lv - 1), capacity(lv + 1)
        if node.splitters:
            assert len(node.splitters) <= 4 * f_hi // (f_lv - f_lo)
        total = 0
        prev_key = lo
        for i, e in enumerate(node.splitters):
            assert prev_key is None or e.key > prev_key
            assert e.home is node and e.weight >= 1
            assert e.weight < 2 * f_hi
            assert lv >= min_splitter_level(e.weight)
            child = node.children[i]
            cw = 0
            if child is not None:
                assert child.level == lv - 1, "levels must decrease by one"
                cw = walk(child, node, prev_key, e.key)
            total += cw + e.weight
            prev_key = e.key
        child = node.children[-1]
        if child is not None:
            assert child.level == lv - 1
            total += walk(child, node, prev_key, hi)
        assert total == node.weight
        assert node.weight < 2 * f_hi, "condition 1 violated"
        assert sorted(node.slot_of) == [e.key for e in node.splitters]
        # condition 4: each group {e_i} u X_i u {e_i+1} is heavy enough
        for i in range(len(node.splitters) - 1):
            x = node.children[i + 1]
            w = (node.splitters[i].weight + node.splitters[i + 1].weight
                 + (x.weight if x is not None else 0))
            assert w > f_lv - f_lo, "condition 4 violated"
        return total

    assert tree.root.parent is None
    walk(tree.root, None, None, None)

