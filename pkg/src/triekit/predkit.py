"""Deterministic dictionary and predecessor structures.

Building blocks used everywhere else: a constant-probe deterministic
dictionary, a sampled x-fast static predecessor, a two-level indirection
wrapper over it, and a dynamic predecessor.  No randomized seeds anywhere;
identical inputs always produce identical tables.
"""

from __future__ import annotations

from .errors import DuplicateKeyError, InvalidInputError
from .instrument import GLOBAL

_M64 = (1 << 64) - 1
_EMPTY = -1


def _mix(x: int) -> int:
    """64-bit bijective mixer (splitmix64 finalizer, fixed constants)."""
    x &= _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


class DetDictionary:
    """Static dictionary with a deterministic build and O(1)-probe lookups.

    Two levels: keys are split into buckets by a fixed mixing function, then
    each bucket deterministically searches a displacement d so that the
    multiply-shift with multiplier 2d+1 places its keys on distinct free
    slots.  A lookup touches the displacement cell and one slot cell.
    Construction may retry with a doubled table in adversarial cases.
    """

    __slots__ = ("k", "shift", "mask", "disp", "slot_keys", "slot_vals",
                 "cell_probes", "probe_field")

    def __init__(self, pairs, probe_field: str = "dict_probes"):
        items = list(pairs)
        keys = [k for k, _ in items]
        if len(set(keys)) != len(keys):
            raise DuplicateKeyError("duplicate key in dictionary build")
        self.k = len(items)
        self.cell_probes = 0
        self.probe_field = probe_field
        bits = max(2, (2 * self.k - 1).bit_length()) if self.k else 1
        while not self._try_build(items, bits):
            bits += 1

    def _try_build(self, items, bits) -> bool:
        m = 1 << bits
        self.shift = 64 - bits
        self.mask = m - 1
        buckets: dict[int, list] = {}
        for key, val in items:
            buckets.setdefault(_mix(key) & self.mask, []).append((key, val))
        disp = [0] * m
        slot_keys = [_EMPTY] * m
        slot_vals = [None] * m
        cap = 4 * m + 64
        for b in sorted(buckets, key=lambda b: (-len(buckets[b]), b)):
            group = buckets[b]
            mixed = [_mix(key) for key, _ in group]
            for d in range(cap):
                mult = 2 * d + 1
                slots = [((mx * mult) & _M64) >> self.shift for mx in mixed]
                if len(set(slots)) == len(slots) and all(slot_keys[s] == _EMPTY for s in slots):
                    disp[b] = d
                    for s, (key, val) in zip(slots, group):
                        slot_keys[s] = key
                        slot_vals[s] = val
                    break
            else:
                return False
        self.disp = disp
        self.slot_keys = slot_keys
        self.slot_vals = slot_vals
        return True

    def lookup(self, key: int):
        """Stored value for `key`, or None when absent."""
        if self.probe_field:
            setattr(GLOBAL, self.probe_field, getattr(GLOBAL, self.probe_field) + 1)
        if self.k == 0:
            return None
        mx = _mix(key)
        d = self.disp[mx & self.mask]
        self.cell_probes += 1
        s = ((mx * (2 * d + 1)) & _M64) >> self.shift
        self.cell_probes += 1
        if self.slot_keys[s] != key:
            return None
        self.cell_probes += 1
        return self.slot_vals[s]

    def __contains__(self, key: int) -> bool:
        return self.lookup(key) is not None


def dict_build(pairs) -> DetDictionary:
    return DetDictionary(pairs)


def dict_lookup(d: DetDictionary, key: int):
    return d.lookup(key)


class StaticPredecessor:
    """Static predecessor over sorted keys: sampled x-fast plus block search.

    Every `sample_every`-th key (default: one per ceil(lg u) keys) goes into
    an x-fast table of bit prefixes held in deterministic dictionaries; a
    query binary-searches the prefix lengths, then binary-searches the block
    of keys between two adjacent samples.
    """

    __slots__ = ("keys", "u", "w", "q", "samples", "levels", "elem_probes")

    def __init__(self, keys, u: int, sample_every: int | None = None):
        self.keys = list(keys)
        for a, b in zip(self.keys, self.keys[1:]):
            if a >= b:
                raise InvalidInputError("keys must be strictly increasing")
        if self.keys and (self.keys[0] < 0 or self.keys[-1] >= u):
            raise InvalidInputError("keys must lie in [0, u)")
        self.u = u
        self.w = max(1, (u - 1).bit_length())
        self.q = sample_every if sample_every else max(1, self.w)
        self.samples = self.keys[:: self.q]
        self.elem_probes = 0
        # levels[l] maps the l-bit prefix to the (lo, hi) sample index range
        self.levels = []
        for level in range(self.w + 1):
            table: dict[int, tuple[int, int]] = {}
            for i, key in enumerate(self.samples):
                p = key >> (self.w - level)
                lo, hi = table.get(p, (i, i))
                table[p] = (min(lo, i), max(hi, i))
            self.levels.append(DetDictionary(table.items(), probe_field="static_pred_probes"))

    def query(self, x: int):
        """max{y <= x | y stored}, or None below the minimum."""
        GLOBAL.static_pred_queries += 1
        before = GLOBAL.static_pred_probes
        try:
            return self._query(x)
        finally:
            self.elem_probes += GLOBAL.static_pred_probes - before

    def _query(self, x: int):
        if not self.keys or x < self.keys[0]:
            return None
        if x >= self.keys[-1]:
            return self.keys[-1]
        # longest stored prefix of x, by binary search over prefix lengths
        lo_lv, hi_lv = 0, self.w  # level 0 always present
        best = self.levels[0].lookup(0)
        while lo_lv < hi_lv:
            mid = (lo_lv + hi_lv + 1) // 2
            hit = self.levels[mid].lookup(x >> (self.w - mid))
            if hit is not None:
                best = hit
                lo_lv = mid
            else:
                hi_lv = mid - 1
        level = lo_lv
        lo, hi = best
        if level == self.w:
            i = lo  # x itself is a sample
        elif (x >> (self.w - level - 1)) & 1:
            i = hi  # samples under this prefix all start with bit 0 here
        else:
            i = lo - 1  # they all start with bit 1, hence exceed x
        # block of keys between samples i and i+1
        lo_k = i * self.q
        hi_k = min(lo_k + self.q, len(self.keys)) - 1
        while lo_k < hi_k:
            mid = (lo_k + hi_k + 1) // 2
            GLOBAL.static_pred_probes += 1
            if self.keys[mid] <= x:
                lo_k = mid
            else:
                hi_k = mid - 1
        return self.keys[lo_k]


def static_pred_build(keys, u, sample_every=None) -> StaticPredecessor:
    return StaticPredecessor(keys, u, sample_every)


def static_pred_query(p: StaticPredecessor, x: int):
    return p.query(x)


class LayeredStaticPredecessor:
    """Indirection wrapper: a top structure over ~sqrt(k) evenly spaced keys
    selects a group, the group structure answers, and the leading sample
    corrects the boundary when the group holds no key <= x.
    """

    __slots__ = ("keys", "top", "groups", "group_of")

    def __init__(self, keys, u: int):
        self.keys = list(keys)
        for a, b in zip(self.keys, self.keys[1:]):
            if a >= b:
                raise InvalidInputError("keys must be strictly increasing")
        k = len(self.keys)
        g = max(1, int(round(k ** 0.5)))
        tops = self.keys[::g]
        self.top = StaticPredecessor(tops, u)
        self.group_of = {key: i for i, key in enumerate(tops)}
        self.groups = []
        for i in range(len(tops)):
            block = self.keys[i * g + 1 : (i + 1) * g]
            self.groups.append(StaticPredecessor(block, u) if block else None)

    def query(self, x: int):
        t = self.top.query(x)
        if t is None:
            return None
        i = self.group_of[t]
        grp = self.groups[i]
        ans = grp.query(x) if grp is not None else None
        return t if ans is None else ans


def layered_pred_build(keys, u) -> LayeredStaticPredecessor:
    return LayeredStaticPredecessor(keys, u)


def layered_pred_query(p: LayeredStaticPredecessor, x: int):
    return p.query(x)


class DynamicPredecessor:
    """Insert-only predecessor over [0, u), realized as a wexponential
    search tree with every weight forced to one.
    """

    __slots__ = ("u", "_tree")

    def __init__(self, u: int):
        from .wexp import WexpTree

        self.u = u
        self._tree = WexpTree(u)

    def insert(self, key: int):
        """Idempotent insert of `key`."""
        try:
            self._tree.insert(key)
        except DuplicateKeyError:
            pass

    def query(self, x: int):
        GLOBAL.dyn_pred_probes += 1
        hit = self._tree.pred(x)
        return None if hit is None else hit[0]

    def keys(self) -> list[int]:
        return self._tree.keys()

    def __len__(self):
        return self._tree.size
