"""Public dynamic bitvector with query-adaptive internals.

Queries mutate per-node counters and may flatten subtrees, so every
operation needs exclusive access.  Updates reset the counters along their
path and can trigger a whole-structure rebuild when the bit-length class of
n leaves its hysteresis band.
"""

from dataclasses import dataclass

from .bitio import bits01_to_str, int_from_bits01
from .engine import BIT_KIT, InternalNode, LifetimeStats, Tree, TreeConfig
from .leaf import StaticLeaf
from .params import ceil_log2, compute_params, rebuild_due


@dataclass(frozen=True)
class SpaceReport:
    """Logical space consumption measured by a structural walk.

    Integers are charged log_n bits each (sums, pointers, counters), rank
    directory block counts 9 bits, payload padding to whole chunks counts as
    slack.  Process-level memory is out of scope.
    """

    payload_bits: int
    dynamic_leaf_slack_bits: int
    static_index_bits: int
    internal_node_bits: int
    overhead_ratio: float

    @property
    def total_bits(self):
        return (self.payload_bits + self.dynamic_leaf_slack_bits
                + self.static_index_bits + self.internal_node_bits)


def _tree_config(params):
    return TreeConfig(a=params.a, leaf_cap=params.b,
                      flatten_cap=params.flatten_cap, log_n=params.log_n)


class AdaptiveBitvector:
    """Dynamic bitvector over positions 1..n with access/rank/select and
    insert/delete/write; adapts to query-heavy workloads by flattening."""

    def __init__(self):
        self.n = 0
        self._ones = 0
        self.params = compute_params(ceil_log2(0))
        self._stats = LifetimeStats()
        self._tree = Tree(_tree_config(self.params), BIT_KIT, self._stats)

    @classmethod
    def from_bits(cls, bits):
        """Bulk-load from a '0101' string or an iterable of bit ints."""
        if isinstance(bits, str):
            x, n = int_from_bits01(bits), len(bits)
        else:
            x, n = 0, 0
            for v in bits:
                x |= (v & 1) << n
                n += 1
        return cls.from_payload(x, n)

    @classmethod
    def from_payload(cls, x, n):
        """Bulk-load from a payload int whose LSB is position 1."""
        bv = cls()
        if x >> n:
            raise ValueError(f"payload has bits beyond length {n}")
        bv.params = compute_params(ceil_log2(n))
        bv._tree.cfg = _tree_config(bv.params)
        bv._tree.rebuild((x, n), record=False)
        bv.n = n
        bv._ones = x.bit_count()
        return bv

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"AdaptiveBitvector(n={self.n}, ones={self._ones})"

    @property
    def ones(self):
        return self._ones

    # ----- queries -----------------------------------------------------------

    def _check_index(self, i, lo, hi, what):
        if not lo <= i <= hi:
            raise ValueError(f"{what} index {i} out of range [{lo}, {hi}]")

    def access(self, i):
        self._check_index(i, 1, self.n, "access")
        out, _ = self._tree.access(i)
        return out

    def rank(self, bitval, i):
        if bitval not in (0, 1):
            raise ValueError(f"bit value must be 0 or 1, got {bitval}")
        self._check_index(i, 0, self.n, "rank")
        if i == 0:
            self._stats.queries_total += 1
            return 0
        r1, _ = self._tree.rank1(i)
        return r1 if bitval else i - r1

    def select(self, bitval, j):
        """Position of the j-th bitval, or None when fewer occurrences exist."""
        if bitval not in (0, 1):
            raise ValueError(f"bit value must be 0 or 1, got {bitval}")
        if j < 1:
            raise ValueError(f"select rank {j} out of range [1, ...]")
        total = self._ones if bitval else self.n - self._ones
        if j > total:
            self._stats.queries_total += 1
            return None
        pos, _ = self._tree.select(bitval, j)
        return pos

    def access_and_rank1(self, i):
        """(bit at i, rank1(i)) in a single descent; counts as one query."""
        self._check_index(i, 1, self.n, "access")
        out, _ = self._tree.access_and_rank1(i)
        return out

    # ----- updates -----------------------------------------------------------

    def insert(self, i, v):
        self._check_index(i, 1, self.n + 1, "insert")
        if v not in (0, 1):
            raise ValueError(f"bit value must be 0 or 1, got {v}")
        self._tree.apply_update("insert", i, v)
        self.n += 1
        self._ones += v
        self._maybe_rebuild()

    def delete(self, i):
        self._check_index(i, 1, self.n, "delete")
        removed, _, _ = self._tree.apply_update("delete", i)
        self.n -= 1
        self._ones -= removed
        self._maybe_rebuild()
        return removed

    def write(self, i, v):
        """Overwrite position i; an update for counter purposes even when
        the stored value does not change."""
        self._check_index(i, 1, self.n, "write")
        if v not in (0, 1):
            raise ValueError(f"bit value must be 0 or 1, got {v}")
        prev, _, _ = self._tree.apply_update("write", i, v)
        self._ones += v - prev
        self._maybe_rebuild()
        return prev

    def insert_and_rank(self, i, v):
        """Insert and return rank_v(i) measured just after the insert."""
        self._check_index(i, 1, self.n + 1, "insert")
        if v not in (0, 1):
            raise ValueError(f"bit value must be 0 or 1, got {v}")
        _, r1, _ = self._tree.apply_update("insert", i, v)
        self.n += 1
        self._ones += v
        self._maybe_rebuild()
        return r1 if v else i - r1

    def delete_and_rank(self, i):
        """Delete and return (removed, rank_removed(i) just before)."""
        self._check_index(i, 1, self.n, "delete")
        removed, r1, _ = self._tree.apply_update("delete", i)
        self.n -= 1
        self._ones -= removed
        self._maybe_rebuild()
        return removed, (r1 if removed else i - r1)

    def _maybe_rebuild(self):
        cur = ceil_log2(self.n)
        if rebuild_due(cur, self.params.log_n):
            self.params = compute_params(cur)
            self._tree.cfg = _tree_config(self.params)
            self._tree.rebuild()

    # ----- introspection -------------------------------------------------------

    def stats(self):
        return self._stats

    def check(self):
        """Structural validation; empty list means healthy."""
        problems = self._tree.validate()
        if self._tree.size() != self.n:
            problems.append(f"facade: n={self.n} but tree holds {self._tree.size()}")
        root = self._tree.root
        ones = sum(root.ones) if type(root) is InternalNode else root.count1()
        if ones != self._ones:
            problems.append(f"facade: cached ones {self._ones} but tree holds {ones}")
        cur = ceil_log2(self.n)
        if rebuild_due(cur, self.params.log_n):
            problems.append(
                f"facade: params built for log_n={self.params.log_n}, current {cur}")
        for size, cap in self._stats.flatten_sizes:
            if size > cap:
                problems.append(f"facade: flatten of {size} units exceeded cap {cap}")
        return problems

    def space_report(self):
        log_n = self.params.log_n
        slack = 0
        static_bits = 0
        internal_bits = 0
        stack = [self._tree.root]
        while stack:
            node = stack.pop()
            if type(node) is InternalNode:
                arity = len(node.children)
                internal_bits += arity * 4 * log_n + 2 * log_n
                stack.extend(node.children)
            elif type(node) is StaticLeaf:
                static_bits += (len(node.buf) * 8 - node.length)
                static_bits += (len(node.scount) + len(node.sel1) + len(node.sel0)) * log_n
                static_bits += len(node.brel) * 9
                static_bits += 2 * log_n
            else:
                slack += len(node.buf) * 8 - node.length
        overhead = (slack + static_bits + internal_bits) / max(self.n, 1)
        return SpaceReport(
            payload_bits=self.n,
            dynamic_leaf_slack_bits=slack,
            static_index_bits=static_bits,
            internal_node_bits=internal_bits,
            overhead_ratio=overhead,
        )

    # ----- export ----------------------------------------------------------------

    def payload_int(self):
        """Whole payload as an int, position 1 at the LSB; no counters touched."""
        x, n = self._tree.collect_payload()
        assert n == self.n
        return x

    def payload_bytes(self):
        return self.payload_int().to_bytes((self.n + 7) // 8, "little") if self.n else b""

    def to01(self):
        return bits01_to_str(self.payload_int(), self.n)

    def frozen_snapshot(self):
        """Whole payload as one immutable indexed leaf (None when empty);
        the live structure is left untouched."""
        return self._tree.flatten_all()
