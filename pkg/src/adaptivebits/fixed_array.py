"""Adaptive dynamic array of fixed-width cells.

Runs the same tree engine as the bitvector, with cells as the unit: leaves
hold whole cells, partial sums track sizes only, and there are no bit
aggregates.  Reads and writes are queries (they increment counters, may
flatten, and never reset anything); a write lands in place even inside a
static leaf, which carries no directory to invalidate.  Only insert and
delete are updates.
"""

from dataclasses import dataclass

from .engine import InternalNode, LifetimeStats, Tree, TreeConfig
from .params import ceil_log2, compute_params, rebuild_due


class CellDynamicLeaf:
    """Mutable run of cells."""

    __slots__ = ("cells",)

    def __init__(self, cells):
        self.cells = cells

    @property
    def length(self):
        return len(self.cells)

    def access(self, i):
        return self.cells[i - 1]

    def write(self, i, v):
        prev = self.cells[i - 1]
        self.cells[i - 1] = v
        return prev

    def insert(self, i, v):
        self.cells.insert(i - 1, v)

    def delete(self, i):
        return self.cells.pop(i - 1)


class CellStaticLeaf:
    """Flattened run of cells: no structural mutation, but writes go in
    place since there is no precomputed index to invalidate."""

    __slots__ = ("cells", "level")

    def __init__(self, cells, level):
        self.cells = cells
        self.level = level

    @property
    def length(self):
        return len(self.cells)

    def access(self, i):
        return self.cells[i - 1]

    def write(self, i, v):
        prev = self.cells[i - 1]
        self.cells[i - 1] = v
        return prev


class CellKit:
    """Leaf toolkit for cell payloads, exchanged as plain lists."""

    track_ones = False

    def __init__(self, cell_width):
        self.cell_width = cell_width

    @staticmethod
    def is_static(node):
        return type(node) is CellStaticLeaf

    @staticmethod
    def length(leaf):
        return len(leaf.cells)

    @staticmethod
    def ones(leaf):
        return 0

    @staticmethod
    def payload(leaf):
        return leaf.cells

    @staticmethod
    def empty():
        return []

    @staticmethod
    def plen(p):
        return len(p)

    @staticmethod
    def pones(p):
        return 0

    @staticmethod
    def pslice(p, lo, hi):
        return p[lo:hi]

    @staticmethod
    def concat(parts):
        out = []
        for part in parts:
            out.extend(part)
        return out

    @staticmethod
    def chunks(p, sizes):
        out = []
        off = 0
        for s in sizes:
            out.append(p[off:off + s])
            off += s
        return out

    @staticmethod
    def make_dynamic(p):
        return CellDynamicLeaf(list(p))

    @staticmethod
    def make_static(p, level):
        return CellStaticLeaf(list(p), level)

    def check_leaf(self, leaf):
        limit = 1 << self.cell_width
        if any(not 0 <= v < limit for v in leaf.cells):
            return [f"cell leaf holds a value outside [0, 2**{self.cell_width})"]
        return []


@dataclass(frozen=True)
class ArrayParams:
    """Cell-granular tuning: leaf capacity scales the word-level budget
    64*b/log_n down by the cell width, never below 4 cells."""

    log_n: int
    a: int
    cap: int
    flatten_cap: int


def array_params(log_n, cell_width):
    base = compute_params(log_n)
    leaf_bits = (64 * base.b) // base.log_n
    cap = max(4, leaf_bits // cell_width)
    flatten_cap = max(cap, (1 << base.log_n) // base.log_n)
    return ArrayParams(log_n=base.log_n, a=base.a, cap=cap, flatten_cap=flatten_cap)


def _tree_config(params):
    return TreeConfig(a=params.a, leaf_cap=params.cap,
                      flatten_cap=params.flatten_cap, log_n=params.log_n)


class AdaptiveArray:
    """Dynamic array of cell_width-bit values at positions 1..n."""

    def __init__(self, cell_width):
        if not 1 <= cell_width <= 64:
            raise ValueError(f"cell width {cell_width} out of range [1, 64]")
        self.cell_width = cell_width
        self.n = 0
        self.params = array_params(ceil_log2(0), cell_width)
        self._stats = LifetimeStats()
        self._kit = CellKit(cell_width)
        self._tree = Tree(_tree_config(self.params), self._kit, self._stats)

    @classmethod
    def from_cells(cls, cell_width, values):
        arr = cls(cell_width)
        cells = list(values)
        limit = 1 << cell_width
        for v in cells:
            if not 0 <= v < limit:
                raise ValueError(f"value {v} does not fit in {cell_width} bits")
        arr.params = array_params(ceil_log2(len(cells)), cell_width)
        arr._tree.cfg = _tree_config(arr.params)
        arr._tree.rebuild(cells, record=False)
        arr.n = len(cells)
        return arr

    def __len__(self):
        return self.n

    def _check_index(self, i, lo, hi, what):
        if not lo <= i <= hi:
            raise ValueError(f"{what} index {i} out of range [{lo}, {hi}]")

    def _check_value(self, v):
        if not 0 <= v < (1 << self.cell_width):
            raise ValueError(f"value {v} does not fit in {self.cell_width} bits")

    # reads and writes are queries: counters grow, flattening may fire

    def read(self, i):
        self._check_index(i, 1, self.n, "read")
        out, _ = self._tree.access(i)
        return out

    def write(self, i, v):
        self._check_index(i, 1, self.n, "write")
        self._check_value(v)
        prev, _ = self._tree.write_through(i, v)
        return prev

    # inserts and deletes are updates: counters reset, statics split

    def insert(self, i, v):
        self._check_index(i, 1, self.n + 1, "insert")
        self._check_value(v)
        self._tree.apply_update("insert", i, v)
        self.n += 1
        self._maybe_rebuild()

    def delete(self, i):
        self._check_index(i, 1, self.n, "delete")
        removed, _, _ = self._tree.apply_update("delete", i)
        self.n -= 1
        self._maybe_rebuild()
        return removed

    def _maybe_rebuild(self):
        cur = ceil_log2(self.n)
        if rebuild_due(cur, self.params.log_n):
            self.params = array_params(cur, self.cell_width)
            self._tree.cfg = _tree_config(self.params)
            self._tree.rebuild()

    def stats(self):
        return self._stats

    def check(self):
        problems = self._tree.validate()
        if self._tree.size() != self.n:
            problems.append(f"facade: n={self.n} but tree holds {self._tree.size()}")
        cur = ceil_log2(self.n)
        if rebuild_due(cur, self.params.log_n):
            problems.append(
                f"facade: params built for log_n={self.params.log_n}, current {cur}")
        return problems

    def space_report(self):
        from .bitvector import SpaceReport

        log_n = self.params.log_n
        w = self.cell_width
        slack = 0
        static_bits = 0
        internal_bits = 0
        stack = [self._tree.root]
        while stack:
            node = stack.pop()
            if type(node) is InternalNode:
                # per child: one size entry plus one pointer, no bit sums
                internal_bits += len(node.children) * 2 * log_n + 2 * log_n
                stack.extend(node.children)
            else:
                used = len(node.cells) * w
                allocated = 64 * ((used + 63) // 64)
                if type(node) is CellStaticLeaf:
                    static_bits += allocated - used + 2 * log_n
                else:
                    slack += allocated - used
        payload = self.n * w
        overhead = (slack + static_bits + internal_bits) / max(payload, 1)
        return SpaceReport(
            payload_bits=payload,
            dynamic_leaf_slack_bits=slack,
            static_index_bits=static_bits,
            internal_node_bits=internal_bits,
            overhead_ratio=overhead,
        )

    def to_list(self):
        return list(self._tree.collect_payload())
