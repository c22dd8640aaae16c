"""Adaptive weight-balanced multiway tree over leaf blocks.

The tree routes queries and updates by per-child partial sums, counts the
queries that traverse each internal node, and converts ("flattens") a whole
subtree into one immutable indexed leaf once it has absorbed as many queries
as it has elements, provided it is not larger than the flatten cap.  An
update landing inside such a static leaf splits it back into a one-level
deeper mix of static children, recursively along the path to the update,
ending in small mutable leaves.

Weight balancing: a node at level l (leaves hang below level-1 nodes) covers
between a**l * cap / 4 and a**l * cap units, the root being exempt from the
lower bound.  Leaf overflow and underflow are corrected by halving and by
merge-then-maybe-halve, internal violations by cutting at the most balanced
child boundary or merging with a sibling.

The same machinery serves bit payloads (with ones/zeros sums for rank and
select routing) and fixed-width cell payloads (size sums only) through a
small leaf kit passed at construction.
"""

from dataclasses import dataclass

from .bitio import BitWriter, chunk_bytes_for, int_to_buf, read_bits
from .leaf import DynamicLeaf, StaticLeaf


@dataclass(frozen=True)
class TreeConfig:
    a: int            # arity base
    leaf_cap: int     # dynamic leaf capacity, in units
    flatten_cap: int  # largest flattenable subtree, in units
    log_n: int        # bit width charged per stored integer in space reports


class LifetimeStats:
    """Monotone operation and restructuring counters."""

    __slots__ = (
        "queries_total", "updates_total",
        "internal_visits", "query_visits", "update_visits",
        "flatten_count", "flatten_bits", "split_count", "split_bits",
        "rebuild_count", "flatten_sizes",
    )

    def __init__(self):
        self.queries_total = 0
        self.updates_total = 0
        self.internal_visits = 0
        self.query_visits = 0
        self.update_visits = 0
        self.flatten_count = 0
        self.flatten_bits = 0
        self.split_count = 0
        self.split_bits = 0
        self.rebuild_count = 0
        self.flatten_sizes = []

    @property
    def q_ratio(self):
        return self.queries_total / max(self.updates_total, 1)

    def snapshot(self):
        return {
            "m": self.queries_total,
            "u": self.updates_total,
            "internal_visits": self.internal_visits,
            "query_visits": self.query_visits,
            "update_visits": self.update_visits,
            "flatten_count": self.flatten_count,
            "flatten_bits": self.flatten_bits,
            "split_count": self.split_count,
            "split_bits": self.split_bits,
            "rebuild_count": self.rebuild_count,
        }


class InternalNode:
    """Routing node: children plus per-child size/ones/zeros partial sums.

    queries counts the queries that traversed this node since the last
    update through it (or since creation).  ones/zeros are None in trees
    whose units carry no bit aggregates.
    """

    __slots__ = ("level", "children", "sizes", "ones", "zeros", "queries", "size_total")

    def __init__(self, level, children, sizes, ones, zeros):
        self.level = level
        self.children = children
        self.sizes = sizes
        self.ones = ones
        self.zeros = zeros
        self.queries = 0
        self.size_total = sum(sizes)


class BitKit:
    """Leaf toolkit for bit payloads, exchanged as (int, nbits) pairs."""

    track_ones = True

    @staticmethod
    def is_static(node):
        return type(node) is StaticLeaf

    @staticmethod
    def length(leaf):
        return leaf.length

    @staticmethod
    def ones(leaf):
        return leaf.count1()

    @staticmethod
    def payload(leaf):
        return leaf.payload()

    @staticmethod
    def empty():
        return (0, 0)

    @staticmethod
    def plen(p):
        return p[1]

    @staticmethod
    def pones(p):
        return p[0].bit_count()

    @staticmethod
    def pslice(p, lo, hi):
        return ((p[0] >> lo) & ((1 << (hi - lo)) - 1), hi - lo)

    @staticmethod
    def concat(parts):
        w = BitWriter()
        for x, nbits in parts:
            w.append(x, nbits)
        buf, n = w.getvalue()
        return (int.from_bytes(buf, "little"), n)

    @staticmethod
    def chunks(p, sizes):
        """Cut a payload into consecutive pieces of the given sizes."""
        x, n = p
        data = x.to_bytes(chunk_bytes_for(n), "little")
        out = []
        off = 0
        for s in sizes:
            out.append((read_bits(data, off, s), s))
            off += s
        return out

    @staticmethod
    def make_dynamic(p):
        return DynamicLeaf.from_int(*p)

    @staticmethod
    def make_static(p, level):
        x, n = p
        return StaticLeaf(int_to_buf(x, n), n, level)

    @staticmethod
    def check_leaf(leaf):
        if type(leaf) is StaticLeaf:
            return leaf.self_check()
        problems = []
        if not leaf.storage_exact():
            problems.append("dynamic leaf: storage is not exactly ceil(len/64) chunks")
        x, n = leaf.payload()
        if x >> n:
            problems.append("dynamic leaf: payload has bits beyond its length")
        return problems


BIT_KIT = BitKit()


def route(arr, target):
    """Minimal k with prefix_sum(arr, k) >= target, plus the prefix before k.

    Returns None when target exceeds the total (select out of range).
    """
    acc = 0
    for k, x in enumerate(arr):
        nxt = acc + x
        if nxt >= target:
            return k, acc
        acc = nxt
    return None


def _route_acc(arr, other, target):
    """Route by arr, also accumulating the prefix of other before k."""
    acc = 0
    oacc = 0
    for k, x in enumerate(arr):
        if acc + x >= target:
            return k, acc, oacc
        acc += x
        oacc += other[k]
    return None


class Tree:
    """One adaptive tree instance; all operations need exclusive access."""

    __slots__ = ("root", "cfg", "kit", "stats", "events")

    def __init__(self, cfg, kit, stats=None, root=None):
        self.cfg = cfg
        self.kit = kit
        self.stats = stats if stats is not None else LifetimeStats()
        self.root = root if root is not None else kit.make_dynamic(kit.empty())
        self.events = None  # tests may set this to a list to record rebalances

    # ----- basic accessors -------------------------------------------------

    def size(self):
        node = self.root
        if type(node) is InternalNode:
            return node.size_total
        return self.kit.length(node)

    def _level_cap(self, level):
        return self.cfg.a ** level * self.cfg.leaf_cap

    def _emit(self, *event):
        if self.events is not None:
            self.events.append(event)

    # ----- queries ----------------------------------------------------------

    def _after_query(self, path):
        st = self.stats
        st.queries_total += 1
        st.query_visits += len(path)
        st.internal_visits += len(path)
        return self.maybe_flatten(path)

    def access(self, i):
        """(bit-or-cell at position i, visited path)."""
        node = self.root
        path = []
        while type(node) is InternalNode:
            node.queries += 1
            k, consumed = route(node.sizes, i)
            path.append((node, k))
            i -= consumed
            node = node.children[k]
        out = node.access(i)
        self._after_query(path)
        return out, path

    def access_and_rank1(self, i):
        """((bit at i, ones in 1..i), visited path); one descent for both."""
        node = self.root
        path = []
        r = 0
        while type(node) is InternalNode:
            node.queries += 1
            k, consumed, oacc = _route_acc(node.sizes, node.ones, i)
            path.append((node, k))
            i -= consumed
            r += oacc
            node = node.children[k]
        out = (node.access(i), r + node.rank1(i))
        self._after_query(path)
        return out, path

    def rank1(self, i):
        """(ones among positions 1..i, visited path); i >= 1."""
        node = self.root
        path = []
        r = 0
        while type(node) is InternalNode:
            node.queries += 1
            k, consumed, oacc = _route_acc(node.sizes, node.ones, i)
            path.append((node, k))
            i -= consumed
            r += oacc
            node = node.children[k]
        out = r + node.rank1(i)
        self._after_query(path)
        return out, path

    def select(self, bitval, j):
        """(position of the j-th bitval, visited path); caller checks range."""
        node = self.root
        path = []
        p = 0
        while type(node) is InternalNode:
            node.queries += 1
            arr = node.ones if bitval else node.zeros
            hit = _route_acc(arr, node.sizes, j)
            if hit is None:
                self._after_query(path)
                return None, path
            k, occ, sz = hit
            path.append((node, k))
            j -= occ
            p += sz
            node = node.children[k]
        pos = node.select(bitval, j)
        out = None if pos is None else p + pos
        self._after_query(path)
        return out, path

    def write_through(self, i, v):
        """Write treated as a query: mutate the cell in place in either leaf
        kind, never resetting counters.  Only for trees without bit sums."""
        assert not self.kit.track_ones
        node = self.root
        path = []
        while type(node) is InternalNode:
            node.queries += 1
            k, consumed = route(node.sizes, i)
            path.append((node, k))
            i -= consumed
            node = node.children[k]
        prev = node.write(i, v)
        self._after_query(path)
        return prev, path

    # ----- flattening -------------------------------------------------------

    def maybe_flatten(self, path):
        """Flatten the shallowest eligible node on the path, if any.

        Eligible: counter has reached the subtree size and the size does not
        exceed the flatten cap.  Run once after each successful query.
        """
        cap = self.cfg.flatten_cap
        for idx, (node, _k) in enumerate(path):
            if node.queries >= node.size_total and node.size_total <= cap:
                flat = self._flatten_node(node)
                if idx:
                    parent, pk = path[idx - 1]
                    parent.children[pk] = flat
                else:
                    self.root = flat
                st = self.stats
                st.flatten_count += 1
                st.flatten_bits += node.size_total
                st.flatten_sizes.append((node.size_total, cap))
                self._emit("flatten", node.level, node.size_total)
                return flat
        return None

    def _collect(self, node, out):
        if type(node) is InternalNode:
            for ch in node.children:
                self._collect(ch, out)
        else:
            out.append(self.kit.payload(node))

    def _flatten_node(self, node):
        parts = []
        self._collect(node, parts)
        return self.kit.make_static(self.kit.concat(parts), node.level)

    def collect_payload(self):
        parts = []
        self._collect(self.root, parts)
        return self.kit.concat(parts)

    def flatten_all(self):
        """Whole payload as one static leaf, source untouched; None if empty."""
        payload = self.collect_payload()
        if self.kit.plen(payload) == 0:
            return None
        level = self.root.level if type(self.root) is InternalNode else 1
        return self.kit.make_static(payload, level)

    # ----- splitting static leaves -------------------------------------------

    def split_static(self, leaf, offset=None):
        """Internal-node replacement for a static leaf.

        With an offset, the piece containing it is recursively opened down to
        level 1, whose node is built over fresh dynamic leaves of about 3/4
        capacity; all other pieces become static leaves one level down.
        Without an offset the leaf is opened one level only (merge support).
        """
        st = self.stats
        st.split_count += 1
        st.split_bits += leaf.length
        self._emit("split_static", leaf.level, leaf.length)
        return self._split_payload(self.kit.payload(leaf), leaf.level, offset)

    def _split_payload(self, payload, level, offset):
        kit = self.kit
        n = kit.plen(payload)
        if level == 1:
            target = (3 * self.cfg.leaf_cap) // 4
            cnt = max(1, -(-n // target))
            sizes = self._even_sizes(n, cnt)
            children = [kit.make_dynamic(p) for p in kit.chunks(payload, sizes)]
            ones = [ch.count1() for ch in children] if kit.track_ones else None
        else:
            cnt = self.cfg.a
            sizes = self._even_sizes(n, cnt)
            pieces = kit.chunks(payload, sizes)
            ti = -1
            local = None
            if offset is not None:
                acc = 0
                for idx, s in enumerate(sizes):
                    acc += s
                    if acc >= offset:
                        ti = idx
                        local = offset - (acc - s)
                        break
                else:  # insert one past the end lands in the last piece
                    ti = cnt - 1
                    local = offset - (n - sizes[ti])
            children = []
            for idx, piece in enumerate(pieces):
                if idx == ti:
                    children.append(self._split_payload(piece, level - 1, local))
                else:
                    children.append(kit.make_static(piece, level - 1))
            ones = None
            if kit.track_ones:
                ones = [sum(ch.ones) if type(ch) is InternalNode else ch.ones
                        for ch in children]
        zeros = [s - o for s, o in zip(sizes, ones)] if ones is not None else None
        return InternalNode(level, children, sizes, ones, zeros)

    @staticmethod
    def _even_sizes(n, cnt):
        base, extra = divmod(n, cnt)
        return [base + 1] * extra + [base] * (cnt - extra)

    # ----- updates ------------------------------------------------------------

    def apply_update(self, kind, i, v=None):
        """Run one insert/delete/write; returns (result, rank1_at_i, path).

        result: None for insert, removed bit/cell for delete, previous bit
        for write.  rank1_at_i: for bit trees, the global rank1 at position
        i, taken after an insert or write but before a delete; layered
        structures derive rank0 as i - rank1.  None for cell trees.  Every
        internal node on the path has its query counter reset.
        """
        kit = self.kit
        node = self.root
        if kit.is_static(node):  # not reachable via flattening; kept for safety
            node = self.root = self.split_static(node, i)
        path = []
        r = 0
        track = kit.track_ones
        while type(node) is InternalNode:
            node.queries = 0
            if track:
                hit = _route_acc(node.sizes, node.ones, i)
            else:
                hit = route(node.sizes, i)
            if hit is None:
                # insert one past the end routes into the last child
                k = len(node.children) - 1
                consumed = node.size_total - node.sizes[k]
                oacc = sum(node.ones) - node.ones[k] if track else 0
            elif track:
                k, consumed, oacc = hit
            else:
                k, consumed = hit
                oacc = 0
            child = node.children[k]
            if kit.is_static(child):
                child = self.split_static(child, i - consumed)
                node.children[k] = child
            path.append((node, k))
            i -= consumed
            r += oacc
            node = child
        leaf = node
        if kind == "insert":
            leaf.insert(i, v)
            result = None
            dsize = 1
            dones = v if track else 0
            rank1_at_i = (r + leaf.rank1(i)) if track else None
        elif kind == "delete":
            rank1_at_i = (r + leaf.rank1(i)) if track else None
            result = leaf.delete(i)
            dsize = -1
            dones = -result if track else 0
        else:
            prev = leaf.write(i, v)
            result = prev
            dsize = 0
            dones = (v - prev) if track else 0
            rank1_at_i = (r + leaf.rank1(i)) if track else None
        for nd, k in path:
            nd.size_total += dsize
            nd.sizes[k] += dsize
            if nd.ones is not None:
                nd.ones[k] += dones
                nd.zeros[k] += dsize - dones
        st = self.stats
        st.updates_total += 1
        st.update_visits += len(path)
        st.internal_visits += len(path)
        self._rebalance(path, leaf)
        return result, rank1_at_i, path

    # ----- rebalancing ----------------------------------------------------------

    def _rebalance(self, path, leaf):
        cap = self.cfg.leaf_cap
        if not path:
            if self.kit.length(leaf) > cap:
                self._grow_root_leaf(leaf)
            return
        parent, k = path[-1]
        n = self.kit.length(leaf)
        if n > cap:
            self._split_leaf(parent, k)
        elif n < cap // 4:
            self._merge_leaf(parent, k)
        for idx in range(len(path) - 1, 0, -1):
            nd = path[idx][0]
            hi = self._level_cap(nd.level)
            if nd.size_total > hi:
                self._cut_child(path[idx - 1][0], path[idx - 1][1])
            elif nd.size_total < hi // 4:
                self._merge_child(path[idx - 1][0], path[idx - 1][1])
        self._fix_root()

    def _leaf_halves(self, payload):
        kit = self.kit
        n = kit.plen(payload)
        h = (n + 1) // 2
        left = kit.make_dynamic(kit.pslice(payload, 0, h))
        right = kit.make_dynamic(kit.pslice(payload, h, n))
        return left, right

    def _replace_children(self, parent, lo, hi, nodes):
        """Swap parent.children[lo:hi] for nodes, rebuilding sum entries."""
        kit = self.kit
        sizes = []
        ones = [] if parent.ones is not None else None
        for nd in nodes:
            if type(nd) is InternalNode:
                sizes.append(nd.size_total)
                if ones is not None:
                    ones.append(sum(nd.ones))
            else:
                sizes.append(kit.length(nd))
                if ones is not None:
                    ones.append(kit.ones(nd))
        parent.children[lo:hi] = nodes
        parent.sizes[lo:hi] = sizes
        if ones is not None:
            parent.ones[lo:hi] = ones
            parent.zeros[lo:hi] = [s - o for s, o in zip(sizes, ones)]

    def _split_leaf(self, parent, k):
        left, right = self._leaf_halves(self.kit.payload(parent.children[k]))
        self._replace_children(parent, k, k + 1, [left, right])
        self._emit("leaf_split", self.kit.length(left), self.kit.length(right))

    def _merge_leaf(self, parent, k):
        kit = self.kit
        sib = k + 1 if k + 1 < len(parent.children) else k - 1
        lo, hi = min(k, sib), max(k, sib)
        combined = kit.concat([kit.payload(parent.children[lo]),
                               kit.payload(parent.children[hi])])
        n = kit.plen(combined)
        if n > (14 * self.cfg.leaf_cap) // 16 - 1:
            left, right = self._leaf_halves(combined)
            self._replace_children(parent, lo, hi + 1, [left, right])
            self._emit("leaf_merge_split", kit.length(left), kit.length(right))
        else:
            self._replace_children(parent, lo, hi + 1, [kit.make_dynamic(combined)])
            self._emit("leaf_merge", n)

    def _grow_root_leaf(self, leaf):
        kit = self.kit
        left, right = self._leaf_halves(kit.payload(leaf))
        children = [left, right]
        sizes = [kit.length(left), kit.length(right)]
        ones = [kit.ones(left), kit.ones(right)] if kit.track_ones else None
        zeros = [s - o for s, o in zip(sizes, ones)] if ones is not None else None
        self.root = InternalNode(1, children, sizes, ones, zeros)
        self._emit("leaf_split", sizes[0], sizes[1])

    def _cut_point(self, node):
        """Child boundary splitting node's weight as evenly as possible."""
        total = node.size_total
        acc = 0
        for idx, s in enumerate(node.sizes):
            if (acc + s) * 2 >= total:
                before, after = acc, acc + s
                cut = idx if abs(2 * before - total) <= abs(2 * after - total) else idx + 1
                return min(max(cut, 1), len(node.sizes) - 1)
            acc += s
        return len(node.sizes) - 1

    def _halve_node(self, node):
        cut = self._cut_point(node)
        lhs = InternalNode(node.level, node.children[:cut], node.sizes[:cut],
                           None if node.ones is None else node.ones[:cut],
                           None if node.zeros is None else node.zeros[:cut])
        rhs = InternalNode(node.level, node.children[cut:], node.sizes[cut:],
                           None if node.ones is None else node.ones[cut:],
                           None if node.zeros is None else node.zeros[cut:])
        return lhs, rhs

    def _cut_child(self, parent, k):
        node = parent.children[k]
        lhs, rhs = self._halve_node(node)
        self._replace_children(parent, k, k + 1, [lhs, rhs])
        self._emit("node_cut", node.level, lhs.size_total, rhs.size_total)

    def _merge_child(self, parent, k):
        node = parent.children[k]
        sib_k = k + 1 if k + 1 < len(parent.children) else k - 1
        sibling = parent.children[sib_k]
        if self.kit.is_static(sibling):
            sibling = self.split_static(sibling)
            parent.children[sib_k] = sibling
        lo, hi = (k, sib_k) if k < sib_k else (sib_k, k)
        lnode, rnode = parent.children[lo], parent.children[hi]
        merged = InternalNode(
            node.level,
            lnode.children + rnode.children,
            lnode.sizes + rnode.sizes,
            None if lnode.ones is None else lnode.ones + rnode.ones,
            None if lnode.zeros is None else lnode.zeros + rnode.zeros,
        )
        hi_cap = self._level_cap(node.level)
        if merged.size_total > (14 * hi_cap) // 16 - 1:
            lhs, rhs = self._halve_node(merged)
            self._replace_children(parent, lo, hi + 1, [lhs, rhs])
            self._emit("node_merge_split", node.level, lhs.size_total, rhs.size_total)
        else:
            self._replace_children(parent, lo, hi + 1, [merged])
            self._emit("node_merge", node.level, merged.size_total)

    def _fix_root(self):
        root = self.root
        while type(root) is InternalNode:
            if root.size_total > self._level_cap(root.level):
                lhs, rhs = self._halve_node(root)
                sizes = [lhs.size_total, rhs.size_total]
                ones = None if root.ones is None else [sum(lhs.ones), sum(rhs.ones)]
                zeros = None if ones is None else [s - o for s, o in zip(sizes, ones)]
                root = InternalNode(root.level + 1, [lhs, rhs], sizes, ones, zeros)
                self._emit("node_cut", lhs.level, lhs.size_total, rhs.size_total)
                continue
            if len(root.children) == 1:
                root = root.children[0]
                continue
            break
        self.root = root

    # ----- bulk build ------------------------------------------------------------

    def rebuild(self, payload=None, record=True):
        """Rebuild as a minimal-height tree of about-3/4-full dynamic leaves.

        record=False keeps the initial bulk load out of the rebuild counter.
        """
        kit = self.kit
        if payload is None:
            payload = self.collect_payload()
        n = kit.plen(payload)
        cap = self.cfg.leaf_cap
        a = self.cfg.a
        if record:
            self.stats.rebuild_count += 1
        self._emit("rebuild", n)
        if n <= cap:
            self.root = kit.make_dynamic(payload)
            return
        target = (3 * cap) // 4
        cnt, rem = divmod(n, target)
        sizes = [target] * cnt
        if rem:
            if rem >= cap // 4:
                sizes.append(rem)
            else:
                sizes[-1] += rem
        nodes = [kit.make_dynamic(p) for p in kit.chunks(payload, sizes)]
        lens = sizes
        ones = [nd.count1() for nd in nodes] if kit.track_ones else None
        level = 0
        while len(nodes) > 1:
            level += 1
            lo_bound = self._level_cap(level) // 4
            groups = []
            for gstart in range(0, len(nodes), a):
                groups.append((gstart, min(gstart + a, len(nodes))))
            if len(groups) > 1:
                s, e = groups[-1]
                if sum(lens[s:e]) < lo_bound:
                    prev_s, _ = groups[-2]
                    groups[-2] = (prev_s, e)
                    groups.pop()
            new_nodes = []
            new_lens = []
            new_ones = [] if ones is not None else None
            for s, e in groups:
                gsizes = lens[s:e]
                gones = ones[s:e] if ones is not None else None
                gzeros = [sz - o for sz, o in zip(gsizes, gones)] if gones is not None else None
                nd = InternalNode(level, nodes[s:e], gsizes, gones, gzeros)
                new_nodes.append(nd)
                new_lens.append(nd.size_total)
                if new_ones is not None:
                    new_ones.append(sum(gones))
            nodes, lens, ones = new_nodes, new_lens, new_ones
        self.root = nodes[0]

    # ----- validation --------------------------------------------------------------

    def validate(self):
        """Check every structural invariant; returns a list of violations."""
        problems = []
        kit = self.kit
        cfg = self.cfg
        root = self.root

        def visit(node, where, is_root):
            if type(node) is InternalNode:
                arity = len(node.children)
                lo_arity = 2 if is_root else max(2, cfg.a // 4)
                if not lo_arity <= arity <= 4 * cfg.a:
                    problems.append(f"{where}: arity {arity} outside [{lo_arity}, {4 * cfg.a}]")
                if not (len(node.sizes) == arity
                        and (node.ones is None or len(node.ones) == arity)
                        and (node.zeros is None or len(node.zeros) == arity)):
                    problems.append(f"{where}: sum arrays do not match arity")
                size = 0
                ones = 0
                for idx, child in enumerate(node.children):
                    csize, cones = visit(child, f"{where}.{idx}", False)
                    if node.sizes[idx] != csize:
                        problems.append(f"{where}: size entry {idx} is {node.sizes[idx]}, child has {csize}")
                    if node.ones is not None:
                        if node.ones[idx] != cones:
                            problems.append(f"{where}: ones entry {idx} is {node.ones[idx]}, child has {cones}")
                        if node.zeros[idx] != node.sizes[idx] - node.ones[idx]:
                            problems.append(f"{where}: zeros entry {idx} breaks zeros = size - ones")
                    size += csize
                    ones += cones
                    lvl_ok = (
                        child.level == node.level - 1
                        if type(child) is InternalNode or kit.is_static(child)
                        else node.level == 1
                    )
                    if not lvl_ok:
                        problems.append(f"{where}.{idx}: child level breaks the ladder")
                if node.size_total != size:
                    problems.append(f"{where}: cached subtree size {node.size_total} != {size}")
                hi = cfg.a ** node.level * cfg.leaf_cap
                if size > hi:
                    problems.append(f"{where}: weight {size} over level-{node.level} cap {hi}")
                if not is_root and size < hi // 4:
                    problems.append(f"{where}: weight {size} under level-{node.level} floor {hi // 4}")
                if node.queries < 0:
                    problems.append(f"{where}: negative query counter")
                return size, ones
            n = kit.length(node)
            ones = kit.ones(node)
            for defect in kit.check_leaf(node):
                problems.append(f"{where}: {defect}")
            if kit.is_static(node):
                level = node.level
                if level < 1:
                    problems.append(f"{where}: static leaf at level {level}")
                hi = cfg.a ** level * cfg.leaf_cap
                if is_root:
                    problems.append(f"{where}: root must not be a static leaf")
                elif not hi // 4 <= n <= hi:
                    problems.append(f"{where}: static leaf size {n} outside level-{level} bounds")
            else:
                if not is_root and not cfg.leaf_cap // 4 <= n <= cfg.leaf_cap:
                    problems.append(f"{where}: dynamic leaf size {n} outside [{cfg.leaf_cap // 4}, {cfg.leaf_cap}]")
                if is_root and n > cfg.leaf_cap:
                    problems.append(f"{where}: root leaf over capacity {cfg.leaf_cap}")
            return n, ones

        visit(root, "root", True)
        return problems
