import random

import pytest

from adaptivebits import AdaptiveBitvector, NaiveBits
from adaptivebits.engine import InternalNode, route
from adaptivebits.leaf import StaticLeaf

from helpers import (
    answer_vector,
    count_static,
    drive_mixed,
    internal_nodes,
    make_loaded_bv,
    oracle_vector,
    static_leaves,
)


# ----- routing -------------------------------------------------------------


def test_route_trivial():
    # child 2 (0-based index 1) holds target 6, with 5 consumed before it
    assert route([5, 3, 4], 6) == (1, 5)
    # boundary: target 5 still belongs to the first child
    assert route([5, 3, 4], 5) == (0, 0)
    assert route([5, 3, 4], 12) == (2, 8)
    assert route([5, 3, 4], 13) is None


def test_route_random_vs_scan():
    rng = random.Random(1)
    for _ in range(300):
        sizes = [rng.randint(1, 50) for _ in range(rng.randint(1, 40))]
        total = sum(sizes)
        target = rng.randint(1, total)
        k, consumed = route(sizes, target)
        prefix = 0
        for idx, s in enumerate(sizes):
            if prefix + s >= target:
                assert (k, consumed) == (idx, prefix)
                break
            prefix += s


# ----- counter discipline -----------------------------------------------------


def counters(bv):
    return {id(nd): nd.queries for nd in internal_nodes(bv._tree.root)}


def test_query_increments_exactly_path():
    bv, nb, rng = make_loaded_bv(42, 5000)
    before = counters(bv)
    _, path = bv._tree.rank1(1234)
    after = counters(bv)
    on_path = {id(nd) for nd, _ in path}
    assert len(path) >= 1
    for nd in internal_nodes(bv._tree.root):
        expect = before[id(nd)] + (1 if id(nd) in on_path else 0)
        assert after[id(nd)] == expect


def test_update_resets_exactly_path():
    bv, nb, rng = make_loaded_bv(43, 5000)
    for _ in range(500):  # accumulate counters
        bv.access(rng.randint(1, bv.n))
    before = counters(bv)
    assert any(before.values())
    _, _, path = bv._tree.apply_update("write", 2500, 1)
    on_path = {id(nd) for nd, _ in path}
    for nd in internal_nodes(bv._tree.root):
        if id(nd) in on_path:
            assert nd.queries == 0
        else:
            assert nd.queries == before[id(nd)]


def test_noop_write_still_resets():
    bv, nb, rng = make_loaded_bv(44, 4000)
    i = 1717
    current = bv.access(i)
    for _ in range(200):
        bv.access(i)
    path_nodes = [nd for nd, _ in bv._tree.access(i)[1]]
    assert all(nd.queries > 0 for nd in path_nodes)
    assert bv.write(i, current) == current  # same value written back
    assert all(nd.queries == 0 for nd in path_nodes)


# ----- flattening ----------------------------------------------------------------


def level1_child(bv):
    """(parent, k, child) for some level-1 internal child below the root."""
    root = bv._tree.root
    node, parent, k = root, None, None
    while node.level > 1:
        parent, k, node = node, 0, node.children[0]
    assert node.level == 1
    return parent, k, node


def position_range(parent, k):
    """Global positions covered by parent.children[k] (1-based, inclusive)."""
    start = 1 + sum(parent.sizes[:k])
    return start, start + parent.sizes[k] - 1


def test_flatten_trigger_threshold():
    bv, nb, rng = make_loaded_bv(45, 1 << 13)
    parent, k, child = level1_child(bv)
    size = child.size_total
    assert size <= bv.params.flatten_cap
    lo, hi = position_range(parent, k)
    for _ in range(size):
        bv.access(lo)
    assert isinstance(parent.children[k], StaticLeaf)
    assert bv.stats().flatten_count == 1
    assert bv.check() == []


def test_flatten_denied_by_one_update():
    bv, nb, rng = make_loaded_bv(46, 1 << 13)
    parent, k, child = level1_child(bv)
    size = child.size_total
    lo, hi = position_range(parent, k)
    for _ in range(size - 1):
        bv.access(lo)
    bv.write(lo, nb.access(lo))  # update through the child: counter resets
    for _ in range(size - 1):
        bv.access(lo)
    assert not isinstance(parent.children[k], StaticLeaf)
    assert bv.stats().flatten_count == 0


def test_flatten_cap_blocks_large_nodes():
    bv, nb, rng = make_loaded_bv(47, 1 << 13)
    root = bv._tree.root
    assert root.size_total > bv.params.flatten_cap
    for _ in range(root.size_total + 10):
        bv.access(rng.randint(1, bv.n))
    assert isinstance(bv._tree.root, InternalNode)
    for size, cap in bv.stats().flatten_sizes:
        assert size <= cap


def test_flatten_preserves_all_answers():
    bv, nb, rng = make_loaded_bv(48, 1600)
    assert bv.n <= 2000
    baseline = oracle_vector(bv.to01())
    flattened = 0
    guard = 0
    while flattened == 0 and guard < 200_000:
        bv.access(rng.randint(1, bv.n))
        flattened = bv.stats().flatten_count
        guard += 1
    assert flattened > 0
    assert answer_vector(bv) == baseline
    assert bv.check() == []


def test_flatten_all_and_empty():
    bv, nb, rng = make_loaded_bv(49, 3000)
    snap = bv.frozen_snapshot()
    assert snap.length == 3000
    assert (snap.payload()) == (nb.x, nb.n)
    assert AdaptiveBitvector().frozen_snapshot() is None


# ----- splitting static leaves -----------------------------------------------------


def test_split_level1_arity_and_sizes():
    bv = AdaptiveBitvector.from_payload(0, 1 << 14)
    tree = bv._tree
    b = bv.params.b
    a = bv.params.a
    t = (3 * a * b) // 4
    leaf = tree.kit.make_static((0, t), 1)
    node = tree.split_static(leaf, 1)
    target = (3 * b) // 4
    assert node.level == 1
    assert len(node.children) == -(-t // target)
    for ch, size in zip(node.children, node.sizes):
        assert not isinstance(ch, (InternalNode, StaticLeaf))
        assert abs(size - target) <= 1
        assert b // 4 <= size <= b


def test_split_level2_shape():
    bv = AdaptiveBitvector.from_payload(0, 1 << 16)
    tree = bv._tree
    a, b = bv.params.a, bv.params.b
    size = a * a * b // 2
    rng = random.Random(50)
    payload = rng.getrandbits(size)
    leaf = tree.kit.make_static((payload, size), 2)
    offset = size // 3
    node = tree.split_static(leaf, offset)
    assert node.level == 2
    assert len(node.children) == a
    statics = [ch for ch in node.children if isinstance(ch, StaticLeaf)]
    internals = [ch for ch in node.children if isinstance(ch, InternalNode)]
    assert len(statics) == a - 1 and len(internals) == 1
    assert max(node.sizes) - min(node.sizes) <= 1
    assert all(ch.level == 1 for ch in node.children)
    # payload reassembles identically
    rebuilt = tree.kit.concat([_subtree_payload(tree, ch) for ch in node.children])
    assert rebuilt == (payload, size)


def _subtree_payload(tree, node):
    parts = []
    tree._collect(node, parts)
    return tree.kit.concat(parts)


def test_split_answers_invariant():
    bv, nb, rng = make_loaded_bv(51, 10000)
    st = bv.stats()
    # flatten by query pressure, then force splits by updates
    while st.flatten_count == 0:
        bv.access(rng.randint(1, bv.n))
    assert count_static(bv._tree.root) > 0
    before = bv.payload_bytes()
    hits = 0
    while st.split_count == 0:
        i = rng.randint(1, bv.n)
        assert bv.write(i, nb.access(i)) == nb.access(i)
        hits += 1
    assert bv.payload_bytes() == before
    assert bv.check() == []


# ----- update machinery ----------------------------------------------------------------


def test_insert_all_delete_all():
    rng = random.Random(52)
    bv = AdaptiveBitvector()
    model = NaiveBits()
    for _ in range(1000):
        i = rng.randint(1, bv.n + 1)
        v = rng.randint(0, 1)
        bv.insert(i, v)
        model.insert(i, v)
        assert bv.check() == []
    while bv.n:
        i = rng.randint(1, bv.n)
        assert bv.delete(i) == model.delete(i)
        assert bv.check() == []
    assert bv.n == 0
    assert bv.payload_bytes() == b""


def test_interleaved_stream_vs_oracle():
    bv = AdaptiveBitvector()
    nb = NaiveBits()
    drive_mixed(bv, nb, random.Random(53), 20000, q=2,
                check_payload_every=1000, check_validate_every=1000)
    assert bv.payload_bytes() == nb.payload_bytes()


def test_loaded_stream_with_splits_and_flattens():
    bv, nb, rng = make_loaded_bv(54, 1 << 14)
    drive_mixed(bv, nb, rng, 30000, q=200,
                check_payload_every=2000, check_validate_every=2000)
    st = bv.stats()
    assert st.flatten_count > 0
    assert st.split_count > 0


# ----- balancing laws ---------------------------------------------------------------------


def test_balancing_laws_events():
    bv = AdaptiveBitvector()
    nb = NaiveBits()
    events = []
    bv._tree.events = events
    drive_mixed(bv, nb, random.Random(55), 15000, q=1, check_payload_every=5000)

    def cap_of(level):
        return bv.params.a ** level * bv.params.b

    kinds = set()
    for ev in events:
        kinds.add(ev[0])
        if ev[0] == "leaf_split" or ev[0] == "leaf_merge_split":
            cap = bv.params.b
            for size in ev[1:]:
                assert 7 * cap // 16 <= size <= 10 * cap // 16, ev
        elif ev[0] == "leaf_merge":
            cap = bv.params.b
            assert 8 * cap // 16 - 1 <= ev[1] <= 14 * cap // 16 - 1, ev
        elif ev[0] in ("node_cut", "node_merge_split"):
            cap = cap_of(ev[1])
            for size in ev[2:]:
                assert 6 * cap // 16 <= size <= 11 * cap // 16, ev
        elif ev[0] == "node_merge":
            cap = cap_of(ev[1])
            assert 8 * cap // 16 - 1 <= ev[2] <= 14 * cap // 16 - 1, ev
    assert "leaf_split" in kinds
    assert "leaf_merge" in kinds or "leaf_merge_split" in kinds


def test_leaf_bounds_after_every_update():
    bv = AdaptiveBitvector()
    nb = NaiveBits()
    rng = random.Random(56)
    for step in range(4000):
        n = bv.n
        if n == 0 or rng.random() < 0.55:
            i = rng.randint(1, n + 1)
            bv.insert(i, rng.randint(0, 1))
            nb.insert(i, 0)
        else:
            bv.delete(rng.randint(1, n))
        if step % 500 == 0:
            assert bv.check() == []
    assert bv.check() == []


# ----- validator -----------------------------------------------------------------------------


def test_validate_clean_fresh():
    bv, _, _ = make_loaded_bv(57, 12345)
    assert bv._tree.validate() == []


def test_validate_detects_corrupt_sums():
    bv, _, _ = make_loaded_bv(58, 8000)
    node = next(internal_nodes(bv._tree.root))
    node.sizes[0] += 1
    problems = bv._tree.validate()
    assert any("size entry" in p for p in problems)
    node.sizes[0] -= 1
    assert bv._tree.validate() == []
    node.zeros[1] += 1
    problems = bv._tree.validate()
    assert any("zeros" in p for p in problems)
    node.zeros[1] -= 1


def test_validate_detects_corrupt_static_directory():
    bv, nb, rng = make_loaded_bv(59, 1 << 13)
    while bv.stats().flatten_count == 0:
        bv.access(rng.randint(1, bv.n))
    leaf = next(static_leaves(bv._tree.root))
    leaf.scount[-1] += 1
    assert any("superblock" in p for p in bv._tree.validate())
    leaf.scount[-1] -= 1
    assert bv._tree.validate() == []


# ----- rebuild ---------------------------------------------------------------------------------


def test_rebuild_preserves_answers():
    bv, nb, rng = make_loaded_bv(60, 10000)
    tree = bv._tree
    before = bv.payload_bytes()
    tree.rebuild()
    assert bv.payload_bytes() == before
    assert bv.check() == []
    assert bv.stats().rebuild_count == 1
    tree.rebuild()  # same params: content-idempotent
    assert bv.payload_bytes() == before
    assert bv.check() == []
