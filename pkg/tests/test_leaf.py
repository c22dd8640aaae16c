import random

import pytest
from hypothesis import given, settings, strategies as st

from adaptivebits.bitio import bits01_to_str, chunk_bytes_for, int_from_bits01
from adaptivebits.leaf import DynamicLeaf, StaticLeaf, build_static


def from_str(s):
    return DynamicLeaf.from_int(int_from_bits01(s), len(s))


def leaf_str(leaf):
    x, n = leaf.payload()
    return bits01_to_str(x, n)


def scan_rank1(bits, i):
    return bits[:i].count("1")


def scan_select(bits, bitval, j):
    want = "1" if bitval else "0"
    count = 0
    for pos, ch in enumerate(bits, 1):
        if ch == want:
            count += 1
            if count == j:
                return pos
    return None


# ----- dynamic leaf -----------------------------------------------------------


def test_dyn_access_trivial():
    leaf = from_str("10110")
    assert leaf.access(1) == 1
    assert leaf.access(3) == 1
    assert leaf.access(5) == 0


def test_dyn_rank_trivial():
    leaf = from_str("10110")
    assert leaf.rank1(3) == 2
    assert leaf.rank1(0) == 0
    assert leaf.rank1(5) == 3


def test_dyn_select_trivial():
    leaf = from_str("10110")
    assert leaf.select(1, 2) == 3
    assert leaf.select(0, 1) == 2
    assert leaf.select(1, 4) is None


def test_dyn_insert_trivial():
    leaf = from_str("101")
    leaf.insert(2, 0)
    assert leaf_str(leaf) == "1001"
    empty = DynamicLeaf()
    empty.insert(1, 1)
    assert leaf_str(empty) == "1"


def test_dyn_delete_write_trivial():
    leaf = from_str("1001")
    assert leaf.delete(2) == 0
    assert leaf_str(leaf) == "101"
    assert leaf.write(3, 0) == 1
    assert leaf_str(leaf) == "100"


def test_dyn_random_vs_scan_oracle():
    rng = random.Random(20240901)
    bits = "".join(rng.choice("01") for _ in range(500))
    leaf = from_str(bits)
    assert leaf.access(317) == int(bits[316])
    assert leaf.rank1(499) == scan_rank1(bits, 499)
    for _ in range(200):
        i = rng.randint(0, 500)
        assert leaf.rank1(i) == scan_rank1(bits, i)
        b = rng.randint(0, 1)
        j = rng.randint(1, 500)
        assert leaf.select(b, j) == scan_select(bits, b, j)


def test_dyn_mutations_vs_list_oracle():
    rng = random.Random(77)
    model = []
    leaf = DynamicLeaf()
    for _ in range(2000):
        op = rng.randrange(3) if model else 0
        if op == 0:
            i = rng.randint(1, len(model) + 1)
            v = rng.randint(0, 1)
            leaf.insert(i, v)
            model.insert(i - 1, v)
        elif op == 1:
            i = rng.randint(1, len(model))
            assert leaf.delete(i) == model.pop(i - 1)
        else:
            i = rng.randint(1, len(model))
            v = rng.randint(0, 1)
            assert leaf.write(i, v) == model[i - 1]
            model[i - 1] = v
        assert leaf.storage_exact()
    assert leaf_str(leaf) == "".join(map(str, model))


@given(st.lists(st.integers(0, 1), max_size=200),
       st.integers(1, 201), st.integers(0, 1))
def test_dyn_insert_delete_identity(bits, i, v):
    leaf = DynamicLeaf()
    for pos, bit in enumerate(bits, 1):
        leaf.insert(pos, bit)
    i = min(i, len(bits) + 1)
    before = leaf.payload()
    leaf.insert(i, v)
    assert leaf.delete(i) == v
    assert leaf.payload() == before
    assert leaf.storage_exact()


def test_storage_exactness():
    leaf = DynamicLeaf()
    for n in range(1, 200):
        leaf.insert(1, n & 1)
        assert len(leaf.buf) == chunk_bytes_for(n)
    for n in range(199, 0, -1):
        leaf.delete(1)
        assert len(leaf.buf) == chunk_bytes_for(n - 1)


# ----- static leaf -------------------------------------------------------------


def test_build_static_trivial():
    leaf = build_static(int_from_bits01("1111").to_bytes(8, "little"), 4)
    assert leaf.ones == 4
    assert leaf.rank1(4) == 4


def test_build_static_all_zero():
    leaf = build_static(bytes(chunk_bytes_for(1000)), 1000)
    assert leaf.sel1 == []
    for j in (1, 5, 1000):
        assert leaf.select(1, j) is None
    assert leaf.select(0, 1000) == 1000
    assert leaf.self_check() == []


def test_static_small_goldens():
    leaf = build_static(int_from_bits01("10110").to_bytes(8, "little"), 5)
    assert leaf.rank1(3) == 2
    assert leaf.select(0, 1) == 2
    assert leaf.access(4) == 1
    assert leaf.self_check() == []


@pytest.mark.parametrize("n", [1, 63, 64, 65, 511, 512, 513, 4096, 100_000])
def test_static_random_vs_scan(n):
    rng = random.Random(n)
    bits = "".join(rng.choice("01") for _ in range(n))
    leaf = build_static(int_from_bits01(bits).to_bytes(chunk_bytes_for(n), "little"), n)
    assert leaf.self_check() == []
    for i in (0, 1, min(17, n), n):
        assert leaf.rank1(i) == scan_rank1(bits, i)
    queries = 1000 if n >= 4096 else 100
    for _ in range(queries):
        i = rng.randint(0, n)
        assert leaf.rank1(i) == scan_rank1(bits, i)
        b = rng.randint(0, 1)
        hi = max(leaf.ones if b else n - leaf.ones, 1)
        j = rng.randint(1, hi + 1)
        # beyond-count probes must return None, in-range must match the scan
        assert leaf.select(b, j) == scan_select(bits, b, j)
        i2 = rng.randint(1, n)
        assert leaf.access(i2) == int(bits[i2 - 1])


# ----- dynamic/static agreement -------------------------------------------------


def all_payloads_upto(width):
    for n in range(1, width + 1):
        for x in range(1 << n):
            yield x, n


def test_round_trip_exhaustive_small():
    for x, n in all_payloads_upto(12):
        dyn = DynamicLeaf.from_int(x, n)
        stat = build_static(dyn.buf, n)
        ones = dyn.count1()
        for i in range(1, n + 1):
            assert dyn.access(i) == stat.access(i)
        for i in range(n + 1):
            assert dyn.rank1(i) == stat.rank1(i)
        for b in (0, 1):
            total = ones if b else n - ones
            for j in range(1, total + 2):
                assert dyn.select(b, j) == stat.select(b, j)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3000), st.randoms(use_true_random=False))
def test_round_trip_randomized(n, rnd):
    x = rnd.getrandbits(n)
    dyn = DynamicLeaf.from_int(x, n)
    stat = build_static(dyn.buf, n)
    ones = x.bit_count()
    assert stat.ones == ones
    for _ in range(30):
        i = rnd.randint(0, n)
        assert dyn.rank1(i) == stat.rank1(i)
        b = rnd.randint(0, 1)
        j = rnd.randint(1, n + 1)
        assert dyn.select(b, j) == stat.select(b, j)
        if i:
            assert dyn.access(i) == stat.access(i)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 2000), st.randoms(use_true_random=False))
def test_rank_select_dualities(n, rnd):
    x = rnd.getrandbits(n)
    stat = build_static(DynamicLeaf.from_int(x, n).buf, n)
    assert stat.rank1(n) == stat.ones
    for _ in range(25):
        i = rnd.randint(0, n)
        r1 = stat.rank1(i)
        assert r1 + (i - r1) == i  # rank0 defined as i - rank1
        for b, r in ((1, r1), (0, i - r1)):
            if r > 0:
                assert stat.select(b, r) <= i
        j = rnd.randint(1, max(stat.ones, 1))
        if stat.ones:
            pos = stat.select(1, j)
            assert stat.rank1(pos) == j
