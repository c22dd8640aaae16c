"""Shared test utilities: tree walks, answer vectors, stream drivers."""

import random

from adaptivebits.engine import InternalNode
from adaptivebits.leaf import StaticLeaf
from adaptivebits.oracle import NaiveBits


def internal_nodes(node):
    if isinstance(node, InternalNode):
        yield node
        for child in node.children:
            yield from internal_nodes(child)


def static_leaves(node):
    if isinstance(node, InternalNode):
        for child in node.children:
            yield from static_leaves(child)
    elif isinstance(node, StaticLeaf):
        yield node


def count_static(node):
    return sum(1 for _ in static_leaves(node))


def answer_vector(bv):
    """Every query answer over all valid arguments, via the public API.

    Note: issuing these queries mutates counters (queries are stateful), so
    use on structures where that is acceptable.
    """
    n = bv.n
    out = {
        "access": [bv.access(i) for i in range(1, n + 1)],
        "rank0": [bv.rank(0, i) for i in range(0, n + 1)],
        "rank1": [bv.rank(1, i) for i in range(0, n + 1)],
        "select0": [bv.select(0, j) for j in range(1, n + 2)],
        "select1": [bv.select(1, j) for j in range(1, n + 2)],
    }
    return out


def oracle_vector(payload_str):
    nb = NaiveBits(payload_str)
    n = nb.n
    return {
        "access": [nb.access(i) for i in range(1, n + 1)],
        "rank0": [nb.rank(0, i) for i in range(0, n + 1)],
        "rank1": [nb.rank(1, i) for i in range(0, n + 1)],
        "select0": [nb.select(0, j) for j in range(1, n + 2)],
        "select1": [nb.select(1, j) for j in range(1, n + 2)],
    }


def drive_mixed(bv, nb, rng, ops, q=4, check_payload_every=1000, check_validate_every=None):
    """Random op stream mirrored on the oracle; asserts all answers equal.

    Returns the number of mismatches (always 0 unless asserts are disabled).
    """
    for step in range(1, ops + 1):
        n = bv.n
        update = rng.random() < 1.0 / q
        if update or n == 0:
            kind = rng.randrange(3) if n else 0
            if kind == 0:
                i = rng.randint(1, n + 1)
                v = rng.randint(0, 1)
                bv.insert(i, v)
                nb.insert(i, v)
            elif kind == 1:
                i = rng.randint(1, n)
                assert bv.delete(i) == nb.delete(i)
            else:
                i = rng.randint(1, n)
                v = rng.randint(0, 1)
                assert bv.write(i, v) == nb.write(i, v)
        else:
            kind = rng.randrange(3)
            if kind == 0:
                i = rng.randint(1, n)
                assert bv.access(i) == nb.access(i)
            elif kind == 1:
                b = rng.randint(0, 1)
                i = rng.randint(0, n)
                assert bv.rank(b, i) == nb.rank(b, i)
            else:
                b = rng.randint(0, 1)
                j = rng.randint(1, n + 1)
                assert bv.select(b, j) == nb.select(b, j)
        if check_payload_every and step % check_payload_every == 0:
            assert bv.payload_bytes() == nb.payload_bytes()
        if check_validate_every and step % check_validate_every == 0:
            problems = bv.check()
            assert not problems, problems[:5]


def random_bits_payload(rng, n):
    return rng.getrandbits(n) if n else 0


def make_loaded_bv(seed, n):
    from adaptivebits import AdaptiveBitvector

    rng = random.Random(seed)
    x = random_bits_payload(rng, n)
    bv = AdaptiveBitvector.from_payload(x, n)
    nb = NaiveBits()
    nb.x, nb.n = x, n
    return bv, nb, rng
