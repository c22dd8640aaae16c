"""Bit leaves: small mutable blocks and immutable indexed blocks.

A DynamicLeaf holds up to b bits, answers rank/select by chunk scanning and
is reallocated to exactly ceil(len/64) chunks on every mutation.  A
StaticLeaf holds a payload of any length plus a two-level rank directory
(512-bit superblocks over 64-bit blocks) and sampled select positions, so
queries touch a constant-bounded number of directory entries.

Positions are 1-based; rank takes a 0-based prefix length.  Out-of-range
indexes are caller bugs here; the public facade validates user input.
"""

from .bitio import (
    POP8,
    SEL8,
    buf_to_int,
    chunk_bytes_for,
    int_to_buf,
)

SUPER_BITS = 512          # superblock width of the rank directory
BLOCK_BITS = 64           # block width, one machine chunk
SELECT_SAMPLE = 512       # every S-th occurrence gets its position sampled


def _select_in_word(word, r):
    """0-based offset of the r-th (1-based) set bit of a 64-bit word."""
    for shift in range(0, 64, 8):
        byte = (word >> shift) & 0xFF
        c = POP8[byte]
        if c >= r:
            return shift + SEL8[byte][r - 1]
        r -= c
    raise AssertionError("rank exceeds popcount of word")


class DynamicLeaf:
    """Mutable packed bit block; storage is exactly ceil(length/64) chunks."""

    __slots__ = ("buf", "length")

    def __init__(self, buf=None, length=0):
        self.buf = bytearray() if buf is None else buf
        self.length = length

    @classmethod
    def from_int(cls, x, nbits):
        return cls(int_to_buf(x, nbits), nbits)

    def payload(self):
        """Payload as (int, nbits), LSB = position 1."""
        return buf_to_int(self.buf), self.length

    def count1(self):
        return buf_to_int(self.buf).bit_count()

    def access(self, i):
        i -= 1
        return (self.buf[i >> 3] >> (i & 7)) & 1

    def rank1(self, i):
        """Ones among positions 1..i; whole chunks plus a masked tail."""
        if i <= 0:
            return 0
        nb = i >> 3
        r = int.from_bytes(self.buf[:nb], "little").bit_count()
        rem = i & 7
        if rem:
            r += POP8[self.buf[nb] & ((1 << rem) - 1)]
        return r

    def select(self, bitval, j):
        """Position of the j-th bitval, or None if fewer occur."""
        need = j
        buf = self.buf
        full = self.length >> 3
        for bi in range(full):
            byte = buf[bi] if bitval else ~buf[bi] & 0xFF
            c = POP8[byte]
            if c >= need:
                return (bi << 3) + SEL8[byte][need - 1] + 1
            need -= c
        rem = self.length & 7
        if rem:
            byte = buf[full] if bitval else ~buf[full] & 0xFF
            byte &= (1 << rem) - 1
            if POP8[byte] >= need:
                return (full << 3) + SEL8[byte][need - 1] + 1
        return None

    def insert(self, i, v):
        x = buf_to_int(self.buf)
        i -= 1
        low = x & ((1 << i) - 1)
        x = ((x >> i) << (i + 1)) | ((v & 1) << i) | low
        self.length += 1
        self.buf = int_to_buf(x, self.length)

    def delete(self, i):
        x = buf_to_int(self.buf)
        i -= 1
        bit = (x >> i) & 1
        x = ((x >> (i + 1)) << i) | (x & ((1 << i) - 1))
        self.length -= 1
        self.buf = int_to_buf(x, self.length)
        return bit

    def write(self, i, v):
        i -= 1
        bi, off = i >> 3, i & 7
        prev = (self.buf[bi] >> off) & 1
        if prev != v:
            self.buf[bi] ^= 1 << off
        return prev

    def storage_exact(self):
        return len(self.buf) == chunk_bytes_for(self.length)


class StaticLeaf:
    """Immutable bit block with precomputed rank/select support.

    scount[k] is the rank at the start of superblock k (one extra entry for
    the end), brel[t] the rank of block t relative to its superblock.
    sel1/sel0 sample the position of every 512th occurrence.  level records
    which tree level's subtree this leaf stands in for.
    """

    __slots__ = ("buf", "length", "ones", "scount", "brel", "sel1", "sel0", "level")

    def __init__(self, buf, length, level=1):
        assert length >= 1
        self.buf = bytes(buf)
        self.length = length
        self.level = level
        self._build()

    def _build(self):
        buf, length = self.buf, self.length
        nblocks = (length + BLOCK_BITS - 1) // BLOCK_BITS
        scount = [0]
        brel = []
        sel1 = []
        sel0 = []
        ones = 0
        zeros = 0
        next1 = 1
        next0 = 1
        for t in range(nblocks):
            if t & 7 == 0 and t:
                scount.append(ones)
            brel.append(ones - scount[-1])
            word = int.from_bytes(buf[t * 8:t * 8 + 8], "little")
            width = min(BLOCK_BITS, length - t * BLOCK_BITS)
            c1 = word.bit_count()
            c0 = width - c1
            if ones + c1 >= next1:
                while ones + c1 >= next1:
                    sel1.append(t * BLOCK_BITS + _select_in_word(word, next1 - ones) + 1)
                    next1 += SELECT_SAMPLE
            if zeros + c0 >= next0:
                zword = ~word & ((1 << width) - 1)
                while zeros + c0 >= next0:
                    sel0.append(t * BLOCK_BITS + _select_in_word(zword, next0 - zeros) + 1)
                    next0 += SELECT_SAMPLE
            ones += c1
            zeros += c0
        scount.append(ones)
        self.ones = ones
        self.scount = scount
        self.brel = brel
        self.sel1 = sel1
        self.sel0 = sel0

    def payload(self):
        return buf_to_int(self.buf), self.length

    def count1(self):
        return self.ones

    def access(self, i):
        i -= 1
        return (self.buf[i >> 3] >> (i & 7)) & 1

    def rank1(self, i):
        if i <= 0:
            return 0
        if i >= self.length:
            return self.ones
        t = i >> 6
        word = int.from_bytes(self.buf[t * 8:t * 8 + 8], "little")
        return (
            self.scount[i >> 9]
            + self.brel[t]
            + (word & ((1 << (i & 63)) - 1)).bit_count()
        )

    def _word(self, t):
        return int.from_bytes(self.buf[t * 8:t * 8 + 8], "little")

    def select(self, bitval, j):
        if j < 1:
            return None
        return self._select1(j) if bitval else self._select0(j)

    def _select1(self, j):
        if j > self.ones:
            return None
        sel = self.sel1
        k = (j - 1) // SELECT_SAMPLE
        lo = (sel[k] - 1) >> 9
        hi = (sel[k + 1] - 1) >> 9 if k + 1 < len(sel) else len(self.scount) - 2
        scount = self.scount
        while lo < hi:
            mid = (lo + hi) >> 1
            if scount[mid + 1] >= j:
                hi = mid
            else:
                lo = mid + 1
        r = j - scount[lo]
        t = lo << 3
        while True:
            c = self._word(t).bit_count()
            if c >= r:
                return t * BLOCK_BITS + _select_in_word(self._word(t), r) + 1
            r -= c
            t += 1

    def _select0(self, j):
        if j > self.length - self.ones:
            return None
        sel = self.sel0
        k = (j - 1) // SELECT_SAMPLE
        lo = (sel[k] - 1) >> 9
        hi = (sel[k + 1] - 1) >> 9 if k + 1 < len(sel) else len(self.scount) - 2
        scount = self.scount
        length = self.length
        while lo < hi:
            mid = (lo + hi) >> 1
            if min(SUPER_BITS * (mid + 1), length) - scount[mid + 1] >= j:
                hi = mid
            else:
                lo = mid + 1
        r = j - (SUPER_BITS * lo - scount[lo])
        t = lo << 3
        while True:
            width = min(BLOCK_BITS, length - t * BLOCK_BITS)
            zword = ~self._word(t) & ((1 << width) - 1)
            c = zword.bit_count()
            if c >= r:
                return t * BLOCK_BITS + _select_in_word(zword, r) + 1
            r -= c
            t += 1

    def self_check(self):
        """Recompute the directory by scan; returns a list of defects."""
        problems = []
        x, n = self.payload()
        if x.bit_count() != self.ones:
            problems.append("static leaf: cached ones differs from payload popcount")
        if x >> n:
            problems.append("static leaf: payload has bits beyond its length")
        for k in range(len(self.scount)):
            p = min(k * SUPER_BITS, n)
            if (x & ((1 << p) - 1)).bit_count() != self.scount[k]:
                problems.append(f"static leaf: superblock count {k} wrong")
        for t in range(len(self.brel)):
            p = t * BLOCK_BITS
            expect = (x & ((1 << p) - 1)).bit_count() - self.scount[p >> 9]
            if self.brel[t] != expect:
                problems.append(f"static leaf: block count {t} wrong")
        for name, sel, bitval in (("sel1", self.sel1, 1), ("sel0", self.sel0, 0)):
            if any(a >= c for a, c in zip(sel, sel[1:])):
                problems.append(f"static leaf: {name} samples not increasing")
            for k, pos in enumerate(sel):
                if self.access(pos) != bitval:
                    problems.append(f"static leaf: {name} sample {k} off payload")
        if len(self.sel1) != (self.ones + SELECT_SAMPLE - 1) // SELECT_SAMPLE:
            problems.append("static leaf: sel1 sample count wrong")
        zeros = n - self.ones
        if len(self.sel0) != (zeros + SELECT_SAMPLE - 1) // SELECT_SAMPLE:
            problems.append("static leaf: sel0 sample count wrong")
        return problems


def build_static(buf, length, level=1):
    """Preprocess a packed payload for constant-bounded queries."""
    return StaticLeaf(buf, length, level)
