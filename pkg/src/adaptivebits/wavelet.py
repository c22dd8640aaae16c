"""Adaptive dynamic sequence over [1..sigma] as stacked bitvectors.

Level d holds bit d (most significant first) of every symbol's code
(symbol - 1), reordered so that each level groups by the bit prefix above
it.  Symbol access, rank and select reduce to bit operations per level;
insert and delete place exactly one bit update per level at the mapped
position.  Adaptivity carries through: the query:update ratio is the same
on every level's bitvector.
"""

from .bitvector import AdaptiveBitvector
from .oracle import NaiveBits


class AdaptiveWaveletMatrix:
    """Sequence of symbols in [1..sigma] with access/rank_c/select_c and
    insert/delete, one adaptive bitvector per code bit."""

    def __init__(self, sigma):
        if sigma < 2:
            raise ValueError(f"alphabet size {sigma} must be at least 2")
        self.sigma = sigma
        self.nlevels = (sigma - 1).bit_length()
        self.levels = [AdaptiveBitvector() for _ in range(self.nlevels)]
        self.zeros = [0] * self.nlevels
        self.n = 0

    @classmethod
    def from_symbols(cls, sigma, symbols):
        """Bulk-load: build each level's payload by stable partition, then
        bulk-load the level bitvectors; no per-symbol insertion."""
        wm = cls(sigma)
        order = list(symbols)
        for c in order:
            wm._check_symbol(c)
        wm.n = len(order)
        for d in range(wm.nlevels):
            x = 0
            zeros_part = []
            ones_part = []
            for idx, c in enumerate(order):
                if wm._bit(c, d):
                    x |= 1 << idx
                    ones_part.append(c)
                else:
                    zeros_part.append(c)
            wm.levels[d] = AdaptiveBitvector.from_payload(x, len(order))
            wm.zeros[d] = len(zeros_part)
            order = zeros_part + ones_part
        return wm

    def __len__(self):
        return self.n

    def _bit(self, c, d):
        return (c - 1 >> (self.nlevels - 1 - d)) & 1

    def _check_index(self, i, lo, hi, what):
        if not lo <= i <= hi:
            raise ValueError(f"{what} index {i} out of range [{lo}, {hi}]")

    def _check_symbol(self, c):
        if not 1 <= c <= self.sigma:
            raise ValueError(f"symbol {c} out of range [1, {self.sigma}]")

    def access(self, i):
        self._check_index(i, 1, self.n, "access")
        c = 0
        pos = i
        for d in range(self.nlevels):
            bit, r1 = self.levels[d].access_and_rank1(pos)
            c = (c << 1) | bit
            pos = self.zeros[d] + r1 if bit else pos - r1
        return c + 1

    def rank(self, c, i):
        """Occurrences of c among positions 1..i."""
        self._check_symbol(c)
        self._check_index(i, 0, self.n, "rank")
        s, e = 0, i
        for d in range(self.nlevels):
            if s == e:
                return 0
            bv = self.levels[d]
            bit = self._bit(c, d)
            rs = bv.rank(bit, s) if s else 0
            re = bv.rank(bit, e) if e else 0
            base = self.zeros[d] if bit else 0
            s, e = base + rs, base + re
        return e - s

    def select(self, c, j):
        """Position of the j-th occurrence of c, or None if fewer exist."""
        self._check_symbol(c)
        if j < 1:
            raise ValueError(f"select rank {j} out of range [1, ...]")
        s, e = 0, self.n
        for d in range(self.nlevels):
            bv = self.levels[d]
            bit = self._bit(c, d)
            rs = bv.rank(bit, s) if s else 0
            re = bv.rank(bit, e) if e else 0
            base = self.zeros[d] if bit else 0
            s, e = base + rs, base + re
        if j > e - s:
            return None
        p = s + j
        for d in range(self.nlevels - 1, -1, -1):
            bv = self.levels[d]
            if self._bit(c, d):
                p = bv.select(1, p - self.zeros[d])
            else:
                p = bv.select(0, p)
            if p is None:  # defensive: count was verified above
                return None
        return p

    def insert(self, i, c):
        self._check_index(i, 1, self.n + 1, "insert")
        self._check_symbol(c)
        pos = i
        for d in range(self.nlevels):
            bit = self._bit(c, d)
            r = self.levels[d].insert_and_rank(pos, bit)
            if bit:
                pos = self.zeros[d] + r
            else:
                self.zeros[d] += 1
                pos = r
        self.n += 1

    def delete(self, i):
        """Remove and return the symbol at position i."""
        self._check_index(i, 1, self.n, "delete")
        code = 0
        pos = i
        for d in range(self.nlevels):
            removed, r = self.levels[d].delete_and_rank(pos)
            code = (code << 1) | removed
            if removed:
                pos = self.zeros[d] + r
            else:
                self.zeros[d] -= 1
                pos = r
        self.n -= 1
        return code + 1

    def level_stats(self):
        return [bv.stats() for bv in self.levels]

    def check(self):
        """Cross-level invariants plus every level's own validation.

        Uses payload snapshots, not queries, so counters stay untouched.
        """
        problems = []
        for d, bv in enumerate(self.levels):
            for p in bv.check():
                problems.append(f"level {d}: {p}")
            if bv.n != self.n:
                problems.append(f"level {d}: length {bv.n} != {self.n}")
            zeros = bv.n - bv.payload_int().bit_count()
            if zeros != self.zeros[d]:
                problems.append(
                    f"level {d}: cached zeros {self.zeros[d]} but payload has {zeros}")
        if self.n and not problems:
            shadows = [NaiveBits(bv.to01()) for bv in self.levels]
            step = max(1, self.n // 64)
            for i in range(1, self.n + 1, step):
                pos = i
                c = 0
                for d, sh in enumerate(shadows):
                    bit = sh.access(pos)
                    c = (c << 1) | bit
                    r1 = sh.rank(1, pos)
                    pos = self.zeros[d] + r1 if bit else pos - r1
                if not 1 <= c + 1 <= self.sigma:
                    problems.append(f"position {i} decodes to {c + 1} outside [1, {self.sigma}]")
        return problems

    def to_list(self):
        shadows = [NaiveBits(bv.to01()) for bv in self.levels]
        out = []
        for i in range(1, self.n + 1):
            pos = i
            c = 0
            for d, sh in enumerate(shadows):
                bit = sh.access(pos)
                c = (c << 1) | bit
                r1 = sh.rank(1, pos)
                pos = self.zeros[d] + r1 if bit else pos - r1
            out.append(c + 1)
        return out
