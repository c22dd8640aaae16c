"""Reference implementations answering by direct scan or splice.

These back every randomized equivalence test and the harness --verify mode,
so they ship with the library.  No tree, no directory, no caching: rank is a
masked popcount of the prefix, select a word-by-word scan, updates are plain
splices.  Performance is a non-goal.
"""

from .bitio import POP8, SEL8, int_from_bits01


class NaiveBits:
    """Growable flat bit sequence; position 1 is the LSB of the payload."""

    def __init__(self, bits=""):
        if isinstance(bits, str):
            self.x = int_from_bits01(bits)
            self.n = len(bits)
        else:
            self.x = 0
            self.n = 0
            for v in bits:
                self.x |= (v & 1) << self.n
                self.n += 1

    def __len__(self):
        return self.n

    def access(self, i):
        return (self.x >> (i - 1)) & 1

    def rank(self, bitval, i):
        r1 = (self.x & ((1 << i) - 1)).bit_count()
        return r1 if bitval else i - r1

    def select(self, bitval, j):
        if j < 1:
            return None
        data = self.x.to_bytes((self.n + 7) // 8, "little") if self.n else b""
        need = j
        full = self.n >> 3
        for bi in range(full):
            byte = data[bi] if bitval else ~data[bi] & 0xFF
            c = POP8[byte]
            if c >= need:
                return (bi << 3) + SEL8[byte][need - 1] + 1
            need -= c
        rem = self.n & 7
        if rem:
            byte = data[full] if bitval else ~data[full] & 0xFF
            byte &= (1 << rem) - 1
            if POP8[byte] >= need:
                return (full << 3) + SEL8[byte][need - 1] + 1
        return None

    def insert(self, i, v):
        p = i - 1
        low = self.x & ((1 << p) - 1)
        self.x = ((self.x >> p) << (p + 1)) | ((v & 1) << p) | low
        self.n += 1

    def delete(self, i):
        p = i - 1
        bit = (self.x >> p) & 1
        self.x = ((self.x >> (p + 1)) << p) | (self.x & ((1 << p) - 1))
        self.n -= 1
        return bit

    def write(self, i, v):
        p = i - 1
        prev = (self.x >> p) & 1
        if prev != v:
            self.x ^= 1 << p
        return prev

    def payload_bytes(self):
        return self.x.to_bytes((self.n + 7) // 8, "little") if self.n else b""


class NaiveCells:
    """Growable flat sequence of width-limited integers."""

    def __init__(self, cell_width, values=()):
        self.cell_width = cell_width
        self.cells = list(values)

    def __len__(self):
        return len(self.cells)

    def read(self, i):
        return self.cells[i - 1]

    def write(self, i, v):
        prev = self.cells[i - 1]
        self.cells[i - 1] = v
        return prev

    def insert(self, i, v):
        self.cells.insert(i - 1, v)

    def delete(self, i):
        return self.cells.pop(i - 1)


class NaiveSeq:
    """Growable flat symbol sequence over [1..sigma]."""

    def __init__(self, sigma, symbols=()):
        self.sigma = sigma
        self.seq = list(symbols)

    def __len__(self):
        return len(self.seq)

    def access(self, i):
        return self.seq[i - 1]

    def rank(self, c, i):
        return self.seq[:i].count(c)

    def select(self, c, j):
        if j < 1:
            return None
        count = 0
        for pos, sym in enumerate(self.seq, 1):
            if sym == c:
                count += 1
                if count == j:
                    return pos
        return None

    def insert(self, i, c):
        self.seq.insert(i - 1, c)

    def delete(self, i):
        return self.seq.pop(i - 1)
