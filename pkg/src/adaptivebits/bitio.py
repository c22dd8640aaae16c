"""Packed-bit primitives shared by leaves, oracles and bulk builders.

Payload convention: a bit payload of logical length L lives in a bytes-like
buffer, position p (1-based) at bit (p-1) & 7 of byte (p-1) >> 3, i.e. LSB
first.  Buffers are allocated in whole 64-bit chunks: exactly
8 * ceil(L / 64) bytes, padding bits zero.
"""

CHUNK_BITS = 64
CHUNK_BYTES = 8

POP8 = tuple(bin(i).count("1") for i in range(256))
# SEL8[byte] lists the 0-based offsets of the set bits, low to high.
SEL8 = tuple(tuple(j for j in range(8) if (i >> j) & 1) for i in range(256))


def chunk_bytes_for(nbits):
    """Byte size of a buffer holding nbits in whole 64-bit chunks."""
    return CHUNK_BYTES * ((nbits + CHUNK_BITS - 1) // CHUNK_BITS)


def int_to_buf(x, nbits):
    """Pack the low nbits of x into an exactly sized bytearray."""
    return bytearray(x.to_bytes(chunk_bytes_for(nbits), "little"))


def buf_to_int(buf):
    return int.from_bytes(buf, "little")


def read_bits(data, start, nbits):
    """Extract nbits starting at bit offset start from a bytes-like."""
    if nbits == 0:
        return 0
    first = start >> 3
    last = (start + nbits + 7) >> 3
    v = int.from_bytes(data[first:last], "little") >> (start & 7)
    return v & ((1 << nbits) - 1)


class BitWriter:
    """Append-only bit sink producing a chunk-padded buffer."""

    def __init__(self):
        self._acc = 0
        self._accbits = 0
        self._out = bytearray()
        self.length = 0

    def append(self, x, nbits):
        """Append the low nbits of x."""
        if nbits == 0:
            return
        self._acc |= x << self._accbits
        self._accbits += nbits
        self.length += nbits
        whole = self._accbits >> 3
        if whole:
            self._out += (self._acc & ((1 << (whole * 8)) - 1)).to_bytes(whole, "little")
            self._acc >>= whole * 8
            self._accbits &= 7

    def getvalue(self):
        """Finish and return (buffer, nbits); the writer stays usable."""
        buf = bytearray(self._out)
        if self._accbits:
            buf.append(self._acc)
        buf += b"\x00" * (chunk_bytes_for(self.length) - len(buf))
        return buf, self.length


def int_from_bits01(s):
    """'10110' -> payload int with position 1 ('1' here) at the LSB."""
    x = 0
    for i, ch in enumerate(s):
        if ch == "1":
            x |= 1 << i
        elif ch != "0":
            raise ValueError(f"not a bit: {ch!r}")
    return x


def bits01_to_str(x, n):
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))
