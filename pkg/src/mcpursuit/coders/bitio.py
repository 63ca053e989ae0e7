"""Bit-exact prefix-code plumbing: bitstrings, writer/reader, Elias delta.

Bits are MSB-first within each byte.  Elias delta stands in for the
self-delimiting integer code counted by log*; its length never exceeds
log*(v) + 3 bits (asserted in tests).
"""

from __future__ import annotations

__all__ = ["BitString", "BitWriter", "BitReader", "elias_delta_len"]


class BitString:
    """Immutable bit sequence (byte-padded storage plus exact bit length)."""

    __slots__ = ("data", "nbits")

    def __init__(self, data: bytes, nbits: int):
        if nbits < 0 or len(data) != (nbits + 7) // 8:
            raise ValueError("data length does not match nbits")
        self.data = bytes(data)
        self.nbits = int(nbits)

    def __len__(self) -> int:
        return self.nbits

    def bit(self, i: int) -> int:
        if not 0 <= i < self.nbits:
            raise IndexError(i)
        return (self.data[i >> 3] >> (7 - (i & 7))) & 1

    def is_strict_prefix_of(self, other: "BitString") -> bool:
        if self.nbits >= other.nbits:
            return False
        full, rem = divmod(self.nbits, 8)
        if self.data[:full] != other.data[:full]:
            return False
        if rem == 0:
            return True
        mask = 0xFF << (8 - rem) & 0xFF
        return (self.data[full] & mask) == (other.data[full] & mask)

    def __eq__(self, other):
        if not isinstance(other, BitString):
            return NotImplemented
        return self.nbits == other.nbits and self.data == other.data

    def __hash__(self):
        return hash((self.nbits, self.data))

    def __repr__(self):
        shown = "".join(str(self.bit(i)) for i in range(min(self.nbits, 48)))
        tail = "..." if self.nbits > 48 else ""
        return f"BitString({self.nbits}b: {shown}{tail})"


class BitWriter:
    __slots__ = ("_buf", "_acc", "_fill")

    def __init__(self):
        self._buf = bytearray()
        self._acc = 0
        self._fill = 0

    @property
    def nbits(self) -> int:
        return 8 * len(self._buf) + self._fill

    def write_bit(self, b: int):
        self._acc = (self._acc << 1) | (b & 1)
        self._fill += 1
        if self._fill == 8:
            self._buf.append(self._acc)
            self._acc = 0
            self._fill = 0

    def write_uint(self, value: int, width: int):
        """Fixed-width unsigned integer, MSB first.  width may be 0."""
        if width < 0 or value < 0 or (width < value.bit_length()):
            raise ValueError(f"value {value} does not fit in {width} bits")
        for i in range(width - 1, -1, -1):
            self.write_bit((value >> i) & 1)

    def write_elias_delta(self, value: int):
        """Prefix-free code for value >= 1."""
        if value < 1:
            raise ValueError("elias delta encodes integers >= 1")
        nb = value.bit_length()
        lb = nb.bit_length()
        self.write_uint(0, lb - 1)
        self.write_uint(nb, lb)
        self.write_uint(value & ((1 << (nb - 1)) - 1), nb - 1)

    def write_bits(self, bits: BitString):
        for i in range(bits.nbits):
            self.write_bit(bits.bit(i))

    def finish(self) -> BitString:
        nbits = self.nbits
        buf = bytes(self._buf)
        if self._fill:
            buf += bytes([(self._acc << (8 - self._fill)) & 0xFF])
        return BitString(buf, nbits)


def elias_delta_len(value: int) -> int:
    if value < 1:
        raise ValueError("elias delta encodes integers >= 1")
    nb = value.bit_length()
    return 2 * nb.bit_length() - 1 + nb - 1


class BitReader:
    __slots__ = ("_bits", "pos")

    def __init__(self, bits: BitString):
        self._bits = bits
        self.pos = 0

    @property
    def remaining(self) -> int:
        return self._bits.nbits - self.pos

    def read_bit(self) -> int:
        if self.pos >= self._bits.nbits:
            raise ValueError("bitstring exhausted")
        b = self._bits.bit(self.pos)
        self.pos += 1
        return b

    def read_uint(self, width: int) -> int:
        v = 0
        for _ in range(width):
            v = (v << 1) | self.read_bit()
        return v

    def read_elias_delta(self) -> int:
        zeros = 0
        while self.read_bit() == 0:
            zeros += 1
        nb = (1 << zeros) | self.read_uint(zeros)
        return (1 << (nb - 1)) | self.read_uint(nb - 1)
