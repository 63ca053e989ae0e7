"""Dictionary coder: cheapest member plus a fixed-width member index.

bits = min over representable members + ceil(log2(#members)), exactly.
Members that raise Unrepresentable are skipped; ties go to the lowest
member index (deterministic).
"""

from __future__ import annotations

from ..errors import Unrepresentable
from ..quantize import QuantizedSignal
from .base import Coder
from .bitio import BitReader, BitString, BitWriter
from .lz78 import LZCoder
from .sparse import SparseCoder

__all__ = ["DictionaryCoder", "standard_dictionary"]


class DictionaryCoder(Coder):
    name = "dictionary"

    def __init__(self, members: list[Coder]):
        if not members:
            raise ValueError("dictionary needs at least one member")
        self.members = list(members)

    @property
    def header_bits(self) -> int:
        return (len(self.members) - 1).bit_length()

    def _best(self, q: QuantizedSignal):
        best = None
        for i, coder in enumerate(self.members):
            try:
                nbits = coder.code_len(q)
            except Unrepresentable:
                continue
            if best is None or nbits < best[1]:
                best = (i, nbits)
        if best is None:
            raise Unrepresentable("no dictionary member can represent this signal")
        return best

    def code_len(self, q: QuantizedSignal) -> int:
        return self.header_bits + self._best(q)[1]

    def encode(self, q: QuantizedSignal) -> BitString:
        i, _ = self._best(q)
        w = BitWriter()
        w.write_uint(i, self.header_bits)
        w.write_bits(self.members[i].encode(q))
        return w.finish()

    def decode(self, bits: BitString, n: int, m: int) -> QuantizedSignal:
        r = BitReader(bits)
        i = r.read_uint(self.header_bits)
        if i >= len(self.members):
            raise ValueError("corrupt dictionary codeword: bad member index")
        rest = BitWriter()
        while r.remaining:
            rest.write_bit(r.read_bit())
        return self.members[i].decode(rest.finish(), n, m)

    def lemma1_constant(self) -> int:
        """c in bits <= n*m + c, via the LZ raw fallback member."""
        for coder in self.members:
            if isinstance(coder, LZCoder):
                return self.header_bits + coder.lemma1_constant()
        raise ValueError("dictionary has no LZ member; Lemma-1 ceiling unavailable")


def standard_dictionary(poly: Coder | None = None, low_rank: Coder | None = None):
    """Sparse + LZ78 (total on every grid signal), plus optional structured
    members when the caller knows the signal family."""
    members: list[Coder] = [SparseCoder(), LZCoder()]
    if poly is not None:
        members.append(poly)
    if low_rank is not None:
        members.append(low_rank)
    return DictionaryCoder(members)
