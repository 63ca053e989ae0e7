"""Universal member of the coder dictionary: LZ78 over the concatenated
index bits, with a raw fallback so the length never exceeds nm plus the
fixed overhead (the Lemma-1 budget).

Phrase pointers use the minimal width for the current dictionary size;
the final phrase may omit its extension bit because the decoder knows the
total bit count nm from the side information.
"""

from __future__ import annotations

import numpy as np

from ..quantize import QuantizedSignal
from .base import Coder
from .bitio import BitReader, BitString, BitWriter

__all__ = ["LZCoder", "lz_bits"]


def _signal_bits(q: QuantizedSignal) -> list[int]:
    out = []
    for j in q.indices:
        j = int(j)
        out.extend((j >> (q.m - 1 - i)) & 1 for i in range(q.m))
    return out


def _lz78_parse(bits: list[int]):
    """Yield (pointer, pointer_width, ext_bit_or_None) over the input."""
    table = {(): 0}
    node = ()
    emitted = []
    for b in bits:
        nxt = node + (b,)
        if nxt in table:
            node = nxt
            continue
        emitted.append((table[node], (len(table) - 1).bit_length(), b))
        table[nxt] = len(table)
        node = ()
    if node:
        emitted.append((table[node], (len(table) - 1).bit_length(), None))
    return emitted


def _lz_payload_len(bits: list[int]) -> int:
    return sum(w + (0 if b is None else 1) for _, w, b in _lz78_parse(bits))


class LZCoder(Coder):
    name = "lz78"
    header_bits = 8

    def _paths(self, q: QuantizedSignal):
        raw_len = q.n * q.m
        lz_len = _lz_payload_len(_signal_bits(q))
        return raw_len, lz_len

    def code_len(self, q: QuantizedSignal) -> int:
        raw_len, lz_len = self._paths(q)
        return self.header_bits + 1 + min(raw_len, lz_len)

    def encode(self, q: QuantizedSignal) -> BitString:
        raw_len, lz_len = self._paths(q)
        bits = _signal_bits(q)
        w = BitWriter()
        self._write_header(w)
        if lz_len < raw_len:
            w.write_bit(1)
            for ptr, width, ext in _lz78_parse(bits):
                w.write_uint(ptr, width)
                if ext is not None:
                    w.write_bit(ext)
        else:
            w.write_bit(0)
            for b in bits:
                w.write_bit(b)
        return w.finish()

    def decode(self, bits: BitString, n: int, m: int) -> QuantizedSignal:
        r = BitReader(bits)
        self._read_header(r)
        total = n * m
        out: list[int] = []
        if r.read_bit() == 0:
            out = [r.read_bit() for _ in range(total)]
        else:
            table = [()]
            while len(out) < total:
                width = (len(table) - 1).bit_length()
                phrase = table[r.read_uint(width)]
                out.extend(phrase)
                if len(out) > total:
                    raise ValueError("corrupt LZ78 codeword: overrun")
                if len(out) < total:
                    b = r.read_bit()
                    out.append(b)
                    table.append(phrase + (b,))
        idx = np.zeros(n, dtype=np.int64)
        for i in range(n):
            v = 0
            for b in out[i * m : (i + 1) * m]:
                v = (v << 1) | b
            idx[i] = v
        return QuantizedSignal(idx, m)

    def lemma1_constant(self) -> int:
        """c in bits <= n*m + c (raw fallback path)."""
        return self.header_bits + 1


def lz_bits(q: QuantizedSignal) -> int:
    """LZ78 bit count of q under the fallback coder (exact length)."""
    return LZCoder().code_len(q)
