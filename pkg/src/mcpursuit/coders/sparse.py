"""Sparse-signal coder: self-delimiting k, enumerative support code,
k quantized magnitudes.

The support is coded by its colex rank among all C(n, k) subsets in
exactly ceil(log2 C(n, k)) bits (big-int binomials, exactly decodable),
which never exceeds the n*h(k/n) counting bound it realizes.
"""

from __future__ import annotations

import math

import numpy as np

from ..quantize import QuantizedSignal
from .base import Coder
from .bitio import BitReader, BitString, BitWriter

__all__ = ["SparseCoder", "sparse_support_bits", "rank_subset", "unrank_subset"]


def rank_subset(support) -> int:
    """Colex rank of a sorted index subset."""
    return sum(math.comb(c, j + 1) for j, c in enumerate(support))


def unrank_subset(r: int, n: int, k: int) -> list[int]:
    """Sorted k-subset of {0..n-1} with colex rank r."""
    out = [0] * k
    while k > 0:
        n -= 1
        offset = math.comb(n, k)
        if r >= offset:
            r -= offset
            k -= 1
            out[k] = n
    return out


def _k_field_width(n: int) -> int:
    # ceil(log2(n+1)), exact
    return n.bit_length()


def _rank_width(n: int, k: int) -> int:
    # ceil(log2 C(n,k)), exact even for huge binomials
    return (math.comb(n, k) - 1).bit_length()


def sparse_support_bits(n: int, k: int) -> int:
    """ceil(log2 C(n,k)) + ceil(log2(n+1)): enumerative support code plus a
    self-delimiting k."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return _rank_width(n, k) + _k_field_width(n)


class SparseCoder(Coder):
    name = "sparse"
    header_bits = 8

    def code_len_by_k(self, n: int, m: int, k: int) -> int:
        return self.header_bits + sparse_support_bits(n, k) + k * m

    def code_len(self, q: QuantizedSignal) -> int:
        k = int(np.count_nonzero(q.indices))
        return self.code_len_by_k(q.n, q.m, k)

    def code_len_table(self, n: int, m: int) -> np.ndarray:
        """bits as a function of the support size, k = 0..n."""
        return np.array([self.code_len_by_k(n, m, k) for k in range(n + 1)])

    def encode(self, q: QuantizedSignal) -> BitString:
        n, m = q.n, q.m
        support = np.flatnonzero(q.indices)
        k = support.size
        w = BitWriter()
        self._write_header(w)
        w.write_uint(k, _k_field_width(n))
        w.write_uint(rank_subset(support.tolist()), _rank_width(n, k))
        for j in support:
            w.write_uint(int(q.indices[j]), m)
        return w.finish()

    def decode(self, bits: BitString, n: int, m: int) -> QuantizedSignal:
        r = BitReader(bits)
        self._read_header(r)
        k = r.read_uint(_k_field_width(n))
        if k > n:
            raise ValueError("corrupt sparse codeword: k > n")
        support = unrank_subset(r.read_uint(_rank_width(n, k)), n, k)
        idx = np.zeros(n, dtype=np.int64)
        for j in support:
            v = r.read_uint(m)
            if v == 0:
                raise ValueError("corrupt sparse codeword: zero on support")
            idx[j] = v
        return QuantizedSignal(idx, m)

    def prop2_constant(self, n: int) -> int:
        """A constant c valid in bits <= k*m + n*h(k/n) + 0.5*log2(n) + c for
        this n (uses C(n,k) <= 2^(n h(k/n)))."""
        return self.header_bits + _k_field_width(n) + 1
