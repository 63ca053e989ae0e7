"""Low-rank matrix coder: quantized SVD factors.

Factor resolutions follow the reconstruction chain
    r*2^(-m_u+1) + r*2^(-m_sigma) + r*2^(-m_v+1) <= 2^(-m+1)
with m_sigma = ceil(m + log2(3r)) - 1 and m_u = m_v = m_sigma + 1, so the
decoded matrix is entrywise within 2^(-m+1) of the source.  Singular
vectors live in [-1,1] and are shifted to [0,1] before truncation (one
shifted-domain flag bit is charged on the vector-signal path); rank 0 is
a 1-bit empty flag since log*(0) is undefined.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import Unrepresentable
from ..quantize import QuantizedSignal
from .base import Coder
from .bitio import BitReader, BitString, BitWriter, elias_delta_len

__all__ = ["LowRankCoder", "encode_low_rank", "decode_low_rank", "factor_resolutions"]

_RANK_TOL = 1e-9


def factor_resolutions(r: int, m: int) -> tuple[int, int, int]:
    """(m_u, m_v, m_sigma) for rank r >= 1 at target resolution m."""
    if r < 1:
        raise ValueError("rank must be >= 1")
    m_sigma = math.ceil(m + math.log2(3 * r)) - 1
    return m_sigma + 1, m_sigma + 1, m_sigma


def _trunc_unit(x: np.ndarray, mb: int) -> np.ndarray:
    """Truncate values in [0,1] to mb bits (1 clamps to 1 - 2^-mb)."""
    idx = np.floor(np.ldexp(x, mb)).astype(np.int64)
    np.clip(idx, 0, (1 << mb) - 1, out=idx)
    return idx


def _svd_factors(X: np.ndarray, r: int):
    U, s, Vt = np.linalg.svd(X, full_matrices=False)
    if s.size and s[0] > 1.0 + 1e-9:
        raise ValueError(f"sigma_max = {s[0]:.6g} exceeds 1")
    if s.size > r and s[r] > _RANK_TOL:
        raise ValueError(f"rank exceeds {r}: sigma_{r + 1} = {s[r]:.3g}")
    return U[:, :r], np.clip(s[:r], 0.0, 1.0), Vt[:r, :]


class LowRankCoder(Coder):
    """Coder for M x N matrices with sigma_max <= 1, and (on the signal
    path) for their shifted row-major vectorizations in [0,1]^(M*N)."""

    name = "low_rank"
    header_bits = 8

    def __init__(self, rows: int, cols: int):
        if rows < 1 or cols < 1:
            raise ValueError("matrix dimensions must be >= 1")
        self.rows = rows
        self.cols = cols

    # matrix-level path ------------------------------------------------

    def encode_matrix(self, X: np.ndarray, r: int, m: int) -> BitString:
        X = np.asarray(X, dtype=np.float64)
        if X.shape != (self.rows, self.cols):
            raise ValueError(f"expected a {self.rows}x{self.cols} matrix")
        w = BitWriter()
        self._write_header(w)
        if r == 0:
            if np.any(np.abs(X) > _RANK_TOL):
                raise ValueError("rank 0 requested for a nonzero matrix")
            w.write_bit(0)
            return w.finish()
        w.write_bit(1)
        w.write_elias_delta(r)
        U, s, Vt = _svd_factors(X, r)
        m_u, m_v, m_sigma = factor_resolutions(r, m)
        for col in range(r):
            for v in _trunc_unit((U[:, col] + 1.0) / 2.0, m_u):
                w.write_uint(int(v), m_u)
        for v in _trunc_unit(s, m_sigma):
            w.write_uint(int(v), m_sigma)
        for row in range(r):
            for v in _trunc_unit((Vt[row, :] + 1.0) / 2.0, m_v):
                w.write_uint(int(v), m_v)
        return w.finish()

    def decode_matrix(self, bits: BitString, m: int) -> np.ndarray:
        r_ = BitReader(bits)
        self._read_header(r_)
        if r_.read_bit() == 0:
            return np.zeros((self.rows, self.cols))
        r = r_.read_elias_delta()
        m_u, m_v, m_sigma = factor_resolutions(r, m)
        U = np.empty((self.rows, r))
        for col in range(r):
            for i in range(self.rows):
                U[i, col] = 2.0 * (r_.read_uint(m_u) / (1 << m_u)) - 1.0
        s = np.array([r_.read_uint(m_sigma) / (1 << m_sigma) for _ in range(r)])
        Vt = np.empty((r, self.cols))
        for row in range(r):
            for j in range(self.cols):
                Vt[row, j] = 2.0 * (r_.read_uint(m_v) / (1 << m_v)) - 1.0
        return (U * s) @ Vt

    def matrix_bits(self, r: int, m: int) -> int:
        """Exact length of a rank-r codeword at target resolution m."""
        if r == 0:
            return self.header_bits + 1
        m_u, m_v, m_sigma = factor_resolutions(r, m)
        return (
            self.header_bits
            + 1
            + elias_delta_len(r)
            + r * self.rows * m_u
            + r * self.cols * m_v
            + r * m_sigma
        )

    # vector-signal path (dictionary member) ----------------------------

    def _unshift(self, q: QuantizedSignal) -> np.ndarray:
        return 2.0 * q.values.reshape(self.rows, self.cols) - 1.0

    def encode(self, q: QuantizedSignal) -> BitString:
        """Encode a shifted vectorized low-rank matrix.  The factor target
        is m+2 so grid rounding on decode recovers q exactly."""
        if q.n != self.rows * self.cols:
            raise Unrepresentable(f"signal length != {self.rows}x{self.cols}")
        X = self._unshift(q)
        s = np.linalg.svd(X, compute_uv=False)
        if s.size and s[0] > 1.0:
            raise Unrepresentable("sigma_max of unshifted matrix exceeds 1")
        r = int(np.count_nonzero(s > _RANK_TOL))
        w = BitWriter()
        self._write_header(w)
        w.write_bit(1)  # shifted-domain flag (documented offset bit-cost)
        inner = self.encode_matrix(X, r, q.m + 2)
        w.write_bits(BitString(inner.data, inner.nbits))
        bits = w.finish()
        if self.decode(bits, q.n, q.m) != q:
            raise Unrepresentable("low-rank round trip failed at this resolution")
        return bits

    def code_len(self, q: QuantizedSignal) -> int:
        return self.encode(q).nbits

    def decode(self, bits: BitString, n: int, m: int) -> QuantizedSignal:
        if n != self.rows * self.cols:
            raise ValueError(f"side info n = {n} != {self.rows}x{self.cols}")
        r_ = BitReader(bits)
        self._read_header(r_)
        if r_.read_bit() != 1:
            raise ValueError("corrupt low-rank codeword: missing shift flag")
        rest = BitWriter()
        while r_.remaining:
            rest.write_bit(r_.read_bit())
        X = self.decode_matrix(rest.finish(), m + 2)
        vals = (X.reshape(-1) + 1.0) / 2.0
        idx = np.rint(np.ldexp(vals, m)).astype(np.int64)
        np.clip(idx, 0, (1 << m) - 1, out=idx)
        return QuantizedSignal(idx, m)

    def prop7_constant(self, r: int) -> float:
        """c in bits <= r(M+N+1)m + log*(r) + r(M+N+1)log2(3r) - r + c for
        this (M, N) and rank r >= 1."""
        from .base import log_star

        slack = (
            self.header_bits
            + 1
            + elias_delta_len(r)
            - log_star(r)
            + r * (self.rows + self.cols + 1)  # ceil slack in log2(3r)
        )
        return slack


def encode_low_rank(X, r: int, m: int) -> tuple[int, BitString]:
    """(bits, bitstring) for an M x N matrix with sigma_max <= 1 and
    rank <= r, at target entrywise error 2^(-m+1)."""
    X = np.asarray(X, dtype=np.float64)
    coder = LowRankCoder(*X.shape)
    bs = coder.encode_matrix(X, r, m)
    return bs.nbits, bs


def decode_low_rank(bits: BitString, rows: int, cols: int, m: int) -> np.ndarray:
    return LowRankCoder(rows, cols).decode_matrix(bits, m)
