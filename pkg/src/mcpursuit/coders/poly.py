"""Piecewise-polynomial coder over n equispaced samples of [0,1].

Each segment is a polynomial in the local coordinate tau = t - t_start
with coefficients in [0,1) summing to < 1.  Coefficients are truncated at
m' = m + ceil(log2(N+1)) + 1 bits so the induced sample error is at most
(N+1) * 2^-m' <= 2^-(m+1); decoding therefore rounds samples to the
nearest m-bit grid point, which lands within 2^-m of the source signal.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import Unrepresentable
from ..quantize import QuantizedSignal
from .base import Coder
from .bitio import BitReader, BitString, BitWriter

__all__ = ["PiecewisePolyCoder", "encode_piecewise_poly", "decode_piecewise_poly"]


def coeff_resolution(m: int, degree_max: int) -> int:
    return m + math.ceil(math.log2(degree_max + 1)) + 1


def _validate_segments(segments, n, degree_max, q_max):
    if not segments:
        raise ValueError("need at least one segment")
    if len(segments) > q_max + 1:
        raise Unrepresentable(
            f"{len(segments)} segments exceed configured Q+1 = {q_max + 1}"
        )
    starts = [s for s, _ in segments]
    if starts[0] != 0 or any(b <= a for a, b in zip(starts, starts[1:])):
        raise ValueError("segment starts must begin at 0 and strictly increase")
    if starts[-1] >= n:
        raise ValueError("segment start beyond signal length")
    for _, coeffs in segments:
        c = np.asarray(coeffs, dtype=np.float64)
        if c.ndim != 1 or not 1 <= c.size <= degree_max + 1:
            raise Unrepresentable(f"segment degree exceeds configured N = {degree_max}")
        if c.min() < 0.0 or c.max() > 1.0 or c.sum() >= 1.0:
            raise Unrepresentable("coefficients must lie in [0,1] with sum < 1")


def _eval_segments(segments, n, mp=None):
    """Sample the piecewise polynomial at t = i/n; coefficients are
    truncated at mp bits first when mp is given."""
    t = np.arange(n) / n
    starts = [s for s, _ in segments] + [n]
    out = np.empty(n)
    for (s, coeffs), e in zip(segments, starts[1:]):
        c = np.asarray(coeffs, dtype=np.float64)
        if mp is not None:
            c = np.floor(np.ldexp(c, mp)) / (1 << mp)
            np.clip(c, 0.0, None, out=c)
        tau = t[s:e] - s / n
        out[s:e] = np.polyval(c[::-1], tau)
    return out


class PiecewisePolyCoder(Coder):
    """Coder for signals sampled from piecewise polynomials with at most
    q_max singularities and degree <= degree_max."""

    name = "piecewise_poly"
    header_bits = 8

    def __init__(self, q_max: int, degree_max: int):
        if q_max < 0 or degree_max < 0:
            raise ValueError("q_max and degree_max must be >= 0")
        self.q_max = q_max
        self.degree_max = degree_max

    def _seg_field_width(self) -> int:
        return self.q_max.bit_length()

    def _deg_field_width(self) -> int:
        return self.degree_max.bit_length()

    def _break_width(self, n: int) -> int:
        return math.ceil(math.log2(n)) if n > 1 else 0

    def bits_for(self, segments, n: int, m: int) -> int:
        """Exact codeword length for an explicit segment list."""
        _validate_segments(segments, n, self.degree_max, self.q_max)
        mp = coeff_resolution(m, self.degree_max)
        ncoef = sum(len(c) for _, c in segments)
        nseg = len(segments)
        return (
            self.header_bits
            + self._seg_field_width()
            + nseg * self._deg_field_width()
            + (nseg - 1) * self._break_width(n)
            + ncoef * mp
        )

    def encode_segments(self, segments, n: int, m: int) -> BitString:
        _validate_segments(segments, n, self.degree_max, self.q_max)
        mp = coeff_resolution(m, self.degree_max)
        w = BitWriter()
        self._write_header(w)
        w.write_uint(len(segments) - 1, self._seg_field_width())
        for _, coeffs in segments:
            w.write_uint(len(coeffs) - 1, self._deg_field_width())
        for s, _ in segments[1:]:
            w.write_uint(s, self._break_width(n))
        for _, coeffs in segments:
            for c in np.asarray(coeffs, dtype=np.float64):
                w.write_uint(min(int(np.ldexp(c, mp)), (1 << mp) - 1), mp)
        return w.finish()

    def decode_segments(self, bits: BitString, n: int, m: int):
        mp = coeff_resolution(m, self.degree_max)
        r = BitReader(bits)
        self._read_header(r)
        nseg = r.read_uint(self._seg_field_width()) + 1
        degs = [r.read_uint(self._deg_field_width()) for _ in range(nseg)]
        starts = [0] + [r.read_uint(self._break_width(n)) for _ in range(nseg - 1)]
        if any(b <= a for a, b in zip(starts, starts[1:])) or starts[-1] >= n:
            raise ValueError("corrupt piecewise-poly codeword: bad breakpoints")
        segments = []
        for s, d in zip(starts, degs):
            coeffs = np.array([r.read_uint(mp) / (1 << mp) for _ in range(d + 1)])
            segments.append((s, coeffs))
        return segments

    def decode(self, bits: BitString, n: int, m: int) -> QuantizedSignal:
        segments = self.decode_segments(bits, n, m)
        samples = _eval_segments(segments, n)
        idx = np.rint(np.ldexp(samples, m)).astype(np.int64)
        np.clip(idx, 0, (1 << m) - 1, out=idx)
        return QuantizedSignal(idx, m)

    def _fit_segment(self, values, s, e, n, m):
        """Quantized coefficients reproducing values[s:e] exactly under
        round-to-grid, or None."""
        mp = coeff_resolution(m, self.degree_max)
        ulp = 2.0**-mp
        tau = (np.arange(s, e) - s) / n
        # quarter-step lift centers the decode-rounding window: coefficient
        # truncation only shrinks values, so aim slightly above the grid
        y = values[s:e] + 2.0 ** (-m - 2)
        target = np.rint(np.ldexp(values[s:e], m)).astype(np.int64)
        for deg in range(0, min(self.degree_max, e - s - 1) + 1):
            c = np.polynomial.polynomial.polyfit(tau, y, deg)
            c[(c < 0.0) & (c > -1e-9)] = 0.0
            if c.min() < 0.0 or c.sum() >= 1.0:
                continue
            cq = np.floor(np.ldexp(c, mp)) / (1 << mp)
            # the LS offset may sit just outside the rounding window; a short
            # scan over the constant coefficient recovers such witnesses
            for da0 in (0, 1, -1, 2, -2):
                cand = cq.copy()
                cand[0] = cq[0] + da0 * ulp
                if cand[0] < 0.0 or cand[0] >= 1.0 or cand.sum() >= 1.0:
                    continue
                dec = np.polyval(cand[::-1], tau)
                idx = np.rint(np.ldexp(dec, m)).astype(np.int64)
                np.clip(idx, 0, (1 << m) - 1, out=idx)
                if np.array_equal(idx, target):
                    return cand
        return None

    def encode(self, q: QuantizedSignal) -> BitString:
        """Greedy longest-segment fit; raises Unrepresentable when the
        signal needs more than q_max+1 segments (or is not fittable)."""
        n, m = q.n, q.m
        values = q.values
        segments = []
        pos = 0
        while pos < n:
            if len(segments) > self.q_max:
                raise Unrepresentable("segment budget exhausted")
            fit = None
            for end in range(n, pos, -1):
                fit = self._fit_segment(values, pos, end, n, m)
                if fit is not None:
                    segments.append((pos, fit))
                    pos = end
                    break
            if fit is None:
                raise Unrepresentable("no admissible polynomial fit")
        bits = self.encode_segments(segments, n, m)
        if self.decode(bits, n, m) != q:
            raise Unrepresentable("fit failed round-trip verification")
        return bits

    def prop4_constant(self) -> int:
        """c in bits <= (Q+1)(N+1)(m + ceil(log2(N+1))) + Q*log*(n) + c for
        this coder configuration."""
        Q, N = self.q_max, self.degree_max
        return (
            self.header_bits
            + self._seg_field_width()
            + (Q + 1) * self._deg_field_width()
            + (Q + 1) * (N + 1)  # +1 slack bit per coefficient in m'
        )


def encode_piecewise_poly(segments, n: int, m: int, q_max=None, degree_max=None):
    """Module-level convenience: (bits, bitstring) for a segment list."""
    if q_max is None:
        q_max = max(len(segments) - 1, 0)
    if degree_max is None:
        degree_max = max(len(c) - 1 for _, c in segments)
    coder = PiecewisePolyCoder(q_max, degree_max)
    bs = coder.encode_segments(segments, n, m)
    return bs.nbits, bs


def decode_piecewise_poly(bits: BitString, n: int, m: int, q_max: int, degree_max: int):
    """(segments, real samples) decoded from a piecewise-poly codeword."""
    coder = PiecewisePolyCoder(q_max, degree_max)
    segments = coder.decode_segments(bits, n, m)
    return segments, _eval_segments(segments, n)
