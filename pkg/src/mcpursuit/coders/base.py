"""Coder interface and the small information-theoretic utilities.

A coder maps grid signals to prefix-free bitstrings; its exact bit count
is the computable complexity proxy everything else consumes.  Decoding is
conditioned on (n, m): both are side information, never part of the
stream, so codeword lengths match the counting arguments they realize.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

from ..quantize import QuantizedSignal
from .bitio import BitString

__all__ = ["CodeLength", "Coder", "KidEstimate", "log_star", "binary_entropy"]

# Exact bit count of an encoding; proxy for the quantized complexity.
CodeLength = int


def log_star(n: int) -> float:
    """Self-delimiting integer code length: ceil(log2 n) + 2 log2 max(ceil(log2 n), 1)."""
    if n < 1:
        raise ValueError("log_star requires n >= 1")
    c = math.ceil(math.log2(n))
    return c + 2.0 * math.log2(max(c, 1))


def binary_entropy(alpha: float) -> float:
    """h(alpha) in bits, with h(0) = h(1) = 0 by continuity."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("binary_entropy requires alpha in [0, 1]")
    if alpha == 0.0 or alpha == 1.0:
        return 0.0
    return -alpha * math.log2(alpha) - (1.0 - alpha) * math.log2(1.0 - alpha)


class Coder(ABC):
    """Prefix-free coder over grid signals.

    `header_bits` is the fixed structure header (written as zero bits) so
    bound checks can use measured constants instead of hidden ones.
    """

    name: str = "abstract"
    header_bits: int = 8

    @abstractmethod
    def encode(self, q: QuantizedSignal) -> BitString:
        """Prefix-free codeword for q.  Raises Unrepresentable outside the
        coder's representable set."""

    @abstractmethod
    def decode(self, bits: BitString, n: int, m: int) -> QuantizedSignal:
        """Inverse of encode given side information (n, m)."""

    def code_len(self, q: QuantizedSignal) -> CodeLength:
        """Exact bit count of encode(q); subclasses may shortcut it."""
        return self.encode(q).nbits

    def kid(self, q: QuantizedSignal) -> "KidEstimate":
        return KidEstimate(
            kappa=self.code_len(q) / q.m, m=q.m, n=q.n, coder=self.name
        )

    def _write_header(self, w):
        w.write_uint(0, self.header_bits)

    def _read_header(self, r):
        if r.read_uint(self.header_bits) != 0:
            raise ValueError(f"corrupt {self.name} header")

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


@dataclass(frozen=True)
class KidEstimate:
    """Kolmogorov information dimension proxy: code bits per resolution bit."""

    kappa: float
    m: int
    n: int
    coder: str
