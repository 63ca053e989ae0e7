"""Minimum complexity pursuit: universal compressed sensing on the
quantized grid, with computable complexity proxies."""

__version__ = "0.1.0"
