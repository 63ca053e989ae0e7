"""m-bit uniform quantization of signals in [0,1]^n and grid enumeration.

Grid points are stored as integer indices j (the coordinate value is
j * 2^-m), so coder inputs are bit-exact; reals appear only at arithmetic
boundaries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError

__all__ = [
    "Resolution",
    "QuantizedSignal",
    "truncate",
    "enumerate_grid",
    "grid_count",
    "window_indices",
    "quantization_error",
]


@dataclass(frozen=True)
class Resolution:
    """Bits per coordinate; the grid step is exactly 2^-m."""

    m: int

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 1:
            raise ValueError(f"resolution m must be an integer >= 1, got {self.m!r}")

    @property
    def step(self) -> float:
        return 2.0 ** (-self.m)

    @property
    def levels(self) -> int:
        return 1 << self.m


def _res_m(m) -> int:
    if isinstance(m, Resolution):
        return m.m
    return Resolution(int(m)).m


class QuantizedSignal:
    """A point of the 2^-m grid in [0,1)^n, held as integer indices."""

    __slots__ = ("indices", "m")

    def __init__(self, indices, m):
        self.m = _res_m(m)
        idx = np.asarray(indices, dtype=np.int64)
        if idx.ndim != 1 or idx.size < 1:
            raise ValueError("indices must be a nonempty 1-D array")
        if idx.min() < 0 or idx.max() > (1 << self.m) - 1:
            raise ValueError(f"grid indices must lie in [0, 2^{self.m} - 1]")
        idx = idx.copy()
        idx.setflags(write=False)
        self.indices = idx

    @property
    def n(self) -> int:
        return self.indices.size

    @property
    def values(self) -> np.ndarray:
        return np.ldexp(self.indices.astype(np.float64), -self.m)

    @property
    def resolution(self) -> Resolution:
        return Resolution(self.m)

    def __eq__(self, other):
        if not isinstance(other, QuantizedSignal):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.indices, other.indices)

    def __hash__(self):
        return hash((self.m, self.indices.tobytes()))

    def __repr__(self):
        return f"QuantizedSignal(m={self.m}, indices={self.indices.tolist()})"


def truncate(x, m) -> QuantizedSignal:
    """First-m-bits truncation [x]_m of a vector in [0,1]^n.

    Guarantees ||x - [x]_m||_inf <= 2^-m.  The endpoint x_i = 1 maps to
    1 - 2^-m (the grid stays a uniform 2^m-point lattice).
    """
    m = _res_m(m)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if x.ndim != 1:
        raise ValueError("expected a 1-D signal")
    if x.size and (x.min() < 0.0 or x.max() > 1.0):
        bad = x[(x < 0.0) | (x > 1.0)][0]
        raise ValueError(f"coordinate {bad!r} outside [0, 1]")
    # ldexp(x, m) is exact, so floor reproduces the binary expansion prefix.
    idx = np.floor(np.ldexp(x, m)).astype(np.int64)
    np.clip(idx, 0, (1 << m) - 1, out=idx)
    return QuantizedSignal(idx, m)


def grid_count(n: int, m, window=None) -> int:
    """Number of points enumerate_grid would yield (exact, big-int)."""
    m = _res_m(m)
    if window is None:
        return (1 << m) ** n
    count = 1
    for lo, hi in window_indices(window, m):
        count *= hi - lo + 1
    return count


def window_indices(center, m) -> list[tuple[int, int]]:
    """Per-coordinate index ranges [lo, hi] of grid points u with
    |center_i - u_i| <= 2^-m (the constraint window of the complexity inf)."""
    m = _res_m(m)
    c = np.atleast_1d(np.asarray(center, dtype=np.float64))
    if c.min() < 0.0 or c.max() > 1.0:
        raise ValueError("window center outside [0, 1]^n")
    top = (1 << m) - 1
    out = []
    for ci in c:
        s = np.ldexp(ci, m)  # exact
        lo = int(np.ceil(s - 1.0))
        hi = int(np.floor(s + 1.0))
        out.append((max(lo, 0), min(hi, top)))
    return out


def enumerate_grid(n: int, m, window=None, *, cap: int):
    """Stream all grid points (or the window around `window`) in
    lexicographic index order.  Raises BudgetError up front, naming the
    count, if it exceeds `cap`."""
    m = _res_m(m)
    if n < 1:
        raise ValueError("n must be >= 1")
    total = grid_count(n, m, window)
    if total > cap:
        raise BudgetError(total, cap, what=f"grid enumeration (n={n}, m={m})")
    if window is None:
        ranges = [range(1 << m)] * n
    else:
        ranges = [range(lo, hi + 1) for lo, hi in window_indices(window, m)]

    def gen():
        for combo in itertools.product(*ranges):
            yield QuantizedSignal(np.asarray(combo, dtype=np.int64), m)

    return gen()


def quantization_error(x, q: QuantizedSignal) -> tuple[float, float]:
    """(l_inf, l_2) error between a real vector and a grid point.
    Whenever l_inf <= 2^-m, l_2 <= 2^-m * sqrt(n) follows coordinatewise."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if x.size != q.n:
        raise ValueError(f"dimension mismatch: {x.size} vs {q.n}")
    diff = x - q.values
    return float(np.max(np.abs(diff))), float(np.linalg.norm(diff))
