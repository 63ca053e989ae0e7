"""phi_m: the cheapest grid point in the l_inf window around x.

The window radius is fixed at 2^-m (the constraint set of the quantized
complexity); ties break to the lexicographically first point, which is
the enumeration order.
"""

from __future__ import annotations

import numpy as np

from ..quantize import QuantizedSignal, enumerate_grid
from .base import Coder

__all__ = ["phi_m", "kid"]


def phi_m(coder: Coder, x, m, cap: int = 1 << 20) -> QuantizedSignal:
    """Grid point u with ||x - u||_inf <= 2^-m minimizing the coder's bit
    count.  Raises BudgetError when the window exceeds cap (callers fall
    back to truncate and record the fallback)."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    best = None
    best_bits = None
    for q in enumerate_grid(x.size, m, window=x, cap=cap):
        nbits = coder.code_len(q)
        if best_bits is None or nbits < best_bits:
            best, best_bits = q, nbits
    assert best is not None  # window always contains truncate(x, m)
    return best


def kid(coder: Coder, q: QuantizedSignal):
    """Kolmogorov information dimension proxy of a grid signal."""
    return coder.kid(q)
