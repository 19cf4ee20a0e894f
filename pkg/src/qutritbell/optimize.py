"""Deterministic one-dimensional maximization."""

from __future__ import annotations

import math
from typing import Callable, Optional

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10,
                       max_iter: int = 200) -> tuple:
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``.

    The iteration count depends only on the bracket width and ``tol``, so the
    result is reproducible bit for bit.
    """
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    candidates = [(f(x), x), (fc, c), (fd, d)]
    best = max(candidates)
    return best[1], best[0]


def bisect_root(g: Callable[[float], float], lo: float, hi: float, tol: float = 1e-14,
                max_iter: int = 200) -> Optional[float]:
    """Root of ``g`` on ``[lo, hi]`` by bisection, or ``None`` without a sign change."""
    glo, ghi = g(lo), g(hi)
    if glo == 0:
        return lo
    if ghi == 0:
        return hi
    if glo * ghi > 0:
        return None
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0 or hi - lo <= tol:
            return mid
        if glo * gm < 0:
            hi = mid
        else:
            lo, glo = mid, gm
    return 0.5 * (lo + hi)
