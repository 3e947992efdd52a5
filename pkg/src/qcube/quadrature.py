"""Adaptive Simpson quadrature on finite intervals."""

from __future__ import annotations

import math
from typing import Callable

MAX_DEPTH = 60


class QuadratureError(RuntimeError):
    """Raised when the adaptive refinement fails to converge."""


def adaptive_simpson(
    fn: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = MAX_DEPTH,
    min_depth: int = 4,
) -> float:
    """Integrate ``fn`` over ``[a, b]`` to absolute tolerance ``tol``.

    Uses the classic Richardson-corrected recursion; ``min_depth`` forces a few
    initial subdivisions so narrow features are not missed by the first
    five-point estimate.
    """
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(fn, b, a, tol, max_depth, min_depth)

    fa, fb = fn(a), fn(b)
    m = 0.5 * (a + b)
    fm = fn(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    # explicit stack avoids Python recursion limits on deep refinements
    floor = tol * 2.0**-40
    total = 0.0
    leftover = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, est, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = fn(lm), fn(rm)
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        delta = left + right - est
        if not math.isfinite(delta):
            raise QuadratureError(f"non-finite integrand near [{lo}, {hi}]")
        if depth >= min_depth and (abs(delta) <= 15.0 * eps or depth >= max_depth):
            if abs(delta) > 15.0 * eps:
                leftover += abs(delta) / 15.0
            total += left + right + delta / 15.0
            continue
        half = max(eps / 2.0, floor)
        stack.append((mid, hi, fmid, frm, fhi, right, half, depth + 1))
        stack.append((lo, mid, flo, flm, fmid, left, half, depth + 1))
    if leftover > tol:
        raise QuadratureError(f"no convergence on [{a}, {b}] (unresolved error {leftover:.3e})")
    return total
