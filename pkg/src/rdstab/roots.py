"""Bracketing and bisection for scalar equations.

Only plain bisection is used: every root in this package comes from a
sign-change bracket found by a uniform scan, so robustness matters more than
convergence speed.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import MultiRootError, NonFiniteError, RootError


def sign_brackets(fn: Callable, lo: float, hi: float, n: int) -> list[tuple[float, float]]:
    """Scan ``n`` uniformly spaced points of [lo, hi] and return every
    interval across which ``fn`` changes sign.

    An exact zero at a scan point produces a degenerate bracket ``(x, x)``.
    """
    x = np.linspace(lo, hi, n)
    with np.errstate(all="ignore"):
        y = np.asarray(fn(x), dtype=float)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)][0]
        raise NonFiniteError(f"non-finite value during root scan at x={bad!r}")
    s = np.sign(y)
    brackets = []
    k = 0
    while k < n:
        if s[k] == 0:
            brackets.append((x[k], x[k]))
            # skip the run of zeros so one flat root counts once
            while k < n and s[k] == 0:
                k += 1
            continue
        if k + 1 < n and s[k + 1] != 0 and s[k + 1] != s[k]:
            brackets.append((x[k], x[k + 1]))
        k += 1
    return brackets


def bisect(fn: Callable, lo: float, hi: float, xtol: float = 1e-12, rtol: float = 1e-12,
           maxiter: int = 200) -> float:
    """Bisection on a sign-change bracket [lo, hi].

    Stops when the bracket width is below ``xtol + rtol * |mid|``.
    """
    flo = float(fn(lo))
    fhi = float(fn(hi))
    if flo == 0.0:
        return float(lo)
    if fhi == 0.0:
        return float(hi)
    if not (np.isfinite(flo) and np.isfinite(fhi)):
        raise NonFiniteError("non-finite value at bracket end")
    if np.sign(flo) == np.sign(fhi):
        raise RootError(f"no sign change on [{lo}, {hi}]")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol + rtol * abs(mid):
            return float(mid)
        fm = float(fn(mid))
        if fm == 0.0:
            return float(mid)
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return float(0.5 * (lo + hi))


def unique_root(fn: Callable, lo: float, hi: float, n_scan: int = 1024, **kw) -> float:
    """Locate the single root of ``fn`` in [lo, hi].

    Raises RootError when the scan sees no sign change and MultiRootError when
    it sees more than one.
    """
    brackets = sign_brackets(fn, lo, hi, n_scan)
    if not brackets:
        raise RootError(f"no sign change of the function on [{lo:g}, {hi:g}]")
    if len(brackets) > 1:
        raise MultiRootError(f"{len(brackets)} sign changes found on [{lo:g}, {hi:g}]")
    a, b = brackets[0]
    if a == b:
        return float(a)
    return bisect(fn, a, b, **kw)
