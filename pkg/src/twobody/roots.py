"""Bracketed scalar root finding: bisection to localise, Newton to polish."""

import math

from .errors import NoBracket


def scan_bracket(func, lo, hi, samples=256):
    """First subinterval of [lo, hi] on which func changes sign."""
    step = (hi - lo) / samples
    x0 = lo
    f0 = func(x0)
    if f0 == 0.0:
        return x0, x0
    for k in range(1, samples + 1):
        x1 = lo + k * step
        f1 = func(x1)
        if f1 == 0.0:
            return x1, x1
        if f0 * f1 < 0.0:
            return x0, x1
        x0, f0 = x1, f1
    raise NoBracket(f"no sign change of target function on [{lo}, {hi}] "
                    f"({samples} samples)", interval=(lo, hi))


def bracketed_root(func, lo, hi, fprime=None, xtol=1e-12, maxit=200):
    """Root of func inside [lo, hi]; func(lo) and func(hi) must differ in sign.

    Plain bisection narrows the bracket; once it is small, Newton steps
    (analytic fprime if given, secant otherwise) polish the root but are
    rejected whenever they leave the bracket.
    """
    flo, fhi = func(lo), func(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise NoBracket(f"root not bracketed on [{lo}, {hi}]", interval=(lo, hi))
    a, fa, b, fb = (lo, flo, hi, fhi) if flo < 0 else (hi, fhi, lo, flo)
    x = 0.5 * (a + b)
    for _ in range(maxit):
        fx = func(x)
        if fx == 0.0 or abs(b - a) < xtol:
            return x
        if fx < 0.0:
            a, fa = x, fx
        else:
            b, fb = x, fx
        if fprime is not None:
            dfx = fprime(x)
        else:
            dfx = (fb - fa) / (b - a)
        x_new = x - fx / dfx if dfx != 0.0 else 0.5 * (a + b)
        if not (min(a, b) < x_new < max(a, b)) or not math.isfinite(x_new):
            x_new = 0.5 * (a + b)
        if abs(x_new - x) < xtol:
            return x_new
        x = x_new
    return x
