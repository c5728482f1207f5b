"""Certified isolation of the complex roots of a squarefree polynomial.

Approximations come from mpmath's Durand-Kerner solver; certification uses
Smith's inclusion theorem: with approximations z_i and
``W_i = p(z_i) / (lc * prod_{j != i} (z_i - z_j))`` every root lies in the
union of the disks ``D(z_i, n |W_i|)`` and each connected component made of
k disks holds exactly k roots.  ``W_i`` is evaluated in ball arithmetic, so
the radii are rigorous even when the coefficients are themselves balls.
"""
from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import libmp

from ..errors import PrecisionExhausted
from .balls import DEFAULT_PREC, MAX_PREC, ComplexBall, RealBall
from .polys import evaluate

_SQRT2_UP = Fraction(14143, 10000)


def _coeff_ball(c, prec) -> RealBall:
    return c.with_prec(max(prec, c.prec)) if isinstance(c, RealBall) else RealBall(c, prec=prec)


def _approximate(coeffs, prec):
    dps = max(15, int(prec * 0.30103) + 10)
    with mpmath.workdps(dps):
        # convert inside the context: mpf(c) rounds to the ambient precision
        mids = [c.mid if isinstance(c, RealBall) else mpmath.mpf(c) for c in coeffs]
        for steps in (100, 400, 2000):
            try:
                return mpmath.polyroots(list(reversed(mids)), maxsteps=steps, extraprec=2 * prec)
            except mpmath.NoConvergence:
                continue
    return None


def _try_isolate(coeffs, prec):
    n = len(coeffs) - 1
    approx = _approximate(coeffs, prec)
    if approx is None:
        return None
    # .real/.imag keep the working precision; mpmathify would round to the ambient 53 bits
    pts = [ComplexBall(RealBall(z.real, prec=prec), RealBall(z.imag, prec=prec)) for z in approx]
    cb = [ComplexBall(_coeff_ball(c, prec), 0) for c in coeffs]
    lc = cb[-1]
    radii = []
    for i, zi in enumerate(pts):
        den = lc
        for j, zj in enumerate(pts):
            if j != i:
                den = den * (zi - zj)
        if den.contains_zero():
            return None
        w = evaluate(cb, zi) / den
        radii.append((abs(w) * n).upper())
    big = [r * _SQRT2_UP for r in radii]
    # pairwise separation of the enlarged disks
    for i in range(n):
        for j in range(i + 1, n):
            dist = abs(pts[i] - pts[j])
            if not dist.certainly_gt(big[i] + big[j]):
                return None
    out = []
    for i, zi in enumerate(pts):
        cz = zi.conjugate()
        hits = [j for j in range(n) if not abs(cz - pts[j]).certainly_gt(big[i] + big[j])]
        r = radii[i]
        if hits == [i]:
            out.append(ComplexBall((zi.re - r).hull(zi.re + r), RealBall(0, prec=prec)))
        elif len(hits) == 1:
            out.append(ComplexBall((zi.re - r).hull(zi.re + r), (zi.im - r).hull(zi.im + r)))
        else:
            return None
    return out


def isolate_roots(coeffs, prec: int = DEFAULT_PREC) -> list[ComplexBall]:
    """Isolating rectangles for all roots of a squarefree polynomial.

    ``coeffs`` are constant-term-first and may be ints, Fractions or RealBalls
    (real coefficients only).  Real roots are returned with an exact zero
    imaginary part.  Each returned box contains exactly one root and no
    other root of the polynomial.
    """
    n = len(coeffs) - 1
    if n < 1:
        return []
    if n == 1 and not any(isinstance(c, RealBall) for c in coeffs):
        v = -Fraction(coeffs[0]) / Fraction(coeffs[1])
        return [ComplexBall(RealBall(v, prec=prec), 0, prec=prec)]
    p = prec
    while p <= MAX_PREC:
        res = _try_isolate(coeffs, p)
        if res is not None:
            return res
        p *= 2
    raise PrecisionExhausted(f"root isolation failed below {MAX_PREC} bits")


def sign_at(coeffs: list[int], x: Fraction) -> int:
    v = evaluate(coeffs, x)
    return (v > 0) - (v < 0)


def refine_real_root(coeffs: list[int], lo: Fraction, hi: Fraction, target: Fraction):
    """Shrink a rational isolating interval of a simple real root to width <= 2*target.

    Uses a high-precision Newton step, certified by an exact sign change that
    lies inside the original interval; falls back to bisection.
    """
    slo, shi = sign_at(coeffs, lo), sign_at(coeffs, hi)
    if slo == 0:
        return lo, lo
    if shi == 0:
        return hi, hi
    if hi - lo <= 2 * target:
        return lo, hi
    bits = max(64, int(-mpmath.log(mpmath.mpf(target.numerator) / target.denominator, 2)) + 32)
    with mpmath.workprec(bits + 64):
        f = lambda x: mpmath.polyval(list(reversed(coeffs)), x)
        try:
            x0 = mpmath.findroot(f, (mpmath.mpf(lo.numerator) / lo.denominator
                                     + mpmath.mpf(hi.numerator) / hi.denominator) / 2,
                                 tol=mpmath.mpf(2) ** (-bits - 16))
            x0 = Fraction(*(int(t) for t in libmp.to_rational(mpmath.mpf(mpmath.re(x0))._mpf_)))
        except (ValueError, ZeroDivisionError, mpmath.NoConvergence):
            x0 = None
    if x0 is not None:
        a, b = x0 - target, x0 + target
        if lo <= a and b <= hi:
            sa, sb = sign_at(coeffs, a), sign_at(coeffs, b)
            if sa == 0:
                return a, a
            if sb == 0:
                return b, b
            if sa != sb:
                return a, b
    while hi - lo > 2 * target:
        mid = (lo + hi) / 2
        s = sign_at(coeffs, mid)
        if s == 0:
            return mid, mid
        if s == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi
