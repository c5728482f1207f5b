"""Real and complex ball arithmetic with outward rounding.

A :class:`RealBall` is stored as a closed interval ``[lo, hi]`` of binary
floating-point endpoints; ``mid`` and ``rad`` are derived.  Every operation
rounds the lower endpoint towards -inf and the upper endpoint towards +inf
(using mpmath's directed-rounding kernels), so the result always contains the
exact image of every member of the inputs.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import mpmath
from mpmath import libmp

from ..errors import DomainError

DEFAULT_PREC = 128
MAX_PREC = 8192

_mk = mpmath.mp.make_mpf
_F = libmp.round_floor
_C = libmp.round_ceiling
_N = libmp.round_nearest


def _exact_bounds(x, prec):
    """Raw (lo, hi) mpf tuples enclosing a plain number."""
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, int):
        return libmp.from_int(x, prec, _F), libmp.from_int(x, prec, _C)
    if isinstance(x, Rational):
        p, q = x.numerator, x.denominator
        return libmp.from_rational(p, q, prec, _F), libmp.from_rational(p, q, prec, _C)
    if isinstance(x, float):
        v = libmp.from_float(x)
        return v, v
    if isinstance(x, mpmath.mpf):
        return x._mpf_, x._mpf_
    if isinstance(x, str):
        return libmp.from_str(x, prec, _F), libmp.from_str(x, prec, _C)
    raise TypeError(f"cannot convert {type(x).__name__} to a ball")


def _min(*xs):
    best = xs[0]
    for x in xs[1:]:
        if libmp.mpf_lt(x, best):
            best = x
    return best


def _max(*xs):
    best = xs[0]
    for x in xs[1:]:
        if libmp.mpf_gt(x, best):
            best = x
    return best


class RealBall:
    """Closed real interval with certified (outward-rounded) arithmetic."""

    __slots__ = ("_lo", "_hi", "prec")

    def __init__(self, value=0, hi=None, prec: int = DEFAULT_PREC):
        self.prec = prec
        if isinstance(value, RealBall):
            self._lo, self._hi = value._lo, value._hi
            self.prec = max(prec, value.prec)
        else:
            self._lo = _exact_bounds(value, prec)[0]
            self._hi = _exact_bounds(value if hi is None else hi, prec)[1]
        if libmp.mpf_gt(self._lo, self._hi):
            raise ValueError("ball lower endpoint exceeds upper endpoint")

    @classmethod
    def _raw(cls, lo, hi, prec):
        b = object.__new__(cls)
        b._lo, b._hi, b.prec = lo, hi, prec
        return b

    @classmethod
    def from_mid_rad(cls, mid, rad, prec: int = DEFAULT_PREC) -> RealBall:
        m = RealBall(mid, prec=prec)
        r = RealBall(rad, prec=prec)
        if libmp.mpf_lt(r._lo, libmp.fzero):
            raise ValueError("radius must be nonnegative")
        return cls._raw(
            libmp.mpf_sub(m._lo, r._hi, prec, _F), libmp.mpf_add(m._hi, r._hi, prec, _C), prec
        )

    # -- accessors -------------------------------------------------------
    @property
    def lo(self) -> mpmath.mpf:
        return _mk(self._lo)

    @property
    def hi(self) -> mpmath.mpf:
        return _mk(self._hi)

    @property
    def mid(self) -> mpmath.mpf:
        s = libmp.mpf_add(self._lo, self._hi, self.prec + 8, _N)
        return _mk(libmp.mpf_shift(s, -1))

    @property
    def rad(self) -> mpmath.mpf:
        m = self.mid._mpf_
        r = _max(libmp.mpf_sub(self._hi, m, self.prec, _C), libmp.mpf_sub(m, self._lo, self.prec, _C))
        return _mk(r)

    def width(self) -> mpmath.mpf:
        return _mk(libmp.mpf_sub(self._hi, self._lo, self.prec, _C))

    def __float__(self) -> float:
        return libmp.to_float(self.mid._mpf_)

    def __repr__(self) -> str:
        return f"RealBall([{mpmath.nstr(self.lo, 20)}, {mpmath.nstr(self.hi, 20)}])"

    def to_json(self) -> dict:
        return {"mid": mpmath.nstr(self.mid, 30), "rad": mpmath.nstr(self.rad, 5)}

    def with_prec(self, prec: int) -> RealBall:
        return RealBall._raw(self._lo, self._hi, prec)

    # -- predicates ------------------------------------------------------
    def contains(self, x) -> bool:
        if isinstance(x, RealBall):
            return libmp.mpf_le(self._lo, x._lo) and libmp.mpf_le(x._hi, self._hi)
        if isinstance(x, Rational):
            return self.lo_fraction() <= x <= self.hi_fraction()
        v = _exact_bounds(x, self.prec)[0]
        return libmp.mpf_le(self._lo, v) and libmp.mpf_le(v, self._hi)

    def lo_fraction(self) -> Fraction:
        return Fraction(*(int(t) for t in libmp.to_rational(self._lo)))

    def hi_fraction(self) -> Fraction:
        return Fraction(*(int(t) for t in libmp.to_rational(self._hi)))

    def contains_zero(self) -> bool:
        return libmp.mpf_le(self._lo, libmp.fzero) and libmp.mpf_ge(self._hi, libmp.fzero)

    def overlaps(self, other: RealBall) -> bool:
        return libmp.mpf_le(self._lo, other._hi) and libmp.mpf_le(other._lo, self._hi)

    def is_exact(self) -> bool:
        return self._lo == self._hi

    def is_positive(self) -> bool:
        return libmp.mpf_gt(self._lo, libmp.fzero)

    def is_negative(self) -> bool:
        return libmp.mpf_lt(self._hi, libmp.fzero)

    def certainly_lt(self, other) -> bool:
        o = _as_ball(other, self.prec)
        return libmp.mpf_lt(self._hi, o._lo)

    def certainly_le(self, other) -> bool:
        o = _as_ball(other, self.prec)
        return libmp.mpf_le(self._hi, o._lo)

    def certainly_gt(self, other) -> bool:
        return _as_ball(other, self.prec).certainly_lt(self)

    def certainly_ge(self, other) -> bool:
        return _as_ball(other, self.prec).certainly_le(self)

    def floor_lo(self) -> int:
        return int(libmp.to_int(self._lo, _F))

    def ceil_lo(self) -> int:
        return int(libmp.to_int(self._lo, _C))

    def floor_hi(self) -> int:
        return int(libmp.to_int(self._hi, _F))

    def ceil_hi(self) -> int:
        return int(libmp.to_int(self._hi, _C))

    # -- lattice ---------------------------------------------------------
    def hull(self, other: RealBall) -> RealBall:
        o = _as_ball(other, self.prec)
        return RealBall._raw(_min(self._lo, o._lo), _max(self._hi, o._hi), max(self.prec, o.prec))

    def upper(self) -> RealBall:
        """Point ball at the upper endpoint (useful for 'upper-ball' constants)."""
        return RealBall._raw(self._hi, self._hi, self.prec)

    def lower(self) -> RealBall:
        return RealBall._raw(self._lo, self._lo, self.prec)

    # -- arithmetic ------------------------------------------------------
    def __neg__(self) -> RealBall:
        return RealBall._raw(libmp.mpf_neg(self._hi), libmp.mpf_neg(self._lo), self.prec)

    def __pos__(self) -> RealBall:
        return self

    def __abs__(self) -> RealBall:
        if libmp.mpf_ge(self._lo, libmp.fzero):
            return self
        if libmp.mpf_le(self._hi, libmp.fzero):
            return -self
        return RealBall._raw(libmp.fzero, _max(libmp.mpf_neg(self._lo), self._hi), self.prec)

    def __add__(self, other) -> RealBall:
        o = _coerce(other, self.prec)
        if o is NotImplemented:
            return o
        p = max(self.prec, o.prec)
        return RealBall._raw(libmp.mpf_add(self._lo, o._lo, p, _F), libmp.mpf_add(self._hi, o._hi, p, _C), p)

    __radd__ = __add__

    def __sub__(self, other) -> RealBall:
        o = _coerce(other, self.prec)
        if o is NotImplemented:
            return o
        p = max(self.prec, o.prec)
        return RealBall._raw(libmp.mpf_sub(self._lo, o._hi, p, _F), libmp.mpf_sub(self._hi, o._lo, p, _C), p)

    def __rsub__(self, other) -> RealBall:
        o = _coerce(other, self.prec)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other) -> RealBall:
        o = _coerce(other, self.prec)
        if o is NotImplemented:
            return o
        p = max(self.prec, o.prec)
        a, b, c, d = self._lo, self._hi, o._lo, o._hi
        lo = _min(*(libmp.mpf_mul(x, y, p, _F) for x in (a, b) for y in (c, d)))
        hi = _max(*(libmp.mpf_mul(x, y, p, _C) for x in (a, b) for y in (c, d)))
        return RealBall._raw(lo, hi, p)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RealBall:
        o = _coerce(other, self.prec)
        if o is NotImplemented:
            return o
        if o.contains_zero():
            raise DomainError("division by a ball containing zero")
        p = max(self.prec, o.prec)
        a, b, c, d = self._lo, self._hi, o._lo, o._hi
        lo = _min(*(libmp.mpf_div(x, y, p, _F) for x in (a, b) for y in (c, d)))
        hi = _max(*(libmp.mpf_div(x, y, p, _C) for x in (a, b) for y in (c, d)))
        return RealBall._raw(lo, hi, p)

    def __rtruediv__(self, other) -> RealBall:
        o = _coerce(other, self.prec)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int) -> RealBall:
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return RealBall(1, prec=self.prec)
        if n < 0:
            return RealBall(1, prec=self.prec) / (self ** (-n))
        p = self.prec
        x = abs(self) if n % 2 == 0 else self
        return RealBall._raw(libmp.mpf_pow_int(x._lo, n, p, _F), libmp.mpf_pow_int(x._hi, n, p, _C), p)

    # -- elementary functions -------------------------------------------
    def sqrt(self) -> RealBall:
        if libmp.mpf_lt(self._hi, libmp.fzero):
            raise DomainError("sqrt of a negative ball")
        lo = _max(self._lo, libmp.fzero)
        return RealBall._raw(libmp.mpf_sqrt(lo, self.prec, _F), libmp.mpf_sqrt(self._hi, self.prec, _C), self.prec)

    def log(self) -> RealBall:
        if not libmp.mpf_gt(self._lo, libmp.fzero):
            raise DomainError("log of a ball touching (-inf, 0]")
        p = self.prec
        lo = libmp.mpf_log(self._lo, p, _F)
        hi = libmp.mpf_log(self._hi, p, _C)
        return _pad(RealBall._raw(lo, hi, p))

    def exp(self) -> RealBall:
        p = self.prec
        return _pad(RealBall._raw(libmp.mpf_exp(self._lo, p, _F), libmp.mpf_exp(self._hi, p, _C), p))


def _pad(b: RealBall) -> RealBall:
    # one extra ulp of slack on transcendental results
    p = b.prec
    eps = libmp.from_man_exp(1, -p + 2)
    lo = libmp.mpf_sub(b._lo, libmp.mpf_mul(libmp.mpf_abs(b._lo), eps, p, _C), p, _F)
    hi = libmp.mpf_add(b._hi, libmp.mpf_mul(libmp.mpf_abs(b._hi), eps, p, _C), p, _C)
    return RealBall._raw(lo, hi, p)


def _coerce(x, prec):
    if isinstance(x, RealBall):
        return x
    if isinstance(x, (int, Rational, float, mpmath.mpf)):
        return RealBall(x, prec=prec)
    return NotImplemented


def _as_ball(x, prec) -> RealBall:
    b = _coerce(x, prec)
    if b is NotImplemented:
        raise TypeError(f"cannot compare ball with {type(x).__name__}")
    return b


def ball_log(x: RealBall) -> RealBall:
    return x.log()


def ball_exp(x: RealBall) -> RealBall:
    return x.exp()


def ball_sqrt(x: RealBall) -> RealBall:
    return x.sqrt()


def ball_max(*xs: RealBall) -> RealBall:
    """Enclosure of max over the members of the balls."""
    lo = _max(*(x._lo for x in xs))
    hi = _max(*(x._hi for x in xs))
    return RealBall._raw(lo, hi, max(x.prec for x in xs))


def ball_min(*xs: RealBall) -> RealBall:
    lo = _min(*(x._lo for x in xs))
    hi = _min(*(x._hi for x in xs))
    return RealBall._raw(lo, hi, max(x.prec for x in xs))


def log_plus(x: RealBall) -> RealBall:
    """Enclosure of log max(1, x) for x >= 0."""
    one = libmp.fone
    if libmp.mpf_le(x._hi, one):
        return RealBall(0, prec=x.prec)
    if libmp.mpf_ge(x._lo, one):
        return x.log()
    return RealBall._raw(libmp.fzero, x.upper().log()._hi, x.prec)


class ComplexBall:
    """Rectangle ``re + i*im`` with real-ball components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0, prec: int = DEFAULT_PREC):
        self.re = re if isinstance(re, RealBall) else RealBall(re, prec=prec)
        self.im = im if isinstance(im, RealBall) else RealBall(im, prec=prec)

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    def __repr__(self) -> str:
        return f"ComplexBall({self.re!r}, {self.im!r})"

    def to_json(self) -> dict:
        return {"re": self.re.to_json(), "im": self.im.to_json()}

    def is_real(self) -> bool:
        return self.im.is_exact() and libmp.mpf_eq(self.im._lo, libmp.fzero)

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def overlaps(self, other: ComplexBall) -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def contains(self, other: ComplexBall) -> bool:
        return self.re.contains(other.re) and self.im.contains(other.im)

    def conjugate(self) -> ComplexBall:
        return ComplexBall(self.re, -self.im)

    def radius(self) -> mpmath.mpf:
        """Upper bound on the distance from the midpoint to any member."""
        r = RealBall(self.re.rad, prec=self.prec) ** 2 + RealBall(self.im.rad, prec=self.prec) ** 2
        return r.sqrt().hi

    def __neg__(self) -> ComplexBall:
        return ComplexBall(-self.re, -self.im)

    def __add__(self, other) -> ComplexBall:
        o = _ccoerce(other, self.prec)
        if o is NotImplemented:
            return o
        return ComplexBall(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> ComplexBall:
        o = _ccoerce(other, self.prec)
        if o is NotImplemented:
            return o
        return ComplexBall(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> ComplexBall:
        o = _ccoerce(other, self.prec)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other) -> ComplexBall:
        o = _ccoerce(other, self.prec)
        if o is NotImplemented:
            return o
        if o.is_real():
            return ComplexBall(self.re * o.re, self.im * o.re)
        if self.is_real():
            return ComplexBall(self.re * o.re, self.re * o.im)
        return ComplexBall(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def abs2(self) -> RealBall:
        return self.re ** 2 + self.im ** 2

    def __abs__(self) -> RealBall:
        if self.is_real():
            return abs(self.re)
        return self.abs2().sqrt()

    def __truediv__(self, other) -> ComplexBall:
        o = _ccoerce(other, self.prec)
        if o is NotImplemented:
            return o
        if o.is_real():
            return ComplexBall(self.re / o.re, self.im / o.re)
        den = o.abs2()
        num = self * o.conjugate()
        return ComplexBall(num.re / den, num.im / den)

    def __rtruediv__(self, other) -> ComplexBall:
        o = _ccoerce(other, self.prec)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int) -> ComplexBall:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ComplexBall(1, prec=self.prec) / (self ** (-n))
        if self.is_real():
            return ComplexBall(self.re ** n, 0)
        result = ComplexBall(1, prec=self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result


def _ccoerce(x, prec):
    if isinstance(x, ComplexBall):
        return x
    if isinstance(x, RealBall):
        return ComplexBall(x, RealBall(0, prec=x.prec))
    if isinstance(x, (int, Rational, float, mpmath.mpf)):
        return ComplexBall(RealBall(x, prec=prec), RealBall(0, prec=prec))
    return NotImplemented
