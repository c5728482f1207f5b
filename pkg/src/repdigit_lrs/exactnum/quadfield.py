"""Exact arithmetic in Q and real quadratic fields Q(sqrt d)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational

from ..errors import InvalidInput
from .balls import DEFAULT_PREC, RealBall


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel: n = k^2 * squarefree_part(n)."""
    if n == 0:
        return 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
        if n % p == 0:
            out *= p
            n //= p
        p += 1
    return sign * out * n


@dataclass(frozen=True)
class Field:
    """Either Q (``d is None``) or the real quadratic field Q(sqrt d)."""

    d: int | None = None

    def __post_init__(self):
        if self.d is not None:
            if self.d <= 1 or squarefree_part(self.d) != self.d:
                raise InvalidInput(f"d must be a squarefree integer > 1, got {self.d}")

    @property
    def degree(self) -> int:
        return 1 if self.d is None else 2

    def __str__(self) -> str:
        return "Q" if self.d is None else f"Q(sqrt({self.d}))"

    def __call__(self, a, b=0, den=1):
        if self.d is None:
            if b:
                raise InvalidInput("Q has no irrational part")
            v = Fraction(a, den)
            return v.numerator if v.denominator == 1 else v
        return QuadFieldElem(a, b, den, self.d)

    def to_json(self):
        return "Q" if self.d is None else {"sqrt": self.d}

    @classmethod
    def from_json(cls, obj) -> Field:
        if obj in (None, "Q", "QQ"):
            return QQ
        if isinstance(obj, dict) and "sqrt" in obj:
            return cls(int(obj["sqrt"]))
        if isinstance(obj, int) and not isinstance(obj, bool):
            return cls(obj)
        raise InvalidInput(f"unrecognised field descriptor {obj!r}")

    def parse(self, obj):
        """Element from JSON coordinates: int, "p/q", [a, b] or [a, b, den]."""
        if isinstance(obj, bool):
            raise InvalidInput("booleans are not field elements")
        if isinstance(obj, int):
            return self(obj)
        if isinstance(obj, str):
            return self(Fraction(obj))
        if isinstance(obj, (list, tuple)) and len(obj) in (1, 2, 3):
            a = int(obj[0])
            b = int(obj[1]) if len(obj) > 1 else 0
            den = int(obj[2]) if len(obj) > 2 else 1
            return self(a, b, den)
        raise InvalidInput(f"cannot parse field element {obj!r}")

    def contains(self, x) -> bool:
        if isinstance(x, QuadFieldElem):
            return x.d == self.d or x.b == 0
        return isinstance(x, Rational)

    def is_integer(self, x) -> bool:
        if isinstance(x, QuadFieldElem):
            return x.is_integral()
        return isinstance(x, Rational) and Fraction(x).denominator == 1


QQ = Field()


class QuadFieldElem:
    """(a + b*sqrt(d)) / den with gcd(a, b, den) = 1 and den > 0."""

    __slots__ = ("a", "b", "den", "d")

    def __init__(self, a, b=0, den=1, d: int = 2):
        a, b, den = Fraction(a), Fraction(b), Fraction(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        # clear inner fractions
        common = _lcm(_lcm(a.denominator, b.denominator), den.numerator)
        na = a * common
        nb = b * common
        nd = den * common
        # now na, nb are integers, nd rational -> make integer
        k = nd.denominator
        ai, bi, di = int(na * k), int(nb * k), int(nd * k)
        if di < 0:
            ai, bi, di = -ai, -bi, -di
        g = gcd(gcd(ai, bi), di)
        self.a, self.b, self.den, self.d = ai // g, bi // g, di // g, d

    def __repr__(self) -> str:
        return f"QuadFieldElem({self.a}, {self.b}, {self.den}, d={self.d})"

    def __str__(self) -> str:
        core = f"{self.a}{self.b:+}*sqrt({self.d})"
        return core if self.den == 1 else f"({core})/{self.den}"

    def coords(self) -> list[int]:
        return [self.a, self.b] if self.den == 1 else [self.a, self.b, self.den]

    def _lift(self, other):
        if isinstance(other, QuadFieldElem):
            if other.d != self.d:
                raise InvalidInput(f"mixing Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        if isinstance(other, Rational):
            f = Fraction(other)
            return QuadFieldElem(f.numerator, 0, f.denominator, self.d)
        return None

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadFieldElem):
            return (self.a, self.b, self.den) == (other.a, other.b, other.den) and (
                self.d == other.d or self.b == 0
            )
        if isinstance(other, Rational):
            return self.b == 0 and Fraction(self.a, self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(Fraction(self.a, self.den))
        return hash((self.a, self.b, self.den, self.d))

    def __neg__(self) -> QuadFieldElem:
        return QuadFieldElem(-self.a, -self.b, self.den, self.d)

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadFieldElem(
            self.a * o.den + o.a * self.den, self.b * o.den + o.b * self.den, self.den * o.den, self.d
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadFieldElem(
            self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.den * o.den, self.d
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return self * o.conjugate() * QuadFieldElem(1 / n, 0, 1, self.d)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return QuadFieldElem(1, 0, 1, self.d) / (self ** (-n))
        result = QuadFieldElem(1, 0, 1, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def conjugate(self) -> QuadFieldElem:
        return QuadFieldElem(self.a, -self.b, self.den, self.d)

    def norm(self) -> Fraction:
        return Fraction(self.a * self.a - self.d * self.b * self.b, self.den * self.den)

    def trace(self) -> Fraction:
        return Fraction(2 * self.a, self.den)

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integral(self) -> bool:
        """Algebraic integer iff its trace and norm are rational integers."""
        if self.b == 0:
            return self.den == 1
        return self.trace().denominator == 1 and self.norm().denominator == 1

    def sign(self) -> int:
        """Exact sign of the real embedding with sqrt(d) > 0."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d*b^2
        c = self.a * self.a - self.d * self.b * self.b
        return sa if c > 0 else sb

    def to_ball(self, prec: int = DEFAULT_PREC) -> RealBall:
        root = RealBall(self.d, prec=prec + 16).sqrt()
        return ((self.a + self.b * root) / self.den).with_prec(prec)

    def minpoly(self) -> list[int]:
        """Primitive integer minimal polynomial, constant term first."""
        if self.b == 0:
            return [-self.a, self.den]
        c0, c1 = self.norm(), -self.trace()
        m = _lcm(c0.denominator, c1.denominator)
        coeffs = [int(c0 * m), int(c1 * m), m]
        g = gcd(gcd(coeffs[0], coeffs[1]), coeffs[2])
        return [c // g for c in coeffs]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# -- helpers that accept any element of K (int, Fraction or QuadFieldElem) --

def norm_in_K(x) -> Fraction:
    """N_{K/Q}(x); for K = Q the norm of a rational is the rational itself."""
    if isinstance(x, QuadFieldElem):
        return x.norm()
    return Fraction(x)


def trace_in_K(x) -> Fraction:
    if isinstance(x, QuadFieldElem):
        return x.trace()
    return Fraction(x)


def conj(x):
    return x.conjugate() if isinstance(x, QuadFieldElem) else x


def embed(x, prec: int = DEFAULT_PREC) -> RealBall:
    if isinstance(x, QuadFieldElem):
        return x.to_ball(prec)
    return RealBall(x, prec=prec)


def exact_sign(x) -> int:
    if isinstance(x, QuadFieldElem):
        return x.sign()
    return (x > 0) - (x < 0)


def is_algebraic_integer(x) -> bool:
    if isinstance(x, QuadFieldElem):
        return x.is_integral()
    return Fraction(x).denominator == 1


def exact_quotient(gamma, beta):
    """gamma / beta if it lies in O_K, else None."""
    if isinstance(beta, QuadFieldElem):
        q = beta._lift(gamma) / beta
        return q if q.is_integral() else None
    if isinstance(gamma, QuadFieldElem):
        q = gamma / beta
        return q if q.is_integral() else None
    q = Fraction(gamma) / Fraction(beta)
    return q.numerator if q.denominator == 1 else None


def element_minpoly(x) -> list[int]:
    if isinstance(x, QuadFieldElem):
        return x.minpoly()
    f = Fraction(x)
    return [-f.numerator, f.denominator]


def to_json(x):
    if isinstance(x, QuadFieldElem):
        return x.coords()
    f = Fraction(x)
    return f.numerator if f.denominator == 1 else str(f)


def rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None
