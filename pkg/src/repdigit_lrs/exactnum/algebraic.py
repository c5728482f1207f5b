"""Algebraic numbers as (minimal polynomial, isolating box) pairs."""
from __future__ import annotations

import enum
from fractions import Fraction
from math import isqrt
from typing import Callable

import mpmath

from ..errors import DegreeTooLarge, InvalidInput, PrecisionExhausted
from . import polys
from .balls import DEFAULT_PREC, MAX_PREC, ComplexBall, RealBall, log_plus
from .quadfield import Field, QuadFieldElem, element_minpoly, squarefree_part
from .roots import isolate_roots, refine_real_root

MAX_DEGREE = 6
DEFAULT_HEIGHT_TOL = mpmath.mpf("1e-30")


def _frac(x: mpmath.mpf) -> Fraction:
    p, q = mpmath.libmp.to_rational(x._mpf_)
    return Fraction(int(p), int(q))


class AlgebraicNumber:
    """A root of an irreducible primitive integer polynomial, pinned by a box.

    ``minpoly`` is constant-term first with positive leading coefficient.
    The isolator contains exactly one root of ``minpoly``; refinement only
    ever shrinks it, so the designated root never changes.
    """

    __slots__ = ("minpoly", "isolator", "_interval", "_cache")

    def __init__(self, minpoly, isolator: ComplexBall, _interval=None):
        self.minpoly = tuple(int(c) for c in minpoly)
        if len(self.minpoly) < 2 or self.minpoly[-1] <= 0:
            raise InvalidInput(f"bad minimal polynomial {minpoly!r}")
        self.isolator = isolator
        # rational isolating interval for real roots
        if _interval is None and isolator.is_real() and self.degree > 1:
            _interval = (isolator.re.lo_fraction(), isolator.re.hi_fraction())
        self._interval = _interval
        self._cache: dict[int, ComplexBall] = {}

    # -- constructors ----------------------------------------------------
    @classmethod
    def rational(cls, q) -> AlgebraicNumber:
        q = Fraction(q)
        return cls([-q.numerator, q.denominator], ComplexBall(RealBall(q, prec=DEFAULT_PREC), 0))

    @classmethod
    def from_field_element(cls, x) -> AlgebraicNumber:
        if isinstance(x, QuadFieldElem) and x.b != 0:
            return cls.from_enclosure(x.minpoly(), lambda p: ComplexBall(x.to_ball(p), 0))
        return cls.rational(x.a / Fraction(x.den) if isinstance(x, QuadFieldElem) else x)

    @classmethod
    def roots_of(cls, poly, prec: int = DEFAULT_PREC) -> list[AlgebraicNumber]:
        """All distinct roots of a nonzero integer polynomial."""
        out = []
        for g, _ in polys.factor_over_Q(poly):
            for box in isolate_roots(g, prec):
                out.append(cls(g, box))
        return out

    @classmethod
    def from_enclosure(cls, poly, enclose: Callable[[int], ComplexBall],
                       prec: int = DEFAULT_PREC) -> AlgebraicNumber:
        """The root of ``poly`` lying in ``enclose(prec)`` for every precision.

        ``enclose`` must return a box known to contain the target value; the
        precision is raised until exactly one root of one irreducible factor
        of ``poly`` meets the box.
        """
        factors = [g for g, _ in polys.factor_over_Q(poly)]
        p = prec
        while p <= MAX_PREC:
            box = enclose(p)
            cands = []
            for g in factors:
                val = polys.evaluate([ComplexBall(c, 0, prec=p) for c in g], box)
                if not val.contains_zero():
                    continue
                for root in isolate_roots(g, p):
                    if root.overlaps(box):
                        cands.append((g, root))
            if len(cands) == 1:
                g, root = cands[0]
                if len(g) - 1 > MAX_DEGREE:
                    raise DegreeTooLarge(f"degree {len(g) - 1} exceeds cap {MAX_DEGREE}")
                return cls(g, root)
            p *= 2
        raise PrecisionExhausted("could not single out a root")

    # -- basic properties -----------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def leading_coefficient(self) -> int:
        return self.minpoly[-1]

    def is_real(self) -> bool:
        return self.isolator.is_real()

    def is_rational(self) -> bool:
        return self.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise InvalidInput("not a rational number")
        return Fraction(-self.minpoly[0], self.minpoly[1])

    def __repr__(self) -> str:
        return f"AlgebraicNumber({list(self.minpoly)}, ~{mpmath.nstr(self.isolator.re.mid, 15)}" + (
            "" if self.is_real() else ("+" if self.isolator.im.mid >= 0 else "") + f"{mpmath.nstr(self.isolator.im.mid, 15)}i") + ")"

    def to_json(self) -> dict:
        return {"minpoly": list(self.minpoly), "isolator": self.isolator.to_json()}

    # -- refinement ------------------------------------------------------
    def refine(self, target_radius) -> AlgebraicNumber:
        target = Fraction(target_radius) if not isinstance(target_radius, mpmath.mpf) else _frac(target_radius)
        if target <= 0:
            raise InvalidInput("target radius must be positive")
        if self.is_rational():
            return self
        if self._interval is not None:
            lo, hi = refine_real_root(list(self.minpoly), *self._interval, target)
            bits = max(DEFAULT_PREC, target.denominator.bit_length() - target.numerator.bit_length() + 64)
            box = ComplexBall(RealBall(lo, hi, prec=bits), 0, prec=bits)
            return AlgebraicNumber(self.minpoly, box, (lo, hi))
        p = max(DEFAULT_PREC, self.isolator.prec)
        while p <= MAX_PREC:
            for root in isolate_roots(list(self.minpoly), p):
                if self.isolator.contains(root) and _frac(root.radius()) <= target:
                    return AlgebraicNumber(self.minpoly, root)
            p *= 2
        raise PrecisionExhausted("refinement hit the precision cap")

    def enclosure(self, prec: int = DEFAULT_PREC) -> ComplexBall:
        """Box of relative width about 2**-prec, at working precision ``prec``."""
        if prec in self._cache:
            return self._cache[prec]
        if self.is_rational():
            box = ComplexBall(RealBall(self.as_fraction(), prec=prec), 0)
        else:
            mag = max(mpmath.mpf(1), abs(self.isolator.re.mid) + abs(self.isolator.im.mid))
            target = _frac(mag * mpmath.mpf(2) ** (-prec))
            r = self.refine(target).isolator
            box = ComplexBall(r.re.with_prec(prec), r.im.with_prec(prec))
        self._cache[prec] = box
        return box

    def real_enclosure(self, prec: int = DEFAULT_PREC) -> RealBall:
        if not self.is_real():
            raise InvalidInput("number is not real")
        return self.enclosure(prec).re

    def conjugates(self, prec: int = DEFAULT_PREC) -> list[ComplexBall]:
        return isolate_roots(list(self.minpoly), prec)

    # -- arithmetic via resultants --------------------------------------
    def __neg__(self) -> AlgebraicNumber:
        return AlgebraicNumber.from_enclosure(polys.negate_var(list(self.minpoly)),
                                              lambda p: -self.enclosure(p))

    def inverse(self) -> AlgebraicNumber:
        if self.minpoly[0] == 0:
            raise ZeroDivisionError("inverse of zero")
        return AlgebraicNumber.from_enclosure(polys.reciprocal(list(self.minpoly)),
                                              lambda p: 1 / self.enclosure(p))

    def __mul__(self, other) -> AlgebraicNumber:
        other = _lift(other)
        R = polys.resultant_product(list(self.minpoly), list(other.minpoly))
        return AlgebraicNumber.from_enclosure(R, lambda p: self.enclosure(p) * other.enclosure(p))

    __rmul__ = __mul__

    def __add__(self, other) -> AlgebraicNumber:
        other = _lift(other)
        R = polys.resultant_sum(list(self.minpoly), list(other.minpoly))
        return AlgebraicNumber.from_enclosure(R, lambda p: self.enclosure(p) + other.enclosure(p))

    __radd__ = __add__

    def __sub__(self, other) -> AlgebraicNumber:
        return self + (-_lift(other))

    def __truediv__(self, other) -> AlgebraicNumber:
        return self * _lift(other).inverse()

    def __pow__(self, s: int) -> AlgebraicNumber:
        if not isinstance(s, int):
            return NotImplemented
        if s == 0:
            return AlgebraicNumber.rational(1)
        if s < 0:
            return (self ** (-s)).inverse()
        if s == 1:
            return self
        R = polys.resultant_power(list(self.minpoly), s)
        return AlgebraicNumber.from_enclosure(R, lambda p: self.enclosure(p) ** s)


def _lift(x) -> AlgebraicNumber:
    if isinstance(x, AlgebraicNumber):
        return x
    if isinstance(x, QuadFieldElem):
        return AlgebraicNumber.from_field_element(x)
    return AlgebraicNumber.rational(x)


def refine(x: AlgebraicNumber, target_radius) -> AlgebraicNumber:
    return x.refine(target_radius)


def height_of_minpoly(minpoly, tol=DEFAULT_HEIGHT_TOL, prec: int = DEFAULT_PREC) -> RealBall:
    """(1/deg)(log|lc| + sum log max(1, |root|)) over all roots of an irreducible polynomial."""
    minpoly = list(minpoly)
    deg = len(minpoly) - 1
    if deg == 1:
        q = Fraction(-minpoly[0], minpoly[1])
        return RealBall(max(abs(q.numerator), q.denominator), prec=prec).log()
    p = prec
    while p <= MAX_PREC:
        acc = RealBall(abs(minpoly[-1]), prec=p).log()
        for root in isolate_roots(minpoly, p):
            acc = acc + log_plus(abs(root))
        h = acc / deg
        if h.width() <= tol:
            return h
        p *= 2
    raise PrecisionExhausted("height did not reach the requested tolerance")


def weil_height(x, tol=DEFAULT_HEIGHT_TOL, prec: int = DEFAULT_PREC) -> RealBall:
    """Absolute logarithmic Weil height, via the Mahler-measure formula."""
    if isinstance(x, AlgebraicNumber):
        return height_of_minpoly(x.minpoly, tol, prec)
    # field elements: the height depends only on the minimal polynomial, so no embedding is needed
    if isinstance(x, QuadFieldElem) and x.b == 0:
        x = Fraction(x.a, x.den)
    return height_of_minpoly(element_minpoly(x), tol, prec)


class Membership(enum.Enum):
    NO = "No"
    UNDETERMINED = "Undetermined"


def member_of_K(x: AlgebraicNumber, K: Field) -> Membership:
    """Sufficient test for non-membership: elements of K have degree dividing [K:Q]."""
    return Membership.NO if K.degree % x.degree else Membership.UNDETERMINED


def in_field(x: AlgebraicNumber, K: Field) -> bool:
    """Exact membership decision for fields of degree <= 2."""
    if x.degree == 1:
        return True
    if x.degree == 2 and K.d is not None:
        c0, c1, c2 = x.minpoly
        return squarefree_part(c1 * c1 - 4 * c0 * c2) == K.d
    return False


def as_field_element(x: AlgebraicNumber, K: Field):
    """Coordinates of x in K, or None if x is not in K."""
    if not in_field(x, K):
        return None
    if x.degree == 1:
        return K(x.as_fraction()) if K.d is None else QuadFieldElem(x.as_fraction(), 0, 1, K.d)
    c0, c1, c2 = x.minpoly
    disc = c1 * c1 - 4 * c0 * c2
    k = isqrt(disc // K.d)
    for sign in (1, -1):
        cand = QuadFieldElem(-c1, sign * k, 2 * c2, K.d)
        if x.isolator.re.overlaps(cand.to_ball(x.isolator.prec + 32)):
            other = QuadFieldElem(-c1, -sign * k, 2 * c2, K.d)
            if not x.isolator.re.overlaps(other.to_ball(x.isolator.prec + 32)):
                return cand
    return as_field_element(x.refine(Fraction(1, 2 ** 40)), K)
