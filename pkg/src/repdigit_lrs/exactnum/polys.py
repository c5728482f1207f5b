"""Dense univariate polynomials as coefficient lists, constant term first."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from numbers import Rational

import sympy

_X, _Y = sympy.symbols("x y")


def trim(p: list) -> list:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def degree(p: list) -> int:
    p = trim(p)
    return -1 if p == [0] else len(p) - 1


def primitive(p) -> list[int]:
    """Primitive integer multiple of p with positive leading coefficient."""
    p = [Fraction(c) for c in trim(p)]
    den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in p), 1)
    ints = [int(c * den) for c in p]
    g = reduce(gcd, ints, 0) or 1
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def evaluate(p, x):
    """Horner evaluation; works for ints, Fractions, field elements and balls."""
    acc = p[-1] + 0 * x
    for c in reversed(p[:-1]):
        acc = acc * x + c
    return acc


def derivative(p: list) -> list:
    return trim([k * p[k] for k in range(1, len(p))] or [0])


def poly_mul(p: list, q: list) -> list:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def poly_divmod(p: list, q: list) -> tuple[list, list]:
    """Division over a field (coefficients must support exact '/')."""
    p, q = trim(p), trim(q)
    if q == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = len(q) - 1
    quo = [0] * max(len(p) - dq, 1)
    lc = q[-1]
    for k in range(len(p) - 1 - dq, -1, -1):
        c = _div(rem[k + dq], lc)
        quo[k] = c
        if c != 0:
            for j, b in enumerate(q):
                rem[k + j] = rem[k + j] - c * b
    return trim(quo), trim(rem[:dq] or [0])


def poly_gcd(p: list, q: list) -> list:
    """Monic gcd over a field whose elements support exact division."""
    a, b = trim(p), trim(q)
    while b != [0]:
        _, r = poly_divmod(a, b)
        a, b = b, r
    lc = a[-1]
    return [_div(c, lc) for c in a]


def _div(a, b):
    if isinstance(a, Rational) and isinstance(b, Rational):
        q = Fraction(a) / Fraction(b)
        return q.numerator if q.denominator == 1 else q
    return a / b


def _to_sympy(p, var=_X) -> sympy.Poly:
    return sympy.Poly(list(reversed([int(c) for c in p])), var, domain="ZZ")


def _from_sympy(P: sympy.Poly) -> list[int]:
    return [int(c) for c in reversed(P.all_coeffs())]


def factor_over_Q(p) -> list[tuple[list[int], int]]:
    """Irreducible factors of a nonzero rational polynomial (content dropped)."""
    prim = primitive(p)
    if len(prim) == 1:
        return []
    _, facs = sympy.factor_list(_to_sympy(prim))
    return [(primitive(_from_sympy(f)), e) for f, e in facs]


def is_irreducible(p) -> bool:
    facs = factor_over_Q(p)
    return len(facs) == 1 and facs[0][1] == 1


def squarefree_part(p) -> list[int]:
    facs = factor_over_Q(p)
    return primitive(reduce(poly_mul, (f for f, _ in facs), [1]))


def resultant_product(p: list[int], q: list[int]) -> list[int]:
    """Polynomial vanishing at every product of a root of p and a root of q."""
    n = len(q) - 1
    qq = sum(int(c) * _X ** k * _Y ** (n - k) for k, c in enumerate(q))
    P = sum(int(c) * _Y ** k for k, c in enumerate(p))
    R = sympy.resultant(P, qq, _Y)
    return primitive(_from_sympy(sympy.Poly(R, _X)))


def resultant_sum(p: list[int], q: list[int]) -> list[int]:
    """Polynomial vanishing at every sum of a root of p and a root of q."""
    qq = sum(int(c) * (_X - _Y) ** k for k, c in enumerate(q))
    P = sum(int(c) * _Y ** k for k, c in enumerate(p))
    R = sympy.resultant(P, sympy.expand(qq), _Y)
    return primitive(_from_sympy(sympy.Poly(R, _X)))


def resultant_power(p: list[int], s: int) -> list[int]:
    """Polynomial vanishing at r**s for every root r of p (s >= 1)."""
    P = sum(int(c) * _Y ** k for k, c in enumerate(p))
    R = sympy.resultant(P, _X - _Y ** s, _Y)
    return primitive(_from_sympy(sympy.Poly(R, _X)))


def reciprocal(p: list[int]) -> list[int]:
    return primitive(list(reversed(trim(p))))


def negate_var(p: list[int]) -> list[int]:
    return primitive([c * (-1) ** k for k, c in enumerate(p)])


def scale_var(p: list, k) -> list[int]:
    """Polynomial whose roots are the roots of p multiplied by k (k != 0)."""
    n = len(p) - 1
    k = Fraction(k)
    return primitive([Fraction(c) * k ** (n - i) for i, c in enumerate(p)])


def discriminant(p: list[int]) -> int:
    return int(sympy.discriminant(_to_sympy(p)))
