"""Digit expansions in a real algebraic-integer base and palindromic repdigit patterns."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalError, InvalidInput, NoExpansion, UnitBase, UnsupportedBase
from .exactnum.balls import DEFAULT_PREC, RealBall
from .exactnum.quadfield import (
    QQ,
    Field,
    QuadFieldElem,
    embed,
    exact_quotient,
    exact_sign,
    is_algebraic_integer,
    norm_in_K,
    to_json,
)


@dataclass(frozen=True)
class BaseSpec:
    """A real algebraic integer beta > 1 of K with |N(beta)| >= 2 and digits 0..|N(beta)|-1."""

    beta: object
    field: Field = QQ

    def __post_init__(self):
        beta, K = self.beta, self.field
        if isinstance(beta, bool) or not K.contains(beta):
            raise InvalidInput(f"{beta!r} is not an element of {K}")
        if not is_algebraic_integer(beta):
            raise InvalidInput(f"{beta!r} is not an algebraic integer")
        if exact_sign(beta - 1) <= 0:
            raise InvalidInput("the base must be a real number greater than one")
        if self.alphabet_size < 2:
            raise UnitBase(f"{beta} is a unit (|N(beta)| = 1)")
        for d in range(1, self.alphabet_size):
            if exact_quotient(d, beta) is not None:
                raise UnsupportedBase(
                    f"digits 0 and {d} are congruent modulo {beta}; digit set is not a residue system")

    @classmethod
    def integer(cls, b: int) -> BaseSpec:
        return cls(int(b), QQ)

    @classmethod
    def from_json(cls, obj) -> BaseSpec:
        if isinstance(obj, int) and not isinstance(obj, bool):
            return cls.integer(obj)
        if not isinstance(obj, dict) or "beta" not in obj:
            raise InvalidInput(f"malformed base spec {obj!r}")
        K = Field.from_json(obj.get("field", "Q"))
        return cls(K.parse(obj["beta"]), K)

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "beta": to_json(self.beta)}

    @property
    def alphabet_size(self) -> int:
        return abs(int(norm_in_K(self.beta)))

    @property
    def is_integer_base(self) -> bool:
        return not isinstance(self.beta, QuadFieldElem) or self.beta.b == 0

    def ball(self, prec: int = DEFAULT_PREC) -> RealBall:
        return embed(self.beta, prec)

    def lift(self, x):
        """x as an element of K (QuadFieldElem for quadratic K)."""
        if self.field.d is None:
            return x
        return x + QuadFieldElem(0, 0, 1, self.field.d)

    def __str__(self) -> str:
        return str(self.beta) if self.field.d is None else f"{self.beta} in {self.field}"


@dataclass(frozen=True)
class DigitString:
    """Digits, most significant first."""

    digits: tuple[int, ...]

    def __post_init__(self):
        if not self.digits:
            raise InvalidInput("empty digit string")
        if any(d < 0 for d in self.digits):
            raise InvalidInput("digits must be nonnegative")
        if self.digits[0] == 0 and len(self.digits) > 1:
            raise InvalidInput("leading digit must be nonzero")

    def __len__(self) -> int:
        return len(self.digits)

    def render(self, alphabet_size: int = 10) -> str:
        if alphabet_size > 10:
            return ".".join(str(d) for d in self.digits)
        return "".join(str(d) for d in self.digits)

    @classmethod
    def parse(cls, text: str) -> DigitString:
        """Accepts "151", "1,5,1" or "1.5.1"."""
        text = text.strip()
        for sep in (",", "."):
            if sep in text:
                parts = [p.strip() for p in text.split(sep)]
                break
        else:
            parts = list(text)
        try:
            return cls(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise InvalidInput(f"cannot parse digit string {text!r}") from exc


@dataclass(frozen=True, order=True)
class PalindromicPattern:
    """The digit string d1^l d2^m d1^l."""

    d1: int
    d2: int
    l: int
    m: int

    def __post_init__(self):
        if self.d1 < 1 or self.d2 < 0 or self.l < 1 or self.m < 1:
            raise InvalidInput(f"invalid pattern {self}")

    @property
    def length(self) -> int:
        return 2 * self.l + self.m

    def render(self) -> DigitString:
        return DigitString((self.d1,) * self.l + (self.d2,) * self.m + (self.d1,) * self.l)

    def to_json(self) -> dict:
        return {"d1": self.d1, "d2": self.d2, "l": self.l, "m": self.m}


def _default_cap(alpha) -> int:
    return 4 * abs(int(norm_in_K(alpha))).bit_length() + 64


def expand(alpha, base: BaseSpec, digit_cap: int | None = None) -> DigitString:
    """Greedy expansion: peel off the unique digit d with beta | (alpha - d)."""
    if not base.field.contains(alpha) or not is_algebraic_integer(alpha):
        raise InvalidInput(f"{alpha!r} is not in the ring of integers of {base.field}")
    if alpha == 0:
        return DigitString((0,))
    cap = _default_cap(alpha) if digit_cap is None else digit_cap
    N, beta = base.alphabet_size, base.beta
    out = []
    if base.field.d is None:
        alpha = int(alpha)
        while alpha != 0:
            if len(out) >= cap:
                raise NoExpansion(f"no terminating expansion within {cap} digits")
            alpha, d = divmod(alpha, beta)
            out.append(d)
        return DigitString(tuple(reversed(out)))
    if isinstance(alpha, QuadFieldElem) and alpha.den == 1 and beta.den == 1 and beta.d % 4 != 1:
        return _expand_zsqrt(alpha.a, alpha.b, beta, N, cap)
    seen = set()
    while alpha != 0:
        if len(out) >= cap:
            raise NoExpansion(f"no terminating expansion within {cap} digits")
        if alpha in seen:
            raise NoExpansion("greedy digit extraction entered a cycle")
        seen.add(alpha)
        for d in range(N):
            q = exact_quotient(alpha - d, beta)
            if q is not None:
                out.append(d)
                alpha = q
                break
        else:
            raise NoExpansion("no digit is congruent to the value")
    return DigitString(tuple(reversed(out)))


def _expand_zsqrt(a: int, b: int, beta: QuadFieldElem, N: int, cap: int) -> DigitString:
    # Z[sqrt d] coordinates: beta | x iff norm(beta) divides both coordinates of x * conj(beta)
    p, q, d = beta.a, beta.b, beta.d
    nb = p * p - d * q * q
    out = []
    seen = set()
    while a or b:
        if len(out) >= cap:
            raise NoExpansion(f"no terminating expansion within {cap} digits")
        if (a, b) in seen:
            raise NoExpansion("greedy digit extraction entered a cycle")
        seen.add((a, b))
        for dig in range(N):
            u, v = (a - dig) * p - b * q * d, b * p - (a - dig) * q
            if u % nb == 0 and v % nb == 0:
                out.append(dig)
                a, b = u // nb, v // nb
                break
        else:
            raise NoExpansion("no digit is congruent to the value")
    return DigitString(tuple(reversed(out)))


def evaluate(s: DigitString, base: BaseSpec):
    N = base.alphabet_size
    acc = base.lift(0)
    for d in s.digits:
        if d >= N:
            raise InvalidInput(f"digit {d} outside 0..{N - 1}")
        acc = acc * base.beta + d
    return acc


def _geometric(beta, k, one):
    # 1 + beta + ... + beta^(k-1)
    acc = one * 0
    for _ in range(k):
        acc = acc * beta + 1
    return acc


def pattern_value(p: PalindromicPattern, base: BaseSpec, check: bool = True):
    """Exact value of d1^l d2^m d1^l in base beta, via the closed form over (beta - 1)."""
    N = base.alphabet_size
    if p.d1 >= N or p.d2 >= N:
        raise InvalidInput(f"pattern digits exceed alphabet 0..{N - 1}")
    beta = base.lift(base.beta)
    d1, d2, l, m = p.d1, p.d2, p.l, p.m
    bl = beta ** l
    blm = bl * beta ** m
    num = d1 * blm * bl - (d1 - d2) * blm + (d1 - d2) * bl - d1
    if base.field.d is None:
        q, r = divmod(num, beta - 1)
        if r:
            raise InternalError("closed form is not divisible by beta - 1")
        value = q
    else:
        value = num / (beta - 1)
        if not value.is_integral():
            raise InternalError("closed form is not an algebraic integer")
    if check:
        one = base.lift(1)
        naive = (d1 * blm * _geometric(beta, l, one) + d2 * bl * _geometric(beta, m, one)
                 + d1 * _geometric(beta, l, one))
        if naive != value:
            raise InternalError(f"closed form and digit sum disagree for {p}")
    return value


def match_pattern(s: DigitString, distinct: bool = False) -> list[PalindromicPattern]:
    """Every (d1, d2, l, m) with d1^l d2^m d1^l == s, ordered by increasing l."""
    digits = s.digits
    n = len(digits)
    if n < 3 or digits[0] == 0:
        return []
    runs = [(d, len(list(g))) for d, g in itertools.groupby(digits)]
    if len(runs) == 1:
        if distinct:
            return []
        d = runs[0][0]
        return [PalindromicPattern(d, d, l, n - 2 * l) for l in range(1, (n - 1) // 2 + 1)]
    if len(runs) == 3 and runs[0][0] == runs[2][0] and runs[0][1] == runs[2][1]:
        (d1, l), (d2, m), _ = runs
        return [PalindromicPattern(d1, d2, l, m)]
    return []


def value_to_json(x):
    if isinstance(x, Fraction):
        return str(x)
    return to_json(x)
