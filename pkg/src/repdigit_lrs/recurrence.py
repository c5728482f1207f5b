"""Third-order linear recurrences over O_K and their characteristic data."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterator

from .errors import HypothesisViolation, InternalError, InvalidInput, PrecisionExhausted, RepeatedRoots
from .exactnum import polys
from .exactnum.algebraic import AlgebraicNumber, Membership, in_field, member_of_K
from .exactnum.balls import DEFAULT_PREC, MAX_PREC, ComplexBall, RealBall
from .exactnum.quadfield import QQ, Field, QuadFieldElem, conj, embed, is_algebraic_integer
from .exactnum.roots import isolate_roots

ITERATION_LIMIT = 10 ** 6
BINET_CHECK_INDICES = (0, 1, 2, 10, 20)


def _zero(K: Field):
    return 0 if K.d is None else QuadFieldElem(0, 0, 1, K.d)


@dataclass(frozen=True)
class RecurrenceSpec:
    """a(n+3) = a*a(n+2) + b*a(n+1) + c*a(n) with a, b, c and a(0..2) in O_K."""

    coeffs: tuple
    initials: tuple
    field: Field = QQ
    name: str | None = None

    def __post_init__(self):
        if len(self.coeffs) != 3 or len(self.initials) != 3:
            raise InvalidInput("need exactly three coefficients and three initial terms")
        for x in (*self.coeffs, *self.initials):
            if not self.field.contains(x) or not is_algebraic_integer(x):
                raise InvalidInput(f"{x!r} is not an algebraic integer of {self.field}")
        if self.discriminant() == 0:
            raise RepeatedRoots("characteristic polynomial has a repeated root")

    @classmethod
    def from_json(cls, obj: dict, name: str | None = None) -> RecurrenceSpec:
        try:
            K = Field.from_json(obj.get("field", "Q"))
            coeffs = tuple(K.parse(c) for c in obj["coeffs"])
            initials = tuple(K.parse(c) for c in obj["initials"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed recurrence spec: {exc}") from exc
        return cls(coeffs, initials, K, name)

    def to_json(self) -> dict:
        from .exactnum.quadfield import to_json
        out = {"coeffs": [to_json(c) for c in self.coeffs],
               "initials": [to_json(c) for c in self.initials],
               "field": self.field.to_json()}
        if self.name:
            out["name"] = self.name
        return out

    # f(X) = X^3 - aX^2 - bX - c, constant term first
    @property
    def charpoly(self) -> list:
        a, b, c = self.coeffs
        return [-c, -b, -a, 1]

    def discriminant(self):
        # discriminant of X^3 + pX^2 + qX + r
        p, q, r = (-x for x in self.coeffs)
        return p * p * q * q - 4 * q ** 3 - 4 * p ** 3 * r - 27 * r * r + 18 * p * q * r

    def binet_numerator(self) -> list:
        """q(X) with A_i = q(z_i) / f'(z_i)."""
        a, b, _ = self.coeffs
        a0, a1, a2 = self.initials
        return [a2 - a * a1 - b * a0, a1 - a * a0, a0]

    def integer_charpoly(self) -> list[int]:
        """Primitive integer polynomial with the same roots as f (f times its conjugate for quadratic K)."""
        f = self.charpoly
        if self.field.d is None:
            return polys.primitive(f)
        prod = polys.poly_mul(f, [conj(c) for c in f])
        return polys.primitive([Fraction(c.a, c.den) if isinstance(c, QuadFieldElem) else c for c in prod])


def load_presets() -> dict[str, dict]:
    with resources.files("repdigit_lrs.data").joinpath("presets.json").open() as fh:
        return json.load(fh)


def preset(name: str) -> RecurrenceSpec:
    table = load_presets()
    if name not in table:
        raise InvalidInput(f"unknown preset {name!r}; choose from {', '.join(sorted(table))}")
    return RecurrenceSpec.from_json(table[name], name)


def terms(spec: RecurrenceSpec, start: int = 0) -> Iterator:
    """Yield a(start), a(start+1), ... exactly."""
    a, b, c = spec.coeffs
    if start > 3:
        x, y, z = term(spec, start), term(spec, start + 1), term(spec, start + 2)
    else:
        x, y, z = spec.initials
        for _ in range(start):
            x, y, z = y, z, a * z + b * y + c * x
    while True:
        yield x
        x, y, z = y, z, a * z + b * y + c * x


def _mat_mul(m1, m2):
    return [[sum((m1[i][k] * m2[k][j] for k in range(3)), start=0 * m1[0][0]) for j in range(3)]
            for i in range(3)]


def companion_power_term(spec: RecurrenceSpec, n: int):
    """a(n) by binary powering of the 3x3 companion matrix."""
    a, b, c = spec.coeffs
    one, zero = 1 + _zero(spec.field), _zero(spec.field)
    result = [[one if i == j else zero for j in range(3)] for i in range(3)]
    base = [[zero, one, zero], [zero, zero, one], [c + zero, b + zero, a + zero]]
    k = n
    while k:
        if k & 1:
            result = _mat_mul(result, base)
        k >>= 1
        if k:
            base = _mat_mul(base, base)
    v = spec.initials
    return sum((result[0][j] * v[j] for j in range(3)), start=zero)


def term(spec: RecurrenceSpec, n: int):
    if n < 0:
        raise InvalidInput("index must be nonnegative")
    if n > ITERATION_LIMIT:
        return companion_power_term(spec, n)
    x, y, z = spec.initials
    a, b, c = spec.coeffs
    for _ in range(n):
        x, y, z = y, z, a * z + b * y + c * x
    return x


# -- characteristic data ----------------------------------------------------

def _embed_poly(p, prec) -> list[RealBall]:
    return [embed(c, prec + 16) for c in p]


def _complex_poly(p, prec) -> list[ComplexBall]:
    return [ComplexBall(embed(c, prec + 16), 0) for c in p]


def _root_boxes(spec: RecurrenceSpec, prec: int) -> list[ComplexBall]:
    f = spec.charpoly
    if spec.field.d is None:
        return isolate_roots([int(c) for c in f], prec)
    return isolate_roots(_embed_poly(f, prec), prec)


def _sort_key(box: ComplexBall):
    return (-float(box.abs2().mid), -float(box.re.mid), float(box.im.mid))


class _Tracker:
    """Follows one root of f across precisions by box containment."""

    def __init__(self, spec, box):
        self.spec, self.box = spec, box

    def __call__(self, prec: int) -> ComplexBall:
        p = max(prec, self.box.prec)
        while p <= MAX_PREC:
            for b in _root_boxes(self.spec, p):
                if self.box.contains(b):
                    return b
            p *= 2
        raise PrecisionExhausted("lost track of a characteristic root")


@dataclass
class CharacteristicData:
    spec: RecurrenceSpec
    z: list[AlgebraicNumber]
    A: list[ComplexBall]
    A_zero: list[bool]
    prec: int
    binet_over_K: bool = True
    degree_over_K: int = 3
    _A_cache: dict = field(default_factory=dict, repr=False)

    @property
    def z1(self) -> AlgebraicNumber:
        return self.z[0]

    def root_box(self, i: int, prec: int) -> ComplexBall:
        return self.z[i].enclosure(prec)

    def A_at(self, i: int, prec: int) -> ComplexBall:
        """Binet coefficient A_i recomputed at working precision ``prec``."""
        key = (i, prec)
        if key not in self._A_cache:
            if self.A_zero[i]:
                self._A_cache[key] = ComplexBall(0, 0, prec=prec)
            else:
                zi = self.root_box(i, prec)
                f = _complex_poly(self.spec.charpoly, prec)
                q = _complex_poly(self.spec.binet_numerator(), prec)
                self._A_cache[key] = polys.evaluate(q, zi) / polys.evaluate(polys.derivative(f), zi)
        return self._A_cache[key]

    def binet(self, n: int, prec: int | None = None) -> ComplexBall:
        p = prec or self.prec
        total = ComplexBall(0, 0, prec=p)
        for i in range(3):
            if not self.A_zero[i]:
                total = total + self.A_at(i, p) * self.root_box(i, p) ** n
        return total

    def to_json(self) -> dict:
        return {
            "roots": [z.to_json() for z in self.z],
            "binet": [a.to_json() for a in self.A],
            "binet_zero": self.A_zero,
            "binet_over_K": self.binet_over_K,
            "degree_over_K": self.degree_over_K,
            "precision": self.prec,
        }


def _zero_binet_flags(spec: RecurrenceSpec, boxes_at) -> list[bool]:
    """Exact test A_i = 0, i.e. z_i is a common root of f and q."""
    f = spec.charpoly
    q = polys.trim(spec.binet_numerator())
    if q == [0] or all(c == 0 for c in q):
        return [True] * 3
    g = polys.poly_gcd(f, q)
    if len(g) == 1:
        return [False] * 3
    h, r = polys.poly_divmod(f, g)
    if any(c != 0 for c in r):
        raise InternalError("gcd does not divide the characteristic polynomial")
    p = DEFAULT_PREC
    while p <= MAX_PREC:
        flags = []
        for box in boxes_at(p):
            in_g = polys.evaluate(_complex_poly(g, p), box).contains_zero()
            in_h = polys.evaluate(_complex_poly(h, p), box).contains_zero()
            if in_g == in_h:
                break
            flags.append(in_g)
        else:
            return flags
        p *= 2
    raise PrecisionExhausted("could not separate zeros of the Binet numerator")


def characteristic_data(spec: RecurrenceSpec, prec: int = DEFAULT_PREC) -> CharacteristicData:
    boxes = sorted(_root_boxes(spec, prec), key=_sort_key)
    P = spec.integer_charpoly()
    zs = [AlgebraicNumber.from_enclosure(P, _Tracker(spec, box), prec) for box in boxes]
    flags = _zero_binet_flags(spec, lambda p: [z.enclosure(p) for z in zs])
    # degree of z_1 over K: the K-irreducible factor of f through z_1
    if spec.field.d is None:
        deg_K = zs[0].degree
    else:
        g = polys.poly_gcd(spec.charpoly, [QuadFieldElem(c, 0, 1, spec.field.d) for c in zs[0].minpoly])
        deg_K = len(g) - 1
    cd = CharacteristicData(spec, zs, [], flags, prec, True, deg_K)
    cd.A = [cd.A_at(i, prec) for i in range(3)]
    for n in BINET_CHECK_INDICES:
        exact = term(spec, n)
        ball = cd.binet(n)
        target = ComplexBall(embed(exact, prec), 0)
        ok = ball.contains(target) if spec.field.d is None else ball.overlaps(target)
        if not ok:
            raise InternalError(f"Binet identity failed at n={n}")
    return cd


# -- hypothesis checking ----------------------------------------------------

class Verdict(enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    UNDETERMINED = "Undetermined"


HYPOTHESES = ("z1_real_gt_1", "z2_modulus_le_1", "z3_modulus_le_1", "A1_nonzero", "z1_not_in_K",
              "effective_eligible")


@dataclass
class HypothesisReport:
    verdicts: dict[str, Verdict]
    field: Field

    def all_pass(self) -> bool:
        return all(v is Verdict.PASS for v in self.verdicts.values())

    def theorem_applies(self) -> bool:
        return all(self.verdicts[k] is Verdict.PASS for k in HYPOTHESES[:5])

    def failures(self) -> list[str]:
        return [k for k, v in self.verdicts.items() if v is Verdict.FAIL]

    def undetermined(self) -> list[str]:
        return [k for k, v in self.verdicts.items() if v is Verdict.UNDETERMINED]

    def to_json(self) -> dict:
        return {"field": self.field.to_json(),
                "verdicts": {k: v.value for k, v in self.verdicts.items()},
                "theorem_applies": self.theorem_applies()}


def _is_root_of_f(spec: RecurrenceSpec, x) -> bool:
    return polys.evaluate(spec.charpoly, x + _zero(spec.field)) == 0


def _root_equals(cd: CharacteristicData, i: int, x) -> bool:
    """Exact: is z_i equal to the element x of K?"""
    if not _is_root_of_f(cd.spec, x):
        return False
    p = DEFAULT_PREC
    while p <= MAX_PREC:
        target = ComplexBall(embed(x, p), 0)
        hits = [j for j in range(3) if cd.root_box(j, p).overlaps(target)]
        if hits == [i]:
            return True
        if i not in hits:
            return False
        p *= 2
    raise PrecisionExhausted("could not match a rational root")


def _modulus_vs_one(cd: CharacteristicData, i: int) -> int | None:
    """Sign of |z_i| - 1, or None if undecidable below the precision cap."""
    spec = cd.spec
    p = DEFAULT_PREC
    exact_done = False
    while p <= MAX_PREC:
        m2 = cd.root_box(i, p).abs2()
        if m2.certainly_lt(1):
            return -1
        if m2.certainly_gt(1):
            return 1
        if not exact_done:
            exact_done = True
            if cd.z[i].is_real():
                if any(_root_equals(cd, i, s) for s in (1, -1)):
                    return 0
            else:
                # the conjugate pair has |z|^2 = c / r with r the remaining real root
                others = [j for j in range(3) if j != i and cd.z[j].is_real()]
                if len(others) == 1 and _root_equals(cd, others[0], spec.coeffs[2]):
                    return 0
        p *= 2
    return None


def _z1_gt_one(cd: CharacteristicData) -> Verdict:
    if not cd.z1.is_real():
        return Verdict.FAIL
    p = DEFAULT_PREC
    while p <= MAX_PREC:
        x = cd.root_box(0, p).re
        if x.certainly_gt(1):
            return Verdict.PASS
        if x.certainly_le(1):
            return Verdict.FAIL
        if _root_equals(cd, 0, 1):
            return Verdict.FAIL
        p *= 2
    return Verdict.UNDETERMINED


def check_hypotheses(spec: RecurrenceSpec, K: Field | None = None,
                     cd: CharacteristicData | None = None) -> HypothesisReport:
    K = spec.field if K is None else K
    cd = cd or characteristic_data(spec)
    v: dict[str, Verdict] = {"z1_real_gt_1": _z1_gt_one(cd)}
    for i, name in ((1, "z2_modulus_le_1"), (2, "z3_modulus_le_1")):
        s = _modulus_vs_one(cd, i)
        v[name] = Verdict.UNDETERMINED if s is None else (Verdict.FAIL if s > 0 else Verdict.PASS)
    v["A1_nonzero"] = Verdict.FAIL if cd.A_zero[0] else Verdict.PASS
    if member_of_K(cd.z1, K) is Membership.NO:
        v["z1_not_in_K"] = Verdict.PASS
    elif in_field(cd.z1, K):
        v["z1_not_in_K"] = Verdict.FAIL
    else:
        v["z1_not_in_K"] = Verdict.UNDETERMINED
    # A_1 = q(z_1)/f'(z_1) lies in K(z_1) whenever the initial terms lie in K
    if not cd.binet_over_K:
        v["effective_eligible"] = Verdict.UNDETERMINED
    else:
        v["effective_eligible"] = Verdict.FAIL if cd.A_zero[0] else Verdict.PASS
    return HypothesisReport(v, K)


# -- dominant form ----------------------------------------------------------

@dataclass
class DominantForm:
    """a(n) = A z^n + B(n) with |B(n)| <= R for every n."""

    A: RealBall
    z: AlgebraicNumber
    R: RealBall
    cd: CharacteristicData | None = None

    def A_at(self, prec: int) -> RealBall:
        if self.cd is None:
            return self.A
        return self.cd.A_at(0, prec).re

    def to_json(self) -> dict:
        return {"A": self.A.to_json(), "z": self.z.to_json(), "R": self.R.to_json()}


def to_dominant_form(cd: CharacteristicData) -> DominantForm:
    if not cd.z1.is_real() or _z1_gt_one(cd) is not Verdict.PASS:
        raise HypothesisViolation("z1 is not certified to be a real number > 1")
    for i in (1, 2):
        s = _modulus_vs_one(cd, i)
        if s is None or s > 0:
            raise HypothesisViolation(f"|z{i + 1}| <= 1 is not certified")
    if cd.A_zero[0]:
        raise HypothesisViolation("A1 = 0")
    A = cd.A[0].re
    R = RealBall(0, prec=cd.prec)
    for i in (1, 2):
        if not cd.A_zero[i]:
            R = R + abs(cd.A[i])
    return DominantForm(A, cd.z1, R.upper(), cd)
