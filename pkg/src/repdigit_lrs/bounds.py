"""Explicit constants for the linear-forms-in-logarithms argument and the index bound N_max.

Every implicit constant of the argument is replaced by a named, explicitly
computed upper ball; each one is recorded in a derivation trace.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import sympy

from .baseexp import BaseSpec
from .errors import HypothesisViolation, InvalidInput, PrecisionExhausted
from .exactnum import polys
from .exactnum.algebraic import AlgebraicNumber, height_of_minpoly, weil_height
from .exactnum.balls import MAX_PREC, ComplexBall, RealBall, ball_max
from .exactnum.quadfield import QuadFieldElem, embed
from .recurrence import CharacteristicData, DominantForm, to_dominant_form

BOUND_PREC = 256
MAX_FIXED_POINT_STEPS = 200
MATVEEV_FLOOR = Fraction(16, 100)


def _b(x, prec=BOUND_PREC) -> RealBall:
    return x if isinstance(x, RealBall) else RealBall(x, prec=prec)


def _log_plus_up(x: RealBall) -> RealBall:
    """Upper point ball for max(0, log x)."""
    if x.certainly_le(1):
        return RealBall(0, prec=x.prec)
    return ball_max(x.upper().log(), RealBall(0, prec=x.prec)).upper()


# -- Matveev ----------------------------------------------------------------

def h_prime(h, logx, D: int) -> RealBall:
    """max(D*h, |log x|, 0.16), as an upper point ball."""
    h, logx = _b(h), _b(logx)
    return ball_max(h * D, abs(logx), RealBall(MATVEEV_FLOOR, prec=h.prec)).upper()


@dataclass(frozen=True)
class MatveevInput:
    t: int
    D: int
    B: int
    hprimes: tuple

    def __post_init__(self):
        if self.t < 1 or self.D < 1 or self.B < 1:
            raise InvalidInput("need t, D, B >= 1")
        if len(self.hprimes) != self.t:
            raise InvalidInput("need one h' value per term")
        for hp in self.hprimes:
            if _b(hp).certainly_lt(MATVEEV_FLOOR):
                raise InvalidInput("every h' value must be at least 0.16")


def matveev_constant(t: int, D: int, prec: int = BOUND_PREC) -> RealBall:
    """3 * 30^(t+4) * (t+1)^5.5 * D^2 * (1 + log D)."""
    c = RealBall(3 * 30 ** (t + 4) * (t + 1) ** 5 * D * D, prec=prec)
    c = c * RealBall(t + 1, prec=prec).sqrt()
    return c * (1 + RealBall(D, prec=prec).log())


def matveev_lower(inp: MatveevInput, prec: int = BOUND_PREC) -> RealBall:
    """Certified lower bound for log|Lambda| (the lower endpoint of the enclosure)."""
    val = matveev_constant(inp.t, inp.D, prec) * (1 + RealBall(inp.t * inp.B, prec=prec).log())
    for hp in inp.hprimes:
        val = val * _b(hp, prec)
    return (-val).lower()


# -- trace ------------------------------------------------------------------

@dataclass
class TraceRecord:
    name: str
    formula: str
    inputs: dict
    value: object

    def to_json(self) -> dict:
        v = self.value
        if isinstance(v, RealBall):
            v = v.to_json()
        return {"name": self.name, "formula_id": self.formula,
                "inputs": {k: (x.to_json() if isinstance(x, RealBall) else x) for k, x in self.inputs.items()},
                "value": v}


class Trace(list):
    def add(self, name, formula, value, **inputs):
        self.append(TraceRecord(name, formula, inputs, value))
        return value


# -- magnitude lemma --------------------------------------------------------

@dataclass
class MagnitudeConstants:
    n0: int
    C0: RealBall

    def __iter__(self):
        return iter((self.n0, self.C0))


def magnitude_constants(df: DominantForm, base: BaseSpec, prec: int = BOUND_PREC,
                        trace: Trace | None = None) -> MagnitudeConstants:
    """n0 and C0 with |n log z - (2l+m) log beta| <= C0 for every solution with n >= n0."""
    if df.A.contains_zero():
        raise HypothesisViolation("dominant coefficient is not certified nonzero")
    zb = df.z.real_enclosure(prec)
    if not zb.certainly_gt(1):
        raise HypothesisViolation("dominant root is not certified > 1")
    A = abs(df.A_at(prec))
    R = df.R.with_prec(prec)
    logz = zb.log()
    if R.is_exact() and R.hi == 0:
        n0 = 0
    else:
        n0 = max(0, ((2 * R / A).log() / logz).ceil_hi())
    beta = base.ball(prec)
    N = base.alphabet_size
    upper_side = ((3 * A * beta) / 2).log()
    lower_side = (RealBall(N - 1, prec=prec) / (beta - 1)).log() - (A / 2).log()
    C0 = (ball_max(abs(upper_side), abs(lower_side)) + 1).upper()
    if trace is not None:
        trace.add("n0", "smallest n with |A| z^n >= 2R", n0, A=A, R=R, z=zb)
        trace.add("C0", "max(|log(3|A|beta/2)|, |log((|N|-1)/(beta-1)) - log(|A|/2)|) + 1", C0,
                  A=A, beta=beta, N=N)
    return MagnitudeConstants(n0, C0)


# -- heights of the fixed algebraic numbers --------------------------------

def _sym(x, s):
    if isinstance(x, QuadFieldElem):
        return (sympy.Integer(x.a) + sympy.Integer(x.b) * s) / x.den
    return sympy.Rational(Fraction(x).numerator, Fraction(x).denominator)


def scaled_binet_minpoly(cd: CharacteristicData, base: BaseSpec) -> list[int]:
    """Integer polynomial vanishing at (beta - 1) * A_1 (and at its conjugates)."""
    z, Y, s = sympy.symbols("z Y s")
    spec = cd.spec
    f = sum(_sym(c, s) * z ** k for k, c in enumerate(spec.charpoly))
    q = sum(_sym(c, s) * z ** k for k, c in enumerate(spec.binet_numerator()))
    expr = sympy.expand(Y * sympy.diff(f, z) - (_sym(base.beta, s) - 1) * q)
    R = sympy.resultant(sympy.expand(f), expr, z)
    if spec.field.d is not None or isinstance(base.beta, QuadFieldElem):
        d = spec.field.d if spec.field.d is not None else base.field.d
        R = sympy.resultant(sympy.expand(R), s ** 2 - d, s)
    P = sympy.Poly(sympy.expand(R), Y)
    return polys.primitive([Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
                            for c in reversed(P.all_coeffs())])


def scaled_binet(cd: CharacteristicData, base: BaseSpec) -> AlgebraicNumber:
    poly = scaled_binet_minpoly(cd, base)
    return AlgebraicNumber.from_enclosure(
        poly, lambda p: ComplexBall(base.ball(p) - 1, 0) * cd.A_at(0, p))


# -- effective constants ----------------------------------------------------

@dataclass
class EffectiveConstants:
    n0: int
    C0: RealBall
    C1: RealBall
    K1: RealBall
    C2: RealBall
    K2: RealBall
    C3: RealBall
    K3: RealBall
    rho: RealBall
    log_beta: RealBall
    log_z1: RealBall
    D: int
    certifying: bool
    A1_positive: bool
    trace: Trace = field(default_factory=Trace)

    def to_json(self) -> dict:
        out = {k: getattr(self, k) for k in ("n0", "C0", "C1", "K1", "C2", "K2", "C3", "K3", "rho", "D")}
        out = {k: (v.to_json() if isinstance(v, RealBall) else v) for k, v in out.items()}
        out["certifying"] = self.certifying
        return out

    def u(self, n: int) -> RealBall:
        """1 + log(3 rho n): bounds 1 + log(t B) for all three linear forms."""
        return 1 + (3 * self.rho * max(n, 1)).log()

    def L(self, n: int) -> RealBall:
        return ((_log_plus_up(self.C1) + self.K1 * self.u(n)) / self.log_beta).upper()

    def M(self, l, n: int) -> RealBall:
        return ((_log_plus_up(self.C2) + self.K2 * self.u(n) * l) / self.log_beta).upper()

    def phi(self, n: int) -> RealBall:
        L = self.L(n)
        M = self.M(L, n)
        return ((_log_plus_up(self.C3) + self.K3 * self.u(n) * (L + 2 * M)) / self.log_z1).upper()


def _delta(d1: int, d2: int, beta: RealBall) -> RealBall:
    """Upper bound for the |log(1 - (d1-d2)/(d1 beta^l))|-type correction, l >= 1."""
    if d1 == d2:
        return RealBall(0, prec=beta.prec)
    r = Fraction(abs(d1 - d2), d1)
    if d1 > d2:
        return -(1 - r / beta).log()
    return (1 + r / beta).log()


def lambda_constants(cd: CharacteristicData, base: BaseSpec, prec: int = BOUND_PREC,
                     certifying: bool = True) -> EffectiveConstants:
    df = to_dominant_form(cd)
    tr = Trace()
    n0, C0 = magnitude_constants(df, base, prec, tr)
    N = base.alphabet_size
    beta = base.ball(prec)
    log_beta = beta.log()
    z1 = cd.z1.real_enclosure(prec)
    log_z1 = z1.log()
    A1 = cd.A_at(0, prec).re
    R = df.R.with_prec(prec)
    Kdeg = cd.spec.field.degree
    if base.field.degree > Kdeg:
        Kdeg = base.field.degree
    D = tr.add("D", "[K:Q] * [K(z1):K]", Kdeg * cd.degree_over_K, K=str(cd.spec.field))
    Mc = tr.add("matveev", "3 * 30^7 * 4^5.5 * D^2 * (1 + log D)", matveev_constant(3, D, prec).upper(), D=D)
    h_beta = tr.add("h(beta)", "Weil height", weil_height(AlgebraicNumber.from_field_element(
        base.lift(base.beta))).with_prec(prec).upper(), beta=str(base.beta))
    h_z1 = tr.add("h(z1)", "Weil height", weil_height(cd.z1).with_prec(prec).upper(), z1=cd.z1.minpoly)
    hp_beta = tr.add("h'(beta)", "max(D h, |log|, 0.16)", h_prime(h_beta, log_beta, D))
    hp_z1 = tr.add("h'(z1)", "max(D h, |log|, 0.16)", h_prime(h_z1, log_z1, D))
    rho = tr.add("rho", "max(1, (log z1 + C0) / log beta)",
                 ball_max(RealBall(1, prec=prec), (log_z1 + C0) / log_beta).upper())

    positive = A1.is_positive()
    zero = RealBall(0, prec=prec)
    if not positive:
        # a(n) < 0 for n >= n0, so no solution exists beyond n0
        ec = EffectiveConstants(n0, C0, zero, zero, zero, zero, zero, zero, rho, log_beta, log_z1, D,
                                certifying, False, tr)
        tr.add("A1_sign", "A1 < 0: a(n) < 0 for n >= n0", "negative")
        return ec

    scaled = scaled_binet(cd, base)
    h_A = tr.add("h((beta-1)A1)", "Weil height via resultant minimal polynomial",
                 height_of_minpoly(scaled.minpoly).with_prec(prec).upper(), minpoly=list(scaled.minpoly))
    log_A = ((beta - 1) * A1).log()
    abs_log_A = abs(log_A).upper()
    log2 = RealBall(2, prec=prec).log()
    inv_beta = 1 / beta
    kappa = ball_max(h_beta * D, log_beta).upper()

    C1 = C2 = C3 = hp1 = kp2 = kp3 = zero
    for d1 in range(1, N):
        ld1 = RealBall(d1, prec=prec).log()
        x1_log = log_A - ld1
        hp1 = ball_max(hp1, h_prime(h_A + ld1, x1_log, D))
        C3 = ball_max(C3, ((beta - 1) * R + d1) / ((beta - 1) * A1))
        for d2 in range(N):
            diff = abs(d1 - d2)
            lp_diff = RealBall(diff, prec=prec).log() if diff > 1 else zero
            c1 = Fraction(diff, d1) * (1 + inv_beta) + ((beta - 1) * R / d1 + 1) * inv_beta ** 2
            c2 = (((beta - 1) * R + d1) * inv_beta ** 2 + diff * inv_beta) / (d1 * (1 - inv_beta))
            C1, C2 = ball_max(C1, c1), ball_max(C2, c2)
            delta = _delta(d1, d2, beta)
            eta2 = h_A + ld1 + lp_diff + log2
            eta3 = h_A + ld1 + 2 * lp_diff + 2 * log2
            lam = abs_log_A + ld1 + delta
            kp2 = ball_max(kp2, eta2 * D, lam, RealBall(MATVEEV_FLOOR, prec=prec))
            kp3 = ball_max(kp3, eta3 * D, lam, RealBall(MATVEEV_FLOOR, prec=prec))
    C1, C2, C3 = C1.upper(), C2.upper(), C3.upper()
    tr.add("C1", "max |d1-d2|/d1 (1 + 1/beta) + ((beta-1)R/d1 + 1)/beta^2", C1)
    tr.add("C2", "max (((beta-1)R + d1)/beta^2 + |d1-d2|/beta) / (d1 (1 - 1/beta))", C2)
    tr.add("C3", "((beta-1)R + max d1) / ((beta-1)A1)", C3)
    tr.add("h'(x1) first form", "max over d1 of h'((beta-1)A1/d1)", hp1.upper())
    tr.add("kappa", "max(D h(beta), log beta)", kappa)
    tr.add("kappa2'", "max(D(h((beta-1)A1) + log d1 + log+|d1-d2| + log 2), "
           "|log (beta-1)A1| + log d1 + delta, 0.16)", kp2.upper())
    tr.add("kappa3'", "max(D(h((beta-1)A1) + log d1 + 2 log+|d1-d2| + 2 log 2), "
           "|log (beta-1)A1| + log d1 + delta, 0.16)", kp3.upper())
    common = Mc * hp_z1 * hp_beta
    K1 = tr.add("K1", "matveev * h'(z1) h'(beta) h'(x1)", (common * hp1).upper())
    K2 = tr.add("K2", "matveev * h'(z1) h'(beta) (kappa + kappa2')", (common * (kappa + kp2)).upper())
    K3 = tr.add("K3", "matveev * h'(z1) h'(beta) (kappa + kappa3')", (common * (kappa + kp3)).upper())
    return EffectiveConstants(n0, C0, C1, K1, C2, K2, C3, K3, rho, log_beta, log_z1, D,
                              certifying, True, tr)


# -- residuals --------------------------------------------------------------

def _lambda_balls(sol, cd, base, prec):
    d1, d2, l, m, n = sol.d1, sol.d2, sol.l, sol.m, sol.n
    b = base.lift(base.beta)
    bl, bm = b ** l, b ** m
    X1 = d1 * bl * bl * bm
    X2 = (d1 * bl - d1 + d2) * bl * bm
    F = d1 * bl * bm - (d1 - d2) * bm + (d1 - d2)
    X3 = F * bl
    Y = (embed(b, prec) - 1) * cd.A_at(0, prec).re * cd.z1.real_enclosure(prec) ** n
    return (Y / embed(X1, prec) - 1, Y / embed(X2, prec) - 1, embed(X3, prec) / Y - 1)


def lambda_residuals(sol, cd: CharacteristicData, base: BaseSpec) -> tuple[RealBall, RealBall, RealBall]:
    """Enclosures of |Lambda_1|, |Lambda_2|, |Lambda_3| for a solution tuple."""
    bits = int(sol.n * math.log2(max(float(cd.z1.isolator.re.mid), 2.0))
               + (2 * sol.l + sol.m) * math.log2(max(float(base.ball(64).mid), 2.0)))
    p = max(BOUND_PREC, 2 * bits + 128)
    while p <= 4 * MAX_PREC + 4 * bits:
        lams = [abs(x) for x in _lambda_balls(sol, cd, base, p)]
        if all(x.is_positive() and x.certainly_lt(x.lo * 2) for x in lams):
            return tuple(lams)
        p *= 2
    raise PrecisionExhausted("residuals did not resolve")


# -- nonvanishing -----------------------------------------------------------

class Nonvanishing(enum.Enum):
    ALL_N = "AllN"
    AT_MOST_ONE_N = "AtMostOneN"


def vanishing_index_bound(cd: CharacteristicData, prec: int = BOUND_PREC) -> int:
    """Largest n with |A_1| z_1^n <= max_j |A_j| (j = 2, 3); -1 if none."""
    others = [abs(cd.A_at(j, prec)) for j in (1, 2) if not cd.A_zero[j]]
    if not others:
        return -1
    A1 = abs(cd.A_at(0, prec).re)
    top = ball_max(*others).upper()
    if top.certainly_lt(A1):
        return -1
    return (((top / A1).log()) / cd.z1.real_enclosure(prec).log()).floor_hi()


def nonvanishing_certificate(cd: CharacteristicData, K=None) -> Nonvanishing:
    """AllN if no linear form can vanish for any n >= 1.

    A vanishing form forces (beta - 1) A_1 z_1^n into K; as A_1 lies in K(z_1),
    applying a K-embedding that moves z_1 gives A_1 z_1^n = A_j z_j^n.  That is
    impossible once |A_1| z_1^n > max |A_j|, and for the finitely many smaller n
    it is excluded by separating the two sides numerically.
    """
    if not cd.binet_over_K or cd.A_zero[0]:
        return Nonvanishing.AT_MOST_ONE_N
    top = vanishing_index_bound(cd)
    for n in range(1, top + 1):
        p = BOUND_PREC
        while p <= MAX_PREC:
            lhs = cd.A_at(0, p) * cd.root_box(0, p) ** n
            seps = [not lhs.overlaps(cd.A_at(j, p) * cd.root_box(j, p) ** n) for j in (1, 2)]
            if all(seps):
                break
            p *= 2
        else:
            return Nonvanishing.AT_MOST_ONE_N
    return Nonvanishing.ALL_N


# -- the bound chain --------------------------------------------------------

@dataclass
class BoundResult:
    N_max: int
    effective: bool
    nonvanishing: Nonvanishing
    iterates: list[int]
    constants: EffectiveConstants
    trace: Trace

    @property
    def steps(self) -> int:
        return len(self.iterates) - 1

    def to_json(self, with_trace: bool = True) -> dict:
        out = {"N_max": str(self.N_max), "N_max_log10": round(math.log10(max(self.N_max, 1)), 3),
               "effective": self.effective, "nonvanishing": self.nonvanishing.value,
               "fixed_point_steps": self.steps, "iterates": [str(x) for x in self.iterates],
               "constants": self.constants.to_json()}
        if with_trace:
            out["trace"] = [r.to_json() for r in self.trace]
        return out


def fixed_point(phi: Callable[[int], RealBall], start: int = 16,
                max_steps: int = MAX_FIXED_POINT_STEPS) -> list[int]:
    """Iterate N <- ceil(phi(N)) until it stops increasing; returns all iterates.

    The last iterate N satisfies phi(N) <= N.
    """
    its = [start]
    N = start
    for _ in range(max_steps):
        nxt = phi(N).ceil_hi()
        if nxt <= N:
            return its
        N = nxt
        its.append(N)
    raise PrecisionExhausted(f"fixed-point iteration did not settle in {max_steps} steps")


def solve_bound_chain(ec: EffectiveConstants, cd: CharacteristicData | None = None,
                      base: BaseSpec | None = None, nonvanishing: Nonvanishing | None = None) -> BoundResult:
    if nonvanishing is None:
        nonvanishing = nonvanishing_certificate(cd) if cd is not None else Nonvanishing.AT_MOST_ONE_N
    tr = ec.trace
    if not ec.A1_positive:
        its = [ec.n0]
        N_max = ec.n0
    else:
        # phi(n)/n decreases once 1 + log(3 rho n) >= 3, so the first settled
        # iterate past that point bounds every solution
        floor_n = max(16, math.ceil(math.e ** 2 / (3 * float(ec.rho.lo))) + 1)
        its = fixed_point(ec.phi, floor_n)
        N_max = max(its[-1], ec.n0)
        if ec.phi(N_max).certainly_gt(N_max):
            raise PrecisionExhausted("fixed point failed verification")
        tr.add("phi", "(log+ C3 + K3 u (L + 2M)) / log z1, u = 1 + log(3 rho n)",
               f"{len(its) - 1} steps", start=floor_n)
    tr.add("N_max", "max(fixed point, n0)", str(N_max))
    effective = ec.certifying and nonvanishing is Nonvanishing.ALL_N
    return BoundResult(N_max, effective, nonvanishing, its, ec, tr)


def bound(cd: CharacteristicData, base: BaseSpec, prec: int = BOUND_PREC) -> BoundResult:
    """Full chain: constants, nonvanishing certificate and fixed point."""
    nv = nonvanishing_certificate(cd)
    ec = lambda_constants(cd, base, prec, certifying=cd.binet_over_K)
    return solve_bound_chain(ec, cd, base, nv)
