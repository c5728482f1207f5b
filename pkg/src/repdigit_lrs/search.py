"""Exact enumeration of recurrence terms of the form d1^l d2^m d1^l in base beta."""
from __future__ import annotations

import csv
import io
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import gmpy2

from .baseexp import BaseSpec, DigitString, PalindromicPattern, value_to_json
from .bounds import BoundResult, MagnitudeConstants, bound, magnitude_constants
from .errors import HypothesisViolation, InvalidInput, ToolkitError
from .exactnum.balls import DEFAULT_PREC, RealBall
from .exactnum.quadfield import QuadFieldElem, embed, exact_sign
from .recurrence import (
    CharacteristicData,
    RecurrenceSpec,
    characteristic_data,
    check_hypotheses,
    term,
    terms,
    to_dominant_form,
)


@dataclass(frozen=True, order=True)
class Solution:
    n: int
    l: int
    m: int
    d1: int
    d2: int
    value: object = field(compare=False)
    digits: str | None = field(default=None, compare=False)

    @property
    def pattern(self) -> PalindromicPattern:
        return PalindromicPattern(self.d1, self.d2, self.l, self.m)

    def to_json(self) -> dict:
        out = {"n": self.n, "l": self.l, "m": self.m, "d1": self.d1, "d2": self.d2,
               "value": value_to_json(self.value)}
        if self.digits is not None:
            out["digits"] = self.digits
        return out


# -- window -----------------------------------------------------------------

def value_window(value, base: BaseSpec, prec: int = DEFAULT_PREC) -> tuple[int, int]:
    """Lengths s for which some pattern of length s can equal ``value``.

    A pattern of length s lies strictly between beta^(s-1) and
    beta^s (|N|-1)/(beta-1).
    """
    if exact_sign(value) <= 0:
        return (3, 2)
    a = embed(value, prec)
    beta = base.ball(prec)
    lb = beta.log()
    hi = (a.log() / lb).floor_hi() + 1
    lo = ((a * (beta - 1) / (base.alphabet_size - 1)).log() / lb).floor_lo() + 1
    return (max(lo, 3), hi)


def window(n: int, cd: CharacteristicData | None, base: BaseSpec,
           mag: MagnitudeConstants | None = None, value=None,
           prec: int = DEFAULT_PREC) -> tuple[int, int]:
    """Integer interval [lo, hi] of candidate lengths s = 2l + m (empty when lo > hi)."""
    if value is None:
        if cd is None:
            raise InvalidInput("need either the term value or characteristic data")
        value = term(cd.spec, n)
    lo, hi = value_window(value, base, prec)
    if mag is not None and cd is not None and n >= mag.n0:
        lb = base.ball(prec).log()
        x = cd.z1.real_enclosure(prec).log() * n
        lo = max(lo, ((x - mag.C0) / lb).ceil_lo())
        hi = min(hi, ((x + mag.C0) / lb).floor_hi())
    return (lo, hi)


# -- scanning ---------------------------------------------------------------

def _runs_match(text: str, distinct: bool):
    """match_pattern on a rendered digit string, without building tuples."""
    runs = [(ch, len(list(g))) for ch, g in itertools.groupby(text)]
    n = len(text)
    if len(runs) == 1:
        if distinct or n < 3:
            return []
        return [(runs[0][0], runs[0][0], l, n - 2 * l) for l in range(1, (n - 1) // 2 + 1)]
    if len(runs) == 3 and runs[0][0] == runs[2][0] and runs[0][1] == runs[2][1]:
        return [(runs[0][0], runs[1][0], runs[0][1], runs[1][1])]
    return []


def _scan_integer(spec, base, lo, hi, distinct):
    b = int(base.beta)
    out = []
    for n, v in zip(range(lo, hi + 1), terms(spec, lo)):
        if isinstance(v, QuadFieldElem):
            if v.b != 0 or v.den != 1:
                continue
            v = v.a
        if v <= 0 or v % b == 0:
            continue
        text = gmpy2.digits(v, b)
        for c1, c2, l, m in _runs_match(text, distinct):
            d1, d2 = int(c1, 36), int(c2, 36)
            s = DigitString((d1,) * l + (d2,) * m + (d1,) * l)
            out.append(Solution(n, l, m, d1, d2, v, s.render(b)))
    return out


def _scan_generic(spec, base, lo, hi, distinct, cd, mag):
    """Solve the closed form for d1 - d2 at every (s, l, d1): exact arithmetic in K."""
    N = base.alphabet_size
    beta = base.lift(base.beta)
    pw = {0: base.lift(1)}

    def power(k):
        if k not in pw:
            top = max(pw)
            acc = pw[top]
            for j in range(top + 1, k + 1):
                acc = acc * beta
                pw[j] = acc
        return pw[k]

    out = []
    for n, v in zip(range(lo, hi + 1), terms(spec, lo)):
        s_lo, s_hi = window(n, cd, base, mag, value=v)
        if s_lo > s_hi:
            continue
        lhs = (beta - 1) * v
        for s in range(s_lo, s_hi + 1):
            bs1 = power(s) - 1
            for l in range(1, (s - 1) // 2 + 1):
                m = s - 2 * l
                den = power(l) * (1 - power(m))
                for d1 in range(1, N):
                    num = lhs - d1 * bs1
                    if isinstance(num, int) and isinstance(den, int):
                        k, r = divmod(num, den)
                        if r:
                            continue
                    else:
                        k = num / den
                        if k.b != 0 or k.den != 1:
                            continue
                        k = k.a
                    d2 = d1 - int(k)
                    if not 0 <= d2 < N or (distinct and d2 == d1):
                        continue
                    digits = None
                    if base.is_integer_base and N <= 36:
                        digits = PalindromicPattern(d1, d2, l, m).render().render(N)
                    value = v.a if isinstance(v, QuadFieldElem) and base.field.d is None else v
                    out.append(Solution(n, l, m, d1, d2, value, digits))
    return out


_WORKER_CACHE: dict = {}


def _worker(args):
    spec_json, base_json, lo, hi, distinct, method = args
    key = (repr(spec_json), repr(base_json))
    if key not in _WORKER_CACHE:
        spec = RecurrenceSpec.from_json(spec_json)
        base = BaseSpec.from_json(base_json)
        cd, mag = _window_data(spec, base) if method == "generic" else (None, None)
        _WORKER_CACHE[key] = (spec, base, cd, mag)
    spec, base, cd, mag = _WORKER_CACHE[key]
    return _scan(spec, base, lo, hi, distinct, method, cd, mag)


def _scan(spec, base, lo, hi, distinct, method, cd, mag):
    if method == "integer":
        return _scan_integer(spec, base, lo, hi, distinct)
    return _scan_generic(spec, base, lo, hi, distinct, cd, mag)


def _window_data(spec, base):
    """Characteristic data and magnitude constants, when the dominant-root hypotheses hold."""
    try:
        cd = characteristic_data(spec)
    except ToolkitError:
        return None, None
    try:
        mag = magnitude_constants(to_dominant_form(cd), base)
    except (HypothesisViolation, ToolkitError):
        mag = None
    return cd, mag


# -- reports ----------------------------------------------------------------

@dataclass
class SearchReport:
    spec: RecurrenceSpec
    base: BaseSpec
    n_range: tuple[int, int]
    distinct: bool
    method: str
    solutions: list[Solution]
    status: dict
    elapsed: float = 0.0
    precision: int = DEFAULT_PREC
    hypotheses: dict | None = None
    bound: BoundResult | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def values(self) -> set:
        return {s.value for s in self.solutions}

    def to_json(self, with_trace: bool = False) -> dict:
        out = {
            "spec": self.spec.to_json(),
            "base": self.base.to_json(),
            "n_range": list(self.n_range),
            "distinct": self.distinct,
            "method": self.method,
            "precision": self.precision,
            "status": self.status,
            "solutions": [s.to_json() for s in self.solutions],
            "values": sorted({str(value_to_json(s.value)) for s in self.solutions}, key=lambda t: (len(t), t)),
        }
        if self.hypotheses is not None:
            out["hypotheses"] = self.hypotheses
        if self.bound is not None:
            out["bound"] = self.bound.to_json(with_trace)
        if self.warnings:
            out["warnings"] = self.warnings
        out["elapsed_seconds"] = round(self.elapsed, 3)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "l", "m", "d1", "d2", "value"])
        for s in self.solutions:
            w.writerow([s.n, s.l, s.m, s.d1, s.d2, value_to_json(s.value)])
        return buf.getvalue()


def _chunks(lo: int, hi: int, k: int):
    size = max(1, -(-(hi - lo + 1) // k))
    a = lo
    while a <= hi:
        yield a, min(hi, a + size - 1)
        a += size


def choose_method(spec: RecurrenceSpec, base: BaseSpec) -> str:
    if base.field.d is None and base.alphabet_size <= 36:
        return "integer"
    return "generic"


def enumerate_solutions(spec: RecurrenceSpec, base: BaseSpec, n_range: tuple[int, int],
                        distinct: bool = False, jobs: int = 1, method: str = "auto",
                        prec: int = DEFAULT_PREC) -> SearchReport:
    """All solutions with n in the closed range ``n_range``."""
    lo, hi = n_range
    if lo < 0 or hi < lo - 1:
        raise InvalidInput(f"bad index range {n_range}")
    if spec.field.d is not None and base.field.d is not None and spec.field != base.field:
        raise InvalidInput("recurrence and base live in different quadratic fields")
    if method == "auto":
        method = choose_method(spec, base)
    if method not in ("integer", "generic"):
        raise InvalidInput(f"unknown method {method!r}")
    if method == "integer" and (base.field.d is not None or base.alphabet_size > 36):
        raise InvalidInput("the integer path needs a rational base of at most 36")
    t0 = time.perf_counter()
    warnings = []
    cd, mag = _window_data(spec, base) if method == "generic" else (None, None)
    if method == "generic" and mag is None:
        warnings.append("dominant-root hypotheses not certified: windows use value bounds only")
    if jobs > 1 and hi - lo > 64:
        args = [(spec.to_json(), base.to_json(), a, b, distinct, method) for a, b in _chunks(lo, hi, 4 * jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            sols = [s for part in pool.map(_worker, args) for s in part]
    else:
        sols = _scan(spec, base, lo, hi, distinct, method, cd, mag)
    sols.sort()
    status = {"kind": "PartialUpTo", "n": hi}
    return SearchReport(spec, base, (lo, hi), distinct, method, sols, status,
                        time.perf_counter() - t0, prec, warnings=warnings)


def certify(spec: RecurrenceSpec, base: BaseSpec, K=None, cap: int = 10 ** 4,
            distinct: bool = False, jobs: int = 1, prec: int = 256) -> SearchReport:
    """Hypotheses, constants, nonvanishing, N_max, then enumeration up to min(N_max, cap)."""
    if cap < 0:
        raise InvalidInput("cap must be nonnegative")
    t0 = time.perf_counter()
    if K is None:
        K = base.field if base.field.degree > spec.field.degree else spec.field
    try:
        cd = characteristic_data(spec)
        hyp = check_hypotheses(spec, K, cd)
    except ToolkitError as exc:
        status = {"kind": "Failed", "reason": f"{type(exc).__name__}: {exc}"}
        return SearchReport(spec, base, (0, -1), distinct, "none", [], status, time.perf_counter() - t0, prec)
    if not hyp.theorem_applies():
        bad = hyp.failures() + hyp.undetermined()
        status = {"kind": "Failed", "reason": "hypotheses not certified", "hypotheses": bad}
        return SearchReport(spec, base, (0, -1), distinct, "none", [], status,
                            time.perf_counter() - t0, prec, hyp.to_json())
    try:
        br = bound(cd, base, prec)
    except ToolkitError as exc:
        status = {"kind": "Failed", "reason": f"{type(exc).__name__}: {exc}"}
        return SearchReport(spec, base, (0, -1), distinct, "none", [], status,
                            time.perf_counter() - t0, prec, hyp.to_json())
    top = min(br.N_max, cap)
    rep = enumerate_solutions(spec, base, (0, top), distinct, jobs, prec=prec)
    if br.effective and br.N_max <= cap:
        rep.status = {"kind": "Complete", "N_max": str(br.N_max)}
    else:
        rep.status = {"kind": "PartialUpTo", "n": top, "N_max": str(br.N_max), "effective": br.effective}
    rep.hypotheses = hyp.to_json()
    rep.bound = br
    rep.elapsed = time.perf_counter() - t0
    return rep
