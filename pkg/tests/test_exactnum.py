from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bisect_root, mp_height, rational_height
from repdigit_lrs.errors import DomainError
from repdigit_lrs.exactnum import (
    QQ,
    AlgebraicNumber,
    ComplexBall,
    Field,
    Membership,
    QuadFieldElem,
    RealBall,
    as_field_element,
    ball_log,
    exact_quotient,
    in_field,
    isolate_roots,
    member_of_K,
    norm_in_K,
    refine,
    weil_height,
)

K2 = Field(2)
TOL = mpmath.mpf("1e-10")


def near(ball, value, slack=TOL):
    return ball.lo - slack <= value <= ball.hi + slack


# -- balls --------------------------------------------------------------------

def test_ball_log_encloses_true_value():
    for x in (Fraction(2), Fraction(10), Fraction(1, 3), Fraction(22, 7)):
        b = ball_log(RealBall(x, prec=200))
        with mpmath.workdps(80):
            true = mpmath.log(mpmath.mpf(x.numerator) / x.denominator)
        assert b.lo <= true <= b.hi
        assert b.width() < mpmath.mpf(2) ** -190


def test_ball_log_trivial_points():
    zero = ball_log(RealBall(1))
    assert zero.contains(0) and zero.width() <= 1e-30
    with mpmath.workdps(60):
        e = RealBall.from_mid_rad(+mpmath.e, mpmath.mpf(2) ** -150, prec=200)
    assert ball_log(e).contains(1)
    with mpmath.workdps(60):
        assert ball_log(RealBall(10, prec=200)).contains(mpmath.log(10))


def test_refine_rational_root_is_exact():
    five = AlgebraicNumber.roots_of([-5, 1])[0]
    r = refine(five, Fraction(1, 10 ** 30))
    assert r.isolator.re.is_exact() and r.isolator.re.contains(5)


def test_ball_log_rejects_nonpositive():
    with pytest.raises(DomainError):
        ball_log(RealBall(-1, 1))


def test_outward_rounding_keeps_third():
    third = RealBall(1, prec=64) / 3
    assert third.lo_fraction() <= Fraction(1, 3) <= third.hi_fraction()
    assert not third.is_exact()


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=-100, max_value=100, max_denominator=1000),
       st.fractions(min_value=-100, max_value=100, max_denominator=1000),
       st.sampled_from(["+", "-", "*", "/"]))
def test_arithmetic_contains_exact_result(x, y, op):
    bx, by = RealBall(x, prec=53), RealBall(y, prec=53)
    if op == "/" and y == 0:
        return
    exact = {"+": x + y, "-": x - y, "*": x * y, "/": x / y if y else None}[op]
    res = {"+": bx + by, "-": bx - by, "*": bx * by, "/": bx / by if y else None}[op]
    assert res.lo_fraction() <= exact <= res.hi_fraction()


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=Fraction(1, 100), max_value=1000, max_denominator=100))
def test_log_exp_roundtrip_contains(x):
    b = RealBall(x, prec=128)
    back = b.log().exp()
    assert back.lo_fraction() <= x <= back.hi_fraction()


def test_complex_ball_power_contains_i_cycle():
    i = ComplexBall(0, 1)
    z = i ** 4
    assert z.re.contains(1) and z.im.contains(0)


# -- root isolation -----------------------------------------------------------

@pytest.mark.parametrize("coeffs, lo, hi", [
    ([-1, -1, 0, 1], Fraction(1), Fraction(2)),      # plastic ratio
    ([-1, -1, -1, 1], Fraction(1), Fraction(2)),     # tribonacci constant
    ([-2, 0, 1], Fraction(1), Fraction(2)),
])
def test_refine_matches_bisection(coeffs, lo, hi):
    root = next(r for r in AlgebraicNumber.roots_of(coeffs) if r.is_real() and r.isolator.re.lo > 1)
    fine = refine(root, Fraction(1, 2 ** 100))
    a, b = bisect_root(coeffs, lo, hi, Fraction(1, 2 ** 110))
    box = fine.isolator.re
    assert box.lo_fraction() <= b and a <= box.hi_fraction()
    assert box.width() <= mpmath.mpf(2) ** -99


def test_isolated_boxes_are_disjoint_and_complete():
    boxes = isolate_roots([1, 0, 0, 0, 0, 1])   # x^5 + 1
    assert len(boxes) == 5
    for i in range(5):
        for j in range(i + 1, 5):
            assert not boxes[i].overlaps(boxes[j])
    assert sum(b.is_real() for b in boxes) == 1


def test_refine_only_shrinks():
    r = AlgebraicNumber.roots_of([-1, -1, 0, 1])[0]
    r2 = r.refine(Fraction(1, 2 ** 60))
    assert r.isolator.re.lo <= r2.isolator.re.lo and r2.isolator.re.hi <= r.isolator.re.hi


# -- heights ------------------------------------------------------------------

@pytest.mark.parametrize("minpoly", [
    [-2, 0, 1], [-1, -1, 1], [-1, -1, 0, 1], [-1, -1, -1, 1], [3, -5, 2, 7], [-5, 0, 0, 2],
])
def test_height_matches_mpmath_oracle(minpoly):
    h = weil_height(AlgebraicNumber.roots_of(minpoly)[0])
    assert near(h, mp_height(minpoly))


def test_height_examples():
    with mpmath.workdps(40):
        assert near(weil_height(QuadFieldElem(0, 1, 1, 2)), mpmath.log(2) / 2)
        assert near(weil_height(Fraction(2, 3)), mpmath.log(3))
        phi = (1 + mpmath.sqrt(5)) / 2
        assert near(weil_height(QuadFieldElem(1, 1, 2, 5)), mpmath.log(phi) / 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(-50, 50), st.integers(1, 50))
def test_rational_height(p, q):
    if p == 0:
        return
    assert near(weil_height(Fraction(p, q)), rational_height(p, q))


quad = st.builds(lambda a, b: QuadFieldElem(a, b, 1, 2),
                 st.integers(-9, 9), st.integers(-9, 9)).filter(lambda x: x != 0)


@settings(max_examples=40, deadline=None)
@given(quad, st.integers(-4, 4))
def test_height_power_law(x, s):
    h = weil_height(x)
    hs = weil_height(x ** s)
    target = h * abs(s)
    assert hs.lo - TOL <= target.hi and target.lo <= hs.hi + TOL


@settings(max_examples=40, deadline=None)
@given(quad, quad)
def test_height_product_subadditive(x, y):
    assert weil_height(x * y).lo <= (weil_height(x) + weil_height(y)).hi + TOL


@settings(max_examples=40, deadline=None)
@given(quad)
def test_height_inverse_invariant(x):
    assert near(weil_height(1 / x), weil_height(x).mid)


# -- quadratic fields ---------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30),
       st.sampled_from([2, 3, 5, -1, -7]))
def test_norm_multiplicative(a, b, c, e, d):
    x, y = QuadFieldElem(a, b, 1, d), QuadFieldElem(c, e, 1, d)
    assert norm_in_K(x * y) == norm_in_K(x) * norm_in_K(y)


def test_exact_quotient():
    sqrt2 = QuadFieldElem(0, 1, 1, 2)
    assert exact_quotient(QuadFieldElem(2, 0, 1, 2), sqrt2) == sqrt2
    assert exact_quotient(QuadFieldElem(1, 0, 1, 2), sqrt2) is None
    assert exact_quotient(12, 4) == 3
    assert exact_quotient(13, 4) is None


# -- membership ---------------------------------------------------------------

def test_member_of_K_cubic_never_in_quadratic():
    plastic = AlgebraicNumber.roots_of([-1, -1, 0, 1])[0]
    assert member_of_K(plastic, QQ) is Membership.NO
    assert member_of_K(plastic, K2) is Membership.NO
    assert not in_field(plastic, K2)


def test_member_of_K_quadratic():
    r = AlgebraicNumber.roots_of([-2, 0, 1])
    assert member_of_K(r[0], QQ) is Membership.NO
    assert member_of_K(r[0], K2) is Membership.UNDETERMINED
    assert in_field(r[0], K2) and not in_field(r[0], Field(3))
    vals = {as_field_element(x, K2) for x in r}
    assert vals == {QuadFieldElem(0, 1, 1, 2), QuadFieldElem(0, -1, 1, 2)}


def test_arithmetic_of_algebraic_numbers():
    s2 = AlgebraicNumber.roots_of([-2, 0, 1])[-1]
    sq = s2 * s2
    assert sq.is_rational() and sq.as_fraction() == 2
    s = s2 + 1
    assert s.minpoly == (-1, -2, 1)
