import json

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import sequence, vandermonde_binet
from repdigit_lrs.errors import HypothesisViolation, InvalidInput, RepeatedRoots
from repdigit_lrs.exactnum import ComplexBall, Field, QuadFieldElem, RealBall, embed
from repdigit_lrs.recurrence import (
    RecurrenceSpec,
    Verdict,
    characteristic_data,
    check_hypotheses,
    companion_power_term,
    load_presets,
    preset,
    term,
    terms,
    to_dominant_form,
)

PRESETS = sorted(load_presets())


def spec_disc(a, b, c):
    p, q, r = -a, -b, -c
    return p * p * q * q - 4 * q ** 3 - 4 * p ** 3 * r - 27 * r * r + 18 * p * q * r


def test_presets_load():
    assert set(PRESETS) == {"padovan", "narayana", "tribonacci", "tribonacci-lucas"}


@pytest.mark.parametrize("name", PRESETS)
def test_terms_match_plain_iteration(name):
    s = preset(name)
    ref = sequence(s.coeffs, s.initials, 300)
    got = [x for _, x in zip(range(300), terms(s))]
    assert got == ref
    assert [term(s, n) for n in (0, 1, 2, 57, 299)] == [ref[n] for n in (0, 1, 2, 57, 299)]


def test_known_terms():
    pad = preset("padovan")
    assert [term(pad, n) for n in range(10)] == [1, 1, 1, 2, 2, 3, 4, 5, 7, 9]
    assert term(pad, 19) == 151 and term(pad, 24) == 616
    assert term(preset("tribonacci"), 10) == 149
    assert [term(preset("narayana"), n) for n in range(8)] == [0, 1, 1, 1, 2, 3, 4, 6]


@settings(max_examples=100, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5).filter(bool),
       st.tuples(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9)),
       st.integers(0, 400))
def test_companion_power_equals_iteration(a, b, c, ini, n):
    assume(spec_disc(a, b, c) != 0)
    s = RecurrenceSpec((a, b, c), ini)
    assert companion_power_term(s, n) == sequence((a, b, c), ini, n + 1)[n]


def test_companion_power_quadratic_field():
    K = Field(2)
    s = RecurrenceSpec((K(1), K(1), K(0, 1)), (K(0), K(1), K(1)), K)
    assert all(companion_power_term(s, n) == term(s, n) for n in range(0, 60, 7))


def test_repeated_roots_rejected():
    with pytest.raises(RepeatedRoots):
        RecurrenceSpec((3, -3, 1), (1, 2, 3))      # (X-1)^3


def test_non_integral_rejected():
    K = Field(5)
    with pytest.raises(InvalidInput):
        RecurrenceSpec((K(1, 1, 3), 1, 1), (0, 1, 1), K)


def test_spec_json_round_trip():
    s = preset("tribonacci-lucas")
    again = RecurrenceSpec.from_json(json.loads(json.dumps(s.to_json())), s.name)
    assert again == s


# -- roots and Binet coefficients ----------------------------------------------

@pytest.mark.parametrize("name", PRESETS)
def test_binet_matches_vandermonde_oracle(name):
    s = preset(name)
    cd = characteristic_data(s, 200)
    roots, A = vandermonde_binet(s.coeffs, s.initials)
    z1 = max(roots, key=lambda r: abs(r))
    with mpmath.workdps(40):
        assert abs(float(cd.z1.isolator.re.mid) - float(mpmath.re(z1))) < 1e-25
        k = min(range(3), key=lambda i: abs(roots[i] - z1))
        assert abs(cd.A[0].re.mid - mpmath.re(A[k])) < mpmath.mpf("1e-30")


@pytest.mark.parametrize("name", PRESETS)
def test_binet_contains_terms(name):
    s = preset(name)
    cd = characteristic_data(s, 256)
    for n in range(51):
        assert cd.binet(n).contains(ComplexBall(RealBall(term(s, n)), 0))


@settings(max_examples=25, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4).filter(bool),
       st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)))
def test_binet_contains_terms_random(a, b, c, ini):
    assume(spec_disc(a, b, c) != 0)
    s = RecurrenceSpec((a, b, c), ini)
    cd = characteristic_data(s, 256)
    for n in (0, 5, 17, 30):
        assert cd.binet(n, 512).contains(ComplexBall(RealBall(term(s, n)), 0))


def test_roots_sorted_by_modulus():
    cd = characteristic_data(preset("tribonacci"))
    mods = [abs(cd.root_box(i, 128)) for i in range(3)]
    assert mods[0].certainly_gt(mods[1]) and not mods[1].certainly_lt(mods[2])


# -- hypotheses -----------------------------------------------------------------

@pytest.mark.parametrize("name", PRESETS)
def test_presets_satisfy_hypotheses(name):
    rep = check_hypotheses(preset(name))
    assert rep.all_pass() and rep.theorem_applies()


def test_rational_dominant_root_fails_field_test():
    rep = check_hypotheses(RecurrenceSpec((6, -11, 6), (1, 2, 3)))
    assert rep.verdicts["z1_not_in_K"] is Verdict.FAIL
    assert rep.verdicts["z2_modulus_le_1"] is Verdict.FAIL


def test_unit_modulus_roots_are_decided_exactly():
    # (X - 2)(X^2 + 1): z2, z3 = +-i lie exactly on the unit circle
    rep = check_hypotheses(RecurrenceSpec((2, -1, 2), (1, 2, 3)))
    assert rep.verdicts["z2_modulus_le_1"] is Verdict.PASS
    assert rep.verdicts["z3_modulus_le_1"] is Verdict.PASS
    # (X - 3)(X - 1)(X + 1): real roots of modulus exactly one
    rep = check_hypotheses(RecurrenceSpec((3, 1, -3), (1, 2, 3)))
    assert rep.verdicts["z2_modulus_le_1"] is Verdict.PASS


def test_zero_dominant_coefficient_detected():
    # (X^2 - X - 1)(X - 1) with a constant sequence: A_1 = 0 exactly
    s = RecurrenceSpec((2, 0, -1), (1, 1, 1))
    rep = check_hypotheses(s)
    assert rep.verdicts["A1_nonzero"] is Verdict.FAIL
    assert rep.verdicts["z1_not_in_K"] is Verdict.PASS
    with pytest.raises(HypothesisViolation):
        to_dominant_form(characteristic_data(s))


def test_quadratic_field_spec():
    K = Field(2)
    s = RecurrenceSpec((K(1), K(1), K(0, 1)), (K(0), K(1), K(1)), K)
    cd = characteristic_data(s)
    assert cd.degree_over_K == 3
    assert check_hypotheses(s, K, cd).all_pass()


# -- dominant form ----------------------------------------------------------------

@pytest.mark.parametrize("name", PRESETS)
def test_error_term_bounded(name):
    s = preset(name)
    cd = characteristic_data(s, 256)
    df = to_dominant_form(cd)
    for n in range(0, 400, 3):
        err = abs(RealBall(term(s, n), prec=1024) - df.A_at(1024) * cd.z1.real_enclosure(1024) ** n)
        assert err.lo <= df.R.hi


def test_dominant_form_values():
    df = to_dominant_form(characteristic_data(preset("padovan")))
    assert abs(float(df.A.mid) - 0.7221244183) < 1e-9
    assert abs(float(df.R.hi) - 0.4907497221) < 1e-9 and df.R.hi < 1.3
    df = to_dominant_form(characteristic_data(preset("tribonacci-lucas")))
    assert abs(float(df.A.mid) - 1) < 1e-20


def test_quadratic_term_embedding():
    K = Field(2)
    s = RecurrenceSpec((K(1), K(1), K(0, 1)), (K(0), K(1), K(1)), K)
    x = term(s, 12)
    assert isinstance(x, QuadFieldElem) and x.is_integral()
    cd = characteristic_data(s, 256)
    assert cd.binet(12).re.overlaps(embed(x, 256))


def test_factorable_cubic_roots():
    cd = characteristic_data(RecurrenceSpec((6, -11, 6), (1, 2, 3)))
    assert [z.as_fraction() for z in cd.z] == [3, 2, 1]


def test_tribonacci_subdominant_modulus():
    cd = characteristic_data(preset("tribonacci"), 200)
    with mpmath.workdps(40):
        z1 = mpmath.findroot(lambda x: x ** 3 - x ** 2 - x - 1, 1.8)
        expected = mpmath.sqrt(1 / z1)
        for i in (1, 2):
            m = abs(cd.root_box(i, 200))
            assert m.lo - mpmath.mpf("1e-30") <= expected <= m.hi + mpmath.mpf("1e-30")
    assert abs(float(abs(cd.root_box(1, 200)).mid) - 0.73735) < 1e-5


def test_membership_never_passes_when_degree_divides():
    # z1 = golden ratio has degree 2, which divides [K:Q] = 2
    s = RecurrenceSpec((2, 0, -1), (1, 2, 4))
    assert check_hypotheses(s, Field(5)).verdicts["z1_not_in_K"] is Verdict.FAIL
    assert check_hypotheses(s, Field(2)).verdicts["z1_not_in_K"] is Verdict.UNDETERMINED
    assert check_hypotheses(s, Field(2)).verdicts["z1_not_in_K"] is not Verdict.PASS
