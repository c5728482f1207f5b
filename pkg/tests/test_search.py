import json

import pytest

from oracles import naive_solutions, sequence
from repdigit_lrs.baseexp import BaseSpec, PalindromicPattern, evaluate, pattern_value
from repdigit_lrs.bounds import magnitude_constants
from repdigit_lrs.errors import InvalidInput
from repdigit_lrs.exactnum import Field
from repdigit_lrs.recurrence import RecurrenceSpec, characteristic_data, load_presets, preset, term, to_dominant_form
from repdigit_lrs.search import certify, enumerate_solutions, value_window, window

TEN = BaseSpec.integer(10)
K2 = Field(2)
PRESETS = sorted(load_presets())


def key(rep):
    return [(s.n, s.l, s.m, s.d1, s.d2) for s in rep.solutions]


def test_padovan_distinct():
    rep = enumerate_solutions(preset("padovan"), TEN, (0, 500), distinct=True)
    assert rep.values == {151, 616}
    assert key(rep) == [(19, 1, 1, 1, 5), (24, 1, 1, 6, 1)]
    assert rep.status == {"kind": "PartialUpTo", "n": 500}


def test_padovan_all_digits_matches_oracle():
    pad = preset("padovan")
    rep = enumerate_solutions(pad, TEN, (0, 500))
    assert key(rep) == naive_solutions(sequence(pad.coeffs, pad.initials, 501), 10)
    assert rep.values == {151, 616}


@pytest.mark.parametrize("name", PRESETS)
def test_matches_oracle_small_bases(name):
    s = preset(name)
    seq = sequence(s.coeffs, s.initials, 601)
    for b in range(2, 11):
        assert key(enumerate_solutions(s, BaseSpec.integer(b), (0, 600))) == naive_solutions(seq, b)


@pytest.mark.parametrize("name", PRESETS)
def test_solutions_reverify(name):
    s = preset(name)
    for b in (2, 3, 5, 10):
        base = BaseSpec.integer(b)
        for sol in enumerate_solutions(s, base, (0, 800)).solutions:
            p = PalindromicPattern(sol.d1, sol.d2, sol.l, sol.m)
            assert term(s, sol.n) == pattern_value(p, base) == evaluate(p.render(), base)


@pytest.mark.parametrize("name", PRESETS)
def test_integer_and_generic_paths_agree(name):
    s = preset(name)
    for b in (2, 3, 10):
        base = BaseSpec.integer(b)
        a = enumerate_solutions(s, base, (0, 300), method="integer")
        g = enumerate_solutions(s, base, (0, 300), method="generic")
        assert key(a) == key(g)
        assert [x.value for x in a.solutions] == [x.value for x in g.solutions]


def _pattern_table(base, max_len):
    table = {}
    N = base.alphabet_size
    for s in range(3, max_len + 1):
        for l in range(1, (s - 1) // 2 + 1):
            for d1 in range(1, N):
                for d2 in range(N):
                    p = PalindromicPattern(d1, d2, l, s - 2 * l)
                    table.setdefault(evaluate(p.render(), base), []).append(p)
    return table


@pytest.mark.parametrize("beta, max_len, hits", [((0, 1), 40, True), ((3, 1), 9, False)])
def test_quadratic_base_against_pattern_table(beta, max_len, hits):
    base = BaseSpec(K2(*beta), K2)
    table = _pattern_table(base, max_len)
    floor = base.ball(128) ** (max_len - 1)
    found = 0
    for name in PRESETS:
        s = preset(name)
        top = 0
        while floor.certainly_gt(term(s, top + 1)):
            top += 1
        rep = enumerate_solutions(s, base, (0, top))
        expected = sorted((n, p.l, p.m, p.d1, p.d2) for n in range(top + 1)
                          for p in table.get(K2(term(s, n)), []))
        assert key(rep) == expected
        found += len(expected)
    assert (found > 0) == hits


def test_quadratic_recurrence_in_quadratic_base():
    K = Field(2)
    s = RecurrenceSpec((K(1), K(1), K(0, 1)), (K(0), K(1), K(1)), K)
    base = BaseSpec(K(0, 1), K)
    rep = enumerate_solutions(s, base, (0, 40))
    for sol in rep.solutions:
        assert term(s, sol.n) == pattern_value(sol.pattern, base)
    table = _pattern_table(base, 24)
    floor = base.ball(128) ** 23
    covered = [n for n in range(41) if floor.certainly_gt(abs(term(s, n).to_ball(128)))]
    expected = sorted((n, p.l, p.m, p.d1, p.d2) for n in covered for p in table.get(term(s, n), []))
    assert expected
    assert [k for k in key(rep) if k[0] in covered] == expected


def test_determinism_and_parallel():
    s = preset("tribonacci")
    a = enumerate_solutions(s, BaseSpec.integer(2), (0, 1500))
    b = enumerate_solutions(s, BaseSpec.integer(2), (0, 1500))
    c = enumerate_solutions(s, BaseSpec.integer(2), (0, 1500), jobs=3)
    strip = lambda r: {k: v for k, v in r.to_json().items() if k != "elapsed_seconds"}
    assert json.dumps(strip(a)) == json.dumps(strip(b))
    assert key(a) == key(c)
    parts = [enumerate_solutions(s, BaseSpec.integer(2), r) for r in ((0, 400), (401, 1111), (1112, 1500))]
    assert [k for p in parts for k in key(p)] == key(a)


def test_windows_contain_true_lengths():
    s = preset("padovan")
    cd = characteristic_data(s, 256)
    for b in (2, 3, 10):
        base = BaseSpec.integer(b)
        mag = magnitude_constants(to_dominant_form(cd), base)
        for sol in enumerate_solutions(s, base, (0, 2000)).solutions:
            lo, hi = window(sol.n, cd, base, mag)
            assert lo <= 2 * sol.l + sol.m <= hi
        for n in range(mag.n0, 2000, 37):
            lo, hi = window(n, cd, base, mag)
            assert hi - lo <= 2 * float(mag.C0.hi) / float(base.ball(64).log().lo) + 1


def test_short_values_have_empty_window():
    assert value_window(99, TEN)[0] > value_window(99, TEN)[1]
    assert value_window(0, TEN)[0] > value_window(0, TEN)[1]
    lo, hi = value_window(151, TEN)
    assert lo <= 3 <= hi


def test_powers_of_ten_have_no_solutions():
    s = RecurrenceSpec((10, 1, -10), (1, 10, 100))
    assert [term(s, n) for n in range(6)] == [10 ** n for n in range(6)]
    assert enumerate_solutions(s, TEN, (0, 300)).solutions == []
    assert enumerate_solutions(s, TEN, (0, 60), method="generic").solutions == []


def test_certify_padovan_partial():
    rep = certify(preset("padovan"), TEN, cap=2000)
    assert rep.status["kind"] == "PartialUpTo" and rep.status["n"] == 2000
    assert int(rep.status["N_max"]) > 10 ** 50 and rep.status["effective"] is True
    assert rep.values == {151, 616}
    out = rep.to_json(with_trace=True)
    assert out["bound"]["trace"] and out["hypotheses"]


def test_certify_failure_names_hypothesis():
    rep = certify(RecurrenceSpec((6, -11, 6), (1, 2, 3)), TEN)
    assert rep.status["kind"] == "Failed"
    assert "z1_not_in_K" in rep.status["hypotheses"]
    assert rep.solutions == []


def test_certify_negative_sequence_is_complete():
    # A_1 < 0: every term past n0 is negative, so the small bound closes the search
    rep = certify(RecurrenceSpec((0, 1, 1), (-1, -1, -1)), TEN)
    assert rep.status["kind"] == "Complete"
    assert rep.solutions == []


def test_bad_ranges():
    with pytest.raises(InvalidInput):
        enumerate_solutions(preset("padovan"), TEN, (-1, 5))
    with pytest.raises(InvalidInput):
        enumerate_solutions(preset("padovan"), BaseSpec(K2(0, 1), K2), (0, 5), method="integer")


def test_csv_output():
    rep = enumerate_solutions(preset("padovan"), TEN, (0, 30), distinct=True)
    assert rep.to_csv() == "n,l,m,d1,d2,value\n19,1,1,1,5,151\n24,1,1,6,1,616\n"
