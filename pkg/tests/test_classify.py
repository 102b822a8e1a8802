import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from symshift.classify import (
    IN_dim_lower_bound,
    classify,
    classify_strong_weak,
    constants,
    dimension_Uq,
    in_IN,
    is_fundamental,
    is_in_closureU,
    is_in_U,
    is_in_Vhat,
    is_irreducible,
    is_star_irreducible,
    kl_digits,
    natural_approx_above,
    natural_approx_below,
    plateau_from_left,
    spec_certificate,
    transitive_alpha,
    xi,
)
from symshift.errors import (
    BelowGoldenRatio,
    NotInVhat,
    NotIrreducible,
    NotPeriodic,
    OutOfStarRange,
    PrefixTooShort,
    TooShort,
)
from symshift.words import EventuallyPeriodicSeq, Word, lex_cmp, parse_seq, parse_word

from oracles import brute_fundamental, brute_irreducible, in_vhat
from strategies import vhat_seqs


def S(text, M=1):
    return parse_seq(text, M)


def W(text, M=1):
    return parse_word(text, M)


def raw(x):
    return x.preperiod, x.period


# membership ----------------------------------------------------------


def test_membership_examples():
    assert is_in_Vhat(S("(10)")).yes
    assert is_in_Vhat(S("(0)")).no
    assert is_in_Vhat(S("(1101010)")).yes
    assert is_in_U(S("(10)")).no and is_in_closureU(S("(10)")).no
    assert is_in_closureU(S("(1110)")).yes and is_in_U(S("(1110)")).no
    kl = is_in_U(Word(kl_digits(1, 64), 1))
    assert kl.unknown and kl.horizon == 64
    assert is_in_U(S("(1)")).yes


@given(st.integers(1, 3), st.data())
def test_vhat_matches_brute_force(M, data):
    pre = tuple(data.draw(st.lists(st.integers(0, M), max_size=3)))
    per = tuple(data.draw(st.lists(st.integers(0, M), min_size=1, max_size=5)))
    x = EventuallyPeriodicSeq(pre, per, M)
    assert is_in_Vhat(x).yes == in_vhat(raw(x), M)


# constants -----------------------------------------------------------


def test_constants_examples():
    c1 = constants(1)
    lo, hi = c1.q_G.refine(Fraction(1, 10 ** 12))
    assert lo <= Fraction(16180339887, 10 ** 10) + Fraction(1, 10 ** 9)
    assert hi >= Fraction(16180339887, 10 ** 10) - Fraction(1, 10 ** 9)
    assert str(c1.alpha_G) == "(10)" and str(c1.alpha_T) == "1(10)"
    assert str(c1.kl_prefix(8)) == "11010011"
    c2 = constants(2)
    assert c2.q_G.kind == "rational" and c2.q_G.enclosure()[0] == 2
    assert str(c2.alpha_G) == "(1)"


@pytest.mark.parametrize("M", [1, 2, 3, 4])
def test_constants_are_ordered(M):
    c = constants(M)
    g, t = c.alpha_G.take(64), c.alpha_T.take(64)
    kl = kl_digits(M, 64)
    assert g < kl < t


def test_xi():
    assert xi(1, 1) == transitive_alpha(1)
    assert xi(1, 2) == transitive_alpha(2)
    seq = [xi(n, 1) for n in range(1, 5)]
    assert all(lex_cmp(a, b) > 0 for a, b in zip(seq, seq[1:]))
    kl = kl_digits(1, 64)
    assert all(x.take(64) > kl for x in seq)


# irreducibility ------------------------------------------------------


def test_irreducible_examples():
    assert is_irreducible(S("(1110)")).yes
    assert is_irreducible(S("(10)")).yes
    r = is_irreducible(S("(1100)"))
    assert r.no and r.witness["j"] == 2


def test_irreducible_requires_vhat():
    with pytest.raises(NotInVhat):
        is_irreducible(S("(01)"))


@settings(max_examples=300)
@given(vhat_seqs(M_max=3, max_pre=2, max_per=5))
def test_irreducible_matches_brute_force(x):
    assert is_irreducible(x).yes == brute_irreducible(raw(x), x.M, H=40)


def test_irreducible_prefix_horizons():
    # a prefix verdict never contradicts the exact one, and doubling the horizon never flips it
    for text in ["(1110)", "(1100)", "(11010)", "(1110010010)"]:
        a = S(text)
        exact = is_irreducible(a)
        for H in (8, 16, 32):
            v = is_irreducible(a.prefix(H))
            assert v.unknown or v.verdict == exact.verdict
            w = is_irreducible(a.prefix(2 * H))
            assert not (v.yes and w.no) and not (v.no and w.yes)


def test_star_irreducible():
    assert is_star_irreducible(xi(2, 1)).yes
    with pytest.raises(OutOfStarRange):
        is_star_irreducible(S("1(10)"))
    assert not is_star_irreducible(S("(10)")).yes


# approximations ------------------------------------------------------


def test_natural_approx_below_examples():
    apps = natural_approx_below(S("(11010)"))
    by_index = {a.index: a for a in apps}
    assert by_index[1].alpha == S("(10)")
    assert by_index[3].alpha == S("(110100)")
    assert by_index[4].alpha == S("(1101010)") and by_index[4].n == 7
    assert [str(a.alpha) for a in natural_approx_below(S("(10)"))] == ["(10)"]
    apps = natural_approx_below(S("(1110)"))
    assert [a.n for a in apps[:5]] == [2, 3, 5, 6, 7]
    assert all(in_vhat(raw(a.alpha), 1) for a in apps)


@settings(max_examples=200)
@given(vhat_seqs(M_max=2, max_pre=2, max_per=5))
def test_natural_approx_below_brute_force(x):
    d = x.take(30)
    want = []
    for n in range(1, 31):
        w = d[:n]
        if w[-1] > 0 and in_vhat(((), w[:-1] + (w[-1] - 1,)), x.M):
            want.append(n)
    apps = natural_approx_below(x, max_n=30)
    # sequences whose shift hits the reflection stop early and end with x itself
    got = [a.n for a in apps if a.n in want or a.alpha != x]
    assert got == want[:len(got)]
    assert all(lex_cmp(a.alpha, x) <= 0 for a in apps)


def test_natural_approx_above():
    kl = Word(kl_digits(1, 64), 1)
    apps = natural_approx_above(kl, 5)
    assert apps[0].n == 3
    assert all(a.fundamental for a in apps)
    assert all(brute_fundamental(kl.digits[:a.n], 1) for a in apps)
    per = natural_approx_above(S("(1110)"), 3)
    assert [a.n for a in per] == [4, 8, 12]
    assert [a.fundamental for a in per] == [True, False, False]


def test_is_fundamental_examples():
    assert is_fundamental(W("110"))
    assert not is_fundamental(W("111"))
    assert is_fundamental(W("1101011")) == brute_fundamental((1, 1, 0, 1, 0, 1, 1), 1)
    with pytest.raises(TooShort):
        is_fundamental(W("11"))


@given(st.integers(1, 3), st.data())
def test_is_fundamental_brute(M, data):
    w = tuple(data.draw(st.lists(st.integers(0, M), min_size=3, max_size=9)))
    assert is_fundamental(Word(w, M)) == brute_fundamental(w, M)


# strong and weak -----------------------------------------------------


@pytest.mark.parametrize("text,M,kind,N,last", [
    ("(1110)", 1, 1, None, None),
    ("(11010)", 1, 2, 4, "(110100)"),
    ("(1110010010)", 1, 3, None, "(111001000)"),
    ("(221)", 2, 1, None, None),
    ("(2221)", 2, 1, None, None),
    ("(211211121111)", 2, 2, None, "(210)"),
    ("(22010101)", 2, 3, None, "(22010100)"),
])
def test_strong_weak_examples(text, M, kind, N, last):
    r = classify_strong_weak(S(text, M))
    assert r.verdict == "Strong" and r.type == kind
    assert str(r) == f"Strong(Type{kind})"
    if N is not None:
        assert r.N == N and r.n_N == 7
    if last is None:
        assert r.last_non_irreducible is None
    else:
        assert r.last_non_irreducible == S(last, M)


def test_strong_weak_errors_and_prefixes():
    with pytest.raises(NotIrreducible):
        classify_strong_weak(S("(1100)"))
    assert classify_strong_weak(S("(1110)").prefix(20)).verdict == "Unknown"
    assert classify_strong_weak(S("(1110)"), witness_schedule=[3, 5]).verdict == "Weak"


@settings(max_examples=100)
@given(vhat_seqs(M_max=2, max_per=6, periodic=True))
def test_periodic_irreducible_is_strong(x):
    if is_irreducible(x).yes:
        assert classify_strong_weak(x).verdict == "Strong"


# specification -------------------------------------------------------


def test_spec_certificate_examples():
    c = spec_certificate(S("(1110)"))
    assert c.verdict == "Certificate" and c.K == 2
    assert spec_certificate(S("(10)")).verdict == "Refuted"
    assert spec_certificate(S("(1)", 2)).verdict == "Certificate"
    p = spec_certificate(W("11100110010110"))
    assert p.verdict == "Certificate" and p.K <= 4
    assert spec_certificate(S("(1100)")).verdict == "Refuted"


def test_in_IN():
    assert in_IN(W("111001100101"), 2).yes
    assert in_IN(W("1101"), 2).no
    assert in_IN(W("22200121", 2), 2).yes
    assert in_IN(W("11100011"), 2).no
    with pytest.raises(PrefixTooShort):
        in_IN(W("11"), 2)


# plateaus and dimension ----------------------------------------------


def test_plateau_from_left():
    iv = plateau_from_left(S("(1110)"))
    assert iv.right == S("1111(0001)")
    assert plateau_from_left(S("(10)")).right == S("11(01)")
    with pytest.raises(NotPeriodic):
        plateau_from_left(S("1(10)"))
    with pytest.raises(NotIrreducible):
        plateau_from_left(S("(1100)"))


def test_dimension():
    lo, hi = dimension_Uq(S("(1)"))
    assert lo <= 1 <= hi and hi - lo < 1e-12
    lo, hi = dimension_Uq(S("(10)"))
    assert lo == 0 and hi < 1e-12
    lo, hi = dimension_Uq(S("(1110)"))
    assert 0 < lo <= hi < 1
    with pytest.raises(BelowGoldenRatio):
        dimension_Uq(S("(100)"))


def test_IN_dim_lower_bound():
    assert IN_dim_lower_bound(1, 2) == (Fraction(1, 2), Fraction(1, 2))
    assert IN_dim_lower_bound(1, 10)[0] >= Fraction(999, 1000)
    lo, hi = IN_dim_lower_bound(2, 2)
    assert abs(float(lo) - 0.8856) < 1e-4 and hi - lo < Fraction(1, 10 ** 12)


# full report ---------------------------------------------------------


def test_report_shape():
    rep = classify(S("(1110)"))
    json.dumps(rep)
    assert rep["schema"] == "symshift.report/1"
    assert rep["summary"]["spec"].startswith("Certificate")
    assert rep["summary"]["transitive"] == "Yes" and rep["summary"]["mixing"] == "Yes"
    with pytest.raises(NotInVhat):
        classify(S("(0)"))
    rep = classify(S("(1110)").prefix(24))
    assert rep["irreducible"]["verdict"] == "Unknown"


@settings(max_examples=40)
@given(vhat_seqs(M_max=2, max_pre=1, max_per=5))
def test_report_invariants(x):
    rep = classify(x)
    if rep["spec"]["verdict"] == "Certificate":
        assert rep["strong_weak"]["verdict"] == "Strong"
        assert rep["transitive"]
    if rep["SFT"]:
        assert rep["sofic"]
    irr = rep["irreducible"]["verdict"] == "Yes"
    assert rep["transitive"] == (irr or x == transitive_alpha(x.M))
