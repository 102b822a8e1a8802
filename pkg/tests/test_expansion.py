from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from symshift.classify import kl_digits
from symshift.errors import DegeneratePeriod, NotEventuallyPeriodicWithinDepth, NotInVhat
from symshift.expansion import (
    AlgebraicBase,
    base_from_alpha,
    greedy_digits,
    pi_q,
    quasi_greedy_digits,
    roundtrip_check,
)
from symshift.words import EventuallyPeriodicSeq, Word, parse_seq

GOLDEN = 1.6180339887498949


def golden():
    return AlgebraicBase.poly_root([-1, -1, 1], Fraction(1), Fraction(2), 1)


def digits(w):
    return "".join(map(str, w.digits))


def test_quasi_greedy_examples():
    assert digits(quasi_greedy_digits(AlgebraicBase.rational(2, 1), 5)) == "11111"
    assert digits(quasi_greedy_digits(golden(), 6)) == "101010"
    kl = AlgebraicBase.from_expansion(lambda n: kl_digits(2, n), 2)
    assert digits(quasi_greedy_digits(kl, 8)) == "21020121"


def test_greedy_examples():
    g = greedy_digits(golden(), 6)
    assert digits(g.word) == "110000" and g.finite_at == 2
    assert g.quasi_greedy() == parse_seq("(10)", 1)
    # 1 = sum 2^-i has no terminating representation with digits <= 1
    g2 = greedy_digits(AlgebraicBase.rational(2, 1), 6)
    assert digits(g2.word) == "111111" and g2.finite_at is None
    g3 = greedy_digits(AlgebraicBase.rational(2, 2), 6)
    assert digits(g3.word) == "200000" and g3.finite_at == 1
    kl = AlgebraicBase.from_expansion(lambda n: kl_digits(1, n), 1)
    g4 = greedy_digits(kl, 16)
    assert digits(g4.word) == "1101001100101101" and g4.finite_at is None


def test_pi_q_examples():
    two = AlgebraicBase.rational(2, 1)
    assert pi_q(parse_seq("1", 1), two) == (Fraction(1, 2), Fraction(1, 2))
    lo, hi = pi_q(parse_seq("(10)", 1), golden())
    assert lo <= 1 <= hi and hi - lo < Fraction(1, 10 ** 9)
    lo, hi = pi_q(parse_seq("(01)", 1), golden(), width=Fraction(1, 1000))
    # closed form 1/(q^2 - 1) = 1/q at the golden ratio
    assert hi - lo <= Fraction(1, 1000)
    assert float(lo) - 1e-12 <= 1 / GOLDEN <= float(hi) + 1e-12


def test_base_from_alpha_examples():
    q = base_from_alpha(parse_seq("(10)", 1))
    lo, hi = q.refine(Fraction(1, 10 ** 12))
    assert lo - Fraction(10 ** -9) <= Fraction(GOLDEN) <= hi + Fraction(10 ** -9)
    q2 = base_from_alpha(parse_seq("(1)", 1))
    assert q2.kind == "rational" and Fraction(q2.enclosure()[0]) == 2
    q3 = base_from_alpha(parse_seq("(110100)", 1))
    assert digits(quasi_greedy_digits(q3, 12)) == "110100110100"


def test_base_from_alpha_errors():
    with pytest.raises(NotInVhat):
        base_from_alpha(parse_seq("(01)", 1))
    with pytest.raises((DegeneratePeriod, NotInVhat)):
        base_from_alpha(parse_seq("1", 1))


def test_base_from_alpha_bisection_oracle():
    # independent bisection with floats on the closed form
    alpha = (1, 1, 0, 1, 0, 0)

    def f(q):
        s = sum(a * q ** -(i + 1) for i, a in enumerate(alpha))
        return s / (1 - q ** -len(alpha)) - 1

    lo, hi = 1.0001, 2.0
    for _ in range(80):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if f(mid) > 0 else (lo, mid)
    a, b = base_from_alpha(parse_seq("(110100)", 1)).refine(Fraction(1, 10 ** 12))
    assert float(a) - 1e-9 <= lo <= float(b) + 1e-9


def test_roundtrip_check_examples():
    assert roundtrip_check(golden(), 10) is True
    assert roundtrip_check(AlgebraicBase.rational(2, 1), 4) is True
    kl = AlgebraicBase.from_expansion(lambda n: kl_digits(1, n), 1)
    with pytest.raises(NotEventuallyPeriodicWithinDepth):
        roundtrip_check(kl, 16)


# property tests ------------------------------------------------------


@st.composite
def rational_pairs(draw):
    M = draw(st.integers(1, 3))
    a = draw(st.fractions(Fraction(51, 50), Fraction(M + 1), max_denominator=50))
    b = draw(st.fractions(Fraction(51, 50), Fraction(M + 1), max_denominator=50))
    return M, min(a, b), max(a, b)


@given(rational_pairs())
def test_quasi_greedy_is_monotone(t):
    M, a, b = t
    x = quasi_greedy_digits(AlgebraicBase.rational(a, M), 20).digits
    y = quasi_greedy_digits(AlgebraicBase.rational(b, M), 20).digits
    assert x <= y


@given(st.integers(1, 3), st.fractions(Fraction(11, 10), Fraction(4), max_denominator=30))
def test_partial_sums_below_one(M, q):
    q = min(q, Fraction(M + 1))
    base = AlgebraicBase.rational(q, M)
    n = 15
    w = quasi_greedy_digits(base, n)
    value = sum(Fraction(d) / q ** (i + 1) for i, d in enumerate(w.digits))
    assert 1 - M * q ** -n / (q - 1) <= value < 1
