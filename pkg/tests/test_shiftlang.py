import math

import pytest
from hypothesis import given, settings, strategies as st

from symshift.errors import EmptyEssentialPart, NotAdmissible, NotEventuallyPeriodic, NotTransitive
from symshift.shiftlang import (
    GREEDY,
    build_automaton,
    collapses,
    count_words,
    entropy,
    enumerate_Bn,
    essential_words,
    find_sync_word,
    follower_set,
    is_admissible,
    is_factor,
    prefix_set,
    spec_number,
    transitivity_mixing,
)
from symshift.words import lex_cmp, parse_seq, parse_word, reflect

from oracles import DeBruijn
from strategies import vhat_corpus, vhat_seqs


def S(text, M=1):
    return parse_seq(text, M)


def W(text, M=1):
    return parse_word(text, M)


def words(ws):
    return {"".join(map(str, w.digits)) for w in ws}


def test_is_admissible_examples():
    assert not is_admissible(W("11"), S("(10)"))
    assert is_admissible(W("10"), S("(10)"))
    assert is_admissible(W("1101"), S("(11010)"))


def test_enumerate_Bn_examples():
    assert words(enumerate_Bn(S("(10)"), 3).words) == {"010", "101"}
    assert len(enumerate_Bn(S("(1)"), 2).words) == 4
    b4 = words(enumerate_Bn(S("(1110)"), 4).words)
    assert {"1110", "0001"} <= b4
    assert b4 == {"".join(map(str, w)) for w in DeBruijn((1, 1, 1, 0), 1).words(4)}


def test_enumerate_Bn_export():
    assert enumerate_Bn(S("(10)"), 2).export() == "01\n10"


def test_automaton_examples():
    aut = build_automaton(S("(10)"))
    assert transitivity_mixing(aut) == {"transitive": True, "mixing": False, "period_gcd": 2}
    full = build_automaton(S("(1)"))
    assert len(full.essential) == 1
    (s,) = full.essential
    assert sorted(full.delta[s]) == [0, 1]
    a = S("(1110)")
    assert count_words(build_automaton(a), 12) == list(enumerate_Bn(a, 12).counts)


def test_automaton_rejects_words():
    with pytest.raises(NotEventuallyPeriodic):
        build_automaton(W("10"))


def test_automaton_text_export():
    text = build_automaton(S("(10)")).to_text()
    assert "# essential:" in text and "->" in text


def test_entropy_examples():
    e = entropy(build_automaton(S("(1)")))
    assert e.normalized[0] <= 1 <= e.normalized[1]
    assert e.log[1] - e.log[0] < 1e-8
    e = entropy(build_automaton(S("(10)")))
    assert e.log[0] == 0 and e.log[1] < 1e-12
    g = entropy(build_automaton(S("(10)"), GREEDY))
    golden = (1 + 5 ** 0.5) / 2
    assert abs(g.value - math.log(golden)) < 1e-6


def test_transitivity_examples():
    assert transitivity_mixing(build_automaton(S("(1)")))["mixing"]
    tm = transitivity_mixing(build_automaton(S("(1110)")))
    assert tm["transitive"] and tm["mixing"] and tm["period_gcd"] == 1
    # the transitive base: transitive although the presentation has two components
    tm = transitivity_mixing(build_automaton(S("1(10)")))
    assert tm["transitive"] and not tm["mixing"]
    assert not transitivity_mixing(build_automaton(S("(1100)")))["transitive"]


def test_spec_number_examples():
    r = spec_number(build_automaton(S("(10)")), 2, 10)
    assert r.value is None and str(r) == "none<=10" and r.witness is not None
    full = build_automaton(S("(1)"))
    assert all(spec_number(full, n, 4).value == 0 for n in (1, 3, 5))
    aut = build_automaton(S("(1110)"))
    s4, s8 = spec_number(aut, 4, 16), spec_number(aut, 8, 16)
    assert s4.value is not None and s4.value == s8.value
    oracle = DeBruijn((1, 1, 1, 0), 1)
    assert [spec_number(aut, n, 16).value for n in range(1, 5)] == \
        [oracle.spec_number(n, 16) for n in range(1, 5)]


def test_spec_number_almost():
    aut = build_automaton(S("(10)"))
    assert spec_number(aut, 2, 10, almost=True).value == 1


def test_follower_and_prefix_sets():
    assert words(follower_set(build_automaton(S("(10)")), W("1"), 1)) == {"0"}
    assert words(follower_set(build_automaton(S("(1)")), W(""), 1)) == {"0", "1"}
    aut = build_automaton(S("(1110)"))
    assert words(follower_set(aut, W("111"), 1)) == {"0"}
    assert words(prefix_set(aut, W("000"), 1)) == {"1"}
    with pytest.raises(NotAdmissible):
        follower_set(aut, W("1111"), 1)


def test_find_sync_word_examples():
    a = S("(1110)")
    aut = build_automaton(a)
    res = find_sync_word(aut, a, 6)
    w = res.word.digits
    assert not is_factor(w, a) and not is_factor(w, reflect(a))
    assert collapses(aut, w)
    assert DeBruijn((1, 1, 1, 0), 1).is_sync(w, 6)
    full = build_automaton(S("(1)"))
    assert len(find_sync_word(full, S("(1)"), 3).collapsing_word) == 1
    g = S("(10)")
    res = find_sync_word(build_automaton(g), g, 8)
    assert res.word is None
    for n in range(1, 9):
        assert all(is_factor(w, g) for w in essential_words(build_automaton(g), n))
    with pytest.raises(NotTransitive):
        find_sync_word(build_automaton(S("(1100)")), S("(1100)"), 4)


def test_empty_essential_part():
    # below the golden ratio only the trivial points survive
    aut = build_automaton(S("(100)"))
    if not aut.essential:
        with pytest.raises(EmptyEssentialPart):
            entropy(aut)


# property tests ------------------------------------------------------


@settings(max_examples=150)
@given(vhat_seqs(M_max=2, max_per=5, periodic=True))
def test_language_matches_de_bruijn(a):
    oracle = DeBruijn(a.period, a.M)
    aut = build_automaton(a)
    n = len(a.period) + 4
    assert count_words(aut, n) == [len(oracle.words(k)) for k in range(1, n + 1)]
    assert abs(entropy(aut).value - oracle.entropy()) < 1e-8


@settings(max_examples=150)
@given(vhat_seqs(M_max=3, max_pre=3, max_per=4))
def test_count_submultiplicative_and_reflection_closed(a):
    aut = build_automaton(a)
    c = [1] + count_words(aut, 8)
    assert all(c[i + j] <= c[i] * c[j] for i in range(1, 5) for j in range(1, 4))
    for n in (1, 4, 7):
        ws = set(essential_words(aut, n))
        assert {tuple(a.M - d for d in w) for w in ws} == ws


@settings(max_examples=60)
@given(vhat_seqs(M_max=2, max_pre=2, max_per=4), st.data())
def test_entropy_monotone(a, data):
    b = data.draw(st.sampled_from([x for x in vhat_corpus(2, 2, 4) if x.M == a.M]))
    if lex_cmp(a, b) > 0:
        a, b = b, a
    ea, eb = entropy(build_automaton(a)), entropy(build_automaton(b))
    assert ea.log[0] <= eb.log[1] + 1e-8


@settings(max_examples=50)
@given(vhat_seqs(M_max=2, max_per=5, periodic=True))
def test_transitivity_against_de_bruijn(a):
    oracle = DeBruijn(a.period, a.M)
    tm = transitivity_mixing(build_automaton(a))
    assert tm["transitive"] == oracle.transitive()
    assert tm["mixing"] == oracle.mixing()
