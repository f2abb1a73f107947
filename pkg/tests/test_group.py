from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonarch.errors import PrecisionError, UsageError
from nonarch.expseq import seq_gauss
from nonarch.ffield import default_field
from nonarch.group import AutWord, GElem, GroupSession
from nonarch.laurent import Series, parse_series

F2 = default_field(2)
S = GroupSession(F2, seq_gauss(Fraction(3, 2)), prec=64)


def X(k=1):
    return Series.monomial(F2, k)


@given(st.text(alphabet="AaTt", max_size=12))
def test_word_reduction(text):
    w = AutWord.parse(text)
    for a, b in zip(w.letters, w.letters[1:]):
        assert {a, b} not in ({"A", "a"}, {"T", "t"})
    assert (w * w.inverse()).is_identity
    assert AutWord.parse(str(w)) == w


def test_word_act_examples():
    assert S.word_act("T T", Series.one(F2)) == X(2)
    z = parse_series("X^-3 + 1 + X^5", F2)
    assert S.word_act("A a", z) == z
    assert S.word_act("A T", X()) == X(2) + X(4)
    assert S.word_act("T A", X()) == X(2) + X(3)


def test_translation_subgroup_and_conjugation():
    g = S.mul(S.elem(X()), S.elem(X(3)))
    assert g == GElem(X() + X(3), AutWord())
    c = S.conj(S.elem(0, "T"), S.elem(1))
    assert c.w.is_identity and c.z == X()


def test_group_laws_random():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        g, h, k = (S.random(rng) for _ in range(3))
        assert S.equal(S.mul(S.mul(g, h), k), S.mul(g, S.mul(h, k)))
        e = S.mul(g, S.inv(g))
        assert e.w.is_identity and e.z.truncate(S.prec).is_zero
        c = S.conj(g, S.elem(k.z))
        assert c.w.is_identity
        assert c.z.congruent(S.word_act(g.w, k.z), S.prec)


def test_same_action_semi_decision():
    samples = [X(k) for k in range(-3, 5)]
    assert S.same_action(AutWord.parse("TAt"), AutWord.parse("TAt"), samples)
    assert not S.same_action(AutWord.parse("AT"), AutWord.parse("TA"), samples)


def test_precision_guard():
    with pytest.raises(PrecisionError):
        S.elem(parse_series("1 % X^10", F2))
    with pytest.raises(UsageError):
        AutWord.parse("AB")
    with pytest.raises(UsageError):
        GroupSession(F2, seq_gauss(Fraction(3, 2)), prec=1)


def test_json_roundtrip():
    g = S.elem(parse_series("X^-1 + X^2", F2), "A t T a T")  # reduces to T
    assert str(g.w) == "T"
    assert S.from_json(g.to_json()) == g
