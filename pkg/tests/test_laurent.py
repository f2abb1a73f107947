from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonarch.errors import PrecisionError, UsageError
from nonarch.ffield import default_field
from nonarch.laurent import (Series, format_series, parse_series, random_series, s_abs,
                             s_arith, s_enumerate, s_split)

from conftest import series

F2, F3, F4 = default_field(2), default_field(3), default_field(4)


def as_dict(z):
    return dict(z.terms())


def naive_mul(a: dict, b: dict, p: int) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = (out.get(i + j, 0) + x * y) % p
    return {k: v for k, v in out.items() if v}


def naive_add(a: dict, b: dict, p: int) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = (out.get(k, 0) + v) % p
    return {k: v for k, v in out.items() if v}


@given(series(q=3, exact=True), series(q=3, exact=True))
def test_exact_ops_match_dict_oracle(a, b):
    assert as_dict(a + b) == naive_add(as_dict(a), as_dict(b), 3)
    assert as_dict(a * b) == naive_mul(as_dict(a), as_dict(b), 3)
    assert (a - b) + b == a


@given(series(q=2), series(q=2))
def test_precision_rules(a, b):
    s = a + b
    if a.prec is not None and b.prec is not None:
        assert s.prec == min(a.prec, b.prec)
    m = a * b
    if a.prec is not None and b.prec is not None:
        va = a.val if a.val is not None else a.prec
        vb = b.val if b.val is not None else b.prec
        assert m.prec == min(a.prec + vb, b.prec + va)


@given(series(q=3), series(q=3))
def test_ultrametric(a, b):
    s = a + b
    if a.val is not None and b.val is not None and s.val is not None:
        assert s.val >= min(a.val, b.val)
        if a.val != b.val:
            assert s.val == min(a.val, b.val)


@given(series(q=2, exact=False))
def test_inverse_times_self_is_one(a):
    if a.val is None or a.val >= a.prec:
        return
    inv = a.inverse()
    assert inv.prec == a.prec - 2 * a.val
    assert (a * inv).congruent(Series.one(F2))


def test_inverse_examples():
    one_plus_x = Series.from_dict(F2, {0: 1, 1: 1}, prec=8)
    assert str(one_plus_x.inverse()) == "1 + X + X^2 + X^3 + X^4 + X^5 + X^6 + X^7 % X^8"
    assert Series.monomial(F3, 3, 2).inverse() == Series.monomial(F3, -3, 2)
    with pytest.raises(PrecisionError):
        Series.from_dict(F2, {0: 1, 1: 1}).inverse()
    with pytest.raises(PrecisionError):
        Series.zero(F2, 5).inverse()


def test_zero_flag_and_abs():
    z = Series.from_dict(F2, {3: 1}, prec=6) - Series.from_dict(F2, {3: 1}, prec=5)
    assert z.is_zero and z.prec == 5 and not z.exact
    with pytest.raises(PrecisionError):
        z.valuation
    a = s_abs(z)
    assert not a.exact and a.log_q == -5
    assert s_abs(Series.monomial(F3, -2)).value == Fraction(9)
    assert s_abs(Series.zero(F3)).value == 0


def test_split_and_arith_dispatch():
    z = parse_series("X^-2 + 1 + X^3 % X^6", F2)
    pr, ig = s_split(z)
    assert str(pr) == "X^-2 % X^6" and str(ig) == "1 + X^3 % X^6"
    assert s_arith("add", pr, ig) == z
    with pytest.raises(UsageError):
        s_arith("pow", z, z)
    with pytest.raises(UsageError):
        s_arith("add", z, Series.one(F3))


@pytest.mark.parametrize("text", [
    "X^-1 + 1 + X^2 % X^8", "0 % X^4", "X", "2*X^-3 + X^5", "0",
])
def test_parse_format_roundtrip(text):
    z = parse_series(text, F3)
    assert format_series(z) == text
    assert parse_series(format_series(z), F3) == z


def test_extension_coefficients_roundtrip():
    z = parse_series("[0,1]*X^-1 + [1,1] % X^3", F4)
    assert z.coeff(-1).coeffs == (0, 1)
    assert parse_series(str(z), F4) == z
    assert Series.from_json(z.to_json()) == z


def test_enumerate_counts_and_distinct():
    elems = list(s_enumerate(F2, -2, 4))
    assert len(elems) == 2 ** 6
    assert len(set(elems)) == len(elems)
    with pytest.raises(UsageError):
        list(s_enumerate(F2, 0, 30, budget=1000))


def test_congruence_and_truncate():
    a = random_series(F3, 0, 20, np.random.default_rng(1))
    assert a.truncate(10).congruent(a)
    assert not a.congruent(a + Series.monomial(F3, 5))
    assert a.congruent(a + Series.monomial(F3, 25))


@given(st.integers(-10, 10), st.integers(-10, 10))
def test_monomial_shift(k, s):
    assert Series.monomial(F2, k).shift(s) == Series.monomial(F2, k + s)
