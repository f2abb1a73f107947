import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonarch.calculus import (cn_certificate, divided_diff, holder_scan, not_cn1_witness,
                              superpoly_decay)
from nonarch.errors import DegenerateInputError, UsageError
from nonarch.expseq import seq_gauss, seq_superlinear
from nonarch.ffield import default_field
from nonarch.laurent import Series, parse_series, random_series
from nonarch.morphisms import SeriesMap

F2, F3 = default_field(2), default_field(3)
G = seq_gauss(Fraction(3, 2))
BETA_G = SeriesMap.beta(G)
BETA_SQ = SeriesMap.beta(seq_superlinear())


def test_first_difference_examples():
    x = Series.monomial(F2, 2)
    assert divided_diff(BETA_G, [x, Series.zero(F2)]) == Series.monomial(F2, 2)
    pts = [parse_series("1 + X", F2), parse_series("X^3", F2)]
    assert divided_diff(SeriesMap.tau(), pts).congruent(Series.monomial(F2, 1))
    assert divided_diff(BETA_G, pts[:1]) == BETA_G(pts[0])


def test_coincident_points_rejected():
    x = parse_series("X + X^2", F2)
    with pytest.raises(DegenerateInputError):
        divided_diff(BETA_G, [x, x])
    with pytest.raises(DegenerateInputError):
        divided_diff(BETA_G, [parse_series("X % X^3", F2), parse_series("X + X^4", F2)])


def test_symmetry_second_difference():
    rng = np.random.default_rng(7)
    for _ in range(20):
        xs = [random_series(F3, 0, 24, rng) for _ in range(3)]
        if any((a - b).is_zero for a, b in itertools.combinations(xs, 2)):
            continue
        vals = [divided_diff(BETA_G, [xs[i] for i in p]) for p in itertools.permutations(range(3))]
        assert all(vals[0].congruent(v) for v in vals[1:])


def test_higher_difference_decay_for_cn_maps():
    # with a C^n certificate (theta, b): |f^<k>| <= b * dist^(theta - k), 1 <= k <= n
    seq = seq_gauss(Fraction(7, 2))
    f = SeriesMap.beta(seq)
    rep = holder_scan(f, F2, 0, 40)
    cert = cn_certificate(f, 3, rep)
    assert cert
    rng = np.random.default_rng(3)
    checked = 0
    for _ in range(40):
        k = int(rng.integers(1, 4))
        xs = [random_series(F2, 0, 60, rng) for _ in range(k + 1)]
        dists = [(a - b).val for a, b in itertools.combinations(xs, 2)]
        if any(d is None for d in dists):
            continue
        dd = divided_diff(f, xs)
        bound = cert.log_b - (cert.theta - k) * min(dists)
        if dd.val is not None:
            assert -dd.val <= bound
            checked += 1
        else:
            assert -dd.prec <= bound
    assert checked > 10


def test_holder_scan_exact_rows():
    rep = holder_scan(BETA_G, F2, 0, 64)
    for r in rep.rows:
        assert r["min"] == r["max"] == -G[r["v"]]
    assert rep.to_json()["cert"] == {"a": "1/2", "b": "2", "theta": "3/2"}
    assert abs(rep.theta_hat - 1.5) < 0.05


def test_holder_scan_tau_slope():
    rep = holder_scan(SeriesMap.tau(), F2, 0, 32)
    assert rep.theta_hat == pytest.approx(1.0)
    assert rep.offset == pytest.approx(-1.0)


def test_holder_scan_square_unbounded():
    rep = holder_scan(BETA_SQ, F2, 1, 64)
    assert rep.cert is None
    ratios = [Fraction(-r["max"], r["v"]) for r in rep.rows]
    assert ratios == [Fraction(v * v + 1, v) for v in range(1, 65)]


def test_exhaustive_matches_representative():
    ex = holder_scan(BETA_G, F3, 0, 6, sampling="exhaustive", budget=200)
    rp = holder_scan(BETA_G, F3, 0, 6)
    assert ex.rows == rp.rows
    assert ex.cert == rp.cert


def test_holder_scan_domain():
    with pytest.raises(UsageError):
        holder_scan(BETA_G, F2, -1, 4)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cn_and_not_cn1(n):
    f = SeriesMap.beta(seq_gauss(Fraction(2 * n + 1, 2)))
    rep = holder_scan(f, F2, 0, 64)
    assert cn_certificate(f, n, rep)
    assert not_cn1_witness(f, n, rep)
    assert not cn_certificate(f, n + 1, rep)


def test_square_growth_certificate():
    rep = holder_scan(BETA_SQ, F2, 0, 64)
    for n in range(1, 7):
        c = cn_certificate(BETA_SQ, n, rep)
        assert c and c.route == "growth"
        k = seq_superlinear().growth_threshold(n)
        assert c.log_cn == k * n
        assert not not_cn1_witness(BETA_SQ, n, rep)


def test_tau_refuses_witness():
    rep = holder_scan(SeriesMap.tau(), F2, 0, 16)
    for n in range(4):
        assert not not_cn1_witness(SeriesMap.tau(), n, rep)
        assert cn_certificate(SeriesMap.tau(), n, rep)


@given(st.fractions(min_value=Fraction(11, 10), max_value=Fraction(15, 2)).filter(
    lambda t: t.denominator > 1), st.integers(0, 8))
def test_certificate_consistency(theta, n):
    f = SeriesMap.beta(seq_gauss(theta))
    rep = holder_scan(f, F2, 0, 24)
    assert not (cn_certificate(f, n + 1, rep) and not_cn1_witness(f, n, rep))


def test_superpoly_decay_square():
    rep = superpoly_decay(BETA_SQ, F2, 8, 0, 128)
    assert rep.exponent(3, 10) == -71
    assert rep.verdict and rep.obstruction
    for n in range(9):
        assert rep.v0[n] <= 2 * n + 2
        assert rep.bound_ok[n]


def test_superpoly_decay_gauss_fails():
    rep = superpoly_decay(BETA_G, F2, 2, 0, 64)
    assert not rep.decays[2]
    assert rep.exponent(2, 10) == 20 - G[10]
