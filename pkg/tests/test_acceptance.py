"""Acceptance gate: one test per criterion, each timed against its limit.

Run alone with ``pytest tests/test_acceptance.py -v``; a summary with one
PASS/FAIL line per criterion is printed at the end of the session.
"""
import itertools
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from nonarch.calculus import (cn_certificate, divided_diff, holder_scan, not_cn1_witness,
                              superpoly_decay)
from nonarch.expseq import seq_gauss, seq_superlinear
from nonarch.ffield import default_field
from nonarch.group import GroupSession
from nonarch.laurent import Series, random_series, s_enumerate
from nonarch.morphisms import (SeriesMap, alpha_apply, alpha_inv_apply,
                               cyclic_shift_inv_apply, cyclic_shift_matrix_apply, interleave,
                               tau_apply)
from nonarch.willis import (Calibration, Lattice, MatrixMap, calibration_compare, scale,
                            scaling_norm, weighted_norm_log)


@contextmanager
def timed(record, ident, name, limit):
    record.update(id=ident, name=name, limit=limit)
    t0 = time.perf_counter()
    yield
    record["elapsed"] = time.perf_counter() - t0
    assert record["elapsed"] < limit, f"took {record['elapsed']:.3f} s > {limit} s"
    record["ok"] = True


def test_01_holder_estimate(acceptance):
    with timed(acceptance, 1, "Hoelder estimate for beta, gauss 3/2, v in [0,256]", 1.0):
        seq = seq_gauss(Fraction(3, 2))
        for q in (2, 3):
            F = default_field(q)
            f = SeriesMap.beta(seq)
            rep = holder_scan(f, F, 0, 256)
            assert rep.cert is not None and not rep.violations
            assert rep.cert.theta == Fraction(3, 2)
            assert rep.cert.log_a == min(-1, -1) and rep.cert.log_b == 1
            for r in rep.rows:
                v = r["v"]
                # |beta(X^v)| = q^-l_v, and a |X^v|^theta <= q^-l_v <= b |X^v|^theta
                assert r["min"] == r["max"] == -seq[v]
                assert -1 - Fraction(3, 2) * v <= -seq[v] <= 1 - Fraction(3, 2) * v


@pytest.mark.parametrize("n", [1, 2, 3])
def test_02_cn_not_cn1(acceptance, n):
    with timed(acceptance, 2, f"C^{n} certificate and non-C^{n + 1} witness, theta = {n}+1/2", 1.0):
        theta = n + Fraction(1, 2)
        f = SeriesMap.beta(seq_gauss(theta))
        F = default_field(2)
        rep = holder_scan(f, F, 0, 128)
        cn = cn_certificate(f, n, rep)
        assert cn and cn.theta == theta
        wit = not_cn1_witness(f, n, rep)
        assert wit and wit.theta == theta and wit.base_point == 0
        assert not cn_certificate(f, n + 1, rep)


def test_03_inverse_recursion(acceptance):
    with timed(acceptance, 3, "alpha o alpha^-1 = id = alpha^-1 o alpha", 5.0):
        seq = seq_gauss(Fraction(3, 2))
        F2 = default_field(2)
        count = 0
        for z in s_enumerate(F2, 0, 12):
            assert alpha_apply(seq, alpha_inv_apply(seq, z)) == z
            assert alpha_inv_apply(seq, alpha_apply(seq, z)) == z
            count += 1
        assert count == 4096
        for q in (3, 4):
            F = default_field(q)
            rng = np.random.default_rng(1000 + q)
            for _ in range(1000):
                z = random_series(F, 0, 128, rng)
                assert alpha_apply(seq, alpha_inv_apply(seq, z)) == z
                assert alpha_inv_apply(seq, alpha_apply(seq, z)) == z


def test_04_superpolynomial_decay(acceptance):
    with timed(acceptance, 4, "superpolynomial decay of beta, square sequence", 1.0):
        seq = seq_superlinear()
        F = default_field(2)
        rep = superpoly_decay(SeriesMap.beta(seq), F, 8, 0, 128)
        assert rep.obstruction
        for n in range(9):
            v0 = rep.v0[n]
            assert v0 is not None and v0 <= 2 * n + 2
            for v, e in rep.table[n]:
                assert e == n * v - seq[v]
                if v >= v0:
                    assert e < -v
            k = rep.k[n]
            assert k == seq.growth_threshold(n)
            # |beta(X^v)| <= c_n |X^v|^n with c_n = q^(k n)
            assert all(-seq[v] <= k * n - n * v for v in range(129))
            assert rep.bound_ok[n]


def test_05_scale(acceptance):
    with timed(acceptance, 5, "scale of tau, tau^-1 and the inverse cyclic shift", 1.0):
        for q in (2, 3, 4, 5):
            F = default_field(q)
            O = Lattice.standard(F, 1)
            assert scale(SeriesMap.tau(), O) == 1
            assert scale(SeriesMap.tau_inv(), O) == q
        for dstar in (2, 3):
            F = default_field(2)
            M = MatrixMap.cyclic_shift(F, dstar)
            assert scale(M.inverse(), Lattice.standard(F, dstar)) == 2


def test_06_calibration(acceptance):
    with timed(acceptance, 6, "calibration equals valuation; chart comparison bounds", 1.0):
        F = default_field(2)
        kappa = Calibration(SeriesMap.tau(), Lattice.standard(F, 1))
        count = 0
        for x in s_enumerate(F, -4, 10):
            if x.is_zero:
                continue
            assert kappa(x) == x.val
            count += 1
        assert count == 2 ** 14 - 1
        rep = calibration_compare(F, 2, 0, 64)
        assert rep.ok, rep.failures
        assert (rep.log_a, rep.log_b) == (0, Fraction(1, 2))
        assert rep.R == 1


def test_07_conjugation_identity(acceptance):
    with timed(acceptance, 7, "interleave o tau = cyclic shift o interleave", 1.0):
        F = default_field(2)
        n = 0
        for z in s_enumerate(F, 0, 6):
            assert interleave(2, tau_apply(z)) == cyclic_shift_matrix_apply(2, interleave(2, z))
            n += 1
        assert n == 64
        rng = np.random.default_rng(7)
        for _ in range(1000):
            z = random_series(F, -8, 128, rng)
            assert interleave(2, tau_apply(z)) == cyclic_shift_matrix_apply(2, interleave(2, z))


def test_08_scaling_norm(acceptance):
    with timed(acceptance, 8, "weighted norm scales by q^(1/d*) under M^-1", 1.0):
        F = default_field(2)
        rng = np.random.default_rng(8)
        for dstar in (2, 3):
            w = scaling_norm(dstar)
            done = 0
            while done < 1000:
                x = interleave(dstar, random_series(F, -6, 30, rng, exact=True))
                if all(e.is_zero for e in x):
                    continue
                lhs = weighted_norm_log(w, cyclic_shift_inv_apply(dstar, x))
                assert lhs == weighted_norm_log(w, x) + Fraction(1, dstar)
                done += 1


def test_09_group_laws(acceptance):
    with timed(acceptance, 9, "group laws of K x| <alpha-bar, tau> at P = 64", 1.0):
        F = default_field(2)
        S = GroupSession(F, seq_gauss(Fraction(3, 2)), prec=64)
        rng = np.random.default_rng(9)
        for _ in range(100):
            g, h, k = (S.random(rng) for _ in range(3))
            assert S.equal(S.mul(S.mul(g, h), k), S.mul(g, S.mul(h, k)))
            e = S.mul(g, S.inv(g))
            assert e.w.is_identity and e.z.truncate(64).is_zero
            c = S.conj(g, S.elem(k.z))
            assert c.w.is_identity
            assert c.z.congruent(S.word_act(g.w, k.z), 64)
        X = Series.monomial(F, 1)
        assert S.word_act("A T", X) == Series.from_dict(F, {2: 1, 4: 1})
        assert S.word_act("T A", X) == Series.from_dict(F, {2: 1, 3: 1})


def test_10_divided_differences(acceptance):
    with timed(acceptance, 10, "divided differences: symmetry and first difference", 1.0):
        F = default_field(2)
        beta = SeriesMap.beta(seq_gauss(Fraction(3, 2)))
        rng = np.random.default_rng(10)
        done = 0
        while done < 50:
            xs = [random_series(F, 0, 40, rng) for _ in range(3)]
            if any((a - b).is_zero for a, b in itertools.combinations(xs, 2)):
                continue
            vals = [divided_diff(beta, [xs[i] for i in p])
                    for p in itertools.permutations(range(3))]
            assert all(v == vals[0] for v in vals[1:])
            x, y = xs[0], xs[1]
            assert divided_diff(beta, [x, y]) == beta(x - y) / (x - y)
            done += 1


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
