import itertools
from fractions import Fraction

import numpy as np
import pytest

from nonarch.errors import IterationBudgetError, PrecisionError, UsageError
from nonarch.ffield import default_field
from nonarch.laurent import Series, random_series, s_enumerate
from nonarch.morphisms import SeriesMap, VectorSeries, cyclic_shift_inv_apply, interleave
from nonarch.willis import (Calibration, Lattice, MatrixMap, calibration_compare,
                            is_tidy_contractive, lattice_index, scale, scaling_norm,
                            tidy_parts, weighted_norm_log)

F2, F3 = default_field(2), default_field(3)


def mono(k, f=F2, c=1):
    return Series.monomial(f, k, c)


def zero(f=F2):
    return Series.zero(f)


def coset_index(L, f, d, N):
    """[O^d : L] by counting residues of O^d mod X^N that lie in L."""
    inside = 0
    total = 0
    for parts in itertools.product(list(s_enumerate(f, 0, N)), repeat=d):
        total += 1
        exact = VectorSeries(tuple(p.lift_exact() for p in parts))
        inside += L.contains_vector(exact)
    return total // inside


@pytest.mark.parametrize("basis,N", [
    ([[mono(1), zero()], [zero(), mono(2)]], 3),
    ([[mono(1), mono(0)], [zero(), mono(2)]], 3),
    ([[mono(0) + mono(1), mono(1)], [mono(2), mono(3)]], 4),
])
def test_lattice_index_matches_coset_count(basis, N):
    L = Lattice(basis)
    O2 = Lattice.standard(F2, 2)
    assert O2.contains(L)
    assert L.contains(Lattice.standard(F2, 2, N))
    assert lattice_index(O2, L) == coset_index(L, F2, 2, N)


def test_elementary_divisors_and_index():
    L = Lattice([[mono(1), zero()], [zero(), mono(2)]])
    assert L.elementary_divisors() == [1, 2]
    M = Lattice([[mono(1), mono(0)], [zero(), mono(2)]])
    # det = X^3 and the gcd of entries is 1
    assert M.elementary_divisors() == [0, 3]
    assert lattice_index(Lattice.standard(F2, 2), L) == 8
    with pytest.raises(UsageError):
        lattice_index(L, Lattice.standard(F2, 2))


def test_sum_and_intersection():
    A = Lattice([[mono(0), zero()], [zero(), mono(2)]])
    B = Lattice([[mono(2), zero()], [zero(), mono(0)]])
    assert A + B == Lattice.standard(F2, 2)
    assert (A & B) == Lattice.standard(F2, 2, 2)
    assert A.contains(A & B) and B.contains(A & B)
    assert Lattice.from_json(A.to_json()) == A


def test_matrix_inverse_and_det():
    A = MatrixMap(((mono(0) + mono(1), mono(1)), (mono(2), mono(3) + mono(0))))
    I = A @ A.inverse(work=40)
    for i in range(2):
        for j in range(2):
            assert I.rows[i][j].congruent(Series.one(F2) if i == j else zero(), 30)
    M = MatrixMap.cyclic_shift(F3, 3)
    assert M.det() == mono(1, F3)
    assert M.power(3) == MatrixMap.diagonal([mono(1, F3)] * 3)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_scale_tau(q):
    f = default_field(q)
    O = Lattice.standard(f, 1)
    assert scale(SeriesMap.tau(), O) == 1
    assert scale(SeriesMap.tau_inv(), O) == q


@pytest.mark.parametrize("dstar", [2, 3])
def test_scale_cyclic_shift(dstar):
    M = MatrixMap.cyclic_shift(F2, dstar)
    U = Lattice.standard(F2, dstar)
    assert scale(M.inverse(), U) == 2
    assert scale(M, U) == 1
    up, um = tidy_parts(M.inverse(), U)
    assert up == U and um is None


def test_scale_diagonal_and_untidy():
    A = MatrixMap.diagonal([mono(-1, F3), mono(-2, F3)])
    assert scale(A, Lattice.standard(F3, 2)) == 27
    # mixed behaviour has rank-deficient U_+; not within the lattice model
    with pytest.raises(IterationBudgetError):
        scale(MatrixMap.diagonal([mono(1), mono(-1)]), Lattice.standard(F2, 2), k_max=8)


def test_tidy_contractive():
    O = Lattice.standard(F2, 1)
    assert is_tidy_contractive(SeriesMap.tau(), O)
    assert not is_tidy_contractive(SeriesMap.tau_inv(), O)
    U = Lattice.standard(F2, 2)
    assert is_tidy_contractive(MatrixMap.cyclic_shift(F2, 2), U)


def test_calibration_tau_is_valuation():
    kappa = Calibration(SeriesMap.tau(), Lattice.standard(F2, 1))
    for x in s_enumerate(F2, -4, 6):
        if x.is_zero:
            continue
        assert kappa(x.lift_exact()) == x.val
    assert kappa(zero()) == float("inf")
    with pytest.raises(PrecisionError):
        kappa(Series.zero(F2, 5))
    with pytest.raises(UsageError):
        Calibration(SeriesMap.tau_inv(), Lattice.standard(F2, 1))


def test_calibration_shift_step():
    M = MatrixMap.cyclic_shift(F2, 2)
    kappa = Calibration(M, Lattice.standard(F2, 2))
    v = VectorSeries((mono(0) + mono(3), mono(1)))
    assert kappa(M.apply(v)) == kappa(v) + 1


def test_calibration_compare():
    rep = calibration_compare(F2, 2, 0, 64)
    assert rep.ok, rep.failures
    assert rep.R == 1 and rep.R_formula == 2
    assert (rep.log_a, rep.log_b) == (0, Fraction(1, 2))
    rep3 = calibration_compare(F3, 3, -5, 30)
    assert rep3.ok and rep3.R == 2


@pytest.mark.parametrize("dstar", [2, 3])
def test_scaling_norm(dstar):
    w = scaling_norm(dstar)
    rng = np.random.default_rng(dstar)
    for _ in range(200):
        x = interleave(dstar, random_series(F2, -6, 40, rng, exact=True))
        if all(e.is_zero for e in x):
            continue
        assert weighted_norm_log(w, cyclic_shift_inv_apply(dstar, x)) \
            == weighted_norm_log(w, x) + Fraction(1, dstar)
