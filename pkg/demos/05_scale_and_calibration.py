"""Scale and calibration, in one and in several dimensions.

tau(z) = X z is contractive with scale 1; its inverse has scale q.  The
interleaving chart turns K into K^d* and tau into a cyclic shift, whose
inverse scales a suitably weighted norm by exactly q^(1/d*).
"""
from nonarch import SeriesMap, default_field, interleave, parse_series
from nonarch.morphisms import cyclic_shift_matrix_apply, tau_apply
from nonarch.willis import (Calibration, Lattice, MatrixMap, calibration_compare, scale,
                            scaling_norm)

for q in (2, 3, 5):
    F = default_field(q)
    O = Lattice.standard(F, 1)
    print(f"q = {q}: s(tau) = {scale(SeriesMap.tau(), O)}, s(tau^-1) = {scale(SeriesMap.tau_inv(), O)}")

F = default_field(2)
z = parse_series("1 + X + X^3 % X^9", F)
print("interleave(tau z)      =", interleave(2, tau_apply(z)))
print("shift(interleave z)    =", cyclic_shift_matrix_apply(2, interleave(2, z)))

for d in (2, 3):
    M = MatrixMap.cyclic_shift(F, d)
    print(f"d* = {d}: s(M^-1) = {scale(M.inverse(), Lattice.standard(F, d))}, "
          f"norm weights {[str(w) for w in scaling_norm(d)]}")

kappa = Calibration(SeriesMap.tau(), Lattice.standard(F, 1))
print("kappa(X^-3 + X) =", kappa(parse_series("X^-3 + X", F)))
rep = calibration_compare(F, 2, 0, 64)
print("chart comparison:", {k: v for k, v in rep.to_json().items() if k not in ("rows", "failures")})
