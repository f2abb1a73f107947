"""Hoelder exponents, C^n certificates and non-C^(n+1) witnesses.

For l_j = 1 + floor(j*theta), |beta(y) - beta(x)| = |y - x|^theta up to the
constants q^-1 and q; with n < theta < n + 1 that makes beta (and alpha)
C^n but not C^(n+1).
"""
from fractions import Fraction

from nonarch import SeriesMap, default_field, seq_gauss
from nonarch.calculus import cn_certificate, divided_diff, holder_scan, not_cn1_witness
from nonarch.laurent import parse_series

F = default_field(2)
for n in (1, 2, 3):
    theta = n + Fraction(1, 2)
    beta = SeriesMap.beta(seq_gauss(theta))
    rep = holder_scan(beta, F, 0, 64)
    print(f"theta = {theta}: fitted slope {rep.theta_hat:.3f}, certificate {rep.cert.to_json(2)}")
    print(f"   C^{n}:", cn_certificate(beta, n, rep).to_json(2))
    print(f"   not C^{n + 1}:", not_cn1_witness(beta, n, rep).to_json(2))
    print(f"   C^{n + 1}:", cn_certificate(beta, n + 1, rep).to_json(2))

beta = SeriesMap.beta(seq_gauss(Fraction(3, 2)))
pts = [parse_series(s, F) for s in ("X^2", "0", "1 + X")]
print("beta<1>(X^2, 0) =", divided_diff(beta, pts[:2]))
print("beta<2>(X^2, 0, 1 + X) =", divided_diff(beta, pts, work=16))
