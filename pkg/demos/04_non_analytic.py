"""A smooth automorphism that is not analytic.

With l_j = j^2 + 1, |beta(z)| / |z|^n -> 0 for every n, while beta is
injective: no convergent power series can do that, but beta is C^n for
every n with |beta(z)| <= q^(kn) |z|^n.
"""
from nonarch import SeriesMap, default_field, seq_superlinear
from nonarch.calculus import cn_certificate, holder_scan, superpoly_decay

F = default_field(2)
beta = SeriesMap.beta(seq_superlinear())
rep = superpoly_decay(beta, F, 8, 0, 128)
print("n * v - l_v at v = 10:", [rep.exponent(n, 10) for n in range(9)])
print("eventual decay from v0(n):", rep.v0)
print("threshold k(n):", rep.k)
print("decays for every n:", rep.verdict, "| injective:", rep.injective,
      "| non-analytic:", rep.obstruction)

scan = holder_scan(beta, F, 0, 64)
for n in (1, 4, 8):
    print(f"C^{n}:", cn_certificate(beta, n, scan).to_json(2))
