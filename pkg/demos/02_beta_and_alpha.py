"""The coefficient-moving map beta and the automorphism alpha = id + beta.

beta sends the coefficient of X^j to X^(l_j).  alpha is inverted by a
forward recursion over the coefficients; alpha-bar extends it to all of K
by fixing the principal part.
"""
from fractions import Fraction

from nonarch import SeriesMap, default_field, parse_series, seq_gauss, seq_superlinear

F = default_field(2)
gauss = seq_gauss(Fraction(3, 2))
square = seq_superlinear()
print("gauss(3/2):", gauss.prefix(10))
print("square    :", square.prefix(10))

z = parse_series("1 + X + X^2", F)
print("beta_square(1 + X + X^2) =", SeriesMap.beta(square)(z))

alpha = SeriesMap.alpha(gauss)
w = parse_series("X % X^8", F)
x = alpha.inverse()(w)
print("alpha^-1(X % X^8) =", x, "  and alpha of that =", alpha(x))

bar = SeriesMap.bar_alpha(gauss)
print("alpha-bar(X^-1 + 1) =", bar(parse_series("X^-1 + 1", F)))
