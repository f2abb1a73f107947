"""Finite fields and truncated Laurent series.

A series carries its absolute precision: ``% X^P`` means "known modulo X^P".
Sums keep the smaller precision, products lose what the valuations allow.
"""
from nonarch import default_field, parse_series
from nonarch.laurent import s_abs

F4 = default_field(4)
y = F4.elem([0, 1])
print("F_4 with modulus", F4.modulus, ": y^2 =", (y * y).coeffs, ", y^3 =", (y ** 3).coeffs)

F2 = default_field(2)
a = parse_series("X^-1 + 1 + X^2 % X^8", F2)
b = parse_series("1 + X % X^6", F2)
print("a       =", a)
print("b       =", b)
print("a + b   =", a + b)
print("a * b   =", a * b)
print("1 / b   =", b.inverse())
print("|a|     =", s_abs(a).value)

# exact zero versus "zero as far as we know"
z = parse_series("X^3 % X^6", F2) - parse_series("X^3 % X^5", F2)
print("difference of two truncations of X^3:", z, "(zero-flagged:", z.is_zero and not z.exact, ")")
