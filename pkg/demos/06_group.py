"""The group K x| <alpha-bar, tau>.

Elements are (translation, word).  Conjugating a translation by (0, w)
applies w to it, and alpha-bar does not commute with tau.
"""
from fractions import Fraction

import numpy as np

from nonarch import default_field, seq_gauss
from nonarch.group import GroupSession
from nonarch.laurent import Series

F = default_field(2)
S = GroupSession(F, seq_gauss(Fraction(3, 2)), prec=64)
X = Series.monomial(F, 1)

print("A T on X:", S.word_act("A T", X), "   T A on X:", S.word_act("T A", X))
print("(0,T)(1,e)(0,T)^-1 =", S.conj(S.elem(0, "T"), S.elem(1)))

rng = np.random.default_rng(0)
g, h = S.random(rng), S.random(rng)
print("g has word", repr(str(g.w)), "and translation known modulo X^%d" % g.z.prec)
print("g g^-1 =", S.mul(g, S.inv(g)))
c = S.conj(g, S.elem(h.z))
print("g (z,e) g^-1 keeps an empty word:", c.w.is_identity,
      "| translation is g.w(z):", c.z.congruent(S.word_act(g.w, h.z), S.prec))
