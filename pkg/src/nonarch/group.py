"""The semidirect product G = K x| <alpha-bar, tau> as a computational group.

Elements are pairs (z, w): a translation z in K and a freely reduced word w
in the generators.  Letters: ``A`` = alpha-bar, ``a`` = its inverse,
``T`` = tau, ``t`` = tau^-1.  Words are written outermost-first, so they act
on K right-to-left:  "A T" sends z to alpha-bar(tau(z)).

Multiplication is (z1, w1)(z2, w2) = (z1 + w1(z2), w1 w2).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import PrecisionError, UsageError
from .expseq import ExponentSeq
from .ffield import FieldDesc
from .laurent import Series, random_series
from .morphisms import bar_alpha_apply, bar_alpha_inv_apply

__all__ = ["AutWord", "GElem", "GroupSession"]

_LETTERS = "AaTt"
_INV = {"A": "a", "a": "A", "T": "t", "t": "T"}


@dataclass(frozen=True)
class AutWord:
    letters: tuple[str, ...] = ()

    def __post_init__(self):
        out: list[str] = []
        for ch in self.letters:
            if ch not in _LETTERS:
                raise UsageError(f"unknown generator {ch!r}; use A a T t")
            if out and out[-1] == _INV[ch]:
                out.pop()
            else:
                out.append(ch)
        object.__setattr__(self, "letters", tuple(out))

    @classmethod
    def parse(cls, text: str) -> "AutWord":
        return cls(tuple(text.replace(" ", "").replace(",", "")))

    def __mul__(self, other: "AutWord") -> "AutWord":
        return AutWord(self.letters + other.letters)

    def inverse(self) -> "AutWord":
        return AutWord(tuple(_INV[c] for c in reversed(self.letters)))

    def __len__(self):
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self):
        return " ".join(self.letters)


@dataclass(frozen=True)
class GElem:
    z: Series
    w: AutWord

    def to_json(self) -> dict:
        return {"z": self.z.to_json(), "w": str(self.w)}


class GroupSession:
    """Group arithmetic at working precision P.

    Translations are kept exact where possible; otherwise at P + guard.
    alpha-bar^-1 of an exact series that is not a polynomial preimage is
    evaluated modulo X^(P + guard).  Every translation must stay known at
    least modulo X^P; comparisons are made modulo X^P.
    """

    def __init__(self, field: FieldDesc, seq: ExponentSeq, prec: int = 64, guard: int = 16):
        if prec < 2 or guard < 0:
            raise UsageError("need prec >= 2 and guard >= 0")
        self.field = field
        self.seq = seq
        self.prec = prec
        self.guard = guard

    @property
    def identity(self) -> GElem:
        return GElem(Series.zero(self.field), AutWord())

    def elem(self, z: Series | int = 0, w: AutWord | str = "") -> GElem:
        if not isinstance(z, Series):
            z = Series.monomial(self.field, 0, z) if z else Series.zero(self.field)
        if isinstance(w, str):
            w = AutWord.parse(w)
        return GElem(self._settle(z), w)

    def _settle(self, z: Series) -> Series:
        if z.field != self.field:
            raise UsageError("translation from another field")
        if z.prec is None:
            return z
        if z.prec < self.prec:
            raise PrecisionError(f"translation known modulo X^{z.prec} < working precision {self.prec}")
        return z.truncate(min(z.prec, self.prec + self.guard))

    def word_act(self, w: AutWord | str, z: Series) -> Series:
        if isinstance(w, str):
            w = AutWord.parse(w)
        work = self.prec + self.guard
        for ch in reversed(w.letters):
            if ch == "A":
                z = bar_alpha_apply(self.seq, z)
            elif ch == "a":
                z = bar_alpha_inv_apply(self.seq, z, work)
            elif ch == "T":
                z = z.shift(1)
            else:
                z = z.shift(-1)
        return z

    def mul(self, g1: GElem, g2: GElem) -> GElem:
        return GElem(self._settle(g1.z + self.word_act(g1.w, g2.z)), g1.w * g2.w)

    def inv(self, g: GElem) -> GElem:
        wi = g.w.inverse()
        return GElem(self._settle(-self.word_act(wi, g.z)), wi)

    def conj(self, g: GElem, h: GElem) -> GElem:
        """g h g^-1."""
        return self.mul(self.mul(g, h), self.inv(g))

    def equal(self, g: GElem, h: GElem) -> bool:
        """Same word and translations agreeing modulo X^P."""
        return g.w == h.w and g.z.truncate(self.prec) == h.z.truncate(self.prec)

    def same_action(self, w1: AutWord, w2: AutWord, samples: Iterable[Series]) -> bool:
        """Semi-decision for w1 = w2 in Aut(K): compare actions on samples."""
        return all(self.word_act(w1, z).congruent(self.word_act(w2, z), self.prec)
                   for z in samples)

    def random(self, rng: np.random.Generator, max_len: int = 4, v_min: int = -3) -> GElem:
        z = random_series(self.field, v_min, self.prec + self.guard, rng)
        n = int(rng.integers(0, max_len + 1))
        w = AutWord(tuple(_LETTERS[int(i)] for i in rng.integers(0, 4, size=n)))
        return GElem(z, w)

    def from_json(self, obj: dict) -> GElem:
        try:
            return self.elem(Series.from_json(obj["z"], self.field), AutWord.parse(obj["w"]))
        except (KeyError, TypeError) as exc:
            raise UsageError(f"bad group element {obj!r}") from exc

