"""Truncated Laurent series over F_q: the local field K = F_q((X)).

A :class:`Series` is known modulo ``X**prec`` (absolute precision).  When
``prec`` is ``None`` the value is exact, i.e. a Laurent polynomial.  A
series whose known coefficients all vanish is *zero-flagged*: it is
indistinguishable from 0 at its precision.  Exact zero is the zero-flagged
series with ``prec=None``.

Coefficients are stored as field codes (see :mod:`nonarch.ffield`) in a
dense tuple starting at the valuation, with leading and trailing zeros
stripped.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import PrecisionError, UsageError
from .ffield import FieldDesc, FqElem, default_field

__all__ = [
    "AbsValue",
    "DEFAULT_BUDGET",
    "Series",
    "parse_series",
    "s_abs",
    "s_arith",
    "s_enumerate",
    "s_split",
]

DEFAULT_BUDGET = 1 << 20


def _pmin(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _padd(a: int | None, b: int | None) -> int | None:
    if a is None or b is None:
        return None
    return a + b


@dataclass(frozen=True)
class AbsValue:
    """|z| = q**log_q, exact or (for zero-flagged input) an upper bound."""

    q: int
    log_q: int | None  # None encodes |z| = 0
    exact: bool

    @property
    def value(self) -> Fraction:
        if self.log_q is None:
            return Fraction(0)
        return Fraction(self.q) ** self.log_q

    def __str__(self):
        tag = "" if self.exact else " (bound)"
        return f"{self.value}{tag}"


class Series:
    """An element of F_q((X)) known modulo X**prec."""

    __slots__ = ("field", "val", "coeffs", "prec")

    field: FieldDesc
    val: int | None
    coeffs: tuple[int, ...]
    prec: int | None

    def __init__(self, field: FieldDesc, val: int | None, coeffs: Sequence = (),
                 prec: int | None = None):
        codes = [_to_code(field, c) for c in coeffs]
        self._set(*_normalize(field, 0 if val is None else val, codes, prec))

    def _set(self, field, val, coeffs, prec):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    @classmethod
    def _raw(cls, field: FieldDesc, start: int, codes, prec: int | None) -> "Series":
        """Construct from codes without converting them; normalizes."""
        obj = cls.__new__(cls)
        obj._set(*_normalize(field, start, codes, prec))
        return obj

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldDesc, prec: int | None = None) -> "Series":
        return cls._raw(field, 0, (), prec)

    @classmethod
    def one(cls, field: FieldDesc, prec: int | None = None) -> "Series":
        return cls._raw(field, 0, (1,), prec)

    @classmethod
    def monomial(cls, field: FieldDesc, k: int, c=1, prec: int | None = None) -> "Series":
        return cls._raw(field, k, (_to_code(field, c),), prec)

    @classmethod
    def from_dict(cls, field: FieldDesc, terms: dict[int, object],
                  prec: int | None = None) -> "Series":
        if not terms:
            return cls.zero(field, prec)
        lo, hi = min(terms), max(terms)
        codes = [0] * (hi - lo + 1)
        for k, c in terms.items():
            codes[k - lo] = _to_code(field, c)
        return cls._raw(field, lo, codes, prec)

    # -- basic queries --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True for exact zero and for zero-flagged series."""
        return self.val is None

    @property
    def exact(self) -> bool:
        return self.prec is None

    @property
    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    @property
    def degree(self) -> int | None:
        """Largest exponent carrying a nonzero coefficient."""
        if self.val is None:
            return None
        return self.val + len(self.coeffs) - 1

    @property
    def valuation(self) -> int:
        """Exact valuation; refuses zero-flagged input."""
        if self.val is None:
            if self.prec is None:
                raise PrecisionError("valuation of exact zero is infinite")
            raise PrecisionError(f"valuation not determined: zero modulo X^{self.prec}")
        return self.val

    def coeff_code(self, k: int) -> int:
        if self.prec is not None and k >= self.prec:
            raise PrecisionError(f"coefficient of X^{k} beyond precision X^{self.prec}")
        if self.val is None or k < self.val or k > self.degree:
            return 0
        return self.coeffs[k - self.val]

    def coeff(self, k: int) -> FqElem:
        return self.field.from_code(self.coeff_code(k))

    def terms(self) -> Iterator[tuple[int, int]]:
        """Nonzero (exponent, code) pairs."""
        if self.val is None:
            return
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.val + i, c

    def truncate(self, prec: int | None) -> "Series":
        """Forget everything at and beyond X**prec (never raises precision)."""
        new = _pmin(self.prec, prec)
        if new == self.prec:
            return self
        return Series._raw(self.field, self.val or 0, self.coeffs, new)

    def lift_exact(self) -> "Series":
        """The Laurent polynomial representative, taken as exact."""
        return Series._raw(self.field, self.val or 0, self.coeffs, None)

    def congruent(self, other: "Series", prec: int | None = None) -> bool:
        """Equality modulo the smaller of the two precisions (and ``prec``)."""
        _same_field(self, other)
        p = _pmin(_pmin(self.prec, other.prec), prec)
        return (self - other).truncate(p).is_zero

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            _same_field(self, other)
            return other
        if isinstance(other, (int, FqElem)):
            return Series.monomial(self.field, 0, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, other)

    __radd__ = __add__

    def __neg__(self):
        if self.val is None:
            return self
        return Series._raw(self.field, self.val,
                           self.field.neg_codes(np.asarray(self.coeffs, dtype=np.int64)), self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _add(other, -self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, other)

    __rmul__ = __mul__

    def inverse(self, prec: int | None = None) -> "Series":
        """Multiplicative inverse.

        Output precision is ``P - 2v`` for input known modulo ``X**P`` with
        valuation ``v``.  An exact monomial inverts exactly; any other
        exact input needs an explicit ``prec`` to truncate at first.
        """
        a = self
        if a.val is None:
            raise PrecisionError("cannot invert a zero-flagged series")
        if a.prec is None:
            if a.is_monomial:
                f = a.field
                return Series._raw(f, -a.val, (f.inv(a.coeffs[0]),), None)
            if prec is None:
                raise PrecisionError("inverse of an exact non-monomial needs a precision")
            a = a.truncate(prec)
            if a.val is None or a.val >= a.prec:
                raise PrecisionError("truncation left nothing to invert")
        v, P = a.val, a.prec
        n = P - v  # unit part known modulo X**n
        unit = np.zeros(n, dtype=np.int64)
        k = min(n, len(a.coeffs))
        unit[:k] = a.coeffs[:k]
        g = _unit_inverse(a.field, unit, n)
        return Series._raw(a.field, -v, g, P - 2 * v)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, other.inverse())

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _mul(other, self.inverse())

    def shift(self, k: int) -> "Series":
        """Multiplication by X**k (exact, moves the precision too)."""
        return Series._raw(self.field, (self.val or 0) + k, self.coeffs, _padd(self.prec, k))

    # -- comparisons, hashing, printing ---------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.field == other.field and self.val == other.val
                and self.coeffs == other.coeffs and self.prec == other.prec)

    def __hash__(self):
        return hash((self.field, self.val, self.coeffs, self.prec))

    def __repr__(self):
        return f"Series({self}, q={self.field.q})"

    def __str__(self):
        return format_series(self)

    def __abs__(self):
        return s_abs(self).value

    # -- JSON -----------------------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {"field": self.field.to_json()}
        if self.val is None:
            out["zero"] = True
        else:
            out["val"] = self.val
            out["coeffs"] = [list(self.field.decode(c)) for c in self.coeffs]
        out["prec"] = self.prec
        return out

    @classmethod
    def from_json(cls, obj: dict, field: FieldDesc | None = None) -> "Series":
        try:
            f = FieldDesc.from_json(obj["field"]) if "field" in obj else field
            if f is None:
                raise UsageError("Series JSON lacks a field")
            prec = obj.get("prec")
            if obj.get("zero"):
                return cls.zero(f, prec)
            return cls(f, int(obj["val"]), [tuple(c) for c in obj["coeffs"]], prec)
        except (KeyError, TypeError) as exc:
            raise UsageError(f"bad Series JSON: {obj!r}") from exc


def _to_code(field: FieldDesc, c) -> int:
    if isinstance(c, FqElem):
        if c.desc != field:
            raise UsageError(f"coefficient from {c.desc}, expected {field}")
        return c.code
    if isinstance(c, (int, np.integer)):
        return int(c) % field.p
    if isinstance(c, (list, tuple)):
        return field.encode(c)
    raise UsageError(f"cannot read {c!r} as an element of {field}")


def _normalize(field, start, codes, prec):
    codes = [int(c) for c in codes]
    if prec is not None:
        codes = codes[:max(0, prec - start)]
    lo = 0
    while lo < len(codes) and codes[lo] == 0:
        lo += 1
    hi = len(codes)
    while hi > lo and codes[hi - 1] == 0:
        hi -= 1
    if lo == hi:
        return field, None, (), prec
    return field, start + lo, tuple(codes[lo:hi]), prec


def _same_field(a: Series, b: Series):
    if a.field != b.field:
        raise UsageError(f"mixed fields {a.field} and {b.field}")


def _add(a: Series, b: Series) -> Series:
    f = a.field
    prec = _pmin(a.prec, b.prec)
    if a.val is None:
        return b.truncate(prec) if b.val is not None else Series.zero(f, prec)
    if b.val is None:
        return a.truncate(prec)
    lo = min(a.val, b.val)
    hi = max(a.degree, b.degree)
    if prec is not None:
        hi = min(hi, prec - 1)
    if hi < lo:
        return Series.zero(f, prec)
    out = np.zeros(hi - lo + 1, dtype=np.int64)
    for s in (a, b):
        n = min(len(s.coeffs), hi - s.val + 1)
        if n > 0:
            seg = np.asarray(s.coeffs[:n], dtype=np.int64)
            i = s.val - lo
            out[i:i + n] = f.add_codes(out[i:i + n], seg)
    return Series._raw(f, lo, out, prec)


def _mul(a: Series, b: Series) -> Series:
    f = a.field
    # exact zero annihilates, whatever the other precision
    if (a.val is None and a.prec is None) or (b.val is None and b.prec is None):
        return Series.zero(f)
    va = a.val if a.val is not None else a.prec
    vb = b.val if b.val is not None else b.prec
    prec = _pmin(_padd(a.prec, vb), _padd(b.prec, va))
    if a.val is None or b.val is None:
        return Series.zero(f, prec)
    if a.is_monomial:
        c, s, vs = a.coeffs[0], b, a.val
    elif b.is_monomial:
        c, s, vs = b.coeffs[0], a, b.val
    else:
        c = None
    if c is not None:
        coeffs = s.coeffs
        if prec is not None:
            coeffs = coeffs[:max(0, prec - s.val - vs)]
        scaled = f.scale_codes(c, np.asarray(coeffs, dtype=np.int64)) if c != 1 else coeffs
        return Series._raw(f, s.val + vs, scaled, prec)
    ca, cb = a.coeffs, b.coeffs
    if prec is not None:
        n = prec - a.val - b.val
        ca, cb = ca[:n], cb[:n]
    prod = f.conv_codes(np.asarray(ca, dtype=np.int64), np.asarray(cb, dtype=np.int64))
    return Series._raw(f, a.val + b.val, prod, prec)


def _unit_inverse(f: FieldDesc, u: np.ndarray, n: int) -> np.ndarray:
    """Inverse of a power-series unit modulo X**n by Newton iteration."""
    g = np.array([f.inv(int(u[0]))], dtype=np.int64)
    k = 1
    while k < n:
        k = min(2 * k, n)
        # g <- g * (2 - u g) = g + g * (1 - u g)
        ug = f.conv_codes(u[:k], g)[:k]
        err = f.neg_codes(ug)
        err[0] = f.add(int(err[0]), 1)
        corr = f.conv_codes(g, err)[:k]
        gk = np.zeros(k, dtype=np.int64)
        gk[:len(g)] = g
        g = f.add_codes(gk, corr)
    return g[:n]


# -- module-level operations --------------------------------------------------

def s_abs(z: Series) -> AbsValue:
    """|z| = q**(-val); zero-flagged input yields the bound q**(-prec)."""
    q = z.field.q
    if z.val is not None:
        return AbsValue(q, -z.val, True)
    if z.prec is None:
        return AbsValue(q, None, True)
    return AbsValue(q, -z.prec, False)


def s_arith(op: str, a: Series, b: Series | None = None) -> Series:
    """Dispatch add|sub|mul|inv on series."""
    if op == "inv":
        if b is not None:
            raise UsageError("inv is unary")
        return a.inverse()
    if b is None:
        raise UsageError(f"{op} needs two operands")
    _same_field(a, b)
    try:
        return {"add": _add, "sub": lambda x, y: _add(x, -y), "mul": _mul}[op](a, b)
    except KeyError:
        raise UsageError(f"unknown operation {op!r}") from None


def s_split(z: Series) -> tuple[Series, Series]:
    """(principal part, integral part); both keep z's precision."""
    f = z.field
    if z.val is None:
        return Series.zero(f, z.prec), Series.zero(f, z.prec)
    if z.val >= 0:
        return Series.zero(f, z.prec), z
    cut = -z.val
    principal = Series._raw(f, z.val, z.coeffs[:cut], z.prec)
    integral = Series._raw(f, 0, z.coeffs[cut:], z.prec)
    return principal, integral


def s_enumerate(field: FieldDesc, v_min: int, P: int,
                budget: int = DEFAULT_BUDGET) -> Iterator[Series]:
    """All residues of X**v_min * O modulo X**P, each exactly once."""
    if v_min >= P:
        raise UsageError("need v_min < P")
    count = field.q ** (P - v_min)
    if count > budget:
        raise UsageError(f"{count} residues exceed the enumeration budget {budget}")
    for codes in itertools.product(range(field.q), repeat=P - v_min):
        yield Series._raw(field, v_min, codes, P)


def random_series(field: FieldDesc, v_min: int, P: int, rng: np.random.Generator,
                  exact: bool = False) -> Series:
    """Uniform residue of X**v_min * O modulo X**P."""
    codes = rng.integers(0, field.q, size=max(0, P - v_min))
    return Series._raw(field, v_min, codes, None if exact else P)


# -- text form ----------------------------------------------------------------

def _fmt_coeff(field: FieldDesc, code: int) -> str:
    if field.m == 1 or code < field.p:
        return str(code)
    return "[" + ",".join(str(c) for c in field.decode(code)) + "]"


def format_series(z: Series) -> str:
    """Text form ``X^-1 + 1 + X^2 % X^8`` (no ``%`` part when exact)."""
    parts = []
    for k, c in z.terms():
        mono = "1" if k == 0 else ("X" if k == 1 else f"X^{k}")
        if c == 1:
            parts.append(mono)
        elif k == 0:
            parts.append(_fmt_coeff(z.field, c))
        else:
            parts.append(f"{_fmt_coeff(z.field, c)}*{mono}")
    body = " + ".join(parts) if parts else "0"
    if z.prec is not None:
        body += f" % X^{z.prec}"
    return body


_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<coef>\d+|\[[\d\s,]*\])\s*(?P<star>\*)?\s*)?"
    r"(?P<x>X(?:\s*\^\s*(?P<exp>-?\d+))?)?\s*"
)


def parse_series(text: str, field: FieldDesc | int) -> Series:
    """Parse the CLI text form, e.g. ``"X^-1+1+X^2 % X^8"``.

    Coefficients are integers (read in the prime field) or bracketed
    F_p-vectors such as ``[0,1]*X``.  Without ``% X^P`` the value is exact.
    """
    if isinstance(field, int):
        field = default_field(field)
    body, _, tail = text.partition("%")
    prec = None
    if tail.strip():
        m = re.fullmatch(r"\s*X\s*\^\s*(-?\d+)\s*", tail)
        if not m:
            raise UsageError(f"bad precision suffix {tail!r}")
        prec = int(m.group(1))
    terms: dict[int, int] = {}
    pos, body = 0, body.strip()
    if body in ("", "0"):
        return Series.zero(field, prec)
    first = True
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos or (m.group("coef") is None and m.group("x") is None):
            raise UsageError(f"cannot parse series {text!r} at {body[pos:]!r}")
        if not first and m.group("sign") is None:
            raise UsageError(f"missing '+' in {text!r}")
        first = False
        pos = m.end()
        coef = m.group("coef")
        if coef is None:
            code = 1
        elif coef.startswith("["):
            code = field.encode([int(t) for t in coef.strip("[]").split(",") if t.strip()])
        else:
            code = int(coef) % field.p
        if m.group("sign") == "-":
            code = field.neg(code)
        if m.group("x") is None:
            k = 0
        else:
            k = int(m.group("exp")) if m.group("exp") is not None else 1
        terms[k] = field.add(terms.get(k, 0), code)
    lo, hi = min(terms), max(terms)
    codes = [0] * (hi - lo + 1)
    for k, c in terms.items():
        codes[k - lo] = c
    return Series._raw(field, lo, codes, prec)
