"""Finite fields F_q = F_p[Y]/(m(Y)).

Elements are handled in two forms.  :class:`FqElem` is the public value
type (a coefficient vector over F_p, low degree first).  Internally the
series code works with *codes*: the integer ``sum(c_i * p**i)`` in
``range(q)``, for which :class:`FieldDesc` provides scalar and vectorized
arithmetic.  The constant ``c`` of the prime field always has code ``c``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import FieldZeroDivision, UsageError

__all__ = [
    "DEFAULT_MODULI",
    "FieldDesc",
    "FqElem",
    "default_field",
    "fq_arith",
    "fq_make",
    "is_irreducible",
]

# low-to-high coefficients
DEFAULT_MODULI: dict[int, tuple[int, ...]] = {
    2: (0, 1),
    3: (0, 1),
    4: (1, 1, 1),
    5: (0, 1),
    7: (0, 1),
    8: (1, 1, 0, 1),
    9: (1, 0, 1),
}

_TABLE_LIMIT = 256
_DESK_LIMIT = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _trim(poly: list[int]) -> list[int]:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a by the monic polynomial b over F_p."""
    r = [x % p for x in a]
    db = len(b) - 1
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c:
            off = k - db
            for i, bi in enumerate(b):
                r[off + i] = (r[off + i] - c * bi) % p
    return _trim(r[:db])


def is_irreducible(p: int, modulus: Sequence[int]) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    m = len(modulus) - 1
    if m <= 1:
        return m == 1
    if modulus[0] % p == 0:
        return False
    for deg in range(1, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            if not _poly_mod(modulus, list(tail) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class FieldDesc:
    """The field F_p[Y]/(modulus) with q = p**m elements."""

    p: int
    m: int
    modulus: tuple[int, ...]
    _check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "modulus", tuple(int(c) for c in self.modulus))
        if not self._check:
            return
        if not _is_prime(self.p):
            raise UsageError(f"characteristic {self.p} is not prime")
        if self.m < 1:
            raise UsageError("extension degree must be >= 1")
        if len(self.modulus) != self.m + 1:
            raise UsageError(f"modulus needs {self.m + 1} coefficients, got {len(self.modulus)}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise UsageError("modulus coefficients must lie in [0, p)")
        if self.modulus[-1] != 1:
            raise UsageError("modulus must be monic")
        if self.p ** self.m > _DESK_LIMIT:
            raise UsageError(f"q = {self.p}**{self.m} exceeds the desk-scale limit 2**16")
        if not is_irreducible(self.p, self.modulus):
            raise UsageError(f"modulus {list(self.modulus)} is reducible over F_{self.p}")

    # -- construction / serialization -------------------------------------

    @classmethod
    def from_json(cls, obj: dict) -> "FieldDesc":
        try:
            return cls(int(obj["p"]), int(obj["m"]), tuple(obj["modulus"]))
        except (KeyError, TypeError) as exc:
            raise UsageError(f"bad FieldDesc JSON: {obj!r}") from exc

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @property
    def q(self) -> int:
        return self.p ** self.m

    def __str__(self):
        return f"F_{self.q}"

    # -- codes ----------------------------------------------------------------

    def encode(self, vec: Sequence[int]) -> int:
        if len(vec) != self.m:
            raise UsageError(f"expected {self.m} coefficients, got {len(vec)}")
        code = 0
        for c in reversed(vec):
            code = code * self.p + int(c) % self.p
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    @cached_property
    def _powers(self) -> np.ndarray:
        return self.p ** np.arange(self.m, dtype=np.int64)

    def decode_array(self, codes: Sequence[int]) -> np.ndarray:
        """Codes -> (n, m) int64 array of coefficient vectors."""
        arr = np.asarray(codes, dtype=np.int64).reshape(-1, 1)
        return (arr // self._powers) % self.p

    def encode_array(self, vecs: np.ndarray) -> np.ndarray:
        return (vecs % self.p) @ self._powers

    @cached_property
    def _reduction(self) -> np.ndarray:
        """Row k holds Y**k mod modulus, for k < 2m - 1."""
        rows = []
        for k in range(2 * self.m - 1):
            r = _poly_mod([0] * k + [1], self.modulus, self.p)
            rows.append(r + [0] * (self.m - len(r)))
        return np.array(rows, dtype=np.int64).reshape(2 * self.m - 1, self.m)

    def _mul_vec(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return tuple(int(c) for c in (np.array(prod, dtype=np.int64) @ self._reduction) % self.p)

    @cached_property
    def _tables(self):
        q = self.q
        vecs = [self.decode(c) for c in range(q)]
        add = [[self.encode([(x + y) for x, y in zip(vecs[a], vecs[b])]) for b in range(q)]
               for a in range(q)]
        mul = [[self.encode(self._mul_vec(vecs[a], vecs[b])) for b in range(q)] for a in range(q)]
        neg = [self.encode([-x for x in vecs[a]]) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            inv[a] = mul[a].index(1)
        return add, mul, neg, inv

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.q <= _TABLE_LIMIT:
            return self._tables[0][a][b]
        return self.encode([x + y for x, y in zip(self.decode(a), self.decode(b))])

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        if self.q <= _TABLE_LIMIT:
            return self._tables[2][a]
        return self.encode([-x for x in self.decode(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if self.q <= _TABLE_LIMIT:
            return self._tables[1][a][b]
        return self.encode(self._mul_vec(self.decode(a), self.decode(b)))

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldZeroDivision(f"inverse of 0 in {self}")
        if self.m == 1:
            return pow(a, -1, self.p)
        if self.q <= _TABLE_LIMIT:
            return self._tables[3][a]
        # a**(q-2) by square and multiply
        result, base, e = 1, a, self.q - 2
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- vectorized helpers used by the series kernels ------------------------

    def add_codes(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return (a + b) % self.p
        return self.encode_array(self.decode_array(a) + self.decode_array(b))

    def neg_codes(self, a: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return (-a) % self.p
        return self.encode_array(-self.decode_array(a))

    def scale_codes(self, c: int, a: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return (c * a) % self.p
        if self.q <= _TABLE_LIMIT:
            row = np.asarray(self._tables[1][c], dtype=np.int64)
            return row[a]
        return np.array([self.mul(c, int(x)) for x in a], dtype=np.int64)

    def conv_codes(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product of two code polynomials (full length len(a)+len(b)-1)."""
        if self.m == 1:
            return np.convolve(a, b) % self.p
        av, bv = self.decode_array(a), self.decode_array(b)
        out = np.zeros((len(a) + len(b) - 1, 2 * self.m - 1), dtype=np.int64)
        for i in range(self.m):
            for k in range(self.m):
                out[:, i + k] += np.convolve(av[:, i], bv[:, k])
        out %= self.p
        return self.encode_array((out @ self._reduction) % self.p)

    # -- element helpers ------------------------------------------------------

    def elem(self, ints: Sequence[int] | int) -> "FqElem":
        if isinstance(ints, int):
            ints = [ints] + [0] * (self.m - 1)
        return fq_make(self, ints)

    def from_code(self, code: int) -> "FqElem":
        return FqElem(self, self.decode(code))

    def elements(self) -> Iterable["FqElem"]:
        return (self.from_code(c) for c in range(self.q))


def default_field(q: int, modulus: Sequence[int] | None = None) -> FieldDesc:
    """FieldDesc for F_q, with a shipped modulus or the first irreducible one."""
    p = None
    for cand in range(2, q + 1):
        if q % cand == 0:
            p = cand
            break
    if p is None or not _is_prime(p):
        raise UsageError(f"q = {q} is not a prime power")
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise UsageError(f"q = {q} is not a prime power")
    if modulus is not None:
        return FieldDesc(p, m, tuple(modulus))
    if q in DEFAULT_MODULI:
        return FieldDesc(p, m, DEFAULT_MODULI[q])
    if m == 1:
        return FieldDesc(p, 1, (0, 1))
    if q > _DESK_LIMIT:
        raise UsageError(f"q = {q} exceeds the desk-scale limit 2**16")
    for tail in itertools.product(range(p), repeat=m):
        cand = tuple(reversed(tail)) + (1,)
        if is_irreducible(p, cand):
            return FieldDesc(p, m, cand)
    raise AssertionError("irreducible polynomials exist in every degree")


@dataclass(frozen=True)
class FqElem:
    """An element of F_q as a reduced coefficient vector (low degree first)."""

    desc: FieldDesc
    coeffs: tuple[int, ...]

    @property
    def code(self) -> int:
        return self.desc.encode(self.coeffs)

    def _other(self, other) -> "FqElem":
        if isinstance(other, int):
            return self.desc.elem(other)
        if not isinstance(other, FqElem):
            return NotImplemented
        if other.desc != self.desc:
            raise UsageError(f"mixed fields {self.desc} and {other.desc}")
        return other

    def __add__(self, other):
        other = self._other(other)
        return self.desc.from_code(self.desc.add(self.code, other.code))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        return self.desc.from_code(self.desc.sub(self.code, other.code))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        other = self._other(other)
        return self.desc.from_code(self.desc.mul(self.code, other.code))

    __rmul__ = __mul__

    def __neg__(self):
        return self.desc.from_code(self.desc.neg(self.code))

    def inverse(self) -> "FqElem":
        return self.desc.from_code(self.desc.inv(self.code))

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.desc.elem(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.desc.elem(other)
        if not isinstance(other, FqElem):
            return NotImplemented
        return self.desc == other.desc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.desc, self.coeffs))

    def __repr__(self):
        if self.desc.m == 1:
            return f"FqElem({self.coeffs[0]} in {self.desc})"
        return f"FqElem({list(self.coeffs)} in {self.desc})"

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def fq_make(desc: FieldDesc, ints: Sequence[int]) -> FqElem:
    """Reduce ``ints`` mod p into an element of ``desc``."""
    if len(ints) != desc.m:
        raise UsageError(f"expected {desc.m} coefficients, got {len(ints)}")
    return FqElem(desc, tuple(int(c) % desc.p for c in ints))


def fq_arith(op: str, a: FqElem, b: FqElem | None = None) -> FqElem:
    """Dispatch one of add|sub|mul|inv|neg."""
    if op in ("inv", "neg"):
        if b is not None:
            raise UsageError(f"{op} is unary")
        return a.inverse() if op == "inv" else -a
    if b is None:
        raise UsageError(f"{op} needs two operands")
    if a.desc != b.desc:
        raise UsageError(f"mixed fields {a.desc} and {b.desc}")
    try:
        return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__}[op](b)
    except KeyError:
        raise UsageError(f"unknown operation {op!r}") from None
