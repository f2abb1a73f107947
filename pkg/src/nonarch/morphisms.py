"""The maps: beta, alpha = id + beta, its inverse, their extensions to K,
the shift tau, the interleaving chart K -> K^d and the cyclic-shift matrix.

Every map is additive.  Maps are described by immutable
:class:`SeriesMap` descriptors and evaluated by calling them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, PrecisionError, UsageError
from .expseq import ExponentSeq
from .ffield import FieldDesc
from .laurent import Series, s_split

__all__ = [
    "SeriesMap",
    "VectorSeries",
    "alpha_apply",
    "alpha_inv_apply",
    "bar_alpha_apply",
    "bar_alpha_inv_apply",
    "bar_beta_apply",
    "beta_apply",
    "cyclic_shift_inv_apply",
    "cyclic_shift_matrix_apply",
    "deinterleave",
    "interleave",
    "tau_apply",
    "tau_inv_apply",
]


def _require_integral(z: Series, name: str):
    if z.val is not None and z.val < 0:
        raise DomainError(f"{name} is defined on O only; got valuation {z.val}")
    if z.val is None and z.prec is not None and z.prec < 0:
        raise PrecisionError(f"{name}: input zero only modulo X^{z.prec}, membership in O unknown")


def beta_apply(seq: ExponentSeq, z: Series) -> Series:
    """Move the coefficient of X^j to X^{l_j}.

    Input known modulo X^P gives output known modulo X^P (l_j >= j).
    """
    _require_integral(z, "beta")
    f = z.field
    if z.val is None:
        return Series.zero(f, z.prec)
    top = z.degree
    if z.prec is not None:
        # only exponents l_j < P survive; l_j > j, so j < P suffices
        top = min(top, z.prec - 1)
    ell = seq.prefix(top + 1)
    last = ell[top]
    if z.prec is not None:
        last = min(last, z.prec - 1)
    out = [0] * (last + 1)
    for j, c in z.terms():
        if j > top:
            break
        e = ell[j]
        if e <= last:
            out[e] = c
    return Series._raw(f, 0, out, z.prec)


def alpha_apply(seq: ExponentSeq, z: Series) -> Series:
    """alpha(z) = z + beta(z) on O."""
    _require_integral(z, "alpha")
    return z + beta_apply(seq, z)


def alpha_inv_apply(seq: ExponentSeq, w: Series, prec: int | None = None) -> Series:
    """Solve alpha(z) = w coefficient by coefficient.

    a_i = b_i when i is not a value of the sequence, and a_i = b_i - a_j
    when i = l_j; since j < l_j the recursion runs upward in i.  Input
    known modulo X^P gives output known modulo X^P.  For an exact
    polynomial w the result is exact when it is itself a polynomial;
    otherwise ``prec`` must say where to stop.
    """
    _require_integral(w, "alpha^-1")
    f = w.field
    if w.val is None:
        return Series.zero(f, w.prec)
    P = w.prec
    if P is None:
        deg = w.degree
        solved = _alpha_inv_codes(seq, w, deg + 1)
        # the tail vanishes iff no nonzero a_j gets pushed beyond deg
        tail_free = all(c == 0 or seq[j] <= deg for j, c in enumerate(solved))
        if tail_free:
            return Series._raw(f, 0, solved, None)
        if prec is None:
            raise PrecisionError("alpha^-1 of this polynomial is an infinite series; pass prec")
        P = prec
    elif prec is not None:
        P = min(P, prec)
    return Series._raw(f, 0, _alpha_inv_codes(seq, w, P), P)


def _alpha_inv_codes(seq: ExponentSeq, w: Series, n: int) -> list[int]:
    f = w.field
    a = [0] * max(n, 0)
    # walk i upward; j tracks the next candidate preimage of i
    # l_j > j, so every l_j < n has j < n
    k = min(n, seq.cap)
    ell = seq.prefix(k)
    if k < n and (not ell or ell[-1] < n - 1):
        raise UsageError(f"sequence table too short to invert modulo X^{n}")
    j = 0
    deg = w.degree
    for i in range(n):
        b = w.coeffs[i - w.val] if w.val <= i <= deg else 0
        while j < len(ell) and ell[j] < i:
            j += 1
        if j < len(ell) and ell[j] == i:
            a[i] = f.sub(b, a[j])
        else:
            a[i] = b
    return a


def bar_beta_apply(seq: ExponentSeq, z: Series) -> Series:
    """beta applied to the integral part; zero on the principal part."""
    _, integral = s_split(z)
    return beta_apply(seq, integral)


def bar_alpha_apply(seq: ExponentSeq, z: Series) -> Series:
    """Fix the principal part, apply alpha to the integral part."""
    principal, integral = s_split(z)
    return principal + alpha_apply(seq, integral)


def bar_alpha_inv_apply(seq: ExponentSeq, z: Series, prec: int | None = None) -> Series:
    principal, integral = s_split(z)
    return principal + alpha_inv_apply(seq, integral, prec)


def tau_apply(z: Series) -> Series:
    return z.shift(1)


def tau_inv_apply(z: Series) -> Series:
    return z.shift(-1)


# -- vectors and the interleaving chart ---------------------------------------

@dataclass(frozen=True)
class VectorSeries:
    """A vector in K^d."""

    entries: tuple[Series, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if not self.entries:
            raise UsageError("empty vector")
        f = self.entries[0].field
        if any(e.field != f for e in self.entries):
            raise UsageError("vector entries over different fields")

    @property
    def field(self) -> FieldDesc:
        return self.entries[0].field

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def prec(self) -> int | None:
        precs = [e.prec for e in self.entries if e.prec is not None]
        return min(precs) if precs else None

    def normalized(self) -> "VectorSeries":
        """All entries truncated to the common (smallest) precision."""
        p = self.prec
        return VectorSeries(tuple(e.truncate(p) for e in self.entries))

    def __getitem__(self, r: int) -> Series:
        return self.entries[r]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __add__(self, other: "VectorSeries") -> "VectorSeries":
        _same_dim(self, other)
        return VectorSeries(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "VectorSeries") -> "VectorSeries":
        _same_dim(self, other)
        return VectorSeries(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self):
        return VectorSeries(tuple(-a for a in self))

    def congruent(self, other: "VectorSeries") -> bool:
        _same_dim(self, other)
        return all(a.congruent(b) for a, b in zip(self, other))

    def __str__(self):
        return "(" + ", ".join(str(e) for e in self.entries) + ")"

    def to_json(self) -> list:
        return [e.to_json() for e in self.entries]


def _same_dim(a: VectorSeries, b: VectorSeries):
    if a.dim != b.dim:
        raise UsageError(f"dimension mismatch {a.dim} != {b.dim}")


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def interleave(dstar: int, z: Series) -> VectorSeries:
    """Component r collects a_{d*j + r} as the coefficient of X^j.

    Component r is known modulo X^ceil((P - r)/d*) when z is known
    modulo X^P.
    """
    if dstar < 1:
        raise UsageError("d* must be >= 1")
    f = z.field
    buckets: list[dict[int, int]] = [{} for _ in range(dstar)]
    for k, c in z.terms():
        j, r = divmod(k, dstar)
        buckets[r][j] = c
    out = []
    for r, terms in enumerate(buckets):
        prec = None if z.prec is None else _ceil_div(z.prec - r, dstar)
        if terms:
            lo, hi = min(terms), max(terms)
            codes = [0] * (hi - lo + 1)
            for j, c in terms.items():
                codes[j - lo] = c
            out.append(Series._raw(f, lo, codes, prec))
        else:
            out.append(Series.zero(f, prec))
    return VectorSeries(tuple(out))


def deinterleave(v: VectorSeries) -> Series:
    """Inverse of :func:`interleave`; precision is the largest P consistent
    with every component."""
    d = v.dim
    f = v.field
    terms: dict[int, int] = {}
    prec = None
    for r, comp in enumerate(v):
        for j, c in comp.terms():
            terms[d * j + r] = c
        if comp.prec is not None:
            # component r known for exponents d*j + r < d*prec_r + r
            bound = d * comp.prec + r
            prec = bound if prec is None else min(prec, bound)
    if not terms:
        return Series.zero(f, prec)
    lo, hi = min(terms), max(terms)
    codes = [0] * (hi - lo + 1)
    for k, c in terms.items():
        codes[k - lo] = c
    return Series._raw(f, lo, codes, prec)


def cyclic_shift_matrix_apply(dstar: int, v: VectorSeries) -> VectorSeries:
    """The conjugate of tau under the interleaving chart.

    (u_0, ..., u_{d*-1}) -> (X u_{d*-1}, u_0, ..., u_{d*-2}); for d* = 2 this
    is the matrix ((0, X), (1, 0)) acting on the column (u, v).
    """
    if v.dim != dstar:
        raise UsageError(f"expected {dstar} components, got {v.dim}")
    e = v.entries
    return VectorSeries((e[-1].shift(1),) + e[:-1])


def cyclic_shift_inv_apply(dstar: int, v: VectorSeries) -> VectorSeries:
    """Inverse of :func:`cyclic_shift_matrix_apply`."""
    if v.dim != dstar:
        raise UsageError(f"expected {dstar} components, got {v.dim}")
    e = v.entries
    return VectorSeries(e[1:] + (e[0].shift(-1),))


# -- descriptors ----------------------------------------------------------------

_SEQ_KINDS = ("beta", "alpha", "alpha_inv", "bar_beta", "bar_alpha", "bar_alpha_inv")
_INVERSES = {
    "alpha": "alpha_inv", "alpha_inv": "alpha",
    "bar_alpha": "bar_alpha_inv", "bar_alpha_inv": "bar_alpha",
    "tau": "tau_inv", "tau_inv": "tau", "identity": "identity",
}


@dataclass(frozen=True)
class SeriesMap:
    """Descriptor of an additive self-map of a ball in K.

    ``kind`` is one of beta, alpha, alpha_inv, bar_beta, bar_alpha,
    bar_alpha_inv, tau, tau_inv, scalar_mul, identity, sum, compose.
    ``compose`` applies its parts right to left, like function notation.
    """

    kind: str
    seq: ExponentSeq | None = None
    scalar: Series | None = None
    parts: tuple["SeriesMap", ...] = ()

    def __post_init__(self):
        if self.kind in _SEQ_KINDS and self.seq is None:
            raise UsageError(f"{self.kind} needs an exponent sequence")
        if self.kind == "scalar_mul" and self.scalar is None:
            raise UsageError("scalar_mul needs a scalar")
        if self.kind in ("sum", "compose") and not self.parts:
            raise UsageError(f"{self.kind} needs parts")
        known = _SEQ_KINDS + ("tau", "tau_inv", "scalar_mul", "identity", "sum", "compose")
        if self.kind not in known:
            raise UsageError(f"unknown map {self.kind!r}")

    # -- convenience constructors --
    @classmethod
    def beta(cls, seq): return cls("beta", seq)

    @classmethod
    def alpha(cls, seq): return cls("alpha", seq)

    @classmethod
    def alpha_inv(cls, seq): return cls("alpha_inv", seq)

    @classmethod
    def bar_alpha(cls, seq): return cls("bar_alpha", seq)

    @classmethod
    def bar_alpha_inv(cls, seq): return cls("bar_alpha_inv", seq)

    @classmethod
    def bar_beta(cls, seq): return cls("bar_beta", seq)

    @classmethod
    def tau(cls): return cls("tau")

    @classmethod
    def tau_inv(cls): return cls("tau_inv")

    @classmethod
    def identity(cls): return cls("identity")

    @classmethod
    def scalar_mul(cls, c: Series): return cls("scalar_mul", scalar=c)

    @classmethod
    def compose(cls, *maps): return cls("compose", parts=tuple(maps))

    @classmethod
    def sum(cls, *maps): return cls("sum", parts=tuple(maps))

    # -- properties --
    @property
    def domain_min_val(self) -> int | None:
        """Smallest valuation allowed in the domain (None: all of K)."""
        if self.kind in ("beta", "alpha", "alpha_inv"):
            return 0
        if self.kind == "compose":
            return self.parts[-1].domain_min_val
        if self.kind == "sum":
            vals = [p.domain_min_val for p in self.parts if p.domain_min_val is not None]
            return max(vals) if vals else None
        return None

    @property
    def injective(self) -> bool:
        if self.kind in ("sum",):
            return False
        if self.kind == "scalar_mul":
            return not self.scalar.is_zero
        if self.kind == "compose":
            return all(p.injective for p in self.parts)
        return self.kind != "bar_beta"

    @property
    def contractive(self) -> bool:
        """Declared contractive (only tau among the shipped maps)."""
        if self.kind == "tau":
            return True
        if self.kind == "scalar_mul":
            return self.scalar.val is not None and self.scalar.val > 0 and self.scalar.exact
        return False

    def inverse(self) -> "SeriesMap":
        if self.kind in _INVERSES:
            return SeriesMap(_INVERSES[self.kind], seq=self.seq)
        if self.kind == "scalar_mul":
            return SeriesMap.scalar_mul(self.scalar.inverse())
        if self.kind == "compose":
            return SeriesMap("compose", parts=tuple(p.inverse() for p in reversed(self.parts)))
        raise UsageError(f"{self.kind} has no shipped inverse")

    def __call__(self, z: Series, prec: int | None = None) -> Series:
        k = self.kind
        if k == "beta":
            return beta_apply(self.seq, z)
        if k == "alpha":
            return alpha_apply(self.seq, z)
        if k == "alpha_inv":
            return alpha_inv_apply(self.seq, z, prec)
        if k == "bar_beta":
            return bar_beta_apply(self.seq, z)
        if k == "bar_alpha":
            return bar_alpha_apply(self.seq, z)
        if k == "bar_alpha_inv":
            return bar_alpha_inv_apply(self.seq, z, prec)
        if k == "tau":
            return tau_apply(z)
        if k == "tau_inv":
            return tau_inv_apply(z)
        if k == "identity":
            return z
        if k == "scalar_mul":
            return self.scalar * z
        if k == "sum":
            out = self.parts[0](z, prec)
            for p in self.parts[1:]:
                out = out + p(z, prec)
            return out
        for p in reversed(self.parts):
            z = p(z, prec)
        return z

    def to_json(self) -> dict:
        out: dict = {"map": self.kind}
        if self.seq is not None:
            out["seq"] = self.seq.to_json()
        if self.scalar is not None:
            out["scalar"] = self.scalar.to_json()
        if self.parts:
            out["of"] = [p.to_json() for p in self.parts]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SeriesMap":
        try:
            kind = obj["map"]
            seq = ExponentSeq.from_json(obj["seq"]) if "seq" in obj else None
            scalar = Series.from_json(obj["scalar"]) if "scalar" in obj else None
            parts = tuple(cls.from_json(p) for p in obj.get("of", ()))
        except (KeyError, TypeError) as exc:
            raise UsageError(f"bad map descriptor {obj!r}") from exc
        return cls(kind, seq=seq, scalar=scalar, parts=parts)

    def __str__(self):
        if self.seq is not None:
            return f"{self.kind}[{self.seq.describe()}]"
        if self.kind == "scalar_mul":
            return f"mul[{self.scalar}]"
        if self.parts:
            sep = " o " if self.kind == "compose" else " + "
            return "(" + sep.join(str(p) for p in self.parts) + ")"
        return self.kind


def apply_all(f: SeriesMap, zs: Sequence[Series], prec: int | None = None) -> list[Series]:
    return [f(z, prec) for z in zs]
