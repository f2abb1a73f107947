"""Difference calculus on K: divided differences, Hoelder scans, C^n
certificates, non-C^(n+1) witnesses and the superpolynomial-decay test.

All certificates are decided with exact rational arithmetic on q-exponents
(``log_q`` of absolute values); the least-squares slope is a diagnostic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError, PrecisionError, UsageError
from .ffield import default_field
from .laurent import Series
from .morphisms import SeriesMap

__all__ = [
    "CnResult",
    "DecayReport",
    "HolderCert",
    "HolderReport",
    "NonCnWitness",
    "cn_certificate",
    "divided_diff",
    "holder_certificate",
    "holder_scan",
    "not_cn1_witness",
    "qpow",
    "superpoly_decay",
]

DIV_WORK = 64  # relative precision used when dividing by exact non-monomials
_SEQ_BETA = ("beta", "bar_beta")
_SEQ_ALPHA = ("alpha", "bar_alpha")
_LINEAR = ("tau", "tau_inv", "scalar_mul", "identity")


def qpow(q: int, e) -> str:
    """Render q**e for a rational exponent e: '1/2', '8', '2^(1/2)'."""
    e = Fraction(e)
    if e.denominator == 1:
        return str(Fraction(q) ** int(e))
    return f"{q}^({e})"


def _log_abs(z: Series) -> int | None:
    """log_q |z|; None for an exact zero."""
    if z.val is None:
        if z.prec is None:
            return None
        raise PrecisionError(f"value known only modulo X^{z.prec}")
    return -z.val


def _divide(a: Series, b: Series, work: int) -> Series:
    if b.prec is None and not b.is_monomial:
        return a * b.inverse(prec=b.val + work)
    return a * b.inverse()


def divided_diff(f: SeriesMap, points: Sequence[Series], prec: int | None = None,
                 work: int = DIV_WORK) -> Series:
    """f^<n>(x_1, ..., x_{n+1}) by the two-point recursion.

    f^<0>(x) = f(x);  f^<n>(x_1, x_2, rest) =
    (f^<n-1>(x_1, rest) - f^<n-1>(x_2, rest)) / (x_1 - x_2).
    ``prec`` is passed to f (needed by maps such as alpha_inv), ``work``
    is the relative precision used when a difference of exact points is
    not a monomial.
    """
    pts = list(points)
    if not pts:
        raise UsageError("divided differences need at least one point")
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            diff = pts[i] - pts[j]
            if diff.val is None:
                raise DegenerateInputError(f"points {i} and {j} coincide at the working precision")
    memo: dict[tuple[int, ...], Series] = {}

    def rec(idx: tuple[int, ...]) -> Series:
        got = memo.get(idx)
        if got is not None:
            return got
        if len(idx) == 1:
            out = f(pts[idx[0]], prec)
        else:
            i, j, rest = idx[0], idx[1], idx[2:]
            num = rec((i,) + rest) - rec((j,) + rest)
            out = _divide(num, pts[i] - pts[j], work)
        memo[idx] = out
        return out

    return rec(tuple(range(len(pts))))


# -- Hoelder scans --------------------------------------------------------------

@dataclass(frozen=True)
class HolderCert:
    """a |y-x|^theta <= |f(y)-f(x)| <= b |y-x|^theta, as q-exponents of a, b."""

    theta: Fraction
    log_a: Fraction
    log_b: Fraction
    source: str = ""

    def to_json(self, q: int) -> dict:
        return {"a": qpow(q, self.log_a), "b": qpow(q, self.log_b), "theta": str(self.theta)}


def holder_certificate(f: SeriesMap) -> HolderCert | None:
    """Two-sided Hoelder constants known from the structure of f, if any."""
    k = f.kind
    if k == "beta" and f.seq.slack is not None:
        theta, K = f.seq.slack
        return HolderCert(theta, min(Fraction(-f.seq[0]), -K), K, "sequence slack")
    if k in _SEQ_ALPHA:
        # beta strictly shrinks every nonzero z, so alpha = id + beta is an isometry
        return HolderCert(Fraction(1), Fraction(0), Fraction(0), "isometry")
    if k == "tau":
        return HolderCert(Fraction(1), Fraction(-1), Fraction(-1), "linear")
    if k == "tau_inv":
        return HolderCert(Fraction(1), Fraction(1), Fraction(1), "linear")
    if k == "identity":
        return HolderCert(Fraction(1), Fraction(0), Fraction(0), "linear")
    if k == "scalar_mul" and f.scalar.exact and not f.scalar.is_zero:
        e = Fraction(-f.scalar.val)
        return HolderCert(Fraction(1), e, e, "linear")
    return None


@dataclass
class HolderReport:
    q: int
    map: str
    rows: list[dict] = field(default_factory=list)
    theta_hat: float | None = None
    offset: float | None = None
    residual: float | None = None
    cert: HolderCert | None = None
    violations: list[dict] = field(default_factory=list)
    sampling: str = "representative"

    def row(self, v: int) -> dict | None:
        for r in self.rows:
            if r["v"] == v:
                return r
        return None

    def to_json(self) -> dict:
        return {
            "map": self.map,
            "q": self.q,
            "sampling": self.sampling,
            "rows": self.rows,
            "theta_hat": None if self.theta_hat is None else round(self.theta_hat, 6),
            "offset": None if self.offset is None else round(self.offset, 6),
            "residual": None if self.residual is None else round(self.residual, 6),
            "cert": None if self.cert is None else self.cert.to_json(self.q),
            "violations": self.violations,
        }


def _differences(f_field, v: int, depth: int):
    """All z with val(z) = v as exact polynomials of degree < v + depth."""
    q = f_field.q
    for lead in range(1, q):
        for tail in product(range(q), repeat=depth - 1):
            yield Series._raw(f_field, v, (lead,) + tail, None)


def holder_scan(f: SeriesMap, field_desc, v_lo: int, v_hi: int,
                sampling: str = "representative", budget: int = 1 << 12,
                seed: int = 0, prec: int | None = None) -> HolderReport:
    """Tabulate log_q |f(y) - f(x)| by v = val(y - x) for v in [v_lo, v_hi].

    ``representative`` evaluates f(X^v) - f(0) (enough for additive f);
    ``exhaustive`` runs through every difference of valuation v modulo a
    depth fixed by ``budget`` and several seeded base points.  A structural
    certificate is attached only when every row respects it.
    """
    if v_hi < v_lo:
        raise UsageError("empty valuation range")
    dmin = f.domain_min_val
    if dmin is not None and v_lo < dmin:
        raise UsageError(f"{f} is defined on valuations >= {dmin}, got v_lo = {v_lo}")
    if sampling not in ("representative", "exhaustive"):
        raise UsageError(f"unknown sampling {sampling!r}")
    q = field_desc.q
    rep = HolderReport(q=q, map=str(f), sampling=sampling)
    if sampling == "representative":
        zero_img = f(Series.zero(field_desc), prec)
        for v in range(v_lo, v_hi + 1):
            e = _log_abs(f(Series.monomial(field_desc, v), prec) - zero_img)
            rep.rows.append({"v": v, "min": e, "max": e})
    else:
        depth = 1
        while (q - 1) * q ** depth <= budget:
            depth += 1
        rng = np.random.default_rng(seed)
        lo = 0 if dmin is None else dmin
        bases = [Series.zero(field_desc)]
        for _ in range(2):
            start = max(lo, v_lo)
            codes = tuple(int(c) for c in rng.integers(0, q, size=4))
            bases.append(Series._raw(field_desc, start, codes, None))
        for v in range(v_lo, v_hi + 1):
            logs = []
            for x in bases:
                fx = f(x, prec)
                for z in _differences(field_desc, v, depth):
                    logs.append(_log_abs(f(x + z, prec) - fx))
            finite = [e for e in logs if e is not None]
            rep.rows.append({"v": v, "min": min(finite) if finite else None,
                             "max": max(finite) if finite else None})

    pts = [(r["v"], r["max"]) for r in rep.rows if r["max"] is not None and r["min"] == r["max"]]
    if len(pts) >= 2:
        vs = np.array([p[0] for p in pts], dtype=float)
        ls = np.array([p[1] for p in pts], dtype=float)
        slope, icept = np.polyfit(vs, ls, 1)
        rep.theta_hat, rep.offset = float(-slope), float(icept)
        rep.residual = float(np.sqrt(np.mean((ls - (slope * vs + icept)) ** 2)))

    cert = holder_certificate(f)
    if cert is not None:
        for r in rep.rows:
            lo_b = cert.log_a - cert.theta * r["v"]
            hi_b = cert.log_b - cert.theta * r["v"]
            if r["min"] is None or not (lo_b <= r["min"] and r["max"] <= hi_b):
                rep.violations.append({"v": r["v"], "min": r["min"], "max": r["max"],
                                       "bounds": [str(lo_b), str(hi_b)]})
        if not rep.violations:
            rep.cert = cert
    return rep


# -- C^n certificates and witnesses -----------------------------------------------

@dataclass
class CnResult:
    granted: bool
    n: int
    route: str = ""
    theta: Fraction | None = None
    log_b: Fraction | None = None
    log_cn: Fraction | None = None  # c_n = q^(k n) for superlinear sequences
    k: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.granted

    def to_json(self, q: int) -> dict:
        out = {"granted": self.granted, "n": self.n, "route": self.route}
        if self.theta is not None:
            out["theta"] = str(self.theta)
        if self.log_b is not None:
            out["b"] = qpow(q, self.log_b)
        if self.k is not None:
            out["k"] = self.k
            out["c_n"] = qpow(q, self.log_cn)
        if self.reason:
            out["reason"] = self.reason
        return out


def _rows_respect_upper(report: HolderReport, theta, log_b) -> dict | None:
    for r in report.rows:
        if r["max"] is not None and r["max"] > log_b - theta * r["v"]:
            return r
    return None


def cn_certificate(f: SeriesMap, n: int, report: HolderReport) -> CnResult:
    """C^n certificate from |f(y)-f(x)| <= b |y-x|^theta with theta > n.

    Such a bound also gives D^k f = 0 for 1 <= k <= n.  Linear maps are
    certified outright; alpha-type maps inherit from their beta part since
    the identity is analytic.  For beta with a superlinear sequence the
    bound comes from the growth threshold: with k minimal such that
    l_j >= (n+1) j for j >= k, theta = n + 1 and b = q^(k(n+1)).
    """
    if n < 0:
        raise UsageError("n must be >= 0")
    if f.kind in _LINEAR:
        return CnResult(True, n, route="linear", reason="linear maps are analytic")
    if f.kind in _SEQ_ALPHA:
        inner = cn_certificate(SeriesMap.beta(f.seq), n, report_for_beta(f, report))
        inner.route = "identity + " + (inner.route or "beta")
        return inner
    cert = report.cert
    if cert is not None and cert.theta > n:
        return CnResult(True, n, route="hoelder", theta=cert.theta, log_b=cert.log_b)
    if f.kind in _SEQ_BETA:
        k_next = f.seq.growth_threshold(n + 1)
        if k_next is not None:
            theta, log_b = Fraction(n + 1), Fraction(k_next * (n + 1))
            bad = _rows_respect_upper(report, theta, log_b)
            if bad is not None:
                return CnResult(False, n, reason=f"scan row v={bad['v']} breaks the growth bound")
            k = f.seq.growth_threshold(n)
            return CnResult(True, n, route="growth", theta=theta, log_b=log_b,
                            k=k, log_cn=Fraction(k * n))
    theta = None if cert is None else cert.theta
    return CnResult(False, n, theta=theta,
                    reason=f"no Hoelder bound with exponent > {n}"
                    + ("" if theta is None else f" (theta = {theta})"))


def report_for_beta(f: SeriesMap, report: HolderReport) -> HolderReport:
    """Cheap representative scan of the beta part over the range of ``report``."""
    vs = [r["v"] for r in report.rows] or [0]
    fd = default_field(report.q)  # only valuations matter here
    return holder_scan(SeriesMap.beta(f.seq), fd, max(0, min(vs)), max(vs))


@dataclass
class NonCnWitness:
    granted: bool
    n: int
    theta: Fraction | None = None
    log_a: Fraction | None = None
    log_b: Fraction | None = None
    base_point: int = 0
    reason: str = ""

    def __bool__(self):
        return self.granted

    def to_json(self, q: int) -> dict:
        out = {"granted": self.granted, "n": self.n}
        if self.granted:
            out.update(theta=str(self.theta), a=qpow(q, self.log_a), b=qpow(q, self.log_b),
                       x=self.base_point)
        else:
            out["reason"] = self.reason
        return out


def not_cn1_witness(f: SeriesMap, n: int, report: HolderReport) -> NonCnWitness:
    """Witness that f is not C^(n+1): a two-sided bound at x = 0 with n < theta < n+1."""
    cert = report.cert
    if cert is None:
        return NonCnWitness(False, n, reason="no certified two-sided Hoelder bound")
    if not n < cert.theta < n + 1:
        return NonCnWitness(False, n, theta=cert.theta,
                            reason=f"theta = {cert.theta} is not in ({n}, {n + 1})")
    return NonCnWitness(True, n, cert.theta, cert.log_a, cert.log_b)


# -- superpolynomial decay ----------------------------------------------------------

@dataclass
class DecayReport:
    q: int
    map: str
    n_max: int
    v_lo: int
    v_hi: int
    table: dict[int, list[tuple[int, int]]] = field(default_factory=dict)
    v0: dict[int, int | None] = field(default_factory=dict)
    decays: dict[int, bool] = field(default_factory=dict)
    k: dict[int, int | None] = field(default_factory=dict)
    bound_ok: dict[int, bool] = field(default_factory=dict)
    injective: bool = False

    @property
    def verdict(self) -> bool:
        """Superpolynomial decay for every n <= n_max."""
        return all(self.decays.values())

    @property
    def obstruction(self) -> bool:
        """Injective, not identically zero, and flatter than every power at 0."""
        return self.verdict and self.injective

    def exponent(self, n: int, v: int) -> int:
        return dict(self.table[n])[v]

    def to_json(self) -> dict:
        return {
            "map": self.map, "q": self.q, "n_max": self.n_max,
            "v_range": [self.v_lo, self.v_hi],
            "rows": [{"n": n, "v": v, "exponent": e}
                     for n in sorted(self.table) for v, e in self.table[n]],
            "v0": {str(n): v for n, v in self.v0.items()},
            "decays": {str(n): d for n, d in self.decays.items()},
            "k": {str(n): k for n, k in self.k.items()},
            "c_n_bound": {str(n): b for n, b in self.bound_ok.items()},
            "injective": self.injective,
            "verdict": "decays for every n" if self.verdict else "fails",
            "non_analytic": self.obstruction,
        }


def superpoly_decay(f: SeriesMap, field_desc, n_max: int, v_lo: int, v_hi: int,
                    tail: int = 3) -> DecayReport:
    """Exponents log_q(|f(X^v)| / |X^v|^n) = n v - l_v for n <= n_max.

    Verdict for n: from some v0 on (with at least ``tail`` points left) the
    exponent is strictly decreasing and below -v, so the ratio tends to 0
    faster than q^-v.  Also scans the threshold k (smallest index from which
    -log_q|f(X^j)| >= n j) and checks |f(z)| <= q^(kn) |z|^n on the range.
    """
    if n_max < 0 or v_hi < v_lo:
        raise UsageError("need n_max >= 0 and a non-empty valuation range")
    dmin = f.domain_min_val
    if dmin is not None and v_lo < dmin:
        raise UsageError(f"{f} is defined on valuations >= {dmin}")
    rep = DecayReport(q=field_desc.q, map=str(f), n_max=n_max, v_lo=v_lo, v_hi=v_hi,
                      injective=f.injective)
    logs = {}
    for v in range(v_lo, v_hi + 1):
        e = _log_abs(f(Series.monomial(field_desc, v)))
        if e is None:
            rep.injective = False
        logs[v] = e
    vs = [v for v in logs if logs[v] is not None]
    for n in range(n_max + 1):
        rows = [(v, n * v + logs[v]) for v in vs]
        rep.table[n] = rows
        v0 = None
        for i in range(len(rows) - 1, -1, -1):
            v, e = rows[i]
            dec = i == len(rows) - 1 or rows[i + 1][1] < e
            if e < -v and dec:
                v0 = v
            else:
                break
        rep.v0[n] = v0
        rep.decays[n] = v0 is not None and v_hi - v0 + 1 >= tail
        # threshold k: -log|f(X^j)| >= n j for all j >= k in range
        k = None
        for v in reversed(vs):
            if -logs[v] >= n * v:
                k = v
            else:
                break
        rep.k[n] = k
        rep.bound_ok[n] = k is not None and all(logs[v] <= k * n - n * v for v in vs)
    return rep
