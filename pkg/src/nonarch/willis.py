"""Scale, tidy subgroups and calibrations for linear automorphisms of K^d.

Compact open subgroups are represented as O-lattices (:class:`Lattice`),
linear maps as matrices of series (:class:`MatrixMap`).  Indices of
lattices come from determinant valuations:  for L2 inside L1,
[L1 : L2] = q ** val det(B1^-1 B2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import IterationBudgetError, PrecisionError, UsageError
from .ffield import FieldDesc
from .laurent import Series
from .morphisms import SeriesMap, VectorSeries, interleave

__all__ = [
    "CalibrationReport",
    "Calibration",
    "Lattice",
    "MatrixMap",
    "TidyReport",
    "calibration",
    "calibration_compare",
    "is_tidy_contractive",
    "lattice_index",
    "scale",
    "scaling_norm",
    "tidy_parts",
    "weighted_norm_log",
]

WORK_PREC = 256
K_MAX = 64

Matrix = list[list[Series]]


def _in_O(s: Series) -> bool:
    if s.val is not None:
        return s.val >= 0
    if s.prec is not None and s.prec < 0:
        raise PrecisionError(f"membership in O undecided: zero only modulo X^{s.prec}")
    return True


def _inv(s: Series, work: int) -> Series:
    if s.prec is None and not s.is_monomial:
        return s.inverse(prec=work)
    return s.inverse()


def _pivot_row(A: Matrix, col: int, rows: Iterable[int]) -> int | None:
    best, best_val = None, None
    for r in rows:
        v = A[r][col].val
        if v is not None and (best_val is None or v < best_val):
            best, best_val = r, v
    return best


def _mat_mul(A: Matrix, B: Matrix) -> Matrix:
    f = A[0][0].field
    out = []
    for row in A:
        new = []
        for j in range(len(B[0])):
            acc = Series.zero(f)
            for k, a in enumerate(row):
                if a.val is None and a.prec is None:
                    continue
                acc = acc + a * B[k][j]
            new.append(acc)
        out.append(new)
    return out


def _identity(f: FieldDesc, d: int) -> Matrix:
    return [[Series.one(f) if i == j else Series.zero(f) for j in range(d)] for i in range(d)]


def _mat_inv(A: Matrix, work: int = WORK_PREC) -> Matrix:
    """Gauss-Jordan with minimal-valuation pivots."""
    d = len(A)
    f = A[0][0].field
    M = [list(row) + eye for row, eye in zip(A, _identity(f, d))]
    for c in range(d):
        r = _pivot_row(M, c, range(c, d))
        if r is None:
            raise PrecisionError("matrix singular at the working precision")
        M[c], M[r] = M[r], M[c]
        pinv = _inv(M[c][c], work)
        M[c] = [pinv * e for e in M[c]]
        M[c][c] = Series.one(f)
        for i in range(d):
            if i != c and not M[i][c].is_zero:
                fac = M[i][c]
                M[i] = [a - fac * b for a, b in zip(M[i], M[c])]
                M[i][c] = Series.zero(f)
    return [row[d:] for row in M]


def _det(A: Matrix, work: int = WORK_PREC) -> Series:
    d = len(A)
    f = A[0][0].field
    M = [list(row) for row in A]
    det = Series.one(f)
    for c in range(d):
        r = _pivot_row(M, c, range(c, d))
        if r is None:
            # every candidate is zero-flagged: the determinant is too
            precs = [M[i][c].prec for i in range(c, d) if M[i][c].prec is not None]
            return Series.zero(f, min(precs) if precs else None) * det
        if r != c:
            M[c], M[r] = M[r], M[c]
            det = -det
        piv = M[c][c]
        det = det * piv
        pinv = _inv(piv, work)
        for i in range(c + 1, d):
            if not M[i][c].is_zero:
                fac = M[i][c] * pinv
                M[i] = [a - fac * b for a, b in zip(M[i], M[c])]
                M[i][c] = Series.zero(f)
    return det


def _transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def _column_echelon(cols: list[list[Series]], d: int, work: int) -> Matrix:
    """O-column reduction of a spanning set to a lower-triangular basis."""
    f = cols[0][0].field
    remaining = [list(c) for c in cols]
    basis = []
    for i in range(d):
        best = _pivot_row([[c[i]] for c in remaining], 0, range(len(remaining)))
        if best is None:
            raise PrecisionError("spanning set is not of full rank at the working precision")
        piv = remaining.pop(best)
        pinv = _inv(piv[i], work)
        for c in remaining:
            if not c[i].is_zero:
                fac = c[i] * pinv  # valuation >= 0 by the pivot choice
                for k in range(d):
                    c[k] = c[k] - fac * piv[k]
                c[i] = Series.zero(f)
        basis.append(piv)
    return _transpose(basis)


@dataclass(frozen=True)
class MatrixMap:
    """A K-linear map of K^d given by its matrix (rows of series)."""

    rows: tuple[tuple[Series, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise UsageError("matrix must be square and non-empty")

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def field(self) -> FieldDesc:
        return self.rows[0][0].field

    def _m(self) -> Matrix:
        return [list(r) for r in self.rows]

    @classmethod
    def identity(cls, f: FieldDesc, d: int) -> "MatrixMap":
        return cls(tuple(map(tuple, _identity(f, d))))

    @classmethod
    def diagonal(cls, entries: Sequence[Series]) -> "MatrixMap":
        f = entries[0].field
        d = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else Series.zero(f) for j in range(d))
                         for i in range(d)))

    @classmethod
    def cyclic_shift(cls, f: FieldDesc, dstar: int) -> "MatrixMap":
        """Matrix of (u_0..u_{d-1}) -> (X u_{d-1}, u_0, ..., u_{d-2})."""
        rows = [[Series.zero(f)] * dstar for _ in range(dstar)]
        rows[0][dstar - 1] = Series.monomial(f, 1)
        for r in range(1, dstar):
            rows[r][r - 1] = Series.one(f)
        return cls(tuple(map(tuple, rows)))

    @classmethod
    def from_series_map(cls, fmap: SeriesMap, f: FieldDesc) -> "MatrixMap":
        """1x1 matrix of a K-linear descriptor (tau, tau_inv, scalar_mul, ...)."""
        k = fmap.kind
        if k == "tau":
            c = Series.monomial(f, 1)
        elif k == "tau_inv":
            c = Series.monomial(f, -1)
        elif k == "identity":
            c = Series.one(f)
        elif k == "scalar_mul":
            c = fmap.scalar
        elif k == "compose":
            out = cls.identity(f, 1)
            for p in fmap.parts:
                out = out @ cls.from_series_map(p, f)
            return out
        else:
            raise UsageError(f"{fmap} is not K-linear; only linear maps have matrices")
        return cls(((c,),))

    def __matmul__(self, other: "MatrixMap") -> "MatrixMap":
        return MatrixMap(tuple(map(tuple, _mat_mul(self._m(), other._m()))))

    def apply(self, v: VectorSeries) -> VectorSeries:
        if v.dim != self.d:
            raise UsageError(f"dimension mismatch {v.dim} != {self.d}")
        col = [[e] for e in v]
        return VectorSeries(tuple(r[0] for r in _mat_mul(self._m(), col)))

    __call__ = apply

    def inverse(self, work: int = WORK_PREC) -> "MatrixMap":
        return MatrixMap(tuple(map(tuple, _mat_inv(self._m(), work))))

    def det(self, work: int = WORK_PREC) -> Series:
        return _det(self._m(), work)

    def power(self, k: int) -> "MatrixMap":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = MatrixMap.identity(self.field, self.d)
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_contractive(self, k_max: int = K_MAX) -> bool:
        """Certificate: some power A^k maps O^d into X O^d (k <= k_max)."""
        U = Lattice.standard(self.field, self.d)
        XU = Lattice.standard(self.field, self.d, 1)
        P = U
        for _ in range(k_max):
            P = P.image(self)
            if XU.contains(P):
                return True
        return False


class Lattice:
    """A full-rank O-submodule of K^d, the O-span of the columns of ``basis``."""

    def __init__(self, basis: Sequence[Sequence[Series]], work: int = WORK_PREC):
        rows = [list(r) for r in basis]
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise UsageError("lattice basis must be a square d x d matrix")
        self.d = d
        self.field = rows[0][0].field
        self.work = work
        self.basis = rows
        dv = _det(rows, work)
        if dv.val is None:
            raise PrecisionError("lattice basis determinant is not determined (singular?)")
        self._det_val = dv.val
        self._inv_cache: Matrix | None = None

    @classmethod
    def standard(cls, f: FieldDesc, d: int, shift: int = 0) -> "Lattice":
        """X**shift * O^d."""
        return cls([[Series.monomial(f, shift) if i == j else Series.zero(f) for j in range(d)]
                    for i in range(d)])

    @classmethod
    def from_columns(cls, cols: Sequence[VectorSeries]) -> "Lattice":
        return cls(_transpose([list(c) for c in cols]))

    def columns(self) -> list[VectorSeries]:
        return [VectorSeries(tuple(c)) for c in _transpose(self.basis)]

    @property
    def det_valuation(self) -> int:
        return self._det_val

    def _basis_inv(self) -> Matrix:
        if self._inv_cache is None:
            self._inv_cache = _mat_inv(self.basis, self.work)
        return self._inv_cache

    def coordinates(self, x: VectorSeries) -> list[Series]:
        col = [[e] for e in x]
        return [r[0] for r in _mat_mul(self._basis_inv(), col)]

    def contains_vector(self, x: VectorSeries) -> bool:
        return all(_in_O(c) for c in self.coordinates(x))

    def contains(self, other: "Lattice") -> bool:
        """other inside self."""
        C = _mat_mul(self._basis_inv(), other.basis)
        return all(_in_O(e) for row in C for e in row)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return (self.field == other.field and self.d == other.d
                and self._det_val == other._det_val and self.contains(other))

    __hash__ = None

    def image(self, A: MatrixMap) -> "Lattice":
        return Lattice(_mat_mul(A._m(), self.basis), self.work)

    def scaled(self, k: int) -> "Lattice":
        """X**k * L."""
        return Lattice([[e.shift(k) for e in row] for row in self.basis], self.work)

    def dual(self) -> "Lattice":
        """{y : y^T x in O for all x in L}, basis (B^-1)^T."""
        return Lattice(_transpose(self._basis_inv()), self.work)

    def __add__(self, other: "Lattice") -> "Lattice":
        cols = _transpose(self.basis) + _transpose(other.basis)
        return Lattice(_column_echelon(cols, self.d, self.work), self.work)

    def __and__(self, other: "Lattice") -> "Lattice":
        return (self.dual() + other.dual()).dual()

    def hermite_basis(self) -> Matrix:
        """Lower-triangular basis of the same lattice."""
        return _column_echelon(_transpose(self.basis), self.d, self.work)

    def elementary_divisors(self) -> list[int]:
        """Valuations e_1 <= ... <= e_d with L ~ diag(X^e_i) O^d."""
        M = [list(r) for r in self.basis]
        d = self.d
        f = self.field
        out = []
        for i in range(d):
            best, bv = None, None
            for r in range(i, d):
                for c in range(i, d):
                    v = M[r][c].val
                    if v is not None and (bv is None or v < bv):
                        best, bv = (r, c), v
            if best is None:
                raise PrecisionError("elementary divisors not determined")
            r, c = best
            M[i], M[r] = M[r], M[i]
            for row in M:
                row[i], row[c] = row[c], row[i]
            pinv = _inv(M[i][i], self.work)
            for r2 in range(i + 1, d):
                if not M[r2][i].is_zero:
                    fac = M[r2][i] * pinv
                    M[r2] = [a - fac * b for a, b in zip(M[r2], M[i])]
            for c2 in range(i + 1, d):
                if not M[i][c2].is_zero:
                    fac = M[i][c2] * pinv
                    for row in M:
                        row[c2] = row[c2] - fac * row[i]
            M[i] = [M[i][k] if k == i else Series.zero(f) for k in range(d)]
            out.append(bv)
        return sorted(out)

    def to_json(self) -> dict:
        return {"d": self.d,
                "basis": [[e.to_json() for e in col] for col in _transpose(self.basis)]}

    @classmethod
    def from_json(cls, obj: dict) -> "Lattice":
        cols = [[Series.from_json(e) for e in col] for col in obj["basis"]]
        if len(cols) != obj["d"]:
            raise UsageError("lattice JSON: basis size does not match d")
        return cls(_transpose(cols))

    def __repr__(self):
        return f"Lattice(d={self.d}, elementary divisors={self.elementary_divisors()})"


def lattice_index(L1: Lattice, L2: Lattice) -> int:
    """[L1 : L2] for L2 inside L1."""
    if not L1.contains(L2):
        raise UsageError("index needs the second lattice inside the first")
    return L1.field.q ** (L2.det_valuation - L1.det_valuation)


# -- tidy subgroups and scale ---------------------------------------------------

def _as_matrix(fmap, U: Lattice) -> MatrixMap:
    if isinstance(fmap, MatrixMap):
        if fmap.d != U.d:
            raise UsageError("map and lattice dimensions differ")
        return fmap
    if isinstance(fmap, SeriesMap):
        if U.d != 1:
            raise UsageError("series maps act on K, i.e. d = 1")
        return MatrixMap.from_series_map(fmap, U.field)
    raise UsageError(f"unsupported map {fmap!r}")


def _stable_intersection(A: MatrixMap, U: Lattice, k_max: int) -> Lattice | None:
    """The intersection of A^k(U) over k >= 0; None means the trivial group.

    Returns when two consecutive partial intersections agree, or None when
    some A^k(U) lies in X*U (then the intersection is inside every X^n U).
    """
    XU = U.scaled(1)
    V, P = U, U
    for _ in range(k_max):
        P = P.image(A)
        if XU.contains(P):
            return None
        nxt = V & P
        if nxt == V:
            return V
        V = nxt
    raise IterationBudgetError(f"no stabilization within {k_max} iterations")


def tidy_parts(fmap, U: Lattice, k_max: int = K_MAX) -> tuple[Lattice | None, Lattice | None]:
    """(U_+, U_-) for the map; None stands for the trivial subgroup."""
    A = _as_matrix(fmap, U)
    return _stable_intersection(A, U, k_max), _stable_intersection(A.inverse(), U, k_max)


def _is_tidy(U: Lattice, up: Lattice | None, um: Lattice | None) -> bool:
    parts = [L for L in (up, um) if L is not None]
    if not parts:
        return False
    total = parts[0] if len(parts) == 1 else parts[0] + parts[1]
    return total == U


def scale(fmap, U: Lattice, k_max: int = K_MAX) -> int:
    """s(f) = [f(U_+) : U_+] for U tidy for f."""
    A = _as_matrix(fmap, U)
    up, um = tidy_parts(A, U, k_max)
    if not _is_tidy(U, up, um):
        raise UsageError("U is not tidy for this map")
    if up is None:
        return 1
    return lattice_index(up.image(A), up)


@dataclass
class TidyReport:
    tidy: bool
    u_plus: Lattice | None = None
    u_minus: Lattice | None = None
    reason: str = ""

    def __bool__(self):
        return self.tidy


def is_tidy_contractive(fmap, U: Lattice) -> TidyReport:
    """For a contractive map, U is tidy exactly when f(U) lies in U."""
    A = _as_matrix(fmap, U)
    if not U.contains(U.image(A)):
        return TidyReport(False, reason="f(U) is not contained in U")
    if not A.is_contractive():
        return TidyReport(False, reason="no power of the map contracts O^d into X O^d")
    return TidyReport(True, u_plus=None, u_minus=U)


# -- calibration ----------------------------------------------------------------

def _vec(x) -> VectorSeries:
    return x if isinstance(x, VectorSeries) else VectorSeries((x,))


class Calibration:
    """kappa(x) = max{n : x in f^n(U)} for contractive f with f(U) in U."""

    def __init__(self, fmap, U: Lattice, budget: int = 1 << 12):
        A = _as_matrix(fmap, U)
        if not U.contains(U.image(A)):
            raise UsageError("calibration needs f(U) inside U")
        if not A.is_contractive():
            raise UsageError("calibration needs a contractive map")
        self.A, self.U, self.budget = A, U, budget
        self._Ainv = A.inverse()
        self._coords: dict[int, Matrix] = {0: U._basis_inv()}

    def _C(self, n: int) -> Matrix:
        """U-coordinates of A^-n, i.e. B^-1 A^-n."""
        C = self._coords.get(n)
        if C is None:
            step = self._Ainv._m() if n > 0 else self.A._m()
            prev = self._C(n - 1 if n > 0 else n + 1)
            C = _mat_mul(prev, step)
            self._coords[n] = C
        return C

    def member(self, x: VectorSeries, n: int) -> bool:
        """x in f^n(U)?"""
        col = [[e] for e in x]
        return all(_in_O(r[0]) for r in _mat_mul(self._C(n), col))

    def __call__(self, x) -> int | float:
        x = _vec(x)
        if all(e.val is None for e in x):
            if all(e.prec is None for e in x):
                return math.inf
            raise PrecisionError("calibration of a vector known only to be 0 modulo X^P")
        # start from d * min valuation, exact for tau on O
        n = self.A.d * min(e.val for e in x if e.val is not None)
        for _ in range(self.budget):
            if self.member(x, n):
                if not self.member(x, n + 1):
                    return n
                n += 1
            else:
                n -= 1
        raise IterationBudgetError("calibration search exceeded its budget")


def calibration(fmap, U: Lattice, x) -> int | float:
    return Calibration(fmap, U)(x)


def scaling_norm(dstar: int) -> tuple[Fraction, ...]:
    """q-exponent weights w_r = -r/d* of a norm scaled by q^(1/d*) under the
    inverse cyclic shift: ||M^-1 x|| = q^(1/d*) ||x||."""
    if dstar < 1:
        raise UsageError("d* must be >= 1")
    return tuple(Fraction(-r, dstar) for r in range(dstar))


def weighted_norm_log(weights: Sequence[Fraction], v: VectorSeries) -> Fraction | None:
    """log_q of max_r q^{w_r} |u_r|; None for the zero vector."""
    if len(weights) != v.dim:
        raise UsageError("weights and vector dimension differ")
    best = None
    for w, u in zip(weights, v):
        if u.val is None:
            if u.prec is not None:
                raise PrecisionError("norm of a zero-flagged component is not exact")
            continue
        e = Fraction(w) - u.val
        best = e if best is None or e > best else best
    return best


# -- calibration comparison between charts ------------------------------------

@dataclass
class CalibrationReport:
    q: int
    dstar: int
    samples: list[dict] = field(default_factory=list)
    # norm comparison constants as q-exponents: log_q a, log_q b
    log_a: Fraction = Fraction(0)
    log_b: Fraction = Fraction(0)
    # inclusion constants (N, a, b) and the resulting bound R
    N: int = 0
    incl_a: Fraction = Fraction(0)
    incl_b: Fraction = Fraction(0)
    R_formula: Fraction = Fraction(0)
    R: int = 0
    ok: bool = True
    failures: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "q": self.q, "dstar": self.dstar,
            "a": _qpow(self.q, self.log_a), "b": _qpow(self.q, self.log_b),
            "log_q_a": str(self.log_a), "log_q_b": str(self.log_b),
            "N": self.N, "incl_a": str(self.incl_a), "incl_b": str(self.incl_b),
            "R_formula": str(self.R_formula), "R": self.R, "ok": self.ok,
            "rows": self.samples, "failures": self.failures,
        }


def _qpow(q: int, e: Fraction) -> str:
    e = Fraction(e)
    if e.denominator == 1:
        return str(Fraction(q) ** int(e))
    return f"{q}^({e})"


def calibration_compare(f: FieldDesc, dstar: int, v_lo: int, v_hi: int,
                        seed: int = 0) -> CalibrationReport:
    """Compare the 1-dimensional and the interleaved d*-dimensional charts of K.

    For x with valuation v the chart norm is ||phi*(x)|| = q^-floor(v/d*).
    Certifies a ||x||^(1/d*) <= ||phi*(x)|| <= b ||x||^(1/d*) with a = 1,
    b = q^((d*-1)/d*), and the calibration bound
    d* mu*(x) - R <= kappa(x) <= d* mu*(x) + R with R = d* - 1, where kappa
    is the calibration of tau on O.  Also checks the inclusion constants
    N = 0, a = 1/d*, b = 1 and the bound max(0, 1 - a d* - N, N + b d*).
    """
    if dstar < 1:
        raise UsageError("d* must be >= 1")
    rng = np.random.default_rng(seed)
    d = dstar
    rep = CalibrationReport(q=f.q, dstar=d)
    rep.log_a, rep.log_b = Fraction(0), Fraction(d - 1, d)
    rep.N, rep.incl_a, rep.incl_b = 0, Fraction(1, d), Fraction(1)
    rep.R_formula = max(Fraction(0), 1 - rep.incl_a * d - rep.N, rep.N + rep.incl_b * d)
    rep.R = d - 1
    tau = MatrixMap.from_series_map(SeriesMap.tau(), f)
    O = Lattice.standard(f, 1)
    kappa = Calibration(tau, O)
    # the same calibration seen through the chart: cyclic shift on O^d*
    kappa_star = Calibration(MatrixMap.cyclic_shift(f, d), Lattice.standard(f, d))
    for v in range(v_lo, v_hi + 1):
        terms = {v: 1}
        for k in range(v + 1, v + 3 * d + 1):
            c = int(rng.integers(0, f.q))
            if c:
                terms[k] = c
        x = Series._raw(f, v, [terms.get(k, 0) for k in range(v, v + 3 * d + 1)], None)
        w = interleave(d, x)
        mu_star = min(e.val for e in w if e.val is not None)
        k1 = kappa(x)
        k2 = kappa_star(w)
        ratio = Fraction(v, d) - mu_star  # log_q of ||phi*(x)|| / |x|^(1/d*)
        row = {"v": v, "kappa": k1, "mu_star": mu_star, "log_ratio": str(ratio)}
        checks = {
            "kappa_is_valuation": k1 == v,
            "kappa_chart_invariant": k1 == k2,
            "norm_comparison": rep.log_a <= ratio <= rep.log_b,
            "calibration_bound": d * mu_star - rep.R <= k1 <= d * mu_star + rep.R,
            "calibration_formula_bound": d * mu_star - rep.R_formula <= k1
                                         <= d * mu_star + rep.R_formula,
        }
        # inclusions W_{q^{a-n/d}} in tau^{n+N}(O) in W_{q^{b-n/d}}, n near v
        for n in range(max(0, v - 2 * d), v + 2 * d + 1):
            in_ball_a = -mu_star < rep.incl_a - Fraction(n, d)
            in_subgroup = v >= n + rep.N
            in_ball_b = -mu_star < rep.incl_b - Fraction(n, d)
            if (in_ball_a and not in_subgroup) or (in_subgroup and not in_ball_b):
                checks["inclusions"] = False
                break
        else:
            checks["inclusions"] = True
        rep.samples.append(row)
        bad = [k for k, good in checks.items() if not good]
        if bad:
            rep.ok = False
            rep.failures.append({"v": v, "x": str(x), "failed": bad})
    return rep
