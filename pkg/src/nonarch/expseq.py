"""Strictly increasing exponent sequences l_0 < l_1 < ... of positive integers.

Three kinds are supported: ``gauss`` (l_j = 1 + floor(j*theta) for an exact
rational theta), ``square`` (l_j = j**2 + 1) and ``table`` (an explicit
finite list, for tests).
"""
from __future__ import annotations

import bisect
import math
import threading
from fractions import Fraction
from typing import NamedTuple

from .errors import UsageError

__all__ = [
    "DEFAULT_CAP",
    "ExponentSeq",
    "SlackCheck",
    "parse_seq",
    "seq_check_slack",
    "seq_gauss",
    "seq_preimage",
    "seq_superlinear",
    "seq_table",
]

DEFAULT_CAP = 1 << 20


class SlackCheck(NamedTuple):
    ok: bool
    j: int | None = None       # first violating index
    value: int | None = None   # l_j at the violation


class ExponentSeq:
    """Lazily cached exponent sequence.

    ``seq[j]`` extends the cache on demand (under a lock); reading past
    ``cap`` is a usage error.
    """

    def __init__(self, kind: str, theta: Fraction | None = None,
                 table: tuple[int, ...] | None = None, cap: int = DEFAULT_CAP,
                 slack: tuple[Fraction, Fraction] | None = None):
        self.kind = kind
        self.theta = theta
        self.table = table
        self.cap = cap if table is None else len(table)
        self.slack = slack
        self._cache: list[int] = []
        self._lock = threading.Lock()
        if table is not None:
            self._cache = list(table)
            for j in range(1, len(table)):
                if table[j] <= table[j - 1]:
                    raise UsageError("table sequence must be strictly increasing")
            if table and table[0] < 1:
                raise UsageError("table entries must be positive")

    def _formula(self, j: int) -> int:
        if self.kind == "gauss":
            return 1 + math.floor(j * self.theta)
        if self.kind == "square":
            return j * j + 1
        raise UsageError(f"index {j} beyond the table of length {len(self._cache)}")

    def _extend(self, n: int):
        if n > self.cap:
            raise UsageError(f"l_j requested for j = {n - 1} beyond the cap {self.cap}")
        with self._lock:
            start = len(self._cache)
            if start < n:
                self._cache.extend(self._formula(j) for j in range(start, n))

    def __getitem__(self, j: int) -> int:
        if j < 0:
            raise IndexError(j)
        if j >= len(self._cache):
            self._extend(j + 1)
        return self._cache[j]

    def prefix(self, n: int) -> list[int]:
        """l_0, ..., l_{n-1}."""
        if n > len(self._cache):
            self._extend(n)
        return self._cache[:n]

    @property
    def cached(self) -> int:
        return len(self._cache)

    def preimage(self, i: int) -> int | None:
        return seq_preimage(self, i)

    # structural equality keeps SeriesMap descriptors hashable and comparable
    def _key(self):
        return (self.kind, self.theta, self.table)

    def __eq__(self, other):
        if not isinstance(other, ExponentSeq):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.kind == "gauss":
            return f"ExponentSeq(gauss:{self.theta})"
        if self.kind == "table":
            return f"ExponentSeq(table:{list(self.table)})"
        return f"ExponentSeq({self.kind})"

    def describe(self) -> str:
        if self.kind == "gauss":
            return f"gauss:{self.theta}"
        if self.kind == "table":
            return "table:" + ",".join(map(str, self.table))
        return self.kind

    def to_json(self) -> dict:
        if self.kind == "gauss":
            return {"kind": "gauss", "theta": str(self.theta)}
        if self.kind == "table":
            return {"kind": "table", "values": list(self.table)}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, obj: dict) -> "ExponentSeq":
        kind = obj.get("kind")
        if kind == "gauss":
            return seq_gauss(Fraction(obj["theta"]))
        if kind == "square":
            return seq_superlinear("square")
        if kind == "table":
            return seq_table(obj["values"])
        raise UsageError(f"unknown sequence kind {kind!r}")

    # -- growth facts ---------------------------------------------------------

    def growth_threshold(self, n: int) -> int | None:
        """Smallest k with l_j >= n*j for every j >= k, or None if unknown.

        Proven, not just scanned: for ``square`` the difference
        l_j - n*j increases once 2j + 1 >= n, so a scan up to
        max(k, n) settles all larger j.  For ``gauss`` with theta >= n
        the bound l_j >= j*theta gives k = 0; for theta < n it fails.
        """
        if self.kind == "square":
            horizon = max(n, 1)
            k = 0
            for j in range(horizon + 1):
                if self[j] < n * j:
                    k = j + 1
            return k
        if self.kind == "gauss":
            return 0 if self.theta >= n else None
        return None


def seq_gauss(theta) -> ExponentSeq:
    """l_j = 1 + floor(j*theta) with slack certificate (theta, 1)."""
    theta = Fraction(theta)
    if theta <= 1 or theta.denominator == 1:
        raise UsageError(f"theta must be a non-integer rational > 1, got {theta}")
    return ExponentSeq("gauss", theta=theta, slack=(theta, Fraction(1)))


def seq_superlinear(name: str = "square") -> ExponentSeq:
    if name != "square":
        raise UsageError(f"unknown superlinear family {name!r}")
    return ExponentSeq("square")


def seq_table(values) -> ExponentSeq:
    return ExponentSeq("table", table=tuple(int(v) for v in values))


def seq_check_slack(seq: ExponentSeq, theta, K, J: int) -> SlackCheck:
    """Check j*theta - K <= l_j <= j*theta + K for 0 <= j <= J, exactly."""
    theta, K = Fraction(theta), Fraction(K)
    if J < 0:
        raise UsageError("J must be >= 0")
    for j, lj in enumerate(seq.prefix(J + 1)):
        centre = j * theta
        if not centre - K <= lj <= centre + K:
            return SlackCheck(False, j, lj)
    return SlackCheck(True)


def seq_preimage(seq: ExponentSeq, i: int) -> int | None:
    """The j with l_j = i, if any (binary search over the cached prefix)."""
    if i < 1:
        return None
    n = max(seq.cached, 1)
    # l_j >= j + 1, so j <= i - 1; grow the cache until it passes i
    while seq[n - 1] < i and n < min(i, seq.cap):
        n = min(2 * n, i, seq.cap)
        seq.prefix(n)
    values = seq.prefix(min(n, seq.cached))
    j = bisect.bisect_left(values, i)
    if j < len(values) and values[j] == i:
        return j
    return None


def parse_seq(text: str) -> ExponentSeq:
    """CLI form: ``gauss:3/2``, ``square`` or ``table:1,3,4``."""
    kind, _, arg = text.partition(":")
    if kind == "gauss":
        try:
            return seq_gauss(Fraction(arg))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad theta {arg!r}") from exc
    if kind == "square" and not arg:
        return seq_superlinear("square")
    if kind == "table":
        return seq_table(int(t) for t in arg.split(","))
    raise UsageError(f"unknown sequence {text!r}")
