"""Difference-bound matrices over a clock set plus the reference clock.

Entry ``(i, j)`` bounds ``x_i - x_j``; index 0 is the reference clock whose
value is always 0. Bounds are packed into ints internally: ``(c, <=)`` is
``2c + 1`` and ``(c, <)`` is ``2c``, so integer order equals bound order and
``+inf`` is a sentinel above every finite bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .automata import ClockConstraint

INF = 1 << 62
LE_ZERO = 1
LT_ZERO = 0

# clock name of the dwell-time clock added by the one-clock construction
DWELL_CLOCK = "#y"


def _raw(value: int, strict: bool) -> int:
    return 2 * value + (0 if strict else 1)


def _add(a: int, b: int) -> int:
    if a == INF or b == INF:
        return INF
    return ((a & ~1) + (b & ~1)) | (a & b & 1)


@dataclass(frozen=True)
class Bound:
    value: float  # an int, or math.inf
    strict: bool

    def __post_init__(self):
        if self.value == math.inf:
            object.__setattr__(self, "strict", True)
        elif int(self.value) != self.value:
            raise ValueError(f"bounds must be integers or +inf, got {self.value}")
        else:
            object.__setattr__(self, "value", int(self.value))

    @classmethod
    def from_raw(cls, raw: int) -> Bound:
        if raw == INF:
            return cls(math.inf, True)
        return cls(raw >> 1, not raw & 1)

    @property
    def raw(self) -> int:
        return INF if self.value == math.inf else _raw(self.value, self.strict)

    def __lt__(self, other: Bound) -> bool:
        return self.raw < other.raw

    def __le__(self, other: Bound) -> bool:
        return self.raw <= other.raw

    def __str__(self) -> str:
        if self.value == math.inf:
            return "<inf"
        return f"{'<' if self.strict else '<='}{self.value}"


UNBOUNDED = Bound(math.inf, True)


@dataclass(frozen=True)
class Interval:
    """A set of values of one clock: ``lower`` bounds from below, ``upper`` from above."""

    lower: Bound
    upper: Bound = UNBOUNDED

    def __post_init__(self):
        if self.lower.value == math.inf:
            raise ValueError("the lower endpoint must be finite")

    @classmethod
    def make(cls, lo: int, hi: float = math.inf, lo_strict=False, hi_strict=True) -> Interval:
        return cls(Bound(lo, lo_strict), Bound(hi, hi_strict))

    def contains(self, u: float) -> bool:
        lo, hi = self.lower, self.upper
        if u < lo.value or (lo.strict and u == lo.value):
            return False
        if hi.value == math.inf:
            return True
        return u < hi.value or (not hi.strict and u == hi.value)

    def is_empty(self) -> bool:
        lo, hi = self.lower, self.upper
        if hi.value == math.inf:
            return False
        return lo.value > hi.value or (lo.value == hi.value and (lo.strict or hi.strict))

    def cuts(self) -> tuple[int, int | None]:
        """Breakpoints of the interval on the doubled line.

        Cut ``2c`` sits just before ``c`` and ``2c + 1`` just after it, so the
        interval is exactly the points whose position key lies in
        ``[lower_cut, upper_cut)``. ``None`` means unbounded.
        """
        lo = 2 * self.lower.value + (1 if self.lower.strict else 0)
        if self.upper.value == math.inf:
            return lo, None
        return lo, 2 * self.upper.value + (0 if self.upper.strict else 1)

    @classmethod
    def from_cuts(cls, lo: int, hi: int | None) -> Interval:
        lower = Bound(lo >> 1, bool(lo & 1))
        upper = UNBOUNDED if hi is None else Bound(hi >> 1, not hi & 1)
        return cls(lower, upper)

    def issubset(self, other: Interval) -> bool:
        if self.is_empty():
            return True
        lo, hi = self.cuts()
        olo, ohi = other.cuts()
        if lo < olo:
            return False
        if ohi is None:
            return True
        return hi is not None and hi <= ohi

    def __str__(self) -> str:
        left = "(" if self.lower.strict else "["
        if self.upper.value == math.inf:
            return f"{left}{self.lower.value},inf)"
        right = ")" if self.upper.strict else "]"
        return f"{left}{self.lower.value},{self.upper.value}{right}"


def position_key(u: float) -> float:
    """Place a real value on the doubled line used by :meth:`Interval.cuts`.

    An integer ``c`` sits between cuts ``2c`` and ``2c + 1``; a value in
    ``(c, c + 1)`` sits between cuts ``2c + 1`` and ``2c + 2``.
    """
    c = math.floor(u)
    return 2 * c + 0.5 if u == c else u + c + 1


@dataclass(frozen=True)
class Dbm:
    clocks: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.clocks) + 1

    def index(self, clock: str | None) -> int:
        if clock is None or clock == "0":
            return 0
        try:
            return self.clocks.index(clock) + 1
        except ValueError:
            raise KeyError(f"clock {clock!r} not in {self.clocks}") from None

    def bound(self, x: str | None, y: str | None) -> Bound:
        """The bound on ``x - y``; ``None`` stands for the reference clock."""
        return Bound.from_raw(self.matrix[self.index(x)][self.index(y)])

    # -- constructors -----------------------------------------------------

    @classmethod
    def universe(cls, clocks: Sequence[str]) -> Dbm:
        """All non-negative valuations."""
        n = len(clocks) + 1
        m = [[INF] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = LE_ZERO
            m[0][i] = LE_ZERO
        return cls(tuple(clocks), tuple(map(tuple, m)))

    @classmethod
    def zero(cls, clocks: Sequence[str]) -> Dbm:
        n = len(clocks) + 1
        return cls(tuple(clocks), tuple((LE_ZERO,) * n for _ in range(n)))

    @classmethod
    def empty(cls, clocks: Sequence[str]) -> Dbm:
        n = len(clocks) + 1
        return cls(tuple(clocks), tuple((LT_ZERO,) * n for _ in range(n)))

    @classmethod
    def from_constraints(cls, clocks: Sequence[str], constraints: Iterable[tuple]) -> Dbm:
        """Zone of non-negative valuations with ``x - y < c`` / ``<= c`` constraints.

        Each constraint is ``(x, y, c, strict)``; ``None`` for ``x`` or ``y`` is
        the reference clock, so ``(x, None, 2, True)`` reads ``x < 2``.
        """
        z = cls.universe(clocks)
        m = [list(r) for r in z.matrix]
        for x, y, c, strict in constraints:
            i, j = z.index(x), z.index(y)
            m[i][j] = min(m[i][j], _raw(c, strict))
        return canonicalize(cls(z.clocks, tuple(map(tuple, m))))

    # -- queries ----------------------------------------------------------

    def is_empty(self) -> bool:
        return is_empty(self)

    def contains(self, valuation: Mapping[str, float]) -> bool:
        """Membership of a concrete valuation (exact for floats and Fractions)."""
        vals = [0] + [valuation[c] for c in self.clocks]
        if any(v < 0 for v in vals):
            return False
        n = self.dim
        for i in range(n):
            for j in range(n):
                raw = self.matrix[i][j]
                if raw == INF:
                    continue
                diff = vals[i] - vals[j]
                c = raw >> 1
                if diff > c or (diff == c and not raw & 1):
                    return False
        return True

    def __str__(self) -> str:
        if self.is_empty():
            return "empty"
        names = ["0", *self.clocks]
        parts = []
        n = self.dim
        for i in range(n):
            for j in range(n):
                if i != j and self.matrix[i][j] != INF:
                    b = Bound.from_raw(self.matrix[i][j])
                    parts.append(f"{names[i]}-{names[j]}{b}")
        return "{" + ", ".join(parts) + "}"


def _close(m: list[list[int]]) -> bool:
    """Floyd-Warshall tightening in place; False if a negative cycle exists."""
    n = len(m)
    for k in range(n):
        mk = m[k]
        for i in range(n):
            mik = m[i][k]
            if mik == INF:
                continue
            mi = m[i]
            for j in range(n):
                mkj = mk[j]
                if mkj == INF:
                    continue
                s = _add(mik, mkj)
                if s < mi[j]:
                    mi[j] = s
        if any(m[i][i] < LE_ZERO for i in range(n)):
            return False
    return True


def canonicalize(z: Dbm) -> Dbm:
    m = [list(r) for r in z.matrix]
    if not _close(m):
        return Dbm.empty(z.clocks)
    return Dbm(z.clocks, tuple(map(tuple, m)))


def is_empty(z: Dbm) -> bool:
    return any(z.matrix[i][i] < LE_ZERO for i in range(z.dim))


def intersect_guard(z: Dbm, g: ClockConstraint) -> Dbm:
    if is_empty(z):
        return z
    if not g.conjuncts:
        return z
    m = [list(r) for r in z.matrix]
    for atom in g.conjuncts:
        i = z.index(atom.clock)
        c = atom.const
        if atom.op in ("<", "<="):
            m[i][0] = min(m[i][0], _raw(c, atom.op == "<"))
        else:
            m[0][i] = min(m[0][i], _raw(-c, atom.op == ">"))
    return canonicalize(Dbm(z.clocks, tuple(map(tuple, m))))


def project(z: Dbm, clock: str) -> Interval:
    """Exact set of values ``clock`` takes inside a non-empty canonical zone."""
    if is_empty(z):
        raise ValueError("cannot project an empty zone")
    i = z.index(clock)
    low = Bound.from_raw(z.matrix[0][i])  # 0 - x <= c  means  x >= -c
    return Interval(Bound(-low.value, low.strict), Bound.from_raw(z.matrix[i][0]))


def project_to_y(z: Dbm, y: str = DWELL_CLOCK) -> Interval:
    return project(z, y)


def reset(z: Dbm, clocks: Iterable[str]) -> Dbm:
    if is_empty(z):
        return z
    m = [list(r) for r in z.matrix]
    n = z.dim
    for c in clocks:
        x = z.index(c)
        for j in range(n):
            m[x][j] = m[0][j]
            m[j][x] = m[j][0]
        m[x][x] = LE_ZERO
    return Dbm(z.clocks, tuple(map(tuple, m)))


def up(z: Dbm) -> Dbm:
    """Let an arbitrary amount of time elapse."""
    if is_empty(z):
        return z
    m = [list(r) for r in z.matrix]
    for i in range(1, z.dim):
        m[i][0] = INF
    return Dbm(z.clocks, tuple(map(tuple, m)))


def reset_and_elapse(z: Dbm, resets: Iterable[str]) -> Dbm:
    if is_empty(z):
        return z
    return canonicalize(up(reset(z, resets)))


def normalize_k(z: Dbm, max_consts: Mapping[str, int]) -> Dbm:
    """Classic k-extrapolation: forget bounds beyond each clock's maximal constant."""
    if is_empty(z):
        return z
    k = [0] + [max_consts[c] for c in z.clocks]
    n = z.dim
    m = [list(r) for r in z.matrix]
    changed = False
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            raw = m[i][j]
            if raw == INF:
                continue
            if i != 0 and raw > _raw(k[i], False):
                m[i][j] = INF
                changed = True
            elif raw < _raw(-k[j], True):
                m[i][j] = _raw(-k[j], True)
                changed = True
    if not changed:
        return z
    return canonicalize(Dbm(z.clocks, tuple(map(tuple, m))))


def dbm_equal(z1: Dbm, z2: Dbm) -> bool:
    if z1.clocks != z2.clocks:
        raise ValueError(f"clock sets differ: {z1.clocks} vs {z2.clocks}")
    return canonicalize(z1).matrix == canonicalize(z2).matrix
