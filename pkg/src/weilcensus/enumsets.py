"""Pruned exact enumerators for coefficient families of Weil q-polynomials.

Supported families (over half-coefficient tuples (a_1, ..., a_g)):

  X             unit-budget region: |a_g|/(2 q^(g/2)) + sum_{i<g} |a_i|/q^(i/2) <= 1,
                with gcd(a_g, q) = 1 (the DiPippo-Howe region)
  Y             shrunk per-coordinate region: every normalized coordinate <= 1/g,
                with gcd(a_g, q) = 1
  Z(n)          prefix region: tuples of length g-n with |a_i|/q^(i/2) <= 1/g
  ALL           every Weil q-polynomial of dimension g (exact membership test)
  ALL_ORDINARY  the ordinary subset of ALL

All interval arithmetic is exact; enumeration order is lexicographic in
(a_1, ..., a_g). ALL enumeration walks the unconditional coefficient box
with necessary-condition pruning (power-sum bounds and Newton's
inequalities on the partial real Weil transform); pruning never changes
the emitted set, which is fixed by the final membership test.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from .exactnum import QuadraticValue, max_int_leq
from .weilpoly import (
    CoeffTuple,
    PrimePower,
    _h_all_roots_real_in_range,
    _transform_basis,
    as_prime_power,
    floor_sqrt_multiple,
)

XY_MAX_G = 8
ALL_MAX_G = 4

ENUM_CAPS = {"xy_max_g": XY_MAX_G, "all_max_g": ALL_MAX_G}


class SetKind(Enum):
    X = "X"
    Y = "Y"
    Z = "Z"
    ALL = "ALL"
    ALL_ORDINARY = "ALL_ORDINARY"


@dataclass(frozen=True)
class EnumSpec:
    """One enumeration request: field size, dimension, family, optional n."""

    q: PrimePower
    g: int
    kind: SetKind
    n: int | None = None

    def __post_init__(self) -> None:
        if self.g < 1:
            raise ValueError("dimension must be >= 1")
        if self.kind is SetKind.Z:
            if self.n is None or not (1 <= self.n and 2 * self.n <= self.g):
                raise ValueError("Z requires n with 1 <= n <= g/2")
        elif self.n is not None:
            raise ValueError(f"n is only meaningful for Z, not {self.kind.value}")
        if self.kind in (SetKind.ALL, SetKind.ALL_ORDINARY):
            if self.g > ALL_MAX_G:
                raise ValueError(f"{self.kind.value} enumeration is capped at g <= {ALL_MAX_G}")
        elif self.g > XY_MAX_G:
            raise ValueError(f"{self.kind.value} enumeration is capped at g <= {XY_MAX_G}")

    @classmethod
    def of(cls, q: "int | PrimePower", g: int, kind: "str | SetKind", n: int | None = None) -> "EnumSpec":
        k = kind if isinstance(kind, SetKind) else SetKind(kind)
        return cls(as_prime_power(q), g, k, n)

    @property
    def length(self) -> int:
        """Length of emitted tuples (g - n for Z, else g)."""
        return self.g - self.n if self.kind is SetKind.Z else self.g


@dataclass(frozen=True)
class RangePartition:
    """Disjoint integer intervals tiling one coefficient's admissible range."""

    index: int
    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prev_hi = None
        for lo, hi in self.intervals:
            if lo > hi:
                raise ValueError("empty interval in partition")
            if prev_hi is not None and lo <= prev_hi:
                raise ValueError("partition intervals must be ascending and disjoint")
            prev_hi = hi


# ---------------------------------------------------------------------------
# Exact per-coordinate bounds
# ---------------------------------------------------------------------------


def _budget_start(q: int, g: int) -> QuadraticValue:
    """2*q^(g/2) as an exact quadratic value."""
    if g % 2 == 0:
        return QuadraticValue(2 * q ** (g // 2), 0, q)
    return QuadraticValue(0, 2 * q ** ((g - 1) // 2), q)


def _budget_term(q: int, g: int, i: int, ai: int) -> QuadraticValue:
    """2*|a_i|*q^((g-i)/2) as an exact quadratic value (for i < g)."""
    e = g - i
    c = 2 * abs(ai) * q ** (e // 2)
    if e % 2 == 0:
        return QuadraticValue(c, 0, q)
    return QuadraticValue(0, 2 * abs(ai) * q ** ((e - 1) // 2), q)


def _budget_max(budget: QuadraticValue, q: int, g: int, i: int) -> int:
    """Largest m >= 0 with the scaled term of a_i = m within budget; -1 if none."""
    if budget.sign() < 0:
        return -1
    if i == g:
        return budget.floor()
    e = g - i
    if e % 2 == 0:
        return max_int_leq(budget, 2 * q ** (e // 2))
    # m * 2 q^((e-1)/2) sqrt(q) <= A + B sqrt(q)  <=>  m * 2 q^((e+1)/2) <= B q + A sqrt(q)
    scaled = QuadraticValue(budget.b * q, budget.a, q)
    return max_int_leq(scaled, 2 * q ** ((e + 1) // 2))


@lru_cache(maxsize=None)
def _y_bound(q: int, g: int, i: int) -> int:
    """Largest m with m <= q^(i/2)/g (i < g) or m <= 2 q^(g/2)/g (i = g)."""
    c, e = (2, g) if i == g else (1, i)
    if e % 2 == 0:
        return c * q ** (e // 2) // g
    return max_int_leq(QuadraticValue(0, c * q ** ((e - 1) // 2), q), g)


@lru_cache(maxsize=None)
def _box_bound(q: int, g: int, i: int) -> int:
    """floor(C(2g, i) * q^(i/2)): unconditional bound from roots of modulus sqrt(q)."""
    return floor_sqrt_multiple(q, comb(2 * g, i), i)


def admissible_range(spec: EnumSpec, prefix: Sequence[int]) -> tuple[int, int]:
    """Exact integer interval (lo, hi) for the next coefficient given a prefix.

    Returns lo > hi for an empty interval. For X the interval shrinks with
    the exact residual budget; for Y and Z it is prefix-independent; for
    ALL / ALL_ORDINARY it is the unconditional coefficient box.
    """
    q, g = spec.q.q, spec.g
    i = len(prefix) + 1
    if i > spec.length:
        raise ValueError("prefix already complete")
    if spec.kind is SetKind.X:
        budget = _budget_start(q, g)
        for j, aj in enumerate(prefix, start=1):
            budget = budget - _budget_term(q, g, j, aj)
        m = _budget_max(budget, q, g, i)
    elif spec.kind in (SetKind.Y, SetKind.Z):
        m = _y_bound(q, g, i)  # Z positions stop at g-n < g
    else:
        m = _box_bound(q, g, i)
    return (1, 0) if m < 0 else (-m, m)


# ---------------------------------------------------------------------------
# Enumeration walks
# ---------------------------------------------------------------------------


def _iter_budget(
    q: int, p: int, g: int, coprime_last: bool, bounds_kind: str, interval: tuple[int, int] | None
) -> Iterator[tuple[int, ...]]:
    """Lexicographic walk for X (nested budget) and Y/Z (independent bounds)."""
    length = g
    prefix: list[int] = []

    def rec(i: int, budget: QuadraticValue) -> Iterator[tuple[int, ...]]:
        if bounds_kind == "x":
            m = _budget_max(budget, q, g, i)
        else:
            m = _y_bound(q, g, i)
        if m < 0:
            return
        lo, hi = -m, m
        if i == 1 and interval is not None:
            lo, hi = max(lo, interval[0]), min(hi, interval[1])
        for v in range(lo, hi + 1):
            if i == length:
                if coprime_last and v % p == 0:
                    continue
                yield tuple(prefix) + (v,)
            else:
                prefix.append(v)
                nb = budget - _budget_term(q, g, i, v) if bounds_kind == "x" else budget
                yield from rec(i + 1, nb)
                prefix.pop()

    yield from rec(1, _budget_start(q, g))


def _iter_z(q: int, g: int, n: int, interval: tuple[int, int] | None) -> Iterator[tuple[int, ...]]:
    length = g - n
    prefix: list[int] = []

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        m = _y_bound(q, g, i)
        if m < 0:
            return
        lo, hi = -m, m
        if i == 1 and interval is not None:
            lo, hi = max(lo, interval[0]), min(hi, interval[1])
        for v in range(lo, hi + 1):
            if i == length:
                yield tuple(prefix) + (v,)
            else:
                prefix.append(v)
                yield from rec(i + 1)
                prefix.pop()

    yield from rec(1)


@lru_cache(maxsize=None)
def _all_walk_tables(q: int, g: int):
    """Precomputed tables for the ALL walk: power-sum bounds, boxes, the
    partial real-Weil-transform matrix, and transform coefficient bounds."""
    basis = _transform_basis(q, g)
    # trans[k][j] = coefficient of t^(g-k) in P_(g-j) for j = 0..k-1 (j=0 is P_g)
    trans = []
    for k in range(g + 1):
        row = []
        for j in range(min(k, g)):
            pj = basis[g - j]
            deg = g - k
            row.append(pj[deg] if deg < len(pj) else 0)
        trans.append(tuple(row))
    sbound = tuple(floor_sqrt_multiple(q, 2 * g, k) for k in range(g + 1))
    box = tuple(_box_bound(q, g, k) if k else 0 for k in range(g + 1))
    # |h_k| <= C(g,k) (2 sqrt(q))^k, squared
    hbound2 = tuple(comb(g, k) ** 2 * 4**k * q**k for k in range(g + 1))
    binom = tuple(comb(g, k) for k in range(g + 1))
    return trans, sbound, box, hbound2, binom


def _iter_all(
    qp: PrimePower, g: int, ordinary_only: bool, interval: tuple[int, int] | None
) -> Iterator[tuple[int, ...]]:
    """Walk the coefficient box with exact necessary-condition pruning and
    run the full Weil membership test on every surviving candidate."""
    q, p = qp.q, qp.p
    trans, sbound, box, hbound2, binom = _all_walk_tables(q, g)
    cs = [1] + [0] * g  # cs[k] = a_k, with cs[0] = 1 for the monic term
    ps = [0] * (g + 1)  # ps[k] = power sum of roots
    hs = [1] + [0] * g  # hs[k] = coefficient of t^(g-k) in the transform

    def rec(k: int) -> Iterator[tuple[int, ...]]:
        # Window for a_k from |power sum| <= 2 g q^(k/2) via Newton's identity,
        # intersected with the coefficient box.
        t = sum(cs[j] * ps[k - j] for j in range(1, k))
        lo = -((sbound[k] + t) // k)
        hi = (sbound[k] - t) // k
        lo, hi = max(lo, -box[k]), min(hi, box[k])
        if k == 1 and interval is not None:
            lo, hi = max(lo, interval[0]), min(hi, interval[1])
        hbase = sum(cs[j] * trans[k][j] for j in range(k))
        for v in range(lo, hi + 1):
            if ordinary_only and k == g and v % p == 0:
                continue
            cs[k] = v
            ps[k] = -(k * v + t)
            hk = hbase + v
            if hk * hk > hbound2[k]:
                continue
            if k >= 2 and binom[k - 2]:
                # Newton's inequality on the partial transform (real-rooted
                # polynomials satisfy it at every index).
                if hs[k - 1] ** 2 * binom[k - 2] * binom[k] < hs[k - 2] * hk * binom[k - 1] ** 2:
                    continue
            hs[k] = hk
            if k == g:
                h = [hs[g - i] for i in range(g + 1)]
                if _h_all_roots_real_in_range(q, h):
                    yield tuple(cs[1:])
            else:
                yield from rec(k + 1)

    yield from rec(1)


def enumerate_set(
    spec: EnumSpec, partition: RangePartition | None = None
) -> Iterator[CoeffTuple]:
    """Stream each member exactly once, lexicographically within each
    partition interval (the whole admissible range when no partition)."""
    intervals = _validated_intervals(spec, partition)
    for interval in intervals:
        for raw in _iter_raw(spec, interval):
            yield CoeffTuple(spec.q, spec.length, raw)


def _validated_intervals(
    spec: EnumSpec, partition: RangePartition | None
) -> list[tuple[int, int] | None]:
    if partition is None:
        return [None]
    if partition.index != 1:
        raise ValueError("only partitions of the first coefficient are supported")
    full = admissible_range(spec, ())
    ivals = list(partition.intervals)
    if not ivals or ivals[0][0] != full[0] or ivals[-1][1] != full[1]:
        raise ValueError("partition does not cover the admissible range")
    for (_, h1), (l2, _) in zip(ivals, ivals[1:]):
        if l2 != h1 + 1:
            raise ValueError("partition leaves a gap")
    return list(ivals)


def _iter_raw(spec: EnumSpec, interval: tuple[int, int] | None) -> Iterator[tuple[int, ...]]:
    q, p, g = spec.q.q, spec.q.p, spec.g
    if spec.kind is SetKind.X:
        return _iter_budget(q, p, g, True, "x", interval)
    if spec.kind is SetKind.Y:
        return _iter_budget(q, p, g, True, "y", interval)
    if spec.kind is SetKind.Z:
        return _iter_z(q, g, spec.n, interval)
    if spec.kind in (SetKind.ALL, SetKind.ALL_ORDINARY) and interval is None and spec.g <= ALL_MAX_G:
        cached = _weil_tuples_cached(spec.q, spec.g)
        if spec.kind is SetKind.ALL:
            return iter(cached)
        return (a for a in cached if a[-1] % p != 0)
    return _iter_all(spec.q, g, spec.kind is SetKind.ALL_ORDINARY, interval)


def count_set(spec: EnumSpec) -> int:
    """Number of members, by the same pruned walk without materializing
    tuples (the last coordinate is counted arithmetically where the family
    has no membership filter beyond its bounds)."""
    q, p, g = spec.q.q, spec.q.p, spec.g

    if spec.kind in (SetKind.ALL, SetKind.ALL_ORDINARY):
        return sum(1 for _ in _iter_raw(spec, None))

    if spec.kind is SetKind.Z:
        total = 1
        for i in range(1, g - spec.n + 1):
            m = _y_bound(q, g, i)
            if m < 0:
                return 0
            total *= 2 * m + 1
        return total

    def coprime_count(m: int) -> int:
        if m < 0:
            return 0
        return 2 * m + 1 - (2 * (m // p) + 1)

    if spec.kind is SetKind.Y:
        total = 1
        for i in range(1, g):
            m = _y_bound(q, g, i)
            if m < 0:
                return 0
            total *= 2 * m + 1
        return total * coprime_count(_y_bound(q, g, g))

    # X: nested budget walk, closed form at the last level.
    def rec(i: int, budget: QuadraticValue) -> int:
        if i == g:
            return coprime_count(_budget_max(budget, q, g, g))
        m = _budget_max(budget, q, g, i)
        if m < 0:
            return 0
        total = rec(i + 1, budget)  # a_i = 0
        for v in range(1, m + 1):
            nb = budget - _budget_term(q, g, i, v)
            total += 2 * rec(i + 1, nb)  # +-v contribute equally
        return total

    return rec(1, _budget_start(q, g))


def make_partition(spec: EnumSpec, parts: int) -> RangePartition:
    """Split the first coefficient's admissible range into at most `parts`
    near-equal intervals; deterministic for fixed inputs."""
    if parts < 1:
        raise ValueError("parts must be >= 1")
    lo, hi = admissible_range(spec, ())
    if lo > hi:
        return RangePartition(1, ())
    width = hi - lo + 1
    k = min(parts, width)
    base, extra = divmod(width, k)
    intervals = []
    cur = lo
    for j in range(k):
        size = base + (1 if j < extra else 0)
        intervals.append((cur, cur + size - 1))
        cur += size
    return RangePartition(1, tuple(intervals))


# ---------------------------------------------------------------------------
# Materialized caches for the classifier
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _weil_tuples_cached(qp: PrimePower, g: int) -> tuple[tuple[int, ...], ...]:
    return tuple(_iter_all(qp, g, False, None))


def weil_tuples(q: "int | PrimePower", g: int) -> tuple[tuple[int, ...], ...]:
    """All half-coefficient tuples of Weil q-polynomials of dimension g,
    lexicographically sorted and cached (g within the ALL cap)."""
    if g > ALL_MAX_G:
        raise ValueError(f"Weil tuple cache is capped at g <= {ALL_MAX_G}")
    return _weil_tuples_cached(as_prime_power(q), g)
