"""Weil q-polynomial domain: prime powers, half-coefficient tuples, the
symmetric expansion, the real Weil transform, and the exact Weil-property
and ordinarity tests.

A Weil q-polynomial of dimension g is monic of degree 2g with integer
coefficients and every complex root of modulus sqrt(q). The membership
test here never touches floating point: it maps the polynomial to its
real Weil transform h (degree g) and counts real roots of h in
[-2*sqrt(q), 2*sqrt(q)] with exact Sturm sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .exactnum import (
    IntPoly,
    QuadraticValue,
    eval_list_qv,
    max_int_leq,
    sign_pair,
    squarefree_part,
    sturm_chain_list,
    sturm_count_real_roots_in,
)


@dataclass(frozen=True)
class PrimePower:
    """Field size q = p^v with p prime and v >= 1."""

    q: int
    p: int
    v: int

    def __post_init__(self) -> None:
        if self.v < 1 or self.p < 2 or self.p**self.v != self.q:
            raise ValueError(f"inconsistent prime power ({self.q}, {self.p}, {self.v})")
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def from_q(cls, q: int) -> "PrimePower":
        """Factor q by trial division; rejects non-prime-powers."""
        if q < 2:
            raise ValueError(f"field size must be >= 2, got {q}")
        n, p = q, None
        d = 2
        while d * d <= n:
            if n % d == 0:
                p = d
                break
            d += 1
        if p is None:
            return cls(q, q, 1)
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        if n != 1:
            raise ValueError(f"{q} is not a prime power")
        return cls(q, p, v)

    def __str__(self) -> str:
        return str(self.q)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def as_prime_power(q: "int | PrimePower") -> PrimePower:
    return q if isinstance(q, PrimePower) else PrimePower.from_q(q)


@dataclass(frozen=True)
class CoeffTuple:
    """Half-coefficient vector (a_1, ..., a_g) of a q-symmetric monic
    polynomial of degree 2g; a_i is the coefficient of x^(2g-i)."""

    q: PrimePower
    g: int
    a: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.g < 1:
            raise ValueError("dimension must be >= 1")
        if len(self.a) != self.g:
            raise ValueError(f"expected {self.g} coefficients, got {len(self.a)}")

    @classmethod
    def of(cls, q: "int | PrimePower", a: "tuple[int, ...] | list[int]") -> "CoeffTuple":
        a = tuple(a)
        return cls(as_prime_power(q), len(a), a)

    def __str__(self) -> str:
        return f"q={self.q.q} g={self.g} a=[{','.join(str(c) for c in self.a)}]"

    def csv_row(self) -> str:
        return ",".join(str(v) for v in (self.q.q, self.g) + self.a)


@dataclass(frozen=True)
class WeilPoly:
    """A certified Weil q-polynomial: construction runs the exact test."""

    q: PrimePower
    g: int
    coeffs: IntPoly

    def __post_init__(self) -> None:
        if not is_weil(self.coeffs, self.q):
            raise ValueError(f"{self.coeffs} is not a Weil {self.q.q}-polynomial")
        if self.coeffs.degree != 2 * self.g:
            raise ValueError("degree does not match dimension")

    @classmethod
    def from_poly(cls, f: IntPoly, q: "int | PrimePower") -> "WeilPoly":
        qq = as_prime_power(q)
        if f.degree < 2 or f.degree % 2:
            raise ValueError("need even degree >= 2")
        return cls(qq, f.degree // 2, f)

    @classmethod
    def from_tuple(cls, t: CoeffTuple) -> "WeilPoly":
        return cls(t.q, t.g, expand(t))

    def half_coeffs(self) -> CoeffTuple:
        n = 2 * self.g
        return CoeffTuple(self.q, self.g, tuple(self.coeffs[n - i] for i in range(1, self.g + 1)))

    def __str__(self) -> str:
        return str(self.coeffs)


@dataclass(frozen=True)
class RealWeilPoly:
    """Monic degree-g image of a Weil polynomial under x + q/x; totally
    real with roots in [-2*sqrt(q), 2*sqrt(q)]."""

    q: PrimePower
    g: int
    h: IntPoly

    def __post_init__(self) -> None:
        if self.h.degree != self.g or not self.h.is_monic():
            raise ValueError("transform must be monic of degree g")


# ---------------------------------------------------------------------------
# Symmetric expansion and its inverse
# ---------------------------------------------------------------------------


def expand(t: CoeffTuple) -> IntPoly:
    """The q-symmetric monic polynomial with top half (a_1, ..., a_g):

        (x^(2g) + q^g) + sum_{i<g} a_i (x^(2g-i) + q^(g-i) x^i) + a_g x^g
    """
    q, g, a = t.q.q, t.g, t.a
    cs = [0] * (2 * g + 1)
    cs[2 * g] = 1
    cs[0] = q**g
    for i in range(1, g):
        cs[2 * g - i] += a[i - 1]
        cs[i] += a[i - 1] * q ** (g - i)
    cs[g] += a[g - 1]
    return IntPoly(cs)


def is_q_symmetric(f: IntPoly, q: "int | PrimePower") -> bool:
    """Whether coefficient of x^(g-i) equals q^i * coefficient of x^(g+i)."""
    qq = as_prime_power(q).q
    n = f.degree
    if n < 2 or n % 2:
        return False
    g = n // 2
    return all(f[g - i] == qq**i * f[g + i] for i in range(1, g + 1))


@lru_cache(maxsize=None)
def _transform_basis(q: int, kmax: int) -> tuple[tuple[int, ...], ...]:
    """Polynomials P_k(t) with x^k + (q/x)^k = P_k(x + q/x).

    P_0 = 2, P_1 = t, P_{k+1} = t*P_k - q*P_{k-1}; coefficient tuples are
    lowest degree first.
    """
    basis: list[tuple[int, ...]] = [(2,), (0, 1)]
    while len(basis) <= kmax:
        prev, cur = basis[-2], basis[-1]
        nxt = [0] + list(cur)
        for i, c in enumerate(prev):
            nxt[i] -= q * c
        basis.append(tuple(nxt))
    return tuple(basis)


def real_weil_coeffs(q: int, g: int, a: "tuple[int, ...]") -> list[int]:
    """Coefficients (lowest first) of the real Weil transform of the
    expansion of (a_1, ..., a_g): h = P_g + sum_{j<g} a_j P_{g-j} + a_g."""
    basis = _transform_basis(q, g)
    h = list(basis[g])
    for j in range(1, g):
        pj = basis[g - j]
        aj = a[j - 1]
        if aj:
            for i, c in enumerate(pj):
                h[i] += aj * c
    h[0] += a[g - 1]
    return h


def to_real_weil(f: IntPoly, q: "int | PrimePower") -> RealWeilPoly:
    """Invert F(x) = x^g * h(x + q/x) for q-symmetric monic F of degree 2g."""
    qq = as_prime_power(q)
    if not f.is_monic() or f.degree < 2 or f.degree % 2:
        raise ValueError("need a monic polynomial of even degree >= 2")
    if not is_q_symmetric(f, qq):
        raise ValueError(f"{f} does not satisfy the q-symmetry identity")
    g = f.degree // 2
    a = tuple(f[2 * g - i] for i in range(1, g + 1))
    return RealWeilPoly(qq, g, IntPoly(real_weil_coeffs(qq.q, g, a)))


def from_real_weil(h: RealWeilPoly) -> IntPoly:
    """Expand x^g * h(x + q/x) back to degree 2g."""
    q, g = h.q.q, h.g
    out = IntPoly()
    x2q = IntPoly([q, 0, 1])
    pw = IntPoly([1])
    for k in range(g + 1):
        c = h.h[k]
        if c:
            out = out + IntPoly.x_power(g - k, c) * pw
        if k < g:
            pw = pw * x2q
    return out


# ---------------------------------------------------------------------------
# Membership tests
# ---------------------------------------------------------------------------


def _h_all_roots_real_in_range(q: int, h: list[int]) -> bool:
    """Whether every root of h (with multiplicity) is real and lies in
    [-2*sqrt(q), 2*sqrt(q)].

    Counts distinct real roots of the squarefree part in (-2rq, 2rq] by
    Sturm variations, adds an exact zero test at -2rq, and compares with
    the number of distinct complex roots.
    """
    sf = squarefree_part(IntPoly(h))
    d = sf.degree
    if d == 0:
        return True
    chain = sturm_chain_list(list(sf.coeffs))
    vlo = _variations_at_pair(chain, 0, -2, q)
    vhi = _variations_at_pair(chain, 0, 2, q)
    count = vlo - vhi
    alo, blo = eval_list_qv(sf.coeffs, 0, -2, q)
    if sign_pair(alo, blo, q) == 0:
        count += 1
    return count == d


def _variations_at_pair(chain: list[list[int]], a: int, b: int, q: int) -> int:
    last = 0
    changes = 0
    for cs in chain:
        ra, rb = eval_list_qv(cs, a, b, q)
        s = sign_pair(ra, rb, q)
        if s != 0:
            if last and s != last:
                changes += 1
            last = s
    return changes


def is_weil_tuple(q: int, g: int, a: "tuple[int, ...]") -> bool:
    """Fast Weil test for the expansion of a half-coefficient tuple."""
    return _h_all_roots_real_in_range(q, real_weil_coeffs(q, g, a))


def is_weil(f: IntPoly, q: "int | PrimePower") -> bool:
    """Exact test: all complex roots of f have modulus sqrt(q).

    Requires f monic of even degree >= 2 (raises otherwise). Returns False
    for polynomials violating the q-symmetry identity, which roots of
    modulus sqrt(q) force in every characteristic-polynomial context
    handled here.
    """
    qq = as_prime_power(q)
    if not f.is_monic():
        raise ValueError("Weil test needs a monic polynomial")
    if f.degree < 2 or f.degree % 2:
        raise ValueError("Weil test needs even degree >= 2")
    if not is_q_symmetric(f, qq):
        return False
    g = f.degree // 2
    a = tuple(f[2 * g - i] for i in range(1, g + 1))
    return is_weil_tuple(qq.q, g, a)


def dh_condition(t: CoeffTuple) -> bool:
    """DiPippo-Howe sufficient condition on (a_1, ..., a_g):

        |a_g| / (2 q^(g/2)) + sum_{i<g} |a_i| / q^(i/2)  <=  1,

    together with gcd(a_g, q) = 1. Evaluated exactly by clearing the
    denominators to integer-plus-integer*sqrt(q) form.
    """
    q, g, a = t.q.q, t.g, t.a
    if gcd(a[g - 1], q) != 1:
        return False
    # Scale by 2*q^(g/2): LHS becomes |a_g| + sum 2|a_i| q^((g-i)/2).
    ia, ib = abs(a[g - 1]), 0
    for i in range(1, g):
        e = g - i
        term = 2 * abs(a[i - 1]) * q ** (e // 2)
        if e % 2 == 0:
            ia += term
        else:
            ib += term
    if g % 2 == 0:
        ra, rb = 2 * q ** (g // 2), 0
    else:
        ra, rb = 0, 2 * q ** (g // 2)
    return sign_pair(ra - ia, rb - ib, q) >= 0


def is_ordinary(w: WeilPoly) -> bool:
    """Whether the middle coefficient is coprime to the characteristic."""
    return w.coeffs[w.g] % w.q.p != 0


def is_ordinary_tuple(q: PrimePower, a: "tuple[int, ...]") -> bool:
    return a[-1] % q.p != 0


# ---------------------------------------------------------------------------
# Exact bound helpers shared by the enumerators
# ---------------------------------------------------------------------------


def floor_sqrt_multiple(q: int, c: int, e: int) -> int:
    """floor(c * q^(e/2)) for nonnegative integers c, e."""
    if e % 2 == 0:
        return c * q ** (e // 2)
    return QuadraticValue(0, c * q ** ((e - 1) // 2), q).floor()


def max_budget_multiplier(budget: QuadraticValue, unit_a: int, unit_b: int) -> int:
    """Largest m >= -1 with m * (unit_a + unit_b*sqrt(q)) <= budget.

    The unit must be positive. Returns -1 when even m = 0 fails (cannot
    happen for nonnegative budgets).
    """
    q = budget.q
    if unit_b == 0:
        return max_int_leq(budget, unit_a)
    if unit_a != 0:
        raise ValueError("unit must be integer or pure sqrt multiple")
    # m * unit_b * sqrt(q) <= A + B sqrt(q)  <=>  m * unit_b * q <= A*sqrt(q) + B*q
    scaled = QuadraticValue(budget.b * q, budget.a, q)
    return max_int_leq(scaled, unit_b * q)
