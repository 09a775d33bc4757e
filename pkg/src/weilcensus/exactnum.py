"""Exact arithmetic substrate: quadratic irrationals a + b*sqrt(q), integer
polynomials, and Sturm-sequence real-root counting.

Every verdict produced here is decided by arbitrary-precision integer
arithmetic; no floating point is used anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable, Iterator, Sequence


# ---------------------------------------------------------------------------
# Quadratic values a + b*sqrt(q)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticValue:
    """Exact number a + b*sqrt(q) with integer a, b and radicand q >= 2."""

    a: int
    b: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ValueError(f"radicand must be >= 2, got {self.q}")

    def _check_compatible(self, other: "QuadraticValue") -> None:
        if self.q != other.q:
            raise ValueError(f"mixed radicands {self.q} and {other.q}")

    def __add__(self, other: "QuadraticValue") -> "QuadraticValue":
        self._check_compatible(other)
        return QuadraticValue(self.a + other.a, self.b + other.b, self.q)

    def __sub__(self, other: "QuadraticValue") -> "QuadraticValue":
        self._check_compatible(other)
        return QuadraticValue(self.a - other.a, self.b - other.b, self.q)

    def __neg__(self) -> "QuadraticValue":
        return QuadraticValue(-self.a, -self.b, self.q)

    def __mul__(self, other: "QuadraticValue | int") -> "QuadraticValue":
        if isinstance(other, int):
            return QuadraticValue(self.a * other, self.b * other, self.q)
        self._check_compatible(other)
        return QuadraticValue(
            self.a * other.a + self.b * other.b * self.q,
            self.a * other.b + self.b * other.a,
            self.q,
        )

    __rmul__ = __mul__

    def sign(self) -> int:
        return qv_sign(self)

    def is_zero(self) -> bool:
        # For square q the representation is not canonical: test the sign.
        return qv_sign(self) == 0

    def __lt__(self, other: "QuadraticValue") -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: "QuadraticValue") -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: "QuadraticValue") -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: "QuadraticValue") -> bool:
        return (self - other).sign() >= 0

    def floor(self) -> int:
        """Largest integer <= a + b*sqrt(q)."""
        if self.b >= 0:
            return self.a + isqrt(self.b * self.b * self.q)
        r = self.b * self.b * self.q
        s = isqrt(r)
        # floor(b*sqrt(q)) for b < 0 is -ceil(|b|*sqrt(q))
        return self.a - s - (0 if s * s == r else 1)

    def __str__(self) -> str:
        return f"{self.a} + {self.b}*sqrt({self.q})"


def qv_sign(v: QuadraticValue) -> int:
    """Exact sign of a + b*sqrt(q), in {-1, 0, +1}.

    Decided by comparing a^2 with b^2*q when a and b have opposite signs;
    never evaluates the square root.
    """
    a, b = v.a, v.b
    if a == 0 and b == 0:
        return 0
    if a >= 0 and b >= 0:
        return 1
    if a <= 0 and b <= 0:
        return -1
    # Opposite signs: a + b*sqrt(q) > 0 iff a^2 > b^2*q when a > 0,
    # and iff b^2*q > a^2 when b > 0.
    d = a * a - b * b * v.q
    if d == 0:
        return 0  # only possible when q is a perfect square
    if a > 0:
        return 1 if d > 0 else -1
    return 1 if d < 0 else -1


def max_int_leq(v: QuadraticValue, scale: int) -> int:
    """Largest integer m with m*scale <= v, for positive integer scale."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    m = v.floor() // scale
    # floor(v)//scale can undershoot by one; it never overshoots.
    while QuadraticValue(v.a - (m + 1) * scale, v.b, v.q).sign() >= 0:
        m += 1
    while QuadraticValue(v.a - m * scale, v.b, v.q).sign() < 0:
        m -= 1
    return m


# ---------------------------------------------------------------------------
# Integer polynomials (dense, lowest degree first)
# ---------------------------------------------------------------------------


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with arbitrary-precision integer coefficients.

    ``coeffs[i]`` is the coefficient of x^i; the leading coefficient is
    nonzero unless the polynomial is zero (empty tuple).
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    @classmethod
    def from_high(cls, coeffs: Iterable[int]) -> "IntPoly":
        """Build from a highest-degree-first coefficient list."""
        return cls(reversed(list(coeffs)))

    @classmethod
    def x_power(cls, k: int, c: int = 1) -> "IntPoly":
        return cls([0] * k + [c])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> int:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[i] + other[i] for i in range(n))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self[i] - other[i] for i in range(n))

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __mul__(self, other: "IntPoly | int") -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        return IntPoly(poly_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def derivative(self) -> "IntPoly":
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def eval_int(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_qv(self, v: QuadraticValue) -> QuadraticValue:
        """Exact evaluation at a + b*sqrt(q) by Horner in Z[sqrt(q)]."""
        ra, rb = 0, 0
        for c in reversed(self.coeffs):
            ra, rb = ra * v.a + rb * v.b * v.q + c, ra * v.b + rb * v.a
        return QuadraticValue(ra, rb, v.q)

    def content(self) -> int:
        return poly_content(self.coeffs)

    def primitive_part(self) -> "IntPoly":
        c = self.content()
        if c <= 1:
            return self
        return IntPoly(k // c for k in self.coeffs)

    def __str__(self) -> str:
        return render_poly(self.coeffs)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Convolution product of two coefficient sequences (lowest first)."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def poly_content(coeffs: Sequence[int]) -> int:
    g = 0
    for c in coeffs:
        g = gcd(g, c)
        if g == 1:
            return 1
    return g


def poly_divrem(f: IntPoly, d: IntPoly) -> tuple[IntPoly, IntPoly, bool]:
    """Divide f by d.

    For monic d this is exact euclidean division and the flag is True.
    Otherwise performs pseudo-division lc(d)^k * f = quot*d + rem and the
    flag reports whether the plain (unscaled) division happened to be exact
    over the integers (k == 0).
    """
    if d.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if f.degree < d.degree:
        return IntPoly(), f, True
    if d.is_monic():
        rem = list(f.coeffs)
        dd = d.degree
        quot = [0] * (f.degree - dd + 1)
        for i in range(f.degree - dd, -1, -1):
            c = rem[i + dd]
            if c:
                quot[i] = c
                for j, dc in enumerate(d.coeffs):
                    rem[i + j] -= c * dc
        return IntPoly(quot), IntPoly(rem), True
    quot, rem, _ = _pseudo_divrem(f, d)
    return quot, rem, False


def _pseudo_divrem(f: IntPoly, d: IntPoly) -> tuple[IntPoly, IntPoly, int]:
    """Pseudo-division: lc(d)^k * f = quot*d + rem, deg rem < deg d.

    Returns (quot, rem, k) with k = deg f - deg d + 1 scalings applied.
    """
    lc = d.leading
    dd = d.degree
    k = f.degree - dd + 1
    rem = list(f.coeffs)
    quot = [0] * k
    for i in range(k - 1, -1, -1):
        c = rem[i + dd]  # read before scaling so lc*c - c*lc cancels exactly
        for j in range(len(rem)):
            rem[j] *= lc
        for j in range(len(quot)):
            quot[j] *= lc
        quot[i] = c
        if c:
            for j, dc in enumerate(d.coeffs):
                rem[i + j] -= c * dc
    return IntPoly(quot), IntPoly(rem), k


def try_exact_div(f: IntPoly, d: IntPoly) -> IntPoly | None:
    """Quotient f/d if d divides f exactly over the integers, else None."""
    if d.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if f.is_zero():
        return IntPoly()
    if d.is_monic():
        q, r, _ = poly_divrem(f, d)
        return q if r.is_zero() else None
    # Non-monic: divide over Q via pseudo-division, then check integrality.
    q, r, k = _pseudo_divrem(f, d)
    if not r.is_zero():
        return None
    scale = d.leading**k
    if any(c % scale for c in q.coeffs):
        return None
    return IntPoly(c // scale for c in q.coeffs)


def poly_gcd(f: IntPoly, d: IntPoly) -> IntPoly:
    """Greatest common divisor over Z, primitive with positive leading
    coefficient. Uses a primitive pseudo-remainder sequence to keep
    coefficients small."""
    a, b = f.primitive_part(), d.primitive_part()
    if a.is_zero():
        a, b = b, a
    while not b.is_zero():
        if a.degree < b.degree:
            a, b = b, a
            continue
        _, r, _ = _pseudo_divrem(a, b)
        a, b = b, r.primitive_part()
    if a.is_zero():
        return a
    cf = gcd(f.content(), d.content())
    if a.leading < 0:
        a = -a
    return a * cf if cf > 1 else a


def squarefree_part(f: IntPoly) -> IntPoly:
    """f divided by gcd(f, f'), primitive with positive leading coefficient."""
    if f.is_zero():
        raise ValueError("zero polynomial has no squarefree part")
    if f.degree == 0:
        return IntPoly([1])
    g = poly_gcd(f, f.derivative())
    if g.degree == 0:
        sf = f.primitive_part()
    else:
        q = try_exact_div(f.primitive_part(), g)
        if q is None:
            # gcd is primitive, so it divides the primitive part exactly.
            raise AssertionError("gcd does not divide its polynomial")
        sf = q.primitive_part()
    return -sf if sf.leading < 0 else sf


def render_poly(coeffs: Sequence[int], var: str = "x") -> str:
    """Render like "x^4 + 3*x^2 + 4" (descending powers, zero terms omitted)."""
    if not any(coeffs):
        return "0"
    parts: list[str] = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            xs = var if i == 1 else f"{var}^{i}"
            body = xs if mag == 1 else f"{mag}*{xs}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Sturm sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SturmChain:
    """Signed-remainder chain of primitive parts, ending at a nonzero
    constant for squarefree input."""

    polys: tuple[IntPoly, ...]

    @classmethod
    def of(cls, p: IntPoly) -> "SturmChain":
        if p.is_zero():
            raise ValueError("cannot build a Sturm chain of the zero polynomial")
        chain = [p.primitive_part()]
        if p.degree >= 1:
            chain.append(p.derivative().primitive_part())
            while not chain[-1].is_zero() and chain[-1].degree > 0:
                prev, cur = chain[-2], chain[-1]
                r, _, k_sign = _signed_prem(prev, cur)
                if r.is_zero():
                    break
                chain.append(r)
        return cls(tuple(chain))

    def variations_at(self, x: QuadraticValue) -> int:
        signs = [p.eval_qv(x).sign() for p in self.polys]
        return _count_sign_changes(signs)


def _signed_prem(f: IntPoly, d: IntPoly) -> tuple[IntPoly, IntPoly, int]:
    """Primitive part of -(f mod d), with the pseudo-division scaling sign
    corrected so the result is a positive multiple of the true negated
    remainder (required for Sturm sign counting)."""
    q, r, k = _pseudo_divrem(f, d)
    mult_sign = 1 if (d.leading > 0 or k % 2 == 0) else -1
    r = r.primitive_part()
    return (-r if mult_sign > 0 else r), q, mult_sign


def _count_sign_changes(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for x, y in zip(nz, nz[1:]) if x != y)


def sturm_count_real_roots_in(
    p: IntPoly, lo: QuadraticValue, hi: QuadraticValue
) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi].

    Works on the squarefree part internally, so repeated roots are counted
    once. Endpoints are evaluated exactly as quadratic values; with the
    zero-skipping variation count, a root at lo is excluded and a root at
    hi is included.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    if not (lo < hi):
        raise ValueError("need lo < hi")
    sf = squarefree_part(p)
    if sf.degree <= 0:
        return 0
    chain = SturmChain.of(sf)
    return chain.variations_at(lo) - chain.variations_at(hi)


# ---------------------------------------------------------------------------
# Fast path on raw coefficient lists (hot loops in the enumerators)
# ---------------------------------------------------------------------------


def _list_primitive(cs: list[int]) -> list[int]:
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        return cs
    g = 0
    for c in cs:
        g = gcd(g, c)
        if g == 1:
            return cs
    return [c // g for c in cs]


def _list_prem_neg(f: list[int], d: list[int]) -> list[int]:
    """Primitive part of -(f mod d) with positive scaling, on raw lists."""
    lc = d[-1]
    dd = len(d) - 1
    k = len(f) - len(d) + 1
    rem = list(f)
    for i in range(k - 1, -1, -1):
        c = rem[i + dd]
        for j in range(len(rem)):
            rem[j] *= lc
        if c:
            for j in range(len(d)):
                rem[i + j] -= c * d[j]
    rem = _list_primitive(rem)
    if lc < 0 and k % 2 == 1:
        return rem
    return [-c for c in rem]


def sturm_chain_list(p: list[int]) -> list[list[int]]:
    """Sturm chain on raw lowest-first coefficient lists (p squarefree)."""
    p = _list_primitive(list(p))
    chain = [p]
    if len(p) > 1:
        d = _list_primitive([i * c for i, c in enumerate(p) if i > 0])
        chain.append(d)
        while len(chain[-1]) > 1:
            r = _list_prem_neg(chain[-2], chain[-1])
            if not r:
                break
            chain.append(r)
    return chain


def eval_list_qv(cs: Sequence[int], a: int, b: int, q: int) -> tuple[int, int]:
    """Evaluate a coefficient list at a + b*sqrt(q); returns (A, B) parts."""
    ra, rb = 0, 0
    for c in reversed(cs):
        ra, rb = ra * a + rb * b * q + c, ra * b + rb * a
    return ra, rb


def sign_pair(a: int, b: int, q: int) -> int:
    """Sign of a + b*sqrt(q) on raw integers (same rule as qv_sign)."""
    if a == 0 and b == 0:
        return 0
    if a >= 0 and b >= 0:
        return 1
    if a <= 0 and b <= 0:
        return -1
    d = a * a - b * b * q
    if d == 0:
        return 0
    if a > 0:
        return 1 if d > 0 else -1
    return 1 if d < 0 else -1
