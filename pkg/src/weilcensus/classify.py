"""Simplicity and factor structure of Weil q-polynomials.

The split search looks for factorizations into two lower-dimensional Weil
polynomials: a candidate top half (a_1, ..., a_n) determines the cofactor
coefficients one at a time by exact convolution, so each candidate costs
one reconstruction plus a membership test. Full factorization recurses on
splits and certifies each leaf irreducible by factorization degree
patterns modulo small primes, with an exact big-prime recombination
fallback.

For ordinary polynomials, simple is equivalent to irreducible (the
characteristic polynomial of an ordinary simple variety is its minimal
polynomial); non-ordinary inputs get an UNKNOWN verdict instead of a
guess.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, gcd

from .enumsets import weil_tuples
from .exactnum import IntPoly, poly_divrem, squarefree_part, try_exact_div
from .weilpoly import (
    CoeffTuple,
    PrimePower,
    WeilPoly,
    expand,
    floor_sqrt_multiple,
    is_ordinary_tuple,
    is_weil_tuple,
)


class ClassificationError(Exception):
    """Raised when factorization reaches a non-Weil or odd-degree factor
    (possible only for non-ordinary inputs)."""


class Simplicity(Enum):
    SIMPLE = "SIMPLE"
    NON_SIMPLE = "NON_SIMPLE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SimplicityVerdict:
    value: Simplicity
    reason: str

    def __post_init__(self) -> None:
        if self.value is Simplicity.UNKNOWN and self.reason != "NON_ORDINARY":
            raise ValueError("UNKNOWN verdicts arise only from non-ordinary inputs")


@dataclass(frozen=True)
class Factorization:
    """Multiset of irreducible monic factors with multiplicities; their
    product reproduces the source polynomial exactly."""

    q: PrimePower
    factors: tuple[tuple[IntPoly, int], ...]

    def product(self) -> IntPoly:
        out = IntPoly([1])
        for f, m in self.factors:
            for _ in range(m):
                out = out * f
        return out

    def dims(self) -> tuple[int, ...]:
        """Factor dimensions (degree/2) with multiplicity, descending."""
        out: list[int] = []
        for f, m in self.factors:
            out.extend([f.degree // 2] * m)
        return tuple(sorted(out, reverse=True))

    def largest_dim(self) -> int:
        return max(f.degree // 2 for f, _ in self.factors)

    def is_single_simple(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1

    def degrees_label(self) -> str:
        """'+'-joined even factor degrees with multiplicity, e.g. "2+2"."""
        degs: list[int] = []
        for f, m in self.factors:
            degs.extend([f.degree] * m)
        return "+".join(str(d) for d in sorted(degs))


# ---------------------------------------------------------------------------
# Cofactor reconstruction and the split search
# ---------------------------------------------------------------------------


def _full_coeffs_topdown(q: int, g: int, a: tuple[int, ...]) -> list[int]:
    """[A_0..A_2g] with A_j the coefficient of x^(2g-j) in the expansion."""
    out = [0] * (2 * g + 1)
    out[0] = 1
    out[2 * g] = q**g
    for i in range(1, g):
        out[i] += a[i - 1]
        out[2 * g - i] += a[i - 1] * q ** (g - i)
    out[g] += a[g - 1]
    return out


def reconstruct_cofactor(c: CoeffTuple, a: tuple[int, ...]) -> tuple[int, ...] | None:
    """Solve expand(a) * expand(b) = expand(c) for the top half b.

    Each b_i is forced in turn by comparing coefficients of x^(2g-i), so
    the only candidate is checked by one exact product at the end. Returns
    None when no cofactor exists. Requires dimensions m >= n >= 1 where
    n = len(a) and m = c.g - n.
    """
    n = len(a)
    m = c.g - n
    if not (m >= n >= 1):
        raise ValueError("need cofactor dimension m >= n >= 1")
    q = c.q.q
    A = _full_coeffs_topdown(q, n, a)
    b: list[int] = []
    for i in range(1, m + 1):
        conv = 0
        for j in range(1, min(i, 2 * n) + 1):
            if A[j]:
                bk = 1 if i == j else b[i - j - 1]
                conv += A[j] * bk
        b.append(c.a[i - 1] - conv)
    bt = tuple(b)
    lhs = expand(CoeffTuple(c.q, n, a)) * expand(CoeffTuple(c.q, m, bt))
    if lhs == expand(c):
        return bt
    return None


def find_weil_split(w: WeilPoly) -> tuple[WeilPoly, WeilPoly] | None:
    """First factorization w = A * B into Weil polynomials of dimensions
    (n, g-n), scanning n = 1..g//2 and candidate tuples lexicographically.

    Candidates are limited to the unconditional coefficient box, which
    contains the top half of every degree-2n factor; candidates that are
    not themselves Weil polynomials can never be returned, so the scan
    runs over the cached Weil tuple list. Exhaustive: returns None only
    when no such split exists.
    """
    if w.g < 2:
        raise ValueError("splits need dimension >= 2")
    c = w.half_coeffs()
    found = _find_split_raw(w.q, c.a, None)
    if found is None:
        return None
    at, bt = found
    return (
        WeilPoly.from_tuple(CoeffTuple(w.q, len(at), at)),
        WeilPoly.from_tuple(CoeffTuple(w.q, len(bt), bt)),
    )


def _find_split_raw(
    qp: PrimePower, c: tuple[int, ...], only_n: int | None
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    g = len(c)
    ct = CoeffTuple(qp, g, c)
    ns = [only_n] if only_n is not None else list(range(1, g // 2 + 1))
    for n in ns:
        for a in weil_tuples(qp, n):
            b = reconstruct_cofactor(ct, a)
            if b is not None and is_weil_tuple(qp.q, g - n, b):
                return a, b
    return None


def split_exists_at(qp: PrimePower, c: tuple[int, ...], n: int) -> bool:
    """Whether the tuple admits a Weil-factor split at dimensions (n, g-n)."""
    return _find_split_raw(qp, c, n) is not None


# ---------------------------------------------------------------------------
# GF(p) polynomial helpers (dense lists, lowest degree first)
# ---------------------------------------------------------------------------


def _gf_trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _gf_monic(f: list[int], p: int) -> list[int]:
    if not f or f[-1] == 1:
        return f
    inv = pow(f[-1], p - 2, p)
    return [c * inv % p for c in f]


def _gf_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _gf_trim(out)


def _gf_rem(f: list[int], d: list[int], p: int) -> list[int]:
    f = list(f)
    inv = pow(d[-1], p - 2, p)
    dd = len(d) - 1
    for i in range(len(f) - 1 - dd, -1, -1):
        c = f[i + dd] * inv % p
        if c:
            for j in range(dd + 1):
                f[i + j] = (f[i + j] - c * d[j]) % p
    return _gf_trim(f[:dd])


def _gf_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _gf_rem(a, b, p)
    return _gf_monic(a, p)


def _gf_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _gf_rem(base, mod, p) if len(base) >= len(mod) else list(base)
    while e:
        if e & 1:
            result = _gf_rem(_gf_mul(result, base, p), mod, p)
        base = _gf_rem(_gf_mul(base, base, p), mod, p)
        e >>= 1
    return result


def _gf_from_int(f: IntPoly, p: int) -> list[int]:
    return _gf_trim([c % p for c in f.coeffs])


def _gf_distinct_degree(f: list[int], p: int) -> list[tuple[int, list[int]]]:
    """Distinct-degree decomposition of a monic squarefree f over GF(p):
    list of (d, product of all irreducible factors of degree d)."""
    out: list[tuple[int, list[int]]] = []
    h = [0, 1]  # x
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = _gf_powmod(h, p, f, p)
        diff = list(h)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = _gf_gcd(f, _gf_trim(diff), p)
        if len(g) > 1:
            out.append((d, g))
            f = _gf_quo(f, g, p)
            h = _gf_rem(h, f, p) if len(h) >= len(f) else h
    if len(f) > 1:
        out.append((len(f) - 1, f))
    return out


def _gf_quo(f: list[int], d: list[int], p: int) -> list[int]:
    f = list(f)
    inv = pow(d[-1], p - 2, p)
    dd = len(d) - 1
    quo = [0] * (len(f) - dd)
    for i in range(len(f) - 1 - dd, -1, -1):
        c = f[i + dd] * inv % p
        quo[i] = c
        if c:
            for j in range(dd + 1):
                f[i + j] = (f[i + j] - c * d[j]) % p
    return _gf_trim(quo)


def _gf_equal_degree(f: list[int], d: int, p: int, rng: random.Random) -> list[list[int]]:
    """Cantor-Zassenhaus split of a product of degree-d irreducibles (p odd)."""
    n = len(f) - 1
    if n == d:
        return [f]
    e = (p**d - 1) // 2
    while True:
        r = [rng.randrange(p) for _ in range(n)] + [1]
        g = _gf_gcd(f, r, p)
        if 1 < len(g) < len(f):
            pass
        else:
            t = _gf_powmod(r, e, f, p)
            t = list(t)
            if not t:
                t = [0]
            t[0] = (t[0] - 1) % p
            g = _gf_gcd(f, _gf_trim(t), p)
            if not (1 < len(g) < len(f)):
                continue
        return _gf_equal_degree(g, d, p, rng) + _gf_equal_degree(_gf_quo(f, g, p), d, p, rng)


def _gf_factor_squarefree(f: list[int], p: int, seed: int) -> list[list[int]]:
    """All monic irreducible factors of a monic squarefree f over GF(p)."""
    rng = random.Random(seed)
    out: list[list[int]] = []
    for d, block in _gf_distinct_degree(f, p):
        out.extend(_gf_equal_degree(block, d, p, rng))
    return sorted(out)


# ---------------------------------------------------------------------------
# Irreducibility certification over the rationals
# ---------------------------------------------------------------------------


def _is_prime_int(n: int) -> bool:
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % sp == 0:
            return n == sp
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _squarefree_mod(f: IntPoly, p: int) -> bool:
    fp = _gf_from_int(f, p)
    if len(fp) - 1 != f.degree:
        return False  # leading coefficient vanished
    dfp = _gf_trim([i * c % p for i, c in enumerate(fp) if i > 0])
    if not dfp:
        return False
    return len(_gf_gcd(fp, dfp, p)) == 1


def _pattern_primes(f: IntPoly, q: int, count: int = 3) -> list[int]:
    """Smallest primes keeping f squarefree and not dividing q (equivalently,
    primes dividing neither q nor disc(f))."""
    out: list[int] = []
    p = 2
    while len(out) < count:
        if _is_prime_int(p) and q % p != 0 and _squarefree_mod(f, p):
            out.append(p)
        p += 1
    return out


def _degree_pattern(f: IntPoly, p: int) -> list[int]:
    """Degrees (with multiplicity) of the irreducible factors of f mod p."""
    fp = _gf_monic(_gf_from_int(f, p), p)
    degs: list[int] = []
    for d, block in _gf_distinct_degree(fp, p):
        degs.extend([d] * ((len(block) - 1) // d))
    return sorted(degs)


def _subset_sums(degs: list[int]) -> set[int]:
    sums = {0}
    for d in degs:
        sums |= {s + d for s in sums}
    return sums


def _patterns_force_irreducible(f: IntPoly, q: int) -> bool:
    """True when the intersection of possible proper-divisor degrees over
    three modular degree patterns is empty."""
    n = f.degree
    possible = set(range(1, n))
    for p in _pattern_primes(f, q):
        possible &= _subset_sums(_degree_pattern(f, p))
        if not possible:
            return True
    return False


def _factor_coeff_bound(g: int, q: int) -> int:
    """Bound on |coefficients| of any monic divisor of a Weil polynomial of
    dimension g: every divisor has roots of modulus sqrt(q)."""
    return max(floor_sqrt_multiple(q, comb(2 * g, i), i) for i in range(2 * g + 1)) + 1


def _recombination_prime(f: IntPoly, q: int, bound: int) -> int:
    p = 2 * bound + 1
    while True:
        if _is_prime_int(p) and q % p != 0 and _squarefree_mod(f, p):
            return p
        p += 1


def _lift_centered(c: int, p: int) -> int:
    c %= p
    return c - p if c > p // 2 else c


def _seed_from(f: IntPoly, p: int) -> int:
    acc = p
    for c in f.coeffs:
        acc = (acc * 1000003 + c) % (1 << 61)
    return acc


def _rational_factors(f: IntPoly, q: int) -> list[IntPoly]:
    """Irreducible monic factors of a monic squarefree f over the rationals,
    by factoring modulo one prime large enough to lift coefficients and
    recombining modular factors exactly (bounded subset search)."""
    bound = _factor_coeff_bound(f.degree // 2 + 1, q)
    p = _recombination_prime(f, q, bound)
    fp = _gf_from_int(f, p)
    modular = _gf_factor_squarefree(fp, p, _seed_from(f, p))
    found: list[IntPoly] = []
    rest = f
    while len(modular) > 1:
        hit = None
        stop = False
        for r in range(1, len(modular) // 2 + 1):
            for subset in combinations(range(len(modular)), r):
                cand = [1]
                for i in subset:
                    cand = _gf_mul(cand, modular[i], p)
                lifted = IntPoly(_lift_centered(c, p) for c in cand)
                if lifted[0] == 0 or rest[0] % lifted[0] != 0:
                    continue
                quo = try_exact_div(rest, lifted)
                if quo is not None:
                    hit = (subset, lifted, quo)
                    stop = True
                    break
            if stop:
                break
        if hit is None:
            break
        subset, lifted, quo = hit
        found.append(lifted)
        rest = quo
        modular = [m for i, m in enumerate(modular) if i not in subset]
    if rest.degree > 0:
        found.append(rest)
    return sorted(found, key=lambda g_: (g_.degree, g_.coeffs))


def irreducible_over_q(f: IntPoly, q: "int | PrimePower") -> bool:
    """Exact irreducibility test for monic f: degree patterns modulo three
    primes, with the recombination search as the deciding fallback."""
    qv = q.q if isinstance(q, PrimePower) else q
    if f.degree <= 1:
        return f.degree == 1
    sf = squarefree_part(f)
    if sf.degree != f.degree:
        return False
    if _patterns_force_irreducible(f, qv):
        return True
    return len(_rational_factors(f, qv)) == 1


# ---------------------------------------------------------------------------
# Full factorization
# ---------------------------------------------------------------------------


def factor_weil(w: WeilPoly) -> Factorization:
    """Factor into irreducibles over the rationals by recursive Weil-factor
    splitting, certifying each leaf. Raises ClassificationError when a leaf
    turns out to have an odd-degree or non-Weil irreducible factor (possible
    only for non-ordinary inputs)."""
    return _factor_checked(w.q, w.half_coeffs().a)


def _factor_checked(qp: PrimePower, a: tuple[int, ...]) -> Factorization:
    fact = Factorization(qp, _factor_raw(qp, a))
    source = expand(CoeffTuple(qp, len(a), a))
    if fact.product() != source:
        raise AssertionError(f"factor product does not reproduce {source}")
    return fact


def _factor_raw(qp: PrimePower, c: tuple[int, ...]) -> tuple[tuple[IntPoly, int], ...]:
    acc: dict[tuple[int, ...], tuple[IntPoly, int]] = {}

    def add(poly: IntPoly, mult: int) -> None:
        key = poly.coeffs
        if key in acc:
            acc[key] = (poly, acc[key][1] + mult)
        else:
            acc[key] = (poly, mult)

    def walk(t: tuple[int, ...]) -> None:
        g = len(t)
        split = _find_split_raw(qp, t, None) if g >= 2 else None
        if split is None:
            _certify_leaf(qp, t, add)
        else:
            walk(split[0])
            walk(split[1])

    walk(c)
    ordered = sorted(acc.values(), key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return tuple(ordered)


def _certify_leaf(qp: PrimePower, t: tuple[int, ...], add) -> None:
    poly = expand(CoeffTuple(qp, len(t), t))
    q = qp.q
    sf = squarefree_part(poly)
    if sf.degree == poly.degree and _patterns_force_irreducible(poly, q):
        add(poly, 1)
        return
    # Exact route: factor the squarefree part, then read off multiplicities.
    parts = _rational_factors(sf, q)
    if len(parts) == 1 and sf.degree == poly.degree:
        add(poly, 1)
        return
    rest = poly
    for part in parts:
        mult = 0
        while True:
            quo = try_exact_div(rest, part)
            if quo is None:
                break
            rest = quo
            mult += 1
        if part.degree % 2 == 1 or not is_weil_tuple_poly(qp, part):
            raise ClassificationError(
                f"irreducible factor {part} of {poly} is not a Weil polynomial "
                "(non-ordinary input)"
            )
        add(part, mult)
    if rest.degree != 0:
        raise AssertionError("multiplicity extraction left a remainder")


def is_weil_tuple_poly(qp: PrimePower, f: IntPoly) -> bool:
    """Weil membership for an arbitrary monic even-degree polynomial."""
    from .weilpoly import is_weil

    if f.degree < 2 or f.degree % 2 == 1 or not f.is_monic():
        return False
    return is_weil(f, qp)


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


def simplicity(w: WeilPoly) -> SimplicityVerdict:
    """SIMPLE iff the (ordinary) polynomial is irreducible; UNKNOWN for
    non-ordinary inputs, whose class structure needs invariants outside
    this engine's scope."""
    if not is_ordinary_tuple(w.q, w.half_coeffs().a):
        return SimplicityVerdict(Simplicity.UNKNOWN, "NON_ORDINARY")
    fact = factor_weil(w)
    if fact.is_single_simple():
        return SimplicityVerdict(Simplicity.SIMPLE, "IRREDUCIBLE_ORDINARY")
    return SimplicityVerdict(Simplicity.NON_SIMPLE, "REDUCIBLE")


def largest_simple_factor_dim(w: WeilPoly) -> int:
    """Largest dimension (degree/2) among irreducible factors; ordinary only."""
    if not is_ordinary_tuple(w.q, w.half_coeffs().a):
        raise ValueError("largest factor dimension is only defined for ordinary inputs")
    return factor_weil(w).largest_dim()


def lemma31_split(
    dims: "tuple[int, ...] | list[int]", epsilon: Fraction, g: int | None = None
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a multiset of simple-factor dimensions into two groups whose
    totals both land in [eps*g, (1-eps)*g].

    Requires 0 < eps < 1/3 and max(dims) < (1-eps)*g. If the largest part
    already reaches eps*g it goes alone; otherwise take the shortest
    descending prefix whose total exceeds eps*g.
    """
    dims = tuple(sorted(dims, reverse=True))
    if not dims or any(d < 1 for d in dims):
        raise ValueError("dims must be positive integers")
    total = sum(dims)
    if g is None:
        g = total
    elif g != total:
        raise ValueError("dims must sum to g")
    epsilon = Fraction(epsilon)
    if not (0 < epsilon < Fraction(1, 3)):
        raise ValueError("epsilon must lie in (0, 1/3)")
    eg = epsilon * g
    if dims[0] >= (1 - epsilon) * g:
        raise ValueError("largest factor already reaches (1-eps)*g")
    if dims[0] >= eg:
        return (dims[0],), dims[1:]
    acc = 0
    for k, d in enumerate(dims, start=1):
        acc += d
        if acc > eg:
            return dims[:k], dims[k:]
    raise AssertionError("cumulative sum never exceeded eps*g")


# ---------------------------------------------------------------------------
# Class records (one classified candidate)
# ---------------------------------------------------------------------------

CLASS_RECORD_COLUMNS = "q,g,a,ordinary,simplicity,largest_dim,factor_degrees"


@dataclass(frozen=True)
class ClassRecord:
    tuple: CoeffTuple
    ordinary: bool
    verdict: SimplicityVerdict
    largest_dim: int | None
    factor_degrees: str | None

    def csv_row(self) -> str:
        t = self.tuple
        fields = [str(t.q.q), str(t.g)]
        fields.extend(str(x) for x in t.a)
        fields.append("true" if self.ordinary else "false")
        fields.append(self.verdict.value.value)
        fields.append("" if self.largest_dim is None else str(self.largest_dim))
        fields.append("" if self.factor_degrees is None else self.factor_degrees)
        return ",".join(fields)


def classify_tuple(t: CoeffTuple) -> ClassRecord:
    """Classify one candidate; non-ordinary candidates get UNKNOWN verdicts
    and no factor data."""
    if not is_ordinary_tuple(t.q, t.a):
        return ClassRecord(t, False, SimplicityVerdict(Simplicity.UNKNOWN, "NON_ORDINARY"), None, None)
    fact = _factor_checked(t.q, t.a)
    if fact.is_single_simple():
        verdict = SimplicityVerdict(Simplicity.SIMPLE, "IRREDUCIBLE_ORDINARY")
    else:
        verdict = SimplicityVerdict(Simplicity.NON_SIMPLE, "REDUCIBLE")
    return ClassRecord(t, True, verdict, fact.largest_dim(), fact.degrees_label())


def class_dims(qp: PrimePower, a: tuple[int, ...]) -> tuple[int, ...]:
    """Descending factor-dimension multiset of a class (product-checked)."""
    return _factor_checked(qp, a).dims()
