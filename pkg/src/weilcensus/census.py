"""Per-(q, g) censuses of ordinary isogeny classes and exact finite
verifiers for the counting identities and inequalities the asymptotic
results rest on.

Every census quantity is computed at the ordinary restriction (reported
with the `_ord` suffix): exact counting of non-ordinary classes needs
endomorphism invariants outside this engine's scope. Every bound checked
here is evaluated in exact integer or rational arithmetic; the only
floating point in this module is the display-only log column of the
growth report.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import __version__ as ENGINE_VERSION
from .classify import class_dims, lemma31_split
from .enumsets import (
    ENUM_CAPS,
    EnumSpec,
    SetKind,
    _iter_all,
    _y_bound,
    count_set,
    make_partition,
    weil_tuples,
)
from .weilpoly import (
    CoeffTuple,
    PrimePower,
    as_prime_power,
    expand,
    is_weil_tuple,
)

SCHEMA_VERSION = 1


class CensusFormatError(ValueError):
    """Census file is unreadable; carries a byte offset when available."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (byte offset {offset})")
        self.offset = offset


class StaleCensusError(RuntimeError):
    """Census file was produced by a different engine version and must be
    recomputed, never silently reused."""


# ---------------------------------------------------------------------------
# Bound reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """One exact comparison: holds is None only for undefined ratios."""

    name: str
    params: dict
    lhs: Fraction | int
    rhs: Fraction | int
    relation: str = "le"  # "le" or "eq"
    scale: int = 1  # power applied to both sides to clear radicals
    note: str = ""

    @property
    def holds(self) -> bool | None:
        if self.note.startswith("undefined"):
            return None
        if self.relation == "eq":
            return self.lhs == self.rhs
        return self.lhs <= self.rhs

    def line(self) -> str:
        status = "undefined" if self.holds is None else ("holds" if self.holds else "FAILS")
        ps = " ".join(f"{k}={v}" for k, v in self.params.items())
        extra = f" [{self.note}]" if self.note else ""
        return f"{self.name} {ps}: lhs={self.lhs} rhs={self.rhs} rel={self.relation} -> {status}{extra}"


# ---------------------------------------------------------------------------
# Census core: classify every ordinary class once per (q, g)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusCore:
    """Epsilon-independent classification aggregate for one (q, g):
    class counts by descending factor-dimension partition."""

    q: int
    g: int
    m_ord: int
    s_ord: int
    by_partition: tuple[tuple[tuple[int, ...], int], ...]

    def largest_dim_count(self, threshold: Fraction) -> int:
        """Number of classes whose largest factor dimension >= threshold."""
        return sum(c for dims, c in self.by_partition if dims[0] >= threshold)


def _census_chunk(args: tuple[int, int, tuple[int, int] | None]) -> dict:
    q, g, interval = args
    qp = PrimePower.from_q(q)
    counter: Counter = Counter()
    for a in _iter_all(qp, g, True, interval):
        counter[class_dims(qp, a)] += 1
    return dict(counter)


@lru_cache(maxsize=None)
def _classify_census_cached(q: int, g: int) -> CensusCore:
    return _classify_census(q, g, parts=1)


def classify_census(q: "int | PrimePower", g: int, parts: int = 1) -> CensusCore:
    """Classify every ordinary class of dimension g; cached for parts == 1.
    The partition/parallelism degree never changes the result."""
    qi = as_prime_power(q).q
    if parts <= 1:
        return _classify_census_cached(qi, g)
    return _classify_census(qi, g, parts)


def _classify_census(q: int, g: int, parts: int) -> CensusCore:
    spec = EnumSpec.of(q, g, SetKind.ALL_ORDINARY)
    counter: Counter = Counter()
    if parts <= 1:
        counter.update(_census_chunk((q, g, None)))
    else:
        partition = make_partition(spec, parts)
        jobs = [(q, g, iv) for iv in partition.intervals]
        try:
            with ProcessPoolExecutor(max_workers=min(parts, len(jobs) or 1)) as ex:
                for chunk in ex.map(_census_chunk, jobs):
                    counter.update(chunk)
        except OSError:
            # Restricted environments without process support: fall back
            # to the serial walk, which produces the identical counter.
            counter = Counter()
            for job in jobs:
                counter.update(_census_chunk(job))
    m = sum(counter.values())
    s = sum(c for dims, c in counter.items() if dims == (g,))
    ordered = tuple(sorted(counter.items()))
    return CensusCore(q, g, m, s, ordered)


# ---------------------------------------------------------------------------
# Census table
# ---------------------------------------------------------------------------

CENSUS_CSV_COLUMNS = [
    "q",
    "g",
    "epsilon",
    "x_count",
    "y_count",
    "ygn_counts",
    "m_ord",
    "s_ord",
    "a_l_ord",
    "a_s_ord",
    "simple_ratio",
]


@dataclass(frozen=True)
class CensusTable:
    q: int
    g: int
    epsilon: Fraction
    x_count: int
    y_count: int
    ygn: dict[int, int]
    m_ord: int
    s_ord: int
    a_l_ord: int
    a_s_ord: int
    engine_version: str = ENGINE_VERSION
    caps: dict = field(default_factory=lambda: dict(ENUM_CAPS))

    def __post_init__(self) -> None:
        if not (0 < self.epsilon < Fraction(1, 2)):
            raise ValueError("epsilon must lie in (0, 1/2)")
        if self.s_ord > self.m_ord:
            raise ValueError("s_ord exceeds m_ord")
        if self.a_l_ord + self.a_s_ord != self.m_ord:
            raise ValueError("a_l_ord + a_s_ord must equal m_ord")
        if not all(v <= self.y_count for v in self.ygn.values()) or self.y_count > self.x_count:
            raise ValueError("need ygn <= y_count <= x_count")

    def simple_ratio(self) -> Fraction | None:
        """s_ord / m_ord, or None (reported as "undefined") when m_ord = 0."""
        if self.m_ord == 0:
            return None
        return Fraction(self.s_ord, self.m_ord)

    def to_json_dict(self, timestamp: str | None = None) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "engine_version": self.engine_version,
            "q": self.q,
            "g": self.g,
            "epsilon": f"{self.epsilon.numerator}/{self.epsilon.denominator}",
            "counts": {
                "x": self.x_count,
                "y": self.y_count,
                "ygn": {str(n): v for n, v in sorted(self.ygn.items())},
                "m_ord": self.m_ord,
                "s_ord": self.s_ord,
                "a_l_ord": self.a_l_ord,
                "a_s_ord": self.a_s_ord,
            },
            "caps": dict(self.caps),
        }
        if timestamp is not None:
            d["generated_at"] = timestamp
        return d

    def csv_row(self) -> str:
        ratio = self.simple_ratio()
        fields = [
            str(self.q),
            str(self.g),
            f"{self.epsilon.numerator}/{self.epsilon.denominator}",
            str(self.x_count),
            str(self.y_count),
            ";".join(f"{n}:{v}" for n, v in sorted(self.ygn.items())),
            str(self.m_ord),
            str(self.s_ord),
            str(self.a_l_ord),
            str(self.a_s_ord),
            "undefined" if ratio is None else str(ratio),
        ]
        return ",".join(fields)


def build_census(
    q: "int | PrimePower", g: int, epsilon: Fraction, parts: int = 1
) -> CensusTable:
    """Enumerate and classify every ordinary class of dimension g and
    aggregate all counts; deterministic and independent of parts."""
    qp = as_prime_power(q)
    epsilon = Fraction(epsilon)
    core = classify_census(qp, g, parts)
    threshold = (1 - epsilon) * g
    a_l = core.largest_dim_count(threshold)
    ygn = {n: ygn_count(qp, g, n) for n in range(1, g // 2 + 1)}
    return CensusTable(
        q=qp.q,
        g=g,
        epsilon=epsilon,
        x_count=count_set(EnumSpec.of(qp, g, SetKind.X)),
        y_count=count_set(EnumSpec.of(qp, g, SetKind.Y)),
        ygn=ygn,
        m_ord=core.m_ord,
        s_ord=core.s_ord,
        a_l_ord=a_l,
        a_s_ord=core.m_ord - a_l,
    )


def verify_lemma31_on_census(
    q: "int | PrimePower", g: int, epsilon: Fraction, parts: int = 1
) -> tuple[int, int]:
    """Run the constructive split on every census class whose largest
    factor stays below (1 - eps) * g and check both totals land in
    [eps*g, (1-eps)*g]. Returns (classes checked, failures)."""
    epsilon = Fraction(epsilon)
    core = classify_census(q, g, parts)
    threshold = (1 - epsilon) * g
    checked = failures = 0
    for dims, count in core.by_partition:
        if dims[0] >= threshold:
            continue
        s1, s2 = lemma31_split(dims, epsilon, g)
        lo, hi = epsilon * g, threshold
        if not (lo <= sum(s1) <= hi and lo <= sum(s2) <= hi):
            failures += count
        checked += count
    return checked, failures


# ---------------------------------------------------------------------------
# Y_{g,n}: members of Y splitting at a given dimension pair
# ---------------------------------------------------------------------------


def ygn_count(q: "int | PrimePower", g: int, n: int) -> int:
    """Number of Y members whose expansion factors into Weil polynomials of
    dimensions (n, g-n).

    Enumerates products directly: for each dimension-n Weil polynomial,
    the cofactor's coefficients are walked under the exact coordinate
    windows that membership in Y forces on the product, and surviving
    cofactors are membership-tested. Equivalent to running the split
    search restricted to n over every Y member, but feasible at g = 8.
    """
    qp = as_prime_power(q)
    qi, p = qp.q, qp.p
    if not (1 <= n and 2 * n <= g):
        raise ValueError("need 1 <= n <= g/2")
    m = g - n
    bound = [0] + [_y_bound(qi, g, i) for i in range(1, g + 1)]
    found: set[tuple[int, ...]] = set()
    weil_cache: dict[tuple[int, ...], bool] = {}

    for a in weil_tuples(qp, n):
        A = _topdown(qi, n, a)
        b: list[int] = []

        def rec(i: int) -> None:
            conv = 0
            for j in range(1, min(i, 2 * n) + 1):
                if A[j]:
                    conv += A[j] * (1 if i == j else b[i - j - 1])
            for v in range(-bound[i] - conv, bound[i] - conv + 1):
                b.append(v)
                if i < m:
                    rec(i + 1)
                else:
                    _leaf()
                b.pop()

        def _leaf() -> None:
            bt = tuple(b)
            B = _topdown(qi, m, bt)
            c = [0] * (g + 1)
            ok = True
            for i in range(1, g + 1):
                ci = 0
                for j in range(max(0, i - 2 * m), min(i, 2 * n) + 1):
                    if A[j]:
                        ci += A[j] * B[i - j]
                c[i] = ci
                if i > m and abs(ci) > bound[i]:
                    ok = False
                    break
            if not ok or c[g] % p == 0:
                return
            verdict = weil_cache.get(bt)
            if verdict is None:
                verdict = is_weil_tuple(qi, m, bt)
                weil_cache[bt] = verdict
            if verdict:
                found.add(tuple(c[1:]))

        rec(1)
    return len(found)


def _topdown(q: int, g: int, a: tuple[int, ...]) -> list[int]:
    out = [0] * (2 * g + 1)
    out[0] = 1
    out[2 * g] = q**g
    for i in range(1, g):
        out[i] += a[i - 1]
        out[2 * g - i] += a[i - 1] * q ** (g - i)
    out[g] += a[g - 1]
    return out


# ---------------------------------------------------------------------------
# Exact verifiers
# ---------------------------------------------------------------------------


def verify_thm23_bound(q: "int | PrimePower", g: int, n: int) -> BoundReport:
    """Check |Y_{g,n}| / |Y_g| <= (5 g^2 / q^((g-1)/4))^n exactly.

    Both sides are raised to the 4th power, which clears the quartic root
    and makes each side an exact rational.
    """
    qp = as_prime_power(q)
    params = {"q": qp.q, "g": g, "n": n}
    y = count_set(EnumSpec.of(qp, g, SetKind.Y))
    if y == 0:
        return BoundReport("thm23", params, 0, 0, "le", 4, "undefined: |Y_g| = 0")
    ygn = ygn_count(qp, g, n)
    lhs = Fraction(ygn, y) ** 4
    rhs = Fraction((5 * g * g) ** (4 * n), qp.q ** ((g - 1) * n))
    return BoundReport("thm23", params, lhs, rhs, "le", 4, f"|Y_g,n|={ygn} |Y_g|={y}")


def verify_aL_identity(
    q: "int | PrimePower", g: int, epsilon: Fraction, parts: int = 1
) -> BoundReport:
    """Check, at the ordinary restriction,

        a_L(q, g, eps) = s(g) + sum_{1 <= i <= eps*g} m(i) * s(g - i)

    with exact integer censuses on both sides. Valid for eps < 1/2: the
    large factor is then unique, and ordinarity passes to factors and
    products.
    """
    qp = as_prime_power(q)
    epsilon = Fraction(epsilon)
    if not (0 < epsilon < Fraction(1, 2)):
        raise ValueError("identity requires 0 < epsilon < 1/2")
    core = classify_census(qp, g, parts)
    lhs = core.largest_dim_count((1 - epsilon) * g)
    rhs = core.s_ord
    i = 1
    terms = []
    while i <= epsilon * g:
        mi = classify_census(qp, i).m_ord
        sgi = classify_census(qp, g - i).s_ord
        rhs += mi * sgi
        terms.append(f"m({i})*s({g - i})={mi}*{sgi}")
        i += 1
    note = "empty sum" if not terms else " + ".join(terms)
    params = {"q": qp.q, "g": g, "epsilon": str(epsilon)}
    return BoundReport("aL-identity", params, lhs, rhs, "eq", 1, note)


def verify_recursion_domination(
    c1: int, c2: int, q: int, k_max: int
) -> list[BoundReport]:
    """For k = 1..k_max check, in exact big-integer arithmetic,

        C2 q^(C1 k^2) + sum_{j<k} 2^(j-1) C2^(j+1) q^(C1 j^2) q^(C1 (k-j)^2)
            <= 2^(k-1) C2^k q^(C1 k^2).
    """
    if c1 < 1 or c2 < 1 or k_max < 1:
        raise ValueError("need C1, C2, k_max >= 1")
    out = []
    for k in range(1, k_max + 1):
        lhs = c2 * q ** (c1 * k * k)
        for j in range(1, k):
            lhs += 2 ** (j - 1) * c2 ** (j + 1) * q ** (c1 * j * j) * q ** (c1 * (k - j) ** 2)
        rhs = 2 ** (k - 1) * c2**k * q ** (c1 * k * k)
        out.append(
            BoundReport("recursion", {"C1": c1, "C2": c2, "q": q, "k": k}, lhs, rhs, "le", 1)
        )
    return out


# ---------------------------------------------------------------------------
# Growth report
# ---------------------------------------------------------------------------


def growth_report(q: "int | PrimePower", g_max: int) -> list[tuple[int, int, float]]:
    """Rows (g, |X_g|, log_q |X_g| / g^2) for g = 1..g_max. Counts are
    exact; the log column is a display-only float (6 decimals)."""
    qp = as_prime_power(q)
    if g_max < 1 or g_max > ENUM_CAPS["xy_max_g"]:
        raise ValueError(f"growth report is capped at g <= {ENUM_CAPS['xy_max_g']}")
    rows = []
    for g in range(1, g_max + 1):
        c = count_set(EnumSpec.of(qp, g, SetKind.X))
        ratio = math.log(c) / (math.log(qp.q) * g * g) if c > 0 else float("nan")
        rows.append((g, c, ratio))
    return rows


def growth_bracket_ok(q: int, g: int, count: int) -> bool:
    """Exact check of q^(g^2/4 - g) <= count <= q^(g^2/4 + g) (both sides
    compared at the 4th power so fractional exponents stay integral)."""
    c4 = count**4
    return c4 * q ** (4 * g) >= q ** (g * g) and c4 <= q ** (g * g + 4 * g)


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


def save_census(table: CensusTable, path: str, timestamp: str | None = None) -> None:
    """Atomic replace-on-write JSON dump."""
    payload = json.dumps(table.to_json_dict(timestamp), indent=2, sort_keys=True) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def load_census(path: str) -> CensusTable:
    """Parse and validate a census file.

    Corrupt files raise CensusFormatError with a byte offset; files from a
    different engine version raise StaleCensusError (the caller recomputes).
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as e:
        raise CensusFormatError(f"census file is not UTF-8: {path}", e.start) from e
    except json.JSONDecodeError as e:
        raise CensusFormatError(f"census file is not valid JSON: {path}", e.pos) from e
    try:
        if doc["schema_version"] != SCHEMA_VERSION:
            raise CensusFormatError(f"unsupported schema_version {doc['schema_version']}")
        if doc["engine_version"] != ENGINE_VERSION:
            raise StaleCensusError(
                f"census {path} was written by engine {doc['engine_version']}, "
                f"current is {ENGINE_VERSION}: recompute"
            )
        num, den = doc["epsilon"].split("/")
        counts = doc["counts"]
        return CensusTable(
            q=int(doc["q"]),
            g=int(doc["g"]),
            epsilon=Fraction(int(num), int(den)),
            x_count=int(counts["x"]),
            y_count=int(counts["y"]),
            ygn={int(k): int(v) for k, v in counts["ygn"].items()},
            m_ord=int(counts["m_ord"]),
            s_ord=int(counts["s_ord"]),
            a_l_ord=int(counts["a_l_ord"]),
            a_s_ord=int(counts["a_s_ord"]),
            engine_version=doc["engine_version"],
            caps=dict(doc.get("caps", {})),
        )
    except (KeyError, ValueError, TypeError) as e:
        if isinstance(e, (CensusFormatError, StaleCensusError)):
            raise
        raise CensusFormatError(f"census file {path} is malformed: {e}") from e


DEFAULT_CACHE_ENV = "WEIL_CACHE_DIR"


def cache_dir() -> str | None:
    return os.environ.get(DEFAULT_CACHE_ENV) or None


def cached_census(
    q: "int | PrimePower", g: int, epsilon: Fraction, parts: int = 1,
    directory: str | None = None, timestamp: str | None = None,
) -> CensusTable:
    """Load from the census cache when fresh, else build and store.
    Stale-version entries are rebuilt and overwritten."""
    directory = directory or cache_dir()
    epsilon = Fraction(epsilon)
    qp = as_prime_power(q)
    if directory is None:
        return build_census(qp, g, epsilon, parts)
    path = os.path.join(
        directory, f"census_q{qp.q}_g{g}_e{epsilon.numerator}-{epsilon.denominator}.json"
    )
    try:
        return load_census(path)
    except FileNotFoundError:
        pass
    except StaleCensusError:
        pass
    table = build_census(qp, g, epsilon, parts)
    save_census(table, path, timestamp)
    return table
