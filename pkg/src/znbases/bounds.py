"""Closed-form bound evaluation and verification.

Covers the divisor-indexed cardinality bound for bases of given order, the
integer-sumset growth bound for normalized sets, the two-sided order bounds
for triples {0, a, b} with a | n, the pigeonhole machinery for triples
{0, 1, t}, and the lower-bound family {0, 1, k}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import IntSet, ZnSet, divisors, format_fraction, nlr
from .sumsets import order


@dataclass(frozen=True)
class KlBoundBreakdown:
    """Per-divisor evaluation of the cardinality bound max over d | n, d >= rho+1
    of (n/d) * (floor((d-2)/(rho-1)) + 1)."""

    n: int
    rho: int
    terms: tuple[tuple[int, int], ...]
    bound: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "rho": self.rho,
            "terms": [{"d": d, "value": v} for d, v in self.terms],
            "bound": self.bound,
        }

    @classmethod
    def from_dict(cls, d: dict) -> KlBoundBreakdown:
        return cls(
            n=d["n"],
            rho=d["rho"],
            terms=tuple((t["d"], t["value"]) for t in d["terms"]),
            bound=d["bound"],
        )


def kl_bound(n: int, rho: int) -> KlBoundBreakdown:
    """Upper bound on |A| for any basis A of Z_n with order at least rho.

    rho must lie in [2, n-1]; d = n always qualifies, so the bound is always
    defined.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 2 <= rho <= n - 1:
        raise ValueError(f"rho must be in [2, {n - 1}], got {rho}")
    terms = tuple(
        (d, (n // d) * ((d - 2) // (rho - 1) + 1))
        for d in divisors(n)
        if d >= rho + 1
    )
    return KlBoundBreakdown(n=n, rho=rho, terms=terms, bound=max(v for _, v in terms))


@dataclass(frozen=True)
class FlGrowthRecord:
    h: int
    size: int
    lower_bound: int
    holds: bool


@dataclass(frozen=True)
class FlGrowthReport:
    """Integer-sumset growth |hA| >= |A| + (h-1)*span for normalized sets.

    When the hypothesis 2|A| - 3 >= span fails, the sizes are still recorded
    but nothing is asserted (hypothesis_ok = False).
    """

    members: tuple[int, ...]
    span: int
    hypothesis_ok: bool
    records: tuple[FlGrowthRecord, ...]

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.records)

    def to_dict(self) -> dict:
        return {
            "members": list(self.members),
            "span": self.span,
            "hypothesis_ok": self.hypothesis_ok,
            "records": [
                {"h": r.h, "size": r.size, "lower_bound": r.lower_bound, "holds": r.holds}
                for r in self.records
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> FlGrowthReport:
        return cls(
            members=tuple(d["members"]),
            span=d["span"],
            hypothesis_ok=d["hypothesis_ok"],
            records=tuple(
                FlGrowthRecord(r["h"], r["size"], r["lower_bound"], r["holds"])
                for r in d["records"]
            ),
        )


def int_sumset_sizes(members: tuple[int, ...], h_max: int) -> list[int]:
    """|hA| for h = 1..h_max, with A a set of nonnegative integers.

    Same bit-mask kernel as the cyclic case, on a growing interval instead of
    a ring.
    """
    base = 0
    for m in members:
        base |= 1 << m
    sizes = []
    cur = base
    for _ in range(h_max):
        sizes.append(cur.bit_count())
        nxt = 0
        for m in members:
            nxt |= cur << m
        cur = nxt
    return sizes


def fl_growth_check(a: IntSet, h_max: int) -> FlGrowthReport:
    """Check |hA| >= |A| + (h-1)*span for h = 1..h_max over integer sumsets."""
    err = a.normalization_error()
    if err is not None:
        raise ValueError(f"set is not normalized: {err}")
    if h_max < 1:
        raise ValueError(f"h_max must be >= 1, got {h_max}")
    card = len(a)
    span = a.span
    hypothesis_ok = 2 * card - 3 >= span
    sizes = int_sumset_sizes(a.members, h_max)
    records = tuple(
        FlGrowthRecord(
            h=h,
            size=sizes[h - 1],
            lower_bound=card + (h - 1) * span,
            holds=sizes[h - 1] >= card + (h - 1) * span,
        )
        for h in range(1, h_max + 1)
    )
    return FlGrowthReport(
        members=a.members, span=span, hypothesis_ok=hypothesis_ok, records=records
    )


@dataclass(frozen=True)
class SandwichBounds:
    """Two-sided order bounds for A = {0, a, b} with a >= 2, a | n, gcd(a,b) = 1:
    max(n/a - 1, a - 1) <= order <= (n/a - 1) + (a - 1)."""

    n: int
    a: int
    b: int
    lower: int
    upper: int
    actual: int
    holds: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "a": self.a,
            "b": self.b,
            "lower": self.lower,
            "upper": self.upper,
            "actual": self.actual,
            "holds": self.holds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> SandwichBounds:
        return cls(**d)


def sandwich_bounds(n: int, a: int, b: int) -> SandwichBounds:
    """Evaluate the two-sided bound for the triple {0, a, b} and its true order."""
    if not 2 <= a <= n - 1 or n % a != 0:
        raise ValueError(f"a must be a proper divisor of n in [2, {n - 1}], got {a}")
    if not 1 <= b <= n - 1 or b == a:
        raise ValueError(f"b must lie in [1, {n - 1}] and differ from a, got {b}")
    if math.gcd(a, b) != 1:
        raise ValueError(f"gcd(a, b) must be 1, got gcd({a}, {b})")
    lower = max(n // a - 1, a - 1)
    upper = (n // a - 1) + (a - 1)
    actual = order(ZnSet.from_members(n, {0, a, b}))
    assert actual is not None  # gcd(a, b) = 1 forces a basis
    return SandwichBounds(
        n=n, a=a, b=b, lower=lower, upper=upper, actual=actual,
        holds=lower <= actual <= upper,
    )


@dataclass(frozen=True)
class PigeonholeWitness:
    """Smallest c in [1, k-1] whose multiple of t has numerically least residue
    of magnitude s <= n/k; r is the signed residue, s = |r|."""

    n: int
    k: int
    t: int
    c: int
    r: int
    s: int

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "t": self.t, "c": self.c, "r": self.r, "s": self.s}

    @classmethod
    def from_dict(cls, d: dict) -> PigeonholeWitness:
        return cls(**d)


def pigeonhole_witness(n: int, k: int, t: int) -> PigeonholeWitness:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if not 1 <= t < n:
        raise ValueError(f"t must lie in [1, {n - 1}], got {t}")
    for c in range(1, k):
        r = nlr(c * t, n)
        if abs(r) * k <= n:
            return PigeonholeWitness(n=n, k=k, t=t, c=c, r=r, s=abs(r))
    raise AssertionError(
        f"pigeonhole witness scan failed for n={n}, k={k}, t={t}; "
        "this contradicts the pigeonhole principle and indicates a bug"
    )


@dataclass(frozen=True)
class WitnessOrderBound:
    """Order bound s + c*n/s for the triple {0, 1, t}, from a pigeonhole witness.

    s = 0 makes the bound infinite (bound is None) and the check vacuous.
    """

    witness: PigeonholeWitness
    bound: Fraction | None
    actual: int
    holds: bool

    def to_dict(self) -> dict:
        return {
            "witness": self.witness.to_dict(),
            "bound": None if self.bound is None else format_fraction(self.bound),
            "actual": self.actual,
            "holds": self.holds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> WitnessOrderBound:
        return cls(
            witness=PigeonholeWitness.from_dict(d["witness"]),
            bound=None if d["bound"] is None else Fraction(d["bound"]),
            actual=d["actual"],
            holds=d["holds"],
        )


def witness_order_bound(witness: PigeonholeWitness) -> WitnessOrderBound:
    """Evaluate order({0,1,t}) <= s + c*n/s with exact rational comparison."""
    n, t = witness.n, witness.t
    actual = order(ZnSet.from_members(n, {0, 1 % n, t}))
    assert actual is not None  # {0, 1, t} always generates
    if witness.s == 0:
        return WitnessOrderBound(witness=witness, bound=None, actual=actual, holds=True)
    bound = witness.s + Fraction(witness.c * n, witness.s)
    return WitnessOrderBound(
        witness=witness, bound=bound, actual=actual, holds=actual <= bound
    )


@dataclass(frozen=True)
class RepDecomposition:
    """Representation t = (d*n + e)/c with e the numerically least residue of
    c*t; applicable only when |e| <= c*k.

    When gcd(d, c) > 1 the pair is reduced only if the reduction keeps e
    integral; otherwise the values are reported as-is with reducible = True.
    """

    n: int
    k: int
    t: int
    c: int
    d: int
    e: int
    applicable: bool
    reducible: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n, "k": self.k, "t": self.t, "c": self.c,
            "d": self.d, "e": self.e,
            "applicable": self.applicable, "reducible": self.reducible,
        }

    @classmethod
    def from_dict(cls, d: dict) -> RepDecomposition:
        return cls(**d)


def rep_decompose(n: int, k: int, t: int, c: int) -> RepDecomposition:
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    e = nlr(c * t, n)
    if abs(e) > c * k:
        return RepDecomposition(
            n=n, k=k, t=t, c=c, d=0, e=e, applicable=False, reducible=False
        )
    d = (c * t - e) // n
    g = math.gcd(d, c)
    reducible = False
    if g > 1:
        if e % g == 0:
            d, c, e = d // g, c // g, e // g
        else:
            reducible = True
    return RepDecomposition(
        n=n, k=k, t=t, c=c, d=d, e=e, applicable=True, reducible=reducible
    )


@dataclass(frozen=True)
class FamilyRecord:
    """Measured order of {0, 1, k} in Z_n for one family modulus n = mk - 1."""

    k: int
    n: int
    rho: int
    nearest_l: int
    min_gap: Fraction
    matches_k_minus_2_form: bool
    matches_k_minus_3_form: bool

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "rho": self.rho,
            "nearest_l": self.nearest_l,
            "min_gap": format_fraction(self.min_gap),
            "matches_k_minus_2_form": self.matches_k_minus_2_form,
            "matches_k_minus_3_form": self.matches_k_minus_3_form,
        }

    @classmethod
    def from_dict(cls, d: dict) -> FamilyRecord:
        return cls(
            k=d["k"],
            n=d["n"],
            rho=d["rho"],
            nearest_l=d["nearest_l"],
            min_gap=Fraction(d["min_gap"]),
            matches_k_minus_2_form=d["matches_k_minus_2_form"],
            matches_k_minus_3_form=d["matches_k_minus_3_form"],
        )


def min_gap_to_fractions(rho: int, n: int, k: int) -> tuple[int, Fraction]:
    """argmin l in [1, k] and min value of |rho - n/l|; smallest l on ties."""
    best_l, best = 1, abs(rho - Fraction(n, 1))
    for l in range(2, k + 1):
        gap = abs(rho - Fraction(n, l))
        if gap < best:
            best_l, best = l, gap
    return best_l, best


def lower_bound_family(k: int, n_range: tuple[int, int]) -> list[FamilyRecord]:
    """Measure the order of {0, 1, k} for every n in n_range with n = -1 mod k.

    Each record carries the measured minimal gap to the nearest n/l and marks
    which (if either) of the two candidate closed forms (k-2) + 1/k and
    (k-3) + 1/k it equals.  The two forms disagree; the measurement decides.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    lo, hi = n_range
    records = []
    form_a = (k - 2) + Fraction(1, k)
    form_b = (k - 3) + Fraction(1, k)
    for n in range(max(lo, k + 1), hi + 1):
        if n % k != k - 1:
            continue
        rho = order(ZnSet.from_members(n, {0, 1, k}))
        assert rho is not None
        nearest_l, min_gap = min_gap_to_fractions(rho, n, k)
        records.append(
            FamilyRecord(
                k=k,
                n=n,
                rho=rho,
                nearest_l=nearest_l,
                min_gap=min_gap,
                matches_k_minus_2_form=min_gap == form_a,
                matches_k_minus_3_form=min_gap == form_b,
            )
        )
    return records
