"""Exact arithmetic primitives and the fundamental set types over Z_n and Z.

Everything here is exact integer arithmetic.  Rational quantities are
fractions.Fraction; floating point never appears in any computation or
comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator


def nlr(x: int, n: int) -> int:
    """Numerically least residue of x mod n: the representative in (-n/2, n/2]."""
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    r = x % n
    # 2r > n pushes the representative below zero; 2r == n stays at n/2.
    if 2 * r > n:
        r -= n
    return r


def divisors(n: int) -> list[int]:
    """All positive divisors of n in increasing order."""
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@dataclass(frozen=True)
class ZnSet:
    """A subset of Z_n: modulus plus a dense bit-indexed membership mask.

    Bit i of ``mask`` is set iff residue i is a member.  The dense form makes
    unions and rotations O(n/word) big-int operations, which dominate the
    runtime of every sumset computation.
    """

    modulus: int
    mask: int = 0

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if self.mask < 0 or self.mask >> self.modulus:
            raise ValueError("membership mask has bits outside [0, modulus)")

    @classmethod
    def from_members(cls, modulus: int, members: Iterable[int]) -> ZnSet:
        mask = 0
        for m in members:
            if not 0 <= m < modulus:
                raise ValueError(f"residue {m} out of range [0, {modulus})")
            mask |= 1 << m
        return cls(modulus, mask)

    @classmethod
    def from_text(cls, modulus: int, text: str) -> ZnSet:
        """Parse the set literal format: comma-separated residues, e.g. "0,1,3".

        Rejects out-of-range and duplicate entries.  Semicolons are accepted
        as separators too (the CSV-embedded variant of the same literal).
        """
        text = text.strip()
        if not text:
            return cls(modulus, 0)
        mask = 0
        for tok in text.replace(";", ",").split(","):
            m = int(tok.strip())
            if not 0 <= m < modulus:
                raise ValueError(f"residue {m} out of range [0, {modulus})")
            bit = 1 << m
            if mask & bit:
                raise ValueError(f"duplicate residue {m} in set literal")
            mask |= bit
        return cls(modulus, mask)

    @classmethod
    def full(cls, modulus: int) -> ZnSet:
        return cls(modulus, (1 << modulus) - 1)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, residue: int) -> bool:
        return 0 <= residue < self.modulus and bool(self.mask >> residue & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def is_full(self) -> bool:
        return self.mask == (1 << self.modulus) - 1

    def union(self, other: ZnSet) -> ZnSet:
        self._check_modulus(other)
        return ZnSet(self.modulus, self.mask | other.mask)

    def insert(self, residue: int) -> ZnSet:
        if not 0 <= residue < self.modulus:
            raise ValueError(f"residue {residue} out of range [0, {self.modulus})")
        return ZnSet(self.modulus, self.mask | 1 << residue)

    def rotate(self, shift: int) -> ZnSet:
        """Translate the set: {a + shift mod n}."""
        n = self.modulus
        s = shift % n
        if s == 0:
            return self
        full = (1 << n) - 1
        return ZnSet(n, (self.mask << s | self.mask >> (n - s)) & full)

    def to_text(self, sep: str = ",") -> str:
        return sep.join(str(m) for m in self)

    def _check_modulus(self, other: ZnSet) -> None:
        if self.modulus != other.modulus:
            raise ValueError(
                f"modulus mismatch: {self.modulus} != {other.modulus}"
            )

    def __repr__(self) -> str:
        return f"ZnSet({self.modulus}, {{{self.to_text()}}})"


def canonical_less(a: ZnSet, b: ZnSet) -> bool:
    """Fixed total order on same-modulus sets: lexicographic on the
    characteristic vector read from residue 0 upward (membership wins).

    The set containing the lowest residue on which the two differ is the
    smaller one.
    """
    a._check_modulus(b)
    diff = a.mask ^ b.mask
    if not diff:
        return False
    return bool(a.mask & (diff & -diff))


def canonical_sort_key(a: ZnSet):
    """Sort key consistent with canonical_less (bit i inverted, residue 0 first)."""
    return tuple(1 - (a.mask >> i & 1) for i in range(a.modulus))


@dataclass(frozen=True)
class IntSet:
    """A finite set of nonnegative integers, used for integer-sumset growth checks.

    The growth theorem expects the normalized form 0 in A, max(A) in A (the
    span), gcd(A) = 1; normalization is checked by the growth-check operation,
    not forced at construction.
    """

    members: tuple[int, ...]

    def __post_init__(self) -> None:
        ms = tuple(sorted(set(self.members)))
        if ms != self.members:
            object.__setattr__(self, "members", ms)
        if not self.members:
            raise ValueError("IntSet must be nonempty")
        if self.members[0] < 0:
            raise ValueError("IntSet members must be nonnegative")

    @classmethod
    def from_text(cls, text: str) -> IntSet:
        toks = [t.strip() for t in text.replace(";", ",").split(",") if t.strip()]
        if not toks:
            raise ValueError("empty integer set literal")
        return cls(tuple(int(t) for t in toks))

    @property
    def span(self) -> int:
        return self.members[-1]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def normalization_error(self) -> str | None:
        """Name the violated normalization condition, or None if normalized."""
        if 0 not in self.members:
            return "0 must be a member"
        if len(self.members) < 2:
            return "at least two members required (span must be positive)"
        if math.gcd(*self.members) != 1:
            return "gcd of members must be 1"
        return None

    def to_text(self, sep: str = ",") -> str:
        return sep.join(str(m) for m in self.members)


def is_basis(a: ZnSet) -> bool:
    """Whether some h-fold sumset of A covers all of Z_n.

    Criterion: translate any element to 0 and test gcd of the differences
    together with n.  A singleton is never a basis unless n = 1 (the plain
    gcd-of-elements test would wrongly accept e.g. {1}); every nonempty
    subset of Z_1 is a basis.
    """
    if not a:
        return False
    if a.modulus == 1:
        return True
    if len(a) < 2:
        return False
    it = iter(a)
    a0 = next(it)
    g = a.modulus
    for m in it:
        g = math.gcd(g, m - a0)
        if g == 1:
            return True
    return g == 1


# -- serialization helpers ----------------------------------------------------
#
# Infinite order is represented as None in memory, the JSON value null, and
# the CSV token "inf".  Rationals are emitted as exact fraction strings "p/q"
# ("p" when the denominator is 1).

def format_order(order: int | None) -> str:
    return "inf" if order is None else str(order)


def parse_order(text: str) -> int | None:
    return None if text == "inf" else int(text)


def format_fraction(value: Fraction | int) -> str:
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def parse_exact_number(text: str) -> Fraction:
    """Parse "2.04", "51/25" or "2" into an exact Fraction (never a float)."""
    return Fraction(text)
