"""The affine action u*A + v on subsets of Z_n, orbits, and canonical forms.

Basis order is invariant under any map x -> u*x + v with gcd(u, n) = 1, so
enumeration only ever needs one representative per affine orbit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .core import ZnSet, canonical_less


@dataclass(frozen=True)
class AffineMap:
    """x -> scale*x + shift mod modulus, with gcd(scale, modulus) = 1."""

    scale: int
    shift: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if math.gcd(self.scale, self.modulus) != 1:
            raise ValueError(
                f"scale {self.scale} is not invertible mod {self.modulus}"
            )
        object.__setattr__(self, "scale", self.scale % self.modulus)
        object.__setattr__(self, "shift", self.shift % self.modulus)


def apply_affine(f: AffineMap, a: ZnSet) -> ZnSet:
    if f.modulus != a.modulus:
        raise ValueError(f"modulus mismatch: {f.modulus} != {a.modulus}")
    n = a.modulus
    mask = 0
    for m in a:
        mask |= 1 << ((f.scale * m + f.shift) % n)
    return ZnSet(n, mask)


@lru_cache(maxsize=None)
def units(n: int) -> tuple[int, ...]:
    """The residues invertible mod n, in increasing order."""
    return tuple(u for u in range(1, n + 1) if math.gcd(u, n) == 1) if n > 1 else (0,)


def _zero_based_images(a: ZnSet):
    """All affine images of A that contain 0 (one per (unit, member) pair)."""
    n = a.modulus
    members = a.members
    for u in units(n):
        scaled = [(u * m) % n for m in members]
        for anchor in scaled:
            mask = 0
            for s in scaled:
                mask |= 1 << ((s - anchor) % n)
            yield ZnSet(n, mask)


def canonical_form(a: ZnSet) -> ZnSet:
    """The minimum of the affine orbit of A under the fixed canonical order.

    The orbit minimum always contains 0 (for nonempty A a translate
    containing 0 beats any set that misses it), so only the n*phi(n) images
    with some element mapped to 0 need comparing.
    """
    if not a:
        raise ValueError("canonical form of an empty set")
    best: ZnSet | None = None
    for image in _zero_based_images(a):
        if best is None or canonical_less(image, best):
            best = image
    return best  # type: ignore[return-value]


def is_canonical(a: ZnSet) -> bool:
    """Whether A is the canonical representative of its own orbit."""
    if not a:
        raise ValueError("canonicality of an empty set")
    if 0 not in a:
        return False
    for image in _zero_based_images(a):
        if canonical_less(image, a):
            return False
    return True


def orbit(a: ZnSet) -> frozenset[ZnSet]:
    """All distinct images of A under the n*phi(n) affine maps."""
    if not a:
        raise ValueError("orbit of an empty set")
    n = a.modulus
    out = set()
    for u in units(n):
        base = apply_affine(AffineMap(u, 0, n), a)
        for v in range(n):
            out.add(base.rotate(v))
    return frozenset(out)
