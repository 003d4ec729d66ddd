"""Supernatural numbers built from eventually periodic multiplicity sequences.

A multiplicity sequence ``(r_k)`` is stored as a finite *preamble* followed by
a repeating *cycle*.  Its generalised integer ``r_1 r_2 ...`` then has a finite
description: a prime has infinite multiplicity exactly when it divides some
cycle entry, and otherwise its multiplicity is read off the preamble.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Mapping

from .errors import InvalidProfile

MAX_ENTRY = 10**6


@lru_cache(maxsize=4096)
def _factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer by trial division."""
    return dict(_factorize(n))


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


@dataclass(frozen=True)
class SequenceProfile:
    """An eventually periodic sequence of positive integers, indexed from 1."""

    preamble: tuple[int, ...] = ()
    cycle: tuple[int, ...] = (2,)

    def __post_init__(self):
        object.__setattr__(self, "preamble", tuple(int(v) for v in self.preamble))
        object.__setattr__(self, "cycle", tuple(int(v) for v in self.cycle))
        if not self.cycle:
            raise InvalidProfile("cycle must be non-empty")
        for v in self.preamble + self.cycle:
            if v < 1:
                raise InvalidProfile(f"entry {v} is not a positive integer")
            if v > MAX_ENTRY:
                raise InvalidProfile(f"entry {v} exceeds {MAX_ENTRY}")
        if math.prod(self.cycle) < 2:
            raise InvalidProfile("cycle product must be at least 2")

    @classmethod
    def constant(cls, value: int) -> SequenceProfile:
        return cls((), (value,))

    def term(self, k: int) -> int:
        if k < 1:
            raise IndexError(f"sequence index {k} < 1")
        if k <= len(self.preamble):
            return self.preamble[k - 1]
        return self.cycle[(k - len(self.preamble) - 1) % len(self.cycle)]

    def terms(self, n: int) -> list[int]:
        return [self.term(k) for k in range(1, n + 1)]

    def to_dict(self) -> dict:
        return {"preamble": list(self.preamble), "cycle": list(self.cycle)}

    def __str__(self):
        pre = ",".join(map(str, self.preamble))
        cyc = ",".join(map(str, self.cycle))
        return f"[{pre}]({cyc})*" if pre else f"({cyc})*"


@dataclass(frozen=True)
class Supernatural:
    """A generalised integer with finitely many primes.

    ``finite_part`` is a sorted tuple of ``(prime, multiplicity)`` pairs; use
    :meth:`build` to construct from mappings.
    """

    finite_part: tuple[tuple[int, int], ...] = ()
    infinite_primes: frozenset[int] = frozenset()

    def __post_init__(self):
        keys = [p for p, _ in self.finite_part]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate prime in finite part")
        if set(keys) & self.infinite_primes:
            raise ValueError("finite and infinite primes overlap")
        for p in set(keys) | self.infinite_primes:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        for p, e in self.finite_part:
            if e < 1:
                raise ValueError(f"multiplicity of {p} must be positive")

    @classmethod
    def build(cls, finite: Mapping[int, int] | None = None,
              infinite: Iterable[int] = ()) -> Supernatural:
        infinite = frozenset(infinite)
        finite = {p: e for p, e in (finite or {}).items() if e and p not in infinite}
        return cls(tuple(sorted(finite.items())), infinite)

    @classmethod
    def from_int(cls, n: int) -> Supernatural:
        return cls.build(factorize(n))

    def multiplicity(self, p: int) -> float | int:
        if p in self.infinite_primes:
            return math.inf
        return dict(self.finite_part).get(p, 0)

    def primes(self) -> set[int]:
        return {p for p, _ in self.finite_part} | set(self.infinite_primes)

    def __mul__(self, other: Supernatural | int) -> Supernatural:
        if isinstance(other, int):
            other = Supernatural.from_int(other)
        inf = self.infinite_primes | other.infinite_primes
        counts = Counter(dict(self.finite_part))
        counts.update(dict(other.finite_part))
        return Supernatural.build(counts, inf)

    __rmul__ = __mul__

    def __str__(self):
        parts = [(p, "∞") for p in self.infinite_primes]
        parts += [(p, str(e)) for p, e in self.finite_part]
        if not parts:
            return "1"
        return "·".join(f"{p}^{e}" if e != "1" else str(p) for p, e in sorted(parts))


@lru_cache(maxsize=256)
def from_profile(profile: SequenceProfile) -> Supernatural:
    """The generalised integer ``term(1)·term(2)·...`` of ``profile``."""
    infinite = set()
    for v in profile.cycle:
        infinite.update(factorize(v))
    finite: Counter[int] = Counter()
    for v in profile.preamble:
        finite.update(factorize(v))
    return Supernatural.build(finite, infinite)


@lru_cache(maxsize=4096)
def partial_product(profile: SequenceProfile, k: int) -> int:
    """``m_k = term(1)···term(k)``, with ``m_0 = 1``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return reduce(lambda acc, i: acc * profile.term(i), range(1, k + 1), 1)


def divides(a: Supernatural, b: Supernatural) -> bool:
    return all(a.multiplicity(p) <= b.multiplicity(p) for p in a.primes())


def common_infinite_primes(r: Supernatural, s: Supernatural) -> list[int]:
    return sorted(r.infinite_primes & s.infinite_primes)


def finitely_equivalent(a: Supernatural, b: Supernatural) -> bool:
    # With finitely many finite multiplicities, m·a = n·b is solvable exactly
    # when the infinite parts coincide.
    return a.infinite_primes == b.infinite_primes


def divides_int(n: int, a: Supernatural) -> bool:
    """Whether the ordinary integer ``n`` divides ``a``."""
    return all(e <= a.multiplicity(p) for p, e in factorize(n).items())
