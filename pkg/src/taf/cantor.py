"""The two-sided coordinate space ``X(r_k, s_k)`` and its order relation.

Coordinates are indexed by the nonzero integers.  Index ``k >= 1`` carries a
digit in ``1..r_k`` and index ``-k`` a digit in ``1..s_k``; the order of
indices is ``... < -2 < -1 < 1 < 2 < ...``.

Only points with finitely many non-1 digits to the left are representable.
To the right a point is eventually constant at 1 (``Tail.ONES``) or at the
digit bound (``Tail.MAX``).  Canonical trimming makes structural equality
coincide with point equality, so :class:`Point` values can be compared and
hashed directly once they come out of :meth:`CantorSpace.point`.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from . import _linalg
from .errors import DegenerateSystem, NotGapPoint, NotRepresentable, NotTailEquivalent
from .supernat import SequenceProfile, divides_int, from_profile, partial_product


class Tail(enum.Enum):
    ONES = "ones"
    MAX = "max"


def pred_index(k: int) -> int:
    """Predecessor in the index order that skips 0."""
    if k == 0:
        raise ValueError("0 is not an index")
    return -1 if k == 1 else k - 1


def succ_index(k: int) -> int:
    if k == 0:
        raise ValueError("0 is not an index")
    return 1 if k == -1 else k + 1


def window_indices(n: int) -> list[int]:
    """Indices ``-n, ..., -1, 1, ..., n`` in increasing order."""
    return list(range(-n, 0)) + list(range(1, n + 1))


@dataclass(frozen=True)
class Point:
    """``left[i-1]`` is the digit at index ``-i``; ``right[k-1]`` the digit at ``k``."""

    left: tuple[int, ...] = ()
    right: tuple[int, ...] = ()
    right_tail: Tail = Tail.ONES

    @property
    def support(self) -> int:
        return max(len(self.left), len(self.right))

    def to_dict(self) -> dict:
        return {"left": list(self.left), "right": list(self.right),
                "right_tail": self.right_tail.value}

    def __str__(self):
        left = "".join(f"{d}," for d in reversed(self.left))
        right = "".join(f"{d}," for d in self.right)
        tail = "1..." if self.right_tail is Tail.ONES else "max..."
        return f"(...1,{left}|{right}{tail})"


@dataclass(frozen=True)
class Cylinder:
    """The clopen set of points whose digits on ``[-level, level]`` equal ``word``."""

    level: int
    word: tuple[int, ...]


@dataclass(frozen=True)
class BasicGSet:
    """Pairs ``(u z, u' z)`` sharing the tail ``z`` outside the window.

    Both coordinate projections are injective on such a set; they land on
    the cylinders of ``lower`` and ``upper`` respectively.
    """

    level: int
    lower: tuple[int, ...]
    upper: tuple[int, ...]

    @property
    def left_projection(self) -> Cylinder:
        return Cylinder(self.level, self.lower)

    @property
    def right_projection(self) -> Cylinder:
        return Cylinder(self.level, self.upper)


def mixed_radix_value(word: Sequence[int], radices: Sequence[int]) -> int:
    """Value of a word of 1-based digits, most significant digit first."""
    v = 0
    for digit, radix in zip(word, radices):
        v = v * radix + (digit - 1)
    return v


def mixed_radix_word(value: int, radices: Sequence[int]) -> tuple[int, ...]:
    out = []
    for radix in reversed(radices):
        value, d = divmod(value, radix)
        out.append(d + 1)
    if value:
        raise ValueError("value does not fit in the given radices")
    return tuple(reversed(out))


@dataclass(frozen=True)
class CantorSpace:
    r: SequenceProfile
    s: SequenceProfile

    # -- coordinates -------------------------------------------------------

    def bound(self, index: int) -> int:
        if index > 0:
            return self.r.term(index)
        if index < 0:
            return self.s.term(-index)
        raise ValueError("0 is not an index")

    def radices(self, level: int) -> list[int]:
        return [self.bound(i) for i in window_indices(level)]

    def m(self, k: int) -> int:
        return partial_product(self.r, k)

    def point(self, left: Sequence[int] = (), right: Sequence[int] = (),
              right_tail: Tail | str = Tail.ONES) -> Point:
        """Validate digits and return the canonical point."""
        right_tail = Tail(right_tail)
        left, right = list(left), list(right)
        for i, d in enumerate(left, 1):
            if not 1 <= d <= self.s.term(i):
                raise ValueError(f"digit {d} at index {-i} outside 1..{self.s.term(i)}")
        for k, d in enumerate(right, 1):
            if not 1 <= d <= self.r.term(k):
                raise ValueError(f"digit {d} at index {k} outside 1..{self.r.term(k)}")
        while left and left[-1] == 1:
            left.pop()
        if right_tail is Tail.ONES:
            while right and right[-1] == 1:
                right.pop()
        else:
            while right and right[-1] == self.r.term(len(right)):
                right.pop()
        return Point(tuple(left), tuple(right), right_tail)

    def is_canonical(self, x: Point) -> bool:
        try:
            return self.point(x.left, x.right, x.right_tail) == x
        except ValueError:
            return False

    @property
    def all_ones(self) -> Point:
        return Point()

    def digit(self, x: Point, index: int) -> int:
        if index < 0:
            i = -index
            return x.left[i - 1] if i <= len(x.left) else 1
        if index <= len(x.right):
            return x.right[index - 1]
        return 1 if x.right_tail is Tail.ONES else self.r.term(index)

    def word(self, x: Point, level: int) -> tuple[int, ...]:
        return tuple(self.digit(x, i) for i in window_indices(level))

    def words(self, level: int) -> Iterator[tuple[int, ...]]:
        """All window words in lexicographic order."""
        return itertools.product(*(range(1, b + 1) for b in self.radices(level)))

    def from_word(self, word: Sequence[int], level: int) -> Point:
        """Complete a window word by 1s on both sides."""
        left = tuple(reversed(word[:level]))
        return self.point(left, word[level:], Tail.ONES)

    # -- relations ---------------------------------------------------------

    def tail_equivalent(self, x: Point, y: Point) -> bool:
        # left tails are always 1; right tails differ at infinitely many
        # indices unless the flags agree, because r_k >= 2 infinitely often
        return x.right_tail is y.right_tail

    def in_R(self, x: Point, y: Point) -> bool:
        if not self.tail_equivalent(x, y):
            return False
        n = max(x.support, y.support)
        return self.word(x, n) <= self.word(y, n)

    def closure_member_at(self, y: Point, x: Point, level: int) -> bool:
        """The window-``level`` test for ``y`` in the closure of the orbit of ``x``.

        For ``level >= len(x.left)`` the cylinder of ``y`` meets ``O(x)`` iff
        the window word of ``y`` does not exceed that of ``x``; for smaller
        levels the cylinder always meets it.
        """
        if level < len(x.left):
            return True
        return self.word(y, level) <= self.word(x, level)

    def closure_member(self, y: Point, x: Point) -> bool:
        """Whether ``y`` lies in the closure of ``O(x) = {z : (z, x) in R}``."""
        n = max(x.support, y.support) + 1
        wy, wx = self.word(y, n), self.word(x, n)
        if wy != wx:
            return wy < wx
        # beyond the window only the tails differ; MAX eventually exceeds ONES
        return not (y.right_tail is Tail.MAX and x.right_tail is Tail.ONES)

    def strict_closure_member(self, y: Point, x: Point) -> bool:
        """Whether ``y`` lies in the closure of ``{z : (z, x) in R, z != x}``.

        Only ``y = x`` can differ from :meth:`closure_member`: a MAX-tailed
        point is a limit of its strict predecessors, a ONES-tailed one is not.
        """
        if y == x:
            return x.right_tail is Tail.MAX
        return self.closure_member(y, x)

    # -- valuation ---------------------------------------------------------

    def integer_weight(self, i: int) -> int:
        """Weight ``s_0 s_1 ... s_{i-1}`` of the digit at index ``-i``."""
        return partial_product(self.s, i - 1)

    def nu(self, x: Point) -> Fraction:
        total = Fraction(0)
        weight = 1
        for i, d in enumerate(x.left, 1):
            total += (d - 1) * weight
            weight *= self.s.term(i)
        m = 1
        for k, d in enumerate(x.right, 1):
            m *= self.r.term(k)
            total += Fraction(d - 1, m)
        if x.right_tail is Tail.MAX:
            # sum over k > L of (r_k - 1)/m_k telescopes to 1/m_L
            total += Fraction(1, m)
        return total

    def cocycle(self, x: Point, y: Point) -> Fraction:
        if not self.tail_equivalent(x, y):
            raise NotTailEquivalent(f"{x} and {y} are not tail equivalent")
        total = Fraction(0)
        for i in range(1, max(len(x.left), len(y.left)) + 1):
            total += (self.digit(y, -i) - self.digit(x, -i)) * self.integer_weight(i)
        for k in range(1, max(len(x.right), len(y.right)) + 1):
            total += Fraction(self.digit(y, k) - self.digit(x, k), self.m(k))
        return total

    def is_representable_value(self, v: Fraction) -> bool:
        v = Fraction(v)
        return v >= 0 and divides_int(v.denominator, from_profile(self.r))

    def value_to_points(self, v: Fraction) -> list[Point]:
        """All canonical points with valuation ``v``: the ONES expansion first,
        then the MAX-tailed twin when ``v`` is a positive gap value."""
        v = Fraction(v)
        if v < 0:
            raise NotRepresentable(f"{v} is negative")
        if not self.is_representable_value(v):
            raise NotRepresentable(f"{v}: denominator {v.denominator} divides no m_k")
        whole, frac = divmod(v, 1)
        whole = int(whole)
        left = []
        i = 1
        while whole:
            whole, d = divmod(whole, self.s.term(i))
            left.append(d + 1)
            i += 1
        # frac = units/m_k for the first k whose m_k absorbs the denominator
        k = 0
        while self.m(k) % frac.denominator:
            k += 1
        units = frac.numerator * (self.m(k) // frac.denominator)
        right = mixed_radix_word(units, [self.r.term(j) for j in range(1, k + 1)])
        ones = self.point(left, right, Tail.ONES)
        if v == 0:
            return [ones]
        return [ones, self.gap_predecessor(ones)]

    # -- gap pairs ---------------------------------------------------------

    def is_gap_point(self, x: Point) -> bool:
        return x.right_tail is Tail.MAX

    def gap_successor(self, x: Point) -> Point:
        """The point ``x+`` with ``O(x+)`` closure equal to that of ``O(x)`` plus ``x``.

        With ``p`` the smallest index from which ``x`` is maximal, ``x+``
        agrees with ``x`` below ``pred(p)``, increments the digit there and
        resets every digit from ``p`` on to 1.
        """
        if not self.is_gap_point(x):
            raise NotGapPoint(f"{x} has a ONES tail")
        x = self.point(x.left, x.right, x.right_tail)
        if x.right:
            right = x.right[:-1] + (x.right[-1] + 1,)
            return self.point(x.left, right, Tail.ONES)
        i = 1
        while self.digit(x, -i) == self.s.term(i):
            i += 1
        left = [1] * (i - 1) + [self.digit(x, -i) + 1] + list(x.left[i:])
        return self.point(left, (), Tail.ONES)

    def gap_predecessor(self, x: Point) -> Point:
        """Inverse of :meth:`gap_successor` on ONES points other than all-ones."""
        if x.right_tail is not Tail.ONES or x == self.all_ones:
            raise NotGapPoint(f"{x} is not the right member of a gap pair")
        if x.right:
            right = x.right[:-1] + (x.right[-1] - 1,)
            return self.point(x.left, right, Tail.MAX)
        i = next(i for i, d in enumerate(x.left, 1) if d != 1)
        left = [self.s.term(j) for j in range(1, i)] + [x.left[i - 1] - 1] + list(x.left[i:])
        return self.point(left, (), Tail.MAX)

    # -- measures ----------------------------------------------------------

    def cylinder_measure(self, c: Cylinder) -> Fraction:
        out = Fraction(1)
        for b in self.radices(c.level):
            out /= b
        return out

    def cylinder(self, x: Point, level: int) -> Cylinder:
        return Cylinder(level, self.word(x, level))

    def g_sets(self, level: int) -> Iterator[BasicGSet]:
        words = list(self.words(level))
        for i, lower in enumerate(words):
            for upper in words[i + 1:]:
                yield BasicGSet(level, lower, upper)

    def unique_invariant_measure(self, level: int) -> dict[Cylinder, Fraction]:
        """Solve the invariance equations on window-``level`` cylinders exactly.

        Every basic G-set forces equal weight on its two projections.  The
        homogeneous system must have a one-dimensional solution space, which
        is then normalised to total mass 1.
        """
        if level < 1:
            raise ValueError("level must be at least 1")
        words = list(self.words(level))
        solver = _linalg.SparseRREF(len(words))
        vec = None
        # each index pair (lo, hi) is the basic G-set with lower word
        # words[lo] and upper word words[hi]; taking the largest hi first
        # keeps every pivot row two-sparse
        pairs = ((lo, hi) for hi in reversed(range(len(words))) for lo in range(hi))
        for lo, hi in pairs:
            if vec is None:
                solver.add({lo: Fraction(1), hi: Fraction(-1)})
                if solver.rank == len(words) - 1:
                    (vec,) = solver.nullspace()
            elif vec[lo] != vec[hi]:
                # a row outside the span of the rows so far kills the last free direction
                raise DegenerateSystem("solution space has dimension 0")
        if vec is None:
            raise DegenerateSystem(f"solution space has dimension {len(words) - solver.rank}")
        total = sum(vec)
        if not total:
            raise DegenerateSystem("invariant solution has zero total mass")
        measure = {Cylinder(level, w): vec[i] / total for i, w in enumerate(words)}
        for c, weight in measure.items():
            if weight != self.cylinder_measure(c):
                raise DegenerateSystem(f"solution disagrees with product measure at {c}")
        return measure

    # -- sampling ----------------------------------------------------------

    def random_point(self, rng: random.Random, max_support: int = 4,
                     tail: Tail | None = None) -> Point:
        nl = rng.randint(0, max_support)
        nr = rng.randint(0, max_support)
        left = [rng.randint(1, self.s.term(i)) for i in range(1, nl + 1)]
        right = [rng.randint(1, self.r.term(k)) for k in range(1, nr + 1)]
        if tail is None:
            tail = rng.choice(list(Tail))
        return self.point(left, right, tail)


def parse_point(data: dict) -> tuple[list[int], list[int], Tail]:
    """Unpack a point literal ``{"left": [...], "right": [...], "right_tail": ...}``."""
    try:
        left = [int(v) for v in data.get("left", [])]
        right = [int(v) for v in data.get("right", [])]
        tail = Tail(str(data.get("right_tail", "ones")).lower())
    except (TypeError, ValueError, AttributeError) as exc:
        raise ValueError(f"bad point literal {data!r}: {exc}") from None
    return left, right, tail
