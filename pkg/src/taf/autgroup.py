"""Automorphisms of the fundamental relation and of the limit algebra.

Every automorphism of ``R(r_k, s_k)`` rescales the valuation, ``ν(α(x)) =
c·ν(x)``, where ``c`` is a product of integer powers of the primes dividing
infinitely many terms of both sequences.  This module computes that group,
realises its elements on points, builds the generators from matrix-unit
embeddings, and checks the finite combinatorial facts that pin it down.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .cantor import CantorSpace, Point, Tail, mixed_radix_value, mixed_radix_word
from .errors import (
    InvalidScaling,
    LevelOrder,
    LevelTooSmall,
    NotInvertible,
    NotRepresentable,
    PrimeNotInfinite,
    SizeMismatch,
    WrongShape,
)
from .matrixalg import (
    OMEGA,
    Coefficient,
    DirectSystem,
    MatrixUnit,
    TriElement,
    apply_step,
    compose_chain,
    rho,
    sigma,
    units,
)
from .supernat import (
    SequenceProfile,
    common_infinite_primes,
    factorize,
    from_profile,
    partial_product,
)


def out_rank(r: SequenceProfile, s: SequenceProfile) -> tuple[int, list[int]]:
    """Rank ``d`` of the outer automorphism group ``Z^d`` and its primes."""
    primes = common_infinite_primes(from_profile(r), from_profile(s))
    return len(primes), primes


def _has_p_at_odd_terms(profile: SequenceProfile, p: int) -> bool:
    horizon = len(profile.preamble) + 2 * len(profile.cycle)
    return all(profile.term(k) == p for k in range(1, horizon + 1, 2))


def refactor_products(profile: SequenceProfile, p: int) -> SequenceProfile:
    """Regroup the formal product so that every odd-indexed factor equals ``p``.

    Odd slots take one factor ``p`` each and the even slot absorbs what is
    left of one period; the preamble's finitely occurring primes go into the
    first even slot.  Profiles that already have this shape are returned as is.
    """
    sn = from_profile(profile)
    if p not in sn.infinite_primes:
        raise PrimeNotInfinite(f"{p} does not divide infinitely many terms of {profile}")
    if _has_p_at_odd_terms(profile, p):
        return profile
    period = math.prod(profile.cycle)
    finite = math.prod(q**e for q, e in sn.finite_part)
    preamble = (p, finite) if finite > 1 else ()
    return SequenceProfile(preamble, (p, period // p))


# -- exponent vectors -----------------------------------------------------


@dataclass(frozen=True)
class ExponentVector:
    """An element ``(a_p)`` of ``Z^d``; acts on valuations by ``c = Π p^{a_p}``."""

    exponents: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[int, int] | None = None) -> ExponentVector:
        mapping = mapping or {}
        return cls(tuple(sorted((int(p), int(a)) for p, a in mapping.items() if a)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.exponents)

    @property
    def support(self) -> set[int]:
        return {p for p, _ in self.exponents}

    @property
    def scaling(self) -> Fraction:
        out = Fraction(1)
        for p, a in self.exponents:
            out *= Fraction(p) ** a
        return out

    def __add__(self, other: ExponentVector) -> ExponentVector:
        out = self.as_dict()
        for p, a in other.exponents:
            out[p] = out.get(p, 0) + a
        return ExponentVector.of(out)

    def __neg__(self) -> ExponentVector:
        return ExponentVector.of({p: -a for p, a in self.exponents})

    def to_dict(self) -> dict[str, int]:
        return {str(p): a for p, a in self.exponents}

    def __str__(self):
        return "·".join(f"{p}^{a}" for p, a in self.exponents) or "1"


def exponent_compose(a: ExponentVector, b: ExponentVector) -> ExponentVector:
    return a + b


def exponents_of_scaling(c: Fraction) -> ExponentVector:
    """Inverse of :attr:`ExponentVector.scaling` for positive rationals."""
    c = Fraction(c)
    if c <= 0:
        raise InvalidScaling(f"scaling {c} is not positive")
    out = dict(factorize(c.numerator))
    for q, e in factorize(c.denominator).items():
        out[q] = out.get(q, 0) - e
    return ExponentVector.of(out)


def alpha_on_point(space: CantorSpace, c: ExponentVector, x: Point,
                   strict: bool = True) -> Point:
    """The point ``y`` with ``ν(y) = c·ν(x)`` and the same right tail as ``x``.

    A value shared by a gap pair is resolved by matching tails: left gap
    points go to left gap points.
    """
    if strict:
        _, primes = out_rank(space.r, space.s)
        bad = c.support - set(primes)
        if bad:
            raise InvalidScaling(f"primes {sorted(bad)} are not common infinite primes")
    try:
        candidates = space.value_to_points(c.scaling * space.nu(x))
    except NotRepresentable:
        if strict:
            raise AssertionError("valid scaling left the value cone") from None
        raise
    for y in candidates:
        if y.right_tail is x.right_tail:
            return y
    raise AssertionError(f"no tail-matching image for {x}")  # pragma: no cover


# -- gap charts -----------------------------------------------------------


@dataclass(frozen=True)
class GapChart:
    """Coordinates of a left gap point ``(..., 1, 1, w, r_t, r_{t+1}, ...)``.

    ``w`` occupies indices ``-t+1 .. t-1``; ``n`` counts the words of that
    length up to ``w`` and ``c = n / m_{t-1}``.
    """

    t: int
    w: tuple[int, ...]
    n: int
    c: Fraction


def gap_chart(space: CantorSpace, g: Point, t: int | None = None) -> GapChart:
    if g.right_tail is not Tail.MAX:
        raise WrongShape(f"{g} is not a left gap point")
    t_min = max(len(g.left), len(g.right)) + 1
    if t is None:
        t = t_min
    if t < t_min:
        raise WrongShape(f"{g} is not maximal from index {t} or not trivial below {-t}")
    w = space.word(g, t - 1)
    n = 1 + mixed_radix_value(w, space.radices(t - 1))
    return GapChart(t, w, n, Fraction(n, space.m(t - 1)))


def chart_measure(space: CantorSpace, chart: GapChart, y: Point) -> Fraction:
    """Normalised invariant measure of the orbit closure of ``y`` inside that of the charted gap point.

    The prefix word ``w'`` of ``y`` counts ``(‖w'‖ - 1)/n`` and the
    coordinates from index ``t`` on contribute
    ``Σ (y_{t+k-1} - 1)·m_{t-1} / (n·m_{t+k-1})``.
    """
    t, n = chart.t, chart.n
    if len(y.left) > t - 1:
        raise WrongShape(f"{y} is not in the orbit closure charted from index {t}")
    prefix = space.word(y, t - 1)
    total = Fraction(mixed_radix_value(prefix, space.radices(t - 1)), n)
    m_prev = space.m(t - 1)
    m = m_prev
    k = t
    while k <= len(y.right):
        m *= space.r.term(k)
        total += Fraction((y.right[k - 1] - 1) * m_prev, n * m)
        k += 1
    if y.right_tail is Tail.MAX:
        # remaining maximal digits sum to 1/m_{k-1}
        total += Fraction(m_prev, n * m)
    return total


# -- the zig-zag generators -----------------------------------------------


def _check_zigzag_system(p: int, sys: DirectSystem, level: int):
    if level < 2 or level % 2:
        raise ValueError(f"level {level} must be even and at least 2")
    if sys.r.term(level + 1) != p:
        raise WrongShape(f"r_{level + 1} = {sys.r.term(level + 1)} != {p}; refactor the profiles first")


def zigzag_unit_image(p: int, sys: DirectSystem, e: MatrixUnit | TriElement, level: int) -> TriElement:
    """Image under the generator of an element of stage ``level``.

    The downward arrow of the diagram is ``σ_p`` into the stage after
    ``ρ_{r_{N+1}} = ρ_p``, so the result lives in ``T_{d(N)·p}``.
    """
    _check_zigzag_system(p, sys, level)
    return apply_step(sigma(p, sys.size(level)), e)


def zigzag_image(p: int, sys: DirectSystem, x: Point, level: int) -> Point:
    """Image of ``x`` under the automorphism given by the zig-zag diagram.

    ``σ_p(e(x, N))`` is a sum of diagonal units at positions
    ``a(N) + k·d(N)``; decoding each gives a word on indices ``-N .. N+1``.
    The image point is the R-minimal completion of these words by 1s.
    """
    _check_zigzag_system(p, sys, level)
    if x.right_tail is not Tail.ONES:
        raise WrongShape(f"{x} must have a ONES tail")
    if x.support > level:
        raise LevelTooSmall(f"{x} has support {x.support} > {level}")
    sp = sys.space
    image = zigzag_unit_image(p, sys, sys.projection(x, level), level)
    radices = sp.radices(level) + [sys.r.term(level + 1)]
    candidates = []
    for pos, _ in sorted(image.terms):
        word = mixed_radix_word(pos - 1, radices)
        candidates.append(sp.point(tuple(reversed(word[:level])), word[level:], Tail.ONES))
    minimal = [u for u in candidates if all(sp.in_R(u, v) for v in candidates)]
    if len(minimal) != 1:
        raise AssertionError("fiber has no unique R-minimal point")  # pragma: no cover
    return minimal[0]


def zigzag_mismatches(p: int, sys: DirectSystem, level: int) -> int:
    """Count matrix units on which the finite-stage zig-zag diagram fails to commute.

    Checks the triangle ``ρ_p then σ_p`` against ``σ_p then ρ_p`` at stage
    ``N`` and the parallelogram from the bottom stage after ``ρ_{r_{N+1}}``
    to the bottom stage after ``ρ_{r_{N+3}}``.
    """
    _check_zigzag_system(p, sys, level)
    if sys.s.term(level + 1) != p or sys.r.term(level + 3) != p:
        raise WrongShape("zig-zag needs r_k = s_k = p at the odd stages involved")
    r2, s2 = sys.r.term(level + 2), sys.s.term(level + 2)
    top = sys.size(level)
    bad = 0
    for e in units(top):
        straight = compose_chain([rho(p, top), sigma(p, top * p)], e)
        zig = compose_chain([sigma(p, top), rho(p, top * p)], e)
        bad += straight != zig
    n = top * p
    bottom = [sigma(p, n), rho(r2, n * p), sigma(s2, n * p * r2), rho(p, n * p * r2 * s2)]
    zig = [rho(p, n), rho(r2, n * p), sigma(s2, n * p * r2), sigma(p, n * p * r2 * s2)]
    for e in units(n):
        bad += compose_chain(bottom, e) != compose_chain(zig, e)
    return bad


# -- density falsifier ----------------------------------------------------


@dataclass(frozen=True)
class SearchBounds:
    max_k: int = 10**4
    max_m: int = 10**4
    max_j: int = 6

    @classmethod
    def from_env(cls, default: SearchBounds | None = None) -> SearchBounds:
        base = default or cls()
        raw = os.environ.get("TAF_SEARCH_BOUND")
        if not raw:
            return base
        bound = int(raw)
        return cls(bound, bound, base.max_j)


@dataclass(frozen=True)
class DensityWitness:
    """``value = ν(x) + m·s_1···s_j`` lies in ``[c·k·s_1, c·k·s_1 + c]``.

    So the image of ``E = {y : y_{-1} = 1}`` under multiplication by ``c``
    meets ``F_j(x)``, the points agreeing with ``x`` from index ``-j`` on.
    """

    base_point: Point
    c: Fraction
    j: int
    k: int
    m: int
    value: Fraction


@dataclass(frozen=True)
class Exhausted:
    c: Fraction
    depths: tuple[int, ...]
    bounds: SearchBounds


def progression(space: CantorSpace, x: Point, j: int) -> tuple[Fraction, int, int]:
    """``(ν(x), period, m_min)`` for the values ``ν(x) + m·period`` on ``F_j(x)``."""
    period = partial_product(space.s, j)
    free = sum((d - 1) * space.integer_weight(i)
               for i, d in enumerate(x.left, 1) if i > j)
    return space.nu(x), period, -(free // period)


def is_density_witness(space: CantorSpace, c: Fraction, x: Point,
                       j: int, k: int, m: int) -> bool:
    nu_x, period, m_min = progression(space, x, j)
    if m < m_min or k < 0:
        return False
    v = nu_x + m * period
    lo = c * k * space.s.term(1)
    return lo <= v <= lo + c


def density_witness(space: CantorSpace, c: Fraction, x: Point | None = None,
                    j: int | None = None,
                    bounds: SearchBounds | None = None) -> DensityWitness | Exhausted:
    """Smallest ``(j, k, m)`` showing that ``c·ν(E)`` meets ``ν(F_j(x))``.

    Works on values only, so it accepts scalings that define no automorphism.
    """
    c = Fraction(c)
    if c <= 0:
        raise InvalidScaling(f"scaling {c} is not positive")
    x = space.all_ones if x is None else x
    bounds = bounds or SearchBounds.from_env()
    depths = (j,) if j is not None else tuple(range(1, bounds.max_j + 1))
    s1 = space.s.term(1)
    for depth in depths:
        nu_x, period, m_min = progression(space, x, depth)
        for k in range(bounds.max_k + 1):
            lo = c * k * s1
            m = max(m_min, math.ceil((lo - nu_x) / period))
            if m > bounds.max_m:
                break
            v = nu_x + m * period
            if v <= lo + c:
                return DensityWitness(x, c, depth, k, m, v)
    return Exhausted(c, depths, bounds)


def cone_values(space: CantorSpace, limit: int) -> list[Fraction]:
    """Gap values ``ℓ/m_k`` with ``ℓ ≥ 1`` and ``ℓ·m_k ≤ limit``."""
    out = set()
    k = 0
    while space.m(k) <= limit:
        mk = space.m(k)
        out.update(Fraction(l, mk) for l in range(1, limit // mk + 1))
        k += 1
        if k > limit:  # guards against long runs of r_k = 1
            break
    return sorted(out)


def cone_counterexample(space: CantorSpace, c: Fraction, limit: int) -> tuple[Fraction, Fraction] | None:
    """A gap value ``v`` such that ``c·v`` or ``v/c`` leaves the value cone.

    None means multiplication by ``c`` acts bijectively on the cone as far
    as ``limit`` reaches.
    """
    c = Fraction(c)
    for v in cone_values(space, limit):
        for image in (c * v, v / c):
            if not space.is_representable_value(image):
                return v, image
    return None


# -- inner witnesses ------------------------------------------------------


def _fiber(values: Sequence) -> tuple[Coefficient, ...]:
    return tuple(Coefficient.of(v) for v in values)


def _fiber_mul(a: Sequence[Coefficient], b: Sequence[Coefficient]) -> tuple[Coefficient, ...]:
    return tuple(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class InnerWitness:
    """Diagonal ``u = Σ e_ii ⊗ u_0···u_{i-1}`` in ``T_r ⊗ C^m``.

    ``T_r ⊗ C^m`` is realised inside ``T_{r·m}`` by the refinement embedding
    ``e_ij ⊗ f_k -> e_{(i-1)m+k, (j-1)m+k}``.
    """

    r: int
    fiber_dim: int
    offdiag: tuple[tuple[Coefficient, ...], ...]
    u: TriElement

    def cumulative(self, i: int, j: int) -> tuple[Coefficient, ...]:
        """Fiberwise product ``u_i u_{i+1} ··· u_{j-1}``."""
        out = _fiber([1] * self.fiber_dim)
        for l in range(i, j):
            out = _fiber_mul(out, self.offdiag[l - 1])
        return out

    def tensor(self, e: MatrixUnit, fiber: Sequence[Coefficient]) -> TriElement:
        m = self.fiber_dim
        return TriElement(self.r * m, {((e.row - 1) * m + k, (e.col - 1) * m + k): c
                                       for k, c in enumerate(fiber, 1)})

    def gamma(self, e: MatrixUnit) -> TriElement:
        """The diagonal-fixing automorphism, ``e_ij -> e_ij ⊗ u_i···u_{j-1}``."""
        return self.tensor(e, self.cumulative(e.row, e.col))

    def conjugate(self, e: MatrixUnit) -> TriElement:
        """``u^{-1} (e ⊗ 1) u``."""
        lifted = apply_step(rho(self.fiber_dim, self.r), e)
        return self.u.diagonal_inverse() @ lifted @ self.u

    def conjugation_holds(self) -> bool:
        return all(self.conjugate(e) == self.gamma(e) for e in units(self.r))

    @property
    def norm_sq(self) -> Fraction:
        return max(c.norm_sq() for c in self.u.terms.values())


def inner_witness(r: int, fiber_dim: int, offdiag: Sequence[Sequence]) -> InnerWitness:
    if r < 1 or fiber_dim < 1:
        raise ValueError("sizes must be positive")
    if len(offdiag) != r - 1:
        raise SizeMismatch(f"need {r - 1} off-diagonal fiber tuples, got {len(offdiag)}")
    fibers = tuple(_fiber(t) for t in offdiag)
    for t in fibers:
        if len(t) != fiber_dim:
            raise SizeMismatch(f"fiber tuple {t} does not have length {fiber_dim}")
        if not all(t):
            raise NotInvertible(f"fiber tuple {tuple(map(str, t))} has a zero entry")
    entries = []
    running = _fiber([1] * fiber_dim)  # u_0 = 1
    for i in range(r):
        if i:
            running = _fiber_mul(running, fibers[i - 1])
        entries.extend(running)
    return InnerWitness(r, fiber_dim, fibers, TriElement.diagonal(entries))


# -- approximately inner, not inner ---------------------------------------


@dataclass(frozen=True)
class StabilizationRecord:
    stabilized: TriElement
    stabilizes: bool
    separation_sq: Fraction


def _d(level: int, lam: Coefficient = OMEGA) -> TriElement:
    return TriElement.diagonal([lam**i for i in range(1, 2**level + 1)])


def remark2_check(n: int, m: int, a: MatrixUnit, h: Sequence | None = None) -> StabilizationRecord:
    """Stabilisation of ``Ad d_n`` along the standard embeddings, and the
    separation of the limit from conjugation by a period-``2^n`` diagonal.
    """
    if m <= n:
        raise LevelOrder(f"need m > n, got n={n}, m={m}")
    if a.size != 2**n:
        raise SizeMismatch(f"{a} is not a unit of T_{2**n}")
    chain = [sigma(2, 2**k) for k in range(n, m)]
    dn, dm = _d(n), _d(m)
    lifted = compose_chain(chain, a)
    lhs = dm @ lifted @ dm.diagonal_inverse()
    stabilized = compose_chain(chain, dn @ TriElement.unit(a) @ dn.diagonal_inverse())

    period = 2**n
    h = _fiber(h if h is not None else range(1, period + 1))
    if len(h) != period or not all(h):
        raise NotInvertible("h must have 2^n nonzero entries")
    hm = TriElement.diagonal([h[i % period] for i in range(2**m)])
    e = TriElement.unit(MatrixUnit(1, 1 + period, 2**m))
    diff = dm @ e @ dm.diagonal_inverse() - hm @ e @ hm.diagonal_inverse()
    (coef,) = diff.terms.values()
    return StabilizationRecord(stabilized, lhs == stabilized, coef.norm_sq())
