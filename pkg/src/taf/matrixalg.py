"""Formal upper-triangular matrix-unit algebras and their embeddings.

Elements are finite linear combinations of matrix units ``e_ij`` (``i <= j``)
with coefficients in ``Q(ω)``, ω a primitive cube root of unity.  Products
use ``e_ij e_kl = δ_jk e_il``; no numerical matrix is ever formed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .cantor import CantorSpace, Point, mixed_radix_value, mixed_radix_word
from .errors import NotInvertible, SizeMismatch
from .supernat import SequenceProfile, partial_product


@dataclass(frozen=True)
class Coefficient:
    """The number ``a + b·ω`` with ``ω² = -1 - ω``."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def of(cls, value: Union[Coefficient, int, Fraction]) -> Coefficient:
        return value if isinstance(value, Coefficient) else cls(Fraction(value))

    def __bool__(self):
        return bool(self.a or self.b)

    def __add__(self, other):
        other = Coefficient.of(other)
        return Coefficient(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return Coefficient(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-Coefficient.of(other))

    def __rsub__(self, other):
        return Coefficient.of(other) - self

    def __mul__(self, other):
        other = Coefficient.of(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        return Coefficient(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def conjugate(self) -> Coefficient:
        # conj(ω) = ω² = -1 - ω
        return Coefficient(self.a - self.b, -self.b)

    def norm_sq(self) -> Fraction:
        """Squared modulus ``a² - ab + b²``."""
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> Coefficient:
        n = self.norm_sq()
        if not n:
            raise NotInvertible("zero has no inverse")
        c = self.conjugate()
        return Coefficient(c.a / n, c.b / n)

    def __truediv__(self, other):
        return self * Coefficient.of(other).inverse()

    def __pow__(self, n: int) -> Coefficient:
        base = self if n >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(n)):
            out = out * base
        return out

    def to_dict(self) -> dict:
        return {"a": _rat(self.a), "b": _rat(self.b)}

    def __str__(self):
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}ω"
        sign = "+" if self.b > 0 else "-"
        return f"({self.a}{sign}{abs(self.b)}ω)"


def _rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


ONE = Coefficient(Fraction(1))
OMEGA = Coefficient(Fraction(0), Fraction(1))


@dataclass(frozen=True, order=True)
class MatrixUnit:
    row: int
    col: int
    size: int

    def __post_init__(self):
        if not 1 <= self.row <= self.col <= self.size:
            raise ValueError(f"e_{{{self.row},{self.col}}} is not a unit of T_{self.size}")


def units(size: int) -> list[MatrixUnit]:
    return [MatrixUnit(i, j, size) for i in range(1, size + 1) for j in range(i, size + 1)]


@dataclass(frozen=True)
class TriElement:
    """A finite combination ``Σ c_ij e_ij`` in ``T_size``; zero terms are dropped."""

    size: int
    terms: Mapping[tuple[int, int], Coefficient] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), c in self.terms.items():
            if not 1 <= i <= j <= self.size:
                raise ValueError(f"({i},{j}) is not upper triangular in T_{self.size}")
            c = Coefficient.of(c)
            if c:
                clean[(i, j)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def unit(cls, e: MatrixUnit, coef=ONE) -> TriElement:
        return cls(e.size, {(e.row, e.col): coef})

    @classmethod
    def identity(cls, size: int) -> TriElement:
        return cls(size, {(i, i): ONE for i in range(1, size + 1)})

    @classmethod
    def diagonal(cls, entries: Sequence) -> TriElement:
        return cls(len(entries), {(i, i): c for i, c in enumerate(entries, 1)})

    def __eq__(self, other):
        if not isinstance(other, TriElement):
            return NotImplemented
        return self.size == other.size and self.terms == other.terms

    def __hash__(self):
        return hash((self.size, frozenset(self.terms.items())))

    def _check(self, other: TriElement):
        if self.size != other.size:
            raise SizeMismatch(f"T_{self.size} vs T_{other.size}")

    def __add__(self, other: TriElement) -> TriElement:
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Coefficient()) + c
        return TriElement(self.size, out)

    def __neg__(self):
        return TriElement(self.size, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: TriElement) -> TriElement:
        return self + (-other)

    def scale(self, coef) -> TriElement:
        return TriElement(self.size, {k: c * coef for k, c in self.terms.items()})

    def __matmul__(self, other: TriElement) -> TriElement:
        self._check(other)
        by_row: dict[int, list[tuple[int, Coefficient]]] = {}
        for (k, l), c in other.terms.items():
            by_row.setdefault(k, []).append((l, c))
        out: dict[tuple[int, int], Coefficient] = {}
        for (i, j), c in self.terms.items():
            for l, d in by_row.get(j, ()):
                out[(i, l)] = out.get((i, l), Coefficient()) + c * d
        return TriElement(self.size, out)

    @property
    def is_diagonal(self) -> bool:
        return all(i == j for i, j in self.terms)

    def diagonal_inverse(self) -> TriElement:
        if not self.is_diagonal or len(self.terms) != self.size:
            raise NotInvertible("only fully supported diagonal elements are inverted")
        return TriElement(self.size, {k: c.inverse() for k, c in self.terms.items()})

    def to_records(self) -> list[dict]:
        return [{"row": i, "col": j, "coeff": c.to_dict()}
                for (i, j), c in sorted(self.terms.items())]

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}·e{i},{j}" if c != ONE else f"e{i},{j}"
                          for (i, j), c in sorted(self.terms.items()))


class Kind(enum.Enum):
    REFINEMENT = "rho"
    STANDARD = "sigma"


@dataclass(frozen=True)
class EmbeddingStep:
    kind: Kind
    multiplicity: int
    source_size: int

    @property
    def target_size(self) -> int:
        return self.source_size * self.multiplicity

    def __str__(self):
        sym = "ρ" if self.kind is Kind.REFINEMENT else "σ"
        return f"{sym}_{self.multiplicity}:T_{self.source_size}"


def rho(t: int, n: int) -> EmbeddingStep:
    return EmbeddingStep(Kind.REFINEMENT, t, n)


def sigma(t: int, n: int) -> EmbeddingStep:
    return EmbeddingStep(Kind.STANDARD, t, n)


def _image_indices(step: EmbeddingStep, i: int, j: int) -> Iterable[tuple[int, int]]:
    t, n = step.multiplicity, step.source_size
    if step.kind is Kind.REFINEMENT:
        return (((i - 1) * t + k, (j - 1) * t + k) for k in range(1, t + 1))
    return ((i + k * n, j + k * n) for k in range(t))


def apply_step(step: EmbeddingStep, e: Union[MatrixUnit, TriElement]) -> TriElement:
    """Refinement ``a -> (a_ij 1_t)`` or standard ``a -> a ⊕ ... ⊕ a``, extended linearly."""
    if isinstance(e, MatrixUnit):
        e = TriElement.unit(e)
    if e.size != step.source_size:
        raise SizeMismatch(f"{step} applied to an element of T_{e.size}")
    out = {}
    for (i, j), c in e.terms.items():
        for key in _image_indices(step, i, j):
            out[key] = c
    return TriElement(step.target_size, out)


def compose_chain(steps: Sequence[EmbeddingStep], e: Union[MatrixUnit, TriElement]) -> TriElement:
    """Apply ``steps`` left to right."""
    out = TriElement.unit(e) if isinstance(e, MatrixUnit) else e
    for step in steps:
        out = apply_step(step, out)
    return out


@dataclass(frozen=True)
class DirectSystem:
    """``C -> T_{r_1} -> T_{s_1 r_1} -> T_{s_1 r_1 r_2} -> ...`` via ρ_{r_1}, σ_{s_1}, ρ_{r_2}, ...

    Level ``N`` is the stage after ``N`` (ρ, σ) pairs.  Its diagonal units
    are indexed by window words ``(x_{-N}, ..., x_{-1}, x_1, ..., x_N)`` in
    lexicographic order: each ρ appends a least significant digit and each
    σ prepends a most significant one.
    """

    r: SequenceProfile
    s: SequenceProfile

    @property
    def space(self) -> CantorSpace:
        return CantorSpace(self.r, self.s)

    def size(self, level: int) -> int:
        return partial_product(self.s, level) * partial_product(self.r, level)

    def steps(self, level: int) -> list[EmbeddingStep]:
        out, n = [], 1
        for k in range(1, level + 1):
            out.append(rho(self.r.term(k), n))
            n *= self.r.term(k)
            out.append(sigma(self.s.term(k), n))
            n *= self.s.term(k)
        return out

    def steps_between(self, lo: int, hi: int) -> list[EmbeddingStep]:
        """Connecting maps from level ``lo`` to level ``hi``."""
        return self.steps(hi)[2 * lo:]

    def lex_position(self, x: Point, level: int) -> tuple[int, int]:
        """``(a(N), d(N))``: the position of ``e(x, N)`` among the ``d(N)`` diagonal units."""
        if level < 1:
            raise ValueError("level must be at least 1")
        sp = self.space
        a = 1 + mixed_radix_value(sp.word(x, level), sp.radices(level))
        return a, self.size(level)

    def word_at(self, position: int, level: int) -> tuple[int, ...]:
        return mixed_radix_word(position - 1, self.space.radices(level))

    def projection(self, x: Point, level: int) -> TriElement:
        """The diagonal unit ``e(x, N)``."""
        a, d = self.lex_position(x, level)
        return TriElement.unit(MatrixUnit(a, a, d))

    def mu_in_R(self, x: Point, y: Point, level: int) -> bool:
        """Whether a unit of ``T_{d(N)}`` has initial projection ``e(y,N)`` and final ``e(x,N)``."""
        ax, _ = self.lex_position(x, level)
        ay, _ = self.lex_position(y, level)
        return ax <= ay
