"""Finite-level verification suite behind ``taf verify``.

Each check returns a :class:`Check`; sampling uses a fixed seed so reports
are reproducible byte for byte.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import autgroup
from .autgroup import ExponentVector, alpha_on_point, out_rank
from .cantor import CantorSpace, Tail
from .errors import TafError
from .matrixalg import DirectSystem, MatrixUnit, compose_chain, rho, sigma, units
from .supernat import from_profile

SEED = 20260101


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


def commutation(max_product: int = 64) -> Check:
    bad = total = 0
    for n in range(1, max_product + 1):
        for r in range(1, max_product // n + 1):
            for s in range(1, max_product // (n * r) + 1):
                for e in units(n):
                    a = compose_chain([rho(r, n), sigma(s, n * r)], e)
                    b = compose_chain([sigma(s, n), rho(r, n * s)], e)
                    bad += a != b
                    total += 1
    return Check("embedding commutation", bad == 0, f"{total} units, {bad} mismatches")


def relation_oracle(space: CantorSpace, max_support: int, samples: int = 200) -> Check:
    rng = random.Random(SEED)
    sys = DirectSystem(space.r, space.s)
    bad = 0
    for _ in range(samples):
        tail = rng.choice(list(Tail))
        x = space.random_point(rng, max_support, tail)
        y = space.random_point(rng, max_support, tail)
        n0 = max(x.support, y.support)
        expected = space.in_R(x, y)
        bad += any(sys.mu_in_R(x, y, n) != expected for n in range(n0 + 1, n0 + 4))
    return Check("R vs matrix-unit oracle", bad == 0, f"{samples} pairs, {bad} disagreements")


def measure_uniqueness(space: CantorSpace, level: int) -> Check:
    levels = range(1, min(level, 3) + 1)
    try:
        for n in levels:
            space.unique_invariant_measure(n)
    except TafError as exc:
        return Check("invariant measure uniqueness", False, f"{type(exc).__name__}: {exc}")
    return Check("invariant measure uniqueness", True, f"levels {list(levels)}")


def gap_laws(space: CantorSpace, samples: int = 50, probes: int = 20) -> Check:
    rng = random.Random(SEED + 1)
    bad = 0
    for _ in range(samples):
        x = space.random_point(rng, 4, Tail.MAX)
        xp = space.gap_successor(x)
        ok = (space.nu(x) == space.nu(xp) and xp != x
              and not space.closure_member(xp, x) and space.closure_member(x, xp))
        zs = [x, xp] + [space.random_point(rng, 4) for _ in range(probes)]
        for z in zs:
            # reflexive orbits gain exactly x+; strict orbits gain exactly x
            ok &= space.closure_member(z, xp) == (space.closure_member(z, x) or z == xp)
            ok &= space.strict_closure_member(z, xp) == (space.strict_closure_member(z, x) or z == x)
        bad += not ok
    return Check("gap pair laws", bad == 0, f"{samples} gap points, {bad} failures")


def cocycle_laws(space: CantorSpace, samples: int = 200) -> Check:
    rng = random.Random(SEED + 2)
    bad = 0
    for _ in range(samples):
        tail = rng.choice(list(Tail))
        x, y, z = (space.random_point(rng, 4, tail) for _ in range(3))
        d = space.cocycle(x, y)
        ok = d == space.cocycle(x, z) + space.cocycle(z, y)
        ok &= space.in_R(x, y) == (d >= 0)
        ok &= d == space.nu(y) - space.nu(x)
        bad += not ok
    return Check("cocycle laws", bad == 0, f"{samples} triples, {bad} failures")


def zigzag_agreement(space: CantorSpace, level: int) -> Check:
    _, primes = out_rank(space.r, space.s)
    if not primes:
        return Check("zig-zag vs scaling", True, "d = 0, no generators")
    evens = [n for n in (2, 4) if n <= max(level, 2)]
    bad = total = 0
    for p in primes:
        sys = DirectSystem(autgroup.refactor_products(space.r, p),
                           autgroup.refactor_products(space.s, p))
        sp = sys.space
        gen = ExponentVector.of({p: -1})
        for n in evens:
            for word in sp.words(n - 1):
                x = sp.from_word(word, n - 1)
                total += 1
                bad += autgroup.zigzag_image(p, sys, x, n) != alpha_on_point(sp, gen, x)
        bad += autgroup.zigzag_mismatches(p, sys, 2)
    return Check("zig-zag vs scaling", bad == 0,
                 f"primes {primes}, {total} points, {bad} mismatches")


def group_structure(space: CantorSpace, bound: int = 2, probes: int = 20) -> Check:
    _, primes = out_rank(space.r, space.s)
    vectors = [ExponentVector.of(dict(zip(primes, combo)))
               for combo in itertools.product(range(-bound, bound + 1), repeat=len(primes))]
    ok = all(a + (b + c) == (a + b) + c for a in vectors for b in vectors for c in vectors)
    ok &= all(a + b == b + a and (a + b).scaling == a.scaling * b.scaling
              for a in vectors for b in vectors)
    ok &= all(a + (-a) == ExponentVector() for a in vectors)
    rng = random.Random(SEED + 3)
    points = [space.random_point(rng, 3) for _ in range(probes)]
    for a, b in itertools.product(vectors, repeat=2):
        for x in points:
            ok &= (alpha_on_point(space, a + b, x)
                   == alpha_on_point(space, a, alpha_on_point(space, b, x)))
    return Check("exponent group structure", ok,
                 f"{len(vectors)} vectors over primes {primes}, {probes} probe points")


def density(space: CantorSpace) -> Check:
    """Falsifier for scalings by primes outside the common set, cone check for the rest."""
    r_inf = sorted(from_profile(space.r).infinite_primes)
    s_sn = from_profile(space.s)
    notes = []
    ok = True
    for p in r_inf:
        if p in s_sn.infinite_primes:
            cex = autgroup.cone_counterexample(space, Fraction(p), 10**3)
            ok &= cex is None
            notes.append(f"c={p}: cone preserved" if cex is None else f"c={p}: cone broken at {cex}")
        elif s_sn.multiplicity(p) == 0:
            rng = random.Random(SEED + p)
            bases = [space.all_ones] + [space.random_point(rng, 3, Tail.ONES) for _ in range(5)]
            found = all(isinstance(autgroup.density_witness(space, p, x, j), autgroup.DensityWitness)
                        for x in bases for j in range(1, 5))
            ok &= found
            notes.append(f"c={p}: witnesses {'found' if found else 'missing'} for j<=4")
        else:
            notes.append(f"c={p}: skipped, divides finitely many s_k")
    return Check("density falsifier", ok, "; ".join(notes) or "no infinite primes")


def inner_witnesses(max_r: int = 4, max_fiber: int = 2) -> Check:
    rng = random.Random(SEED + 4)
    bad = total = 0
    for r in range(1, max_r + 1):
        for m in range(1, max_fiber + 1):
            off = [tuple(Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
                         for _ in range(m)) for _ in range(r - 1)]
            w = autgroup.inner_witness(r, m, off)
            total += 1
            bad += not w.conjugation_holds()
    return Check("inner witness conjugation", bad == 0, f"{total} witnesses, {bad} failures")


def not_inner(max_n: int = 1) -> Check:
    ok = True
    for n in range(1, max_n + 1):
        for m in (n + 1, n + 2):
            for a in units(2**n):
                rec = autgroup.remark2_check(n, m, a)
                ok &= rec.stabilizes and rec.separation_sq == 3
    return Check("approximately inner, not inner", ok, "separation squared 3 > 1/16")


def run_all(space: CantorSpace, level: int) -> list[Check]:
    return [
        commutation(),
        relation_oracle(space, level),
        measure_uniqueness(space, level),
        gap_laws(space),
        cocycle_laws(space),
        zigzag_agreement(space, level),
        group_structure(space),
        density(space),
        inner_witnesses(),
        not_inner(),
    ]


__all__ = ["Check", "MatrixUnit", "run_all"]
