import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from taf.errors import InvalidProfile
from taf.supernat import (
    SequenceProfile,
    Supernatural,
    common_infinite_primes,
    divides,
    divides_int,
    factorize,
    finitely_equivalent,
    from_profile,
    is_prime,
    partial_product,
)

from conftest import profiles


def sn(finite=None, infinite=()):
    return Supernatural.build(finite, infinite)


def test_factorize_small():
    assert factorize(1) == {}
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(97) == {97: 1}


@given(st.integers(1, 10**6))
def test_factorize_multiplies_back(n):
    assert math.prod(p**e for p, e in factorize(n).items()) == n
    assert all(is_prime(p) for p in factorize(n))


def test_factorize_returns_copy():
    factorize(12)[2] = 99
    assert factorize(12) == {2: 2, 3: 1}


@pytest.mark.parametrize("pre, cyc", [((), ()), ((0,), (2,)), ((), (1,)), ((), (1, 1)), ((), (-2,)),
                                      ((), (10**6 + 1,))])
def test_invalid_profiles(pre, cyc):
    with pytest.raises(InvalidProfile):
        SequenceProfile(pre, cyc)


def test_profile_terms():
    p = SequenceProfile((4, 3), (5, 7))
    assert p.terms(6) == [4, 3, 5, 7, 5, 7]
    with pytest.raises(IndexError):
        p.term(0)
    assert str(p) == "[4,3](5,7)*"
    assert SequenceProfile.constant(2).to_dict() == {"preamble": [], "cycle": [2]}


@pytest.mark.parametrize("pre, cyc, finite, infinite", [
    ((), (2,), {}, {2}),
    ((4, 3), (5,), {2: 2, 3: 1}, {5}),
    ((), (2, 3), {}, {2, 3}),
    ((2,), (6,), {}, {2, 3}),
])
def test_from_profile(pre, cyc, finite, infinite):
    a = from_profile(SequenceProfile(pre, cyc))
    assert a.infinite_primes == frozenset(infinite)
    assert dict(a.finite_part) == finite


@given(profiles, st.integers(1, 40))
def test_from_profile_against_partial_products(profile, k):
    # a prime is infinite iff its multiplicity in m_k keeps growing past the preamble
    a = from_profile(profile)
    lead = len(profile.preamble)
    period = len(profile.cycle)
    m1 = factorize(partial_product(profile, lead + k * period))
    m2 = factorize(partial_product(profile, lead + (k + 1) * period))
    for p in set(m1) | set(m2):
        grows = m2.get(p, 0) > m1.get(p, 0)
        assert grows == (p in a.infinite_primes)
        if not grows:
            assert a.multiplicity(p) == m1[p]


def test_partial_product():
    assert partial_product(SequenceProfile((), (2,)), 3) == 8
    assert partial_product(SequenceProfile((4, 3), (5,)), 0) == 1
    assert partial_product(SequenceProfile((4, 3), (5,)), 3) == 60
    with pytest.raises(ValueError):
        partial_product(SequenceProfile(), -1)


@given(profiles, st.integers(0, 20))
def test_partial_product_recursion(profile, k):
    assert partial_product(profile, k + 1) == partial_product(profile, k) * profile.term(k + 1)


def test_divides():
    assert divides(sn(infinite={2}), sn(infinite={2, 3}))
    assert not divides(sn(infinite={2}), sn({2: 5}))
    assert divides(sn({2: 2, 3: 1}), sn({3: 1}, {2}))
    assert divides(sn(), sn())


def test_divides_int():
    a = sn({3: 1}, {2})
    assert divides_int(2**40 * 3, a)
    assert not divides_int(9, a)
    assert divides_int(1, sn())


def test_common_infinite_primes():
    r23, s6 = from_profile(SequenceProfile((), (2, 3))), from_profile(SequenceProfile((), (6,)))
    assert common_infinite_primes(r23, s6) == [2, 3]
    assert common_infinite_primes(sn(infinite={2}), sn(infinite={3})) == []
    assert common_infinite_primes(sn(infinite={2}), sn(infinite={2})) == [2]


def test_finitely_equivalent():
    assert finitely_equivalent(sn({3: 5}, {2}), sn(infinite={2}))
    assert not finitely_equivalent(sn(infinite={2}), sn(infinite={3}))
    assert finitely_equivalent(sn(infinite={2, 3}), sn({5: 2}, {2, 3}))


def test_supernatural_arithmetic_and_str():
    a = sn({3: 2}, {2})
    assert a.multiplicity(2) == math.inf
    assert a.multiplicity(3) == 2 and a.multiplicity(5) == 0
    assert str(a) == "2^∞·3^2"
    assert str(a * 15) == "2^∞·3^3·5"
    assert str(Supernatural.from_int(1)) == "1"
    assert a * sn(infinite={3}) == sn(infinite={2, 3})
    with pytest.raises(ValueError):
        Supernatural(((4, 1),))
    with pytest.raises(ValueError):
        Supernatural(((2, 1),), frozenset({2}))


@given(st.integers(1, 5000), st.integers(1, 5000))
def test_from_int_multiplicative(a, b):
    assert Supernatural.from_int(a) * Supernatural.from_int(b) == Supernatural.from_int(a * b)


@given(profiles, profiles)
def test_finite_equivalence_is_symmetric(a, b):
    x, y = from_profile(a), from_profile(b)
    assert finitely_equivalent(x, y) == finitely_equivalent(y, x)
    assert finitely_equivalent(x, x * 36)
