from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_betti.padic import (CONVERGED, GROWTH, INSUFFICIENT, PAdicApprox, padic_index_from_tower,
                               padic_limit, p_prime_part, vp)

primes = st.sampled_from([2, 3, 5, 7, 11])
nonzero = st.integers(-10**12, 10**12).filter(bool)


def test_vp_examples():
    assert vp(12, 2) == 2
    assert vp(-54, 3) == 3
    assert vp(7, 5) == 0
    with pytest.raises(ValueError):
        vp(0, 3)


def test_p_prime_part_examples():
    assert p_prime_part(6, 2) == 3
    assert p_prime_part(48, 2) == 3
    assert p_prime_part(1, 7) == 1


def test_padic_limit_examples():
    r = padic_limit([2, 2, 2, 2], 3, 3, 3)
    assert r.converged and r.residue == 2 and r.precision == 3
    r = padic_limit([1, 1 + 5, 1 + 25, 1 + 125], 5, 2, 2)
    assert r.converged and r.residue == 1 and r.precision == 2
    r = padic_limit([1, 2, 4, 8, 16], 3, 2, 3)
    assert r.status == INSUFFICIENT
    with pytest.raises(ValueError):
        padic_limit([], 3, 2)


def test_padic_limit_growth_and_short():
    assert padic_limit([2, 7, 50, 300], 3, 2, 3).status == GROWTH
    assert padic_limit([5], 3, 2, 3).status == INSUFFICIENT


def test_padic_index_examples():
    ix = padic_index_from_tower([6, 6, 6, 6], 3, 3)
    assert ix.is_open and ix.exact_value == 6
    ix = padic_index_from_tower([3, 9, 27, 81], 3, 3, 2)
    assert not ix.is_open and ix.value.converged and ix.value.residue == 0 and ix.value.precision == 3
    ix = padic_index_from_tower([6, 18, 54], 3, 3, 2)
    assert ix.value.converged and ix.value.residue % 3 == 0
    with pytest.raises(ValueError):
        padic_index_from_tower([], 3, 3)
    with pytest.raises(ValueError):
        padic_index_from_tower([0, 1], 3, 3)


def test_approx_validation_and_json():
    with pytest.raises(ValueError):
        PAdicApprox(3, 2, 9)
    with pytest.raises(ValueError):
        PAdicApprox(3, 2, 1, GROWTH)
    a = PAdicApprox(5, 3, 124)
    assert a.signed_residue() == -1
    assert a.truncate(1).residue == 4
    assert PAdicApprox.from_json(a.to_json()) == a
    assert a.to_json() == {"p": 5, "precision": 3, "residue": 124, "status": CONVERGED}


@given(nonzero, primes)
def test_factorization_identity(x, p):
    assert x == p ** vp(x, p) * p_prime_part(x, p)
    assert p_prime_part(x, p) % p


@given(nonzero, nonzero, primes)
def test_multiplicativity(x, y, p):
    assert vp(x * y, p) == vp(x, p) + vp(y, p)
    assert p_prime_part(x * y, p) == p_prime_part(x, p) * p_prime_part(y, p)


@given(st.integers(-1000, 1000), primes, st.integers(1, 6), st.integers(2, 5))
def test_constant_sequence_full_precision(c, p, N, W):
    r = padic_limit([c] * W, p, N, W)
    assert r.converged and r.precision == N and r.residue == c % p ** N


@settings(max_examples=50)
@given(st.lists(st.integers(-500, 500), min_size=3, max_size=6), st.lists(st.integers(-500, 500), max_size=4),
       primes, st.integers(1, 4))
def test_prepending_does_not_matter(seq, prefix, p, N):
    assert padic_limit(prefix + seq, p, N, 3) == padic_limit(seq, p, N, 3)
