from __future__ import annotations

from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_betti import polys
from padic_betti.arith import euler_phi, factorize, is_prime, multiplicative_order, root_of_unity_mod
from padic_betti.characters import galois_orbits
from padic_betti.fields import CyclotomicField, PrimeField, irreducible_poly, splitting_field


def test_arith():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert factorize(360) == ((2, 3), (3, 2), (5, 1))
    assert euler_phi(36) == 12
    assert multiplicative_order(2, 7) == 3
    w = root_of_unity_mod(8, 17)
    assert pow(w, 8, 17) == 1 and pow(w, 4, 17) != 1


def test_cyclotomic_polys():
    assert polys.cyclotomic(1) == [-1, 1]
    assert polys.cyclotomic(6) == [1, -1, 1]
    assert polys.cyclotomic(9) == [1, 0, 0, 1, 0, 0, 1]
    for n in range(1, 30):
        assert polys.degree(polys.cyclotomic(n)) == euler_phi(n)


def test_laurent_parse_format():
    f = polys.parse_laurent("3t^2 - t^-1 + 2", ["t"])
    assert polys.parse_laurent(polys.format_laurent(f, ["t"]), ["t"]) == f
    assert polys.parse_int_poly("3t^2-1") == [-1, 0, 3]
    with pytest.raises(ValueError):
        polys.parse_laurent("t^", ["t"])


def test_fields():
    F = PrimeField(7)
    assert F.mul(F.inv(3), 3) == 1
    assert len(irreducible_poly(3, 2)) == 3
    E = splitting_field(3, 8)
    z = E.root_of_unity(8)
    assert E.pow(z, 8) == E.one and E.pow(z, 4) != E.one
    C = CyclotomicField(9)
    w = C.root_of_unity(9)
    assert C.pow(w, 9) == C.one and not C.is_zero(C.sub(C.pow(w, 3), C.one))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 12), min_size=1, max_size=3))
def test_galois_orbits_partition_characters(moduli):
    M, orbits = galois_orbits(moduli)
    order = 1
    for n in moduli:
        order *= n
    # every orbit of characters of order N has phi(N) members
    assert sum(euler_phi(o.order) for o in orbits) == order
    assert all(M % o.order == 0 for o in orbits)


@settings(max_examples=60)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5), st.lists(st.integers(-5, 5), min_size=1, max_size=5))
def test_poly_division(f, g):
    g = polys.trim(g)
    if not g:
        return
    q, r = polys.divmod_poly(f, g)
    assert polys.add(polys.mul(q, g), r) == polys.trim(f)
    assert polys.degree(r) < polys.degree(g) or not polys.trim(r)


@settings(max_examples=40)
@given(st.integers(1, 40), st.integers(1, 40))
def test_gcd_of_cyclotomic_binomials(a, b):
    # gcd(t^a - 1, t^b - 1) = t^gcd(a,b) - 1
    fa = [-1] + [0] * (a - 1) + [1]
    fb = [-1] + [0] * (b - 1) + [1]
    assert polys.degree(polys.gcd(fa, fb)) == gcd(a, b)
