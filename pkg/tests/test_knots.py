from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_betti import polys
from padic_betti.complexes import complex_knot
from padic_betti.engine import betti_at_level
from padic_betti.groups import tower_cyclic
from padic_betti.knots import (IntPoly, count_roots_at_level, count_roots_mu, cyclic_cover_bj,
                               cyclic_cover_bj_from_complex, cyclic_cover_level_formula,
                               knot_b1, level_bound, level_counts)
from padic_betti.polys import LaurentPoly


def L(text: str) -> LaurentPoly:
    return polys.parse_laurent(text, ["t"])


def test_count_roots_examples():
    for p in (2, 3, 5, 7):
        assert count_roots_mu("t-1", 1, p).count == 1
    assert count_roots_mu("t^2-t+1", 1, 5).count == 0
    assert count_roots_mu("t^2-t+1", 6, 5).count == 2
    assert count_roots_mu("t^4-1", 1, 2).count == 4
    with pytest.raises(ValueError, match="coprime"):
        count_roots_mu("t-1", 6, 3)
    with pytest.raises(ValueError):
        count_roots_mu("0", 1, 3)


def test_count_stabilizes_late():
    # Phi_9 has no roots of order 1 or 3; the count jumps only at 9
    phi9 = polys.cyclotomic(9)
    r = count_roots_mu(phi9, 1, 3)
    assert r.count == 6 and r.stabilized_at == 2 and r.witness_order == 9
    assert [count_roots_at_level(phi9, 3 ** n) for n in range(3)] == [0, 0, 6]


def test_knot_b1_examples():
    tre = "t^2-t+1"
    assert knot_b1([tre], 1, 7) == 1
    assert knot_b1([tre], 6, 5) == 3
    assert knot_b1([tre], 3, 2) == 3
    assert knot_b1([tre], 2, 5) == 1
    with pytest.raises(ValueError, match="not 1"):
        knot_b1(["t^2-1"], 1, 3, require_unit_at_one=True)


def test_cyclic_cover_examples():
    r = cyclic_cover_bj([[L("t-1")]], [], 1, 3)
    assert r.value == 1 and r.u == 1 and r.v == 0
    r = cyclic_cover_bj([[L("t^2-1")]], [], 1, 2)
    assert r.value == 2
    r = cyclic_cover_bj([], [[L("t^2-t+1")]], 6, 5)
    for n in (1, 2, 3):
        assert cyclic_cover_level_formula(1, 0, 1, level_counts(r, 6, 5, n), 6, 5, n) == 2
    with pytest.raises(ValueError, match="not zero"):
        cyclic_cover_bj([[L("t-1")]], [[L("1")]], 1, 3)


def test_trefoil_complex_reproduces_knot_b1():
    c = complex_knot("trefoil")
    for m, p in ((1, 5), (6, 5), (3, 2), (2, 3), (1, 2)):
        r = cyclic_cover_bj_from_complex(c, 1, m, p)
        assert [list(map(int, g)) for g in r.g_factors] == [[-1, 1]]
        assert r.value == knot_b1(["t^2-t+1"], m, p)


@pytest.mark.parametrize("m,p", [(1, 2), (2, 3), (3, 2), (1, 5), (6, 5)])
def test_level_formula_matches_engine(m, p):
    c = complex_knot("trefoil")
    r = cyclic_cover_bj_from_complex(c, 1, m, p)
    tower = tower_cyclic(m, p, 2, c.ngens)
    for n, Q in enumerate(tower.levels, start=1):
        want = betti_at_level(c, Q, "Q", 1)
        got = cyclic_cover_level_formula(c.rank(1), r.u, r.v, level_counts(r, m, p, n), m, p, n)
        assert got == want


def test_figure_eight():
    c = complex_knot("figure-eight")
    assert cyclic_cover_bj_from_complex(c, 1, 1, 3).value == 1
    assert knot_b1(["t^2-3t+1"], 2, 3) == 1


def test_intpoly():
    f = IntPoly.parse("3t^2 - 1")
    assert f.coeffs == (-1, 0, 3) and f.degree == 2 and f(1) == 2
    assert IntPoly((1, 2, 0, 0)).coeffs == (1, 2)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=1, max_size=3), st.sampled_from([2, 3, 5]),
       st.sampled_from([1, 2, 7]))
def test_count_of_cyclotomic_products(orders, p, m):
    """Product of distinct Phi_d: the count is sum phi(d) over d dividing some m p^n."""
    from math import gcd
    if gcd(m, p) != 1:
        m = 1
    orders = sorted(set(orders))
    f = [1]
    for d in orders:
        f = polys.mul(f, polys.cyclotomic(d))
    want = 0
    for d in orders:
        core = d
        while core % p == 0:
            core //= p
        if m % core == 0:
            want += polys.degree(polys.cyclotomic(d))
    assert count_roots_mu(polys.to_int_poly(f), m, p).count == want


@settings(max_examples=30)
@given(st.integers(1, 40), st.sampled_from([2, 3, 5, 7]))
def test_level_bound_is_sound(deg, p):
    k = level_bound(deg, p)
    assert p ** (k - 1) * (p - 1) <= deg if k else True
    assert p ** k * (p - 1) > deg
