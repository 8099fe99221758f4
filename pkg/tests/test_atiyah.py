from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_betti import polys
from padic_betti.atiyah import (FAST_GROWTH, INCONCLUSIVE, STABILIZED, AtiyahInstance, atiyah_kernel_dim,
                                c_constant, dichotomy_check, direct_nullity, generic_rank,
                                minors_formula_check, random_instance, verify_frattini_lemma)
from padic_betti.groups import (abelian_p_group, cyclic_group, dihedral_group, heisenberg_group,
                                quaternion_group)
from padic_betti.oracles import oracle_character_kernel


def inst(rows, d=1, Lam=(), p=2, field="F3", names=None, lp=None):
    nv = d + len(Lam)
    names = names or [f"t{i + 1}" for i in range(nv)]
    A = [[polys.parse_laurent(x, names) for x in row] for row in rows]
    return AtiyahInstance(A, d, [list(r) for r in Lam], p, field, lp)


def test_augmentation_kernel():
    res = atiyah_kernel_dim(inst([["t1 - 1"]]), 3)
    assert res.dims == [1, 1, 1]
    assert res.limit.agrees_with(1) and res.checks["integral"]


def test_diagonal_instance():
    I = inst([["t1 - 1", "0"], ["0", "t1 + 1"]])
    res = atiyah_kernel_dim(I, 3)
    assert res.dims == [2, 2, 2] and res.limit.agrees_with(2)
    assert minors_formula_check(I, 3).ok
    for N in (1, 2):
        assert oracle_character_kernel(I, N) == direct_nullity(I, N)


def test_irrational_direction():
    # t2 -> omega t1 with omega = 4 known mod 2^5: kernel of t2 - 1 has 2^min(N, 2) elements
    I = inst([["t2 - 1"]], Lam=[[4]], lp=5)
    assert atiyah_kernel_dim(I, 4).dims == [2, 4, 4, 4]
    with pytest.raises(ValueError, match="refused"):
        direct_nullity(I, 6)


def test_rational_field_and_constant_matrix():
    assert atiyah_kernel_dim(inst([["t1 - 1"]], field="Q"), 3).dims == [1, 1, 1]
    assert direct_nullity(inst([["2"]]), 1) == 0


def test_generic_rank():
    assert generic_rank(inst([["t1 - 1", "t1 - 1"], ["1", "1"]])) == 1
    assert generic_rank(inst([["t1", "0"], ["0", "1"]])) == 2


def test_instance_validation():
    with pytest.raises(ValueError):
        inst([["t1 - 1"]], p=3, field="F3")
    with pytest.raises(ValueError):
        AtiyahInstance([], 1, [], 2, "F3")
    with pytest.raises(ValueError):
        inst([["t1 - 1"]], Lam=[[1, 2]])
    assert inst([["t1"]]).to_json()["field"] == "F3"


def test_c_constant_examples():
    c = c_constant("Q", 7)
    assert c.exact == 1 and c.p_to_c == 7
    c = c_constant("F2", 3)
    assert c.exact is None and str(c) == "3*log_3(2)" and c.p_to_c == 8
    c = c_constant("F9", 3)
    assert c.exact == Fraction(6) and str(c) == "6"
    with pytest.raises(ValueError):
        c_constant("F3", 3)
    with pytest.raises(ValueError):
        c_constant("F6", 3)


def test_dichotomy_examples():
    assert dichotomy_check([2, 2, 2, 2], 2, "Q", 3).mode == STABILIZED
    free = [1 + 3 ** n for n in range(1, 5)]
    v = dichotomy_check(free, 1, "Q", 3)
    assert v.mode == FAST_GROWTH and all(h for _, _, h in v.bound_checked)
    assert dichotomy_check([5], 1, "Q", 3).mode == INCONCLUSIVE
    assert dichotomy_check([2, 3, 2, 3], 2, "Q", 3).mode == INCONCLUSIVE
    assert v.to_json()["mode"] == FAST_GROWTH


@pytest.mark.parametrize("G,p", [(cyclic_group(8), 2), (dihedral_group(4), 2), (quaternion_group(), 2),
                                 (heisenberg_group(3), 3), (abelian_p_group(3, (2, 1)), 3)])
def test_frattini_lemma(G, p):
    rep = verify_frattini_lemma(G, p, [cyclic_group(p)])
    assert rep.ok, rep.checks


def test_frattini_lemma_needs_p_group():
    with pytest.raises(ValueError):
        verify_frattini_lemma(cyclic_group(6), 2)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10**6))
def test_direct_matches_character_oracle(seed):
    I = random_instance(random.Random(seed), lambda_precision=2)
    for N in (1, 2):
        assert direct_nullity(I, N) == oracle_character_kernel(I, N)


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6))
def test_monotone_and_minors(seed):
    I = random_instance(random.Random(seed), lambda_precision=3)
    res = atiyah_kernel_dim(I, 3)
    assert res.checks["monotone"]
    assert all(x >= 0 for x in res.checks["excess"])
    assert minors_formula_check(I, 2).ok
