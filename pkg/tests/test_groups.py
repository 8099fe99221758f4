from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_betti.groups import (AbelianGroup, SemidirectGroup, TableGroup, abelian_p_group, all_subgroups,
                                check_semidirect_matrix, cyclic_group, dihedral_group, direct_product,
                                frattini_length, frattini_subgroup, heisenberg_group, is_normal,
                                matrix_order_mod, named_group, p_group_corpus, partitions,
                                quaternion_group, tower_abelian, tower_constant, tower_cyclic,
                                tower_frattini, tower_from_spec, tower_irrational_line, tower_product,
                                tower_semidirect, trivial_group)
from padic_betti.linalg import mat_pow


def test_abelian_tower_examples():
    t = tower_abelian(1, 1, 5, 3, [[1]])
    assert [list(Q.moduli) for Q in t.levels] == [[5], [25], [125]]
    t.check()
    t = tower_abelian(6, 1, 5, 2, [[1, 1]])
    assert [Q.order for Q in t.levels] == [30, 150]
    t.check()
    t = tower_abelian(1, 2, 2, 3, [[1, 0], [0, 1]])
    assert [Q.order for Q in t.levels] == [4, 16, 64]
    t.check()
    with pytest.raises(ValueError):
        tower_abelian(10, 1, 5, 2, [[1, 1]])


def test_irrational_line():
    t = tower_irrational_line(3, 4, 3 + 27)
    # 3 + 27 reduced mod 3^n for n = 1..4
    assert [Q.vector(Q.generator_images[0])[0] for Q in t.levels] == [0, 3, 3, 30]
    t.check()
    t = tower_irrational_line(3, 3, 0)
    assert all(Q.generator_images[0] == Q.identity for Q in t.levels)
    t = tower_irrational_line(3, 4, [3, 3, 30, 30])
    assert [Q.vector(Q.generator_images[0])[0] for Q in t.levels] == [0, 3, 3, 30]
    with pytest.raises(ValueError):
        tower_irrational_line(3, 3, [1, 2, 3])


def test_semidirect_checks():
    tower_semidirect([[1, 0], [0, 1]], 3, 2).check()
    tower_semidirect([[26, 5], [5, 1]], 5, 2).check()
    A = [[2, 1], [1, 1]]
    e = matrix_order_mod(A, 3)
    assert e == 4
    tower_semidirect(mat_pow(A, e), 3, 2).check()
    with pytest.raises(ValueError, match="e = 4"):
        check_semidirect_matrix(A, 3)
    with pytest.raises(ValueError, match="unimodular"):
        check_semidirect_matrix([[2, 0], [0, 1]], 3)


def test_semidirect_group_axioms():
    G = SemidirectGroup([[1, 3], [0, 1]], 3, 1)
    assert G.order == 27 and G.is_abelian()
    G.check_axioms()


def test_frattini_subgroup_examples():
    H, quo = frattini_subgroup(cyclic_group(8), 2)
    assert len(H) == 4 and quo.order == 2
    H, _ = frattini_subgroup(abelian_p_group(2, (1, 1, 1)), 2)
    assert len(H) == 1
    G = AbelianGroup([2, 4], [[1, 0], [0, 1]])
    H, _ = frattini_subgroup(G, 2)
    assert H == frozenset(G.power(x, 2) for x in range(G.order))
    assert len(H) == 2


def test_frattini_length_examples():
    for p in (2, 3):
        for r in range(1, 4):
            assert frattini_length(cyclic_group(p ** r), p) == r
    assert frattini_length(AbelianGroup([2, 4], [[1, 0], [0, 1]]), 2) == 2
    assert frattini_length(trivial_group(0), 2) == 0


def test_frattini_tower_examples():
    t = tower_frattini(cyclic_group(8), 2)
    assert [Q.order for Q in t.levels] == [2, 4, 8]
    t = tower_frattini(AbelianGroup([4, 4], [[1, 0], [0, 1]]), 2)
    assert [Q.order for Q in t.levels] == [4, 16]
    t = tower_frattini(heisenberg_group(3), 3)
    assert [Q.order for Q in t.levels] == [9, 27]
    assert t.levels[0].is_abelian()
    t.check()


def test_named_and_tables():
    assert named_group("C8").order == 8
    assert named_group("C2xC4").order == 8
    assert named_group("Q8").order == 8 and not named_group("Q8").is_abelian()
    assert dihedral_group(4).order == 8
    assert heisenberg_group(3).order == 27
    quaternion_group().check_axioms()
    with pytest.raises(ValueError):
        named_group("S5")
    with pytest.raises(ValueError):
        TableGroup([[0, 1], [0, 1]], [0])


def test_subgroups_and_normality():
    D = dihedral_group(4)
    subs = all_subgroups(D)
    assert len(subs) == 10
    assert sum(is_normal(D, H) for H in subs) == 6


def test_corpus_and_partitions():
    assert len(partitions(4)) == 5
    assert len(p_group_corpus(2, 4)) == 1 + 1 + 2 + 3 + 5 + 2
    assert len(p_group_corpus(3, 4)) == 12 + 1


def test_tower_product_and_constant():
    a = tower_abelian(1, 1, 3, 2, [[1]])
    b = tower_abelian(1, 1, 3, 2, [[1]])
    t = tower_product(a, b)
    assert t.ngens == 2 and [Q.order for Q in t.levels] == [9, 81]
    t.check()
    c = tower_constant(dihedral_group(3), 3, 3)
    assert [Q.order for Q in c.levels] == [6, 6, 6]


def test_tower_from_spec():
    t = tower_from_spec({"kind": "abelian", "p": 3, "d": 2, "depth": 2}, ngens=2)
    assert [Q.order for Q in t.levels] == [9, 81]
    t = tower_from_spec({"kind": "cyclic", "m": 2, "p": 3, "depth": 2}, ngens=2)
    assert [Q.order for Q in t.levels] == [6, 18]
    t = tower_from_spec({"kind": "frattini", "p": 2, "group": "C8"}, ngens=1)
    assert t.depth == 3
    assert tower_cyclic(1, 5, 2, 3).ngens == 3


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3]), st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_abelian_frattini_length_is_max_exponent(p, part):
    if p ** sum(part) > 300:
        part = part[:1]
    G = abelian_p_group(p, sorted(part, reverse=True))
    assert frattini_length(G, p) == max(part)
    assert frattini_length(TableGroup.from_group(G), p) == max(part)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(2, 6), min_size=1, max_size=2), st.data())
def test_abelian_group_axioms(moduli, data):
    ngens = data.draw(st.integers(1, 3))
    vecs = [[data.draw(st.integers(0, m - 1)) for m in moduli] for _ in range(ngens)]
    try:
        G = AbelianGroup(moduli, vecs)
    except ValueError:
        return
    G.check_axioms()
    H = direct_product(G, cyclic_group(2))
    assert H.order == 2 * G.order
