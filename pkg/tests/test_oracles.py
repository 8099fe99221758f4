from __future__ import annotations

import random

import pytest

from padic_betti.complexes import complex_circle, complex_klein_bottle, complex_surface, complex_torus
from padic_betti.engine import betti_at_level
from padic_betti.groups import AbelianGroup, dihedral_group
from padic_betti.linalg import smith_normal_form
from padic_betti.oracles import (OracleReport, _is_homomorphism, cover_boundary, oracle_cover_cohomology,
                                 oracle_snf_minor_gcd, run_self_check, tiny_cover_instances)


def test_snf_oracle_examples():
    assert oracle_snf_minor_gcd([[2, 0], [0, 3]]) == [1, 6]
    assert oracle_snf_minor_gcd([[0, 0], [0, 0]]) == []
    assert oracle_snf_minor_gcd([[2, 4], [6, 8]]) == [2, 4]
    with pytest.raises(ValueError):
        oracle_snf_minor_gcd([[1] * 7])


def test_cover_oracle_examples():
    C = complex_circle()
    Q = AbelianGroup([4], [[1]])
    assert [oracle_cover_cohomology(C, Q, "Q", j) for j in (0, 1)] == [1, 1]
    T = complex_torus(2)
    assert oracle_cover_cohomology(T, AbelianGroup([2, 2], [[1, 0], [0, 1]]), "Q", 1) == 2
    S = complex_surface(2)
    assert oracle_cover_cohomology(S, AbelianGroup([2], [[1], [0], [0], [0]]), "Q", 1) == 6
    with pytest.raises(ValueError):
        oracle_cover_cohomology(C, AbelianGroup([25], [[1]]), "Q", 0)


def test_cover_boundary_shape():
    M = cover_boundary(complex_torus(2), AbelianGroup([3, 3], [[1, 0], [0, 1]]), 2)
    assert len(M) == 9 and len(M[0]) == 18


def test_nonabelian_cover_matches_engine():
    S = complex_klein_bottle()
    D = dihedral_group(3)
    # abab^-1 = 1 holds for a a rotation and b a reflection
    Q = next(Q for Q in (D.with_images([x, y]) for x in range(6) for y in range(6)
                         if x != y and D.closure([x, y]) == frozenset(range(6)))
             if _is_homomorphism(S, Q) and not Q.is_abelian())
    for k in ("Q", "F5"):
        for j in range(3):
            assert oracle_cover_cohomology(S, Q, k, j) == betti_at_level(S, Q, k, j)


def test_instances_are_seeded():
    a = tiny_cover_instances(3, 10)
    b = tiny_cover_instances(3, 10)
    assert [(c.name, Q.name, k, j) for c, Q, k, j in a] == [(c.name, Q.name, k, j) for c, Q, k, j in b]
    assert all(Q.order <= 24 for _, Q, _, _ in a)


def test_self_check_all_agree():
    reports = run_self_check(seed=1, count=20)
    assert len(reports) >= 40
    bad = [r.to_json() for r in reports if not r.agree]
    assert not bad


def test_report_json():
    r = OracleReport("x", 1, 1)
    assert r.agree and r.to_json()["agree"]
    assert not OracleReport("x", [1], (1,)).agree


def test_snf_oracle_against_main_route():
    rng = random.Random(5)
    for _ in range(50):
        M = [[rng.randint(-5, 5) for _ in range(rng.randint(1, 4))]]
        M += [[rng.randint(-5, 5) for _ in range(len(M[0]))] for _ in range(rng.randint(0, 3))]
        assert list(smith_normal_form(M).divisors) == oracle_snf_minor_gcd(M)
