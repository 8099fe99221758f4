from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_betti.linalg import (FpMatrix, PAdicMatrix, charpoly, det_int, det_mod, identity, mat_mul,
                                mat_pow, padic_exp, padic_log, rank_fp, rank_q, smith_normal_form,
                                sparse_rank, dense_to_sparse, torsion_card_pprime)
from padic_betti.oracles import oracle_snf_minor_gcd

small = st.integers(-9, 9)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rank_q_examples():
    assert rank_q([[1, 0], [0, 1]]) == 2
    assert rank_q([[1, 2], [2, 4]]) == 1
    assert rank_q([[2, 0, 1], [0, 3, 1], [2, 3, 2]]) == 2


def test_rank_fp_examples():
    assert rank_fp(FpMatrix(2, ((1, 1), (1, 1)))) == 1
    assert rank_fp(FpMatrix(3, ((3, 0), (0, 3)))) == 0
    assert rank_fp([[1, 2], [3, 4]], 5) == 2
    with pytest.raises(ValueError):
        rank_fp([[1]], 4)
    with pytest.raises(ValueError):
        rank_fp([[1]])


def test_snf_examples():
    assert list(smith_normal_form([[2, 0], [0, 3]]).divisors) == [1, 6]
    assert list(smith_normal_form(identity(4)).divisors) == [1, 1, 1, 1]
    assert list(smith_normal_form([[2, 4], [6, 8]]).divisors) == [2, 4]
    assert smith_normal_form([[0, 0], [0, 0]]).rank == 0


def test_torsion_card_examples():
    assert torsion_card_pprime([1, 6], 2) == 3
    for p in (2, 3, 5):
        assert torsion_card_pprime([1, 1, 1], p) == 1
    assert torsion_card_pprime([4, 12], 3) == 16


def _log_1x1_oracle(x: int, p: int, N: int) -> int:
    # truncated series with exact rationals, then reduce
    total = Fraction(0)
    u = Fraction(x - 1)
    for j in range(1, 60):
        total += (-1) ** (j - 1) * u ** j / j
    return total.numerator * pow(total.denominator, -1, p ** N) % p ** N


def _exp_1x1_oracle(x: int, p: int, N: int) -> int:
    total, term = Fraction(1), Fraction(1)
    for j in range(1, 60):
        term = term * x / j
        total += term
    return total.numerator * pow(total.denominator, -1, p ** N) % p ** N


def test_log_examples():
    assert padic_log(PAdicMatrix.from_int(identity(3), 5, 4)).is_zero()
    got = padic_log(PAdicMatrix(5, 3, ((6,),))).entries[0][0]
    assert got == _log_1x1_oracle(6, 5, 3)
    with pytest.raises(ValueError):
        padic_log(PAdicMatrix(5, 3, ((2,),)))
    with pytest.raises(ValueError):
        padic_log(PAdicMatrix(2, 3, ((3,),)))


def test_exp_examples():
    assert padic_exp(PAdicMatrix(3, 4, ((0, 0), (0, 0)))).rows() == identity(2)
    assert padic_exp(PAdicMatrix(3, 2, ((3,),))).entries[0][0] == _exp_1x1_oracle(3, 3, 2)
    with pytest.raises(ValueError):
        padic_exp(PAdicMatrix(3, 2, ((1,),)))


def test_det_mod_examples():
    assert det_mod(PAdicMatrix.from_int(identity(3), 7, 2)) == 1
    assert det_mod(PAdicMatrix(5, 2, ((3, 0), (0, 11)))) == 33 % 25
    assert det_mod(PAdicMatrix(5, 2, ((0, 1), (1, 0)))) == 24


def test_charpoly():
    assert charpoly([[2, 1], [1, 1]]) == [1, -3, 1]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_snf_matches_minor_oracle(M):
    assert list(smith_normal_form(M).divisors) == oracle_snf_minor_gcd(M)


@settings(max_examples=60, deadline=None)
@given(matrices(5, 5), st.sampled_from([2, 3, 5, 7]))
def test_rank_bounds_and_reduction(M, ell):
    r = rank_q(M)
    assert rank_fp(M, ell) <= r <= min(len(M), len(M[0]))
    assert smith_normal_form(M).rank == r
    assert sparse_rank(dense_to_sparse(M), 0) == r


@settings(max_examples=40, deadline=None)
@given(matrices(3, 3).filter(lambda M: len(M) == len(M[0])))
def test_det_is_product_of_divisors(M):
    d = det_int(M)
    snf = smith_normal_form(M)
    prod = 1
    for x in snf.divisors:
        prod *= x
    assert abs(d) == (prod if snf.rank == len(M) else 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([3, 5, 7]), st.integers(2, 3))
def test_exp_log_round_trip(seed, p, n):
    rng = random.Random(seed)
    N = 5
    A = [[int(i == j) + p * p * rng.randrange(p ** N) for j in range(n)] for i in range(n)]
    PA = PAdicMatrix.from_int(A, p, N)
    assert padic_exp(padic_log(PA)) == PA


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([3, 5]), st.integers(1, 4))
def test_log_of_power(seed, p, m):
    rng = random.Random(seed)
    N = 4
    A = [[int(i == j) + p * rng.randrange(p ** N) for j in range(2)] for i in range(2)]
    L = padic_log(PAdicMatrix.from_int(A, p, N)).rows()
    Lm = padic_log(PAdicMatrix.from_int(mat_pow(A, m), p, N)).rows()
    assert all((x - m * y) % p ** N == 0 for r1, r2 in zip(Lm, L) for x, y in zip(r1, r2))


def test_mat_helpers():
    A = [[1, 1], [0, 1]]
    assert mat_pow(A, 5) == [[1, 5], [0, 1]]
    assert mat_mul(A, A, 3) == [[1, 2], [0, 1]]
