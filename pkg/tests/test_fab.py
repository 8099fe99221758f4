from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_betti.fab import (FabGroupSpec, check_A1, cyclotomic_bound, demo_log_identity, demo_matrix,
                             dual_route, epsilon_sign, h1_torsion_route, lambda_plus, level_determinant,
                             log_limit_check, torsion_approx, torsion_closed_form)
from padic_betti.linalg import identity, mat_pow
from padic_betti.padic import p_prime_part, vp

FIB = [[2, 1], [1, 1]]


def test_A1_examples():
    assert not check_A1(identity(2))
    assert check_A1(FIB)
    cert = check_A1([[0, -1], [1, 0]])
    assert not cert and 4 in cert.dividing
    assert cyclotomic_bound(2) == [1, 2, 3, 4, 6]


def test_epsilon_examples():
    assert epsilon_sign(FIB, 3) == -1
    assert epsilon_sign([[3, 1], [1, 2]], 3) == 1
    assert epsilon_sign(demo_matrix(5), 5) == -1
    with pytest.raises(ValueError):
        epsilon_sign(identity(2), 3)


def test_spec_guards():
    with pytest.raises(ValueError, match="A1"):
        FabGroupSpec(((1, 0), (0, 1)), 3)
    with pytest.raises(ValueError, match="congruent"):
        FabGroupSpec(tuple(map(tuple, FIB)), 3)
    s = FabGroupSpec.power_of(FIB, 3)
    assert s.matrix == mat_pow(FIB, 4)


def _log_series_mod(x: int, p: int, N: int) -> int:
    total, u = Fraction(0), Fraction(x - 1)
    for j in range(1, 80):
        total += (-1) ** (j - 1) * u ** j / j
    return total.numerator * pow(total.denominator, -1, p ** N) % p ** N


def test_one_by_one_helpers():
    # 1 + p is not unimodular, so only the level helpers apply
    p = 5
    seq = [p_prime_part(abs(level_determinant([[1 + p]], p, n)), p) for n in range(3)]
    assert seq == [p_prime_part((1 + p) ** (p ** n) - 1, p) for n in range(3)]
    # p^-n ((1+p)^(p^n) - 1) -> log(1+p)
    for n in range(1, 4):
        assert log_limit_check([[1 + p]], p, n, n + 2) >= n
    target = _log_series_mod(1 + p, p, 4)
    assert (((1 + p) ** (p ** 3) - 1) // p ** 3 - target) % p ** 3 == 0


def test_identity_log_limit_is_exact():
    assert log_limit_check(identity(2), 3, 2, 5) == 5


@pytest.mark.parametrize("A,p", [(demo_matrix(3), 3), (demo_matrix(5), 5)])
def test_dual_route_on_demo_matrices(A, p):
    spec = FabGroupSpec(tuple(map(tuple, A)), p)
    rep = dual_route(spec, 4, 3)
    assert rep.agrees and rep.agree_precision == 4
    assert rep.approx.checks["sign_stable"]
    assert rep.closed_form.epsilon == -1


def test_dual_route_power_of_fibonacci():
    spec = FabGroupSpec.power_of(FIB, 3)
    rep = dual_route(spec, 4, 3)
    assert rep.agrees
    data = rep.to_json()
    assert data["agrees"] and data["epsilon"] == rep.closed_form.epsilon


def test_level_agreement_grows():
    spec = FabGroupSpec(tuple(map(tuple, demo_matrix(3))), 3)
    cf = torsion_closed_form(spec, 8).value.residue
    seq = torsion_approx(spec, 3, precision=8)
    for lv in seq.levels[1:]:
        diff = lv.value - cf
        assert diff % 3 ** 8 == 0 or vp(diff, 3) >= 2 * lv.n + 1


def test_h1_route_matches_determinant():
    spec = FabGroupSpec.power_of(FIB, 3)
    for n in range(3):
        assert p_prime_part(h1_torsion_route(spec, n), 3) == p_prime_part(abs(level_determinant(spec.A, 3, n)), 3)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_demo_log_identity(p):
    lam = lambda_plus(p, 6)
    assert (lam * lam - (2 + p * p) * lam + 1) % p ** 6 == 0
    assert demo_log_identity(p, 6)


def test_errors():
    spec = FabGroupSpec(tuple(map(tuple, demo_matrix(3))), 3)
    with pytest.raises(ValueError):
        torsion_closed_form(spec, 0)
    with pytest.raises(ValueError):
        torsion_approx(spec, -1)
    with pytest.raises(ValueError, match="domain"):
        log_limit_check(FIB, 3, 1, 3)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), st.sampled_from([3, 5]))
def test_approx_levels_are_units(a, p):
    A = [[1 + p * p * a, p * a], [p, 1]]
    if check_A1(A):
        spec = FabGroupSpec(tuple(map(tuple, A)), p)
        seq = torsion_approx(spec, 2)
        assert all(lv.value % p for lv in seq.levels)
