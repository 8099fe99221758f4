"""p-adic torsion of Z^N x|_A Z.

Two independent routes to t_2:

* closed form: eps * det(log A)_(p'), with log the p-adic matrix logarithm;
* approximation: the p'-parts of |det(A^(p^n) - 1)|, which are the torsion
  orders of H_1 of the covers with fundamental group Z^N x| p^n Z.

The demo matrix A_p = [[1 + p^2, p], [p, 1]] has eigenvalues lambda_+- in Z_p
and det(log A_p) = -log(lambda_+)^2, which is checked modulo p^N via a
Hensel-lifted lambda_+.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import polys
from .arith import euler_phi, require_prime
from .engine import InvariantSequence, LevelValue, Request
from .groups import check_semidirect_matrix, matrix_order_mod
from .linalg import (PAdicMatrix, charpoly, det_int, identity, mat_pow, mat_sub, padic_log,
                     smith_normal_form)
from .padic import PAdicApprox, padic_limit, p_prime_part, vp

# fab sequences gain at least one digit per level, so two levels suffice
FAB_WINDOW = 2
PRECISION_CAP = 400


def _square(A) -> list[list[int]]:
    A = [[int(x) for x in r] for r in A]
    if not A or any(len(r) != len(A) for r in A):
        raise ValueError("A must be a nonempty square integer matrix")
    return A


def cyclotomic_bound(N: int) -> list[int]:
    """All d with phi(d) <= N (phi(d) >= sqrt(d/2) keeps the search finite)."""
    return [d for d in range(1, 2 * N * N + 7) if euler_phi(d) <= N]


@dataclass
class A1Certificate:
    holds: bool
    checked: list
    dividing: list

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {"holds": self.holds, "checked": self.checked, "dividing": self.dividing}


def check_A1(A) -> A1Certificate:
    """No eigenvalue of A is a root of unity, certified by cyclotomic gcds."""
    A = _square(A)
    chi = charpoly(A)
    checked = cyclotomic_bound(len(A))
    bad = [d for d in checked if polys.degree(polys.gcd(chi, polys.cyclotomic(d))) > 0]
    return A1Certificate(not bad, checked, bad)


@dataclass(frozen=True)
class FabGroupSpec:
    A: tuple
    p: int

    def __post_init__(self):
        A = _square(self.A)
        require_prime(self.p)
        check_semidirect_matrix(A, self.p)
        object.__setattr__(self, "A", tuple(tuple(r) for r in A))
        cert = check_A1(A)
        if not cert:
            raise ValueError(f"(A1) violated: charpoly shares a factor with Phi_d for d in {cert.dividing}")

    @classmethod
    def power_of(cls, A, p: int) -> "FabGroupSpec":
        """Spec for A^e with e the order of A modulo p (mod 4 if p = 2)."""
        A = _square(A)
        e = matrix_order_mod(A, 4 if p == 2 else p)
        return cls(tuple(tuple(r) for r in mat_pow(A, e)), p)

    @property
    def matrix(self) -> list[list[int]]:
        return [list(r) for r in self.A]

    @property
    def size(self) -> int:
        return len(self.A)


def epsilon_sign(A, p: int) -> int:
    A = _square(A)
    require_prime(p)
    B = mat_pow(A, 2) if p == 2 else A
    d = det_int(mat_sub(B, identity(len(A))))
    if d == 0:
        raise ValueError("(A1) violated: det(A - 1) = 0")
    return 1 if d > 0 else -1


@dataclass
class ClosedForm:
    value: PAdicApprox
    epsilon: int
    det_log_valuation: int
    work_precision: int


def torsion_closed_form(spec: FabGroupSpec, precision: int) -> ClosedForm:
    """eps * det(log A)_(p') modulo p^precision."""
    if precision < 1:
        raise ValueError("precision must be positive")
    p, A = spec.p, spec.matrix
    eps = epsilon_sign(A, p)
    K = precision + spec.size + 2
    while K <= PRECISION_CAP:
        d = det_int(padic_log(PAdicMatrix.from_int(A, p, K)).rows()) % p ** K
        if d:
            v = vp(d, p)
            if K - v >= precision:
                u = (d // p ** v) % p ** precision
                return ClosedForm(PAdicApprox(p, precision, eps * u % p ** precision), eps, v, K)
        K *= 2
    raise ValueError("det(log A) vanishes to the working precision cap; increase precision")


def level_determinant(A: Sequence[Sequence[int]], p: int, n: int) -> int:
    """det(A^(p^n) - 1), exactly."""
    return det_int(mat_sub(mat_pow([list(r) for r in A], p ** n), identity(len(A))))


def torsion_approx(spec: FabGroupSpec, n_max: int, precision: int = 4,
                   window: int = FAB_WINDOW) -> InvariantSequence:
    """|det(A^(p^n) - 1)|_(p') for n = 0..n_max and their p-adic limit."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    p = spec.p
    eps = epsilon_sign(spec.matrix, p)
    levels, signs = [], []
    for n in range(n_max + 1):
        d = level_determinant(spec.A, p, n)
        if d == 0:
            raise ValueError("(A1) violated: det(A^(p^n) - 1) = 0")
        signs.append(1 if d > 0 else -1)
        levels.append(LevelValue(n, p ** n, p_prime_part(abs(d), p)))
    w = min(window, len(levels))
    limit = padic_limit([lv.value for lv in levels], p, precision, max(w, 2)) if len(levels) >= 2 \
        else PAdicApprox.unknown(p)
    checks = {"sign_stable": all(s == eps for s in signs), "epsilon": eps, "signs": signs}
    return InvariantSequence(Request("torsion", 2), p, levels, limit, checks)


def h1_torsion_route(spec: FabGroupSpec, n: int) -> int:
    """|tors H_1| of the level-n cover from the Smith form of A^(p^n) - 1."""
    M = mat_sub(mat_pow(spec.matrix, spec.p ** n), identity(spec.size))
    snf = smith_normal_form(M)
    if snf.rank < spec.size:
        raise ValueError("(A1) violated: A^(p^n) - 1 is singular")
    out = 1
    for d in snf.divisors:
        out *= d
    return out


def log_limit_check(A, p: int, n: int, precision: int) -> int:
    """Smallest valuation of an entry of p^-n (A^(p^n) - 1) - log A, capped at precision."""
    A = _square(A)
    L = padic_log(PAdicMatrix.from_int(A, p, precision)).rows()
    D = mat_sub(mat_pow(A, p ** n), identity(len(A)))
    q = p ** n
    if any(x % q for r in D for x in r):
        raise ValueError("A^(p^n) - 1 is not divisible by p^n; (A2) fails")
    best = precision
    for r1, r2 in zip(D, L):
        for x, y in zip(r1, r2):
            diff = (x // q - y) % p ** precision
            if diff:
                best = min(best, vp(diff, p))
    return best


@dataclass
class DualRouteReport:
    closed_form: ClosedForm
    approx: InvariantSequence
    agree_precision: int
    agrees: bool
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"closed_form": self.closed_form.value.to_json(),
                "epsilon": self.closed_form.epsilon,
                "approx": self.approx.to_json(),
                "agree_precision": self.agree_precision, "agrees": self.agrees,
                "checks": dict(self.checks)}


def dual_route(spec: FabGroupSpec, precision: int, n_max: int) -> DualRouteReport:
    """Compare the closed form with the last level of the approximation."""
    cf = torsion_closed_form(spec, precision)
    seq = torsion_approx(spec, n_max, precision)
    last = seq.levels[-1].value
    m = precision
    while m > 0 and (last - cf.value.residue) % spec.p ** m:
        m -= 1
    agrees = m == precision and seq.checks["sign_stable"]
    if seq.limit.converged:
        agrees = agrees and seq.limit.agrees_with(cf.value.residue)
    return DualRouteReport(cf, seq, m, agrees, {"sign_stable": seq.checks["sign_stable"]})


def demo_matrix(p: int) -> list[list[int]]:
    """A_p = [[1 + p^2, p], [p, 1]]."""
    return [[1 + p * p, p], [p, 1]]


def hensel_sqrt(c: int, root: int, p: int, K: int) -> int:
    """Square root of c modulo p^K lifting root (p odd, root a unit)."""
    if p == 2:
        raise ValueError("Hensel square roots here need p odd")
    if (root * root - c) % p:
        raise ValueError("starting value is not a square root mod p")
    x, k = root % p, 1
    while k < K:
        k = min(2 * k, K)
        mod = p ** k
        x = (x - (x * x - c) * pow(2 * x, -1, mod)) % mod
    return x


def lambda_plus(p: int, K: int) -> int:
    """The eigenvalue 1 + p^2/2 + xi p/2 of A_p with xi = sqrt(p^2 + 4) = 2 mod p."""
    xi = hensel_sqrt(p * p + 4, 2, p, K + 1)
    mod = p ** K
    return (2 + p * p + xi * p) * pow(2, -1, mod) % mod


def demo_log_identity(p: int, precision: int) -> bool:
    """det(log A_p) = -log(lambda_+)^2 modulo p^precision."""
    lam = lambda_plus(p, precision + 2)
    if (lam * lam - (2 + p * p) * lam + 1) % p ** (precision + 2):
        raise AssertionError("lambda_+ is not a root of the characteristic polynomial")
    loglam = padic_log(PAdicMatrix(p, precision, ((lam % p ** precision,),))).entries[0][0]
    det_log = det_int(padic_log(PAdicMatrix.from_int(demo_matrix(p), p, precision)).rows())
    return (det_log + loglam * loglam) % p ** precision == 0
