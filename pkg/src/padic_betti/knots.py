"""Infinite cyclic covers and knot complements.

For phi_m: Gamma -> Z/m x Z_p factoring through an infinite cyclic cover, the
p-adic Betti numbers are root counts in mu(m p^infinity) of the invariant
factors of the boundary matrices over Q[t, t^-1]. Everything here is exact:
counts are degrees of gcds with t^N - 1 over Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import polys
from .arith import require_prime
from .complexes import ChainComplexSpec, GroupAlgebraElement
from .polys import LaurentPoly


@dataclass(frozen=True)
class IntPoly:
    """Dense integer polynomial, lowest degree first, no trailing zeros."""

    coeffs: tuple

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def parse(cls, text: str) -> "IntPoly":
        return cls(tuple(polys.parse_int_poly(text)))

    @classmethod
    def coerce(cls, f) -> "IntPoly":
        if isinstance(f, IntPoly):
            return f
        if isinstance(f, str):
            return cls.parse(f)
        return cls(tuple(f))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        return polys.evaluate(list(self.coeffs), x)

    def __str__(self):
        return polys.format_laurent(LaurentPoly.from_univariate(list(self.coeffs)))


@dataclass(frozen=True)
class RootCountResult:
    count: int
    stabilized_at: int
    witness_order: int


def _count_at(rad: list, N: int) -> int:
    """deg gcd(rad, t^N - 1), i.e. the number of roots of rad that are N-th roots of unity."""
    if polys.degree(rad) <= 0:
        return 0
    r = polys.powmod_monomial(N, rad)
    g = polys.gcd(rad, polys.sub(r, [1]))
    return max(polys.degree(g), 0)


def _check_mp(m: int, p: int) -> None:
    require_prime(p)
    if m < 1:
        raise ValueError("m must be a positive integer")
    if gcd(m, p) != 1:
        raise ValueError("m must be coprime to p")


def level_bound(degree: int, p: int) -> int:
    """Largest k with p^(k-1)(p-1) <= degree: no root of unity of order m' p^k with
    larger k can be a root of a nonzero polynomial of this degree."""
    k = 0
    while p ** k * (p - 1) <= degree:
        k += 1
    return k


def count_roots_mu(f, m: int, p: int) -> RootCountResult:
    """Number of distinct roots of f in mu(m p^infinity)."""
    f = IntPoly.coerce(f)
    if f.is_zero():
        raise ValueError("cannot count roots of the zero polynomial")
    _check_mp(m, p)
    rad = polys.radical(list(f.coeffs))
    n_max = level_bound(f.degree, p)
    counts = [_count_at(rad, m * p ** n) for n in range(n_max + 1)]
    final = counts[-1]
    n0 = counts.index(final)
    return RootCountResult(final, n0, m * p ** n0)


def count_roots_at_level(f, N: int) -> int:
    """Distinct roots of f among the N-th roots of unity."""
    f = IntPoly.coerce(f) if not isinstance(f, list) else IntPoly(tuple(int(x) for x in f))
    return _count_at(polys.radical(list(f.coeffs)), N)


def knot_b1(deltas: Sequence, m: int, p: int, require_unit_at_one: bool = False) -> int:
    """1 + sum_i |V(Delta_i) in mu(m p^infinity)|."""
    _check_mp(m, p)
    total = 1
    for d in deltas:
        d = IntPoly.coerce(d)
        if require_unit_at_one and abs(d(1)) != 1:
            raise ValueError(f"|Delta(1)| = {abs(d(1))} is not 1 for {d}")
        total += count_roots_mu(d, m, p).count
    return total


# ---------------------------------------------------------------------------
# invariant factors over Q[t, t^-1]


def _poly_snf(M: list[list[list]]) -> list[list]:
    """Invariant factors (monic, divisibility chain) of a matrix over Q[t]."""
    A = [[polys.trim([Fraction(c) for c in e]) for e in row] for row in M]
    A = [r for r in A if any(r)]
    diag = []
    while A and A[0]:
        best = None
        for i, row in enumerate(A):
            for j, e in enumerate(row):
                if e and (best is None or len(e) < best[0]):
                    best = (len(e), i, j)
        if best is None:
            break
        _, i, j = best
        A[0], A[i] = A[i], A[0]
        for row in A:
            row[0], row[j] = row[j], row[0]
        while True:
            a = A[0][0]
            moved = False
            for i in range(1, len(A)):
                if A[i][0]:
                    q, _ = polys.divmod_poly(A[i][0], a)
                    A[i] = [polys.sub(x, polys.mul(q, y)) for x, y in zip(A[i], A[0])]
                    moved = moved or bool(A[i][0])
            for j in range(1, len(A[0])):
                if A[0][j]:
                    q, _ = polys.divmod_poly(A[0][j], a)
                    for row in A:
                        row[j] = polys.sub(row[j], polys.mul(q, row[0]))
                    moved = moved or bool(A[0][j])
            if not moved:
                break
            cands = [(len(A[i][0]), i, 0) for i in range(1, len(A)) if A[i][0]]
            cands += [(len(A[0][j]), 0, j) for j in range(1, len(A[0])) if A[0][j]]
            _, i, j = min(cands)
            if i:
                A[0], A[i] = A[i], A[0]
            else:
                for row in A:
                    row[0], row[j] = row[j], row[0]
        diag.append(polys.monic(A[0][0]))
        A = [row[1:] for row in A[1:]]
        A = [r for r in A if any(r)]
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = polys.gcd(diag[i], diag[j])
            if g != diag[i]:
                lcm = polys.monic(polys.divmod_poly(polys.mul(diag[i], diag[j]), g)[0])
                diag[i], diag[j] = g, lcm
    return diag


def _strip_t(f: list) -> list:
    """Remove factors of t (units of the Laurent ring) and make monic."""
    f = polys.trim(f)
    k = 0
    while k < len(f) and f[k] == 0:
        k += 1
    return polys.monic(f[k:])


def laurent_invariant_factors(A: Sequence[Sequence[LaurentPoly]]) -> list[list]:
    """Nonunit-or-unit invariant factors of a univariate Laurent matrix, as monic
    polynomials with nonzero constant term (units t^a are stripped)."""
    if not A or not A[0]:
        return []
    lo = min((e.min_exponents()[0] for row in A for e in row if not e.is_zero()), default=0)
    M = []
    for row in A:
        new = []
        for e in row:
            if e.is_zero():
                new.append([])
            else:
                shift, dense = e.to_univariate()
                new.append([0] * (shift - lo) + list(dense))
        M.append(new)
    return [_strip_t(f) for f in _poly_snf(M)]


def _laurent_matmul_is_zero(A, B) -> bool:
    for row in A:
        for col in range(len(B[0]) if B else 0):
            acc = None
            for m, a in enumerate(row):
                term = a * B[m][col]
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                return False
    return True


@dataclass
class CyclicCoverResult:
    value: int
    u: int
    v: int
    g_factors: list
    f_factors: list
    g_counts: list
    f_counts: list

    def certificate(self) -> dict:
        def fmt(f):
            return [int(c) if Fraction(c).denominator == 1 else str(c) for c in f]
        return {"u": self.u, "v": self.v,
                "g": [fmt(f) for f in self.g_factors], "f": [fmt(f) for f in self.f_factors],
                "g_counts": self.g_counts, "f_counts": self.f_counts}


def cyclic_cover_bj(Aj, Aj1, m: int, p: int) -> CyclicCoverResult:
    """Sum of root counts in mu(m p^infinity) of the invariant factors of A_j and A_{j+1}.

    ``Aj`` is e_j x e_{j-1} and ``Aj1`` is e_{j+1} x e_j over Q[t, t^-1]
    (either may be empty). They must compose to zero.
    """
    _check_mp(m, p)
    Aj = [list(r) for r in (Aj or [])]
    Aj1 = [list(r) for r in (Aj1 or [])]
    if Aj and Aj1 and Aj[0] and not _laurent_matmul_is_zero(Aj1, Aj):
        raise ValueError("A_{j+1} A_j is not zero")
    g = laurent_invariant_factors(Aj)
    f = laurent_invariant_factors(Aj1)
    gc = [count_roots_mu(to_int_coeffs(x), m, p).count for x in g]
    fc = [count_roots_mu(to_int_coeffs(x), m, p).count for x in f]
    return CyclicCoverResult(sum(gc) + sum(fc), len(g), len(f), g, f, gc, fc)


def to_int_coeffs(f: list) -> IntPoly:
    return IntPoly(tuple(polys.to_int_poly(f)))


def cyclic_cover_level_formula(e_j: int, u: int, v: int, factor_counts_at_n: Sequence[int],
                               m: int, p: int, n: int) -> int:
    """b_j at level n: (m p^n)(e_j - u - v) + sum of level-n root counts."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    return m * p ** n * (e_j - u - v) + sum(factor_counts_at_n)


def level_counts(result: CyclicCoverResult, m: int, p: int, n: int) -> list[int]:
    N = m * p ** n
    return [count_roots_at_level(to_int_coeffs(x), N) for x in result.g_factors + result.f_factors]


def laurent_boundaries(c: ChainComplexSpec, exponents: Sequence[int]) -> list:
    """Push the boundaries of c to Q[t, t^-1] along generator i -> t^exponents[i]."""
    if len(exponents) != c.ngens:
        raise ValueError("need one exponent per generator")

    def push(x: GroupAlgebraElement) -> LaurentPoly:
        terms: dict = {}
        for w, coef in x.terms.items():
            e = sum(s * exponents[g] for g, s in w)
            terms[(e,)] = terms.get((e,), 0) + coef
        return LaurentPoly(terms, 1)

    return [[[push(x) for x in row] for row in A] for A in c.boundaries]


def cyclic_cover_bj_from_complex(c: ChainComplexSpec, j: int, m: int, p: int,
                                 exponents: Sequence[int] | None = None) -> CyclicCoverResult:
    """cyclic_cover_bj for degree j of c, with every generator -> t unless told otherwise."""
    ex = list(exponents) if exponents is not None else [1] * c.ngens
    L = laurent_boundaries(c, ex)
    Aj = L[j - 1] if 1 <= j <= len(L) else []
    Aj1 = L[j] if j < len(L) else []
    return cyclic_cover_bj(Aj, Aj1, m, p)
