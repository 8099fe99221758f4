"""Exact linear algebra over Z, Q and F_ell, plus p-adic matrix log/exp.

Dense matrices are lists of rows of ints. Large boundary matrices coming out of
finite quotients are kept sparse (a list of ``{column: value}`` dicts); for
those, unit pivots are eliminated first and only the leftover block is handed
to the dense algorithms.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .arith import require_prime
from .padic import p_prime_part, vp

Matrix = list  # list[list[int]]
SparseRows = list  # list[dict[int, int]]


@dataclass(frozen=True)
class FpMatrix:
    modulus: int
    rows: tuple

    def __post_init__(self):
        require_prime(self.modulus, "modulus")
        object.__setattr__(self, "rows", tuple(tuple(x % self.modulus for x in r)
                                               for r in self.rows))


@dataclass(frozen=True)
class SNFResult:
    """Nonzero invariant factors d_1 | d_2 | ... and the rank."""

    divisors: tuple
    rank: int


# ---------------------------------------------------------------------------
# dense routines


def bareiss_rank(M: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    m = [list(map(int, r)) for r in M]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        for i in range(rank + 1, nrows):
            a = m[i][c]
            row_i = m[i]
            row_r = m[rank]
            m[i] = [(pv * row_i[k] - a * row_r[k]) // prev for k in range(ncols)]
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_q(M: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer matrix."""
    rows = [list(r) for r in M]
    if len(rows) * (len(rows[0]) if rows else 0) <= 400:
        return bareiss_rank(rows)
    return sparse_rank(dense_to_sparse(rows), 0)


def rank_fp(M, modulus: int | None = None) -> int:
    """Rank over F_ell. Accepts an :class:`FpMatrix` or rows plus ``modulus``."""
    if isinstance(M, FpMatrix):
        ell, rows = M.modulus, M.rows
    else:
        if modulus is None:
            raise ValueError("modulus required")
        ell = require_prime(modulus, "modulus")
        rows = M
    return sparse_rank(dense_to_sparse(rows), ell)


def det_int(M: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss)."""
    m = [list(map(int, r)) for r in M]
    n = len(m)
    if n == 0:
        return 1
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][k]), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _snf_dense(A: list[list[int]]) -> list[int]:
    """Diagonalize by min-pivot Euclid steps, then normalize to a divisibility chain."""
    A = [r[:] for r in A if any(r)]
    diag = []
    while A and A[0]:
        best = None
        for i, row in enumerate(A):
            for j, x in enumerate(row):
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
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
                    q = A[i][0] // a
                    A[i] = [x - q * y for x, y in zip(A[i], A[0])]
                    if A[i][0]:
                        moved = True
            for j in range(1, len(A[0])):
                if A[0][j]:
                    q = A[0][j] // a
                    for row in A:
                        row[j] -= q * row[0]
                    if A[0][j]:
                        moved = True
            if not moved:
                break
            # bring the smallest leftover in row/column 0 to the corner
            cands = [(abs(A[i][0]), i, 0) for i in range(1, len(A)) if A[i][0]]
            cands += [(abs(A[0][j]), 0, j) for j in range(1, len(A[0])) if A[0][j]]
            _, i, j = min(cands)
            if i:
                A[0], A[i] = A[i], A[0]
            else:
                for row in A:
                    row[0], row[j] = row[j], row[0]
        diag.append(abs(A[0][0]))
        A = [row[1:] for row in A[1:]]
        A = [r for r in A if any(r)]
    return _normalize_chain(diag)


def _normalize_chain(diag: list[int]) -> list[int]:
    d = list(diag)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return d


# ---------------------------------------------------------------------------
# sparse elimination


def dense_to_sparse(M: Sequence[Sequence[int]]) -> SparseRows:
    return [{j: x for j, x in enumerate(r) if x} for r in M]


def _unit_eliminate(rows: SparseRows, modulus: int) -> tuple[int, SparseRows]:
    """Eliminate pivots that are units (±1 over Z, anything nonzero mod ell).

    Returns the number of eliminated pivots and the leftover rows, whose
    nonzero invariant factors (resp. rank) are those of the input minus the
    eliminated unit ones.
    """
    ell = modulus
    rows = [dict((c, v % ell) if ell else (c, v) for c, v in r.items()) for r in rows]
    rows = [{c: v for c, v in r.items() if v} for r in rows]
    cols: dict[int, set] = {}
    for i, r in enumerate(rows):
        for c in r:
            cols.setdefault(c, set()).add(i)
    active = set(i for i, r in enumerate(rows) if r)
    heap = [(len(rows[i]), i) for i in active]
    heapq.heapify(heap)
    stuck: set = set()
    eliminated = 0

    def is_unit(v):
        return v != 0 if ell else v in (1, -1)

    while heap:
        length, i = heapq.heappop(heap)
        if i not in active or length != len(rows[i]) or i in stuck:
            continue
        row = rows[i]
        best = None
        for c, v in row.items():
            if is_unit(v):
                cc = len(cols[c])
                if best is None or cc < best[0]:
                    best = (cc, c)
                    if cc == 1:
                        break
        if best is None:
            stuck.add(i)
            continue
        c = best[1]
        pv = row[c]
        inv = pow(pv, -1, ell) if ell else pv
        for k in list(cols[c]):
            if k == i:
                continue
            target = rows[k]
            f = target[c] * inv
            if ell:
                f %= ell
            for cc, v in row.items():
                nv = target.get(cc, 0) - f * v
                if ell:
                    nv %= ell
                if nv:
                    if cc not in target:
                        cols[cc].add(k)
                    target[cc] = nv
                elif cc in target:
                    del target[cc]
                    cols[cc].discard(k)
            if target:
                stuck.discard(k)
                heapq.heappush(heap, (len(target), k))
            else:
                active.discard(k)
                stuck.discard(k)
        for cc in row:
            cols[cc].discard(i)
        active.discard(i)
        rows[i] = {}
        eliminated += 1
    rest = [rows[i] for i in sorted(active) if rows[i]]
    return eliminated, rest


def _compact(rows: SparseRows) -> Matrix:
    used = sorted({c for r in rows for c in r})
    index = {c: k for k, c in enumerate(used)}
    out = []
    for r in rows:
        dense = [0] * len(used)
        for c, v in r.items():
            dense[index[c]] = v
        out.append(dense)
    return out


def sparse_rank(rows: SparseRows, modulus: int = 0) -> int:
    """Exact rank of a sparse integer matrix over Q (modulus 0) or F_ell."""
    if modulus:
        require_prime(modulus, "modulus")
    k, rest = _unit_eliminate(rows, modulus)
    if not rest:
        return k
    if modulus:  # every nonzero entry is a unit, so nothing is left
        raise AssertionError("unit elimination left entries over a field")
    return k + bareiss_rank(_compact(rest))


def smith_normal_form(M) -> SNFResult:
    """Invariant factors of an integer matrix (dense rows or sparse dict rows)."""
    if M and isinstance(M[0], dict):
        sparse = [dict(r) for r in M]
    else:
        sparse = dense_to_sparse(M)
    k, rest = _unit_eliminate(sparse, 0)
    tail = _snf_dense(_compact(rest)) if rest else []
    divisors = tuple([1] * k + tail)
    return SNFResult(divisors, len(divisors))


def torsion_card_pprime(divisors: Sequence[int], p: int) -> int:
    """Product of the p'-parts of the invariant factors."""
    require_prime(p)
    out = 1
    for d in divisors:
        if d == 0:
            raise ValueError("invariant factors must be nonzero")
        out *= abs(p_prime_part(d, p))
    return out


# ---------------------------------------------------------------------------
# integer / modular matrix helpers


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A: Matrix, B: Matrix, modulus: int = 0) -> Matrix:
    Bt = list(zip(*B))
    out = []
    for row in A:
        new = [sum(a * b for a, b in zip(row, col)) for col in Bt]
        out.append([x % modulus for x in new] if modulus else new)
    return out


def mat_pow(A: Matrix, e: int, modulus: int = 0) -> Matrix:
    if e < 0:
        raise ValueError("negative matrix power")
    result = identity(len(A))
    base = [[x % modulus for x in r] for r in A] if modulus else [r[:] for r in A]
    while e:
        if e & 1:
            result = mat_mul(result, base, modulus)
        base = mat_mul(base, base, modulus)
        e >>= 1
    return result


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(r, s)] for r, s in zip(A, B)]


def charpoly(A: Matrix) -> list[int]:
    """Characteristic polynomial det(t - A), integer coefficients, low degree first."""
    n = len(A)
    # Faddeev-LeVerrier over Q
    M = [[Fraction(0)] * n for _ in range(n)]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    AF = [[Fraction(x) for x in r] for r in A]
    for k in range(1, n + 1):
        for i in range(n):
            M[i][i] += coeffs[n - k + 1]
        M = [[sum(AF[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(M[i][i] for i in range(n)) / k
    return [int(c) for c in coeffs]


# ---------------------------------------------------------------------------
# p-adic matrices


@dataclass(frozen=True)
class PAdicMatrix:
    """A square matrix over Z_p known modulo p^precision."""

    prime: int
    precision: int
    entries: tuple = field(default=())

    def __post_init__(self):
        require_prime(self.prime)
        if self.precision < 1:
            raise ValueError("precision must be positive")
        mod = self.prime ** self.precision
        rows = tuple(tuple(int(x) % mod for x in r) for r in self.entries)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("p-adic matrices must be square")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_int(cls, A, p: int, precision: int) -> "PAdicMatrix":
        return cls(p, precision, tuple(tuple(r) for r in A))

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def modulus(self) -> int:
        return self.prime ** self.precision

    def rows(self) -> Matrix:
        return [list(r) for r in self.entries]

    def min_valuation(self) -> int | None:
        """Smallest p-adic valuation among entries (None for the zero matrix)."""
        vals = [vp(x, self.prime) for r in self.entries for x in r if x]
        return min(vals) if vals else None

    def is_zero(self) -> bool:
        return not any(x for r in self.entries for x in r)


def _domain_valuation(p: int) -> int:
    return 2 if p == 2 else 1


def _series_bound(v: int, p: int, N: int, loss) -> int:
    # smallest J with v*j - loss(j) >= N for every j >= J (loss grows slower than v*j)
    j = 1
    while v * j - loss(j) < N:
        j += 1
    return j


def _floor_log(j: int, p: int) -> int:
    k = 0
    while p ** (k + 1) <= j:
        k += 1
    return k


def padic_log(A: PAdicMatrix) -> PAdicMatrix:
    """log(A) = sum_{j>=1} (-1)^{j-1} (A - 1)^j / j, correct modulo p^N."""
    p, N, n = A.prime, A.precision, A.size
    B = [[x - int(i == j) for j, x in enumerate(r)] for i, r in enumerate(A.entries)]
    need = _domain_valuation(p)
    if any(x % p ** need for r in B for x in r):
        raise ValueError("matrix not in logarithm domain")
    B = PAdicMatrix(p, N, tuple(tuple(r) for r in B))
    v = B.min_valuation()
    if v is None or v >= N:
        return PAdicMatrix(p, N, tuple((0,) * n for _ in range(n)))
    jmax = _series_bound(v, p, N, lambda j: _floor_log(j, p))
    extra = max(vp(j, p) for j in range(1, jmax + 1))
    work = p ** (N + extra)
    mod = p ** N
    Bw = B.rows()
    power = identity(n)
    total = [[0] * n for _ in range(n)]
    for j in range(1, jmax + 1):
        power = mat_mul(power, Bw, work)
        e = vp(j, p)
        unit_inv = pow(j // p ** e, -1, mod)
        sign = 1 if j % 2 else -1
        for r in range(n):
            for c in range(n):
                x = power[r][c]
                # B^j is divisible by p^j >= p^e, so the residue division is exact
                total[r][c] += sign * (x // p ** e) * unit_inv
    return PAdicMatrix(p, N, tuple(tuple(x % mod for x in r) for r in total))


def padic_exp(B: PAdicMatrix) -> PAdicMatrix:
    """exp(B) = sum_{j>=0} B^j / j!, correct modulo p^N."""
    p, N, n = B.prime, B.precision, B.size
    need = _domain_valuation(p)
    if any(x % p ** need for r in B.entries for x in r):
        raise ValueError("matrix not in exponential domain")
    v = B.min_valuation()
    if v is None or v >= N:
        return PAdicMatrix(p, N, tuple(tuple(r) for r in identity(n)))

    def vfact(j):
        return sum(j // p ** k for k in range(1, _floor_log(j, p) + 1)) if j >= p else 0

    jmax = _series_bound(v, p, N, lambda j: (j - 1) // (p - 1))
    extra = vfact(jmax)
    work = p ** (N + extra)
    mod = p ** N
    Bw = B.rows()
    power = identity(n)
    total = identity(n)
    fact = 1
    for j in range(1, jmax + 1):
        power = mat_mul(power, Bw, work)
        fact *= j
        e = vfact(j)
        unit_inv = pow(fact // p ** e, -1, mod)
        for r in range(n):
            for c in range(n):
                total[r][c] += (power[r][c] // p ** e) * unit_inv
    return PAdicMatrix(p, N, tuple(tuple(x % mod for x in r) for r in total))


def det_mod(A: PAdicMatrix) -> int:
    """Determinant reduced into [0, p^N)."""
    return det_int(A.rows()) % A.modulus
