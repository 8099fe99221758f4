"""Ranks of r(A) for abelian quotients, one character orbit at a time.

For abelian Q the group algebra k[Q] splits along characters. Over Q the
characters fall into Galois orbits (one per cyclic quotient), and every member
of an orbit of order N gives the same rank over Q(zeta_N); so

    rank_Q r(A) = sum over orbits of phi(N) * rank_{Q(zeta_N)} A(chi).

Ranks over Q(zeta_N) are computed modulo primes ell = 1 (mod exponent), which
only ever gives lower bounds; each one is certified either by being full,
by the chain-complex bound r_{j+1} + r_j <= e_j being tight, or by enough
primes to beat a Hadamard bound on the norm of a nonzero minor.

Over F_ell with ell coprime to |Q| the same splitting runs over Frobenius
orbits inside F_{ell^r}, and there the arithmetic is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod
from typing import Sequence

from .arith import euler_phi, factorize, multiplicative_order, primes_one_mod, root_of_unity_mod
from .fields import rank_over, splitting_field
from .groups import AbelianGroup

MAX_CHARACTERS = 2_500_000


@dataclass(frozen=True)
class CharacterOrbit:
    """Galois orbit of characters: exponent coefficients c_i and order N."""

    coeffs: tuple  # chi(x) = zeta_M^(sum x_i c_i)
    order: int


def _prime_components(moduli: Sequence[int]) -> dict[int, list[tuple[int, int]]]:
    comps: dict[int, list[tuple[int, int]]] = {}
    for i, n in enumerate(moduli):
        for q, e in factorize(n) if n > 1 else ():
            comps.setdefault(q, []).append((i, e))
    return comps


def _primary_reps(q: int, exps: Sequence[int]):
    """Orbit representatives of characters of prod Z/q^e_i under (Z/q^k)^x scaling.

    Yields (vector a, k) where q^k is the order. The normal form scales the
    first coordinate of maximal order to q^(e_i - k).
    """
    s = len(exps)
    yield (0,) * s, 0
    for k in range(1, max(exps) + 1):
        for i in range(s):
            if exps[i] < k:
                continue
            ranges = []
            for j in range(s):
                e = exps[j]
                if j < i:
                    step = q ** max(e - k + 1, 0)
                elif j == i:
                    ranges.append((q ** (e - k),))
                    continue
                else:
                    step = q ** max(e - k, 0)
                ranges.append(range(0, q ** e, step))
            for a in itertools.product(*ranges):
                yield a, k


def galois_orbits(moduli: Sequence[int]) -> tuple[int, list[CharacterOrbit]]:
    """(exponent M, orbit representatives) for the characters of prod Z/n_i."""
    moduli = tuple(moduli)
    M = 1
    for n in moduli:
        M = M * n // gcd(M, n)
    comps = _prime_components(moduli)
    per_prime = []
    for q, cs in sorted(comps.items()):
        exps = [e for _, e in cs]
        reps = []
        for a, k in _primary_reps(q, exps):
            coeff = [0] * len(moduli)
            for (i, e), ai in zip(cs, a):
                coeff[i] = (coeff[i] + ai * (M // q ** e)) % M
            reps.append((coeff, q ** k))
        per_prime.append(reps)
    orbits = []
    for combo in itertools.product(*per_prime):
        coeff = [0] * len(moduli)
        order = 1
        for c, o in combo:
            coeff = [(x + y) % M for x, y in zip(coeff, c)]
            order *= o
        orbits.append(CharacterOrbit(tuple(coeff), order))
    return M, orbits


def _reduce_abelian(A, Q: AbelianGroup):
    """Entries of A as lists of (group vector, coefficient)."""
    out = []
    for row in A:
        new_row = []
        for x in row:
            acc: dict = {}
            for w, c in x.terms.items():
                v = Q.word_vector(w)
                acc[v] = acc.get(v, 0) + c
            new_row.append([(v, c) for v, c in acc.items() if c])
        out.append(new_row)
    return out


def _check_composes_to_zero(red: dict, Q: AbelianGroup) -> None:
    for j in sorted(red):
        if j + 1 not in red:
            continue
        A, B = red[j + 1], red[j]
        for r in A:
            for col in range(len(B[0]) if B else 0):
                acc: dict = {}
                for m, entry in enumerate(r):
                    for v1, c1 in entry:
                        for v2, c2 in B[m][col]:
                            v = tuple((x + y) % n for x, y, n in zip(v1, v2, Q.moduli))
                            acc[v] = acc.get(v, 0) + c1 * c2
                if any(acc.values()):
                    raise ValueError(f"boundary maps A_{j + 1} and A_{j} do not compose to zero "
                                     f"in the quotient {Q.name}")


def _rank_mod(rows: list[list[int]], ell: int) -> int:
    m = [r[:] for r in rows if any(r)]
    if not m:
        return 0
    rank = 0
    ncols = len(m[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, ell)
        prow = [x * inv % ell for x in m[rank]]
        m[rank] = prow
        for i in range(rank + 1, len(m)):
            f = m[i][c]
            if f:
                m[i] = [(x - f * y) % ell for x, y in zip(m[i], prow)]
        rank += 1
        if rank == len(m):
            break
    return rank


def _exponent_entries(A_red, coeffs: Sequence[int], M: int):
    """Each entry as {exponent mod M: coefficient}."""
    out = []
    for row in A_red:
        new_row = []
        for entry in row:
            acc: dict = {}
            for v, c in entry:
                e = sum(x * y for x, y in zip(v, coeffs)) % M
                acc[e] = acc.get(e, 0) + c
            new_row.append({e: c for e, c in acc.items() if c})
        out.append(new_row)
    return out


def _evaluate_mod(entries, table: list[int], ell: int) -> list[list[int]]:
    return [[sum(c * table[e] for e, c in entry.items()) % ell for entry in row] for row in entries]


def _norm_sq_rows(entries) -> list[int]:
    """Squared Euclidean norms of rows, with each entry bounded by its L1 norm."""
    return sorted((sum(sum(abs(c) for c in entry.values()) ** 2 for entry in row) for row in entries),
                  reverse=True)


@dataclass
class CharacterRankReport:
    ranks: dict
    orbits: int
    extra_primes: int


def character_ranks(boundaries: dict, Q: AbelianGroup, modulus: int = 0) -> CharacterRankReport:
    """Ranks of r(A_j) over Q (modulus 0) or F_ell (ell coprime to |Q|).

    ``boundaries`` maps degree j to the matrix A_j over the group algebra.
    """
    if Q.order > MAX_CHARACTERS:
        raise ValueError(f"quotient of order {Q.order} exceeds the character budget {MAX_CHARACTERS}")
    if modulus and Q.order % modulus == 0:
        raise ValueError("characteristic divides |Q|; use the direct route")
    red = {j: _reduce_abelian(A, Q) for j, A in boundaries.items()}
    _check_composes_to_zero(red, Q)
    shapes = {j: (len(A), len(A[0]) if A else 0) for j, A in boundaries.items()}
    M, orbits = galois_orbits(Q.moduli)
    totals = {j: 0 for j in boundaries}
    if modulus:
        _frobenius_ranks(red, shapes, M, orbits, modulus, totals)
        return CharacterRankReport(totals, len(orbits), 0)
    primes = list(primes_one_mod(M, 2))
    tables = {}

    def table(ell):
        if ell not in tables:
            w = root_of_unity_mod(M, ell)
            t = [1] * M
            for i in range(1, M):
                t[i] = t[i - 1] * w % ell
            tables[ell] = t
        return tables[ell]

    extra = 0
    for orb in orbits:
        ents = {j: _exponent_entries(red[j], orb.coeffs, M) for j in red}
        ell0 = primes[0]
        lb = {j: _rank_mod(_evaluate_mod(ents[j], table(ell0), ell0), ell0) for j in ents}
        done = set()
        for j, r in lb.items():
            rows, cols = shapes[j]
            if r == min(rows, cols):
                done.add(j)
        changed = True
        while changed:
            changed = False
            for j in lb:
                if j + 1 in lb and lb[j + 1] + lb[j] == shapes[j][0]:
                    for k in (j, j + 1):
                        if k not in done:
                            done.add(k)
                            changed = True
        phi = euler_phi(orb.order)
        for j in lb:
            if j in done:
                continue
            norms = _norm_sq_rows(ents[j])
            r = lb[j]
            used = [ell0]
            while True:
                # a nonzero (r+1)-minor has norm at most H^phi with H^2 the product below
                if len(norms) <= r or norms[r] == 0:
                    break
                h2 = prod(norms[: r + 1])
                if prod(used) ** 2 > h2 ** phi:
                    break
                more = primes_one_mod(M, len(used) + 1)
                ell = more[len(used)]
                used.append(ell)
                extra += 1
                rk = _rank_mod(_evaluate_mod(ents[j], table(ell), ell), ell)
                if rk > r:
                    r = rk
            lb[j] = r
        for j in lb:
            totals[j] += phi * lb[j]
    return CharacterRankReport(totals, len(orbits), extra)


def _unit_coset_reps(N: int, ell: int) -> list[int]:
    """Representatives of (Z/N)^x / <ell>."""
    seen = set()
    reps = []
    for u in range(1, N + 1):
        u %= N
        if gcd(u, N) != 1 or u in seen:
            continue
        reps.append(u)
        x = u
        while x not in seen:
            seen.add(x)
            x = x * ell % N
    return reps or [0]


def _frobenius_ranks(red, shapes, M, orbits, ell, totals) -> None:
    fields: dict = {}
    for orb in orbits:
        N = orb.order
        if N not in fields:
            F = splitting_field(ell, N) if N > 1 else splitting_field(ell, 1)
            z = F.root_of_unity(N)
            powers = [F.one]
            for _ in range(1, N):
                powers.append(F.mul(powers[-1], z))
            fields[N] = (F, powers)
        F, powers = fields[N]
        r = multiplicative_order(ell, N) if N > 1 else 1
        step = M // N
        for u in _unit_coset_reps(N, ell) if N > 1 else [1]:
            coeffs = tuple(c * u % M for c in orb.coeffs)
            for j, A in red.items():
                ents = _exponent_entries(A, coeffs, M)
                mat = []
                for row in ents:
                    new_row = []
                    for entry in row:
                        acc = F.zero
                        for e, c in entry.items():
                            acc = F.add(acc, F.mul(F.from_int(c), powers[(e // step) % N]))
                        new_row.append(acc)
                    mat.append(new_row)
                totals[j] += r * rank_over(mat, F) if mat and mat[0] else 0
