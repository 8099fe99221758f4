"""Brute-force oracles for cross-checking the main routes on tiny inputs.

None of these share elimination code with the rest of the package: determinants
are Leibniz sums, covers are built cell by cell, and ranks come from a local
Gauss-Jordan over Fraction or over a finite field.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .complexes import ChainComplexSpec

MAX_ORACLE_ORDER = 24


@dataclass(frozen=True)
class OracleReport:
    quantity: str
    main: object
    oracle: object

    @property
    def agree(self) -> bool:
        return self.main == self.oracle

    def to_json(self) -> dict:
        return {"quantity": self.quantity, "main": self.main, "oracle": self.oracle, "agree": self.agree}


# ---------------------------------------------------------------------------
# Smith form from minors


def _leibniz(M: Sequence[Sequence[int]]) -> int:
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inv % 2 else 1
        for i, j in enumerate(perm):
            term *= M[i][j]
            if not term:
                break
        total += term
    return total


def oracle_snf_minor_gcd(M: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors d_k = g_k / g_(k-1) with g_k the gcd of the k x k minors."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if rows > 6 or cols > 6:
        raise ValueError("the minor oracle is for matrices up to 6 x 6")
    out = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                g = gcd(g, _leibniz([[M[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


# ---------------------------------------------------------------------------
# explicit covers


def _gauss_rank(rows: list[list], ell: int) -> int:
    """Rank by Gauss-Jordan over Q (ell = 0) or F_ell."""
    if ell:
        M = [[x % ell for x in r] for r in rows]
    else:
        M = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        if ell:
            inv = pow(M[rank][c], ell - 2, ell)
            M[rank] = [x * inv % ell for x in M[rank]]
        else:
            inv = 1 / M[rank][c]
            M[rank] = [x * inv for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c]
                if ell:
                    M[i] = [(x - f * y) % ell for x, y in zip(M[i], M[rank])]
                else:
                    M[i] = [x - f * y for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def _word_element(Q, word) -> int:
    x = Q.identity
    for g, e in word:
        img = Q.generator_images[g]
        if e < 0:
            # inverse by search, not by the group's own inverse table
            img = next(y for y in range(Q.order) if Q.mul(img, y) == Q.identity)
        x = Q.mul(x, img)
    return x


def cover_boundary(c: ChainComplexSpec, Q, j: int) -> list[list[int]]:
    """Boundary from degree-j cells to degree-(j-1) cells of the cover X~/ker.

    Cells are pairs (cell, x) with x in Q; the boundary of (a, x) is
    sum_b sum_g c_g (b, x g) where A_j[a][b] = sum_g c_g g.
    """
    A = c.boundary(j)
    n = Q.order
    rows = c.rank(j) * n
    cols = c.rank(j - 1) * n
    M = [[0] * cols for _ in range(rows)]
    if not A or not A[0]:
        return M
    for a, row in enumerate(A):
        for b, entry in enumerate(row):
            for word, coef in entry.terms.items():
                g = _word_element(Q, word)
                for x in range(n):
                    M[a * n + x][b * n + Q.mul(x, g)] += coef
    return M


def oracle_cover_cohomology(c: ChainComplexSpec, Q, k, j: int) -> int:
    """dim_k H^j of the finite cover, from its explicit cellular chain complex."""
    if Q.order > MAX_ORACLE_ORDER:
        raise ValueError(f"oracle covers are limited to |Q| <= {MAX_ORACLE_ORDER}")
    ell = _characteristic(k)
    n = Q.order
    dim = c.rank(j) * n

    def rank(i):
        if i < 1 or c.rank(i) == 0 or c.rank(i - 1) == 0:
            return 0
        return _gauss_rank(cover_boundary(c, Q, i), ell)

    return dim - rank(j) - rank(j + 1)


def _characteristic(k) -> int:
    if hasattr(k, "characteristic"):
        return k.characteristic
    s = str(k).strip().upper()
    if s in ("Q", "QQ", "0"):
        return 0
    if s.startswith("F") and s[1:].isdigit():
        return int(s[1:])
    raise ValueError(f"cannot parse field {k!r}")


# ---------------------------------------------------------------------------
# characters of (Z/p^N)^d


def _field_rank(rows, F) -> int:
    M = [list(r) for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if not F.is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = F.inv(M[rank][c])
        M[rank] = [F.mul(x, inv) for x in M[rank]]
        for i in range(len(M)):
            if i != rank and not F.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def oracle_character_kernel(inst, N: int) -> int:
    """sum over zeta in mu(p^N)^d of the nullity of A(eps(zeta))."""
    from .atiyah import character_field

    q = inst.p ** N
    F = character_field(inst.field, q)
    z = F.root_of_unity(q)
    images = inst.exponent_images(N)
    n, m = inst.shape
    total = 0
    for a in itertools.product(range(q), repeat=inst.d):
        point = [F.pow(z, sum(x * y for x, y in zip(img, a)) % q) for img in images]
        mat = []
        for row in inst.A:
            new = []
            for f in row:
                acc = F.zero
                for mono, coef in f.terms.items():
                    term = F.from_int(Fraction(coef).numerator)
                    if Fraction(coef).denominator != 1:
                        term = F.mul(term, F.inv(F.from_int(Fraction(coef).denominator)))
                    for x, e in zip(point, mono):
                        term = F.mul(term, F.pow(x, e % q))
                    acc = F.add(acc, term)
                new.append(acc)
            mat.append(new)
        total += m - _field_rank(mat, F)
    return total


# ---------------------------------------------------------------------------
# self check


def _random_matrix(rng: random.Random) -> list[list[int]]:
    r, c = rng.randint(1, 4), rng.randint(1, 4)
    M = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
    if rng.random() < 0.3 and r > 1:
        f = rng.randint(-2, 2)
        M[-1] = [f * x for x in M[0]]
    return M


def tiny_cover_instances(seed: int = 0, count: int = 50) -> list[tuple]:
    """Seeded (complex, quotient, field, degree) tuples with |Q| <= 24."""
    from .complexes import (complex_circle, complex_free, complex_klein_bottle, complex_knot,
                            complex_product, complex_sphere, complex_surface, complex_torus)
    from .groups import AbelianGroup, dihedral_group, quaternion_group

    rng = random.Random(seed)
    spaces = [complex_circle("t"), complex_torus(2), complex_torus(3), complex_surface(2), complex_free(2),
              complex_klein_bottle(), complex_knot("trefoil"), complex_product(complex_circle("s"), complex_sphere(2))]
    tables = [dihedral_group(3), dihedral_group(4), quaternion_group(), dihedral_group(6)]
    fields = ["Q", "F2", "F3", "F5", "F7"]
    out = []
    while len(out) < count:
        c = spaces[rng.randrange(len(spaces))]
        g = c.ngens
        if rng.random() < 0.6:
            moduli = [rng.choice([2, 3, 4, 5, 6]) for _ in range(rng.randint(1, 2))]
            order = 1
            for x in moduli:
                order *= x
            if order > MAX_ORACLE_ORDER:
                continue
            vecs = [[rng.randrange(x) for x in moduli] for _ in range(g)]
            try:
                Q = AbelianGroup(moduli, vecs)
            except ValueError:
                continue
        else:
            T = tables[rng.randrange(len(tables))]
            try:
                Q = T.with_images([rng.randrange(T.order) for _ in range(g)])
            except ValueError:
                continue
        if not _is_homomorphism(c, Q):
            continue
        j = rng.randint(0, c.max_degree())
        out.append((c, Q, rng.choice(fields), j))
    return out


def _is_homomorphism(c: ChainComplexSpec, Q) -> bool:
    from .complexes import check_composition

    try:
        check_composition(c, Q)
    except ValueError:
        return False
    return True


def run_self_check(seed: int = 0, count: int = 50) -> list[OracleReport]:
    from .atiyah import direct_nullity, random_instance
    from .engine import betti_at_level
    from .linalg import smith_normal_form

    rng = random.Random(seed)
    reports = []
    for _ in range(count):
        M = _random_matrix(rng)
        reports.append(OracleReport(f"snf {M}", list(smith_normal_form(M).divisors), oracle_snf_minor_gcd(M)))
    for c, Q, k, j in tiny_cover_instances(seed, count):
        reports.append(OracleReport(f"b{j}({c.name}; {Q.name}, {k})",
                                    betti_at_level(c, Q, k, j), oracle_cover_cohomology(c, Q, k, j)))
    for _ in range(max(count // 5, 1)):
        inst = random_instance(rng)
        for N in (1, 2):
            reports.append(OracleReport(f"kernel N={N}", direct_nullity(inst, N), oracle_character_kernel(inst, N)))
    return reports
