"""Frattini growth dichotomy and kernel dimensions for virtually abelian quotients.

Two independent pieces:

* Frattini lengths and the growth dichotomy: along a Frattini tower a Betti
  sequence either equals its p-adic limit or exceeds it by p^(n+1-c) with
  c = 1 over Q and c = p log_p(q) over F_q.
* Kernel dimensions of r(A) for a Laurent matrix A in t_1..t_{d+s} pushed to
  (Z/p^N)^d, with t_{d+i} sent to the combination Lambda_i of the first d
  variables. The direct nullity is compared with a sum over characters of
  vanishing minor ideals.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .arith import factorize, require_prime
from .engine import FieldSpec, InvariantSequence
from .fields import CyclotomicField, splitting_field
from .groups import (FiniteQuotient, all_subgroups, cyclic_group, direct_product, frattini_length,
                     is_normal, quotient_group, require_p_group, subgroup_as_group)
from .linalg import sparse_rank
from .padic import CONVERGED, DEFAULT_WINDOW, PAdicApprox, padic_limit, vp
from .polys import LaurentPoly

STABILIZED = "stabilized"
FAST_GROWTH = "fast-growth"
INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------------------
# constants and the dichotomy


@dataclass(frozen=True)
class CConstant:
    """c_{k,p}: 1 for Q, p log_p(q) for F_q, kept as the pair (p, q).

    p^c equals p for Q and q^p for F_q, which is all the bound needs.
    """

    p: int
    q: int = 0

    @property
    def p_to_c(self) -> int:
        return self.p if self.q == 0 else self.q ** self.p

    @property
    def exact(self) -> Fraction | None:
        """The rational value when it is one (Q, or q a power of p)."""
        if self.q == 0:
            return Fraction(1)
        (ell, a), = factorize(self.q)
        if ell == self.p:
            return Fraction(self.p * a)
        return None

    def bound_holds(self, excess: int, n: int) -> bool:
        """excess >= p^(n+1-c), decided exactly as excess * p^c >= p^(n+1)."""
        return excess * self.p_to_c >= self.p ** (n + 1)

    def __str__(self):
        if self.q == 0:
            return "1"
        e = self.exact
        return str(e) if e is not None else f"{self.p}*log_{self.p}({self.q})"


def _field_size(k) -> int:
    if isinstance(k, FieldSpec):
        return k.characteristic
    if isinstance(k, int):
        return k
    s = str(k).strip().upper().replace("GF(", "F").rstrip(")")
    if s in ("Q", "QQ", "0"):
        return 0
    if s.startswith("F") and s[1:].isdigit():
        return int(s[1:])
    raise ValueError(f"cannot parse field {k!r}; use Q or F<q>")


def c_constant(k, p: int) -> CConstant:
    require_prime(p)
    q = _field_size(k)
    if q == 0:
        return CConstant(p)
    if q < 2 or len(factorize(q)) != 1:
        raise ValueError(f"F_{q} is not a field")
    if q == p:
        raise ValueError("the constant is not defined for k = F_p")
    return CConstant(p, q)


@dataclass
class GrowthVerdict:
    mode: str
    stabilized_value: int | None
    bound_checked: list = field(default_factory=list)
    constant: str = "1"

    def to_json(self) -> dict:
        return {"mode": self.mode, "stabilized_value": self.stabilized_value,
                "constant": self.constant,
                "bound_checked": [{"n": n, "value": v, "holds": h} for n, v, h in self.bound_checked]}


def dichotomy_check(seq: InvariantSequence | Sequence, b_limit: int, k, p: int,
                    window: int = DEFAULT_WINDOW, level_numbers: Sequence[int] | None = None) -> GrowthVerdict:
    """Classify a Betti sequence along a Frattini tower.

    ``seq`` is an InvariantSequence or a plain list of values; level numbers
    default to those recorded in the sequence (or 1, 2, ...).
    """
    c = c_constant(k, p)
    if isinstance(seq, InvariantSequence):
        values = seq.values
        ns = [lv.n for lv in seq.levels]
    else:
        values = [int(v) for v in seq]
        ns = list(level_numbers) if level_numbers is not None else list(range(1, len(values) + 1))
    if len(ns) != len(values):
        raise ValueError("one level number per value")
    record = [(n, v, c.bound_holds(v - b_limit, n)) for n, v in zip(ns, values)]
    if len(values) >= window and all(v == b_limit for v in values[-window:]):
        return GrowthVerdict(STABILIZED, b_limit, record, str(c))
    if len(values) >= 2 and all(h for _, _, h in record):
        return GrowthVerdict(FAST_GROWTH, None, record, str(c))
    return GrowthVerdict(INCONCLUSIVE, None, record, str(c))


# ---------------------------------------------------------------------------
# Frattini length lemma


@dataclass
class FrattiniReport:
    group: str
    length: int
    checks: dict

    @property
    def ok(self) -> bool:
        return all(v["ok"] for v in self.checks.values())


def verify_frattini_lemma(G: FiniteQuotient, p: int, others: Sequence[FiniteQuotient] = ()) -> FrattiniReport:
    """Check F(Z/p^r) = r, subadditivity over normal subgroups, the product rule
    against ``others`` and the subgroup index bound, exhaustively for G."""
    require_p_group(G, p)
    F = frattini_length(G, p)
    subs = all_subgroups(G)
    checks = {}

    # (i) on the cyclic subgroups of G, each compared with Z/p^r
    cyc_ok, cyc_n = True, 0
    for H in subs:
        if len(H) > 1 and any(G.closure([x]) == H for x in H):
            r = vp(len(H), p)
            cyc_ok &= frattini_length(subgroup_as_group(G, H), p) == r == frattini_length(cyclic_group(p ** r), p)
            cyc_n += 1
    checks["i"] = {"ok": cyc_ok, "cases": cyc_n}

    ok, n = True, 0
    for N in subs:
        if is_normal(G, N):
            quo, _ = quotient_group(G, N)
            ok &= F <= frattini_length(G, p, N) + frattini_length(quo, p)
            n += 1
    checks["ii"] = {"ok": ok, "cases": n}

    ok, n = True, 0
    for H in others:
        if G.order * H.order > 256:
            continue
        ok &= frattini_length(direct_product(G, H), p) == max(F, frattini_length(H, p))
        n += 1
    checks["iii"] = {"ok": ok, "cases": n}

    ok, n = True, 0
    for H in subs:
        ok &= F <= frattini_length(G, p, H) + vp(G.order // len(H), p)
        n += 1
    checks["iv"] = {"ok": ok, "cases": n}
    return FrattiniReport(G.name, F, checks)


# ---------------------------------------------------------------------------
# kernel dimensions over virtually abelian quotients


@dataclass
class AtiyahInstance:
    """n x m Laurent matrix in t_1..t_{d+s} with t_{d+i} -> sum_j Lambda[i][j] t_j.

    r(A) maps k[Q]^m to k[Q]^n, so kernels live in m copies of k[Q].
    """

    A: list
    d: int
    Lambda: list
    p: int
    field: FieldSpec
    lambda_precision: int | None = None

    def __post_init__(self):
        require_prime(self.p)
        self.field = FieldSpec.parse(self.field)
        self.field.check_against(self.p)
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if not self.A or not self.A[0]:
            raise ValueError("empty matrix")
        if any(len(r) != len(self.A[0]) for r in self.A):
            raise ValueError("ragged matrix")
        self.Lambda = [[int(x) for x in row] for row in self.Lambda]
        if any(len(row) != self.d for row in self.Lambda):
            raise ValueError("each row of Lambda needs d entries")
        nv = self.d + self.s
        for row in self.A:
            for e in row:
                if not e.is_zero() and e.nvars != nv:
                    raise ValueError(f"entries must be Laurent polynomials in {nv} variables")

    @property
    def s(self) -> int:
        return len(self.Lambda)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.A), len(self.A[0])

    def exponent_images(self, N: int) -> list[tuple[int, ...]]:
        """Images of t_1..t_{d+s} in (Z/p^N)^d."""
        if self.lambda_precision is not None and N > self.lambda_precision:
            raise ValueError(f"Lambda is only known mod p^{self.lambda_precision}; level {N} refused")
        q = self.p ** N
        basis = [tuple(int(i == j) for j in range(self.d)) for i in range(self.d)]
        return basis + [tuple(x % q for x in row) for row in self.Lambda]

    def to_json(self) -> dict:
        from .polys import format_laurent
        names = [f"t{i + 1}" for i in range(self.d + self.s)]
        return {"matrix": [[format_laurent(e, names) for e in row] for row in self.A],
                "d": self.d, "lambda": self.Lambda, "p": self.p, "field": self.field.name}


def _monomial_image(e: Sequence[int], images, q: int) -> tuple[int, ...]:
    d = len(images[0])
    return tuple(sum(k * img[i] for k, img in zip(e, images)) % q for i in range(d))


def _coef_mod(c, ell: int) -> int:
    c = Fraction(c)
    if not ell:
        raise ValueError("expected a prime modulus")
    return c.numerator * pow(c.denominator, -1, ell) % ell


def direct_nullity(inst: AtiyahInstance, N: int) -> int:
    """dim_k ker r(A_N) on k[(Z/p^N)^d]^m, by exact elimination."""
    q = inst.p ** N
    d = inst.d
    images = inst.exponent_images(N)
    order = q ** d
    ell = inst.field.characteristic
    n, m = inst.shape

    def index(v):
        i = 0
        for x in reversed(v):
            i = i * q + x
        return i

    elems = list(itertools.product(range(q), repeat=d))
    rows: list[dict] = []
    for a in range(n):
        entries = []
        for b in range(m):
            e = inst.A[a][b]
            terms = {}
            for mono, c in e.terms.items():
                g = _monomial_image(mono, images, q)
                terms[g] = terms.get(g, 0) + c
            entries.append([(g, c) for g, c in terms.items() if c])
        for x in elems:
            row: dict = {}
            for b, terms in enumerate(entries):
                for g, c in terms:
                    y = tuple((u + v) % q for u, v in zip(x, g))
                    col = b * order + index(y)
                    row[col] = row.get(col, 0) + c
            if ell:
                row = {k: _coef_mod(v, ell) for k, v in row.items()}
                row = {k: v for k, v in row.items() if v}
            else:
                row = {k: Fraction(v) for k, v in row.items() if v}
                den = lcm(*(v.denominator for v in row.values())) if row else 1
                row = {k: int(v * den) for k, v in row.items()}
            rows.append(row)
    return m * order - sparse_rank(rows, ell)


@dataclass
class AtiyahResult:
    limit: PAdicApprox
    dims: list
    checks: dict

    def to_json(self) -> dict:
        return {"limit": self.limit.to_json(),
                "levels": [{"N": N, "dim": v} for N, v in enumerate(self.dims, start=1)],
                "checks": dict(self.checks)}


def generic_rank(inst: AtiyahInstance) -> int:
    """Rank of A over the fraction field: the largest i with a nonzero i x i minor."""
    n, m = inst.shape
    rho = 0
    for k in range(1, min(n, m) + 1):
        if any(not f.is_zero() for f in _minors(inst.A, k)):
            rho = k
        else:
            break
    return rho


def atiyah_kernel_dim(inst: AtiyahInstance, depth: int, precision: int = 3,
                      window: int = DEFAULT_WINDOW) -> AtiyahResult:
    """Per-level dim ker r(A_N) for N = 1..depth and their p-adic limit.

    The generic part (n - rho) |Q_N| tends to 0 p-adically; what is left (the
    excess) carries the limit, and integrality is witnessed by the excess
    being literally constant over the trailing window.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    dims = [direct_nullity(inst, N) for N in range(1, depth + 1)]
    monotone = all(a <= b for a, b in zip(dims, dims[1:]))
    if not monotone:
        raise AssertionError(f"kernel dimensions decrease along the tower: {dims}")
    w = min(window, len(dims))
    limit = padic_limit(dims, inst.p, precision, w) if len(dims) >= 2 else PAdicApprox.unknown(inst.p)
    m = inst.shape[1]
    rho = generic_rank(inst)
    excess = [v - (m - rho) * inst.p ** (N * inst.d) for N, v in enumerate(dims, start=1)]
    constant = len(excess) >= 2 and len(set(excess[-w:])) == 1
    integral = limit.status == CONVERGED and constant and limit.agrees_with(excess[-1])
    checks = {"monotone": monotone, "generic_rank": rho, "excess": excess,
              "eventually_constant": constant, "integral": integral}
    return AtiyahResult(limit, dims, checks)


def _minors(A: list, k: int) -> list[LaurentPoly]:
    n, m = len(A), len(A[0])
    out = []
    for rs in itertools.combinations(range(n), k):
        for cs in itertools.combinations(range(m), k):
            out.append(_det([[A[r][c] for c in cs] for r in rs]))
    return out


def _det(M: list) -> LaurentPoly:
    if len(M) == 1:
        return M[0][0]
    total = None
    for j, x in enumerate(M[0]):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = x * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def character_field(k: FieldSpec, order: int):
    """A field containing the order-th roots of unity over k."""
    if k.characteristic:
        return splitting_field(k.characteristic, order)
    return CyclotomicField(order)


@dataclass
class MinorsCheck:
    ok: bool
    levels: list

    def __bool__(self):
        return self.ok


def minors_formula_check(inst: AtiyahInstance, depth: int, max_characters: int = 4096) -> MinorsCheck:
    """Sum over characters of the number of vanishing minor ideals, compared with
    the direct nullity level by level. Levels with too many characters are skipped."""
    n, m = inst.shape
    if n > 3 or m > 3:
        raise ValueError("minors check is for matrices up to 3 x 3")
    ideals = [_minors(inst.A, k) if k <= min(n, m) else [] for k in range(1, m + 1)]
    levels = []
    ok = True
    for N in range(1, depth + 1):
        q = inst.p ** N
        if q ** inst.d > max_characters:
            break
        F = character_field(inst.field, q)
        z = F.root_of_unity(q)
        powers = [F.one]
        for _ in range(1, q):
            powers.append(F.mul(powers[-1], z))
        images = inst.exponent_images(N)
        total = 0
        for a in itertools.product(range(q), repeat=inst.d):
            # eps(zeta) sends t_i to zeta^(images_i . a)
            expo = [sum(x * y for x, y in zip(img, a)) % q for img in images]
            for gens in ideals:
                if all(F.is_zero(_eval_at(f, expo, powers, q, F)) for f in gens):
                    total += 1
        direct = direct_nullity(inst, N)
        ok &= total == direct
        levels.append({"N": N, "minors": total, "direct": direct})
    return MinorsCheck(ok and bool(levels), levels)


def _eval_at(f: LaurentPoly, expo, powers, q: int, F):
    acc = F.zero
    for mono, c in f.terms.items():
        e = sum(k * x for k, x in zip(mono, expo)) % q
        acc = F.add(acc, F.mul(_coef_in(F, c), powers[e]))
    return acc


def _coef_in(F, c):
    c = Fraction(c)
    x = F.from_int(c.numerator)
    if c.denominator != 1:
        x = F.mul(x, F.inv(F.from_int(c.denominator)))
    return x


def random_instance(rng: random.Random, p: int = 2, field="F3", max_size: int = 2,
                    max_d: int = 2, max_s: int = 1, max_degree: int = 2,
                    lambda_precision: int = 3) -> AtiyahInstance:
    """Random small instance; each entry draws a coefficient for every monomial
    of total degree <= max_degree, shifted by a random unit monomial."""
    n = rng.randint(1, max_size)
    m = rng.randint(1, max_size)
    d = rng.randint(1, max_d)
    s = rng.randint(0, max_s)
    nv = d + s
    k = FieldSpec.parse(field)
    cmax = (k.characteristic - 1) if k.characteristic else 3
    monos = [e for e in itertools.product(range(max_degree + 1), repeat=nv) if sum(e) <= max_degree]
    A = []
    for _ in range(n):
        row = []
        for _ in range(m):
            shift = [rng.randint(-1, 0) for _ in range(nv)]
            terms = {tuple(a + b for a, b in zip(e, shift)): rng.randint(-cmax, cmax) for e in monos}
            row.append(LaurentPoly(terms, nv, k.characteristic))
        A.append(row)
    Lam = [[rng.randrange(p ** lambda_precision) for _ in range(d)] for _ in range(s)]
    return AtiyahInstance(A, d, Lam, p, k, lambda_precision)
