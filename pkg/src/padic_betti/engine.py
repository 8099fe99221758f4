"""Betti numbers and torsion of finite covers, and their p-adic limits.

At a finite level Q = Gamma / Gamma_n the cochain complex of the cover is
C(Q, k)^{e_j} with coboundary r(A_{j+1}), so

    b_j = e_j |Q| - rank r(A_{j+1}) - rank r(A_j).

Ranks come from one of two routes: the character route for structured abelian
quotients (see :mod:`padic_betti.characters`) and the direct route, which
materializes the sparse matrix of r(A_j) and eliminates it exactly.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .arith import require_prime
from .characters import character_ranks
from .complexes import ChainComplexSpec, check_composition, reduce_matrix
from .groups import AbelianGroup, FiniteQuotient, QuotientTower
from .linalg import smith_normal_form, sparse_rank, torsion_card_pprime
from .padic import DEFAULT_WINDOW, PAdicApprox, PAdicIndex, padic_limit

DEFAULT_MAX_DIM = 20000
METHODS = ("auto", "characters", "direct")


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: Q (characteristic 0) or F_ell."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic:
            require_prime(self.characteristic, "field characteristic")

    @classmethod
    def parse(cls, text: str | int | "FieldSpec") -> "FieldSpec":
        if isinstance(text, FieldSpec):
            return text
        if isinstance(text, int):
            return cls(text)
        s = str(text).strip().upper().replace("_", "").replace("GF(", "F").rstrip(")")
        if s in ("Q", "QQ", "0"):
            return cls(0)
        if s.startswith("F") and s[1:].isdigit():
            return cls(int(s[1:]))
        raise ValueError(f"cannot parse field {text!r}; use Q or F<prime>")

    @property
    def name(self) -> str:
        return f"F{self.characteristic}" if self.characteristic else "Q"

    def check_against(self, p: int) -> None:
        if self.characteristic == p:
            raise ValueError("coefficient characteristic must differ from p")


QQ = FieldSpec(0)


def _choose_method(Q: FiniteQuotient, k: FieldSpec, method: str) -> str:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method != "auto":
        return method
    if isinstance(Q, AbelianGroup) and (k.characteristic == 0 or Q.order % k.characteristic):
        return "characters"
    return "direct"


def boundary_ranks(c: ChainComplexSpec, Q: FiniteQuotient, k: FieldSpec, degrees: Sequence[int],
                   method: str = "auto", max_dim: int = DEFAULT_MAX_DIM) -> dict[int, int]:
    """rank_k r(A_j) for each requested j (0 for boundaries that do not exist)."""
    if Q.ngens != c.ngens:
        raise ValueError(f"quotient has {Q.ngens} generator images but the complex has "
                         f"{c.ngens} generators")
    out = {j: 0 for j in degrees}
    present = {j: c.boundary(j) for j in degrees if c.boundary(j) is not None}
    present = {j: A for j, A in present.items() if A and A[0]}
    if not present:
        return out
    route = _choose_method(Q, k, method)
    if route == "characters":
        if not isinstance(Q, AbelianGroup):
            raise ValueError("the character route needs a structured abelian quotient")
        out.update(character_ranks(present, Q, k.characteristic).ranks)
        return out
    check_composition(c, Q, [j for j in present if j + 1 in present])
    for j, A in present.items():
        size = max(len(A), len(A[0])) * Q.order
        if size > max_dim:
            raise ValueError(f"level matrix of size {size} exceeds the direct-route budget {max_dim}")
        rows = reduce_matrix(A, Q, k.characteristic)
        out[j] = sparse_rank(rows, k.characteristic)
    return out


def betti_at_level(c: ChainComplexSpec, Q: FiniteQuotient, k: FieldSpec | str, j: int,
                   p: int | None = None, method: str = "auto",
                   max_dim: int = DEFAULT_MAX_DIM) -> int:
    """dim_k H^j of the cover with deck group Q."""
    k = FieldSpec.parse(k)
    if p is not None:
        k.check_against(p)
    if not 0 <= j <= c.max_degree():
        raise ValueError(f"degree {j} is outside 0..{c.max_degree()} for {c.name}")
    r = boundary_ranks(c, Q, k, [j, j + 1], method, max_dim)
    return c.rank(j) * Q.order - r[j + 1] - r[j]


def torsion_at_level(c: ChainComplexSpec, Q: FiniteQuotient, p: int, j: int,
                     max_dim: int = DEFAULT_MAX_DIM) -> int:
    """|tors H^j(cover; Z[1/p])| from the invariant factors of r(A_j) over Z."""
    require_prime(p)
    if not 0 <= j <= c.max_degree():
        raise ValueError(f"degree {j} is outside 0..{c.max_degree()} for {c.name}")
    if Q.ngens != c.ngens:
        raise ValueError("generator count mismatch between quotient and complex")
    A = c.boundary(j)
    if j == 0 or not A or not A[0]:
        return 1
    size = max(len(A), len(A[0])) * Q.order
    if size > max_dim:
        raise ValueError(f"level matrix of size {size} exceeds the direct-route budget {max_dim}")
    snf = smith_normal_form(reduce_matrix(A, Q))
    return torsion_card_pprime(snf.divisors, p)


# ---------------------------------------------------------------------------
# sequences along towers


@dataclass(frozen=True)
class Request:
    """What to compute per level: betti(j, field), torsion(j) or euler."""

    kind: str
    degree: int = 0
    field: FieldSpec = QQ

    def __post_init__(self):
        if self.kind not in ("betti", "torsion", "euler"):
            raise ValueError(f"unknown request kind {self.kind!r}")

    @property
    def label(self) -> str:
        if self.kind == "betti":
            return f"betti({self.degree},{self.field.name})"
        if self.kind == "torsion":
            return f"torsion({self.degree})"
        return "euler"


@dataclass(frozen=True)
class LevelValue:
    n: int
    order: int
    value: int


@dataclass
class InvariantSequence:
    request: Request
    p: int
    levels: list
    limit: PAdicApprox
    checks: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return self.request.label

    @property
    def values(self) -> list[int]:
        return [lv.value for lv in self.levels]

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "levels": [{"n": lv.n, "order": lv.order, "value": lv.value} for lv in self.levels],
                "limit": self.limit.to_json(), "checks": dict(self.checks)}


def _level_value(args):
    c, Q, req, method, max_dim, p = args
    if req.kind == "betti":
        return betti_at_level(c, Q, req.field, req.degree, p, method, max_dim)
    if req.kind == "torsion":
        return torsion_at_level(c, Q, p, req.degree, max_dim)
    # euler: alternating sum of all Betti numbers, checked against |Q| chi
    degrees = list(range(c.dimension + 1))
    r = boundary_ranks(c, Q, QQ, degrees + [c.dimension + 1], method, max_dim)
    total = sum((-1) ** j * (c.rank(j) * Q.order - r.get(j + 1, 0) - r[j]) for j in degrees)
    if total != Q.order * c.euler_characteristic():
        raise AssertionError("Euler characteristic identity failed")
    return total


def _jobs() -> int:
    try:
        return max(1, int(os.environ.get("PADIC_JOBS", "1")))
    except ValueError:
        return 1


def level_values(c: ChainComplexSpec, tower: QuotientTower, req: Request,
                 method: str = "auto", max_dim: int = DEFAULT_MAX_DIM) -> list[LevelValue]:
    tasks = [(c, Q, req, method, max_dim, tower.p) for Q in tower.levels]
    jobs = min(_jobs(), len(tasks))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            values = list(ex.map(_level_value, tasks))
    else:
        values = [_level_value(t) for t in tasks]
    return [LevelValue(n, Q.order, v) for n, Q, v in zip(tower.level_numbers, tower.levels, values)]


def approximate(c: ChainComplexSpec, tower: QuotientTower, request: Request, p: int | None = None,
                precision: int = 3, window: int = DEFAULT_WINDOW, method: str = "auto",
                max_dim: int = DEFAULT_MAX_DIM) -> InvariantSequence:
    """Per-level invariants along the tower and their p-adic limit."""
    p = tower.p if p is None else require_prime(p)
    if p != tower.p:
        raise ValueError("p does not match the tower")
    if request.kind == "betti":
        request.field.check_against(p)
        if request.degree > c.max_degree():
            raise ValueError(f"degree {request.degree} needs cells above dimension {c.dimension}; "
                             "mark the complex complete if it is the whole space")
    if request.kind == "euler" and not c.complete:
        raise ValueError("the Euler characteristic needs a complete complex")
    if tower.ngens != c.ngens:
        raise ValueError(f"tower has {tower.ngens} generator images but the complex has "
                         f"{c.ngens} generators")
    levels = level_values(c, tower, request, method, max_dim)
    checks: dict = {}
    if request.kind == "betti":
        vals = [(lv.n, lv.value) for lv in levels if lv.n >= tower.kernel_from]
        for (n0, a), (n1, b) in zip(vals, vals[1:]):
            if b < a:
                raise AssertionError(f"Betti numbers decreased from level {n0} to {n1} "
                                     "along a p-kernel tower")
        checks["monotone"] = True
    if request.kind == "euler":
        checks["euler"] = True
    limit = padic_limit([lv.value for lv in levels], p, precision, window)
    return InvariantSequence(request, p, levels, limit, checks)


def euler_padic(c: ChainComplexSpec, tower: QuotientTower, p: int | None = None, precision: int = 3,
                window: int = DEFAULT_WINDOW, cross_check: bool = True,
                method: str = "auto") -> PAdicApprox:
    """Limit of |Q_n| chi(X); optionally checked against the alternating sum of Betti limits."""
    p = tower.p if p is None else p
    if not c.complete:
        raise ValueError("the Euler characteristic needs a complete complex")
    chi = c.euler_characteristic()
    limit = padic_limit([Q.order * chi for Q in tower.levels], p, precision, window)
    if cross_check:
        parts = [approximate(c, tower, Request("betti", j), p, precision, window, method).limit
                 for j in range(c.dimension + 1)]
        if limit.converged and all(x.converged for x in parts):
            m = min([limit.precision] + [x.precision for x in parts])
            alt = sum((-1) ** j * x.residue for j, x in enumerate(parts))
            if (alt - limit.residue) % p ** m:
                raise AssertionError("Euler limit disagrees with the alternating Betti limits")
    return limit


def wedge_predicted_b1(b1_parts: Sequence[PAdicApprox], indices: Sequence[PAdicIndex],
                       order: PAdicApprox) -> PAdicApprox:
    """1 + ||G|| - sum ||G:K_i|| + sum ||G:K_i|| b_1(X_i), evaluated mod p^N."""
    if len(b1_parts) != len(indices):
        raise ValueError("need one index per wedge summand")
    vals = list(b1_parts) + [ix.value for ix in indices] + [order]
    p = order.prime
    if any(v.prime != p for v in vals):
        raise ValueError("all inputs must share p")
    if not all(v.converged for v in vals):
        return PAdicApprox.unknown(p)
    N = min(v.precision for v in vals)
    total = 1 + order.residue
    for b, ix in zip(b1_parts, indices):
        total += -ix.value.residue + ix.value.residue * b.residue
    return PAdicApprox(p, N, total % p ** N)


# ---------------------------------------------------------------------------
# p-adic cardinality of G-set towers


@dataclass
class GSetTower:
    """Finite sets X_n = {0..size-1} with an action of Gamma's generators (one
    permutation per generator, as image lists), optionally with equivariant
    inclusions ``inclusions[n]: X_n -> X_{n+1}``."""

    set_sizes: list
    actions: list
    inclusions: list | None = None

    def __post_init__(self):
        if len(self.set_sizes) != len(self.actions):
            raise ValueError("need one action per level")
        for k, (n, acts) in enumerate(zip(self.set_sizes, self.actions)):
            for a in acts:
                if sorted(a) != list(range(n)):
                    raise ValueError(f"level {k + 1}: a generator does not act by a permutation")

    @classmethod
    def constant(cls, size: int, ngens: int, depth: int) -> "GSetTower":
        ident = list(range(size))
        return cls([size] * depth, [[ident] * ngens for _ in range(depth)], [ident] * (depth - 1))

    @classmethod
    def regular(cls, tower: QuotientTower) -> "GSetTower":
        """Q_n acting on itself by left multiplication (no equivariant inclusions exist)."""
        acts = [[[Q.mul(g, x) for x in range(Q.order)] for g in Q.generator_images]
                for Q in tower.levels]
        return cls([Q.order for Q in tower.levels], acts, None)

    def check(self) -> None:
        if self.inclusions is None:
            return
        if len(self.inclusions) != len(self.actions) - 1:
            raise ValueError("need one inclusion between consecutive levels")
        for k, inc in enumerate(self.inclusions):
            if len(inc) != self.set_sizes[k] or len(set(inc)) != len(inc):
                raise ValueError(f"inclusion {k + 1} is not injective")
            if any(not 0 <= y < self.set_sizes[k + 1] for y in inc):
                raise ValueError(f"inclusion {k + 1} leaves the next level")
            for a_lo, a_hi in zip(self.actions[k], self.actions[k + 1]):
                for x in range(len(inc)):
                    if inc[a_lo[x]] != a_hi[inc[x]]:
                        raise ValueError(f"inclusion {k + 1} is not equivariant")

    def disjoint_union(self, other: "GSetTower") -> "GSetTower":
        acts = []
        for n, A, B in zip(self.set_sizes, self.actions, other.actions):
            acts.append([list(a) + [n + y for y in b] for a, b in zip(A, B)])
        incs = None
        if self.inclusions is not None and other.inclusions is not None:
            incs = []
            for k, (i1, i2) in enumerate(zip(self.inclusions, other.inclusions)):
                n_hi = self.set_sizes[k + 1]
                incs.append(list(i1) + [n_hi + y for y in i2])
        sizes = [a + b for a, b in zip(self.set_sizes, other.set_sizes)]
        return GSetTower(sizes, acts, incs)

    def product(self, other: "GSetTower") -> "GSetTower":
        acts = []
        for n, m, A, B in zip(self.set_sizes, other.set_sizes, self.actions, other.actions):
            acts.append([[a[x] * m + b[y] for x in range(n) for y in range(m)]
                         for a, b in zip(A, B)])
        incs = None
        if self.inclusions is not None and other.inclusions is not None:
            incs = []
            for k, (i1, i2) in enumerate(zip(self.inclusions, other.inclusions)):
                m_hi = other.set_sizes[k + 1]
                incs.append([i1[x] * m_hi + i2[y] for x in range(len(i1)) for y in range(len(i2))])
        sizes = [a * b for a, b in zip(self.set_sizes, other.set_sizes)]
        return GSetTower(sizes, acts, incs)

    def sizes(self) -> list[int]:
        return list(self.set_sizes)


def padic_cardinality(ts: GSetTower, p: int, precision: int = 3,
                      window: int = DEFAULT_WINDOW) -> PAdicApprox:
    """p-adic limit of the fixed-point counts |X^{N_n}| = |X_n|."""
    ts.check()
    return padic_limit(ts.sizes(), p, precision, window)
