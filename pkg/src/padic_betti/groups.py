"""Finite quotient groups with generator images, and towers of them.

Elements are indexed 0..order-1 with 0 the identity. Structured groups
(abelian, semidirect) compute products by rule; small arbitrary groups are
given by multiplication tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterable, Sequence

from .arith import is_prime_power, require_prime
from .linalg import det_int, identity, mat_mul, mat_pow, smith_normal_form

MAX_TABLE_ORDER = 256


class FiniteQuotient:
    """Abstract finite group together with images of the generators of Gamma."""

    order: int
    generator_images: tuple
    name: str = "Q"

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    identity = 0

    @property
    def ngens(self) -> int:
        return len(self.generator_images)

    def is_abelian(self) -> bool:
        gens = self.generator_images
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result, base = 0, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def word_image(self, word: Iterable[tuple[int, int]]) -> int:
        """Image of a word given as (generator index, +-1) letters."""
        x = 0
        for g, e in word:
            if g >= self.ngens:
                raise ValueError(f"no image for generator {g} in {self.name}")
            img = self.generator_images[g]
            x = self.mul(x, img if e > 0 else self.inv(img))
        return x

    def right_translation(self, g: int) -> list[int]:
        """The map x -> x*g as a list."""
        return [self.mul(x, g) for x in range(self.order)]

    def closure(self, gens: Iterable[int]) -> frozenset:
        """Subgroup generated by ``gens`` (closure under right multiplication)."""
        gens = [g for g in set(gens) if g != 0]
        seen = {0}
        frontier = [0]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return frozenset(seen)

    def check_dense(self) -> None:
        """Raise unless the generator images generate the whole group."""
        if len(self.closure(self.generator_images)) != self.order:
            raise ValueError(f"generator images do not generate {self.name}: "
                             "the homomorphism must have dense image")

    def check_axioms(self) -> None:
        n = self.order
        for a in range(n):
            if self.mul(0, a) != a or self.mul(a, 0) != a:
                raise ValueError("0 is not the identity")
            if self.mul(a, self.inv(a)) != 0:
                raise ValueError(f"bad inverse for {a}")
        for a in range(n):
            for b in range(n):
                ab = self.mul(a, b)
                for c in range(n):
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)):
                        raise ValueError("multiplication is not associative")

    def to_table(self) -> list[list[int]]:
        return [[self.mul(a, b) for b in range(self.order)] for a in range(self.order)]

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} order={self.order}>"


class TableGroup(FiniteQuotient):
    """A group given by its multiplication table (row-major)."""

    def __init__(self, table: Sequence[Sequence[int]], generator_images: Sequence[int],
                 name: str = "table", check: bool = True):
        n = len(table)
        if n == 0 or n > MAX_TABLE_ORDER:
            raise ValueError(f"table groups must have order 1..{MAX_TABLE_ORDER}")
        if any(len(r) != n for r in table):
            raise ValueError("multiplication table must be square")
        self.table = [list(map(int, r)) for r in table]
        if any(not 0 <= x < n for r in self.table for x in r):
            raise ValueError("table entries out of range")
        self.order = n
        self.generator_images = tuple(int(g) for g in generator_images)
        if any(not 0 <= g < n for g in self.generator_images):
            raise ValueError("generator image out of range")
        self.name = name
        self._inv = [0] * n
        for a in range(n):
            row = self.table[a]
            try:
                self._inv[a] = row.index(0)
            except ValueError:
                raise ValueError(f"element {a} has no inverse") from None
        if check:
            self.check_axioms()
            self.check_dense()

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def with_images(self, images: Sequence[int], name: str | None = None) -> "TableGroup":
        g = TableGroup.__new__(TableGroup)
        g.table, g.order, g._inv = self.table, self.order, self._inv
        g.generator_images = tuple(images)
        g.name = name or self.name
        g.check_dense()
        return g

    @classmethod
    def from_group(cls, G: FiniteQuotient, name: str | None = None) -> "TableGroup":
        return cls(G.to_table(), G.generator_images, name or G.name, check=False)


class AbelianGroup(FiniteQuotient):
    """Z/n_1 x ... x Z/n_k; element index is the mixed-radix code of its vector."""

    def __init__(self, moduli: Sequence[int], generator_vectors: Sequence[Sequence[int]],
                 name: str | None = None, check: bool = True):
        self.moduli = tuple(int(n) for n in moduli)
        if any(n < 1 for n in self.moduli):
            raise ValueError("moduli must be positive")
        self.order = 1
        self.strides = []
        for n in self.moduli:
            self.strides.append(self.order)
            self.order *= n
        vecs = []
        for v in generator_vectors:
            v = tuple(int(x) for x in v)
            if len(v) != len(self.moduli):
                raise ValueError(f"generator vector {v} has wrong length for moduli {self.moduli}")
            vecs.append(tuple(x % n for x, n in zip(v, self.moduli)))
        self.generator_vectors = tuple(vecs)
        self.generator_images = tuple(self.index(v) for v in vecs)
        self.name = name or "x".join(f"Z/{n}" for n in self.moduli) or "1"
        if check:
            self.check_dense()

    def index(self, v: Sequence[int]) -> int:
        return sum((x % n) * s for x, n, s in zip(v, self.moduli, self.strides))

    def vector(self, i: int) -> tuple:
        out = []
        for n in self.moduli:
            out.append(i % n)
            i //= n
        return tuple(out)

    def mul(self, a, b):
        va, vb = self.vector(a), self.vector(b)
        return self.index([x + y for x, y in zip(va, vb)])

    def inv(self, a):
        return self.index([-x for x in self.vector(a)])

    def is_abelian(self) -> bool:
        return True

    def word_vector(self, word: Iterable[tuple[int, int]]) -> tuple:
        acc = [0] * len(self.moduli)
        for g, e in word:
            if g >= self.ngens:
                raise ValueError(f"no image for generator {g} in {self.name}")
            for k, x in enumerate(self.generator_vectors[g]):
                acc[k] += e * x
        return tuple(x % n for x, n in zip(acc, self.moduli))

    def word_image(self, word):
        return self.index(self.word_vector(word))

    def check_dense(self) -> None:
        k = len(self.moduli)
        if k == 0:
            return
        rows = [list(v) for v in self.generator_vectors]
        rows += [[n if i == j else 0 for j in range(k)] for i, n in enumerate(self.moduli)]
        snf = smith_normal_form(rows)
        if snf.rank != k or any(d != 1 for d in snf.divisors):
            raise ValueError(f"generator images do not generate {self.name}: "
                             "the homomorphism must have dense image")

    @property
    def exponent(self) -> int:
        e = 1
        for n in self.moduli:
            e = e * n // gcd(e, n)
        return e


class SemidirectGroup(FiniteQuotient):
    """(Z/p^n)^N x| Z/p^n with (v,i)(w,j) = (v + A^i w, i + j).

    Generator images are x_1..x_N (the basis vectors) followed by t = (0, 1).
    """

    def __init__(self, A: Sequence[Sequence[int]], p: int, n: int):
        self.N = len(A)
        self.p, self.n = p, n
        q = p ** n
        self.q = q
        self.A = [list(r) for r in A]
        self.powers = [mat_pow(self.A, i, q) for i in range(q)]
        self.order = q ** (self.N + 1)
        self.name = f"(Z/{q})^{self.N} x| Z/{q}"
        images = [self.encode([int(k == i) for k in range(self.N)], 0) for i in range(self.N)]
        images.append(self.encode([0] * self.N, 1))
        self.generator_images = tuple(images)

    def encode(self, v: Sequence[int], i: int) -> int:
        code = i % self.q
        for x in reversed(v):
            code = code * self.q + x % self.q
        return code

    def decode(self, code: int) -> tuple[list[int], int]:
        v = []
        for _ in range(self.N):
            v.append(code % self.q)
            code //= self.q
        return v, code

    def mul(self, a, b):
        v, i = self.decode(a)
        w, j = self.decode(b)
        Ai = self.powers[i]
        return self.encode([v[r] + sum(Ai[r][c] * w[c] for c in range(self.N)) for r in range(self.N)],
                           i + j)

    def inv(self, a):
        v, i = self.decode(a)
        Ainv = self.powers[(-i) % self.q]
        return self.encode([-sum(Ainv[r][c] * v[c] for c in range(self.N)) for r in range(self.N)], -i)

    def is_abelian(self) -> bool:
        return all(x % self.q == int(r == c) for r, row in enumerate(self.powers[1])
                   for c, x in enumerate(row))


def trivial_group(ngens: int) -> AbelianGroup:
    return AbelianGroup((), [()] * ngens, name="1")


# ---------------------------------------------------------------------------
# towers


@dataclass
class QuotientTower:
    """Compatible finite quotients Q_1 <- Q_2 <- ... of a common Gamma.

    ``projections[k]`` maps elements of ``levels[k+1]`` to ``levels[k]``.
    ``kernel_from`` is the level n0 from which the kernels of the maps down to
    Q_{n0} are p-groups (1-based, like ``level_numbers``).
    """

    levels: list
    projections: list
    p: int
    kernel_from: int = 1
    description: str = ""
    level_numbers: list = field(default_factory=list)

    def __post_init__(self):
        require_prime(self.p)
        if not self.levels:
            raise ValueError("a tower needs at least one level")
        if len(self.projections) != len(self.levels) - 1:
            raise ValueError("need one projection between consecutive levels")
        if not self.level_numbers:
            self.level_numbers = list(range(1, len(self.levels) + 1))
        ng = {q.ngens for q in self.levels}
        if len(ng) != 1:
            raise ValueError("all levels must carry images of the same generators")
        for a, b in zip(self.levels, self.levels[1:]):
            if b.order % a.order:
                raise ValueError("orders must divide along the tower")

    @property
    def ngens(self) -> int:
        return self.levels[0].ngens

    @property
    def depth(self) -> int:
        return len(self.levels)

    def check(self, exhaustive_limit: int = 4096) -> None:
        """Verify generator compatibility, and the homomorphism property on small levels."""
        for k, proj in enumerate(self.projections):
            lo, hi = self.levels[k], self.levels[k + 1]
            for a, b in zip(hi.generator_images, lo.generator_images):
                if proj(a) != b:
                    raise ValueError(f"projection {k + 1} does not respect generator images")
            if hi.order <= exhaustive_limit:
                for x in range(hi.order):
                    for g in hi.generator_images:
                        if proj(hi.mul(x, g)) != lo.mul(proj(x), proj(g)):
                            raise ValueError(f"projection {k + 1} is not a homomorphism")
            pk = [hi.order // lo.order]
            if self.level_numbers[k] >= self.kernel_from and not is_prime_power(pk[0], self.p):
                raise ValueError("kernel orders must be powers of p beyond the declared level")

    def truncate(self, depth: int) -> "QuotientTower":
        return QuotientTower(self.levels[:depth], self.projections[:depth - 1], self.p,
                             self.kernel_from, self.description, self.level_numbers[:depth])

    def drop(self, k: int) -> "QuotientTower":
        """The tower with its first k levels removed."""
        return QuotientTower(self.levels[k:], self.projections[k:], self.p,
                             max(self.kernel_from, self.level_numbers[k]), self.description,
                             self.level_numbers[k:])


def _abelian_projection(hi: AbelianGroup, lo: AbelianGroup) -> Callable[[int], int]:
    def proj(x):
        return lo.index(hi.vector(x))
    return proj


def _abelian_tower(groups: list, p: int, description: str) -> QuotientTower:
    projs = [_abelian_projection(b, a) for a, b in zip(groups, groups[1:])]
    return QuotientTower(groups, projs, p, 1, description)


def tower_abelian(m: int, d: int, p: int, depth: int,
                  generator_exponents: Sequence[Sequence[int]]) -> QuotientTower:
    """Levels Z/m x (Z/p^n)^d for n = 1..depth; projections reduce mod p^n."""
    require_prime(p)
    if m < 1 or gcd(m, p) != 1:
        raise ValueError("m must be coprime to p")
    if depth < 1:
        raise ValueError("depth must be positive")
    width = d + (1 if m > 1 else 0)
    vecs = []
    for v in generator_exponents:
        v = list(v)
        if m == 1 and len(v) == d + 1:
            v = v[1:]
        if len(v) != width:
            raise ValueError(f"generator vectors must have length {width}")
        vecs.append(v)
    groups = []
    for n in range(1, depth + 1):
        moduli = ([m] if m > 1 else []) + [p ** n] * d
        groups.append(AbelianGroup(moduli, vecs))
    return _abelian_tower(groups, p, f"abelian m={m} d={d} p={p}")


def tower_cyclic(m: int, p: int, depth: int, ngens: int) -> QuotientTower:
    """Every generator maps to the generator of Z/m x Z/p^n (knot groups)."""
    one = ([1] if m > 1 else []) + [1]
    return tower_abelian(m, 1, p, depth, [one] * ngens)


def tower_irrational_line(p: int, depth: int, omega) -> QuotientTower:
    """Levels Z/p^n with images (omega mod p^n, 1); ``omega`` is an int or residues."""
    require_prime(p)
    if isinstance(omega, int):
        residues = [omega % p ** n for n in range(1, depth + 1)]
    else:
        residues = [int(w) for w in omega]
        if len(residues) < depth:
            raise ValueError("need one omega residue per level")
        for n in range(1, depth):
            if (residues[n] - residues[n - 1]) % p ** n:
                raise ValueError(f"omega residues incompatible at level {n + 1}")
    groups = [AbelianGroup([p ** n], [[residues[n - 1]], [1]]) for n in range(1, depth + 1)]
    return _abelian_tower(groups, p, f"line p={p}")


def check_semidirect_matrix(A: Sequence[Sequence[int]], p: int) -> None:
    require_prime(p)
    if not A or any(len(r) != len(A) for r in A):
        raise ValueError("A must be a nonempty square matrix")
    if abs(det_int(A)) != 1:
        raise ValueError("A must be unimodular (det = +-1)")
    q = 4 if p == 2 else p
    if any((x - int(i == j)) % q for i, r in enumerate(A) for j, x in enumerate(r)):
        e = matrix_order_mod(A, q)
        raise ValueError(f"A must be congruent to the identity mod {q}; "
                         f"replace A by a power A^e = I mod p (here e = {e})")


def matrix_order_mod(A: Sequence[Sequence[int]], q: int, cap: int = 100000) -> int:
    """Smallest e >= 1 with A^e = I mod q."""
    I = identity(len(A))
    B = [[x % q for x in r] for r in A]
    P = B
    for e in range(1, cap + 1):
        if P == I:
            return e
        P = mat_mul(P, B, q)
    raise ValueError("matrix is not invertible modulo q")


def tower_semidirect(A: Sequence[Sequence[int]], p: int, depth: int) -> QuotientTower:
    check_semidirect_matrix(A, p)
    groups = [SemidirectGroup(A, p, n) for n in range(1, depth + 1)]

    def make(hi, lo):
        def proj(x):
            v, i = hi.decode(x)
            return lo.encode(v, i)
        return proj

    projs = [make(b, a) for a, b in zip(groups, groups[1:])]
    return QuotientTower(groups, projs, p, 1, f"semidirect p={p}")


def tower_constant(Q: FiniteQuotient, p: int, depth: int = 3) -> QuotientTower:
    """The same finite quotient repeated: a finite G, all kernels trivial."""
    return QuotientTower([Q] * depth, [lambda x: x] * (depth - 1), p, 1, f"constant {Q.name}")


def tower_trivial(ngens: int, p: int, depth: int = 3) -> QuotientTower:
    return tower_constant(trivial_group(ngens), p, depth)


def tower_product(t1: QuotientTower, t2: QuotientTower) -> QuotientTower:
    """Level-wise direct product; generators of the first come first."""
    if t1.p != t2.p:
        raise ValueError("towers must share p")
    depth = min(t1.depth, t2.depth)
    levels, projs = [], []
    for n in range(depth):
        a, b = t1.levels[n], t2.levels[n]
        levels.append(direct_product(a, b))
    for n in range(depth - 1):
        hi, lo = levels[n + 1], levels[n]
        pa, pb = t1.projections[n], t2.projections[n]
        levels_n = (t1.levels[n + 1].order, t1.levels[n].order)
        if isinstance(hi, AbelianGroup):
            projs.append(_abelian_projection(hi, lo))
        else:
            def proj(x, pa=pa, pb=pb, ha=levels_n[0], la=levels_n[1]):
                return pa(x % ha) + la * pb(x // ha)
            projs.append(proj)
    return QuotientTower(levels, projs, t1.p, max(t1.kernel_from, t2.kernel_from),
                         f"({t1.description}) x ({t2.description})")


def direct_product(a: FiniteQuotient, b: FiniteQuotient) -> FiniteQuotient:
    """A x B with the generators of A followed by those of B; index = x + |A|*y."""
    if isinstance(a, AbelianGroup) and isinstance(b, AbelianGroup):
        ka, kb = len(a.moduli), len(b.moduli)
        vecs = [tuple(v) + (0,) * kb for v in a.generator_vectors]
        vecs += [(0,) * ka + tuple(v) for v in b.generator_vectors]
        return AbelianGroup(a.moduli + b.moduli, vecs, f"{a.name}x{b.name}")
    na, nb = a.order, b.order
    if na * nb > MAX_TABLE_ORDER:
        raise ValueError("direct product too large for a table group")
    table = [[a.mul(x % na, y % na) + na * b.mul(x // na, y // na) for y in range(na * nb)]
             for x in range(na * nb)]
    images = list(a.generator_images) + [na * g for g in b.generator_images]
    return TableGroup(table, images, f"{a.name}x{b.name}", check=False)


# ---------------------------------------------------------------------------
# subgroups, quotients and the Frattini series


def require_p_group(G: FiniteQuotient, p: int) -> None:
    require_prime(p)
    if not is_prime_power(G.order, p):
        raise ValueError(f"{G.name} is not a {p}-group (order {G.order})")


def frattini_of_subset(G: FiniteQuotient, H: frozenset, p: int) -> frozenset:
    """Phi(H) = H^p [H, H] for a subgroup H of G (computed inside G)."""
    gens = {G.power(h, p) for h in H}
    Hl = list(H)
    for a in Hl:
        ia = G.inv(a)
        for b in Hl:
            gens.add(G.mul(G.mul(ia, G.inv(b)), G.mul(a, b)))
    return G.closure(gens)


def frattini_series(G: FiniteQuotient, p: int, H: frozenset | None = None) -> list[frozenset]:
    """[H, Phi(H), Phi^2(H), ..., {1}]."""
    require_p_group(G, p)
    cur = frozenset(range(G.order)) if H is None else frozenset(H)
    series = [cur]
    while len(cur) > 1:
        cur = frattini_of_subset(G, cur, p)
        series.append(cur)
    return series


def quotient_group(G: FiniteQuotient, N: frozenset, name: str | None = None) -> tuple[TableGroup, list[int]]:
    """G/N for normal N, with the coset map G -> G/N (identity coset = 0)."""
    if not is_normal(G, N):
        raise ValueError("subgroup is not normal")
    coset = [-1] * G.order
    reps = []
    for x in range(G.order):
        if coset[x] < 0:
            cid = len(reps)
            reps.append(x)
            for n in N:
                coset[G.mul(x, n)] = cid
    k = len(reps)
    table = [[coset[G.mul(reps[a], reps[b])] for b in range(k)] for a in range(k)]
    images = [coset[g] for g in G.generator_images]
    return TableGroup(table, images, name or f"{G.name}/N", check=False), coset


def is_normal(G: FiniteQuotient, H: frozenset) -> bool:
    gens = G.generator_images or range(G.order)
    for g in gens:
        gi = G.inv(g)
        for h in H:
            if G.mul(G.mul(gi, h), g) not in H:
                return False
    return True


def frattini_subgroup(Q: FiniteQuotient, p: int) -> tuple[frozenset, TableGroup]:
    """Phi(Q) as an element set, and the elementary abelian quotient Q/Phi(Q)."""
    require_p_group(Q, p)
    phi = frattini_of_subset(Q, frozenset(range(Q.order)), p)
    quo, _ = quotient_group(Q, phi, f"{Q.name}/Phi")
    return phi, quo


def frattini_length(Q: FiniteQuotient, p: int, H: frozenset | None = None) -> int:
    """F(Q): number of Frattini steps down to the trivial group."""
    return len(frattini_series(Q, p, H)) - 1


def tower_frattini(Q_top: FiniteQuotient, p: int) -> QuotientTower:
    """Q/Phi^n(Q) for n = 1..F(Q), ending with Q itself."""
    require_p_group(Q_top, p)
    if isinstance(Q_top, AbelianGroup):
        # Phi^n of a finite abelian p-group is p^n G
        F = max((v for v in (_vp_or0(n, p) for n in Q_top.moduli)), default=0)
        if F == 0:
            raise ValueError("the trivial group has an empty Frattini tower")
        groups = []
        for n in range(1, F + 1):
            moduli = [gcd(q, p ** n) for q in Q_top.moduli]
            groups.append(AbelianGroup(moduli, Q_top.generator_vectors, check=False))
        return _abelian_tower(groups, p, f"frattini {Q_top.name}")
    series = frattini_series(Q_top, p)
    F = len(series) - 1
    if F == 0:
        raise ValueError("the trivial group has an empty Frattini tower")
    levels, maps = [], []
    for n in range(1, F + 1):
        quo, coset = quotient_group(Q_top, series[n], f"{Q_top.name}/Phi^{n}")
        levels.append(quo)
        maps.append(coset)
    projs = []
    for n in range(F - 1):
        hi_map, lo_map = maps[n + 1], maps[n]
        table = {}
        for x in range(Q_top.order):
            table[hi_map[x]] = lo_map[x]
        projs.append(lambda x, table=table: table[x])
    return QuotientTower(levels, projs, p, 1, f"frattini {Q_top.name}")


def _vp_or0(n: int, p: int) -> int:
    v = 0
    while n % p == 0 and n > 1:
        n //= p
        v += 1
    return v


def all_subgroups(G: FiniteQuotient) -> list[frozenset]:
    """Every subgroup, by joining cyclic subgroups (fine for orders <= ~100)."""
    cyclic = {}
    for x in range(G.order):
        c = G.closure([x])
        cyclic.setdefault(c, x)
    subs = {frozenset([0])}
    frontier = [frozenset([0])]
    while frontier:
        new = []
        for H in frontier:
            for C, x in cyclic.items():
                if C <= H:
                    continue
                K = G.closure(list(_gens_of(G, H)) + [x])
                if K not in subs:
                    subs.add(K)
                    new.append(K)
        frontier = new
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


def _gens_of(G: FiniteQuotient, H: frozenset) -> list[int]:
    gens: list[int] = []
    span = frozenset([0])
    for h in sorted(H):
        if h not in span:
            gens.append(h)
            span = G.closure(gens)
            if len(span) == len(H):
                break
    return gens


def subgroup_as_group(G: FiniteQuotient, H: frozenset, name: str = "H") -> TableGroup:
    elems = sorted(H)
    index = {x: i for i, x in enumerate(elems)}
    table = [[index[G.mul(a, b)] for b in elems] for a in elems]
    gens = [index[g] for g in _gens_of(G, H)]
    return TableGroup(table, gens, name, check=False)


# ---------------------------------------------------------------------------
# named small groups


def cyclic_group(n: int) -> AbelianGroup:
    return AbelianGroup([n], [[1]], name=f"C{n}")


def abelian_p_group(p: int, partition: Sequence[int]) -> AbelianGroup:
    moduli = [p ** k for k in partition]
    vecs = [[int(i == j) for j in range(len(moduli))] for i in range(len(moduli))]
    name = "x".join(f"C{m}" for m in moduli) or "1"
    return AbelianGroup(moduli, vecs, name=name)


def partitions(n: int, largest: int | None = None) -> list[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return out


def dihedral_group(n: int) -> TableGroup:
    """D_n of order 2n: element r^a s^b has index a + n*b."""
    def mul(x, y):
        a, b = x % n, x // n
        c, d = y % n, y // n
        a2 = (a + (c if b == 0 else -c)) % n
        return a2 + n * ((b + d) % 2)
    table = [[mul(x, y) for y in range(2 * n)] for x in range(2 * n)]
    return TableGroup(table, [1, n], name=f"D{n}")


def quaternion_group() -> TableGroup:
    # elements ±1, ±i, ±j, ±k as (sign, unit) with unit in 1,i,j,k
    units = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
             ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
             ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}
    elems = [(s, u) for s in (1, -1) for u in "1ijk"]
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = units[(u1, u2)]
            row.append(index[(s1 * s2 * s, u)])
        table.append(row)
    return TableGroup(table, [index[(1, "i")], index[(1, "j")]], name="Q8")


def heisenberg_group(p: int) -> TableGroup:
    """Upper unitriangular 3x3 matrices over F_p: (a, b, c) = [[1,a,c],[0,1,b],[0,0,1]]."""
    def code(a, b, c):
        return a % p + p * (b % p) + p * p * (c % p)
    elems = [(a, b, c) for c in range(p) for b in range(p) for a in range(p)]
    table = [[code(a + x, b + y, c + z + a * y) for (x, y, z) in elems] for (a, b, c) in elems]
    return TableGroup(table, [code(1, 0, 0), code(0, 1, 0)], name=f"Heis({p})")


def named_group(name: str) -> FiniteQuotient:
    """C<n>, D4, D<n>, Q8, Heis<p>, or abelian types like C2xC4."""
    s = name.strip()
    if s == "Q8":
        return quaternion_group()
    if s.startswith("Heis"):
        return heisenberg_group(int(s[4:]))
    if s.startswith("D") and s[1:].isdigit():
        return dihedral_group(int(s[1:]))
    parts = s.split("x")
    if all(part.startswith("C") and part[1:].isdigit() for part in parts):
        moduli = [int(part[1:]) for part in parts]
        vecs = [[int(i == j) for j in range(len(moduli))] for i in range(len(moduli))]
        return AbelianGroup(moduli, vecs, name=s)
    raise ValueError(f"unknown group name {name!r}")


def p_group_corpus(p: int, max_exponent: int = 4) -> list[FiniteQuotient]:
    """All abelian p-groups of order <= p^max_exponent as tables, plus small non-abelian ones."""
    out: list[FiniteQuotient] = []
    for k in range(0, max_exponent + 1):
        for part in partitions(k):
            if part:
                out.append(TableGroup.from_group(abelian_p_group(p, part)))
            else:
                out.append(TableGroup([[0]], [], name="1", check=False))
    if p == 2:
        out += [dihedral_group(4), quaternion_group()]
    if p == 3:
        out.append(heisenberg_group(3))
    return out


# ---------------------------------------------------------------------------
# JSON tower specifications


def tower_from_spec(spec: dict, ngens: int | None = None) -> QuotientTower:
    kind = spec.get("kind")
    try:
        if kind == "abelian":
            p, depth = int(spec["p"]), int(spec.get("depth", 3))
            m, d = int(spec.get("m", 1)), spec.get("d")
            images = spec.get("generator_images")
            if d is None:
                d = len(images[0]) - (1 if m > 1 else 0) if images else ngens
            d = int(d)
            if images is None:
                if ngens != d:
                    raise ValueError("generator_images required unless d equals the generator count")
                images = [[int(i == j) for j in range(d)] for i in range(d)]
                if m > 1:
                    images = [[1] + v for v in images]
            return tower_abelian(m, d, p, depth, images)
        if kind == "cyclic":
            return tower_cyclic(int(spec.get("m", 1)), int(spec["p"]), int(spec.get("depth", 3)),
                                int(spec.get("ngens", ngens)))
        if kind == "line":
            omega = spec.get("omega", spec.get("omega_residues"))
            return tower_irrational_line(int(spec["p"]), int(spec.get("depth", 3)), omega)
        if kind == "semidirect":
            return tower_semidirect(spec["matrix"], int(spec["p"]), int(spec.get("depth", 2)))
        if kind == "frattini":
            p = int(spec["p"])
            if "group" in spec:
                G = named_group(spec["group"])
                if "generator_images" in spec:
                    G = TableGroup.from_group(G).with_images(spec["generator_images"])
            else:
                G = TableGroup(spec["table"], spec["generator_images"])
            return tower_frattini(G, p)
        if kind == "trivial":
            return tower_trivial(int(spec.get("ngens", ngens)), int(spec.get("p", 2)),
                                 int(spec.get("depth", 3)))
        if kind == "table":
            p = int(spec["p"])
            levels = [TableGroup(lv["table"], lv["generator_images"]) for lv in spec["levels"]]
            maps = spec.get("projections", [])
            projs = [lambda x, m=m: m[x] for m in maps]
            return QuotientTower(levels, projs, p, int(spec.get("kernel_from", 1)), "table")
    except KeyError as exc:
        raise ValueError(f"tower spec of kind {kind!r} is missing field {exc.args[0]!r}") from None
    raise ValueError(f"unknown tower kind {kind!r}")
