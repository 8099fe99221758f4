"""Cellular chain complexes over Z[Gamma] and their builders.

A complex is given by ranks e_0..e_d and matrices A_j (shape e_j x e_{j-1})
whose entries are integral combinations of words in the generators of Gamma.
Words are tuples of letters ``(generator, +1 | -1)`` kept freely reduced; the
group relations only take effect when a matrix is pushed through a finite
quotient by :func:`reduce_matrix`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .groups import FiniteQuotient

Word = tuple  # tuple[tuple[int, int], ...]


def reduce_word(letters: Iterable[tuple[int, int]]) -> Word:
    out: list = []
    for g, e in letters:
        if e not in (1, -1):
            raise ValueError("letters carry exponent +1 or -1")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def invert_word(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


class GroupAlgebraElement:
    """Finite Z-combination of reduced words."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean: dict = {}
        for w, c in (terms or {}).items():
            w = reduce_word(w)
            clean[w] = clean.get(w, 0) + int(c)
        self.terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def one(cls) -> "GroupAlgebraElement":
        return cls({(): 1})

    @classmethod
    def zero(cls) -> "GroupAlgebraElement":
        return cls()

    @classmethod
    def gen(cls, i: int, e: int = 1) -> "GroupAlgebraElement":
        return cls({((i, e),): 1})

    @classmethod
    def word(cls, w: Iterable[tuple[int, int]], c: int = 1) -> "GroupAlgebraElement":
        return cls({tuple(w): c})

    def _coerce(self, other):
        if isinstance(other, GroupAlgebraElement):
            return other
        return GroupAlgebraElement({(): int(other)})

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
        return GroupAlgebraElement(t)

    __radd__ = __add__

    def __neg__(self):
        return GroupAlgebraElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t: dict = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = reduce_word(u + v)
                t[w] = t.get(w, 0) + a * b
        return GroupAlgebraElement(t)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __eq__(self, other):
        return isinstance(other, GroupAlgebraElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def shift_generators(self, offset: int) -> "GroupAlgebraElement":
        return GroupAlgebraElement({tuple((g + offset, e) for g, e in w): c
                                    for w, c in self.terms.items()})

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items()):
            ws = format_word(w, names)
            parts.append(f"{c}" if not w else (ws if c == 1 else f"-{ws}" if c == -1 else f"{c}*{ws}"))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"GroupAlgebraElement({self.format()!r})"


def format_word(w: Word, names: Sequence[str] | None = None) -> str:
    if not w:
        return "1"
    out = []
    for g, e in w:
        n = names[g] if names else f"g{g + 1}"
        out.append(n if e > 0 else (n.upper() if n.upper() != n else f"{n}^-1"))
    return " ".join(out)


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse ``"a b A"`` (capitals invert) or ``"a^2 b^-1"`` into a reduced word."""
    index = {n: i for i, n in enumerate(names)}
    letters = []
    for tok in text.split():
        if tok == "1":
            continue
        base, _, exp = tok.partition("^")
        power = int(exp) if exp else 1
        if base in index:
            g, sign = index[base], 1
        elif base.lower() in index and base != base.lower():
            g, sign = index[base.lower()], -1
        else:
            raise ValueError(f"unknown generator {base!r} in word {text!r}")
        e = sign * (1 if power > 0 else -1)
        letters.extend([(g, e)] * abs(power))
    return reduce_word(letters)


def fox_derivative(w: Word, i: int) -> GroupAlgebraElement:
    """Left Fox derivative d w / d g_i: d(uv) = du + u dv."""
    terms: dict = {}
    prefix: list = []
    for g, e in reduce_word(w):
        if g == i:
            if e > 0:
                key = reduce_word(prefix)
                terms[key] = terms.get(key, 0) + 1
            else:
                key = reduce_word(prefix + [(g, -1)])
                terms[key] = terms.get(key, 0) - 1
        prefix.append((g, e))
    return GroupAlgebraElement(terms)


@dataclass
class ChainComplexSpec:
    """Free Z[Gamma] chain complex: ranks e_0..e_d and boundaries A_1..A_d.

    ``boundaries[j-1]`` is A_j with shape e_j x e_{j-1}. ``complete`` marks a
    complex that is the whole space (no missing cells above dimension d).
    """

    ranks: list
    boundaries: list
    generators: list
    complete: bool = True
    name: str = "X"

    def __post_init__(self):
        self.ranks = [int(e) for e in self.ranks]
        if not self.ranks or any(e < 0 for e in self.ranks):
            raise ValueError("ranks must be nonnegative and nonempty")
        if len(self.boundaries) != len(self.ranks) - 1:
            raise ValueError(f"need {len(self.ranks) - 1} boundary matrices")
        for j, A in enumerate(self.boundaries, start=1):
            if len(A) != self.ranks[j] or any(len(r) != self.ranks[j - 1] for r in A):
                raise ValueError(f"boundary A_{j} must have shape {self.ranks[j]}x{self.ranks[j - 1]}")
            for r in A:
                for x in r:
                    if not isinstance(x, GroupAlgebraElement):
                        raise TypeError("boundary entries must be GroupAlgebraElements")
                    for w in x.terms:
                        if any(g >= len(self.generators) for g, _ in w):
                            raise ValueError(f"A_{j} uses an undeclared generator")

    @property
    def dimension(self) -> int:
        return len(self.ranks) - 1

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def rank(self, j: int) -> int:
        return self.ranks[j] if 0 <= j < len(self.ranks) else 0

    def boundary(self, j: int):
        """A_j, or None outside 1..d."""
        if 1 <= j <= self.dimension:
            return self.boundaries[j - 1]
        return None

    def euler_characteristic(self) -> int:
        return sum((-1) ** j * e for j, e in enumerate(self.ranks))

    def max_degree(self) -> int:
        """Highest degree whose cohomology is determined by the cells present."""
        return self.dimension if self.complete else self.dimension - 1

    def to_json(self) -> dict:
        bnds = []
        for A in self.boundaries:
            bnds.append([[[[format_word(w, self.generators), c] for w, c in sorted(x.terms.items())]
                          for x in row] for row in A])
        return {"ranks": self.ranks, "generators": list(self.generators),
                "boundaries": bnds, "complete": self.complete, "name": self.name}

    @classmethod
    def from_json(cls, data: dict) -> "ChainComplexSpec":
        try:
            names = list(data.get("generators", []))
            ranks = data["ranks"]
            bnds = []
            for j, A in enumerate(data.get("boundaries", []), start=1):
                mat = []
                for r, row in enumerate(A):
                    entries = []
                    for c, entry in enumerate(row):
                        terms: dict = {}
                        for pair in entry:
                            w = parse_word(pair[0], names)
                            terms[w] = terms.get(w, 0) + int(pair[1])
                        entries.append(GroupAlgebraElement(terms))
                    mat.append(entries)
                bnds.append(mat)
            return cls(ranks, bnds, names, bool(data.get("complete", True)), data.get("name", "X"))
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed complex description: {exc}") from None


# ---------------------------------------------------------------------------
# builders


def _gae(x) -> GroupAlgebraElement:
    return x if isinstance(x, GroupAlgebraElement) else GroupAlgebraElement({(): int(x)})


def complex_from_presentation(generators: Sequence[str], relators: Sequence[Word],
                              complete: bool = True, name: str = "presentation") -> ChainComplexSpec:
    """Presentation complex: one 0-cell, a 1-cell per generator, a 2-cell per relator."""
    s = len(generators)
    A1 = [[GroupAlgebraElement.gen(i) - 1] for i in range(s)]
    if not relators:
        return ChainComplexSpec([1, s], [A1], list(generators), complete, name)
    A2 = [[fox_derivative(r, i) for i in range(s)] for r in relators]
    return ChainComplexSpec([1, s, len(relators)], [A1, A2], list(generators), complete, name)


def presentation_from_strings(generators: Sequence[str], relators: Sequence[str],
                              name: str = "presentation") -> ChainComplexSpec:
    return complex_from_presentation(generators, [parse_word(r, generators) for r in relators],
                                     name=name)


def complex_torus(d: int, names: Sequence[str] | None = None) -> ChainComplexSpec:
    """Koszul complex of Z[t_1^{+-1},...,t_d^{+-1}]: d e_S = sum_k (-1)^k (t_{s_k} - 1) e_{S - s_k}."""
    if d < 1:
        raise ValueError("torus dimension must be at least 1")
    names = list(names) if names else (["t"] if d == 1 else [f"t{i + 1}" for i in range(d)])
    cells = [list(itertools.combinations(range(d), j)) for j in range(d + 1)]
    index = [{S: k for k, S in enumerate(cs)} for cs in cells]
    bnds = []
    for j in range(1, d + 1):
        A = [[GroupAlgebraElement() for _ in cells[j - 1]] for _ in cells[j]]
        for r, S in enumerate(cells[j]):
            for k, s in enumerate(S):
                face = S[:k] + S[k + 1:]
                A[r][index[j - 1][face]] = (-1) ** k * (GroupAlgebraElement.gen(s) - 1)
        bnds.append(A)
    return ChainComplexSpec([len(c) for c in cells], bnds, names, True, f"T^{d}")


def complex_circle(name: str = "t") -> ChainComplexSpec:
    c = complex_torus(1, [name])
    c.name = "S^1"
    return c


def complex_point() -> ChainComplexSpec:
    return ChainComplexSpec([1], [], [], True, "point")


def complex_sphere(n: int) -> ChainComplexSpec:
    """S^n (n >= 2) with one 0-cell and one n-cell; S^1 is the circle."""
    if n == 1:
        return complex_circle()
    if n < 1:
        raise ValueError("sphere dimension must be positive")
    ranks = [1] + [0] * (n - 1) + [1]
    bnds = [[[GroupAlgebraElement() for _ in range(ranks[j - 1])] for _ in range(ranks[j])]
            for j in range(1, n + 1)]
    return ChainComplexSpec(ranks, bnds, [], True, f"S^{n}")


def _unique_names(a: Sequence[str], b: Sequence[str]) -> list[str]:
    out = list(a)
    for n in b:
        cand = n
        k = 2
        while cand in out:
            cand = f"{n}{k}"
            k += 1
        out.append(cand)
    return out


def complex_wedge(c1: ChainComplexSpec, c2: ChainComplexSpec) -> ChainComplexSpec:
    """Wedge at the base vertex; Gamma becomes the free product."""
    if c1.rank(0) != 1 or c2.rank(0) != 1:
        raise ValueError("wedge requires based complexes")
    off = c1.ngens
    d = max(c1.dimension, c2.dimension)
    ranks = [1] + [c1.rank(j) + c2.rank(j) for j in range(1, d + 1)]
    bnds = []
    for j in range(1, d + 1):
        A1 = c1.boundary(j) or [[GroupAlgebraElement()] * c1.rank(j - 1) for _ in range(c1.rank(j))]
        A2 = c2.boundary(j) or [[GroupAlgebraElement()] * c2.rank(j - 1) for _ in range(c2.rank(j))]
        A2 = [[x.shift_generators(off) for x in row] for row in A2]
        if j == 1:
            A = [list(r) for r in A1] + [list(r) for r in A2]
        else:
            A = [list(r) + [GroupAlgebraElement()] * c2.rank(j - 1) for r in A1]
            A += [[GroupAlgebraElement()] * c1.rank(j - 1) + list(r) for r in A2]
        bnds.append(A)
    return ChainComplexSpec(ranks, bnds, _unique_names(c1.generators, c2.generators),
                            c1.complete and c2.complete, f"({c1.name} v {c2.name})")


def complex_product(c1: ChainComplexSpec, c2: ChainComplexSpec) -> ChainComplexSpec:
    """Tensor product: d(x (x) y) = dx (x) y + (-1)^i x (x) dy."""
    off = c1.ngens
    d = c1.dimension + c2.dimension
    cells: list[list[tuple]] = []
    for n in range(d + 1):
        cs = []
        for i in range(max(0, n - c2.dimension), min(n, c1.dimension) + 1):
            j = n - i
            for a in range(c1.rank(i)):
                for b in range(c2.rank(j)):
                    cs.append((i, a, j, b))
        cells.append(cs)
    index = [{c: k for k, c in enumerate(cs)} for cs in cells]
    bnds = []
    for n in range(1, d + 1):
        A = [[GroupAlgebraElement() for _ in cells[n - 1]] for _ in cells[n]]
        for r, (i, a, j, b) in enumerate(cells[n]):
            if i >= 1:
                for x, entry in enumerate(c1.boundary(i)[a]):
                    if not entry.is_zero():
                        col = index[n - 1][(i - 1, x, j, b)]
                        A[r][col] = A[r][col] + entry
            if j >= 1:
                for y, entry in enumerate(c2.boundary(j)[b]):
                    if not entry.is_zero():
                        col = index[n - 1][(i, a, j - 1, y)]
                        A[r][col] = A[r][col] + (-1) ** i * entry.shift_generators(off)
        bnds.append(A)
    return ChainComplexSpec([len(cs) for cs in cells], bnds,
                            _unique_names(c1.generators, c2.generators),
                            c1.complete and c2.complete, f"({c1.name} x {c2.name})")


def complex_surface(g: int) -> ChainComplexSpec:
    """Closed orientable surface of genus g >= 1 from <a_i, b_i | prod [a_i, b_i]>."""
    if g < 1:
        raise ValueError("genus must be at least 1")
    names = []
    for i in range(1, g + 1):
        names += [f"a{i}", f"b{i}"]
    rel = []
    for i in range(g):
        a, b = 2 * i, 2 * i + 1
        rel += [(a, 1), (b, 1), (a, -1), (b, -1)]
    c = complex_from_presentation(names, [reduce_word(rel)], name=f"Sigma_{g}")
    return c


def complex_free(r: int) -> ChainComplexSpec:
    """Wedge of r circles."""
    if r < 1:
        raise ValueError("rank must be positive")
    names = [f"x{i + 1}" for i in range(r)] if r > 1 else ["x"]
    return complex_from_presentation(names, [], name=f"F_{r}")


def complex_klein_bottle() -> ChainComplexSpec:
    return presentation_from_strings(["a", "b"], ["a b a B"], name="Klein")


KNOT_PRESENTATIONS = {
    "trefoil": (["x", "y"], ["x y x Y X Y"]),
    "figure-eight": (["x", "y"], ["y X y x Y X y X Y x"]),
}

# Alexander polynomials (low degree first) of small prime knots
ALEXANDER_POLYNOMIALS = {
    "3_1": [1, -1, 1],
    "4_1": [1, -3, 1],
    "5_1": [1, -1, 1, -1, 1],
    "5_2": [2, -3, 2],
    "6_1": [2, -5, 2],
    "6_2": [1, -3, 3, -3, 1],
    "6_3": [1, -3, 5, -3, 1],
    "7_1": [1, -1, 1, -1, 1, -1, 1],
}


def complex_knot(name: str) -> ChainComplexSpec:
    try:
        gens, rels = KNOT_PRESENTATIONS[name]
    except KeyError:
        raise ValueError(f"unknown knot {name!r}; known: {sorted(KNOT_PRESENTATIONS)}") from None
    return presentation_from_strings(gens, rels, name=name)


def fab_presentation(A: Sequence[Sequence[int]]) -> ChainComplexSpec:
    """Presentation complex of Z^N x|_A Z: [x_i, x_j] and t x_i t^-1 = prod_k x_k^{A_ki}."""
    N = len(A)
    names = [f"x{i + 1}" for i in range(N)] + ["t"]
    t = N
    rels = []
    for i in range(N):
        for j in range(i + 1, N):
            rels.append(reduce_word([(i, 1), (j, 1), (i, -1), (j, -1)]))
    for i in range(N):
        target = []
        for k in range(N):
            e = A[k][i]
            target += [(k, 1 if e > 0 else -1)] * abs(e)
        rels.append(reduce_word([(t, 1), (i, 1), (t, -1)] + list(invert_word(tuple(target)))))
    return complex_from_presentation(names, rels, name="fab")


# ---------------------------------------------------------------------------
# pushing through a finite quotient


def reduce_entry(x: GroupAlgebraElement, Q: FiniteQuotient) -> dict:
    """Image of x in Z[Q] as {element: coefficient}."""
    out: dict = {}
    for w, c in x.terms.items():
        g = Q.word_image(w)
        out[g] = out.get(g, 0) + c
    return {g: c for g, c in out.items() if c}


def reduce_matrix(A: Sequence[Sequence[GroupAlgebraElement]], Q: FiniteQuotient,
                  modulus: int = 0, ncols: int | None = None) -> list[dict]:
    """Matrix of r(A) on C(Q)^cols in the basis of point indicators, as sparse rows.

    r(g)f(x) = f(xg), so row (i, x) has coefficient c at column (m, x*g) for each
    term c*g of a_{i,m}. Shape (rows*|Q|) x (cols*|Q|); entries reduced mod
    ``modulus`` when it is nonzero.
    """
    n = Q.order
    rows_out: list[dict] = []
    translations: dict[int, list[int]] = {}
    for i, row in enumerate(A):
        reduced = [reduce_entry(x, Q) for x in row]
        for g in {g for r in reduced for g in r}:
            if g not in translations:
                translations[g] = Q.right_translation(g)
        for x in range(n):
            out: dict = {}
            for m, entry in enumerate(reduced):
                base = m * n
                for g, c in entry.items():
                    col = base + translations[g][x]
                    out[col] = out.get(col, 0) + c
            if modulus:
                out = {k: v % modulus for k, v in out.items() if v % modulus}
            else:
                out = {k: v for k, v in out.items() if v}
            rows_out.append(out)
    return rows_out


def sparse_to_dense(rows: list[dict], ncols: int) -> list[list[int]]:
    out = []
    for r in rows:
        dense = [0] * ncols
        for c, v in r.items():
            dense[c] = v
        out.append(dense)
    return out


def load_complex(path: str) -> ChainComplexSpec:
    """Read a complex file, or a presentation file {"generators", "relators"}."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if "relators" in data:
        try:
            return presentation_from_strings(data["generators"], data["relators"],
                                             name=data.get("name", path))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{path}: {exc}") from None
    try:
        return ChainComplexSpec.from_json(data)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def check_composition(c: ChainComplexSpec, Q: FiniteQuotient, degrees: Iterable[int] | None = None) -> None:
    """Raise unless A_{j+1} A_j = 0 in Z[Q] (so r(A_{j+1}) r(A_j) = 0)."""
    js = range(1, c.dimension) if degrees is None else degrees
    for j in js:
        A, B = c.boundary(j + 1), c.boundary(j)
        if not A or not B or not A[0] or not B[0]:
            continue
        Ar = [[reduce_entry(x, Q) for x in row] for row in A]
        Br = [[reduce_entry(x, Q) for x in row] for row in B]
        for row in Ar:
            for col in range(len(Br[0])):
                acc: dict = {}
                for m, a in enumerate(row):
                    for g, c1 in a.items():
                        for h, c2 in Br[m][col].items():
                            gh = Q.mul(g, h)
                            acc[gh] = acc.get(gh, 0) + c1 * c2
                if any(acc.values()):
                    raise ValueError(f"boundary maps A_{j + 1} and A_{j} do not compose to zero "
                                     f"in the quotient {Q.name}")
