"""Polynomials: dense univariate over Q and sparse multivariate Laurent.

Univariate polynomials are plain lists of coefficients, lowest degree first,
with no trailing zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

Poly = list  # list[Fraction | int], low degree first


def trim(f: Sequence) -> Poly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: Sequence) -> int:
    f = trim(f)
    return len(f) - 1 if f else -1


def add(f: Sequence, g: Sequence) -> Poly:
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
                 for i in range(n)])


def sub(f: Sequence, g: Sequence) -> Poly:
    return add(f, [-c for c in g])


def mul(f: Sequence, g: Sequence) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out)


def divmod_poly(f: Sequence, g: Sequence) -> tuple[Poly, Poly]:
    """Euclidean division over Q."""
    g = trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in trim(f)]
    lead = Fraction(g[-1])
    q = [Fraction(0)] * max(len(r) - len(g) + 1, 0)
    while len(r) >= len(g) and r:
        shift = len(r) - len(g)
        c = r[-1] / lead
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] -= c * b
        r = trim(r)
    return trim(q), r


def monic(f: Sequence) -> Poly:
    f = trim(f)
    if not f:
        return []
    lead = Fraction(f[-1])
    return [Fraction(c) / lead for c in f]


def gcd(f: Sequence, g: Sequence) -> Poly:
    """Monic gcd over Q (gcd(0, 0) = 0)."""
    a, b = trim(f), trim(g)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def derivative(f: Sequence) -> Poly:
    return trim([i * c for i, c in enumerate(f)][1:])


def radical(f: Sequence) -> Poly:
    """Squarefree part f / gcd(f, f'), made monic."""
    f = trim(f)
    if not f:
        raise ValueError("radical of the zero polynomial")
    return monic(divmod_poly(f, gcd(f, derivative(f)))[0])


def powmod_monomial(exponent: int, f: Sequence) -> Poly:
    """t**exponent reduced modulo f, by square-and-multiply."""
    result: Poly = [Fraction(1)]
    base = divmod_poly([0, 1], f)[1]
    e = exponent
    while e:
        if e & 1:
            result = divmod_poly(mul(result, base), f)[1]
        base = divmod_poly(mul(base, base), f)[1]
        e >>= 1
    return divmod_poly(result, f)[1]


def evaluate(f: Sequence, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def to_int_poly(f: Sequence) -> list[int]:
    """Scale a rational polynomial to a primitive integer one (same roots)."""
    from math import gcd as igcd, lcm

    f = trim(f)
    if not f:
        return []
    den = 1
    for c in f:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in f]
    g = 0
    for c in ints:
        g = igcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


_CYCLO: dict[int, list[int]] = {}


def cyclotomic(n: int) -> list[int]:
    """The n-th cyclotomic polynomial with integer coefficients."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    if n not in _CYCLO:
        f: Poly = [-1] + [0] * (n - 1) + [1]
        for d in range(1, n):
            if n % d == 0:
                f = divmod_poly(f, cyclotomic(d))[0]
        _CYCLO[n] = [int(c) for c in f]
    return list(_CYCLO[n])


# ---------------------------------------------------------------------------
# Multivariate Laurent polynomials


class LaurentPoly:
    """Sparse Laurent polynomial in ``nvars`` variables.

    Coefficients live in Q (``modulus == 0``; stored as Fraction) or in F_l
    (``modulus == l``; stored as ints in [0, l)). Terms map exponent tuples to
    nonzero coefficients.
    """

    __slots__ = ("nvars", "modulus", "terms")

    def __init__(self, terms: Mapping[tuple, object] | None = None, nvars: int = 1,
                 modulus: int = 0):
        self.nvars = nvars
        self.modulus = modulus
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
            c = self._norm(c)
            if c:
                clean[e] = self._norm(clean.get(e, 0) + c)
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    def _norm(self, c):
        if self.modulus:
            return int(c) % self.modulus
        return Fraction(c)

    @classmethod
    def constant(cls, c, nvars: int = 1, modulus: int = 0) -> "LaurentPoly":
        return cls({(0,) * nvars: c}, nvars, modulus)

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1, modulus: int = 0) -> "LaurentPoly":
        return cls({tuple(exps): c}, len(exps), modulus)

    @classmethod
    def variable(cls, i: int, nvars: int, modulus: int = 0) -> "LaurentPoly":
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars, modulus)

    def _like(self, terms) -> "LaurentPoly":
        return LaurentPoly(terms, self.nvars, self.modulus)

    def _check(self, other: "LaurentPoly"):
        if other.nvars != self.nvars or other.modulus != self.modulus:
            raise ValueError("incompatible Laurent polynomials")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return LaurentPoly.constant(other, self.nvars, self.modulus)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return self._like(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers only for monomials")
        out = LaurentPoly.constant(1, self.nvars, self.modulus)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = self._coerce(other)
        return (self.nvars, self.modulus, self.terms) == (other.nvars, other.modulus, other.terms)

    def __hash__(self):
        return hash((self.nvars, self.modulus, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def min_exponents(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(e[i] for e in self.terms) for i in range(self.nvars))

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial t^exps (a unit)."""
        return self._like({tuple(a + b for a, b in zip(e, exps)): c
                           for e, c in self.terms.items()})

    def evaluate(self, point: Sequence, one, add: Callable, mul: Callable,
                 power: Callable, scalar: Callable):
        """Evaluate at ``point`` in an arbitrary commutative ring.

        ``power(x, k)`` must handle negative k (the point is a unit);
        ``scalar(c)`` embeds a coefficient.
        """
        acc = None
        for e, c in self.terms.items():
            term = scalar(c)
            for x, k in zip(point, e):
                if k:
                    term = mul(term, power(x, k))
            acc = term if acc is None else add(acc, term)
        return acc if acc is not None else scalar(0)

    def to_univariate(self) -> tuple[int, Poly]:
        """For one variable: (shift a, dense poly f) with self = t^a * f(t)."""
        if self.nvars != 1:
            raise ValueError("not univariate")
        if not self.terms:
            return 0, []
        lo = self.min_exponents()[0]
        hi = max(e[0] for e in self.terms)
        f = [0] * (hi - lo + 1)
        for (k,), c in self.terms.items():
            f[k - lo] = c
        return lo, f

    @classmethod
    def from_univariate(cls, f: Sequence, shift: int = 0, modulus: int = 0) -> "LaurentPoly":
        return cls({(i + shift,): c for i, c in enumerate(f) if c}, 1, modulus)

    def __repr__(self):
        return f"LaurentPoly({format_laurent(self)!r})"


def _var_names(nvars: int, names: Sequence[str] | None) -> list[str]:
    if names:
        return list(names)
    return ["t"] if nvars == 1 else [f"t{i + 1}" for i in range(nvars)]


def format_laurent(f: LaurentPoly, names: Sequence[str] | None = None) -> str:
    names = _var_names(f.nvars, names)
    if not f.terms:
        return "0"
    parts = []
    for e in sorted(f.terms, reverse=True):
        c = f.terms[e]
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1 and not f.modulus:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")




def _split_terms(text: str) -> list[tuple[int, str]]:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial string")
    out = []
    i = 0
    sign = 1
    buf = ""
    while i < len(s):
        ch = s[i]
        if ch in "+-" and not (buf.endswith("^") or buf.endswith("e")):
            if buf:
                out.append((sign, buf))
                buf = ""
            sign = 1 if ch == "+" else -1
            if not out and not buf and i == 0:
                pass
        else:
            buf += ch
        i += 1
    if not buf:
        raise ValueError(f"dangling sign in {text!r}")
    out.append((sign, buf))
    return out


def parse_laurent(text: str, names: Sequence[str] | None = None, nvars: int | None = None,
                  modulus: int = 0) -> LaurentPoly:
    """Parse an expanded polynomial such as ``"t^2-t+1"`` or ``"2*t1^-1*t2 - 3"``.

    Factors are joined by ``*``; a numeric coefficient may also be glued to
    the first variable, as in ``3t^2``.
    """
    if names is None:
        found = sorted(set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text)))
        if nvars is None:
            nvars = max(1, len(found))
        names = _var_names(nvars, None)
        unknown = set(found) - set(names)
        if unknown:
            if len(found) == nvars:
                names = found
            else:
                raise ValueError(f"unknown variables {sorted(unknown)} in {text!r}")
    names = list(names)
    index = {n: i for i, n in enumerate(names)}
    terms: dict = {}
    for sign, body in _split_terms(text):
        coef: Fraction = Fraction(sign)
        exps = [0] * len(names)
        for factor in body.split("*"):
            if not factor:
                raise ValueError(f"malformed term {body!r} in {text!r}")
            glued = re.fullmatch(r"(\d+(?:/\d+)?)([A-Za-z_].*)", factor)
            if glued:
                coef *= Fraction(glued.group(1))
                factor = glued.group(2)
            m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?", factor)
            if m:
                if m.group(1) not in index:
                    raise ValueError(f"unknown variable {m.group(1)!r} in {text!r}")
                exps[index[m.group(1)]] += int(m.group(2) or 1)
                continue
            try:
                coef *= Fraction(factor)
            except ValueError:
                raise ValueError(f"cannot parse factor {factor!r} in {text!r}") from None
        e = tuple(exps)
        terms[e] = terms.get(e, 0) + coef
    return LaurentPoly(terms, len(names), modulus)


def parse_int_poly(text: str, var: str = "t") -> list[int]:
    """Parse an expanded univariate integer polynomial into a dense list."""
    f = parse_laurent(text, names=[var])
    shift, dense = f.to_univariate()
    if shift < 0:
        raise ValueError(f"negative exponent in {text!r}")
    out = [0] * shift + list(dense)
    if any(Fraction(c).denominator != 1 for c in out):
        raise ValueError(f"non-integer coefficient in {text!r}")
    return [int(c) for c in out]


def laurent_from_terms(pairs: Iterable[tuple[Sequence[int], object]], nvars: int,
                       modulus: int = 0) -> LaurentPoly:
    terms: dict = {}
    for e, c in pairs:
        e = tuple(e)
        terms[e] = terms.get(e, 0) + c
    return LaurentPoly(terms, nvars, modulus)
