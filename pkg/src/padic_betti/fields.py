"""Exact finite and cyclotomic fields with a common elementwise interface.

Every field object exposes ``zero``, ``one``, ``add``, ``sub``, ``neg``,
``mul``, ``inv``, ``is_zero``, ``from_int`` and ``pow`` so the elimination
routines in :mod:`padic_betti.linalg` can run over any of them.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import polys
from .arith import factorize, multiplicative_order, require_prime, root_of_unity_mod


class PrimeField:
    """F_ell with elements stored as ints in [0, ell)."""

    def __init__(self, ell: int):
        self.ell = require_prime(ell, "field characteristic")
        self.degree = 1
        self.zero = 0
        self.one = 1

    @property
    def order(self) -> int:
        return self.ell

    def add(self, a, b):
        return (a + b) % self.ell

    def sub(self, a, b):
        return (a - b) % self.ell

    def neg(self, a):
        return -a % self.ell

    def mul(self, a, b):
        return a * b % self.ell

    def inv(self, a):
        if a % self.ell == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.ell)

    def is_zero(self, a) -> bool:
        return a % self.ell == 0

    def from_int(self, c):
        c = Fraction(c)
        return c.numerator * pow(c.denominator, -1, self.ell) % self.ell

    def pow(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        return pow(a, k, self.ell)

    def root_of_unity(self, n: int):
        return root_of_unity_mod(n, self.ell)


# -- polynomial helpers over F_ell (coefficient lists, low degree first) -----


def _trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f, g, ell):
    f = list(f)
    inv_lead = pow(g[-1], -1, ell)
    dg = len(g) - 1
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i] * inv_lead % ell
        if c:
            for j in range(dg + 1):
                f[i - dg + j] = (f[i - dg + j] - c * g[j]) % ell
    return _trim(f[:dg] if len(f) > dg else f)


def _pmulmod(a, b, g, ell):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod([c % ell for c in out], g, ell)


def _ppowmod(a, e, g, ell):
    result = [1]
    base = _pmod(a, g, ell)
    while e:
        if e & 1:
            result = _pmulmod(result, base, g, ell)
        base = _pmulmod(base, base, g, ell)
        e >>= 1
    return result


def _pgcd(a, b, ell):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, ell)
    return a


def _is_irreducible(f, ell) -> bool:
    r = len(f) - 1
    x = [0, 1]
    power = x
    for _ in range(r // 2):
        power = _ppowmod(power, ell, f, ell)
        diff =_trim([((power[i] if i < len(power) else 0) - (x[i] if i < 2 else 0)) % ell
                      for i in range(max(len(power), 2))])
        if len(_pgcd(f, diff, ell)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def irreducible_poly(ell: int, r: int) -> tuple[int, ...]:
    """First monic irreducible of degree r over F_ell in lexicographic order."""
    if r == 1:
        return (0, 1)
    for code in range(ell ** r):
        coeffs = []
        c = code
        for _ in range(r):
            coeffs.append(c % ell)
            c //= ell
        if coeffs[0] == 0:
            continue
        f = coeffs + [1]
        if _is_irreducible(f, ell):
            return tuple(f)
    raise ValueError(f"no irreducible polynomial of degree {r} over F_{ell}")


class ExtensionField:
    """F_{ell^r} = F_ell[x]/(f) with elements as coefficient tuples of length r."""

    def __init__(self, ell: int, r: int):
        require_prime(ell, "field characteristic")
        if r < 1:
            raise ValueError("extension degree must be positive")
        self.ell = ell
        self.degree = r
        self.modpoly = list(irreducible_poly(ell, r))
        self.zero = (0,) * r
        self.one = (1,) + (0,) * (r - 1)

    @property
    def order(self) -> int:
        return self.ell ** self.degree

    def _pack(self, f):
        f = list(f)[: self.degree]
        return tuple(f + [0] * (self.degree - len(f)))

    def add(self, a, b):
        return tuple((x + y) % self.ell for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.ell for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.ell for x in a)

    def mul(self, a, b):
        return self._pack(_pmulmod(_trim(list(a)), _trim(list(b)), self.modpoly, self.ell))

    def pow(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        return self._pack(_ppowmod(_trim(list(a)), k, self.modpoly, self.ell))

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.order - 2)

    def is_zero(self, a) -> bool:
        return not any(a)

    def from_int(self, c):
        c = Fraction(c)
        v = c.numerator * pow(c.denominator, -1, self.ell) % self.ell
        return (v,) + (0,) * (self.degree - 1)

    def root_of_unity(self, n: int):
        """A primitive n-th root of unity (requires n | ell^r - 1)."""
        q1 = self.order - 1
        if q1 % n:
            raise ValueError(f"F_{self.ell}^{self.degree} has no primitive {n}-th root of unity")
        if n == 1:
            return self.one
        primes = [q for q, _ in factorize(n)]
        for code in range(1, self.order):
            coeffs = []
            c = code
            for _ in range(self.degree):
                coeffs.append(c % self.ell)
                c //= self.ell
            z = self.pow(tuple(coeffs), q1 // n)
            if all(self.pow(z, n // q) != self.one for q in primes):
                return z
        raise ValueError("no primitive root found")  # unreachable for a field


def splitting_field(ell: int, n: int):
    """Smallest extension of F_ell containing the n-th roots of unity."""
    if n % ell == 0:
        raise ValueError(f"F_{ell} has no primitive {n}-th roots of unity (characteristic divides {n})")
    r = multiplicative_order(ell, n)
    return PrimeField(ell) if r == 1 else ExtensionField(ell, r)


class CyclotomicField:
    """Q(zeta_n) = Q[t]/Phi_n with Fraction coefficient tuples of length phi(n)."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("cyclotomic order must be positive")
        self.n = n
        self.modpoly = [Fraction(c) for c in polys.cyclotomic(n)]
        self.degree = len(self.modpoly) - 1
        self.zero = (Fraction(0),) * self.degree
        self.one = (Fraction(1),) + (Fraction(0),) * (self.degree - 1)

    def _pack(self, f):
        f = polys.divmod_poly(f, self.modpoly)[1] if len(polys.trim(f)) > self.degree else polys.trim(f)
        f = [Fraction(c) for c in f]
        return tuple(f + [Fraction(0)] * (self.degree - len(f)))

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        return self._pack(polys.mul(list(a), list(b)))

    def is_zero(self, a) -> bool:
        return not any(a)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in Q[t]
        r0, r1 = list(self.modpoly), polys.trim(list(a))
        s0, s1 = [], [Fraction(1)]
        while polys.degree(r1) > 0:
            q, r = polys.divmod_poly(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, polys.sub(s0, polys.mul(q, s1))
        c = Fraction(r1[0])
        return self._pack([x / c for x in s1])

    def pow(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        result, base = self.one, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def from_int(self, c):
        return (Fraction(c),) + (Fraction(0),) * (self.degree - 1)

    def root_of_unity(self, n: int):
        if self.n % n:
            raise ValueError(f"Q(zeta_{self.n}) does not contain primitive {n}-th roots")
        zeta = self._pack([0, 1]) if self.degree >= 1 else self.one
        if self.n == 1:
            return self.one
        if self.n == 2:
            zeta = self.from_int(-1)
        return self.pow(zeta, self.n // n)


class RationalField:
    """Q with Fraction elements (for generic elimination)."""

    degree = 1
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    def from_int(self, c):
        return Fraction(c)

    def pow(self, a, k: int):
        return Fraction(a) ** k


def rank_over(rows, F) -> int:
    """Rank of a dense matrix (list of rows of field elements) by Gaussian elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if not F.is_zero(m[i][c])), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = F.inv(m[rank][c])
        prow = [F.mul(x, inv) for x in m[rank]]
        m[rank] = prow
        for i in range(len(m)):
            if i != rank and not F.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], prow)]
        rank += 1
        if rank == len(m):
            break
    return rank
