"""Small integer helpers shared across the package."""

from __future__ import annotations

from functools import lru_cache
from math import gcd

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p: int, what: str = "p") -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{what} must be prime, got {p!r}")
    return p


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Trial-division factorization of a positive integer as ((q, e), ...)."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out.append((q, e))
        q += 1 if q == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def euler_phi(n: int) -> int:
    result = n
    for q, _ in factorize(n):
        result = result // q * (q - 1)
    return result


def multiplicative_order(a: int, n: int) -> int:
    """Order of a in (Z/n)^x."""
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit modulo {n}")
    order = euler_phi(n)
    for q, _ in factorize(order):
        while order % q == 0 and pow(a, order // q, n) == 1:
            order //= q
    return order


def is_prime_power(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


@lru_cache(maxsize=None)
def primes_one_mod(n: int, count: int, bits: int = 61) -> tuple[int, ...]:
    """The `count` largest primes below 2**bits that are congruent to 1 mod n."""
    out = []
    top = (1 << bits) - 1
    c = top - (top - 1) % n
    while len(out) < count:
        if c < 3:
            raise ValueError("ran out of primes")
        if is_prime(c):
            out.append(c)
        c -= n
    return tuple(out)


def root_of_unity_mod(n: int, ell: int) -> int:
    """A primitive n-th root of unity in F_ell (requires n | ell - 1)."""
    if (ell - 1) % n:
        raise ValueError(f"F_{ell} has no primitive {n}-th root of unity")
    if n == 1:
        return 1
    cofactor = (ell - 1) // n
    primes = [q for q, _ in factorize(n)]
    g = 2
    while True:
        z = pow(g, cofactor, ell)
        if all(pow(z, n // q, ell) != 1 for q in primes):
            return z
        g += 1
