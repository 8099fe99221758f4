"""Truncated p-adic integers and limit detection for integer sequences.

A value is only ever known modulo ``p**precision``; the detector in
:func:`padic_limit` reports the precision it has actually witnessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .arith import require_prime

CONVERGED = "converged"
GROWTH = "growth-detected"
INSUFFICIENT = "insufficient-data"
_STATUSES = (CONVERGED, GROWTH, INSUFFICIENT)

DEFAULT_WINDOW = 3


def vp(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if x == 0:
        raise ValueError("valuation of zero undefined")
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def p_prime_part(x: int, p: int) -> int:
    """``x / p**vp(x)``, keeping the sign."""
    if x == 0:
        raise ValueError("p'-part of zero undefined")
    return x // p ** vp(x, p)


@dataclass(frozen=True)
class PAdicApprox:
    """A p-adic integer known modulo ``p**precision``.

    Non-converged statuses carry ``precision == 0`` and ``residue == 0``:
    they make no claim about the value.
    """

    prime: int
    precision: int
    residue: int
    status: str = CONVERGED

    def __post_init__(self):
        require_prime(self.prime)
        if self.status not in _STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == CONVERGED:
            if self.precision < 1:
                raise ValueError("a converged value needs precision >= 1")
            if not 0 <= self.residue < self.prime ** self.precision:
                raise ValueError("residue out of range")
        elif self.precision != 0 or self.residue != 0:
            raise ValueError(f"status {self.status} carries no residue claim")

    @classmethod
    def exact(cls, value: int, p: int, precision: int) -> "PAdicApprox":
        return cls(p, precision, value % p**precision)

    @classmethod
    def unknown(cls, p: int, status: str = INSUFFICIENT) -> "PAdicApprox":
        return cls(p, 0, 0, status)

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def agrees_with(self, value: int) -> bool:
        """True if ``value`` is congruent to the residue at the known precision."""
        return self.converged and (value - self.residue) % self.modulus == 0

    def signed_residue(self) -> int:
        """Representative in (-p^N/2, p^N/2]; handy for reading off small integers."""
        r = self.residue
        return r - self.modulus if 2 * r > self.modulus else r

    def truncate(self, precision: int) -> "PAdicApprox":
        if not self.converged:
            return self
        precision = min(precision, self.precision)
        return PAdicApprox(self.prime, precision, self.residue % self.prime**precision)

    def to_json(self) -> dict:
        return {"p": self.prime, "precision": self.precision,
                "residue": self.residue, "status": self.status}

    @classmethod
    def from_json(cls, data: dict) -> "PAdicApprox":
        return cls(data["p"], data["precision"], data["residue"], data["status"])


def _agreement_precision(terms: Sequence[int], p: int, cap: int) -> int:
    m = 0
    mod = 1
    while m < cap:
        mod *= p
        first = terms[0] % mod
        if any(t % mod != first for t in terms[1:]):
            break
        m += 1
    return m


def _looks_divergent(terms: Sequence[int], p: int) -> bool:
    # Every step must grow in absolute value by at least a factor p.
    mags = [abs(t) for t in terms]
    return all(b >= p * a and b > a for a, b in zip(mags, mags[1:]))


def padic_limit(seq: Sequence[int], p: int, target_precision: int,
                window: int = DEFAULT_WINDOW) -> PAdicApprox:
    """Read off the p-adic limit witnessed by the trailing window of ``seq``.

    Returns the residue modulo ``p**m`` for the largest ``m <= target_precision``
    at which the last ``window`` terms agree. Without agreement at ``m = 1`` the
    result is ``growth-detected`` when the window blows up geometrically (each
    term at least ``p`` times the previous in size), else ``insufficient-data``.
    """
    require_prime(p)
    if not seq:
        raise ValueError("padic_limit needs a nonempty sequence")
    if window < 2:
        raise ValueError("window must be at least 2")
    if target_precision < 1:
        raise ValueError("target precision must be positive")
    if len(seq) < window:
        return PAdicApprox.unknown(p)
    tail = [int(t) for t in seq[-window:]]
    m = _agreement_precision(tail, p, target_precision)
    if m >= 1:
        return PAdicApprox(p, m, tail[-1] % p**m)
    if _looks_divergent(tail, p):
        return PAdicApprox.unknown(p, GROWTH)
    return PAdicApprox.unknown(p)


@dataclass(frozen=True)
class PAdicIndex:
    """The p-adic index ||G:K||: the honest index when K is open, else 0."""

    value: PAdicApprox
    is_open: bool
    exact_value: int | None = None

    def __post_init__(self):
        if self.is_open and (self.exact_value is None or self.exact_value < 1):
            raise ValueError("an open index must carry its exact positive value")

    @classmethod
    def open_index(cls, index: int, p: int, precision: int) -> "PAdicIndex":
        return cls(PAdicApprox.exact(index, p, precision), True, index)

    @classmethod
    def closed_index(cls, p: int, precision: int) -> "PAdicIndex":
        """Index of a non-open subgroup, i.e. the p-adic number 0."""
        return cls(PAdicApprox(p, precision, 0), False)


def padic_index_from_tower(indices: Sequence[int], p: int, precision: int,
                           window: int = DEFAULT_WINDOW) -> PAdicIndex:
    """p-adic index from the finite-level indices |G : N_n K|."""
    if not indices:
        raise ValueError("padic_index_from_tower needs a nonempty sequence")
    if any(i < 1 for i in indices):
        raise ValueError("indices must be positive")
    w = min(window, len(indices))
    tail = indices[-w:]
    if w >= 2 and all(i == tail[0] for i in tail):
        return PAdicIndex.open_index(tail[0], p, precision)
    return PAdicIndex(padic_limit(indices, p, precision, window), False)
