"""Prime generation and word-sized modular arithmetic.

Everything downstream iterates over all primes up to some bound X, so the
substrate is a sieve (segmented above a threshold, so X ~ 1e8 runs in
bounded memory) plus modular exponentiation for word-sized moduli.
"""

import math
from dataclasses import dataclass

_SIMPLE_LIMIT = 1 << 20
_SEGMENT_SIZE = 1 << 17


class EmptyTableError(ValueError):
    """Requested a prime table with limit < 2."""


@dataclass(frozen=True)
class PrimeTable:
    """All primes <= limit, strictly ascending."""

    limit: int
    primes: tuple

    def __len__(self):
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def __getitem__(self, i):
        return self.primes[i]


def _simple_sieve(limit: int) -> list:
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes((limit - i * i) // i + 1)
    return [i for i in range(2, limit + 1) if flags[i]]


def _segmented_sieve(limit: int) -> list:
    root = math.isqrt(limit)
    base = _simple_sieve(root)
    primes = list(base)
    lo = root + 1
    while lo <= limit:
        hi = min(lo + _SEGMENT_SIZE - 1, limit)
        flags = bytearray(b"\x01") * (hi - lo + 1)
        for p in base:
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start <= hi:
                flags[start - lo :: p] = bytes((hi - start) // p + 1)
        primes.extend(i for i in range(lo, hi + 1) if flags[i - lo])
        lo = hi + 1
    return primes


def sieve_primes(limit: int) -> PrimeTable:
    """All primes <= limit; raises EmptyTableError for limit < 2."""
    if limit < 2:
        raise EmptyTableError(f"no primes up to {limit}")
    if limit <= _SIMPLE_LIMIT:
        primes = _simple_sieve(limit)
    else:
        primes = _segmented_sieve(limit)
    return PrimeTable(limit=limit, primes=tuple(primes))


@dataclass(frozen=True)
class Residue:
    """An element of F_p, stored as the representative in [0, p)."""

    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            raise ValueError(f"{self.value} is not reduced mod {self.p}")


def mod_pow(base: Residue, exp: int) -> Residue:
    """base**exp in F_p by square-and-multiply; exp must be >= 0."""
    if exp < 0:
        raise ValueError("negative exponent")
    p = base.p
    result = 1
    b = base.value
    e = exp
    while e:
        if e & 1:
            result = result * b % p
        b = b * b % p
        e >>= 1
    return Residue(result, p)
