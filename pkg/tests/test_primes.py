import random

import pytest

from orbitmodp.primes import (
    EmptyTableError,
    Residue,
    _segmented_sieve,
    _simple_sieve,
    mod_pow,
    sieve_primes,
)

# Deterministic Miller-Rabin (valid far beyond any limit used here); the
# independent oracle for sieve membership.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime_mr(n):
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def test_first_primes():
    assert sieve_primes(10).primes == (2, 3, 5, 7)


def test_boundary():
    assert sieve_primes(2).primes == (2,)


def test_every_200th_prime_checkpoints():
    table = sieve_primes(20000)
    assert table.primes[199] == 1223
    assert table.primes[399] == 2741


def test_below_two_is_error():
    with pytest.raises(EmptyTableError):
        sieve_primes(1)


def test_table_invariants():
    table = sieve_primes(1000)
    assert table.primes[0] == 2
    assert list(table.primes) == sorted(set(table.primes))
    assert all(is_prime_mr(p) for p in table)
    assert len(table) == 168  # pi(1000)


def test_membership_against_miller_rabin():
    X = 50000
    table = set(sieve_primes(X).primes)
    rng = random.Random(20240809)
    for _ in range(1000):
        n = rng.randint(2, X)
        assert (n in table) == is_prime_mr(n), n


def test_segmented_matches_simple():
    # force the segmented path on a range the simple sieve can check whole
    assert _segmented_sieve(300000) == _simple_sieve(300000)


def test_segmented_kicks_in_above_threshold():
    table = sieve_primes((1 << 20) + 1000)
    assert table.primes[-1] <= (1 << 20) + 1000
    assert is_prime_mr(table.primes[-1])


def test_mod_pow_examples():
    assert mod_pow(Residue(2, 7), 3).value == 1
    assert mod_pow(Residue(5, 11), 0).value == 1
    # Fermat: direct multiplication oracle
    acc = 1
    for _ in range(18):
        acc = acc * 3 % 19
    assert acc == 1
    assert mod_pow(Residue(3, 19), 18).value == acc


def test_mod_pow_exhaustive_against_naive():
    for p in sieve_primes(50):
        for a in range(p):
            acc = 1
            for e in range(21):
                assert mod_pow(Residue(a, p), e).value == acc
                acc = acc * a % p


def test_mod_pow_rejects_negative_exponent():
    with pytest.raises(ValueError):
        mod_pow(Residue(2, 7), -1)


def test_residue_validates_range():
    with pytest.raises(ValueError):
        Residue(7, 7)
    with pytest.raises(ValueError):
        Residue(-1, 7)
