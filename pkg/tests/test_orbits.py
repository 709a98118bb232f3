import random

import pytest

from orbitmodp.analytic import table_statistic
from orbitmodp.dynamics import AffinePolyMap, ProjectiveMorphism, normalize
from orbitmodp.orbits import (
    Census,
    OrbitStats,
    census_csv_lines,
    orbit_census,
    orbit_prefix,
    orbit_stats,
    read_census_csv,
    write_census_csv,
)
from orbitmodp.primes import sieve_primes

Z2P1 = AffinePolyMap((1, 0, 1))
SQUARING = AffinePolyMap((0, 0, 1))


def test_orbit_stats_examples():
    P0 = normalize([0, 1])
    assert orbit_stats(Z2P1, P0, 5) == OrbitStats(5, 0, 3, 3)
    assert orbit_stats(Z2P1, P0, 3) == OrbitStats(3, 2, 1, 3)
    for p in (2, 3, 5, 7, 101):
        assert orbit_stats(SQUARING, normalize([1, 1]), p) == OrbitStats(p, 0, 1, 1)


def test_orbit_stats_squaring_from_two():
    P = normalize([2, 1])
    expected = {2: (0, 1, 1), 3: (1, 1, 2), 5: (2, 1, 3), 7: (0, 2, 2)}
    for p, (s, r, m) in expected.items():
        assert orbit_stats(SQUARING, P, p) == OrbitStats(p, s, r, m)


def test_census_small(z2p1, start0, census_x5):
    assert [rec.m for rec in census_x5.records] == [2, 3, 3]
    assert census_x5.exceptional == ()
    single = orbit_census(z2p1, start0, 2)
    assert len(single.records) == 1


def test_m_for_conventions():
    rec = OrbitStats(3, 2, 1, 3)
    assert rec.m_for("orbit") == 3
    assert rec.m_for("cycle") == 1
    with pytest.raises(ValueError):
        rec.m_for("median")
    bad = OrbitStats(3, None, None, None, bad=True)
    assert bad.m_for("orbit") is None


def test_hash_and_brent_agree_small():
    primes = sieve_primes(300).primes
    for c in range(-2, 3):
        phi = AffinePolyMap((c, 0, 1))
        for alpha in (0, 3):
            P = normalize([alpha, 1])
            for p in primes:
                a = orbit_stats(phi, P, p, method="hash")
                b = orbit_stats(phi, P, p, method="brent")
                assert a == b, (c, alpha, p)


def test_affine_fast_path_matches_generic_path():
    # homogenizing first forces the projective tuple machinery; the two
    # evaluation paths are independent implementations of the same orbit
    primes = sieve_primes(200).primes
    for c in range(-2, 3):
        phi = AffinePolyMap((c, 0, 1))
        hom = phi.homogenize()
        for alpha in (0, 3, -5):
            P = normalize([alpha, 1])
            for p in primes:
                assert orbit_stats(phi, P, p) == orbit_stats(hom, P, p), (c, alpha, p)


def test_hash_and_brent_agree_generic_path():
    # exercise the projective tuple path with a P^2 map: [Y^2, Z^2, X^2]
    phi = ProjectiveMorphism(
        2, 2, ((((0, 2, 0), 1),), (((0, 0, 2), 1),), (((2, 0, 0), 1),))
    )
    P = normalize([1, 2, 3])
    for p in sieve_primes(100).primes:
        assert orbit_stats(phi, P, p, "hash") == orbit_stats(phi, P, p, "brent")


def test_orbit_size_bounded_by_projective_line(census_1e4):
    for rec in census_1e4.records:
        assert rec.m <= rec.p + 1


def test_tail_minimality_spot_checks(z2p1, start0, census_1e4):
    rng = random.Random(42)
    sample = rng.sample(census_1e4.records, 100)
    for rec in sample:
        prefix = orbit_prefix(z2p1, start0, rec.p, rec.m + 1)
        s, r = rec.tail, rec.cycle
        assert prefix[s + r] == prefix[s]
        if s >= 1:
            assert prefix[s + r - 1] != prefix[s - 1]
        assert len(set(prefix[: s + r])) == rec.m


def test_point_at_infinity_is_fixed_unless_leading_coeff_dies():
    inf = normalize([1, 0])
    assert orbit_stats(Z2P1, inf, 7) == OrbitStats(7, 0, 1, 1)
    three_z2 = AffinePolyMap((1, 0, 3))
    assert orbit_stats(three_z2, inf, 3).bad
    assert not orbit_stats(three_z2, normalize([0, 1]), 3).bad


def test_bad_primes_recorded_not_fatal():
    degenerate = ProjectiveMorphism(1, 2, ((((2, 0), 1),), (((1, 1), 1),)))
    census = orbit_census(degenerate, normalize([0, 1]), 10)
    assert census.exceptional == (2, 3, 5, 7)
    assert all(rec.bad for rec in census.records)


def test_census_determinism_across_jobs(z2p1, start0):
    one = orbit_census(z2p1, start0, 3000, jobs=1)
    two = orbit_census(z2p1, start0, 3000, jobs=2)
    assert census_csv_lines(one) == census_csv_lines(two)


def test_census_csv_round_trip(tmp_path, z2p1, start0, census_1e4):
    path = tmp_path / "census.csv"
    write_census_csv(census_1e4, path)
    back = read_census_csv(path, limit=census_1e4.limit)
    assert back.records == census_1e4.records
    assert table_statistic(back, 2.0) == table_statistic(census_1e4, 2.0)


def test_census_csv_bad_rows_round_trip(tmp_path):
    census = Census("m", "s", 5, (OrbitStats(2, 0, 2, 2), OrbitStats(3, None, None, None, True)))
    path = tmp_path / "c.csv"
    write_census_csv(census, path)
    assert read_census_csv(path, limit=5).records == census.records
    assert census_csv_lines(census)[2] == "3,,,,1"


def test_read_census_rejects_foreign_header(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_census_csv(path)
