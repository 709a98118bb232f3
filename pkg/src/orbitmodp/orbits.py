"""Tail, cycle, and orbit size of a point mod p, for every prime up to X.

A reduced orbit is rho-shaped: a tail of length s feeding a cycle of
length r, with m = s + r distinct points. The default detector iterates
while hashing each canonical point to its step index (one pass, O(m)
memory; m <= p+1 on P^1). Brent's constant-memory method is the
independent cross-check and the fallback when storing points is costly.

A prime is bad for (phi, P) when evaluation hits a point where every
homogeneous form vanishes; its record carries bad=True and contributes
nothing to downstream sums (the m = infinity convention).

Univariate polynomial maps get a fast path on affine residues: the orbit
of an affine start never leaves the affine line, and the point at
infinity is fixed unless p divides the leading coefficient.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .dynamics import (
    AffinePolyMap,
    IndeterminatePointError,
    ProjPointQ,
    as_projective,
    describe_map,
    describe_point,
    point_mod_p,
)
from .primes import sieve_primes

CONVENTIONS = ("orbit", "cycle")


@dataclass(frozen=True)
class OrbitStats:
    """Per-prime orbit record; tail/cycle/m are None when bad."""

    p: int
    tail: "int | None"
    cycle: "int | None"
    m: "int | None"
    bad: bool = False

    def m_for(self, convention: str = "orbit"):
        """Orbit size under the chosen counting convention (None when bad)."""
        if convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {convention!r}")
        if self.bad:
            return None
        return self.m if convention == "orbit" else self.cycle


@dataclass(frozen=True)
class Census:
    """Ordered orbit records for every prime <= limit."""

    map_desc: str
    start_desc: str
    limit: int
    records: tuple

    @property
    def exceptional(self):
        return tuple(rec.p for rec in self.records if rec.bad)


# ---------------------------------------------------------------------------
# Fast path: univariate polynomial maps on affine residues.
# ---------------------------------------------------------------------------


def _affine_start(P: ProjPointQ, p: int):
    """Residue of the start point, or None when it reduces to infinity."""
    a, b = P.coords
    if b % p == 0:
        return None
    return a * pow(b, -1, p) % p


def _hash_orbit_affine(coeffs, p, x0):
    seen = {}
    i = 0
    x = x0
    if len(coeffs) == 3 and coeffs[2] % p == 1 and coeffs[1] % p == 0:
        c0 = coeffs[0] % p
        while x not in seen:
            seen[x] = i
            i += 1
            x = (x * x + c0) % p
    else:
        rev = tuple(c % p for c in reversed(coeffs))
        while x not in seen:
            seen[x] = i
            i += 1
            y = 0
            for c in rev:
                y = (y * x + c) % p
            x = y
    tail = seen[x]
    return tail, i - tail


def _brent_orbit(step, x0):
    """Brent's cycle detection: returns (tail, cycle) in O(1) memory."""
    power = 1
    cycle = 1
    tortoise = x0
    hare = step(x0)
    while tortoise != hare:
        if power == cycle:
            tortoise = hare
            power *= 2
            cycle = 0
        hare = step(hare)
        cycle += 1
    tortoise = hare = x0
    for _ in range(cycle):
        hare = step(hare)
    tail = 0
    while tortoise != hare:
        tortoise = step(tortoise)
        hare = step(hare)
        tail += 1
    return tail, cycle


def _affine_step_fn(coeffs, p):
    rev = tuple(c % p for c in reversed(coeffs))

    def step(x):
        y = 0
        for c in rev:
            y = (y * x + c) % p
        return y

    return step


def _orbit_stats_affine(phi: AffinePolyMap, P, p, method):
    x0 = _affine_start(P, p)
    if x0 is None:
        if phi.coeffs[-1] % p == 0:
            # the degree drops mod p and the reduced forms share the zero
            # at infinity, which is exactly where the orbit sits
            return OrbitStats(p, None, None, None, bad=True)
        return OrbitStats(p, 0, 1, 1)
    if method == "brent":
        tail, cycle = _brent_orbit(_affine_step_fn(phi.coeffs, p), x0)
    else:
        tail, cycle = _hash_orbit_affine(phi.coeffs, p, x0)
    return OrbitStats(p, tail, cycle, tail + cycle)


# ---------------------------------------------------------------------------
# General path: canonical projective tuples under the reduced map.
# ---------------------------------------------------------------------------


def _projective_step_fn(phi, p):
    polys = tuple(
        tuple((exps, coeff % p) for exps, coeff in terms if coeff % p) for terms in phi.polys
    )

    def step(coords):
        vals = []
        for terms in polys:
            total = 0
            for exps, coeff in terms:
                v = coeff
                for x, e in zip(coords, exps):
                    if e:
                        v = v * pow(x, e, p) % p
                total += v
            vals.append(total % p)
        if not any(vals):
            raise IndeterminatePointError(f"map undefined at {coords} mod {p}")
        return point_mod_p(vals, p).coords

    return step


def _orbit_stats_projective(phi, P, p, method):
    step = _projective_step_fn(phi, p)
    try:
        x0 = point_mod_p(P.coords, p).coords
        if method == "brent":
            tail, cycle = _brent_orbit(step, x0)
        else:
            seen = {}
            i = 0
            x = x0
            while x not in seen:
                seen[x] = i
                i += 1
                x = step(x)
            tail = seen[x]
            cycle = i - tail
    except IndeterminatePointError:
        return OrbitStats(p, None, None, None, bad=True)
    return OrbitStats(p, tail, cycle, tail + cycle)


def orbit_stats(phi, P: ProjPointQ, p: int, method: str = "hash") -> OrbitStats:
    """Exact (tail, cycle, m) of the reduced orbit of P under phi mod p."""
    if method not in ("hash", "brent"):
        raise ValueError(f"unknown method {method!r}")
    if isinstance(phi, AffinePolyMap):
        return _orbit_stats_affine(phi, P, p, method)
    return _orbit_stats_projective(as_projective(phi), P, p, method)


def orbit_prefix(phi, P: ProjPointQ, p: int, length: int) -> list:
    """First `length` canonical reduced points, for spot checks."""
    step = _projective_step_fn(as_projective(phi), p)
    pts = [point_mod_p(P.coords, p).coords]
    for _ in range(length - 1):
        pts.append(step(pts[-1]))
    return pts


def _census_chunk(args):
    phi, P, primes, method = args
    return [orbit_stats(phi, P, p, method) for p in primes]


def orbit_census(phi, P: ProjPointQ, X: int, jobs: int = 1, method: str = "hash") -> Census:
    """One OrbitStats per prime <= X, ascending; output independent of jobs."""
    table = sieve_primes(X)
    primes = table.primes
    if jobs <= 1 or len(primes) < 64:
        records = [orbit_stats(phi, P, p, method) for p in primes]
    else:
        size = max(1, len(primes) // (jobs * 8))
        chunks = [primes[i : i + size] for i in range(0, len(primes), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_census_chunk, [(phi, P, ch, method) for ch in chunks])
            records = [rec for part in parts for rec in part]
    return Census(
        map_desc=describe_map(phi),
        start_desc=describe_point(P),
        limit=X,
        records=tuple(records),
    )


# ---------------------------------------------------------------------------
# CSV interchange: header p,s,r,m,bad; bad rows leave s,r,m empty.
# ---------------------------------------------------------------------------

CENSUS_HEADER = "p,s,r,m,bad"


def census_csv_lines(census: Census) -> list:
    lines = [CENSUS_HEADER]
    for rec in census.records:
        if rec.bad:
            lines.append(f"{rec.p},,,,1")
        else:
            lines.append(f"{rec.p},{rec.tail},{rec.cycle},{rec.m},0")
    return lines


def write_census_csv(census: Census, path) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(census_csv_lines(census)) + "\n")


def read_census_csv(path, map_desc: str = "", start_desc: str = "", limit: int = None) -> Census:
    """Load a census written by write_census_csv; limit defaults to the last prime."""
    records = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CENSUS_HEADER:
            raise ValueError(f"unexpected census header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            p_, s_, r_, m_, bad_ = line.split(",")
            if bad_ == "1":
                records.append(OrbitStats(int(p_), None, None, None, bad=True))
            else:
                records.append(OrbitStats(int(p_), int(s_), int(r_), int(m_)))
    if limit is None:
        limit = records[-1].p if records else 2
    return Census(map_desc, start_desc, limit, tuple(records))
