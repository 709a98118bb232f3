"""Heights of exact orbit points and the divisibility integers B(r,s), D(m).

For coprime integer coordinates the height of a rational projective point
is log max |coordinate|. The cross-difference of two distinct points is
the gcd of all 2x2 minors a_i b_j - a_j b_i; it is divisible by exactly
the primes p at which the two points collide in P^N(F_p).

B(r,s) is the cross-difference of iterates phi^(r+s)(P) and phi^s(P), and
D(m) is the product of B(r,s) over r >= 1, s >= 0, r+s = m. Outside the
operational exceptional set, p | D(m) holds iff the reduced orbit has at
most m points, which is what dm_equivalence_check verifies by trial
division against a census.
"""

import math
from dataclasses import dataclass
from math import gcd

from .dynamics import ProjPointQ, exact_orbit


class DegeneratePairError(ValueError):
    """Cross-difference of a point with itself."""


class FiniteOrbitError(ValueError):
    """Exact orbit revisited a point; the standing hypothesis needs it infinite."""


def log_big(n: int) -> float:
    """Natural log of a positive int, safe far beyond float range."""
    if n <= 0:
        raise ValueError("log of a nonpositive integer")
    bits = n.bit_length()
    if bits <= 512:
        return math.log(n)
    top = n >> (bits - 512)
    return math.log(top) + (bits - 512) * math.log(2)


def least_squares_slope(xs, ys) -> float:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den


def height(P: ProjPointQ) -> float:
    """log max |coordinate| of a normalized point; 0 iff all coords in {-1,0,1}."""
    return log_big(max(abs(c) for c in P.coords))


@dataclass(frozen=True)
class HeightTrace:
    n: int
    h: float


@dataclass(frozen=True)
class HeightGrowth:
    """Smallest C with h(phi^n P) <= d^n (h(P) + C) for all sampled n."""

    d: int
    C: float
    ok: bool
    trace: tuple


def height_growth_check(phi, P: ProjPointQ, n_max: int, cap: float = 10.0) -> HeightGrowth:
    """Fit the doubling-bound constant along the exact orbit of P.

    d is max(deg phi, 2); the minimal admissible constant is
    max(0, max_n h_n / d^n - h_0), and ok reports whether it stays below cap.
    """
    from .dynamics import as_projective

    d = max(as_projective(phi).degree, 2)
    points = exact_orbit(phi, P, n_max)
    trace = tuple(HeightTrace(n, height(Q)) for n, Q in enumerate(points))
    h0 = trace[0].h
    C = 0.0
    for rec in trace[1:]:
        C = max(C, rec.h / d**rec.n - h0)
    return HeightGrowth(d=d, C=C, ok=C <= cap, trace=trace)


def cross_difference(A: ProjPointQ, B: ProjPointQ) -> int:
    """gcd over i < j of |a_i b_j - a_j b_i|; positive whenever A != B."""
    if A.coords == B.coords:
        raise DegeneratePairError(f"points coincide: {A.coords}")
    a = A.coords
    b = B.coords
    g = 0
    n = len(a)
    for i in range(n - 1):
        for j in range(i + 1, n):
            g = gcd(g, a[i] * b[j] - a[j] * b[i])
            if g == 1:
                return 1
    return g


def distance_inequality_check(A: ProjPointQ, B: ProjPointQ) -> bool:
    """log cross_difference <= h(A) + h(B) + 2 log(N+1).

    Each minor is at most twice the product of the max coordinates, and
    2 log(N+1) >= log 2 on P^N with N >= 1, so this explicit constant
    witnesses the additive O(1) of the distance bound.
    """
    n_plus_1 = len(A.coords)
    lhs = log_big(cross_difference(A, B))
    return lhs <= height(A) + height(B) + 2.0 * math.log(n_plus_1)


def B_rs(phi, P: ProjPointQ, r: int, s: int, orbit=None) -> int:
    """Cross-difference of phi^(r+s)(P) and phi^s(P); r >= 1, s >= 0."""
    if r < 1 or s < 0:
        raise ValueError("need r >= 1 and s >= 0")
    if orbit is None:
        orbit = exact_orbit(phi, P, r + s)
    A, Bpt = orbit[r + s], orbit[s]
    if A.coords == Bpt.coords:
        raise FiniteOrbitError(f"phi^{r + s}(P) = phi^{s}(P); the orbit is finite")
    return cross_difference(A, Bpt)


@dataclass(frozen=True)
class DmRecord:
    """D(m) = product of the factors B(r,s) over r+s = m, r >= 1."""

    m: int
    factors: dict
    D: int


def D_m(phi, P: ProjPointQ, m: int, orbit=None) -> DmRecord:
    if m < 1:
        raise ValueError("need m >= 1")
    if orbit is None:
        orbit = exact_orbit(phi, P, m)
    factors = {}
    D = 1
    for s in range(m):
        r = m - s
        b = B_rs(phi, P, r, s, orbit=orbit)
        factors[(r, s)] = b
        D *= b
    return DmRecord(m=m, factors=factors, D=D)


def dm_equivalence_check(census, dm: DmRecord) -> list:
    """Primes of the census where p | D(m) and m_p <= m disagree.

    Divisibility is decided by trial division of D(m) by each census prime;
    any disagreement must lie in the census's exceptional set.
    """
    violations = []
    for rec in census.records:
        divides = dm.D % rec.p == 0
        small_orbit = (not rec.bad) and rec.m <= dm.m
        if divides != small_orbit:
            violations.append(rec.p)
    return violations


@dataclass(frozen=True)
class DmGrowth:
    """log log D(m) samples with the m values skipped for D(m) <= e."""

    points: tuple  # (m, loglog D(m)) pairs
    skipped: tuple
    slope: float  # least-squares slope over all retained points


def dm_growth(phi, P: ProjPointQ, m_max: int, orbit=None) -> DmGrowth:
    if orbit is None:
        orbit = exact_orbit(phi, P, m_max)
    points = []
    skipped = []
    for m in range(1, m_max + 1):
        D = D_m(phi, P, m, orbit=orbit).D
        logD = log_big(D) if D > 1 else 0.0
        if logD <= 1.0:
            skipped.append(m)
        else:
            points.append((m, math.log(logD)))
    slope = float("nan")
    if len(points) >= 2:
        slope = least_squares_slope([m for m, _ in points], [y for _, y in points])
    return DmGrowth(points=tuple(points), skipped=tuple(skipped), slope=slope)


def loglog_slope(growth: DmGrowth, m_lo: int, m_hi: int) -> float:
    """Least-squares slope of log log D(m) restricted to m_lo <= m <= m_hi."""
    sel = [(m, y) for m, y in growth.points if m_lo <= m <= m_hi]
    if len(sel) < 2:
        raise ValueError(f"fewer than two samples in [{m_lo}, {m_hi}]")
    return least_squares_slope([m for m, _ in sel], [y for _, y in sel])


def min_loglog_ratio(census) -> float:
    """min over good primes p >= 16 of m_p / log log p; strictly positive."""
    best = None
    for rec in census.records:
        if rec.bad or rec.p < 16:
            continue
        ratio = rec.m / math.log(math.log(rec.p))
        if best is None or ratio < best:
            best = ratio
    if best is None:
        raise ValueError("census has no good primes >= 16")
    return best
