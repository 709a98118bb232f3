"""Finite-X analytic statistics over a census.

The weighted sums all use the Mertens weight log p / p. Bad primes carry
m = infinity, so they contribute 0 wherever a factor e^(-s m^lambda) or
1/m^e appears, and they satisfy every predicate of the form m >= t.

All folds run in ascending-p order so float results are reproducible
bit-for-bit regardless of how the census itself was computed.
"""

import math
from dataclasses import dataclass

TERM_FLOOR = 1e-30  # truncation threshold for the m-series bounds
_EXP_UNDERFLOW = 700.0  # e^-x is a hard float zero past this


def _decay(x: float) -> float:
    """e^-x without range errors; underflows to exact 0."""
    return math.exp(-x) if x < _EXP_UNDERFLOW else 0.0


@dataclass(frozen=True)
class PartialSum:
    """Truncated value of sum over p <= X of log p / (p e^(s m_p^lambda))."""

    lam: float
    s: float
    limit: int
    value: float


def s_partial(census, lam: float, s: float) -> PartialSum:
    if lam < 1 or s <= 0:
        raise ValueError("need lambda >= 1 and s > 0")
    total = 0.0
    for rec in census.records:
        if rec.bad:
            continue
        total += math.log(rec.p) / rec.p * _decay(s * rec.m**lam)
    return PartialSum(lam=lam, s=s, limit=census.limit, value=total)


def abel_identity_check(census, lam: float, s: float) -> float:
    """Relative residual between the direct sum and its Abel rearrangement.

    With G(t) = e^(-s t^lambda) and T(m) = sum of log p / p over m_p <= m,
    the finite rearrangement (boundary term included, M = max finite m_p)

        sum_{m=1}^{M} (G(m) - G(m+1)) T(m)  +  G(M+1) T(M)

    equals the direct sum exactly; the residual is pure rounding.
    """
    direct = s_partial(census, lam, s).value
    finite = [rec for rec in census.records if not rec.bad]
    if not finite:
        return 0.0
    M = max(rec.m for rec in finite)
    bucket = [0.0] * (M + 1)
    for rec in finite:
        bucket[rec.m] += math.log(rec.p) / rec.p
    G = lambda t: _decay(s * t**lam)
    rearranged = 0.0
    T = 0.0
    for m in range(1, M + 1):
        T += bucket[m]
        rearranged += (G(m) - G(m + 1)) * T
    rearranged += G(M + 1) * T
    scale = max(abs(direct), abs(rearranged))
    if scale == 0.0:
        return 0.0
    return abs(direct - rearranged) / scale


@dataclass(frozen=True)
class DensityEstimate:
    """Mertens-normalized weight of the primes satisfying a predicate."""

    descriptor: str
    limit: int
    mass: float


def weighted_density(census, predicate, descriptor: str = "") -> DensityEstimate:
    """(sum of log p/p over predicate) / (sum of log p/p over all p <= X).

    The predicate receives (p, m) with m = math.inf for bad primes.
    """
    if not census.records:
        raise ValueError("empty census")
    num = 0.0
    den = 0.0
    for rec in census.records:
        w = math.log(rec.p) / rec.p
        den += w
        m = math.inf if rec.bad else rec.m
        if predicate(rec.p, m):
            num += w
    return DensityEstimate(descriptor=descriptor, limit=census.limit, mass=num / den)


def density_gamma(census, gamma: float) -> DensityEstimate:
    """Weight of {p : m_p >= (log p)^gamma} for 0 < gamma < 1."""
    if not 0 < gamma < 1:
        raise ValueError("need 0 < gamma < 1")
    return weighted_density(
        census, lambda p, m: m >= math.log(p) ** gamma, descriptor=f"m >= (log p)^{gamma}"
    )


def density_eps(census, eps: float) -> DensityEstimate:
    """Weight of {p : m_p >= eps log p} for eps > 0."""
    if eps <= 0:
        raise ValueError("need eps > 0")
    return weighted_density(
        census, lambda p, m: m >= eps * math.log(p), descriptor=f"m >= {eps} log p"
    )


def table_statistic(census, exponent: float, convention: str = "orbit") -> float:
    """(1 / log X) * sum over good p <= X of log p / m_p^exponent."""
    if exponent <= 0:
        raise ValueError("need exponent > 0")
    total = 0.0
    for rec in census.records:
        m = rec.m_for(convention)
        if m is None:
            continue
        total += math.log(rec.p) / m**exponent
    return total / math.log(census.limit)


@dataclass(frozen=True)
class MsumBound:
    """Check of sum_{m>=1} m^mu e^(-s m^lambda) <= C0 s^(-(mu+1)/lambda)."""

    lam: float
    mu: float
    c0: float
    worst_ratio: float  # max over the grid of value * s^((mu+1)/lambda) / C0
    ok: bool


def msum_series(lam: float, mu: float, s: float) -> float:
    """Truncated sum of m^mu e^(-s m^lambda); stops past the peak term."""
    peak = (mu / (s * lam)) ** (1.0 / lam) if mu > 0 else 0.0
    total = 0.0
    m = 1
    while True:
        term = m**mu * _decay(s * m**lam)
        total += term
        if m > peak and term < TERM_FLOOR:
            return total
        m += 1


def msum_bound_check(lam: float, mu: float, s_grid) -> MsumBound:
    """Scale-invariance bound for the tail series, against the integral constant.

    C0 is the s-free integral of u^mu e^(-u^lambda), via Gamma((mu+1)/lambda)
    / lambda, plus 1 to absorb the sum-vs-integral discretization.
    """
    if lam <= 0 or mu < 0:
        raise ValueError("need lambda > 0 and mu >= 0")
    c0 = math.gamma((mu + 1.0) / lam) / lam + 1.0
    worst = 0.0
    for s in s_grid:
        scaled = msum_series(lam, mu, s) * s ** ((mu + 1.0) / lam)
        worst = max(worst, scaled / c0)
    return MsumBound(lam=lam, mu=mu, c0=c0, worst_ratio=worst, ok=worst <= 1.0)


@dataclass(frozen=True)
class SumLogPCheck:
    """Check of sum over census primes dividing D of log p/p <= c1 loglog D + c2."""

    m: int
    lhs: float
    rhs: float
    ok: bool
    skipped: bool  # D <= e leaves log log D undefined


def sumlogp_check(dm, census, c1: float = 2.0, c2: float = 2.0) -> SumLogPCheck:
    from .heights import log_big

    logD = log_big(dm.D) if dm.D > 1 else 0.0
    if logD <= 1.0:
        return SumLogPCheck(m=dm.m, lhs=0.0, rhs=float("nan"), ok=True, skipped=True)
    lhs = 0.0
    for rec in census.records:
        if dm.D % rec.p == 0:
            lhs += math.log(rec.p) / rec.p
    rhs = c1 * math.log(logD) + c2
    return SumLogPCheck(m=dm.m, lhs=lhs, rhs=rhs, ok=lhs <= rhs, skipped=False)


def log_grid(lo: float, hi: float, count: int) -> list:
    """count log-spaced values from lo to hi inclusive."""
    if count < 2:
        return [lo]
    ratio = (hi / lo) ** (1.0 / (count - 1))
    return [lo * ratio**i for i in range(count)]


def scaled_spartial_profile(census, lam: float, s_grid) -> list:
    """[(s, S, s^(1/lambda) S)] rows for the bounded-shadow report."""
    rows = []
    for s in s_grid:
        value = s_partial(census, lam, s).value
        rows.append((s, value, value * s ** (1.0 / lam)))
    return rows
