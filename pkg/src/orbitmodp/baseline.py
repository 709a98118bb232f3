"""Monte Carlo rho-length statistics of uniform random, self-maps of {0..n-1}.

A trajectory under a uniform random function visits distinct nodes until
the first repeat, so drawing each successor fresh IS the lazy sampling of
the function: memory stays O(rho) and n up to 1e9 is fine. Tail and cycle
are read off from the index of the first repeated node.

The generator is splitmix64 (identifier recorded in the output), and every
trial reseeds from (seed, trial index), so results do not depend on how
trials are scheduled.
"""

import math
from dataclasses import dataclass

RNG_ID = "splitmix64"
_MASK = (1 << 64) - 1


def _mix64(z: int) -> int:
    """splitmix64 finalizer."""
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Seedable 64-bit generator: state += golden gamma, output = mix(state)."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        return _mix64(self.state)

    def randbelow(self, n: int) -> int:
        """Unbiased uniform draw from [0, n) by rejection."""
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n


def trial_seed(seed: int, trial: int) -> int:
    return _mix64(_mix64(seed & _MASK) ^ (trial + 1))


def rho_trial(n: int, rng: SplitMix64):
    """(tail, cycle) of one random trajectory on n nodes."""
    if n == 1:
        return 0, 1
    seen = {}
    x = rng.randbelow(n)
    i = 0
    while x not in seen:
        seen[x] = i
        i += 1
        x = rng.randbelow(n)
    tail = seen[x]
    return tail, i - tail


@dataclass(frozen=True)
class RhoSample:
    """Mean tail/cycle/rho of `trials` random trajectories on n nodes."""

    n: int
    trials: int
    seed: int
    mean_tail: float
    mean_cycle: float
    mean_rho: float
    rng: str = RNG_ID
    rhos: tuple = None  # per-trial rho lengths when requested


def sample_rho(n: int, trials: int, seed: int, keep_trials: bool = False) -> RhoSample:
    if n < 1 or trials < 1:
        raise ValueError("need n >= 1 and trials >= 1")
    sum_tail = 0
    sum_cycle = 0
    rhos = [] if keep_trials else None
    for t in range(trials):
        tail, cycle = rho_trial(n, SplitMix64(trial_seed(seed, t)))
        sum_tail += tail
        sum_cycle += cycle
        if keep_trials:
            rhos.append(tail + cycle)
    return RhoSample(
        n=n,
        trials=trials,
        seed=seed,
        mean_tail=sum_tail / trials,
        mean_cycle=sum_cycle / trials,
        mean_rho=(sum_tail + sum_cycle) / trials,
        rhos=tuple(rhos) if keep_trials else None,
    )


def exhaustive_mean_rho(n: int) -> float:
    """Exact E[rho] by enumerating all n^n functions and n starts (tiny n only)."""
    if n > 4:
        raise ValueError("enumeration is exponential; use n <= 4")
    total = 0
    count = 0
    for code in range(n**n):
        f = []
        c = code
        for _ in range(n):
            f.append(c % n)
            c //= n
        for x0 in range(n):
            seen = set()
            x = x0
            while x not in seen:
                seen.add(x)
                x = f[x]
            total += len(seen)
            count += 1
    return total / count


EXPECTED_RHO_CONSTANT = math.sqrt(math.pi / 2)  # E[rho] ~ sqrt(pi n / 2)


@dataclass(frozen=True)
class CompareRow:
    p: int
    m: int
    sqrt_p: float
    ratio: float  # m / sqrt(p)


@dataclass(frozen=True)
class CompareResult:
    """Census orbit sizes against the sqrt(p) random-map scale."""

    rows: tuple
    quantiles: dict  # weighted (log p / p) quantiles of the ratio
    samples: tuple = ()  # optional RhoSample baselines reported alongside
    reference: float = EXPECTED_RHO_CONSTANT


def compare_census(census, samples=(), quantiles=(0.1, 0.25, 0.5, 0.75, 0.9)) -> CompareResult:
    """Ratio table m_p / sqrt(p) with Mertens-weighted quantiles.

    `samples` may carry RhoSample baselines to report alongside; they do
    not enter the quantiles.
    """
    rows = []
    weighted = []
    for rec in census.records:
        if rec.bad:
            continue
        sq = math.sqrt(rec.p)
        ratio = rec.m / sq
        rows.append(CompareRow(p=rec.p, m=rec.m, sqrt_p=sq, ratio=ratio))
        weighted.append((ratio, math.log(rec.p) / rec.p))
    weighted.sort()
    total = sum(w for _, w in weighted)
    qs = {}
    for q in quantiles:
        target = q * total
        acc = 0.0
        value = weighted[-1][0] if weighted else float("nan")
        for ratio, w in weighted:
            acc += w
            if acc >= target:
                value = ratio
                break
        qs[q] = value
    return CompareResult(rows=tuple(rows), quantiles=qs, samples=tuple(samples))
