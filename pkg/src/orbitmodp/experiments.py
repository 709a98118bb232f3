"""Reproduction protocol for the quadratic-family orbit statistic tables.

The statistic is (1/log X) * sum over p <= X of log p / m_p^2, sampled at
fixed prime checkpoints for the maps z^2+c. The original experiment left
the starting point unstated, so reproduction is calibration-then-verify:
the target values below are locked, `calibrate` searches integer starts
alpha in [-10, 10] and both orbit-size conventions for the best match per
column, and the resolved (alpha, convention) is committed here for
regression. A column is REPRODUCED when its max deviation is <= 1e-3
(the targets carry 4 decimals).

The committed calibration: every column is reproduced by alpha = 3 with
the orbit (tail + cycle) convention, to within 5e-5.
"""

import math
from dataclasses import dataclass

from .dynamics import AffinePolyMap, ProjPointQ, describe_map, is_preperiodic, normalize
from .orbits import Census, orbit_census

# Checkpoints: every 200th prime up to 20000 for the five-map table; the
# z^2+1 deep run extends to 50000.
TABLE1_CHECKPOINTS = (1223, 2741, 4409, 6133, 7919, 9733, 11657, 13499, 15401, 17389, 19423)
TABLE2_CHECKPOINTS = (6133, 13499, 21383, 29443, 37813, 46447)

TABLE1_COLUMNS = (-2, -1, 0, 1, 2)  # c values, rendered as z^2+c

# Regression targets for the checkpoint statistic, locked before calibration.
TABLE1_TARGETS = {
    -2: (1.4733, 1.7770, 1.9864, 2.1050, 2.1657, 2.2507, 2.2868, 2.3366, 2.3928, 2.4279, 2.4551),
    -1: (1.6042, 1.6576, 1.6937, 1.6964, 1.7330, 1.7372, 1.7622, 1.7782, 1.8822, 1.9119, 1.9211),
    0: (1.4156, 1.5116, 1.5711, 1.6860, 1.8091, 1.8555, 1.8825, 1.9351, 1.9973, 2.0528, 2.0726),
    1: (1.3539, 1.4089, 1.5165, 1.6068, 1.6314, 1.6596, 1.7212, 1.7223, 1.7307, 1.7376, 1.7421),
    2: (1.3533, 1.4232, 1.4911, 1.5751, 1.5988, 1.6148, 1.6722, 1.7049, 1.7226, 1.7475, 1.7582),
}
TABLE2_TARGETS = (1.6068, 1.7223, 1.7627, 1.7790, 1.8092, 1.8398)

# Resolved once by calibrate(); committed for regression testing.
CALIBRATED_START = {c: 3 for c in TABLE1_COLUMNS}
CALIBRATED_CONVENTION = "orbit"

REPRODUCTION_TOL = 1e-3
ALPHA_RANGE = (-10, 10)


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings for one table run; checkpoints must be strictly increasing."""

    map_desc: str = "z^2+1"
    start: str = "3"
    checkpoints: tuple = TABLE2_CHECKPOINTS
    convention: str = CALIBRATED_CONVENTION
    exponent: float = 2.0
    out_format: str = "csv"

    def __post_init__(self):
        if any(a >= b for a, b in zip(self.checkpoints, self.checkpoints[1:])):
            raise ValueError("checkpoints must be strictly increasing")


class FiniteOrbitStartError(ValueError):
    """Start point is preperiodic over Q; the statistic degenerates."""


def quadratic_map(c: int) -> AffinePolyMap:
    return AffinePolyMap((c, 0, 1))


def require_infinite_orbit(phi, P: ProjPointQ) -> None:
    if is_preperiodic(phi, P):
        raise FiniteOrbitStartError(
            f"start {P.coords} is preperiodic under {describe_map(phi)}; "
            "the checkpoint statistic degenerates on finite orbits"
        )


def checkpoint_statistics(census: Census, checkpoints, exponent: float = 2.0,
                          convention: str = "orbit") -> list:
    """Statistic value at each checkpoint, via one pass over the census."""
    values = []
    acc = 0.0
    idx = 0
    records = census.records
    for X in checkpoints:
        if X > census.limit:
            raise ValueError(f"checkpoint {X} exceeds census limit {census.limit}")
        while idx < len(records) and records[idx].p <= X:
            m = records[idx].m_for(convention)
            if m is not None:
                acc += math.log(records[idx].p) / m**exponent
            idx += 1
        values.append(acc / math.log(X))
    return values


def run_quadratic_column(c: int, alpha: int, checkpoints, convention: str = "orbit",
                         jobs: int = 1) -> list:
    """Checkpoint statistics for z^2+c from an integer start with infinite orbit."""
    phi = quadratic_map(c)
    P = normalize([alpha, 1])
    require_infinite_orbit(phi, P)
    census = orbit_census(phi, P, max(checkpoints), jobs=jobs)
    return checkpoint_statistics(census, checkpoints, convention=convention)


@dataclass(frozen=True)
class CalibrationColumn:
    """Best (alpha, convention) found for one target column."""

    c: int
    alpha: int
    convention: str
    max_dev: float
    reproduced: bool
    values: tuple
    candidates: int  # number of (alpha, convention) pairs scored


def calibrate_column(c: int, targets, checkpoints, alpha_range=ALPHA_RANGE,
                     jobs: int = 1) -> CalibrationColumn:
    phi = quadratic_map(c)
    best = None
    scored = 0
    for alpha in range(alpha_range[0], alpha_range[1] + 1):
        P = normalize([alpha, 1])
        if is_preperiodic(phi, P):
            continue
        census = orbit_census(phi, P, max(checkpoints), jobs=jobs)
        for convention in ("orbit", "cycle"):
            values = checkpoint_statistics(census, checkpoints, convention=convention)
            dev = max(abs(v - t) for v, t in zip(values, targets))
            scored += 1
            if best is None or dev < best[0]:
                best = (dev, alpha, convention, tuple(values))
    if best is None:
        raise ValueError(f"no start in {alpha_range} has infinite orbit under z^2+{c}")
    dev, alpha, convention, values = best
    return CalibrationColumn(
        c=c,
        alpha=alpha,
        convention=convention,
        max_dev=dev,
        reproduced=dev <= REPRODUCTION_TOL,
        values=values,
        candidates=scored,
    )


def calibrate(columns=TABLE1_COLUMNS, alpha_range=ALPHA_RANGE, jobs: int = 1,
              checkpoints=TABLE1_CHECKPOINTS, targets=None) -> list:
    """Search every column; returns a CalibrationColumn per c."""
    if targets is None:
        targets = TABLE1_TARGETS
    return [
        calibrate_column(c, targets[c], checkpoints, alpha_range=alpha_range, jobs=jobs)
        for c in columns
    ]


def table1(jobs: int = 1, alpha: int = None, convention: str = None) -> dict:
    """All five columns at the table-1 checkpoints; calibrated settings by default."""
    out = {}
    for c in TABLE1_COLUMNS:
        a = CALIBRATED_START[c] if alpha is None else alpha
        conv = convention or CALIBRATED_CONVENTION
        out[c] = run_quadratic_column(c, a, TABLE1_CHECKPOINTS, convention=conv, jobs=jobs)
    return out


def table2(jobs: int = 1, alpha: int = None, convention: str = None) -> list:
    a = CALIBRATED_START[1] if alpha is None else alpha
    conv = convention or CALIBRATED_CONVENTION
    return run_quadratic_column(1, a, TABLE2_CHECKPOINTS, convention=conv, jobs=jobs)


def max_deviation(values, targets) -> float:
    return max(abs(v - t) for v, t in zip(values, targets))
