"""Exact orbit statistics of integer self-maps of projective space mod p."""

from .analytic import (
    DensityEstimate,
    PartialSum,
    abel_identity_check,
    density_eps,
    density_gamma,
    msum_bound_check,
    s_partial,
    sumlogp_check,
    table_statistic,
    weighted_density,
)
from .baseline import RhoSample, compare_census, sample_rho
from .dynamics import (
    AffinePolyMap,
    IndeterminatePointError,
    InvalidPointError,
    MapParseError,
    ProjectiveMorphism,
    ProjPointFp,
    ProjPointQ,
    eval_exact,
    eval_mod_p,
    exact_orbit,
    normalize,
    parse_map_block,
    reduce_point,
)
from .heights import (
    B_rs,
    D_m,
    DmRecord,
    cross_difference,
    distance_inequality_check,
    dm_equivalence_check,
    dm_growth,
    height,
    height_growth_check,
    min_loglog_ratio,
)
from .orbits import Census, OrbitStats, orbit_census, orbit_stats, read_census_csv, write_census_csv
from .primes import PrimeTable, Residue, mod_pow, sieve_primes

__version__ = "0.1.0"
