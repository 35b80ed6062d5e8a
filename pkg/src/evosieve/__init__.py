"""Evolutionary lattice sieving for the shortest vector problem."""

from .errors import (
    BasisError,
    DependentRows,
    DimensionTooLarge,
    DimensionTooSmall,
    InvalidDelta,
    InvalidParams,
    LatticeError,
    NotSquare,
    ParseError,
    SamplerStarvation,
    ZeroInput,
)
from .io import (
    RunManifest,
    format_basis,
    generate_random_basis,
    parse_basis,
    read_basis,
    write_basis,
    write_stats_csv,
)
from .lattice import (
    BasisMatrix,
    GramSchmidtData,
    LatticePoint,
    add_signed_basis_vector,
    build_basis,
    canonicalize,
    gram_determinant,
    gram_schmidt,
    make_point,
    sub_points,
)
from .oracle import (
    ComplexityEstimate,
    enumerate_svp,
    estimate_complexity,
    gaussian_heuristic,
    pair_angle,
)
from .reduction import is_lll_reduced, lll_reduce
from .sampling import SamplerParams, discrete_gaussian_1d, klein_sample, naive_sample
from .sieve import (
    GenerationStats,
    Population,
    SieveConfig,
    SieveResult,
    Variant,
    generation_global,
    generation_local,
    initialize_population,
    mutate,
    reduce_pair,
    run_sieve,
)

__version__ = "0.1.0"
