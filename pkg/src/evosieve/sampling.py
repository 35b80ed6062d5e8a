"""Samplers for the initial population.

Widths use the standard-deviation convention: the 1-D discrete Gaussian has
weight ``exp(-(z - c)^2 / (2 sigma^2))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidParams
from .lattice import BasisMatrix, GramSchmidtData, LatticePoint, make_point
from .oracle import gaussian_heuristic

__all__ = [
    "SamplerParams",
    "default_sigma",
    "discrete_gaussian_1d",
    "klein_sample",
    "naive_sample",
]


@dataclass(frozen=True)
class SamplerParams:
    """Configuration of the initial-population sampler.

    ``sigma=None`` lets :func:`initialize_population` pick
    :func:`default_sigma` (scaled by ``width``) for the reduced basis and the
    population size.  ``kind`` selects Klein sampling or uniform small
    coefficients (``"naive"``, drawing from ``{-bound..bound}``).
    """

    sigma: Optional[float] = None
    width: float = 1.0
    tail_cut: float = 6.0
    kind: str = "klein"
    bound: int = 3

    def __post_init__(self):
        if self.sigma is not None and not self.sigma > 0:
            raise InvalidParams(f"sigma must be positive, got {self.sigma}")
        if not self.width > 0:
            raise InvalidParams(f"width must be positive, got {self.width}")
        if not self.tail_cut >= 1:
            raise InvalidParams(f"tail_cut must be at least 1, got {self.tail_cut}")
        if self.kind not in ("klein", "naive"):
            raise InvalidParams(f"unknown sampler kind {self.kind!r}")
        if self.bound < 1:
            raise InvalidParams(f"bound must be at least 1, got {self.bound}")


def default_sigma(basis: BasisMatrix, pop_size: int, width: float = 1.0) -> float:
    """Width whose samples land near the ball expected to hold ``pop_size`` points.

    By the Gaussian heuristic the ball of radius ``gh * pop_size**(1/d)``
    contains about ``pop_size`` lattice points, and a Klein sample of width
    ``sigma`` has norm close to ``sigma * sqrt(d)``.  ``width`` scales the
    result.
    """
    d = basis.dim
    return width * gaussian_heuristic(basis) * pop_size ** (1.0 / d) / math.sqrt(d)


def discrete_gaussian_1d(
    center: float, sigma: float, rng: np.random.Generator, tail_cut: float = 6.0
) -> int:
    """Sample an integer near ``center`` by rejection from a uniform proposal.

    The support is ``|z - center| <= tail_cut * sigma``, widened if needed
    so that it always contains the integer nearest to ``center``.
    """
    if not sigma > 0:
        raise InvalidParams(f"sigma must be positive, got {sigma}")
    nearest = math.floor(center + 0.5)
    lo = min(math.ceil(center - tail_cut * sigma), nearest)
    hi = max(math.floor(center + tail_cut * sigma), nearest)
    if lo == hi:
        return int(lo)
    # weights are normalised by the largest one so the loop terminates even
    # when sigma is tiny relative to the distance to the nearest integer
    dmin = (nearest - center) ** 2
    inv = 1.0 / (2.0 * sigma * sigma)
    while True:
        z = int(rng.integers(lo, hi + 1))
        if rng.random() < math.exp(-((z - center) ** 2 - dmin) * inv):
            return z


def klein_sample(
    basis: BasisMatrix,
    gso: GramSchmidtData,
    params: SamplerParams,
    rng: np.random.Generator,
    *,
    _cache: Optional[tuple] = None,
) -> Optional[LatticePoint]:
    """Randomised nearest-plane (Klein/GPV) sample centred at the origin.

    Returns None when every coefficient comes out zero.  ``params.sigma``
    must be set.
    """
    if params.sigma is None:
        raise InvalidParams("klein_sample needs an explicit sigma")
    d = basis.dim
    if _cache is None:
        mu = gso.mu_float()
        bnorm = np.sqrt(gso.bstar_norm_sq_float())
    else:
        mu, bnorm = _cache
    sigma = params.sigma
    z = np.zeros(d, dtype=float)
    coeffs = [0] * d
    for i in range(d - 1, -1, -1):
        center = -float(z[i + 1 :] @ mu[i + 1 :, i]) if i < d - 1 else 0.0
        zi = discrete_gaussian_1d(center, sigma / bnorm[i], rng, params.tail_cut)
        z[i] = zi
        coeffs[i] = zi
    return make_point(basis, coeffs)


def naive_sample(
    basis: BasisMatrix, bound: int, rng: np.random.Generator
) -> Optional[LatticePoint]:
    """Uniform coefficients in ``{-bound..bound}``; None for the all-zero draw."""
    if bound < 1:
        raise InvalidParams(f"bound must be at least 1, got {bound}")
    coeffs = rng.integers(-bound, bound + 1, size=basis.dim)
    return make_point(basis, [int(c) for c in coeffs])
