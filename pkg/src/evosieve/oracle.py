"""Ground-truth instruments: exact enumeration, Gaussian heuristic, cost estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath

from .errors import DimensionTooLarge, InvalidParams, ZeroInput
from .lattice import (
    BasisMatrix,
    GramSchmidtData,
    LatticePoint,
    gram_determinant,
    gram_schmidt,
    make_point,
)

__all__ = [
    "ComplexityEstimate",
    "enumerate_svp",
    "gaussian_heuristic",
    "estimate_complexity",
    "pair_angle",
    "ENUM_MAX_DIM",
]

ENUM_MAX_DIM = 30


def enumerate_svp(
    basis: BasisMatrix,
    gso: Optional[GramSchmidtData] = None,
    *,
    allow_large: bool = False,
) -> LatticePoint:
    """Exact shortest nonzero vector by Schnorr-Euchner enumeration.

    Depth-first search over coefficient vectors with zig-zag ordering at
    each level, starting from radius ``|b_0|`` and shrinking whenever a
    shorter vector is found.  Pruning decisions use floating-point
    Gram-Schmidt data; since squared norms of an integer lattice are
    integers, the search radius is kept half a unit below the best exact
    norm found so far, which absorbs rounding error.  The basis should be
    LLL-reduced, otherwise the search tree is enormous.

    Raises
    ------
    DimensionTooLarge
        If ``basis.dim > 30`` and ``allow_large`` is false.
    """
    d = basis.dim
    if d > ENUM_MAX_DIM and not allow_large:
        raise DimensionTooLarge(
            f"unpruned enumeration is limited to d <= {ENUM_MAX_DIM} (got {d}); "
            "pass allow_large=True to override"
        )
    if gso is None:
        gso = gram_schmidt(basis)
    mu = [[float(x) for x in row] for row in gso.mu]
    bstar = [float(x) for x in gso.bstar_norm_sq]
    G = [[sum(a * b for a, b in zip(r, s)) for s in basis.rows] for r in basis.rows]

    def exact_norm(x):
        nz = [i for i in range(d) if x[i]]
        return sum(x[i] * x[j] * G[i][j] for i in nz for j in nz)

    best_coeffs = [1] + [0] * (d - 1)
    best_norm = G[0][0]
    for i in range(1, d):
        if G[i][i] < best_norm:
            best_norm = G[i][i]
            best_coeffs = [int(i == j) for j in range(d)]
    radius = best_norm - 0.5

    x = [0] * d
    center = [0.0] * d
    step = [0] * d
    direction = [0] * d
    # tail_zero[k]: every coefficient above level k is zero, so only
    # non-negative x[k] is explored (each +-v pair is visited once)
    tail_zero = [False] * d + [True]
    partial = [0.0] * (d + 1)  # squared length of the projection onto levels > k - 1
    # center_acc[m][j] = -sum_{i >= m} x_i * mu[i][j]
    center_acc = [[0.0] * d for _ in range(d + 1)]

    def init_level(k):
        c = center_acc[k + 1][k]
        center[k] = c
        x[k] = int(round(c))
        step[k] = 0
        direction[k] = 1 if c >= x[k] else -1
        tail_zero[k] = tail_zero[k + 1] and (k == d - 1 or x[k + 1] == 0)

    def next_value(k):
        if tail_zero[k]:
            x[k] += 1
        else:
            step[k] += 1
            x[k] += direction[k] * step[k]
            direction[k] = -direction[k]

    k = d - 1
    init_level(k)
    while True:
        y = x[k] - center[k]
        length = partial[k + 1] + y * y * bstar[k]
        if length <= radius:
            if k == 0:
                if any(x):
                    n_sq = exact_norm(x)
                    if 0 < n_sq < best_norm:
                        best_norm = n_sq
                        best_coeffs = list(x)
                        radius = best_norm - 0.5
                next_value(0)
            else:
                partial[k] = length
                acc_hi, acc = center_acc[k + 1], center_acc[k]
                xk = x[k]
                muk = mu[k]
                for j in range(k):
                    acc[j] = acc_hi[j] - xk * muk[j]
                k -= 1
                init_level(k)
        else:
            k += 1
            if k == d:
                break
            next_value(k)

    point = make_point(basis, best_coeffs)
    assert point is not None and point.norm_sq == best_norm
    return point


def gaussian_heuristic(basis: BasisMatrix) -> float:
    """Expected shortest-vector length ``Gamma(d/2+1)^(1/d) / sqrt(pi) * vol^(1/d)``."""
    d = basis.dim
    log_det_gram = _log_int(gram_determinant(basis))
    log_gh = math.lgamma(d / 2 + 1) / d - 0.5 * math.log(math.pi) + log_det_gram / (2 * d)
    return math.exp(log_gh)


def _log_int(n: int) -> float:
    if n <= 0:
        raise ValueError("logarithm of a non-positive integer")
    shift = max(0, n.bit_length() - 1000)
    return math.log(n >> shift) + shift * math.log(2)


@dataclass(frozen=True)
class ComplexityEstimate:
    """Heuristic cost of a pairwise sieve in dimension ``dim``.

    A random pair reduces with probability ``(3/4)^(d/2)``; asking the
    ``|P|^2`` pairs to regenerate ``|P|`` children gives
    ``|P| = (4/3)^(d/2)`` and quadratic time ``|P|^2``.
    """

    dim: int
    pop_size_estimate: float
    log2_pop: float
    log2_time: float
    reduction_probability: float


def estimate_complexity(d: int) -> ComplexityEstimate:
    if d < 0:
        raise InvalidParams(f"dimension must be non-negative, got {d}")
    with mpmath.workdps(50):
        half = mpmath.mpf(d) / 2
        pop = mpmath.power(mpmath.mpf(4) / 3, half)
        prob = mpmath.power(mpmath.mpf(3) / 4, half)
        log2_pop = half * mpmath.log(mpmath.mpf(4) / 3, 2)
        return ComplexityEstimate(
            dim=d,
            pop_size_estimate=float(pop),
            log2_pop=float(log2_pop),
            log2_time=float(2 * log2_pop),
            reduction_probability=float(prob),
        )


def pair_angle(v: LatticePoint, w: LatticePoint) -> float:
    """Angle between two nonzero lattice vectors, in radians."""
    if v.norm_sq == 0 or w.norm_sq == 0:
        raise ZeroInput("angle undefined for the zero vector")
    ip = sum(a * b for a, b in zip(v.coords, w.coords))
    prod = v.norm_sq * w.norm_sq
    r = math.isqrt(prod)
    denom = float(r) if r * r == prod else math.sqrt(prod)
    cos = ip / denom
    return math.acos(max(-1.0, min(1.0, cos)))
