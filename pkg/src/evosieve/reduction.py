"""LLL basis reduction in exact integer arithmetic.

The reduction keeps the Gram-Schmidt data in integral form (Gram
determinants ``d_k`` and scaled coefficients ``lam[k][j] = d_j * mu[k][j]``)
so every step is an exact integer operation, with ``mu`` recovered as the
rational ``lam / d``.  See H. Cohen, *A Course in Computational Algebraic
Number Theory*, Algorithm 2.6.7.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import DependentRows, InvalidDelta
from .lattice import BasisMatrix, gram_schmidt

__all__ = ["lll_reduce", "is_size_reduced", "satisfies_lovasz", "is_lll_reduced", "as_delta"]

DEFAULT_DELTA = Fraction(99, 100)

DeltaLike = Union[Fraction, int, float, str]


def as_delta(delta: DeltaLike) -> Fraction:
    """Coerce ``delta`` to an exact rational in ``(1/4, 1]``."""
    if isinstance(delta, float):
        delta = Fraction(repr(delta))
    elif not isinstance(delta, Rational):
        try:
            delta = Fraction(delta)
        except (TypeError, ValueError) as exc:
            raise InvalidDelta(f"cannot interpret delta={delta!r}") from exc
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta <= 1:
        raise InvalidDelta(f"delta must lie in (1/4, 1], got {delta}")
    return delta


def lll_reduce(basis: BasisMatrix, delta: DeltaLike = DEFAULT_DELTA) -> BasisMatrix:
    """LLL-reduce ``basis`` with Lovasz parameter ``delta``.

    The output generates the same lattice, is size-reduced
    (``|mu[i][j]| <= 1/2``) and satisfies the Lovasz condition
    ``delta * |b*_{i-1}|^2 <= |b*_i|^2 + mu[i][i-1]^2 * |b*_{i-1}|^2``.
    """
    delta = as_delta(delta)
    p, q = delta.numerator, delta.denominator
    n = basis.dim
    b = [list(r) for r in basis.rows]
    lam = [[0] * n for _ in range(n)]
    # dd[k + 1] is the Gram determinant of b_0..b_k; dd[0] = 1
    dd = [1] + [0] * n

    def dot(x, y):
        return sum(s * t for s, t in zip(x, y))

    def incorporate(k):
        for j in range(k + 1):
            u = dot(b[k], b[j])
            for i in range(j):
                u = (dd[i + 1] * u - lam[k][i] * lam[j][i]) // dd[i]
            if j < k:
                lam[k][j] = u
            else:
                if u <= 0:
                    raise DependentRows(f"row {k} is in the span of the previous rows")
                dd[k + 1] = u

    def reduce(k, l):
        # size-reduce b_k against b_l
        dl = dd[l + 1]
        if 2 * abs(lam[k][l]) <= dl:
            return
        r = (2 * lam[k][l] + dl) // (2 * dl)
        bk, bl = b[k], b[l]
        for t in range(n):
            bk[t] -= r * bl[t]
        lam[k][l] -= r * dl
        lk, ll = lam[k], lam[l]
        for i in range(l):
            lk[i] -= r * ll[i]

    def swap(k):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        d_prev, d_km1, d_k = dd[k - 1], dd[k], dd[k + 1]
        new_dkm1 = (d_prev * d_k + lk * lk) // d_km1
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d_k * lam[i][k - 1] - lk * t) // d_km1
            lam[i][k - 1] = (new_dkm1 * t + lk * lam[i][k]) // d_k
        dd[k] = new_dkm1

    incorporate(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            incorporate(k)
        reduce(k, k - 1)
        lk = lam[k][k - 1]
        if q * (dd[k + 1] * dd[k - 1] + lk * lk) < p * dd[k] * dd[k]:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                reduce(k, l)
            k += 1
    return BasisMatrix(tuple(tuple(r) for r in b))


def is_size_reduced(basis: BasisMatrix) -> bool:
    gso = gram_schmidt(basis)
    half = Fraction(1, 2)
    return all(abs(gso.mu[i][j]) <= half for i in range(basis.dim) for j in range(i))


def satisfies_lovasz(basis: BasisMatrix, delta: DeltaLike = DEFAULT_DELTA) -> bool:
    delta = as_delta(delta)
    gso = gram_schmidt(basis)
    bs, mu = gso.bstar_norm_sq, gso.mu
    return all(
        delta * bs[i - 1] <= bs[i] + mu[i][i - 1] ** 2 * bs[i - 1] for i in range(1, basis.dim)
    )


def is_lll_reduced(basis: BasisMatrix, delta: DeltaLike = DEFAULT_DELTA) -> bool:
    """Check size reduction and the Lovasz condition exactly."""
    return is_size_reduced(basis) and satisfies_lovasz(basis, delta)
