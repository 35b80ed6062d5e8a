"""Exact lattice arithmetic.

Bases are square integer matrices whose rows generate the lattice.  Lattice
points carry both their coefficient vector (the genotype) and their
coordinate vector, together with the squared Euclidean norm used as fitness.
All arithmetic is on Python integers, so entries may be arbitrarily large.

Indices are 0-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import DependentRows, DimensionTooSmall, NotSquare, ZeroInput

__all__ = [
    "BasisMatrix",
    "LatticePoint",
    "GramSchmidtData",
    "build_basis",
    "make_point",
    "sub_points",
    "canonicalize",
    "is_canonical",
    "add_signed_basis_vector",
    "gram_schmidt",
    "gram_determinant",
]


@dataclass(frozen=True)
class BasisMatrix:
    """Validated lattice basis; row ``i`` is the basis vector ``b_i``.

    Build instances with :func:`build_basis`, which checks squareness and
    linear independence.
    """

    rows: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.rows[i]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @cached_property
    def array(self) -> np.ndarray:
        """Object-dtype copy of the rows (exact Python ints)."""
        a = np.empty((self.dim, self.dim), dtype=object)
        for i, r in enumerate(self.rows):
            a[i, :] = r
        return a

    @cached_property
    def max_abs_entry(self) -> int:
        return max(abs(x) for r in self.rows for x in r)


@dataclass(frozen=True)
class LatticePoint:
    """A population member.

    ``coords == sum(coeffs[i] * b_i)`` for the basis the point was built
    against, and ``norm_sq == sum(c * c for c in coords)``.
    """

    coeffs: tuple[int, ...]
    coords: tuple[int, ...]
    norm_sq: int

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    def __neg__(self) -> "LatticePoint":
        return LatticePoint(
            tuple(-c for c in self.coeffs), tuple(-x for x in self.coords), self.norm_sq
        )


@dataclass(frozen=True)
class GramSchmidtData:
    """Exact Gram-Schmidt data of a basis.

    ``mu[i][j]`` is the projection coefficient of ``b_i`` on ``b*_j`` (lower
    triangular, unit diagonal) and ``bstar_norm_sq[i] == |b*_i|^2``.
    """

    mu: tuple[tuple[Fraction, ...], ...]
    bstar_norm_sq: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return len(self.bstar_norm_sq)

    def mu_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.mu], dtype=float)

    def bstar_norm_sq_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.bstar_norm_sq], dtype=float)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _integral_gso(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Integer Gram-Schmidt data ``(lam, dd)``.

    ``dd[k]`` is the Gram determinant of the first ``k + 1`` rows and
    ``lam[k][j] = dd[j] * mu[k][j]``; both are integers for integer input.
    Raises DependentRows as soon as some ``dd[k]`` vanishes.
    """
    n = len(rows)
    lam = [[0] * n for _ in range(n)]
    dd = [0] * n
    for k in range(n):
        for j in range(k + 1):
            u = _dot(rows[k], rows[j])
            for i in range(j):
                prev = dd[i - 1] if i > 0 else 1
                u = (dd[i] * u - lam[k][i] * lam[j][i]) // prev
            if j < k:
                lam[k][j] = u
            else:
                if u <= 0:
                    raise DependentRows(f"row {k} is in the span of the previous rows")
                dd[k] = u
    return lam, dd


def build_basis(rows: Sequence[Sequence[int]]) -> BasisMatrix:
    """Validate ``rows`` and wrap them as a :class:`BasisMatrix`.

    Raises
    ------
    NotSquare
        If the rows do not form a square matrix.
    DimensionTooSmall
        If there are fewer than two rows.
    DependentRows
        If the rows are linearly dependent.
    """
    rows = [list(r) for r in rows]
    d = len(rows)
    if any(len(r) != d for r in rows):
        raise NotSquare(f"expected {d}x{d} matrix, got row lengths {[len(r) for r in rows]}")
    if d < 2:
        raise DimensionTooSmall(f"dimension must be at least 2, got {d}")
    clean = []
    for r in rows:
        out = []
        for x in r:
            if isinstance(x, (bool, float)) or not hasattr(x, "__index__"):
                raise TypeError(f"basis entries must be integers, got {x!r}")
            out.append(int(x))
        clean.append(tuple(out))
    _integral_gso(clean)
    return BasisMatrix(tuple(clean))


def gram_schmidt(basis: BasisMatrix) -> GramSchmidtData:
    """Exact rational Gram-Schmidt orthogonalisation of the basis rows."""
    lam, dd = _integral_gso(basis.rows)
    n = basis.dim
    mu = []
    for i in range(n):
        row = []
        for j in range(n):
            if j < i:
                row.append(Fraction(lam[i][j], dd[j]))
            else:
                row.append(Fraction(int(i == j)))
        mu.append(tuple(row))
    bstar = tuple(Fraction(dd[i], dd[i - 1] if i > 0 else 1) for i in range(n))
    return GramSchmidtData(tuple(mu), bstar)


def gram_determinant(basis: BasisMatrix) -> int:
    """``det(B B^T)``, i.e. the squared lattice volume."""
    return _integral_gso(basis.rows)[1][-1]


def _canonical_sign(coeffs: Sequence[int]) -> int:
    for c in coeffs:
        if c:
            return 1 if c > 0 else -1
    return 0


def is_canonical(p: LatticePoint) -> bool:
    return _canonical_sign(p.coeffs) == 1


def canonicalize(p: LatticePoint) -> LatticePoint:
    """Return the representative of ``{p, -p}`` whose first nonzero coefficient is positive."""
    s = _canonical_sign(p.coeffs)
    if s == 0:
        raise ZeroInput("cannot canonicalize the zero vector")
    return p if s > 0 else -p


def make_point(basis: BasisMatrix, coeffs: Sequence[int]) -> Optional[LatticePoint]:
    """Assemble ``sum(coeffs[i] * b_i)`` as a canonical point, or None for zero."""
    coeffs = tuple(int(c) for c in coeffs)
    if _canonical_sign(coeffs) == 0:
        return None
    d = basis.dim
    coords = [0] * d
    for c, row in zip(coeffs, basis.rows):
        if c:
            for k in range(d):
                coords[k] += c * row[k]
    coords = tuple(coords)
    return canonicalize(LatticePoint(coeffs, coords, _dot(coords, coords)))


def sub_points(v: LatticePoint, w: LatticePoint) -> Optional[LatticePoint]:
    """Canonical ``v - w``; None when the difference is the zero vector."""
    coords = tuple(a - b for a, b in zip(v.coords, w.coords))
    if not any(coords):
        return None
    coeffs = tuple(a - b for a, b in zip(v.coeffs, w.coeffs))
    return canonicalize(LatticePoint(coeffs, coords, _dot(coords, coords)))


def add_signed_basis_vector(
    p: LatticePoint, i: int, sign: int, basis: BasisMatrix
) -> Optional[LatticePoint]:
    """Canonical ``p + sign * b_i``; None if that is the zero vector."""
    d = basis.dim
    if not 0 <= i < d:
        raise IndexError(f"basis index {i} out of range for dimension {d}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    coeffs = list(p.coeffs)
    coeffs[i] += sign
    row = basis.rows[i]
    coords = tuple(x + sign * b for x, b in zip(p.coords, row))
    if not any(coords):
        return None
    return canonicalize(LatticePoint(tuple(coeffs), coords, _dot(coords, coords)))
