from fractions import Fraction

import numpy as np
import pytest

from evosieve import build_basis, generate_random_basis

ACCEPTANCE_LINES: list[str] = []


def identity(d):
    return build_basis([[int(i == j) for j in range(d)] for i in range(d)])


def random_basis(rng, d, lo=-20, hi=20):
    """Random full-rank integer basis (retries on the rare singular draw)."""
    while True:
        rows = rng.integers(lo, hi + 1, size=(d, d)).tolist()
        try:
            return build_basis(rows)
        except Exception:
            continue


def naive_gram_schmidt(rows):
    """Textbook projection-based Gram-Schmidt over Fractions."""
    n = len(rows)
    bstar, mu = [], [[Fraction(0)] * n for _ in range(n)]
    for i, r in enumerate(rows):
        v = [Fraction(x) for x in r]
        for j in range(i):
            mu[i][j] = sum(Fraction(a) * b for a, b in zip(r, bstar[j])) / sum(
                b * b for b in bstar[j]
            )
            v = [a - mu[i][j] * b for a, b in zip(v, bstar[j])]
        mu[i][i] = Fraction(1)
        bstar.append(v)
    return mu, [sum(x * x for x in v) for v in bstar]


def fraction_det(m):
    """Determinant by Gaussian elimination over Fractions."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def gram_matrix(rows):
    return [[sum(a * b for a, b in zip(r, s)) for s in rows] for r in rows]


def matvec_coords(basis, coeffs):
    """coords = sum_i coeffs[i] * b_i, recomputed with object-dtype numpy."""
    B = np.array(basis.tolist(), dtype=object)
    return tuple(int(x) for x in np.array(list(coeffs), dtype=object) @ B)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def knapsack():
    return generate_random_basis


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def solve_coeffs(rows, target):
    """Rational x with x @ rows = target, by Gauss-Jordan elimination on the transpose."""
    n = len(rows)
    a = [[Fraction(rows[j][i]) for j in range(n)] + [Fraction(target[i])] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        a[c] = [x / a[c][c] for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[i][n] for i in range(n)]


def same_lattice(b1, b2):
    """True when every row of each basis is an integer combination of the other's."""
    return all(
        all(x.denominator == 1 for x in solve_coeffs(src.rows, r))
        for src, dst in ((b1, b2), (b2, b1))
        for r in dst.rows
    )
