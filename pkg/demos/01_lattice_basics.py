"""
Lattices, reduction and the shortest vector
===========================================

A walk through the building blocks: integer bases, exact Gram-Schmidt data,
LLL reduction, the Gaussian heuristic and exhaustive enumeration.
"""

# %%
# A lattice is given by integer basis rows.  Gram-Schmidt data are exact
# fractions, so the product of the squared Gram-Schmidt norms is the Gram
# determinant, with no rounding at all.
from fractions import Fraction

from evosieve import (
    build_basis,
    enumerate_svp,
    gaussian_heuristic,
    generate_random_basis,
    gram_determinant,
    gram_schmidt,
    lll_reduce,
)

B = build_basis([[7, 0], [3, 1]])
gso = gram_schmidt(B)
print("mu[1][0] =", gso.mu[1][0])
print("|b*|^2   =", gso.bstar_norm_sq)
prod = Fraction(1)
for x in gso.bstar_norm_sq:
    prod *= x
print("product  =", prod, " Gram determinant =", gram_determinant(B))

# %%
# LLL turns a skewed basis into one with short, nearly orthogonal rows.  For
# this tiny lattice the first reduced row is already the shortest vector.
R = lll_reduce(B)
print("reduced rows:", R.rows)
print("shortest:", enumerate_svp(R))

# %%
# A knapsack-style lattice: one large entry in the corner, ones on the rest of
# the diagonal.  The volume equals the corner entry.
B = generate_random_basis(24, 60, seed=5)
print("corner entry has", B.rows[0][0].bit_length(), "bits")
R = lll_reduce(B)
gh = gaussian_heuristic(R)
first = sum(x * x for x in R.rows[0]) ** 0.5
svp = enumerate_svp(R)

# %%
# The Gaussian heuristic predicts the length of the shortest vector of a
# random lattice of this volume.  LLL gets within a small factor; enumeration
# finds the exact minimum.
print(f"Gaussian heuristic      {gh:8.3f}")
print(f"first LLL row           {first:8.3f}")
print(f"shortest (enumeration)  {svp.norm:8.3f}")
