"""
How big must the population be?
===============================

A random pair of equally long vectors gives a shorter difference with
probability about (3/4)^(d/2).  Keeping the population size stable needs
|P| of order (4/3)^(d/2), and comparing all pairs costs |P|^2.  This script
tabulates the estimate and compares it with how much a real run shrinks its
population and how long a generation takes.
"""

# %%
import time

from evosieve import SieveConfig, estimate_complexity, generate_random_basis, run_sieve
from evosieve.sieve import default_pop_size

print(f"{'d':>4} {'|P| estimate':>14} {'log2 |P|':>9} {'log2 time':>10}")
for d in (10, 20, 40, 60, 80, 100, 128):
    e = estimate_complexity(d)
    print(f"{d:>4} {e.pop_size_estimate:>14.1f} {e.log2_pop:>9.2f} {e.log2_time:>10.2f}")

# %%
# The default population is five times the estimate (at least 200).  Measure
# wall time per generation of the local variant as the dimension grows: it
# follows the quadratic pair count.
print(f"\n{'d':>4} {'|P|':>6} {'gens':>5} {'ms/gen':>8} {'final |P|':>10}")
for d in (16, 20, 24, 28, 32):
    basis = generate_random_basis(d, 10 * d // 4, seed=0)
    t0 = time.perf_counter()
    res = run_sieve(basis, SieveConfig(variant="local", seed=0))
    ms = 1000 * (time.perf_counter() - t0) / len(res.trail)
    print(f"{d:>4} {default_pop_size(d):>6} {len(res.trail):>5} {ms:>8.1f} {len(res.final_population):>10}")
