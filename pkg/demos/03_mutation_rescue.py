"""
When mutation rescues a stuck population
========================================

Global selection converges fast, and sometimes to a population whose
shortest member is not the shortest lattice vector.  Adding a small
mutation rate lets it escape.  This script scans seeded instances for such
a case and re-runs the mutated variant on it.  The instance it finds first
is the one stored in ``tests/fixtures/mutation_rescue.json``.
"""

# %%
import sys

from evosieve import SieveConfig, enumerate_svp, generate_random_basis, run_sieve

dims = range(20, 31) if len(sys.argv) < 2 else [int(a) for a in sys.argv[1:]]
SEEDS = range(10)

# %%
# Scan: global variant with rate 0, compared with exact enumeration.
found = None
for d in dims:
    bits = 10 * d // 4
    for s in SEEDS:
        basis = generate_random_basis(d, bits, s)
        res = run_sieve(basis, SieveConfig(variant="global", seed=s))
        opt = enumerate_svp(res.basis).norm_sq
        if res.best.norm_sq > opt:
            print(f"d={d} seed={s}: global stopped at {res.best.norm_sq}, optimum {opt}")
            found = (d, bits, s, opt)
            break
    if found:
        break

# %%
# Rescue: the same instance with mutation rate 0.1 over five run seeds.
if found is None:
    print("no stuck instance in the scanned range")
else:
    d, bits, s, opt = found
    basis = generate_random_basis(d, bits, s)
    for seed in range(5):
        res = run_sieve(basis, SieveConfig(variant="global_mut", seed=seed, mutation_rate=0.1))
        tag = "optimum" if res.best.norm_sq == opt else "not optimal"
        print(f"  global_mut seed {seed}: best {res.best.norm_sq} ({tag})")
