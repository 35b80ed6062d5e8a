"""
Four flavours of evolutionary sieving
=====================================

The same lattice is sieved with local replacement and with global
selection, each with and without mutation.  The per-generation statistics
are written as CSV files next to this script (``output/``), and plotted if
matplotlib happens to be installed.
"""

# %%
import math
from pathlib import Path

from evosieve import (
    SieveConfig,
    enumerate_svp,
    gaussian_heuristic,
    generate_random_basis,
    run_sieve,
    write_stats_csv,
)

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

basis = generate_random_basis(30, 75, seed=3)

# %%
# Run the four variants from the same seed.  ``run_sieve`` LLL-reduces the
# basis, draws the initial population with Klein's sampler and iterates
# generations until nothing changes any more.
results = {}
for variant in ("local", "global", "local_mut", "global_mut"):
    res = run_sieve(basis, SieveConfig(variant=variant, seed=1, mutation_rate=0.1))
    write_stats_csv(res, OUT / f"{variant}.csv")
    results[variant] = res

opt = enumerate_svp(results["local"].basis)
gh = gaussian_heuristic(basis)
print(f"shortest vector norm {opt.norm:.3f}, Gaussian heuristic {gh:.3f}\n")
print(f"{'variant':<11} {'gens':>4} {'stop':<11} {'final |P|':>9} {'best':>8} {'avg':>8}")
for name, res in results.items():
    last = res.trail[-1]
    print(
        f"{name:<11} {len(res.trail):>4} {res.terminated_by:<11} {last.pop_size:>9} "
        f"{res.best.norm:>8.3f} {last.avg_norm:>8.3f}"
    )

# %%
# Global selection keeps every improving child of a generation and is done
# in far fewer generations.  With mutation, local replacement no longer makes
# monotone progress: mutated children may be longer than the parent they
# displaced.
for name, res in results.items():
    avg = [s.avg_norm for s in res.trail]
    ups = sum(b > a for a, b in zip(avg, avg[1:]))
    print(f"{name:<11} average norm went up in {ups} of {len(avg) - 1} generations")

# %%
# Optional figure: average and minimum norm per generation.
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharex=True)
    for name, res in results.items():
        g = [s.generation for s in res.trail]
        axes[0].plot(g, [s.avg_norm for s in res.trail], label=name)
        axes[1].plot(g, [s.min_norm for s in res.trail], label=name)
    axes[0].set_title("average norm")
    axes[1].set_title("minimum norm")
    axes[1].axhline(opt.norm, color="k", lw=0.8, ls="--")
    for ax in axes:
        ax.set_xlabel("generation")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(OUT / "variants.png", dpi=120)
    print("figure written to", OUT / "variants.png")
