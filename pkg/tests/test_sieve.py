import itertools

import numpy as np
import pytest
from scipy import stats

from evosieve import (
    InvalidParams,
    Population,
    SamplerParams,
    SamplerStarvation,
    SieveConfig,
    Variant,
    build_basis,
    generation_global,
    generation_local,
    initialize_population,
    lll_reduce,
    make_point,
    mutate,
    reduce_pair,
    run_sieve,
)
from evosieve.sieve import default_pop_size

from conftest import identity, matvec_coords


def pop_of(basis, coeff_list, cap=None):
    pts = [make_point(basis, c) for c in coeff_list]
    return Population.from_points(basis, pts, cap or len(pts))


def pairwise_reduced(pop):
    pts = pop.members
    for v, w in itertools.combinations(pts, 2):
        diff = [a - b for a, b in zip(v.coords, w.coords)]
        if sum(x * x for x in diff) < max(v.norm_sq, w.norm_sq):
            return False
    return True


class TestReducePair:
    def test_accepted(self):
        B = identity(2)
        u = reduce_pair(make_point(B, (2, 0)), make_point(B, (1, 1)))
        assert u.coords == (1, -1) and u.norm_sq == 2

    def test_same_point(self):
        p = make_point(identity(2), (1, 1))
        assert reduce_pair(p, p) is None

    def test_orthogonal_rejected(self):
        B = identity(2)
        assert reduce_pair(make_point(B, (1, 0)), make_point(B, (0, 1))) is None


class TestMutate:
    def test_forced(self):
        B = identity(2)
        q = mutate(make_point(B, (1, 0)), B, np.random.default_rng(0), index=1, sign=-1)
        assert q.coeffs == (1, -1)

    def test_zero_guard(self):
        B = build_basis([[3, 1], [1, 2]])
        p = make_point(B, (1, 0))
        assert mutate(p, B, np.random.default_rng(0), index=0, sign=-1) is p

    def test_index_histogram_uniform(self):
        d = 8
        B = identity(d)
        rng = np.random.default_rng(99)
        p = make_point(B, (3,) * d)
        counts = np.zeros(d)
        for _ in range(10_000):
            q = mutate(p, B, rng)
            counts[int(np.flatnonzero(np.array(q.coeffs) != 3)[0])] += 1
        assert stats.chisquare(counts).pvalue > 0.01


class TestLocal:
    def test_hand_trace(self):
        B = identity(2)
        pop = pop_of(B, [(2, 0), (1, 1)])
        s = generation_local(pop, np.random.default_rng(0))
        assert set(p.coords for p in pop) == {(1, -1), (1, 1)}
        assert s.replacements == 1

    def test_fixed_point(self):
        B = identity(3)
        pop = pop_of(B, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        before = pop.members
        s = generation_local(pop, np.random.default_rng(0))
        assert s.replacements == 0 and pop.members == before

    def test_zero_replacements_means_pairwise_reduced(self, knapsack):
        B = lll_reduce(knapsack(12, 30, 0))
        pop = initialize_population(B, SieveConfig(pop_size=120, seed=1), np.random.default_rng(1))
        rng = np.random.default_rng(2)
        for _ in range(200):
            if generation_local(pop, rng).replacements == 0:
                break
        else:
            pytest.fail("local passes did not reach a fixed point")
        assert pairwise_reduced(pop)
        assert pop.is_valid()

    def test_duplicate_child_collapses(self):
        # (2,0) - (1,0) = (1,0) is already present, so (2,0) merges into it
        B = identity(2)
        pop = pop_of(B, [(1, 0), (2, 0), (0, 1)])
        s = generation_local(pop, np.random.default_rng(0))
        assert s.replacements == 1 and s.pop_size == 2
        assert set(p.coords for p in pop) == {(1, 0), (0, 1)}
        assert pop.is_valid()

    def test_skip_policy_keeps_size(self):
        B = identity(2)
        pop = pop_of(B, [(1, 0), (2, 0), (0, 1)])
        s = generation_local(pop, np.random.default_rng(0), duplicate_policy="skip")
        assert s.replacements == 0 and len(pop) == 3

    def test_skip_policy_average_monotone(self, knapsack):
        res = run_sieve(knapsack(12, 30, 1), SieveConfig(pop_size=150, duplicate_policy="skip"))
        avg = [t.avg_norm for t in res.trail]
        assert all(b <= a for a, b in zip(avg, avg[1:]))
        assert all(t.pop_size == 150 for t in res.trail)

    def test_collapse_policy_reaches_pairwise_reduced(self, knapsack):
        res = run_sieve(knapsack(12, 30, 1), SieveConfig(pop_size=150))
        assert res.terminated_by == "no_updates"
        assert pairwise_reduced(res.final_population)
        assert len(res.final_population) < 150

    def test_replaced_slot_sits_out(self):
        # (2,0) turns (3,0) into (1,0) and (2,1) into (0,1).  The new (1,0)
        # would shorten (2,0) as well, but replaced slots wait for the next pass
        B = identity(2)
        pop = pop_of(B, [(2, 0), (3, 0), (2, 1)])
        s = generation_local(pop, np.random.default_rng(0))
        assert [p.coords for p in pop] == [(2, 0), (1, 0), (0, 1)]
        assert s.replacements == 2
        generation_local(pop, np.random.default_rng(0))
        assert {p.coords for p in pop} == {(1, 0), (0, 1)}


class TestGlobal:
    def test_hand_trace(self):
        B = identity(2)
        pop = pop_of(B, [(2, 0), (1, 1)])
        nxt, s = generation_global(pop, np.random.default_rng(0))
        assert set(p.coords for p in nxt) == {(1, 1), (1, -1)}
        assert s.replacements == 1
        # input untouched
        assert set(p.coords for p in pop) == {(2, 0), (1, 1)}

    def test_fixed_point(self):
        B = identity(3)
        pop = pop_of(B, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        nxt, s = generation_global(pop, np.random.default_rng(0))
        assert s.replacements == 0
        assert set(nxt.members) == set(pop.members)

    @pytest.mark.parametrize("rate", [0.0, 0.3, 1.0])
    def test_average_never_increases(self, rate, knapsack):
        B = lll_reduce(knapsack(14, 35, 3))
        pop = initialize_population(B, SieveConfig(pop_size=150), np.random.default_rng(4))
        rng = np.random.default_rng(5)
        for _ in range(5):
            avg_before = pop.summary()[0]
            pop, s = generation_global(pop, rng, rate)
            assert s.avg_norm <= avg_before + 1e-9
            assert pop.is_valid()


class TestInitialize:
    def test_structure(self, knapsack):
        B = lll_reduce(knapsack(10, 25, 6))
        pop = initialize_population(B, SieveConfig(pop_size=100), np.random.default_rng(0))
        assert len(pop) == 100 and pop.is_valid()
        for p in pop:
            assert p.coords == matvec_coords(B, p.coeffs)

    def test_starvation(self, knapsack):
        B = lll_reduce(knapsack(10, 25, 6))
        cfg = SieveConfig(pop_size=50, sampler=SamplerParams(sigma=1e-6))
        with pytest.raises(SamplerStarvation):
            initialize_population(B, cfg, np.random.default_rng(0))

    def test_naive_sampler(self):
        B = identity(4)
        cfg = SieveConfig(pop_size=30, sampler=SamplerParams(kind="naive", bound=2))
        pop = initialize_population(B, cfg, np.random.default_rng(0))
        assert len(pop) == 30 and pop.is_valid()


class TestRunSieve:
    @pytest.mark.parametrize("variant", list(Variant))
    def test_two_dim(self, variant):
        B = build_basis([[7, 0], [3, 1]])
        cfg = SieveConfig(variant=variant, pop_size=50, max_generations=50,
                          sampler=SamplerParams(kind="naive", bound=10))
        res = run_sieve(B, cfg)
        assert res.best.norm_sq == 5

    def test_two_dim_default_sampler(self):
        res = run_sieve(build_basis([[7, 0], [3, 1]]), SieveConfig(pop_size=10))
        assert res.best.norm_sq == 5

    def test_deterministic(self, knapsack):
        B = knapsack(14, 35, 2)
        cfg = SieveConfig(variant="local_mut", pop_size=120, seed=3, max_generations=15)
        a, b = run_sieve(B, cfg), run_sieve(B, cfg)
        assert a == b
        assert a.trail == b.trail and a.final_population == b.final_population

    def test_seed_matters(self, knapsack):
        B = knapsack(14, 35, 2)
        a = run_sieve(B, SieveConfig(pop_size=120, seed=1))
        b = run_sieve(B, SieveConfig(pop_size=120, seed=2))
        assert a.trail != b.trail

    def test_callback_sees_every_generation(self, knapsack):
        seen = []
        res = run_sieve(knapsack(10, 25, 0), SieveConfig(pop_size=60),
                        callback=lambda s, best: seen.append((s.generation, best.norm_sq)))
        assert [g for g, _ in seen] == [s.generation for s in res.trail]
        assert seen[-1][1] == res.best.norm_sq

    def test_termination_reasons(self, knapsack):
        B = knapsack(10, 25, 0)
        assert run_sieve(B, SieveConfig(pop_size=60)).terminated_by in ("no_updates", "stagnation")
        capped = run_sieve(B, SieveConfig(variant="local_mut", pop_size=60, max_generations=3))
        assert capped.terminated_by == "max_generations" and len(capped.trail) == 3

    def test_best_is_in_lattice(self, knapsack):
        res = run_sieve(knapsack(12, 30, 9), SieveConfig(pop_size=100))
        assert res.best.coords == matvec_coords(res.basis, res.best.coeffs)
        assert res.best.norm_sq <= res.final_population.min_norm_sq()


def test_unknown_duplicate_policy():
    with pytest.raises(InvalidParams):
        SieveConfig(duplicate_policy="keep")


class TestPopulation:
    def test_rejects_duplicates_and_zero(self):
        B = identity(2)
        p = make_point(B, (1, 0))
        with pytest.raises(InvalidParams):
            Population.from_points(B, [p, p], 5)

    def test_rejects_overflowing_cap(self):
        B = identity(2)
        with pytest.raises(InvalidParams):
            pop_of(B, [(1, 0), (0, 1), (1, 1)], cap=2)

    def test_wide_entries_use_exact_ints(self):
        big = 2**80
        B = build_basis([[big, 0, 0], [big - 1, 1, 0], [3, 5, 1]])
        pop = pop_of(B, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)])
        assert pop.wide and pop.coords.dtype == object
        generation_local(pop, np.random.default_rng(0))
        assert pop.is_valid()
        nxt, _ = generation_global(pop, np.random.default_rng(0))
        assert nxt.is_valid()

    def test_promotion_on_large_child(self):
        B = identity(2)
        pop = pop_of(B, [(1, 0), (0, 1)])
        assert not pop.wide
        pop.replace(0, make_point(B, (2**40, 1)))
        assert pop.wide and pop.is_valid()
        assert pop[0].norm_sq == 2**80 + 1

    def test_int64_and_object_paths_agree(self, knapsack):
        B = lll_reduce(knapsack(10, 25, 3))
        pop = initialize_population(B, SieveConfig(pop_size=80), np.random.default_rng(0))
        wide = Population.from_points(B, pop.members, pop.max_size)
        wide.promote()
        rng1, rng2 = np.random.default_rng(1), np.random.default_rng(1)
        for _ in range(3):
            generation_local(pop, rng1, 0.2)
            generation_local(wide, rng2, 0.2)
        assert pop.members == wide.members


def test_default_pop_size():
    assert default_pop_size(10) == 200
    assert default_pop_size(40) == 1577
