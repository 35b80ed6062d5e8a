"""Lattice sieving as an evolutionary algorithm.

Two survivor-selection schemes are provided:

* local replacement (crowding): a child ``u = v - w`` that is shorter than
  its longer parent immediately takes that parent's slot;
* global selection: every improving child of the generation is pooled with
  the parents and the ``max_size`` fittest survive.

A local generation compares each pair of still-unmodified parents once; a
slot that received a child sits out the rest of that generation.  When a
child already exists in the population the longer parent is merged into it
(see ``SieveConfig.duplicate_policy``), so local populations shrink slowly.

Either scheme can be combined with mutations that add or subtract a single
basis vector to a child's coefficient vector.

The population is stored as two integer matrices (coefficients and
coordinates) plus a vector of squared norms.  Entries stay in ``int64`` while
they are small enough that inner products cannot overflow, and the arrays are
promoted to Python-int object arrays otherwise.
"""

from __future__ import annotations

import dataclasses
import enum
import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from time import perf_counter
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidParams, SamplerStarvation
from .lattice import (
    BasisMatrix,
    GramSchmidtData,
    LatticePoint,
    add_signed_basis_vector,
    gram_schmidt,
    sub_points,
)
from .reduction import DEFAULT_DELTA, as_delta, lll_reduce
from .sampling import SamplerParams, default_sigma, klein_sample, naive_sample

__all__ = [
    "Variant",
    "SieveConfig",
    "GenerationStats",
    "SieveResult",
    "Population",
    "default_pop_size",
    "reduce_pair",
    "mutate",
    "generation_local",
    "generation_global",
    "initialize_population",
    "run_sieve",
]


class Variant(str, enum.Enum):
    LOCAL = "local"
    GLOBAL = "global"
    LOCAL_MUT = "local_mut"
    GLOBAL_MUT = "global_mut"

    @property
    def is_global(self) -> bool:
        return self in (Variant.GLOBAL, Variant.GLOBAL_MUT)

    @property
    def mutates(self) -> bool:
        return self in (Variant.LOCAL_MUT, Variant.GLOBAL_MUT)


def default_pop_size(dim: int) -> int:
    """``max(200, ceil(5 * (4/3)^(d/2)))``."""
    return max(200, math.ceil(5 * (4 / 3) ** (dim / 2)))


DUPLICATE_POLICIES = ("collapse", "skip")


@dataclass(frozen=True)
class SieveConfig:
    """Run parameters.

    ``duplicate_policy`` decides what a local pass does with a child that is
    already a member: ``"collapse"`` removes the longer parent (the pair is
    merged into the existing copy and the population shrinks by one),
    ``"skip"`` leaves the pair alone.  Only collapsing guarantees that a pass
    without replacements leaves a pairwise-reduced population; skipping keeps
    the size fixed.
    """

    variant: Variant = Variant.LOCAL
    pop_size: Optional[int] = None
    mutation_rate: float = 0.1
    seed: int = 0
    max_generations: int = 1000
    stale_generations: int = 3
    sampler: SamplerParams = field(default_factory=SamplerParams)
    lll_delta: Fraction = DEFAULT_DELTA
    duplicate_policy: str = "collapse"

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.duplicate_policy not in DUPLICATE_POLICIES:
            raise InvalidParams(f"unknown duplicate_policy {self.duplicate_policy!r}")
        object.__setattr__(self, "lll_delta", as_delta(self.lll_delta))
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise InvalidParams(f"mutation_rate must lie in [0, 1], got {self.mutation_rate}")
        if self.pop_size is not None and self.pop_size < 2:
            raise InvalidParams(f"pop_size must be at least 2, got {self.pop_size}")
        if self.max_generations < 1 or self.stale_generations < 1:
            raise InvalidParams("max_generations and stale_generations must be positive")

    @property
    def effective_mutation_rate(self) -> float:
        return self.mutation_rate if self.variant.mutates else 0.0

    def resolved_pop_size(self, dim: int) -> int:
        return self.pop_size if self.pop_size is not None else default_pop_size(dim)


@dataclass(frozen=True)
class GenerationStats:
    """One row of the per-generation trail.

    ``avg_norm`` is the mean Euclidean norm (not squared) of the population
    after the generation.  ``wall_ms`` is excluded from equality so replays
    compare equal.
    """

    generation: int
    pop_size: int
    avg_norm: float
    min_norm: float
    replacements: int
    cumulative_replacements: int
    wall_ms: int = field(default=0, compare=False)


class _BestTracker:
    """Shortest point seen so far; the first one found wins ties."""

    def __init__(self):
        self.point: Optional[LatticePoint] = None

    @property
    def norm_sq(self):
        return self.point.norm_sq if self.point is not None else None

    def offer(self, p: Optional[LatticePoint]) -> None:
        if p is not None and (self.point is None or p.norm_sq < self.point.norm_sq):
            self.point = p

    def offer_rows(self, coeffs, coords, norms) -> None:
        if len(norms) == 0:
            return
        k = int(np.argmin(norms)) if norms.dtype != object else min(
            range(len(norms)), key=norms.__getitem__
        )
        if self.point is None or norms[k] < self.point.norm_sq:
            self.point = _row_point(coeffs[k], coords[k], norms[k])


def _row_point(coeffs, coords, norm_sq) -> LatticePoint:
    return LatticePoint(
        tuple(int(x) for x in coeffs), tuple(int(x) for x in coords), int(norm_sq)
    )


def _int64_limits(dim: int) -> tuple[int, int]:
    # coordinate bound keeping n_i + n_j - 2<v_i, v_j> inside int64
    coord = math.isqrt((1 << 62) // dim) // 2
    return coord, 1 << 61


def _to_object(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape, dtype=object)
    out[...] = a.tolist() if a.ndim else int(a)
    return out


class Population:
    """Deduplicated, zero-free, sign-canonical population with a size cap.

    Members keep their slot index when replaced, which is what the local
    pass relies on.  Iterating yields :class:`LatticePoint` objects.
    """

    def __init__(self, basis: BasisMatrix, max_size: int):
        if max_size < 1:
            raise InvalidParams(f"max_size must be positive, got {max_size}")
        self.basis = basis
        self.max_size = max_size
        d = basis.dim
        self._coord_limit, self._coeff_limit = _int64_limits(d)
        self.wide = basis.max_abs_entry > self._coord_limit
        dtype = object if self.wide else np.int64
        self.coeffs = np.zeros((0, d), dtype=dtype)
        self.coords = np.zeros((0, d), dtype=dtype)
        self.norms = np.zeros(0, dtype=dtype)
        self._keys: dict[tuple, int] = {}

    @classmethod
    def from_points(
        cls, basis: BasisMatrix, points: Iterable[LatticePoint], max_size: int
    ) -> "Population":
        pop = cls(basis, max_size)
        pts = list(points)
        if len(pts) > max_size:
            raise InvalidParams(f"{len(pts)} points exceed max_size {max_size}")
        pop._load(pts)
        return pop

    def _fits(self, p: LatticePoint) -> bool:
        return max(map(abs, p.coords)) <= self._coord_limit and max(
            map(abs, p.coeffs)
        ) <= self._coeff_limit

    def _load(self, pts: Sequence[LatticePoint]) -> None:
        keys = {}
        for idx, p in enumerate(pts):
            if not any(p.coords):
                raise InvalidParams("population members must be nonzero")
            if p.coeffs in keys:
                raise InvalidParams(f"duplicate member {p.coeffs}")
            if not _first_nonzero_positive(p.coeffs):
                raise InvalidParams(f"member {p.coeffs} is not sign-canonical")
            keys[p.coeffs] = idx
        if not self.wide and not all(self._fits(p) for p in pts):
            self.wide = True
        d = self.basis.dim
        dtype = object if self.wide else np.int64
        n = len(pts)
        self.coeffs = np.empty((n, d), dtype=dtype)
        self.coords = np.empty((n, d), dtype=dtype)
        self.norms = np.empty(n, dtype=dtype)
        for idx, p in enumerate(pts):
            self.coeffs[idx, :] = p.coeffs
            self.coords[idx, :] = p.coords
            self.norms[idx] = p.norm_sq
        self._keys = keys

    def promote(self) -> None:
        """Switch storage to exact Python ints."""
        if not self.wide:
            self.wide = True
            self.coeffs = _to_object(self.coeffs)
            self.coords = _to_object(self.coords)
            self.norms = _to_object(self.norms)

    def __len__(self) -> int:
        return len(self.norms)

    def __getitem__(self, i: int) -> LatticePoint:
        return _row_point(self.coeffs[i], self.coords[i], self.norms[i])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def members(self) -> list[LatticePoint]:
        return list(self)

    def __contains__(self, p: LatticePoint) -> bool:
        return p.coeffs in self._keys

    def __eq__(self, other) -> bool:
        if not isinstance(other, Population):
            return NotImplemented
        return (
            self.basis == other.basis
            and self.max_size == other.max_size
            and self.members == other.members
        )

    def replace(self, idx: int, p: LatticePoint) -> None:
        """Overwrite slot ``idx`` with ``p`` (caller checks for duplicates)."""
        if not self.wide and not self._fits(p):
            self.promote()
        old = tuple(int(x) for x in self.coeffs[idx])
        del self._keys[old]
        self._keys[p.coeffs] = idx
        self.coeffs[idx, :] = p.coeffs
        self.coords[idx, :] = p.coords
        self.norms[idx] = p.norm_sq

    def _drop_key(self, idx: int) -> None:
        """Forget the key of slot ``idx`` ahead of a :meth:`_compact`."""
        del self._keys[tuple(int(x) for x in self.coeffs[idx])]

    def _compact(self, dead: np.ndarray) -> None:
        """Delete the slots flagged in ``dead`` (their keys already dropped)."""
        if not dead.any():
            return
        keep = ~dead
        self.coeffs = self.coeffs[keep]
        self.coords = self.coords[keep]
        self.norms = self.norms[keep]
        self._keys = {tuple(int(x) for x in row): k for k, row in enumerate(self.coeffs)}

    def norms_float(self) -> np.ndarray:
        if self.wide:
            return np.array([math.sqrt(int(x)) for x in self.norms], dtype=float)
        return np.sqrt(self.norms.astype(float))

    def min_norm_sq(self) -> int:
        return int(min(self.norms)) if self.wide else int(self.norms.min())

    def summary(self) -> tuple[float, float]:
        """``(avg_norm, min_norm)`` of the current members."""
        if len(self) == 0:
            return 0.0, 0.0
        return float(np.mean(self.norms_float())), math.sqrt(self.min_norm_sq())

    def is_valid(self) -> bool:
        """Check the population invariants from scratch."""
        if len(self) > self.max_size:
            return False
        seen = set()
        for p in self:
            if p.coeffs in seen or not any(p.coords) or not _first_nonzero_positive(p.coeffs):
                return False
            if p.norm_sq != sum(x * x for x in p.coords):
                return False
            seen.add(p.coeffs)
        return seen == set(self._keys)


def _first_nonzero_positive(coeffs) -> bool:
    for c in coeffs:
        if c:
            return c > 0
    return False


@dataclass(frozen=True)
class SieveResult:
    best: LatticePoint
    final_population: Population
    trail: list[GenerationStats]
    terminated_by: str
    basis: BasisMatrix
    variant: Variant = Variant.LOCAL
    seed: int = 0


def reduce_pair(v: LatticePoint, w: LatticePoint) -> Optional[LatticePoint]:
    """Canonical ``v - w`` if it is nonzero and shorter than the longer of ``v``, ``w``."""
    u = sub_points(v, w)
    if u is None or u.norm_sq >= max(v.norm_sq, w.norm_sq):
        return None
    return u


def mutate(
    p: LatticePoint,
    basis: BasisMatrix,
    rng: np.random.Generator,
    *,
    index: Optional[int] = None,
    sign: Optional[int] = None,
) -> LatticePoint:
    """Add or subtract one uniformly chosen basis vector.

    ``index`` and ``sign`` may be forced (no randomness is then drawn for
    them).  If the result would be the zero vector, ``p`` is returned.
    """
    if index is None:
        index = int(rng.integers(basis.dim))
    if sign is None:
        sign = 1 if rng.integers(2) else -1
    q = add_signed_basis_vector(p, index, sign, basis)
    return p if q is None else q


def _stats(pop, generation, replacements, cumulative, t0) -> GenerationStats:
    avg, mn = pop.summary()
    return GenerationStats(
        generation=generation,
        pop_size=len(pop),
        avg_norm=avg,
        min_norm=mn,
        replacements=replacements,
        cumulative_replacements=cumulative + replacements,
        wall_ms=int(round((perf_counter() - t0) * 1000)),
    )


def generation_local(
    pop: Population,
    rng: np.random.Generator,
    mutation_rate: float = 0.0,
    *,
    generation: int = 0,
    cumulative: int = 0,
    tracker: Optional[_BestTracker] = None,
    duplicate_policy: str = "collapse",
) -> GenerationStats:
    """One local-replacement pass, modifying ``pop`` in place.

    Pairs ``i < j`` of unmodified parents are visited in index order.  When
    ``v_i - v_j`` is shorter than the longer parent it replaces that parent
    (the second operand on ties), and the replaced slot takes no further
    part in this generation; its new occupant is a parent from the next
    generation on.  Acceptance is judged on the unmutated child, which is
    then mutated with probability ``mutation_rate`` before insertion.
    A child that is already a member is not inserted twice.  Under the
    default ``duplicate_policy="collapse"`` the longer parent is removed
    instead, so the population can shrink, and this counts as a
    replacement; under ``"skip"`` the pair is left unchanged.
    """
    t0 = perf_counter()
    basis = pop.basis
    n = len(pop)
    replacements = 0
    modified = np.zeros(n, dtype=bool)
    dead = np.zeros(n, dtype=bool)
    for i in range(n - 1):
        if modified[i]:
            continue
        coords, norms = pop.coords, pop.norms
        ni = norms[i]
        nj = norms[i + 1 :]
        dn = ni + nj - 2 * (coords[i + 1 :] @ coords[i])
        ok = (dn < np.maximum(nj, ni)) & (dn > 0) & ~modified[i + 1 :]
        for h in np.flatnonzero(ok):
            j = i + 1 + int(h)
            child = sub_points(pop[i], pop[j])
            if tracker is not None:
                tracker.offer(child)
            if mutation_rate > 0 and rng.random() < mutation_rate:
                child = mutate(child, basis, rng)
                if tracker is not None:
                    tracker.offer(child)
            target = i if pop.norms[i] > pop.norms[j] else j
            if child in pop:
                if duplicate_policy == "skip":
                    continue
                # the child is already a member: the longer parent merges into it
                pop._drop_key(target)
                dead[target] = True
            else:
                pop.replace(target, child)
            modified[target] = True
            replacements += 1
            if target == i:
                break
    pop._compact(dead)
    return _stats(pop, generation, replacements, cumulative, t0)


def _improving_children(pop: Population, block: int = 512):
    """All canonical children ``v_i - v_j`` (i < j) shorter than their longer parent.

    Returned in row-major pair order as ``(coeffs, coords, norms)`` arrays.
    """
    C, L, N = pop.coords, pop.coeffs, pop.norms
    n = len(pop)
    rows_i, rows_j, dns = [], [], []
    for s in range(0, n, block):
        e = min(n, s + block)
        G = C[s:e] @ C.T
        DN = N[s:e, None] + N[None, :] - 2 * G
        mask = (DN < np.maximum(N[s:e, None], N[None, :])) & (DN > 0)
        mask &= np.arange(n)[None, :] > np.arange(s, e)[:, None]
        I, J = np.nonzero(mask)
        rows_i.append(I + s)
        rows_j.append(J)
        dns.append(DN[I, J])
    I = np.concatenate(rows_i) if rows_i else np.zeros(0, dtype=int)
    J = np.concatenate(rows_j) if rows_j else np.zeros(0, dtype=int)
    nc = np.concatenate(dns) if dns else np.zeros(0, dtype=N.dtype)
    cc = L[I] - L[J]
    xc = C[I] - C[J]
    if len(I):
        first = np.argmax(cc != 0, axis=1)
        neg = cc[np.arange(len(I)), first] < 0
        cc[neg] = -cc[neg]
        xc[neg] = -xc[neg]
    return cc, xc, nc


def generation_global(
    pop: Population,
    rng: np.random.Generator,
    mutation_rate: float = 0.0,
    *,
    generation: int = 0,
    cumulative: int = 0,
    tracker: Optional[_BestTracker] = None,
) -> tuple[Population, GenerationStats]:
    """Global survivor selection.

    Every improving child of the input population is a candidate (mutated
    with probability ``mutation_rate``); parents and candidates are pooled,
    deduplicated and the ``pop.max_size`` shortest survive, ties broken by
    lexicographic coefficient order.  The input population is not modified.
    """
    t0 = perf_counter()
    basis = pop.basis
    cc, xc, nc = _improving_children(pop)
    m = len(nc)
    if tracker is not None:
        tracker.offer_rows(cc, xc, nc)

    cand_keys = [tuple(r) for r in cc.tolist()]
    cand_coords = xc.tolist()
    cand_norms = [int(x) for x in nc.tolist()]
    if mutation_rate > 0 and m:
        flips = np.flatnonzero(rng.random(m) < mutation_rate)
        for k in flips:
            child = LatticePoint(cand_keys[k], tuple(cand_coords[k]), cand_norms[k])
            child = mutate(child, basis, rng)
            if tracker is not None:
                tracker.offer(child)
            cand_keys[k], cand_coords[k], cand_norms[k] = (
                child.coeffs,
                list(child.coords),
                child.norm_sq,
            )

    parent_keys = [tuple(r) for r in pop.coeffs.tolist()]
    pool = {}
    for k, key in enumerate(parent_keys):
        pool[key] = (int(pop.norms[k]), pop.coords[k].tolist(), True)
    for k, key in enumerate(cand_keys):
        if key not in pool:
            pool[key] = (cand_norms[k], cand_coords[k], False)

    chosen = sorted(pool.items(), key=lambda kv: (kv[1][0], kv[0]))[: pop.max_size]
    survivors = [LatticePoint(key, tuple(val[1]), val[0]) for key, val in chosen]
    replacements = sum(1 for _, val in chosen if not val[2])

    nxt = Population(basis, pop.max_size)
    if pop.wide:
        nxt.wide = True
    nxt._load(survivors)
    return nxt, _stats(nxt, generation, replacements, cumulative, t0)


def initialize_population(
    basis: BasisMatrix,
    config: SieveConfig,
    rng: np.random.Generator,
    gso: Optional[GramSchmidtData] = None,
) -> Population:
    """Sample distinct nonzero canonical points until the population is full.

    Raises
    ------
    SamplerStarvation
        After ``100 * pop_size`` draws without filling the population.
    """
    size = config.resolved_pop_size(basis.dim)
    params = config.sampler
    if params.kind == "klein":
        gso = gso if gso is not None else gram_schmidt(basis)
        if params.sigma is None:
            params = dataclasses.replace(
                params, sigma=default_sigma(basis, size, params.width)
            )
        cache = (gso.mu_float(), np.sqrt(gso.bstar_norm_sq_float()))

        def draw():
            return klein_sample(basis, gso, params, rng, _cache=cache)

    else:

        def draw():
            return naive_sample(basis, params.bound, rng)

    points: dict[tuple, LatticePoint] = {}
    for _ in range(100 * size):
        p = draw()
        if p is not None and p.coeffs not in points:
            points[p.coeffs] = p
            if len(points) == size:
                return Population.from_points(basis, points.values(), size)
    raise SamplerStarvation(
        f"only {len(points)} of {size} distinct points after {100 * size} draws; "
        "increase sigma or lower pop_size"
    )


def run_sieve(
    basis: BasisMatrix, config: SieveConfig, *, callback=None
) -> SieveResult:
    """LLL-reduce, sample a population and evolve it until it stops improving.

    Termination: a generation with no replacements (``"no_updates"``),
    ``stale_generations`` consecutive generations with unchanged minimum and
    average norm (``"stagnation"``), or ``max_generations``.  ``callback``,
    if given, is called as ``callback(stats, best)`` after every generation,
    where ``best`` is the shortest point created so far.
    """
    reduced = lll_reduce(basis, config.lll_delta)
    gso = gram_schmidt(reduced)
    rng = np.random.default_rng(config.seed)
    pop = initialize_population(reduced, config, rng, gso)
    tracker = _BestTracker()
    tracker.offer_rows(pop.coeffs, pop.coords, pop.norms)
    rate = config.effective_mutation_rate
    if config.variant.is_global:
        step = generation_global
    else:
        step = functools.partial(generation_local, duplicate_policy=config.duplicate_policy)

    trail: list[GenerationStats] = []
    prev = pop.summary()
    stale = 0
    cumulative = 0
    terminated_by = "max_generations"
    for g in range(1, config.max_generations + 1):
        out = step(pop, rng, rate, generation=g, cumulative=cumulative, tracker=tracker)
        if config.variant.is_global:
            pop, stats = out
        else:
            stats = out
        tracker.offer_rows(pop.coeffs, pop.coords, pop.norms)
        trail.append(stats)
        cumulative = stats.cumulative_replacements
        if callback is not None:
            callback(stats, tracker.point)
        if stats.replacements == 0:
            terminated_by = "no_updates"
            break
        cur = (stats.avg_norm, stats.min_norm)
        stale = stale + 1 if cur == prev else 0
        prev = cur
        if stale >= config.stale_generations:
            terminated_by = "stagnation"
            break
    return SieveResult(
        best=tracker.point,
        final_population=pop,
        trail=trail,
        terminated_by=terminated_by,
        basis=reduced,
        variant=config.variant,
        seed=config.seed,
    )
