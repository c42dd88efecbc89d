"""Generation-step operators and multi-generation trajectories.

Two families of operators, kept deliberately separate because their
conservation properties differ:

* ``shuffle_pair_mating`` mechanizes the classroom chip protocol: all 2N
  allele tokens are shuffled and paired WITHOUT replacement, so allele
  counts are conserved exactly and only the genotype partition is random.
* ``wright_fisher_step`` resamples 2n gametes WITH replacement from the
  current frequencies (the canonical drift model), so frequencies random-walk
  until fixation.

Viability selection and one-island migrant admixture complete the stochastic
chains; ``deterministic_step`` provides the matching infinite-population
recurrences used by the automated mode and as analytic test oracles.

Every stochastic draw for generation t comes from the sub-stream
``substream(seed, t)``, which makes trajectories reproducible and lets a
reloaded session continue exactly where it stopped.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyPopulationError,
    ExtinctionError,
    MeanFitnessZeroError,
    NotNormalizedError,
    OddPoolError,
    ValidationError,
)
from .genetics import (
    AlleleFrequencies,
    GenotypeCounts,
    estimate_gene_counting,
    hw_counts_from_frequency,
)
from .rng import MAX_SEED, substream


class ExperimentKind(str, enum.Enum):
    """The six model experiments (two ideal-population variants, three
    microevolution factors, and the fully automated mode)."""

    IDEAL_SQRT = "ideal_sqrt"
    IDEAL_COUNTING = "ideal_counting"
    SELECTION = "selection"
    GENE_FLOW = "gene_flow"
    DRIFT = "drift"
    AUTOMATED = "automated"


#: Kinds whose stochastic dynamics absorb at p = 0 or p = 1 (no force can
#: reintroduce a lost allele). Gene flow is excluded: migrants can rescue a
#: fixed population. The ideal kinds conserve allele counts, so a
#: polymorphic start can never absorb and a monomorphic start is still a
#: valid (constant) chip experiment.
ABSORBING_KINDS = frozenset({ExperimentKind.DRIFT, ExperimentKind.SELECTION})

IDEAL_KINDS = frozenset(
    {ExperimentKind.IDEAL_SQRT, ExperimentKind.IDEAL_COUNTING, ExperimentKind.AUTOMATED}
)

STOCHASTIC = "stochastic"
DETERMINISTIC = "deterministic"

STATUS_COMPLETED = "completed"
STATUS_FIXED = "fixed"
STATUS_LOST = "lost"
STATUS_EXTINCT = "extinct"


@dataclass(frozen=True)
class GametePool:
    """The multiset of allele tokens (chips) one generation contributes."""

    nA: int
    na: int

    def __post_init__(self):
        if self.nA < 0 or self.na < 0:
            raise ValidationError({"pool": "token counts must be >= 0"})

    @property
    def total(self) -> int:
        return self.nA + self.na


@dataclass(frozen=True)
class SimulationParams:
    """Configuration for a trajectory or session.

    Parameters irrelevant to ``kind`` are ignored by the operators but are
    still range-validated. ``fitness`` holds absolute viabilities
    (wAA, wAa, waa) in [0, 1]; a selection coefficient s corresponds to
    w = 1 - s. ``p0`` is the starting dominant-allele frequency for runs
    that begin from a frequency instead of entered counts (automated mode,
    CLI). ``mode`` selects finite-population sampling ("stochastic") or the
    infinite-population recurrences ("deterministic").
    """

    kind: ExperimentKind
    n: int = 50
    fitness: tuple[float, float, float] = (1.0, 1.0, 1.0)
    migration_rate: float = 0.0
    migrant_freq: float = 0.5
    generations: int = 1
    seed: int = 0
    mode: str = STOCHASTIC
    p0: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ExperimentKind(self.kind))
        object.__setattr__(self, "fitness", tuple(float(w) for w in self.fitness))
        errors: dict[str, str] = {}
        if not isinstance(self.n, int) or self.n < 1:
            errors["n"] = f"must be an integer >= 1, got {self.n}"
        if len(self.fitness) != 3:
            errors["fitness"] = "must be a (wAA, wAa, waa) triple"
        else:
            for name, w in zip(("wAA", "wAa", "waa"), self.fitness):
                if not (0.0 <= w <= 1.0):
                    errors[f"fitness.{name}"] = f"must be in [0, 1], got {w}"
        if not (0.0 <= self.migration_rate <= 1.0):
            errors["migration_rate"] = f"must be in [0, 1], got {self.migration_rate}"
        if not (0.0 <= self.migrant_freq <= 1.0):
            errors["migrant_freq"] = f"must be in [0, 1], got {self.migrant_freq}"
        if not isinstance(self.generations, int) or self.generations < 1:
            errors["generations"] = f"must be an integer >= 1, got {self.generations}"
        if not isinstance(self.seed, int) or not (0 <= self.seed <= MAX_SEED):
            errors["seed"] = "must be an unsigned 64-bit integer"
        if self.mode not in (STOCHASTIC, DETERMINISTIC):
            errors["mode"] = f"must be '{STOCHASTIC}' or '{DETERMINISTIC}', got {self.mode!r}"
        if self.p0 is not None and not (0.0 <= self.p0 <= 1.0):
            errors["p0"] = f"must be in [0, 1], got {self.p0}"
        if errors:
            raise ValidationError(errors)


@dataclass(frozen=True)
class TrajectoryPoint:
    """One generation of a trajectory. ``freqs`` is None only on the
    terminal point of an extinct run (there is nothing left to count)."""

    t: int
    counts: GenotypeCounts
    freqs: AlleleFrequencies | None


@dataclass(frozen=True)
class Trajectory:
    """An ordered run of generations plus its terminal status.

    ``status`` is "completed" when all requested generations ran, or
    "fixed" / "lost" / "extinct" when the run truncated at an absorbing
    event; ``absorbed_at`` is the generation index of that event.
    """

    params: SimulationParams
    points: tuple[TrajectoryPoint, ...]
    status: str = STATUS_COMPLETED
    absorbed_at: int | None = None


def build_gamete_pool(counts: GenotypeCounts) -> GametePool:
    """Pool of allele tokens contributed by a generation: nA = 2 AA + Aa."""
    counts.require_nonempty()
    return GametePool(nA=counts.dominant_alleles, na=counts.recessive_alleles)


def shuffle_pair_mating(pool: GametePool, rng: np.random.Generator) -> GenotypeCounts:
    """Pair all tokens of the pool uniformly at random, without replacement.

    A uniformly random perfect matching of the 2N tokens into N offspring.
    Allele counts are conserved exactly: the output always rebuilds the input
    pool (2 AA' + Aa' = nA and 2 aa' + Aa' = na).
    """
    total = pool.total
    if total < 2:
        raise EmptyPopulationError("pool needs at least 2 tokens")
    if total % 2 != 0:
        raise OddPoolError(f"cannot pair an odd pool of {total} tokens")
    tokens = np.zeros(total, dtype=np.int8)
    tokens[: pool.nA] = 1
    rng.shuffle(tokens)
    pair_sums = tokens.reshape(-1, 2).sum(axis=1)
    return GenotypeCounts(
        AA=int(np.count_nonzero(pair_sums == 2)),
        Aa=int(np.count_nonzero(pair_sums == 1)),
        aa=int(np.count_nonzero(pair_sums == 0)),
    )


def wright_fisher_step(
    freqs: AlleleFrequencies, n: int, rng: np.random.Generator
) -> GenotypeCounts:
    """Resample n offspring from the gamete cloud at the given frequencies.

    2n gametes are drawn independently with replacement (each A with
    probability p) and paired sequentially, which is the same distribution as
    drawing each individual AA/Aa/aa with probabilities p^2, 2pq, q^2; the
    multinomial form is used here.
    """
    if not freqs.normalized:
        raise NotNormalizedError("wright_fisher_step requires normalized frequencies")
    if n < 1:
        raise EmptyPopulationError("offspring size must be >= 1")
    p = freqs.p
    q = 1.0 - p
    draws = rng.multinomial(n, (p * p, 2.0 * p * q, q * q))
    return GenotypeCounts(AA=int(draws[0]), Aa=int(draws[1]), aa=int(draws[2]))


def apply_selection(
    counts: GenotypeCounts,
    fitness: tuple[float, float, float],
    rng: np.random.Generator | None = None,
    mode: str = STOCHASTIC,
) -> GenotypeCounts:
    """Viability selection: cull each genotype class by its fitness.

    Stochastic mode: each individual of genotype G survives independently
    with probability wG. Deterministic mode: survivor counts are
    round(wG * countG) with round-half-to-even (no systematic bias across
    generations). The returned counts are the breeding population.
    """
    counts.require_nonempty()
    for name, w in zip(("wAA", "wAa", "waa"), fitness):
        if not (0.0 <= w <= 1.0):
            raise ValidationError({f"fitness.{name}": f"must be in [0, 1], got {w}"})
    wAA, wAa, waa = fitness
    if mode == DETERMINISTIC:
        survivors = GenotypeCounts(
            AA=round(wAA * counts.AA), Aa=round(wAa * counts.Aa), aa=round(waa * counts.aa)
        )
    elif mode == STOCHASTIC:
        if rng is None:
            raise ValidationError({"rng": "stochastic selection needs a generator"})
        survivors = GenotypeCounts(
            AA=int(rng.binomial(counts.AA, wAA)),
            Aa=int(rng.binomial(counts.Aa, wAa)),
            aa=int(rng.binomial(counts.aa, waa)),
        )
    else:
        raise ValidationError({"mode": f"unknown selection mode {mode!r}"})
    if survivors.n == 0:
        raise ExtinctionError()
    return survivors


def apply_migration(
    freqs: AlleleFrequencies, migration_rate: float, migrant_freq: float
) -> AlleleFrequencies:
    """One-island admixture: p' = (1 - m) p + m pm."""
    if not freqs.normalized:
        raise NotNormalizedError("apply_migration requires normalized frequencies")
    errors = {}
    if not (0.0 <= migration_rate <= 1.0):
        errors["migration_rate"] = f"must be in [0, 1], got {migration_rate}"
    if not (0.0 <= migrant_freq <= 1.0):
        errors["migrant_freq"] = f"must be in [0, 1], got {migrant_freq}"
    if errors:
        raise ValidationError(errors)
    p = (1.0 - migration_rate) * freqs.p + migration_rate * migrant_freq
    p = min(1.0, max(0.0, p))
    return AlleleFrequencies(p=p, q=1.0 - p, normalized=True)


def deterministic_step(freqs: AlleleFrequencies, params: SimulationParams) -> AlleleFrequencies:
    """One generation of the kind's infinite-population recurrence.

    Ideal and automated kinds are the identity (Hardy-Weinberg equilibrium).
    Selection uses p' = p (wAA p + wAa q) / w_bar with
    w_bar = wAA p^2 + wAa 2pq + waa q^2. Gene flow is the admixture formula.
    Drift has no deterministic form: the frequencies are returned unchanged
    and a warning is emitted.
    """
    if not freqs.normalized:
        raise NotNormalizedError("deterministic_step requires normalized frequencies")
    kind = params.kind
    if kind in IDEAL_KINDS:
        return freqs
    if kind is ExperimentKind.DRIFT:
        warnings.warn(
            "genetic drift has no deterministic recurrence; frequencies returned unchanged",
            stacklevel=2,
        )
        return freqs
    if kind is ExperimentKind.GENE_FLOW:
        return apply_migration(freqs, params.migration_rate, params.migrant_freq)
    # selection
    wAA, wAa, waa = params.fitness
    p, q = freqs.p, 1.0 - freqs.p
    w_bar = wAA * p * p + wAa * 2.0 * p * q + waa * q * q
    if w_bar == 0.0:
        raise MeanFitnessZeroError()
    p_next = p * (wAA * p + wAa * q) / w_bar
    p_next = min(1.0, max(0.0, p_next))
    return AlleleFrequencies(p=p_next, q=1.0 - p_next, normalized=True)


def _step_stochastic(
    counts: GenotypeCounts, params: SimulationParams, rng: np.random.Generator
) -> GenotypeCounts:
    """One stochastic generation following the kind's operator chain."""
    kind = params.kind
    if kind in IDEAL_KINDS:
        return shuffle_pair_mating(build_gamete_pool(counts), rng)
    if kind is ExperimentKind.SELECTION:
        survivors = apply_selection(counts, params.fitness, rng, mode=STOCHASTIC)
        return shuffle_pair_mating(build_gamete_pool(survivors), rng)
    if kind is ExperimentKind.GENE_FLOW:
        mixed = apply_migration(
            estimate_gene_counting(counts), params.migration_rate, params.migrant_freq
        )
        return wright_fisher_step(mixed, counts.n, rng)
    # drift
    return wright_fisher_step(estimate_gene_counting(counts), counts.n, rng)


def _absorption_status(kind: ExperimentKind, freqs: AlleleFrequencies) -> str | None:
    if kind in ABSORBING_KINDS:
        if freqs.p == 1.0:
            return STATUS_FIXED
        if freqs.p == 0.0:
            return STATUS_LOST
    return None


def run_trajectory(parental: GenotypeCounts, params: SimulationParams) -> Trajectory:
    """Run the kind's chain for params.generations, starting from parental.

    Generation 0 is the parental population itself. Identical
    (parental, params) always reproduce the identical trajectory: generation
    t draws only from substream(params.seed, t). The run truncates with a
    terminal status at extinction, or at fixation/loss for the absorbing
    kinds (drift, selection); other kinds run to the requested length.
    """
    parental.require_nonempty()
    f0 = estimate_gene_counting(parental)
    if params.mode == DETERMINISTIC:
        return _deterministic_trajectory(parental, f0, params)

    points = [TrajectoryPoint(t=0, counts=parental, freqs=f0)]
    status = _absorption_status(params.kind, f0)
    if status is not None:
        return Trajectory(params=params, points=tuple(points), status=status, absorbed_at=0)

    counts = parental
    status, absorbed_at = STATUS_COMPLETED, None
    for t in range(1, params.generations + 1):
        rng = substream(params.seed, t)
        try:
            counts = _step_stochastic(counts, params, rng)
        except ExtinctionError:
            points.append(TrajectoryPoint(t=t, counts=GenotypeCounts(0, 0, 0), freqs=None))
            status, absorbed_at = STATUS_EXTINCT, t
            break
        freqs = estimate_gene_counting(counts)
        points.append(TrajectoryPoint(t=t, counts=counts, freqs=freqs))
        hit = _absorption_status(params.kind, freqs)
        if hit is not None:
            status, absorbed_at = hit, t
            break
    return Trajectory(params=params, points=tuple(points), status=status, absorbed_at=absorbed_at)


def run_trajectory_from_frequency(p0: float, params: SimulationParams) -> Trajectory:
    """Run a trajectory whose parental generation is built from a frequency.

    Stochastic mode rounds (p^2 n, 2pq n, q^2 n) to the nearest integer
    ledger row and proceeds from those counts. Deterministic mode tracks the
    exact p0 (the rounded counts are presentation only), so analytic
    recurrences come out exact.
    """
    parental = hw_counts_from_frequency(p0, params.n)
    if params.mode == DETERMINISTIC:
        f0 = AlleleFrequencies(p=p0, q=1.0 - p0, normalized=True)
        return _deterministic_trajectory(parental, f0, params)
    return run_trajectory(parental, params)


def _deterministic_trajectory(
    parental: GenotypeCounts, f0: AlleleFrequencies, params: SimulationParams
) -> Trajectory:
    """Iterate the infinite-population recurrence.

    The frequency track is exact; the counts of each point are the
    largest-remainder rounding of the HW proportions at that frequency,
    kept only so deterministic runs still render as ledger rows.
    """
    n = parental.n
    points = [TrajectoryPoint(t=0, counts=parental, freqs=f0)]
    freqs = f0
    status, absorbed_at = STATUS_COMPLETED, None
    for t in range(1, params.generations + 1):
        try:
            freqs = deterministic_step(freqs, params)
        except MeanFitnessZeroError:
            points.append(TrajectoryPoint(t=t, counts=GenotypeCounts(0, 0, 0), freqs=None))
            status, absorbed_at = STATUS_EXTINCT, t
            break
        points.append(
            TrajectoryPoint(t=t, counts=hw_counts_from_frequency(freqs.p, n), freqs=freqs)
        )
    return Trajectory(params=params, points=tuple(points), status=status, absorbed_at=absorbed_at)
